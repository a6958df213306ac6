"""Delsarte quasismooth good pairs of K3 complete intersections in P(w1..w5).

For a vector (m, n, w1..w5) we list the two-part GNPs of the anticanonical
polytope of P(w) whose blocks have degrees (m, n), then choose vertex
monomials for g_1, g_2 (7 in total, including the marked ones) and keep the
quasismooth Delsarte good pairs, up to permutations of variables of equal
weight.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import gcd
from typing import Sequence

from .goodpairs import GoodPairError, dual_good_pair, equations_from_pair, is_delsarte, pair_from_equations
from .linalg import nullspace
from .nef import all_gnps, is_irreducible, nef_divisors
from .regularity import is_quasismooth_ci, is_well_formed, qs_counting_s2
from .toric import CoxSystem, Monomial, ToricAmbient


def format_monomial(e: Sequence[int], var: str = "x") -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"{var}{i + 1}")
        elif k > 1:
            parts.append(f"{var}{i + 1}^{k}")
    return "".join(parts) or "1"


def format_polynomial(monos: Sequence[Sequence[int]], var: str = "x") -> str:
    return " + ".join(format_monomial(m, var) for m in monos)


@dataclass
class ClassifiedPair:
    vector: tuple[int, ...]
    g1: tuple[Monomial, ...]
    g2: tuple[Monomial, ...]
    marked: tuple[Monomial, Monomial]
    irreducible: bool
    well_formed: bool
    inner_blocks: tuple[tuple[int, ...], ...] = ()
    outer_blocks: tuple[tuple[int, ...], ...] = ()
    quasismooth: bool = True
    dual_rays: tuple[tuple[int, ...], ...] = ()
    dual_weights: tuple[int, ...] | None = None
    dual_free_gradings: tuple[tuple[int, ...], ...] = ()
    dual_quotients: tuple[tuple[int, tuple[int, ...]], ...] = ()
    dual_g1: tuple[Monomial, ...] = ()
    dual_g2: tuple[Monomial, ...] = ()
    dual_quasismooth: bool | None = None
    dual_irreducible: bool | None = None
    extra: dict = field(default_factory=dict)

    @property
    def pair_id(self) -> str:
        return pair_id(self.vector, (self.g1, self.g2))

    def as_row(self) -> dict:
        return {
            "vector": " ".join(map(str, self.vector)),
            "degrees": f"{self.vector[0]} {self.vector[1]}",
            "pair_id": self.pair_id,
            "inner_blocks": "|".join(",".join(map(str, b)) for b in self.inner_blocks),
            "outer_blocks": "|".join(",".join(map(str, b)) for b in self.outer_blocks),
            "quasismooth": self.quasismooth,
            "g1": format_polynomial(self.g1),
            "g2": format_polynomial(self.g2),
            "irreducible": self.irreducible,
            "well_formed": self.well_formed,
            "dual_weights": "" if self.dual_weights is None else " ".join(map(str, self.dual_weights)),
            "dual_free_gradings": ";".join(" ".join(map(str, r)) for r in self.dual_free_gradings),
            "dual_quotients": ";".join(f"1/{k}({','.join(map(str, a))})" for k, a in self.dual_quotients),
            "dual_g1": format_polynomial(self.dual_g1, "y"),
            "dual_g2": format_polynomial(self.dual_g2, "y"),
            "dual_quasismooth": self.dual_quasismooth,
            "dual_irreducible": self.dual_irreducible,
        }


def pair_id(vector: Sequence[int], supports: Sequence[Sequence[Sequence[int]]]) -> str:
    """Short content hash of a pair given in canonical variable order."""
    blob = json.dumps([list(vector), [[list(m) for m in sup] for sup in supports]], separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _weight_perms(weights: Sequence[int]) -> list[tuple[int, ...]]:
    r = len(weights)
    return [p for p in permutations(range(r)) if all(weights[p[i]] == weights[i] for i in range(r))]


def _apply(perm: Sequence[int], m: Sequence[int]) -> Monomial:
    out = [0] * len(m)
    for i, e in enumerate(m):
        out[perm[i]] = e
    return tuple(out)


def canonical_form(perms, supports: Sequence[Sequence[Monomial]]):
    """The lexicographically least relabelling of the supports, and a permutation achieving it."""
    return min((tuple(tuple(sorted(_apply(p, m) for m in sup)) for sup in supports), tuple(p)) for p in perms)


def canonical_key(perms, supports: Sequence[Sequence[Monomial]]):
    return canonical_form(perms, supports)[0]


def _var_signature(monos: Sequence[Monomial], r: int) -> tuple:
    """Per variable k: (has a pure power of x_k, mask of i with x_k^a x_i present)."""
    sig = []
    for k in range(r):
        pure = False
        targets = 0
        for m in monos:
            others = [i for i in range(r) if i != k and m[i]]
            if not others and m[k]:
                pure = True
            elif len(others) == 1 and m[others[0]] == 1:
                targets |= 1 << others[0]
        sig.append((pure, targets))
    return tuple(sig)


def _singletons_ok(sa: tuple, sb: tuple) -> bool:
    for (p1, t1), (p2, t2) in zip(sa, sb):
        if p1 or p2:
            continue
        if not t1 or not t2 or bin(t1 | t2).count("1") < 2:
            return False
    return True


def _delsarte_points_ok(points: Sequence[Sequence[int]], n: int) -> bool:
    """n + 1 nonzero points of M (as exponent differences) forming a simplex around 0."""
    if len(points) != n + 1:
        return False
    cols = [list(c) for c in zip(*points)]
    ker = nullspace(cols, len(points))
    if len(ker) != 1:
        return False
    lam = ker[0]
    return all(x > 0 for x in lam) or all(x < 0 for x in lam)


class ClassificationBudgetExceeded(RuntimeError):
    """Too many candidate supports for one vector."""


DEFAULT_SEARCH_BUDGET = 10**7


def candidate_pairs(amb: ToricAmbient, marked: Sequence[Monomial], budget: int = DEFAULT_SEARCH_BUDGET):
    """Vertex supports (g1, g2) passing the counting criterion and the simplex condition."""
    r, n, s = amb.n_rays, amb.dim, len(marked)
    pools = [[m for m in amb.monomials_of_class(mk) if m != tuple(mk)] for mk in marked]
    total = r + s
    by_size = []
    work = 0
    for a in range(2, total - 1):
        b = total - a
        groups = []
        for i, size in ((0, a), (1, b)):
            g: dict[tuple, list] = {}
            for combo in combinations(pools[i], size - 1):
                work += 1
                if work > budget:
                    raise ClassificationBudgetExceeded(f"more than {budget} candidate supports")
                monos = (tuple(marked[i]),) + combo
                g.setdefault(_var_signature(monos, r), []).append(monos)
            groups.append(g)
        by_size.append(groups)
    for g1s, g2s in by_size:
        for sa, l1 in g1s.items():
            for sb, l2 in g2s.items():
                if not _singletons_ok(sa, sb):
                    continue
                for s1 in l1:
                    d1 = [tuple(x - y for x, y in zip(m, s1[0])) for m in s1[1:]]
                    for s2 in l2:
                        d2 = [tuple(x - y for x, y in zip(m, s2[0])) for m in s2[1:]]
                        if not _delsarte_points_ok(d1 + d2, n):
                            continue
                        sysm = CoxSystem.make([s1, s2])
                        if qs_counting_s2(amb, sysm).status != "quasismooth":
                            continue
                        yield s1, s2


def classify_vector(
    vector: Sequence[int], with_duals: bool = True, budget: int = DEFAULT_SEARCH_BUDGET
) -> list[ClassifiedPair]:
    vector = tuple(int(x) for x in vector)
    m, n, weights = vector[0], vector[1], vector[2:]
    if m + n != sum(weights):
        raise ValueError("degrees must sum to the sum of the weights")
    if any(gcd(*(w for j, w in enumerate(weights) if j != i)) != 1 for i in range(len(weights))):
        raise ValueError("weights are not well formed")
    amb = ToricAmbient.weighted(weights)
    if not amb.is_fake_wps:
        raise ValueError("weights do not give a weighted projective space")
    wts = amb.free_gradings[0]
    perms = _weight_perms(wts)
    delta2 = amb.anticanonical_polytope
    seen_partitions = set()
    found: dict = {}
    for g in all_gnps(delta2, s=2):
        divs = nef_divisors(amb, g)
        for order in ((0, 1), (1, 0)):
            degs = tuple(divs[i][1].free[0] for i in order)
            if degs != (m, n):
                continue
            marked = tuple(divs[i][0] for i in order)
            key = min(tuple(_apply(p, mk) for mk in marked) for p in perms)
            if key in seen_partitions:
                continue
            seen_partitions.add(key)
            for s1, s2 in candidate_pairs(amb, marked, budget):
                # with m = n the two equations may also be swapped
                orders = ((0, 1), (1, 0)) if m == n else ((0, 1),)
                sups, mks = (s1, s2), tuple(marked)
                k, p, o = min(canonical_form(perms, (sups[i], sups[j])) + ((i, j),) for i, j in orders)
                if k not in found:
                    found[k] = tuple(_apply(p, mks[i]) for i in o)
    out = []
    for k in sorted(found):
        marked = found[k]
        sysm = CoxSystem.make(list(k))
        try:
            pair = pair_from_equations(amb, sysm, marked)
        except GoodPairError:
            continue
        if not is_delsarte(pair):
            continue
        _, eqs = equations_from_pair(pair, amb)
        verdict = is_quasismooth_ci(amb, eqs)
        if verdict.quasismooth is not True:
            raise AssertionError("counting criterion and Cayley test disagree")
        row = ClassifiedPair(
            vector,
            tuple(k[0]),
            tuple(k[1]),
            (tuple(marked[0]), tuple(marked[1])),
            is_irreducible(pair.inner),
            is_well_formed(amb, eqs).ok,
            pair.inner.partition.blocks,
            pair.outer.partition.blocks,
        )
        if with_duals:
            dual = dual_good_pair(pair)
            damb, deqs = equations_from_pair(dual)
            dverts = [
                [damb.monomial(u, [int(b == i) for b in _blocks(damb, dual)]) for u in q.vertices]
                for i, q in enumerate(dual.inner.parts)
            ]
            row.dual_rays = damb.rays
            data = damb.fake_wps_data()
            row.dual_weights = tuple(data[0]) if data else None
            row.dual_free_gradings = tuple(tuple(x) for x in damb.free_gradings)
            row.dual_quotients = tuple((q.order, q.residues) for q in damb.quotient_gradings)
            row.dual_g1 = tuple(sorted(dverts[0]))
            row.dual_g2 = tuple(sorted(dverts[1]))
            row.dual_quasismooth = is_quasismooth_ci(damb, deqs).quasismooth
            row.dual_irreducible = is_irreducible(dual.inner)
        out.append(row)
    return out


def _blocks(amb: ToricAmbient, pair) -> list[int]:
    from .nef import ray_block_map

    return ray_block_map(amb, pair.outer)
