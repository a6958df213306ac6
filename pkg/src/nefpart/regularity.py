"""Quasismoothness, well-formedness and the Calabi-Yau checks.

Quasismoothness of g_1 = ... = g_s = 0 is decided through the Cayley
polynomial F = t_1 g_1 + ... + t_s g_s on the projectivized bundle: it is
quasismooth iff for every relevant toric stratum {y_I = 0} in the base
locus of F, the restricted Newton polytopes of the partials dF/dy_rho
(rho in I) form a dependent collection.  Variables are indexed
0..r-1 for x and r..r+s-1 for t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .geometry import Polytope, minkowski_sum
from .linalg import int_rank
from .toric import CoxSystem, ToricAmbient

DEFAULT_BUDGET = 10**6

Points = list[tuple[int, ...]]


@dataclass(frozen=True)
class Stratum:
    indices: tuple[int, ...]
    r: int

    def labels(self) -> list[str]:
        return [f"x{i + 1}" if i < self.r else f"t{i - self.r + 1}" for i in self.indices]

    def __str__(self) -> str:
        return "{" + ",".join(self.labels()) + "}"


@dataclass
class QsVerdict:
    status: str  # "quasismooth", "not_quasismooth" or "budget_exceeded"
    witness: Stratum | None = None
    strata_checked: int = 0
    candidates: int = 0

    @property
    def quasismooth(self) -> bool | None:
        return {"quasismooth": True, "not_quasismooth": False}.get(self.status)

    @property
    def budget_exceeded(self) -> bool:
        return self.status == "budget_exceeded"


# ---------------------------------------------------------------- dependence


def _diffs(points: Points) -> list[list[int]]:
    p0 = points[0]
    return [[a - b for a, b in zip(p, p0)] for p in points[1:]]


def dependent_subset(point_sets: Sequence[Points | None]) -> tuple[int, ...] | None:
    """Indices of a nonempty subcollection S whose translates fit in dimension |S| - 1.

    ``None`` entries (empty polytopes) are ignored.  Returns None when the
    collection is independent.
    """
    idx = [i for i, p in enumerate(point_sets) if p]
    diffs = {i: _diffs(list(point_sets[i])) for i in idx}
    for i in idx:
        if int_rank(diffs[i]) == 0:
            return (i,)
    for k in range(2, len(idx) + 1):
        for sub in combinations(idx, k):
            rows = [row for i in sub for row in diffs[i]]
            if int_rank(rows) <= k - 1:
                return sub
    return None


def is_dependent(polys: Sequence[Polytope | Points | None]) -> bool:
    sets = []
    for p in polys:
        if p is None:
            sets.append(None)
        elif isinstance(p, Polytope):
            sets.append(None if p.is_empty else [tuple(v) for v in p.vertices])
        else:
            sets.append(list(p) or None)
    return dependent_subset(sets) is not None


# ---------------------------------------------------------------- Cayley strata


def _masks(supports: Sequence[Sequence[Sequence[int]]]) -> list[list[int]]:
    out = []
    for sup in supports:
        row = []
        for m in sup:
            mask = 0
            for j, e in enumerate(m):
                if e:
                    mask |= 1 << j
            row.append(mask)
        out.append(row)
    return out


def _in_base_locus(masks: list[list[int]], jmask: int, tset: frozenset[int]) -> bool:
    for i, row in enumerate(masks):
        if i in tset:
            continue
        if any(m & jmask == 0 for m in row):
            return False
    return True


def restricted_point_sets(
    supports: Sequence[Sequence[Sequence[int]]], r: int, stratum: Sequence[int]
) -> list[tuple[int, Points | None]]:
    """For rho in the stratum, the monomials of dF/dy_rho not involving other stratum variables.

    Points are exponent vectors in all r + s Cayley coordinates.
    """
    s = len(supports)
    idx = set(stratum)
    jset = [j for j in idx if j < r]
    tset = {j - r for j in idx if j >= r}
    out = []
    for rho in sorted(idx):
        pts = set()
        if rho >= r:
            i = rho - r
            for m in supports[i]:
                if all(m[j] == 0 for j in jset):
                    pts.add(tuple(m) + (0,) * s)
        else:
            for i, sup in enumerate(supports):
                if i in tset:
                    continue
                for m in sup:
                    if m[rho] == 1 and all(m[j] == 0 for j in jset if j != rho):
                        e = list(m)
                        e[rho] = 0
                        pts.add(tuple(e) + tuple(int(k == i) for k in range(s)))
        out.append((rho, sorted(pts) or None))
    return out


def restricted_polytopes(
    supports: Sequence[Sequence[Sequence[int]]], r: int, stratum: Sequence[int]
) -> list[tuple[int, Polytope | None]]:
    """Newton polytopes of the restricted partials, in the coordinates outside the stratum."""
    s = len(supports)
    keep = [j for j in range(r + s) if j not in set(stratum)]
    out = []
    for rho, pts in restricted_point_sets(supports, r, stratum):
        if pts is None:
            out.append((rho, None))
        else:
            out.append((rho, Polytope([tuple(p[j] for j in keep) for p in pts], len(keep))))
    return out


def cayley_strata(amb: ToricAmbient, system: CoxSystem, budget: int = DEFAULT_BUDGET) -> list[Stratum] | None:
    """Relevant strata of the Cayley ambient contained in the base locus of F.

    Returns None if the number of candidate strata exceeds ``budget``.
    """
    r, s = amb.n_rays, system.s
    xmasks = sorted(amb.relevant_masks)
    tsets = [frozenset(c) for k in range(s) for c in combinations(range(s), k)]
    if len(xmasks) * len(tsets) > budget:
        return None
    masks = _masks(system.supports)
    out = []
    for jm in xmasks:
        for ts in tsets:
            if _in_base_locus(masks, jm, ts):
                idx = tuple([j for j in range(r) if jm >> j & 1] + [r + t for t in sorted(ts)])
                out.append(Stratum(idx, r))
    out.sort(key=lambda st: (len(st.indices), st.indices))
    return out


def is_quasismooth_ci(amb: ToricAmbient, system: CoxSystem, budget: int = DEFAULT_BUDGET) -> QsVerdict:
    """Decide quasismoothness for general coefficients with the given supports."""
    system.validate(amb)
    strata = cayley_strata(amb, system, budget)
    n_cand = len(amb.relevant_masks) * (2**system.s - 1)
    if strata is None:
        return QsVerdict("budget_exceeded", candidates=n_cand)
    for k, st in enumerate(strata):
        sets = [p for _, p in restricted_point_sets(system.supports, amb.n_rays, st.indices)]
        if dependent_subset(sets) is None:
            return QsVerdict("not_quasismooth", st, k + 1, n_cand)
    return QsVerdict("quasismooth", None, len(strata), n_cand)


# ---------------------------------------------------------------- counting test, s = 2


@dataclass
class CountingVerdict:
    status: str  # "quasismooth", "not_quasismooth", "sufficient_pass" or "inconclusive"
    witness: tuple[int, ...] | None = None


def _k(supports, jset: Sequence[int], which: Sequence[int]) -> int:
    count = 0
    for rho in jset:
        for i in which:
            if any(m[rho] == 1 and all(m[j] == 0 for j in jset if j != rho) for m in supports[i]):
                count += 1
                break
    return count


def stratum_dimension(amb: ToricAmbient, jset: Sequence[int]) -> int:
    """Dimension of the image in Z of the stratum {x_J = 0}."""
    rest = [j for j in range(amb.n_rays) if j not in set(jset)]
    grading = [[row[j] for j in rest] for row in amb.free_gradings]
    return len(rest) - int_rank(grading)


def qs_counting_s2(amb: ToricAmbient, system: CoxSystem) -> CountingVerdict:
    """Counting criterion for s = 2.

    Necessary and sufficient on fake weighted projective spaces; elsewhere
    a pass is only sufficient and a failure is inconclusive.
    """
    if system.s != 2:
        raise ValueError("the counting criterion is stated for two equations")
    system.validate(amb)
    sup = system.supports
    masks = _masks(sup)
    r = amb.n_rays
    for jm in sorted(amb.relevant_masks, key=lambda m: (bin(m).count("1"), m)):
        if jm == 0:
            continue
        in1 = all(m & jm for m in masks[0])
        in2 = all(m & jm for m in masks[1])
        if not (in1 or in2):
            continue
        jset = [j for j in range(r) if jm >> j & 1]
        d = stratum_dimension(amb, jset)
        if in1 and in2:
            ok = _k(sup, jset, [0]) >= d + 1 and _k(sup, jset, [1]) >= d + 1 and _k(sup, jset, [0, 1]) >= d + 2
        elif in1:
            ok = _k(sup, jset, [0]) >= d
        else:
            ok = _k(sup, jset, [1]) >= d
        if not ok:
            status = "not_quasismooth" if amb.is_fake_wps else "inconclusive"
            return CountingVerdict(status, tuple(jset))
    return CountingVerdict("quasismooth" if amb.is_fake_wps else "sufficient_pass")


# ---------------------------------------------------------------- well-formedness


@dataclass
class WellFormed:
    ok: bool
    witness: tuple[int, ...] | None = None


def is_well_formed(amb: ToricAmbient, system: CoxSystem) -> WellFormed:
    """No singular torus-orbit closure of dimension dim X - 1 lies inside X."""
    n, s = amb.dim, system.s
    if s + 1 > n:
        return WellFormed(True)
    masks = _masks(system.supports)
    for cone in amb.cone_faces(s + 1):
        if amb.is_smooth_cone(cone):
            continue
        cm = 0
        for j in cone:
            cm |= 1 << j
        if all(m & cm for row in masks for m in row):
            return WellFormed(False, tuple(sorted(cone)))
    return WellFormed(True)


# ---------------------------------------------------------------- Calabi-Yau


@dataclass
class CYReport:
    checks: dict[str, bool] = field(default_factory=dict)
    quasismooth: QsVerdict | None = None
    well_formed: WellFormed | None = None

    @property
    def cy(self) -> bool:
        return all(self.checks.values())


def newton_parts(amb: ToricAmbient, system: CoxSystem) -> list[Polytope]:
    """Newton polytopes of the dehomogenizations, each relative to its first monomial."""
    return [Polytope(amb.dehomogenize(sup, sup[0]), amb.dim) for sup in system.supports]


def is_cy_family(amb: ToricAmbient, system: CoxSystem, budget: int = DEFAULT_BUDGET) -> CYReport:
    system.validate(amb)
    n, s = amb.dim, system.s
    rep = CYReport()
    rep.checks["dimension"] = n >= s + 1
    total = system.degrees(amb)[0]
    for d in system.degrees(amb)[1:]:
        total = total + d
    acan = amb.anticanonical_class
    tors = tuple(x % k for x, k in zip(total.torsion, amb.torsion_orders))
    rep.checks["anticanonical degree"] = total.free == acan.free and tors == acan.torsion
    parts = newton_parts(amb, system)
    rep.checks["parts positive dimensional"] = all(p.dim > 0 for p in parts)
    big = minkowski_sum(parts)
    rep.checks["sum full dimensional"] = big.dim == n
    rep.checks["one interior point"] = big.n_interior_points == 1
    partial = True
    for k in range(1, s):
        for sub in combinations(range(s), k):
            if minkowski_sum([parts[i] for i in sub]).n_interior_points != 0:
                partial = False
    rep.checks["no interior points in partial sums"] = partial
    rep.quasismooth = is_quasismooth_ci(amb, system, budget)
    rep.checks["quasismooth"] = rep.quasismooth.quasismooth is True
    rep.well_formed = is_well_formed(amb, system)
    rep.checks["well formed"] = rep.well_formed.ok
    return rep
