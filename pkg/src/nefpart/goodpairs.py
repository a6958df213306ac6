"""Good pairs of generalized nef partitions and their Cox equations.

A good pair couples an inner GNP (parts Delta^1_i) with an outer GNP
(parts Delta^2_i) of the same length, with each inner part a lattice
polytope inside the corresponding outer part.  The Cox equations g_i of
the outer ambient have supports the lattice points of Delta^1_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .geometry import Polytope, minkowski_sum
from .linalg import dot
from .nef import (
    GeneralizedNefPartition,
    NotAGnpError,
    VertexPartition,
    dual_gnp,
    gnp_from_parts,
    make_gnp,
    ray_block_map,
)
from .toric import CoxSystem, Monomial, ToricAmbient, ambient_from_polytope


class GoodPairError(ValueError):
    pass


class MarkedMonomialError(GoodPairError):
    """The marked monomials do not multiply to the product of all variables."""


class NefError(GoodPairError):
    """The degrees of the system do not form a nef partition of the anticanonical class."""


class InnerPolytopeError(GoodPairError):
    """The inner Newton polytopes do not form a GNP with the origin in the interior."""


@dataclass(frozen=True)
class GoodPair:
    inner: GeneralizedNefPartition
    outer: GeneralizedNefPartition

    def __post_init__(self):
        reason = good_pair_failure(self.inner, self.outer)
        if reason is not None:
            raise GoodPairError(reason)

    @property
    def s(self) -> int:
        return self.outer.s

    @property
    def dim(self) -> int:
        return self.outer.dim


def good_pair_failure(inner: GeneralizedNefPartition, outer: GeneralizedNefPartition) -> str | None:
    """None when (inner, outer) is a good pair, otherwise the first violated condition."""
    if inner.s != outer.s:
        raise ValueError("inner and outer GNPs have different numbers of parts")
    if inner.dim != outer.dim:
        raise ValueError("inner and outer GNPs live in different dimensions")
    for i, (p, q) in enumerate(zip(inner.parts, outer.parts)):
        if not p.is_lattice:
            return f"inner part {i + 1} is not a lattice polytope"
        if not q.contains_polytope(p):
            return f"inner part {i + 1} is not contained in outer part {i + 1}"
    if not inner.delta.is_lattice or not inner.delta.interior_contains(inner.delta.origin):
        return "inner polytope is not a lattice polytope with the origin in its interior"
    if not outer.delta_polar.is_lattice:
        return "polar of the outer polytope is not a lattice polytope"
    return None


def is_good_pair(inner: GeneralizedNefPartition, outer: GeneralizedNefPartition) -> bool:
    return good_pair_failure(inner, outer) is None


def dual_good_pair(p: GoodPair) -> GoodPair:
    return GoodPair(dual_gnp(p.outer), dual_gnp(p.inner))


# ---------------------------------------------------------------- matrix


@dataclass(frozen=True)
class PairMatrix:
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[tuple[int, tuple[Fraction, ...]], ...]
    col_labels: tuple[tuple[int, tuple[Fraction, ...]], ...]

    def transpose(self) -> "PairMatrix":
        return PairMatrix(tuple(zip(*self.entries)), self.col_labels, self.row_labels)


def _labelled_vertices(parts: Sequence[Polytope]) -> list[tuple[int, tuple[Fraction, ...]]]:
    out = []
    for i, p in enumerate(parts):
        out.append((i, p.origin))
        out.extend((i, v) for v in p.vertices if any(v))
    return out


def pair_matrix(p: GoodPair) -> PairMatrix:
    """Entries <m, n> + delta_ij over vertices of inner parts and dual outer parts."""
    rows = _labelled_vertices(p.inner.parts)
    cols = _labelled_vertices(dual_gnp(p.outer).parts)
    ent = []
    for i, m in rows:
        row = []
        for j, n in cols:
            v = dot(m, n) + (1 if i == j else 0)
            if Fraction(v).denominator != 1:
                raise AssertionError("non-integral matrix entry")
            row.append(int(v))
        ent.append(tuple(row))
    return PairMatrix(tuple(ent), tuple(rows), tuple(cols))


def matrix_transpose_permutation(p: GoodPair) -> tuple[list[int], list[int]] | None:
    """Row and column permutations taking the dual pair's matrix to the transpose.

    Returns None if the labels do not match up.
    """
    a = pair_matrix(p).transpose()
    b = pair_matrix(dual_good_pair(p))
    try:
        rows = [b.row_labels.index(lbl) for lbl in a.row_labels]
        cols = [b.col_labels.index(lbl) for lbl in a.col_labels]
    except ValueError:
        return None
    for x, r in enumerate(rows):
        for y, c in enumerate(cols):
            if a.entries[x][y] != b.entries[r][c]:
                return None
    return rows, cols


def is_delsarte(p: GoodPair) -> bool:
    outer_simplex = p.outer.delta.is_simplex and p.outer.delta.is_full_dimensional
    pts = [v for q in p.inner.parts for v in q.vertices]
    hull = Polytope(pts, p.dim)
    inner_simplex = hull.is_simplex and hull.is_full_dimensional
    if outer_simplex and inner_simplex:
        count = sum(len(q.vertices) for q in p.inner.parts)
        if count != p.dim + p.s + 1:
            raise AssertionError("Delsarte pair with an unexpected vertex count")
        return True
    return False


# ---------------------------------------------------------------- equations


def outer_ambient(p: GoodPair) -> ToricAmbient:
    return ambient_from_polytope(p.outer.delta)


def equations_from_pair(p: GoodPair, ambient: ToricAmbient | None = None) -> tuple[ToricAmbient, CoxSystem]:
    """Supports of g_i: the lattice points of Delta^1_i homogenized with respect to N_i."""
    amb = ambient or outer_ambient(p)
    blocks = ray_block_map(amb, p.outer)
    supports = []
    for i, q in enumerate(p.inner.parts):
        coeffs = [int(b == i) for b in blocks]
        supports.append([amb.monomial(u, coeffs) for u in q.lattice_points])
    return amb, CoxSystem.make(supports)


def marked_monomials(p: GoodPair, ambient: ToricAmbient | None = None) -> list[Monomial]:
    amb = ambient or outer_ambient(p)
    blocks = ray_block_map(amb, p.outer)
    return [tuple(int(b == i) for b in blocks) for i in range(p.s)]


def pair_from_equations(amb: ToricAmbient, system: CoxSystem, marked: Sequence[Sequence[int]]) -> GoodPair:
    """The good pair of a Cox system with a choice of marked monomials."""
    system.validate(amb)
    marked = [tuple(int(x) for x in m) for m in marked]
    if len(marked) != system.s:
        raise MarkedMonomialError("one marked monomial per equation is required")
    for i, m in enumerate(marked):
        if m not in system.supports[i]:
            raise MarkedMonomialError(f"marked monomial {i + 1} is not in its support")
    if [sum(col) for col in zip(*marked)] != [1] * amb.n_rays:
        raise MarkedMonomialError("marked monomials do not multiply to the product of all variables")
    delta2 = amb.anticanonical_polytope
    polar = delta2.polar()
    index = {v: k for k, v in enumerate(polar.vertices)}
    blocks: list[list[int]] = [[] for _ in marked]
    for rho, r in enumerate(amb.rays):
        i = next(i for i, m in enumerate(marked) if m[rho])
        blocks[i].append(index[tuple(Fraction(x) for x in r)])
    try:
        outer = make_gnp(delta2, VertexPartition.of(blocks))
    except NotAGnpError as exc:
        raise NefError(str(exc)) from None
    parts = [
        Polytope(amb.dehomogenize(sup, m), amb.dim) for sup, m in zip(system.supports, marked)
    ]
    delta1 = minkowski_sum(parts)
    if not delta1.interior_contains(delta1.origin):
        raise InnerPolytopeError("the origin is not in the interior of the inner polytope")
    try:
        inner = gnp_from_parts(parts)
    except NotAGnpError as exc:
        raise InnerPolytopeError(str(exc)) from None
    reason = good_pair_failure(inner, outer)
    if reason is not None:
        raise GoodPairError(reason)
    return GoodPair(inner, outer)


def saturated_pair(p: GoodPair) -> GoodPair:
    """Replace each inner part by the convex hull of the lattice points of the outer part."""
    parts = [Polytope(q.lattice_points, p.dim) for q in p.outer.parts]
    return GoodPair(gnp_from_parts(parts), p.outer)


def enumerate_marked_choices(amb: ToricAmbient, system: CoxSystem) -> Iterator[tuple[Monomial, ...]]:
    """All choices of one monomial per support multiplying to x_1 ... x_r."""
    r = amb.n_rays
    cands = [[m for m in sup if max(m) <= 1] for sup in system.supports]

    def rec(i: int, used: tuple[int, ...], chosen: list[Monomial]):
        if i == len(cands):
            if all(used):
                yield tuple(chosen)
            return
        for m in cands[i]:
            if any(a and b for a, b in zip(m, used)):
                continue
            yield from rec(i + 1, tuple(a + b for a, b in zip(m, used)), chosen + [m])

    yield from rec(0, (0,) * r, [])
