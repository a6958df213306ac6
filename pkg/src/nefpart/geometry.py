"""Exact rational polytopes.

A :class:`Polytope` is stored by its sorted vertex list.  The facet
description is computed on demand with the double description method and
cached.  Facets are written ``<m, normal> >= -offset`` with a primitive
integral inward ``normal`` and a rational ``offset``; polytopes that are
not full dimensional also carry affine equations ``<m, normal> = -offset``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import ceil, floor, lcm
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .linalg import (
    clear_denominators,
    dot,
    int_rank,
    integral_direction,
    is_integral,
    nullspace,
    primitive,
    qvec,
    rank,
    rref,
)

Point = tuple[Fraction, ...]


class Facet(NamedTuple):
    normal: tuple[int, ...]
    offset: Fraction

    def value(self, m: Sequence) -> Fraction:
        return dot(m, self.normal) + self.offset


class Face(NamedTuple):
    vertices: frozenset[int]
    dim: int


class UnboundedError(ValueError):
    pass


# ---------------------------------------------------------------- double description


def _popcount(x: int) -> int:
    return bin(x).count("1")


def extreme_rays(rows: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """Extreme rays of the cone ``{y in Q^d : row . y >= 0}``.

    The rows must have rank ``d`` so that the cone is pointed.  Rays are
    returned as primitive integer vectors.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    basis: list[int] = []
    for i, r in enumerate(rows):
        if int_rank([rows[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == d:
                break
    if len(basis) < d:
        raise UnboundedError("constraint matrix is not of full column rank")
    bmat = [rows[i] for i in basis]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    full = 0
    for i in basis:
        full |= 1 << i
    for k in range(d):
        # the k-th column of the inverse, up to a positive factor
        ray = _cofactor_kernel([bmat[j] for j in range(d) if j != k], d)
        if dot(bmat[k], ray) < 0:
            ray = tuple(-x for x in ray)
        rays.append(primitive(ray))
        zeros.append(full & ~(1 << basis[k]))
    in_basis = set(basis)
    for idx, row in enumerate(rows):
        if idx in in_basis:
            continue
        vals = [dot(row, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << idx
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zeros = [zeros[k] for k in pos] + [zeros[k] | bit for k in zer]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if _popcount(common) < d - 2:
                    continue
                if any(
                    k != p and k != q and zeros[k] & common == common
                    for k in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], -vals[q]
                ray = tuple(vq * a + vp * b for a, b in zip(rays[p], rays[q]))
                new_rays.append(primitive(ray))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return rays


def _det(m: list[list[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    m = [list(r) for r in m]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _cofactor_kernel(rows: list[tuple[int, ...]], d: int) -> tuple[int, ...]:
    """Generator of the kernel of a (d-1) x d integer matrix of full rank."""
    return tuple((-1) ** j * _det([[r[c] for c in range(d) if c != j] for r in rows]) for j in range(d))


# ---------------------------------------------------------------- hull


def _hull(points: Sequence[Point], n: int):
    """Vertices, facets, equations and dimension of conv(points)."""
    pts = sorted(set(points))
    if not pts:
        return (), (), (), -1
    p0 = pts[0]
    # one common denominator turns the whole computation into integer arithmetic
    den = 1
    for p in pts:
        for x in p:
            den = lcm(den, x.denominator)
    ipts = [tuple(int(x * den) for x in p) for p in pts]
    idiffs = [tuple(a - b for a, b in zip(p, ipts[0])) for p in ipts[1:]]
    k = int_rank(idiffs)
    if k == n:
        piv, eqs = list(range(n)), []
    else:
        red, piv = rref(idiffs) if idiffs else ([], [])
        eqs = []
        for c in nullspace(red, n) if red else [tuple(int(i == j) for j in range(n)) for i in range(n)]:
            c = primitive(c)
            eqs.append(Facet(c, -dot(c, p0)))
        eqs.sort()
    if k == 0:
        return (p0,), (), tuple(eqs), 0
    cone_rows = [(den,) + tuple(p[c] for c in piv) for p in ipts]
    facets = []
    rays = extreme_rays(cone_rows, k + 1)
    for ray in rays:
        b, a = ray[0], ray[1:]
        w, c = integral_direction(a)
        normal = [0] * n
        for j, col in enumerate(piv):
            normal[col] = w[j]
        facets.append(Facet(tuple(normal), Fraction(b) / c))
    facets.sort()
    verts = []
    # tightness is checked on the integer cone rows, avoiding Fractions
    for p, row in zip(pts, cone_rows):
        tight = [ray[1:] for ray in rays if sum(x * y for x, y in zip(row, ray)) == 0]
        if len(tight) >= k and int_rank(tight) == k:
            verts.append(p)
    return tuple(verts), tuple(facets), tuple(eqs), k


class Polytope:
    """A convex polytope with rational vertices in Q^ambient_dim."""

    def __init__(self, vertices: Iterable[Sequence], ambient_dim: int | None = None):
        pts = [qvec(v) for v in vertices]
        if ambient_dim is None:
            if not pts:
                raise ValueError("ambient_dim is required for an empty polytope")
            ambient_dim = len(pts[0])
        if any(len(p) != ambient_dim for p in pts):
            raise ValueError("points of differing dimension")
        self.ambient_dim = ambient_dim
        verts, facets, eqs, dim = _hull(pts, ambient_dim)
        self.vertices: tuple[Point, ...] = verts
        self.facets: tuple[Facet, ...] = facets
        self.equations: tuple[Facet, ...] = eqs
        self.dim = dim

    # -------------------------------------------------------- construction

    @classmethod
    def from_inequalities(
        cls,
        normals: Sequence[Sequence],
        offsets: Sequence,
        equations: Sequence[tuple[Sequence, object]] = (),
        ambient_dim: int | None = None,
    ) -> "Polytope":
        """Polytope ``{m : <m, a_i> >= -b_i}`` (plus optional equations)."""
        if ambient_dim is None:
            src = list(normals) or [e[0] for e in equations]
            if not src:
                raise ValueError("cannot infer the ambient dimension")
            ambient_dim = len(src[0])
        n = ambient_dim
        rows = [clear_denominators((Fraction(1),) + (Fraction(0),) * n)]
        for a, b in zip(normals, offsets):
            rows.append(clear_denominators(qvec((b,)) + qvec(a)))
        for a, b in equations:
            r = clear_denominators(qvec((b,)) + qvec(a))
            rows.append(r)
            rows.append(tuple(-x for x in r))
        rays = extreme_rays(rows, n + 1)
        finite = [r for r in rays if r[0] > 0]
        if not finite:
            return cls([], n)
        if len(finite) < len(rays):
            raise UnboundedError("inequalities do not define a bounded set")
        return cls([tuple(Fraction(x, r[0]) for x in r[1:]) for r in finite], n)

    # -------------------------------------------------------- basic queries

    def __repr__(self) -> str:
        vs = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"Polytope([{vs}])"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vertices))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, m: Sequence) -> bool:
        if self.is_empty:
            return False
        m = qvec(m)
        return all(e.value(m) == 0 for e in self.equations) and all(
            f.value(m) >= 0 for f in self.facets
        )

    def relative_interior_contains(self, m: Sequence) -> bool:
        if self.is_empty:
            return False
        m = qvec(m)
        if any(e.value(m) != 0 for e in self.equations):
            return False
        return all(f.value(m) > 0 for f in self.facets)

    def interior_contains(self, m: Sequence) -> bool:
        return self.is_full_dimensional and self.relative_interior_contains(m)

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    @property
    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    @property
    def origin(self) -> Point:
        return (Fraction(0),) * self.ambient_dim

    @property
    def is_simplex(self) -> bool:
        return not self.is_empty and len(self.vertices) == self.dim + 1

    # -------------------------------------------------------- lattice points

    def _integer_constraints(self):
        ineq = []
        for f in self.facets:
            q = f.offset.denominator
            ineq.append(([q * a for a in f.normal], f.offset.numerator))
        eqs = []
        for e in self.equations:
            q = e.offset.denominator
            eqs.append(([q * a for a in e.normal], e.offset.numerator))
        return ineq, eqs

    def _scan(self, strict: bool) -> list[tuple[int, ...]]:
        if self.is_empty:
            return []
        n = self.ambient_dim
        lo = [floor(min(v[i] for v in self.vertices)) for i in range(n)]
        hi = [ceil(max(v[i] for v in self.vertices)) for i in range(n)]
        ineq, eqs = self._integer_constraints()
        if n == 0:
            return [()]
        a_in = np.array([a for a, _ in ineq], dtype=np.int64).reshape(len(ineq), n)
        b_in = np.array([b for _, b in ineq], dtype=np.int64)
        a_eq = np.array([a for a, _ in eqs], dtype=np.int64).reshape(len(eqs), n)
        b_eq = np.array([b for _, b in eqs], dtype=np.int64)
        # slice along the first coordinate to bound memory
        found: list[tuple[int, ...]] = []
        rest = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, n)]
        if rest:
            grid = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, n - 1)
        else:
            grid = np.zeros((1, 0), dtype=np.int64)
        for x0 in range(lo[0], hi[0] + 1):
            pts = np.concatenate(
                [np.full((grid.shape[0], 1), x0, dtype=np.int64), grid], axis=1
            )
            ok = np.ones(pts.shape[0], dtype=bool)
            if len(eqs):
                ok &= np.all(pts @ a_eq.T + b_eq == 0, axis=1)
            if len(ineq):
                vals = pts @ a_in.T + b_in
                ok &= np.all(vals > 0 if strict else vals >= 0, axis=1)
            found.extend(tuple(int(x) for x in p) for p in pts[ok])
        found.sort()
        return found

    @cached_property
    def lattice_points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self._scan(strict=False))

    @cached_property
    def interior_lattice_points(self) -> tuple[tuple[int, ...], ...]:
        """Lattice points of the relative interior."""
        return tuple(self._scan(strict=True))

    @property
    def n_interior_points(self) -> int:
        """The count l* of relative-interior lattice points."""
        return len(self.interior_lattice_points)

    # -------------------------------------------------------- faces

    @cached_property
    def _facet_masks(self) -> list[int]:
        masks = []
        for f in self.facets:
            m = 0
            for i, v in enumerate(self.vertices):
                if f.value(v) == 0:
                    m |= 1 << i
            masks.append(m)
        return masks

    @property
    def facet_vertex_sets(self) -> list[frozenset[int]]:
        """Vertex indices on each facet, aligned with ``facets``."""
        return [
            frozenset(i for i in range(len(self.vertices)) if m >> i & 1)
            for m in self._facet_masks
        ]

    def _mask_dim(self, mask: int) -> int:
        idx = [i for i in range(len(self.vertices)) if mask >> i & 1]
        if not idx:
            return -1
        p0 = self.vertices[idx[0]]
        return rank([tuple(a - b for a, b in zip(self.vertices[i], p0)) for i in idx[1:]]) if len(idx) > 1 else 0

    @cached_property
    def all_faces(self) -> tuple[Face, ...]:
        """All nonempty faces, including the polytope itself."""
        if self.is_empty:
            return ()
        top = (1 << len(self.vertices)) - 1
        seen = {top}
        frontier = set(self._facet_masks)
        while frontier:
            seen |= frontier
            nxt = set()
            for a in frontier:
                for b in self._facet_masks:
                    c = a & b
                    if c and c not in seen:
                        nxt.add(c)
            frontier = nxt
        faces = []
        for m in seen:
            faces.append(
                Face(frozenset(i for i in range(len(self.vertices)) if m >> i & 1), self._mask_dim(m))
            )
        faces.sort(key=lambda f: (f.dim, sorted(f.vertices)))
        return tuple(faces)

    def faces(self, k: int) -> list[Face]:
        return [f for f in self.all_faces if f.dim == k]

    def face_vertices(self, face: Face) -> list[Point]:
        return [self.vertices[i] for i in sorted(face.vertices)]

    # -------------------------------------------------------- constructions

    def polar(self) -> "Polytope":
        """``{n : <m, n> >= -1 for all m in P}``; needs the origin in the interior."""
        cached = self.__dict__.get("_polar")
        if cached is None:
            if not self.interior_contains(self.origin):
                raise ValueError("polar requires the origin in the interior")
            cached = Polytope([tuple(Fraction(a) / f.offset for a in f.normal) for f in self.facets], self.ambient_dim)
            self._polar = cached
        return cached

    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum([self, other])

    def translate(self, t: Sequence) -> "Polytope":
        t = qvec(t)
        return Polytope([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.ambient_dim)

    def scale(self, c) -> "Polytope":
        c = Fraction(c)
        return Polytope([tuple(c * a for a in v) for v in self.vertices], self.ambient_dim)

    # -------------------------------------------------------- predicates

    @property
    def is_canonical(self) -> bool:
        """Full dimensional with the origin as the only interior lattice point."""
        if not self.is_full_dimensional or not self.interior_contains(self.origin):
            return False
        return self.interior_lattice_points == ((0,) * self.ambient_dim,)

    @property
    def is_reflexive(self) -> bool:
        if not self.is_lattice or not self.interior_contains(self.origin):
            return False
        return self.polar().is_lattice

    @property
    def is_qfano(self) -> bool:
        """Lattice polytope, origin interior, primitive vertices."""
        if not self.is_lattice or not self.interior_contains(self.origin):
            return False
        return all(primitive([int(x) for x in v]) == tuple(int(x) for x in v) for v in self.vertices)


def convex_hull(points: Iterable[Sequence], ambient_dim: int | None = None) -> Polytope:
    return Polytope(points, ambient_dim)


def minkowski_sum(polys: Sequence[Polytope]) -> Polytope:
    if not polys:
        raise ValueError("empty Minkowski sum")
    n = polys[0].ambient_dim
    acc = [(Fraction(0),) * n]
    for p in polys:
        if p.is_empty:
            return Polytope([], n)
        acc = list({tuple(a + b for a, b in zip(u, v)) for u in acc for v in p.vertices})
        acc = list(Polytope(acc, n).vertices)
    return Polytope(acc, n)


def affine_dimension(points: Sequence[Sequence]) -> int:
    pts = [qvec(p) for p in points]
    if not pts:
        return -1
    return rank([tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]) if len(pts) > 1 else 0
