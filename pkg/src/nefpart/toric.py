"""Complete toric varieties given by the face fan of a Q-Fano polytope.

The ambient attached to a polytope Delta (origin in the interior, polar a
lattice polytope) has rays the vertices of Delta^polar, and its maximal
cones are the cones over the facets of conv(rays).  Divisors and monomials
are integer vectors indexed by rays; the class group is computed from the
Smith normal form of the ray matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .geometry import Polytope
from .linalg import dot, primitive, rank, smith_normal_form, solve

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class QuotientGrading:
    order: int
    residues: tuple[int, ...]


@dataclass(frozen=True)
class ClassElement:
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __add__(self, other: "ClassElement") -> "ClassElement":
        return ClassElement(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )


class ToricAmbient:
    """Toric variety of the face fan of conv(rays).

    ``rays`` keep the order they are given in; variables x_1..x_r of the
    Cox ring follow the same order.
    """

    def __init__(self, rays: Iterable[Sequence[int]]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise ValueError("no rays")
        if len(set(rays)) != len(rays):
            raise ValueError("repeated ray")
        for r in rays:
            if primitive(r) != r or not any(r):
                raise ValueError(f"ray {r} is not primitive")
        self.rays = rays
        self.dim = len(rays[0])
        self.hull = Polytope(rays)
        if not self.hull.interior_contains(self.hull.origin):
            raise ValueError("rays do not span a complete fan around the origin")
        if len(self.hull.vertices) != len(rays):
            raise ValueError("every ray must be a vertex of conv(rays)")
        index = {tuple(Fraction(x) for x in r): i for i, r in enumerate(rays)}
        self._hull_to_ray = [index[v] for v in self.hull.vertices]
        self._class_data()

    @classmethod
    def weighted(cls, weights: Sequence[int]) -> "ToricAmbient":
        """Weighted projective space P(weights) with rays in variable order."""
        w = [int(x) for x in weights]
        if any(x <= 0 for x in w) or len(w) < 2:
            raise ValueError("weights must be positive and at least two")
        g = 0
        for x in w:
            g = gcd(g, x)
        w = [x // g for x in w]
        # rows 1.. of U with U w = (1, 0, ..., 0)^T give the images of e_i in Z^r / Z w
        u, _, _ = smith_normal_form([[x] for x in w])
        rays = [tuple(u[k][i] for k in range(1, len(w))) for i in range(len(w))]
        return cls(rays)

    # -------------------------------------------------------- fan

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @cached_property
    def max_cones(self) -> tuple[frozenset[int], ...]:
        cones = []
        for f in self.hull.facets:
            cones.append(
                frozenset(
                    self._hull_to_ray[i]
                    for i, v in enumerate(self.hull.vertices)
                    if f.value(v) == 0
                )
            )
        return tuple(sorted(cones, key=sorted))

    @cached_property
    def relevant_masks(self) -> frozenset[int]:
        """Bitmasks of ray sets contained in some maximal cone."""
        out: set[int] = set()
        for cone in self.max_cones:
            idx = sorted(cone)
            for sub in range(1 << len(idx)):
                m = 0
                for k, i in enumerate(idx):
                    if sub >> k & 1:
                        m |= 1 << i
                out.add(m)
        return frozenset(out)

    def cone_faces(self, dim: int) -> list[frozenset[int]]:
        """Ray sets of the cones of dimension ``dim`` of the fan."""
        out = []
        for face in self.hull.faces(dim - 1):
            out.append(frozenset(self._hull_to_ray[i] for i in face.vertices))
        return sorted(out, key=sorted)

    def is_smooth_cone(self, cone: Iterable[int]) -> bool:
        idx = sorted(cone)
        mat = [self.rays[i] for i in idx]
        if rank(mat) != len(idx):
            return False
        _, d, _ = smith_normal_form(mat)
        return all(d[i][i] == 1 for i in range(len(idx)))

    # -------------------------------------------------------- class group

    def _class_data(self) -> None:
        n, r = self.dim, self.n_rays
        if rank(self.rays) != n:
            raise ValueError("rays do not span")
        u, d, _ = smith_normal_form([list(x) for x in self.rays])
        free = [list(u[i]) for i in range(n, r)]
        if len(free) == 1 and sum(free[0]) < 0:
            free[0] = [-x for x in free[0]]
        quot = []
        for i in range(n):
            k = d[i][i]
            if k > 1:
                quot.append((k, [x % k for x in u[i]]))
        self._free_rows = free
        self._quot_rows = [(k, _canonical_residues(k, a, free)) for k, a in quot]

    @property
    def free_gradings(self) -> list[list[int]]:
        return [list(r) for r in self._free_rows]

    @property
    def quotient_gradings(self) -> list[QuotientGrading]:
        return [QuotientGrading(k, tuple(a)) for k, a in self._quot_rows]

    @property
    def class_group_rank(self) -> int:
        return len(self._free_rows)

    @property
    def torsion_orders(self) -> list[int]:
        return [k for k, _ in self._quot_rows]

    def class_of(self, vec: Sequence[int]) -> ClassElement:
        """Class of the divisor sum vec_i D_i (equivalently the degree of x^vec)."""
        v = [int(x) for x in vec]
        if len(v) != self.n_rays:
            raise ValueError("vector length differs from the number of rays")
        return ClassElement(
            tuple(dot(row, v) for row in self._free_rows),
            tuple(dot(a, v) % k for k, a in self._quot_rows),
        )

    @property
    def anticanonical_class(self) -> ClassElement:
        return self.class_of([1] * self.n_rays)

    @property
    def is_fake_wps(self) -> bool:
        return self.n_rays == self.dim + 1

    def fake_wps_data(self) -> tuple[list[int], list[QuotientGrading]] | None:
        if not self.is_fake_wps:
            return None
        return list(self._free_rows[0]), self.quotient_gradings

    # -------------------------------------------------------- divisors and monomials

    @cached_property
    def anticanonical_polytope(self) -> Polytope:
        return self.hull.polar()

    def divisor_polytope(self, coeffs: Sequence) -> Polytope:
        """``{m : <m, n_i> >= -a_i}`` for the torus-invariant divisor sum a_i D_i."""
        return Polytope.from_inequalities(self.rays, list(coeffs), ambient_dim=self.dim)

    def monomial(self, u: Sequence, coeffs: Sequence) -> Monomial:
        """Exponent vector <u, n_i> + a_i of the character u relative to D."""
        e = [dot(u, r) + Fraction(a) for r, a in zip(self.rays, coeffs)]
        if any(Fraction(x).denominator != 1 or x < 0 for x in e):
            raise ValueError(f"point {u} is not a section of the divisor")
        return tuple(int(x) for x in e)

    def homogenize(self, points: Sequence[Sequence]) -> tuple[list[Monomial], list[int]]:
        """Homogenize lattice points with respect to the minimal divisor containing them."""
        coeffs = [max(-dot(u, r) for u in points) for r in self.rays]
        coeffs = [int(c) for c in coeffs]
        return [self.monomial(u, coeffs) for u in points], coeffs

    def dehomogenize(self, monomials: Sequence[Sequence[int]], coeffs: Sequence) -> list[tuple[int, ...]]:
        """Lattice points u with <u, n_i> = e_i - a_i for each monomial e."""
        out = []
        for e in monomials:
            rhs = [Fraction(x) - Fraction(a) for x, a in zip(e, coeffs)]
            u = solve(self.rays, rhs)
            if u is None or any(x.denominator != 1 for x in u):
                raise ValueError(f"monomial {tuple(e)} does not have the degree of the divisor")
            out.append(tuple(int(x) for x in u))
        return out

    def monomials_of_class(self, coeffs: Sequence[int]) -> list[Monomial]:
        """All monomials with the same degree as the divisor with given coefficients."""
        p = self.divisor_polytope(coeffs)
        return sorted(self.monomial(u, coeffs) for u in p.lattice_points)

    def same_ray_set(self, other: "ToricAmbient") -> bool:
        return set(self.rays) == set(other.rays)

    def __repr__(self) -> str:
        return f"ToricAmbient(rays={list(self.rays)})"


def _canonical_residues(k: int, a: Sequence[int], free: Sequence[Sequence[int]]) -> list[int]:
    """Normalize a Z/k grading row up to automorphisms of Z^f + Z/k.

    With one free row w we may replace a by u(a + c w) for a unit u; we zero
    the first residue whose weight is a unit mod k and then pick the
    lexicographically least unit multiple.
    """
    a = [x % k for x in a]
    if len(free) == 1:
        w = free[0]
        j = next((j for j, x in enumerate(w) if gcd(x, k) == 1), None)
        if j is not None:
            c = (-a[j] * pow(w[j], -1, k)) % k
            a = [(x + c * y) % k for x, y in zip(a, w)]
    units = [u for u in range(1, k) if gcd(u, k) == 1]
    return min(([(u * x) % k for x in a] for u in units), default=a)


def ambient_from_polytope(delta: Polytope) -> ToricAmbient:
    """Ambient whose rays are the vertices of delta^polar in lexicographic order."""
    polar = delta.polar()
    if not polar.is_lattice:
        raise ValueError("the polar polytope is not a lattice polytope")
    return ToricAmbient([tuple(int(x) for x in v) for v in polar.vertices])


def grading_kernel(free_rows: Sequence[Sequence[int]], quotients: Sequence[tuple[int, Sequence[int]]]) -> list[tuple[int, ...]]:
    """Lattice of exponent vectors of degree zero for a given grading.

    ``quotients`` holds pairs (k, residues).  This is the character lattice M
    embedded in Z^r; it identifies a fake weighted projective space.
    """
    from .linalg import integer_kernel

    r = len(free_rows[0]) if free_rows else len(quotients[0][1])
    q = len(quotients)
    rows = []
    for fr in free_rows:
        rows.append(list(fr) + [0] * q)
    for j, (k, a) in enumerate(quotients):
        rows.append(list(a) + [k if i == j else 0 for i in range(q)])
    ker = integer_kernel(rows, r + q)
    # projecting a kernel basis to the first r coordinates spans M
    return _lattice_basis([tuple(v[:r]) for v in ker], r)


def _lattice_basis(gens: Sequence[Sequence[int]], r: int) -> list[tuple[int, ...]]:
    """A basis of the lattice generated by ``gens`` (via Smith normal form)."""
    if not gens:
        return []
    u, d, v = smith_normal_form([list(g) for g in gens])
    # gens = U^-1 D V^-1, so the row space is spanned by rows of D V^-1
    from .linalg import inverse

    vinv = inverse(v)
    out = []
    for i in range(min(len(d), r)):
        if d[i][i]:
            out.append(tuple(int(d[i][i] * x) for x in vinv[i]))
    return out


def ambient_lattice(amb: ToricAmbient) -> list[tuple[int, ...]]:
    """Basis of M in Z^r: the columns of the ray matrix."""
    return [tuple(r[k] for r in amb.rays) for k in range(amb.dim)]


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    from .linalg import in_lattice

    return all(in_lattice(b, x) for x in a) and all(in_lattice(a, x) for x in b)


@dataclass(frozen=True)
class CoxSystem:
    """Supports of g_1..g_s as sorted tuples of exponent vectors."""

    supports: tuple[tuple[Monomial, ...], ...]

    @classmethod
    def make(cls, supports: Iterable[Iterable[Sequence[int]]]) -> "CoxSystem":
        sup = tuple(tuple(sorted({tuple(int(x) for x in m) for m in s})) for s in supports)
        if any(not s for s in sup):
            raise ValueError("empty support")
        return cls(sup)

    @property
    def s(self) -> int:
        return len(self.supports)

    def degrees(self, amb: ToricAmbient) -> list[ClassElement]:
        out = []
        for i, s in enumerate(self.supports):
            classes = {amb.class_of(m) for m in s}
            if len(classes) != 1:
                raise ValueError(f"support {i + 1} is not homogeneous")
            out.append(classes.pop())
        return out

    def validate(self, amb: ToricAmbient) -> None:
        for i, s in enumerate(self.supports):
            if any(len(m) != amb.n_rays or min(m) < 0 for m in s):
                raise ValueError(f"support {i + 1} has a malformed exponent vector")
        self.degrees(amb)
