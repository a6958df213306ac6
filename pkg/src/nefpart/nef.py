"""Generalized nef partitions.

A partition of Vert(Delta^polar) into blocks I_1..I_s defines the parts

    Delta_i = {m : <m, n> >= -1 if n in I_i else 0, for all n in Vert(Delta^polar)}

and is a generalized nef partition (GNP) when Delta_1 + ... + Delta_s = Delta.
Block indices always refer to the lexicographically sorted vertices of
Delta^polar; block order is kept as given because it carries the
alignment of parts in dual constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .geometry import Polytope, minkowski_sum
from .linalg import dot, integer_kernel, nullspace, solve
from .toric import ClassElement, ToricAmbient

MAX_GNP_VERTICES = 12


class NotAGnpError(ValueError):
    pass


@dataclass(frozen=True)
class VertexPartition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & set(b):
                raise ValueError("blocks overlap")
            seen |= set(b)

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]]) -> "VertexPartition":
        return cls(tuple(tuple(sorted(int(i) for i in b)) for b in blocks))

    def canonical(self) -> "VertexPartition":
        return VertexPartition(tuple(sorted(self.blocks)))

    @property
    def s(self) -> int:
        return len(self.blocks)

    def covers(self, n: int) -> bool:
        return sorted(i for b in self.blocks for i in b) == list(range(n))

    def block_of(self, idx: int) -> int:
        for i, b in enumerate(self.blocks):
            if idx in b:
                return i
        raise KeyError(idx)


@dataclass(frozen=True, eq=False)
class GeneralizedNefPartition:
    delta: Polytope
    delta_polar: Polytope
    partition: VertexPartition
    parts: tuple[Polytope, ...]
    certificate: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeneralizedNefPartition)
            and self.delta == other.delta
            and self.partition == other.partition
            and self.parts == other.parts
        )

    def __hash__(self) -> int:
        return hash((self.delta, self.partition, self.parts))

    @property
    def s(self) -> int:
        return self.partition.s

    @property
    def dim(self) -> int:
        return self.delta.ambient_dim

    def block_vectors(self, i: int) -> list[tuple[Fraction, ...]]:
        return [self.delta_polar.vertices[k] for k in self.partition.blocks[i]]


@dataclass
class GnpCheck:
    ok: bool
    certificate: dict
    failures: list[tuple[int, tuple[int, ...]]]
    parts: tuple[Polytope, ...] = ()


def _polar_of(delta: Polytope) -> Polytope:
    if not delta.is_full_dimensional or not delta.interior_contains(delta.origin):
        raise ValueError("Delta must be full dimensional with the origin in its interior")
    return delta.polar()


def part_polytope(delta_polar: Polytope, block: Sequence[int]) -> Polytope:
    return _part_polytope(delta_polar, tuple(block))


@lru_cache(maxsize=4096)
def _part_polytope(delta_polar: Polytope, block: tuple[int, ...]) -> Polytope:
    b = set(block)
    offsets = [1 if k in b else 0 for k in range(len(delta_polar.vertices))]
    return Polytope.from_inequalities(delta_polar.vertices, offsets, ambient_dim=delta_polar.ambient_dim)


def parts_from_partition(delta: Polytope, partition: VertexPartition) -> list[Polytope]:
    polar = _polar_of(delta)
    if not partition.covers(len(polar.vertices)):
        raise ValueError("partition does not cover the vertices of the polar polytope")
    return [part_polytope(polar, b) for b in partition.blocks]


def _block_certificate(polar: Polytope, part: Polytope, block: Sequence[int]):
    """For every facet of polar, a vertex of the part meeting the facet's rays as required.

    Returns (certificate, failing facets).
    """
    b = set(block)
    cert = {}
    bad = []
    for sigma in polar.facet_vertex_sets:
        want = [(polar.vertices[k], -1 if k in b else 0) for k in sorted(sigma)]
        hit = next((m for m in part.vertices if all(dot(m, n) == t for n, t in want)), None)
        if hit is None:
            bad.append(tuple(sorted(sigma)))
        else:
            cert[tuple(sorted(sigma))] = hit
    return cert, bad


def check_gnp(delta: Polytope, partition: VertexPartition) -> GnpCheck:
    """Decide whether ``partition`` is a GNP of ``delta`` by two independent routes."""
    polar = _polar_of(delta)
    if not partition.covers(len(polar.vertices)):
        raise ValueError("partition does not cover the vertices of the polar polytope")
    parts = [part_polytope(polar, b) for b in partition.blocks]
    cert = {}
    failures = []
    for i, (p, b) in enumerate(zip(parts, partition.blocks)):
        c, bad = _block_certificate(polar, p, b)
        for sigma, m in c.items():
            cert[(i, sigma)] = m
        failures.extend((i, sigma) for sigma in bad)
    by_facets = not failures
    by_sum = minkowski_sum(parts) == delta
    if by_facets != by_sum:
        raise AssertionError("facet certificate and Minkowski sum disagree")
    return GnpCheck(by_facets, cert, failures, tuple(parts))


def is_gnp(delta: Polytope, partition: VertexPartition) -> bool:
    return check_gnp(delta, partition).ok


def make_gnp(delta: Polytope, partition: VertexPartition) -> GeneralizedNefPartition:
    chk = check_gnp(delta, partition)
    if not chk.ok:
        i, sigma = chk.failures[0]
        raise NotAGnpError(f"not a GNP: part {i + 1} fails on the facet with vertices {list(sigma)}")
    return GeneralizedNefPartition(delta, delta.polar(), partition, chk.parts, chk.certificate)


def _set_partitions(items: list[int], good, s: int | None) -> Iterator[list[tuple[int, ...]]]:
    if not items:
        yield []
        return
    if s is not None and s <= 0:
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        if s is not None and s == 1 and k != len(rest):
            continue
        for others in combinations(rest, k):
            block = (first,) + others
            if not good(block):
                continue
            remaining = [x for x in rest if x not in others]
            if s is not None and remaining and s - 1 <= 0:
                continue
            for tail in _set_partitions(remaining, good, None if s is None else s - 1):
                yield [block] + tail


def all_gnps(delta: Polytope, s: int | None = None, cap: int = MAX_GNP_VERTICES) -> list[GeneralizedNefPartition]:
    """Every GNP of ``delta`` (optionally with exactly ``s`` parts).

    The GNP condition is checked block by block, so a block that fails the
    facet condition prunes every partition containing it.
    """
    polar = _polar_of(delta)
    nv = len(polar.vertices)
    if nv > cap:
        raise ValueError(f"{nv} vertices exceeds the enumeration cap of {cap}")
    cache: dict[tuple[int, ...], bool] = {}

    def good(block):
        if block not in cache:
            cache[block] = not _block_certificate(polar, part_polytope(polar, block), block)[1]
        return cache[block]

    out = []
    for blocks in _set_partitions(list(range(nv)), good, s):
        if s is not None and len(blocks) != s:
            continue
        out.append(make_gnp(delta, VertexPartition.of(blocks)))
    out.sort(key=lambda g: (g.s, g.partition.blocks))
    return out


def gnp_from_parts(parts: Sequence[Polytope]) -> GeneralizedNefPartition:
    """Recover the partition of a GNP from its parts, and verify it."""
    delta = minkowski_sum(list(parts))
    try:
        polar = _polar_of(delta)
    except ValueError as exc:
        raise NotAGnpError(f"the sum of the parts is not a valid Delta: {exc}") from None
    blocks: list[list[int]] = [[] for _ in parts]
    for k, n in enumerate(polar.vertices):
        mins = [min(dot(m, n) for m in p.vertices) for p in parts]
        hits = [i for i, v in enumerate(mins) if v == -1]
        if len(hits) != 1 or any(v != 0 for i, v in enumerate(mins) if i != hits[0]):
            raise NotAGnpError("parts do not induce a partition of the polar vertices")
        blocks[hits[0]].append(k)
    if any(not b for b in blocks):
        raise NotAGnpError("a part induces an empty block")
    g = make_gnp(delta, VertexPartition.of(blocks))
    if g.parts != tuple(parts):
        raise NotAGnpError("parts differ from those defined by the induced partition")
    return g


def dual_gnp(g: GeneralizedNefPartition) -> GeneralizedNefPartition:
    """The dual GNP with parts nabla_j = conv(0, I_j)."""
    n = g.dim
    zero = (Fraction(0),) * n
    nablas = [Polytope([zero] + g.block_vectors(j), n) for j in range(g.s)]
    for j, nab in enumerate(nablas):
        normals, offsets = [], []
        for i, p in enumerate(g.parts):
            for m in p.vertices:
                if any(m):
                    normals.append(m)
                    offsets.append(1 if i == j else 0)
        if Polytope.from_inequalities(normals, offsets, ambient_dim=n) != nab:
            raise AssertionError("dual part differs between the two constructions")
    nabla = minkowski_sum(nablas)
    normals = [m for p in g.parts for m in p.vertices if any(m)]
    if Polytope.from_inequalities(normals, [1] * len(normals), ambient_dim=n) != nabla:
        raise AssertionError("nabla differs from the intersection of the polar parts")
    nabla_polar = nabla.polar()
    index = {v: k for k, v in enumerate(nabla_polar.vertices)}
    blocks = []
    for p in g.parts:
        blk = []
        for m in p.vertices:
            if any(m):
                if m not in index:
                    raise AssertionError("a part vertex is not a vertex of nabla^polar")
                blk.append(index[m])
        blocks.append(blk)
    part = VertexPartition.of(blocks)
    if not part.covers(len(nabla_polar.vertices)):
        raise AssertionError("dual blocks do not partition Vert(nabla^polar)")
    dual = make_gnp(nabla, part)
    if dual.parts != tuple(nablas):
        raise AssertionError("dual parts differ from conv(0, I_j)")
    return dual


@dataclass
class Irreducibility:
    irreducible: bool
    witness: tuple[int, ...] | None


def partial_sum(g: GeneralizedNefPartition, subset: Sequence[int]) -> Polytope:
    return minkowski_sum([g.parts[i] for i in subset])


def irreducibility(g: GeneralizedNefPartition) -> Irreducibility:
    """Irreducible when no proper partial sum has the origin in its relative interior."""
    lattice_check = g.delta.is_lattice and g.delta.is_canonical
    for k in range(1, g.s):
        for sub in combinations(range(g.s), k):
            p = partial_sum(g, sub)
            inside = p.relative_interior_contains(p.origin)
            if lattice_check and p.is_lattice:
                if inside != (p.n_interior_points == 1):
                    raise AssertionError("relative interior test and l* test disagree")
            if inside:
                return Irreducibility(False, sub)
    return Irreducibility(True, None)


def is_irreducible(g: GeneralizedNefPartition) -> bool:
    return irreducibility(g).irreducible


@dataclass(frozen=True, eq=False)
class DirectSummand:
    gnp: GeneralizedNefPartition
    basis: tuple[tuple[int, ...], ...]  # lattice basis of the summand inside M
    part_indices: tuple[int, ...]


def _sublattice_basis(vectors: Sequence[Sequence[Fraction]], n: int) -> list[tuple[int, ...]]:
    perp = nullspace([list(v) for v in vectors], n)
    return integer_kernel([list(c) for c in perp], n) if perp else [
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ]


def _restrict(g: GeneralizedNefPartition, idx: Sequence[int]) -> tuple[GeneralizedNefPartition, list[tuple[int, ...]]]:
    n = g.dim
    vecs = [m for i in idx for m in g.parts[i].vertices if any(m)]
    basis = _sublattice_basis(vecs, n)
    cols = [list(r) for r in zip(*basis)]

    def coords(m):
        c = solve(cols, list(m))
        if c is None:
            raise AssertionError("point outside its sublattice span")
        return c

    parts = [Polytope([coords(m) for m in g.parts[i].vertices], len(basis)) for i in idx]
    return gnp_from_parts(parts), basis


def decompose_direct_sum(g: GeneralizedNefPartition, require_lattice: bool = True) -> list[DirectSummand]:
    """Split a GNP into irreducible GNPs on complementary sublattices."""
    if require_lattice and not g.delta.is_lattice:
        raise ValueError("direct-sum decomposition needs a lattice polytope")
    out: list[DirectSummand] = []

    def rec(h: GeneralizedNefPartition, basis: list[tuple[int, ...]], labels: tuple[int, ...]):
        red = irreducibility(h)
        if red.irreducible:
            out.append(DirectSummand(h, tuple(basis), labels))
            return
        a = red.witness
        b = tuple(i for i in range(h.s) if i not in a)
        for sub in (a, b):
            hs, bs = _restrict(h, sub)
            lifted = [tuple(sum(c * v[k] for c, v in zip(vec, basis)) for k in range(len(basis[0]))) for vec in bs]
            rec(hs, lifted, tuple(labels[i] for i in sub))

    ident = [tuple(int(i == j) for j in range(g.dim)) for i in range(g.dim)]
    rec(g, ident, tuple(range(g.s)))
    out.sort(key=lambda d: d.part_indices)
    return out


def ray_block_map(amb: ToricAmbient, g: GeneralizedNefPartition) -> list[int]:
    """Block index of each ray of ``amb`` (whose rays must be Vert(Delta^polar))."""
    index = {v: k for k, v in enumerate(g.delta_polar.vertices)}
    out = []
    for r in amb.rays:
        key = tuple(Fraction(x) for x in r)
        if key not in index:
            raise ValueError("ambient rays differ from the vertices of the polar polytope")
        out.append(g.partition.block_of(index[key]))
    if len(out) != len(index):
        raise ValueError("ambient rays differ from the vertices of the polar polytope")
    return out


def nef_divisors(amb: ToricAmbient, g: GeneralizedNefPartition) -> list[tuple[tuple[int, ...], ClassElement]]:
    """Divisors N_i = sum of D_rho over the block I_i, with their classes."""
    blocks = ray_block_map(amb, g)
    out = []
    for i in range(g.s):
        coeffs = tuple(int(b == i) for b in blocks)
        if amb.divisor_polytope(coeffs) != g.parts[i]:
            raise AssertionError("divisor polytope differs from the GNP part")
        out.append((coeffs, amb.class_of(coeffs)))
    return out
