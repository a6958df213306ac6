from fractions import Fraction as F
from itertools import permutations

import pytest
from hypothesis import assume, given, strategies as st

from nefpart.geometry import Polytope
from nefpart.goodpairs import (
    GoodPair,
    GoodPairError,
    InnerPolytopeError,
    MarkedMonomialError,
    NefError,
    dual_good_pair,
    enumerate_marked_choices,
    equations_from_pair,
    good_pair_failure,
    is_delsarte,
    marked_monomials,
    matrix_transpose_permutation,
    outer_ambient,
    pair_from_equations,
    pair_matrix,
    saturated_pair,
)
from nefpart.nef import NotAGnpError, all_gnps, gnp_from_parts, is_irreducible, ray_block_map
from nefpart.toric import CoxSystem, ToricAmbient
from strategies import origin_polytopes
from worked import (
    LT_G1,
    LT_G2,
    blp2_pair,
    k3_pair,
    lt_system,
    mono,
    p5,
    poly,
    same_ambient_up_to,
    schoen_system,
    support_permutations,
    xs,
)


def P(*vs):
    return Polytope(vs)


def vertex_supports(p: GoodPair):
    """Monomials of the vertices of the inner parts only."""
    amb = outer_ambient(p)
    blocks = ray_block_map(amb, p.outer)
    return amb, [[amb.monomial(u, [int(b == i) for b in blocks]) for u in q.vertices] for i, q in enumerate(p.inner.parts)]


def grading_matches(amb, support_perms, free_rows, quotients) -> bool:
    """Some support permutation carries amb onto the grading, after relabelling its columns."""
    r = amb.n_rays
    for cols in permutations(range(r)):
        rows = [[row[c] for c in cols] for row in free_rows]
        quot = [(k, tuple(a[c] for c in cols)) for k, a in quotients]
        if any(same_ambient_up_to(amb, q, rows, quot) for q in support_perms):
            return True
    return False


# ---------------------------------------------------------------- nested pair on Bl_p P^2


def test_nested_pair():
    p = blp2_pair()
    # the sum of the two triangles is a hexagon; the four rays of P^1 x P^1 are
    # the vertices of the polar of nabla^1 below
    assert set(p.inner.delta.vertices) == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)}
    assert is_irreducible(p.inner)
    assert p.inner.parts[0] == p.outer.parts[0]
    d = dual_good_pair(p)
    # the outer GNP of the dual is the dual of the inner one
    assert d.outer.parts == (P((0, 0), (-1, 1), (-1, 0), (0, 1)), P((0, 0), (0, -1), (1, -1), (1, 0)))
    assert set(d.outer.delta.polar().vertices) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    assert dual_good_pair(d) == p


A_P = (
    (1, 1, 1, 0, 0, 0),
    (1, 0, 0, 0, 1, 0),
    (1, 0, 1, 0, 0, 1),
    (0, 0, 0, 1, 1, 1),
    (0, 1, 0, 1, 1, 0),
    (0, 1, 1, 1, 0, 1),
)
A_P_DUAL = (
    (1, 1, 1, 0, 0, 0),
    (1, 0, 0, 0, 1, 1),
    (1, 0, 1, 0, 0, 1),
    (0, 0, 0, 1, 1, 1),
    (0, 1, 0, 1, 1, 0),
    (0, 0, 1, 1, 0, 1),
)


def test_pair_matrix():
    a = pair_matrix(blp2_pair())
    assert a.entries == A_P
    assert [lbl for lbl in a.row_labels] == [
        (0, (0, 0)), (0, (0, -1)), (0, (1, 0)), (1, (0, 0)), (1, (-1, 0)), (1, (0, 1)),
    ]


def test_dual_matrix_is_transpose():
    p = blp2_pair()
    b = pair_matrix(dual_good_pair(p))
    assert b.entries == A_P_DUAL
    rows, cols = matrix_transpose_permutation(p)
    at = pair_matrix(p).transpose().entries
    assert all(at[x][y] == b.entries[r][c] for x, r in enumerate(rows) for y, c in enumerate(cols))
    # the reference transpose differs from A_P^T only by an order of the columns inside blocks
    assert sorted(map(sorted, zip(*A_P))) == sorted(map(sorted, A_P_DUAL))


def test_blp2_equations():
    amb, system = equations_from_pair(blp2_pair())
    names = xs(4, start=0)
    expected = [poly("x1x3 + x0 + x2x3", names), poly("x0x1 + x1x2x3 + x0x2", names)]
    assert list(support_permutations(system.supports, expected))
    assert amb.class_group_rank == 2


def test_p1xp1_dual_equations():
    amb, system = equations_from_pair(dual_good_pair(blp2_pair()))
    assert set(amb.rays) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    y = xs(4, "y")
    expected = [poly("y1y2 + y3y4 + y2y4", y), poly("y3y4 + y1y3 + y2y4", y)]
    assert list(support_permutations(system.supports, expected))


def test_marked_monomials_round_trip():
    p = blp2_pair()
    amb, system = equations_from_pair(p)
    marked = marked_monomials(p, amb)
    assert [sum(c) for c in zip(*marked)] == [1] * amb.n_rays
    assert pair_from_equations(amb, system, marked) == p


# ---------------------------------------------------------------- K3 in P(1,1,1,2,3)

K3_G = ("x3^4 + x1x2x4 + x4^2 + x1x5", "x2^4 + x1^2x4 + x3x5")
K3_DUAL_G = ("y1^2y5 + y1y2y3 + y3y5^2 + y4^4", "y2^4 + y3 + y4y5")


def test_k3_pair_equations():
    p = k3_pair()
    assert set(p.outer.delta.vertices) == {
        (-2, 1, -3, -3), (-2, 1, -3, 5), (-2, 1, 5, -3), (2, 1, 1, 1), (F(2, 3), F(-5, 3), F(-1, 3), F(-1, 3)),
    }
    assert not p.outer.delta.is_reflexive
    assert is_irreducible(p.inner) and is_delsarte(p)
    amb, sup = vertex_supports(p)
    expected = [poly(g, xs(5)) for g in K3_G]
    perms = list(support_permutations(sup, expected))
    assert perms
    assert any(same_ambient_up_to(amb, q, [[1, 1, 1, 2, 3]], []) for q in perms)
    # the full supports add the lattice points on edges of the inner parts
    _, system = equations_from_pair(p)
    assert all(set(map(tuple, v)) <= set(s) for v, s in zip(sup, system.supports))


def test_k3_dual():
    d = dual_good_pair(k3_pair())
    amb, sup = vertex_supports(d)
    weights, quotients = amb.fake_wps_data()
    assert sorted(weights) == [1, 2, 2, 3, 4]
    assert [q.order for q in quotients] == [3]
    perms = list(support_permutations(sup, [poly(g, xs(5, "y")) for g in K3_DUAL_G]))
    assert perms
    # the reference grading lists the weights in increasing order, not in the order of y1..y5
    assert grading_matches(amb, perms, [[1, 2, 2, 3, 4]], [(3, (0, 1, 2, 1, 0))])
    assert is_irreducible(d.inner) and is_delsarte(d)


def test_saturated_k3_pair():
    s = saturated_pair(k3_pair())
    assert s.outer == k3_pair().outer
    _, system = equations_from_pair(s)
    assert [len(x) for x in system.supports] == [25, 25]


# ---------------------------------------------------------------- P^5 examples


def test_lt_pair():
    amb, system, marked = lt_system()
    assert list(enumerate_marked_choices(amb, system)) == [tuple(marked)]
    p = pair_from_equations(amb, system, marked)
    assert is_delsarte(p)
    assert p.outer.delta.is_reflexive
    a = pair_matrix(p)
    assert len(a.entries) == len(a.entries[0])
    d = dual_good_pair(p)
    nabla1 = d.outer.delta
    assert len(nabla1.vertices) == 6
    assert not any(all(c.denominator == 1 for c in v) for v in nabla1.vertices)
    assert nabla1.polar().is_canonical
    assert d.inner.delta.is_reflexive


def test_lt_dual_ambient():
    amb, system, marked = lt_system()
    d = dual_good_pair(pair_from_equations(amb, system, marked))
    da, ds = equations_from_pair(d)
    assert da.torsion_orders == [3, 3, 9]
    y = xs(6, "y")
    perms = list(support_permutations(ds.supports, [poly(LT_G1.replace("x", "y"), y), poly(LT_G2.replace("x", "y"), y)]))
    assert perms
    quot = [(3, (0, 2, 1, 1, 1, 1)), (3, (0, 0, 0, 1, 2, 0)), (9, (0, 3, 3, 8, 2, 8))]
    assert any(same_ambient_up_to(da, q, [[1] * 6], quot) for q in perms)


def test_three_quadrics():
    names = xs(6)
    system = CoxSystem.make([poly(g, names) for g in ("x1x2 + x3^2 + x4x5", "x3x4 + x1^2 + x5x2", "x5x6 + x2x4 + x6^2")])
    marked = [mono(m, names) for m in ("x1x2", "x3x4", "x5x6")]
    p = pair_from_equations(p5(), system, marked)
    assert is_delsarte(p)
    da, ds = equations_from_pair(dual_good_pair(p))
    assert da.free_gradings == [[1] * 6] and da.torsion_orders == [5]
    y = xs(6, "y")
    expected = [poly(g, y) for g in ("y2y4 + y5y6 + y6^2", "y1^2 + y2y5 + y3y4", "y1y2 + y3^2 + y4y5")]
    perms = list(support_permutations(ds.supports, expected))
    assert perms
    assert grading_matches(da, perms, [[1] * 6], [(5, (0, 3, 1, 2, 1, 4))])


P11112_G = ("x1x2x3 + x2^3 + x4^3 + x3x5", "x4x5 + x1^3 + x2x3^2 + x1x2x4")


def test_p11112_two_mirrors():
    amb = ToricAmbient.weighted([1, 1, 1, 1, 2])
    names = xs(5)
    system = CoxSystem.make([poly(g, names) for g in P11112_G])
    choices = list(enumerate_marked_choices(amb, system))
    assert set(choices) == {
        (mono("x1x2x3", names), mono("x4x5", names)),
        (mono("x3x5", names), mono("x1x2x4", names)),
    }
    expected = {
        mono("x1x2x3", names): [[0, 1, 0, 0, 0, 1], [9, 0, 6, 7, 5, 15]],
        mono("x3x5", names): [[0, 0, 1, 0, 0, 1], [7, 5, 0, 9, 6, 12]],
    }
    for marked in choices:
        da, _ = equations_from_pair(dual_good_pair(pair_from_equations(amb, system, marked)))
        assert da.n_rays == 6 and da.class_group_rank == 2 and da.torsion_orders == []
        assert any(same_ambient_up_to(da, q, expected[marked[0]], []) for q in permutations(range(6)))


def test_p11112_hypersurface_mirror():
    amb = ToricAmbient.weighted([1, 1, 1, 1, 2])
    names = xs(5)
    system = CoxSystem.make([poly("x1x2x3 + x2^3 + x4^3 + x3x5", names), poly("x1^3 + x2x3^2 + x4x5", names)])
    p = pair_from_equations(amb, system, [mono("x1x2x3", names), mono("x4x5", names)])
    da, ds = equations_from_pair(dual_good_pair(p))
    weights, quotients = da.fake_wps_data()
    assert sorted(weights) == [5, 6, 7, 9, 15] and quotients == []
    y = xs(5, "y")
    expected = [poly("y1y2y3 + y5^2y3 + y1^3y5 + y4^3", y), poly("y3 + y2^3 + y4y5", y)]
    perms = list(support_permutations(ds.supports, expected))
    assert any(same_ambient_up_to(da, q, [[7, 5, 15, 9, 6]], []) for q in perms)


def test_schoen():
    amb, system, g1, g2 = schoen_system()
    choices = list(enumerate_marked_choices(amb, system))
    assert len(choices) == 2
    z0 = [m for m in choices if m[0][6] == 1]
    assert len(z0) == 1
    p = pair_from_equations(amb, system, z0[0])
    assert p.inner.delta.is_reflexive and is_irreducible(p.inner)
    da, ds = equations_from_pair(dual_good_pair(p))
    assert da.torsion_orders == [3, 3] and da.class_group_rank == 3 and da.n_rays == 8
    perms = list(support_permutations(ds.supports, system.supports, unordered=False))
    assert perms
    free = [[1, 1, 1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 1, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1]]
    quot = [(3, (0, 1, 2, 0, 0, 0, 0, 0)), (3, (0, 0, 0, 0, 1, 2, 0, 0))]
    assert any(same_ambient_up_to(da, q, free, quot) for q in perms)


def test_schoen_other_choice():
    amb, system, _, _ = schoen_system()
    other = [m for m in enumerate_marked_choices(amb, system) if m[0][7] == 1][0]
    da, ds = equations_from_pair(dual_good_pair(pair_from_equations(amb, system, other)))
    assert da.n_rays == 6 and da.class_group_rank == 1 and da.torsion_orders == [3, 3, 3]
    assert da.free_gradings == [[1] * 6]


# ---------------------------------------------------------------- failures


def test_marked_monomial_errors():
    amb, system, marked = lt_system()
    with pytest.raises(MarkedMonomialError):
        pair_from_equations(amb, system, [marked[0], marked[0]])
    with pytest.raises(MarkedMonomialError):
        pair_from_equations(amb, system, [marked[0]])
    with pytest.raises(MarkedMonomialError):
        pair_from_equations(amb, system, [mono("x4^3", xs(6)), marked[1]])


def test_nef_error():
    # on Bl_p P^2 the blocks {n2, n3} | {n1, n4} do not give a GNP
    amb = outer_ambient(blp2_pair())
    rays = list(amb.rays)
    blk = [rays.index(r) for r in ((-1, 1), (1, 0))]
    m1 = tuple(int(k in blk) for k in range(4))
    m2 = tuple(1 - x for x in m1)
    with pytest.raises(NefError):
        pair_from_equations(amb, CoxSystem.make([[m1], [m2]]), [m1, m2])


def test_inner_polytope_error():
    amb, _, marked = lt_system()
    # only the marked monomials: both inner parts are the origin
    with pytest.raises(InnerPolytopeError):
        pair_from_equations(amb, CoxSystem.make([[marked[0]], [marked[1]]]), marked)


def test_inner_not_contained():
    p = blp2_pair()
    swapped = gnp_from_parts(p.inner.parts[::-1])
    assert good_pair_failure(swapped, p.outer) is not None
    with pytest.raises(GoodPairError):
        GoodPair(swapped, p.outer)


def test_part_counts_must_agree():
    p = blp2_pair()
    assert good_pair_failure(p.outer, p.outer) is None
    with pytest.raises(ValueError):
        good_pair_failure(p.inner, all_gnps(p.outer.delta, s=1)[0])


# ---------------------------------------------------------------- property


@st.composite
def good_pairs(draw):
    gens = draw(origin_polytopes(box=1))
    assume(gens.polar().is_lattice)
    gs = [g for g in all_gnps(gens.polar()) if g.s > 1]
    assume(gs)
    outer = draw(st.sampled_from(gs))
    parts = []
    for q in outer.parts:
        pts = [x for x in q.lattice_points if any(x)]
        keep = draw(st.lists(st.sampled_from(pts), unique=True)) if pts and draw(st.booleans()) else pts
        parts.append(Polytope([(0,) * q.ambient_dim] + list(keep), q.ambient_dim))
    try:
        inner = gnp_from_parts(parts)
    except NotAGnpError:
        assume(False)
    assume(good_pair_failure(inner, outer) is None)
    return GoodPair(inner, outer)


@given(good_pairs())
def test_dual_matrix_is_transpose_property(p):
    a = pair_matrix(p)
    b = pair_matrix(dual_good_pair(p))
    assert set(a.row_labels) == set(b.col_labels) and set(a.col_labels) == set(b.row_labels)
    bi = {(r, c): b.entries[x][y] for x, r in enumerate(b.row_labels) for y, c in enumerate(b.col_labels)}
    for x, r in enumerate(a.row_labels):
        for y, c in enumerate(a.col_labels):
            assert a.entries[x][y] == bi[(c, r)]
