"""Builders for the worked examples and small helpers shared by the tests."""

from __future__ import annotations

import re
from fractions import Fraction as F
from itertools import permutations
from typing import Sequence

from nefpart.geometry import Polytope
from nefpart.goodpairs import GoodPair
from nefpart.nef import gnp_from_parts
from nefpart.toric import CoxSystem, ToricAmbient, ambient_lattice, grading_kernel, same_lattice

_TERM = re.compile(r"([a-z])(\d+)(?:\^(\d+))?")


def mono(text: str, names: Sequence[str]) -> tuple[int, ...]:
    """'x1^2t2' -> exponent vector over ``names``; '1' is the zero vector."""
    e = [0] * len(names)
    text = text.replace(" ", "")
    if text == "1":
        return tuple(e)
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        e[names.index(m.group(1) + m.group(2))] += int(m.group(3) or 1)
    if pos != len(text):
        raise ValueError(f"cannot parse {text!r}")
    return tuple(e)


def poly(text: str, names: Sequence[str]) -> frozenset[tuple[int, ...]]:
    return frozenset(mono(t, names) for t in text.split("+"))


def xs(r: int, var: str = "x", start: int = 1) -> list[str]:
    return [f"{var}{i}" for i in range(start, start + r)]


def permute(m: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    """Move coordinate j to position perm[j]."""
    out = [0] * len(m)
    for j, x in enumerate(m):
        out[perm[j]] = x
    return tuple(out)


def support_permutations(ours, theirs, unordered: bool = True):
    """Variable permutations taking our supports onto theirs (as sets of monomials)."""
    ours = [frozenset(map(tuple, s)) for s in ours]
    theirs = [frozenset(map(tuple, s)) for s in theirs]
    r = len(next(iter(ours[0])))
    targets = [theirs] if not unordered else [list(p) for p in permutations(theirs)]
    for perm in permutations(range(r)):
        mapped = [frozenset(permute(m, perm) for m in s) for s in ours]
        if any(mapped == t for t in targets):
            yield perm


def lattice_of(free_rows, quotients) -> list[tuple[int, ...]]:
    return grading_kernel(free_rows, [(k, list(a)) for k, a in quotients])


def same_ambient_up_to(amb: ToricAmbient, perm, free_rows, quotients) -> bool:
    """Does amb, after renaming variables by perm, carry the given grading?"""
    ours = [permute(v, perm) for v in ambient_lattice(amb)]
    return same_lattice(ours, lattice_of(free_rows, quotients))


# ---------------------------------------------------------------- P(1,1,3)

P113_DELTA = Polytope([(-1, -3), (-1, 2), (F(2, 3), F(1, 3))])
# the rays in the order n1, n2, n3 of the worked example
P113_N = [(1, 0), (-1, -1), (-2, 1)]


def p113_index(n) -> int:
    """Index of a ray among the lexicographically sorted vertices of the polar."""
    return list(P113_DELTA.polar().vertices).index(tuple(F(x) for x in n))


# ---------------------------------------------------------------- Bl_p P^2

BLP2_DELTA = Polytope([(2, 1), (-1, 1), (-1, -1), (0, -1)])
BLP2_N = [(0, -1), (-1, 1), (1, 0), (0, 1)]


def blp2_index(n) -> int:
    return list(BLP2_DELTA.polar().vertices).index(tuple(F(x) for x in n))


def blp2_pair() -> GoodPair:
    outer = gnp_from_parts([Polytope([(0, 0), (0, -1), (1, 0)]), Polytope([(0, 0), (-1, 1), (-1, 0), (1, 1)])])
    inner = gnp_from_parts([Polytope([(0, 0), (0, -1), (1, 0)]), Polytope([(0, 0), (-1, 0), (0, 1)])])
    return GoodPair(inner, outer)


# ---------------------------------------------------------------- K3 in P(1,1,1,2,3)

K3_RAYS = [(0, 1, -1, -1), (-1, 0, 0, 1), (-1, 0, 1, 0), (1, 1, 0, 0), (0, -1, 0, 0)]
K3_D21 = Polytope([(-1, 0, -1, -2), (-1, 0, -1, 2), (-1, 0, 3, -2), (1, 0, 1, 0), (F(1, 3), F(-4, 3), F(1, 3), F(-2, 3))])
K3_D22 = Polytope([(-1, 1, -2, -1), (-1, 1, -2, 3), (-1, 1, 2, -1), (1, 1, 0, 1), (F(1, 3), F(-1, 3), F(-2, 3), F(1, 3))])
K3_D11 = Polytope([(0, -1, 0, -1), (-1, 0, 3, -2), (1, 0, 1, 0), (0, 0, 0, 0)])
K3_D12 = Polytope([(-1, 1, -2, 3), (0, 1, -1, 0), (0, 0, 0, 0)])


def k3_ambient() -> ToricAmbient:
    return ToricAmbient(K3_RAYS)


def k3_pair() -> GoodPair:
    return GoodPair(gnp_from_parts([K3_D11, K3_D12]), gnp_from_parts([K3_D21, K3_D22]))


# ---------------------------------------------------------------- P^5 examples


def e(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def p5() -> ToricAmbient:
    return ToricAmbient([e(i, 5) for i in range(5)] + [(-1,) * 5])


LT_G1 = "x1x2x3 + x4^3 + x5^3 + x6^3"
LT_G2 = "x4x5x6 + x1^3 + x2^3 + x3^3"


def lt_system() -> tuple[ToricAmbient, CoxSystem, list]:
    names = xs(6)
    g1, g2 = poly(LT_G1, names), poly(LT_G2, names)
    return p5(), CoxSystem.make([g1, g2]), [mono("x1x2x3", names), mono("x4x5x6", names)]


# ---------------------------------------------------------------- Schoen's fibre product

SCHOEN_NAMES = ["x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1"]
SCHOEN_G1 = "z0x0^3 + z0x1^3 + z0x2^3 + z0x0x1x2 + z1x0x1x2"
SCHOEN_G2 = "z0y0y1y2 + z1y0^3 + z1y1^3 + z1y2^3 + z1y0y1y2"


def _schoen_mono(text):
    e_ = [0] * 8
    for m in re.finditer(r"([xyz]\d)(?:\^(\d+))?", text.replace(" ", "")):
        e_[SCHOEN_NAMES.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(e_)


def schoen_system():
    """P^2 x P^2 x P^1 with rays ordered x0, x1, x2, y0, y1, y2, z0, z1."""
    amb = ToricAmbient([(-1, -1, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0),
                        (0, 0, -1, -1, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0),
                        (0, 0, 0, 0, 1), (0, 0, 0, 0, -1)])
    g1 = [_schoen_mono(t) for t in SCHOEN_G1.split("+")]
    g2 = [_schoen_mono(t) for t in SCHOEN_G2.split("+")]
    return amb, CoxSystem.make([g1, g2]), g1, g2


def schoen_mono(text):
    return _schoen_mono(text)


# ---------------------------------------------------------------- P(1,1,1,2) quasismoothness example

QS_NAMES = ["x1", "x2", "x3", "x4", "t1", "t2"]
QS_G1 = "x1x2 + x3^2 + x4"
QS_G2 = "x1^3 + x3^3 + x2x4 + x2^2x3 + x3x4"


def qs_system():
    amb = ToricAmbient.weighted([1, 1, 1, 2])
    names = xs(4)
    return amb, CoxSystem.make([poly(QS_G1, names), poly(QS_G2, names)])
