"""JSON encodings of polytopes, partitions, GNPs, good pairs, systems and verdicts.

Rational coordinates are written as strings ``"p/q"`` (or ``"p"``).
Decoders raise :class:`InputError` carrying a JSON pointer to the offending
value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .geometry import Polytope
from .goodpairs import GoodPair
from .linalg import frac
from .nef import GeneralizedNefPartition, VertexPartition, gnp_from_parts, make_gnp
from .regularity import CYReport, QsVerdict, WellFormed
from .toric import CoxSystem, ToricAmbient

FORMAT_VERSION = 1


class InputError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _need(obj: Any, key: str, ptr: str):
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected an object")
    if key not in obj:
        raise InputError(ptr, f"missing key '{key}'")
    return obj[key]


def _vector(v: Any, ptr: str, length: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise InputError(ptr, "expected a list of numbers")
    out = []
    for i, x in enumerate(v):
        try:
            out.append(frac(x))
        except (TypeError, ValueError, ZeroDivisionError):
            raise InputError(f"{ptr}/{i}", f"not a rational number: {x!r}") from None
    if length is not None and len(out) != length:
        raise InputError(ptr, f"expected {length} coordinates, got {len(out)}")
    return tuple(out)


def _int_vector(v: Any, ptr: str, length: int | None = None) -> tuple[int, ...]:
    q = _vector(v, ptr, length)
    if any(x.denominator != 1 for x in q):
        raise InputError(ptr, "expected integers")
    return tuple(int(x) for x in q)


# ---------------------------------------------------------------- polytopes


def polytope_to_json(p: Polytope, h_form: bool = False) -> dict:
    out: dict[str, Any] = {
        "ambient_dim": p.ambient_dim,
        "vertices": [[_q(x) for x in v] for v in p.vertices],
    }
    if h_form:
        out["normals"] = [list(f.normal) for f in p.facets]
        out["offsets"] = [_q(f.offset) for f in p.facets]
        out["equations"] = [{"normal": list(e.normal), "offset": _q(e.offset)} for e in p.equations]
    return out


def polytope_from_json(obj: Any, ptr: str = "") -> Polytope:
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected a polytope object")
    n = obj.get("ambient_dim")
    if n is not None and (not isinstance(n, int) or n < 0):
        raise InputError(f"{ptr}/ambient_dim", "expected a nonnegative integer")
    if "vertices" in obj:
        verts = obj["vertices"]
        if not isinstance(verts, list):
            raise InputError(f"{ptr}/vertices", "expected a list of points")
        if n is None:
            if not verts:
                raise InputError(ptr, "ambient_dim is required for an empty polytope")
            n = len(verts[0]) if isinstance(verts[0], list) else 0
        pts = [_vector(v, f"{ptr}/vertices/{i}", n) for i, v in enumerate(verts)]
        return Polytope(pts, n)
    if "normals" in obj:
        normals = _need(obj, "normals", ptr)
        offsets = _need(obj, "offsets", ptr)
        if not isinstance(normals, list) or not isinstance(offsets, list) or len(normals) != len(offsets):
            raise InputError(ptr, "normals and offsets must be lists of equal length")
        if n is None:
            n = len(normals[0]) if normals else None
        if n is None:
            raise InputError(ptr, "cannot infer ambient_dim")
        a = [_vector(v, f"{ptr}/normals/{i}", n) for i, v in enumerate(normals)]
        b = [_vector([x], f"{ptr}/offsets/{i}")[0] for i, x in enumerate(offsets)]
        eqs = []
        for i, e in enumerate(obj.get("equations", [])):
            eqs.append((_vector(_need(e, "normal", f"{ptr}/equations/{i}"), f"{ptr}/equations/{i}/normal", n),
                        _vector([_need(e, "offset", f"{ptr}/equations/{i}")], f"{ptr}/equations/{i}/offset")[0]))
        try:
            return Polytope.from_inequalities(a, b, eqs, ambient_dim=n)
        except ValueError as exc:
            raise InputError(ptr, str(exc)) from None
    raise InputError(ptr, "a polytope needs 'vertices' or 'normals' and 'offsets'")


# ---------------------------------------------------------------- partitions and GNPs


def partition_to_json(p: VertexPartition) -> dict:
    return {"blocks": [list(b) for b in p.blocks]}


def partition_from_json(obj: Any, ptr: str = "") -> VertexPartition:
    blocks = _need(obj, "blocks", ptr)
    if not isinstance(blocks, list) or not blocks:
        raise InputError(f"{ptr}/blocks", "expected a nonempty list of blocks")
    parsed = [list(_int_vector(b, f"{ptr}/blocks/{i}")) for i, b in enumerate(blocks)]
    try:
        return VertexPartition.of(parsed)
    except ValueError as exc:
        raise InputError(f"{ptr}/blocks", str(exc)) from None


def gnp_to_json(g: GeneralizedNefPartition) -> dict:
    return {
        "polytope": polytope_to_json(g.delta),
        "polar": polytope_to_json(g.delta_polar),
        "partition": partition_to_json(g.partition),
        "parts": [polytope_to_json(p) for p in g.parts],
    }


def gnp_from_json(obj: Any, ptr: str = "") -> GeneralizedNefPartition:
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected a GNP object")
    try:
        if "polytope" in obj and "partition" in obj:
            delta = polytope_from_json(obj["polytope"], f"{ptr}/polytope")
            part = partition_from_json(obj["partition"], f"{ptr}/partition")
            return make_gnp(delta, part)
        if "parts" in obj:
            parts = [polytope_from_json(p, f"{ptr}/parts/{i}") for i, p in enumerate(obj["parts"])]
            return gnp_from_parts(parts)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(ptr, str(exc)) from None
    raise InputError(ptr, "a GNP needs 'polytope' and 'partition', or 'parts'")


def goodpair_to_json(p: GoodPair) -> dict:
    return {"inner": gnp_to_json(p.inner), "outer": gnp_to_json(p.outer)}


def goodpair_from_json(obj: Any, ptr: str = "") -> GoodPair:
    inner = gnp_from_json(_need(obj, "inner", ptr), f"{ptr}/inner")
    outer = gnp_from_json(_need(obj, "outer", ptr), f"{ptr}/outer")
    try:
        return GoodPair(inner, outer)
    except ValueError as exc:
        raise InputError(ptr, str(exc)) from None


# ---------------------------------------------------------------- ambients and systems


def ambient_to_json(a: ToricAmbient) -> dict:
    out: dict[str, Any] = {
        "rays": [list(r) for r in a.rays],
        "free_gradings": a.free_gradings,
        "quotient_gradings": [{"order": q.order, "residues": list(q.residues)} for q in a.quotient_gradings],
    }
    data = a.fake_wps_data()
    if data is not None:
        out["weights"] = data[0]
    return out


def ambient_from_json(obj: Any, ptr: str = "") -> ToricAmbient:
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected an ambient object")
    try:
        if "rays" in obj:
            rays = obj["rays"]
            if not isinstance(rays, list) or not rays:
                raise InputError(f"{ptr}/rays", "expected a nonempty list of rays")
            n = len(rays[0]) if isinstance(rays[0], list) else None
            return ToricAmbient([_int_vector(r, f"{ptr}/rays/{i}", n) for i, r in enumerate(rays)])
        if "weights" in obj:
            return ToricAmbient.weighted(_int_vector(obj["weights"], f"{ptr}/weights"))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(ptr, str(exc)) from None
    raise InputError(ptr, "an ambient needs 'rays' or 'weights'")


def system_to_json(a: ToricAmbient, s: CoxSystem, marked=None) -> dict:
    out: dict[str, Any] = {
        "ambient": ambient_to_json(a),
        "supports": [[list(m) for m in sup] for sup in s.supports],
    }
    if marked is not None:
        out["marked"] = [list(m) for m in marked]
    return out


def system_from_json(obj: Any, ptr: str = "") -> tuple[ToricAmbient, CoxSystem, list | None]:
    amb = ambient_from_json(_need(obj, "ambient", ptr), f"{ptr}/ambient")
    sups = _need(obj, "supports", ptr)
    if not isinstance(sups, list) or not sups:
        raise InputError(f"{ptr}/supports", "expected a nonempty list of supports")
    parsed = []
    for i, sup in enumerate(sups):
        if not isinstance(sup, list) or not sup:
            raise InputError(f"{ptr}/supports/{i}", "expected a nonempty list of exponent vectors")
        parsed.append([_int_vector(m, f"{ptr}/supports/{i}/{j}", amb.n_rays) for j, m in enumerate(sup)])
    for i, sup in enumerate(parsed):
        for j, m in enumerate(sup):
            if min(m) < 0:
                raise InputError(f"{ptr}/supports/{i}/{j}", "negative exponent")
    system = CoxSystem.make(parsed)
    try:
        system.validate(amb)
    except ValueError as exc:
        raise InputError(f"{ptr}/supports", str(exc)) from None
    marked = None
    if obj.get("marked") is not None:
        marked = [_int_vector(m, f"{ptr}/marked/{i}", amb.n_rays) for i, m in enumerate(obj["marked"])]
    return amb, system, marked


# ---------------------------------------------------------------- verdicts


def verdict_to_json(qs: QsVerdict, wf: WellFormed | None = None, cy: CYReport | None = None) -> dict:
    return {
        "quasismooth": qs.quasismooth,
        "well_formed": None if wf is None else wf.ok,
        "cy": None if cy is None else cy.cy,
        "witness": None if qs.witness is None else qs.witness.labels(),
        "well_formed_witness": None if wf is None or wf.witness is None else [f"x{i + 1}" for i in wf.witness],
        "checks": {} if cy is None else dict(cy.checks),
        "budget_exceeded": qs.budget_exceeded,
        "strata_checked": qs.strata_checked,
    }
