"""Command-line interface.

Exit status: 0 on success, 2 when the answer to the question asked is
"no" (not a GNP, not quasismooth, ...), 1 on unreadable or invalid input.
All output is JSON with sorted keys, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .classify import DEFAULT_SEARCH_BUDGET, ClassificationBudgetExceeded, classify_vector
from .goodpairs import (
    GoodPair,
    GoodPairError,
    dual_good_pair,
    enumerate_marked_choices,
    equations_from_pair,
    good_pair_failure,
    marked_monomials,
    matrix_transpose_permutation,
    pair_from_equations,
    pair_matrix,
)
from .nef import all_gnps, check_gnp, dual_gnp, irreducibility, make_gnp
from .regularity import DEFAULT_BUDGET, is_cy_family, is_quasismooth_ci, is_well_formed
from .serialize import (
    InputError,
    gnp_from_json,
    gnp_to_json,
    goodpair_from_json,
    goodpair_to_json,
    partition_from_json,
    partition_to_json,
    polytope_from_json,
    system_from_json,
    system_to_json,
    verdict_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_FALSE = 0, 1, 2


class _Result:
    def __init__(self, payload: Any, ok: bool = True, text: str | None = None):
        self.payload, self.ok, self.text = payload, ok, text


# ---------------------------------------------------------------- input helpers


def _load(arg: str | None, stdin: bool, name: str) -> Any:
    """Parse an option that may be inline JSON, a file path or '-' for stdin."""
    if arg is None or arg == "-":
        if arg is None and not stdin:
            raise InputError("", f"--{name} is required")
        text, where = sys.stdin.read(), "<stdin>"
    elif arg.lstrip().startswith(("{", "[")):
        text, where = arg, f"--{name}"
    else:
        try:
            text, where = Path(arg).read_text(), arg
        except OSError as exc:
            raise InputError("", f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("", f"{where}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("NEFPART_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError("", "NEFPART_BUDGET must be an integer") from None
    return DEFAULT_BUDGET


def _gnp_input(args):
    if args.stdin and args.polytope is None:
        return gnp_from_json(_load(None, True, "polytope"))
    obj = _load(args.polytope, False, "polytope")
    if isinstance(obj, dict) and "polytope" in obj and args.partition is None:
        return gnp_from_json(obj)
    delta = polytope_from_json(obj)
    part = partition_from_json(_load(args.partition, False, "partition"), "")
    return delta, part


def _pair_input(args) -> GoodPair:
    return goodpair_from_json(_load(args.goodpair, args.stdin, "goodpair"))


def _system_input(args):
    """A Cox system, or a good pair which is turned into its equations."""
    src = args.system if args.system is not None else args.goodpair
    obj = _load(src, args.stdin, "system")
    if isinstance(obj, dict) and "inner" in obj:
        amb, system = equations_from_pair(goodpair_from_json(obj))
        return amb, system, None
    return system_from_json(obj)


# ---------------------------------------------------------------- commands


def cmd_gnp(args) -> _Result:
    got = _gnp_input(args)
    if not isinstance(got, tuple):
        return _Result({"is_gnp": True, "gnp": gnp_to_json(got)})
    delta, part = got
    if not part.covers(len(delta.polar().vertices)):
        raise InputError("/blocks", "blocks must partition the vertices of the polar polytope")
    chk = check_gnp(delta, part)
    out: dict[str, Any] = {"is_gnp": chk.ok}
    if chk.ok:
        out["gnp"] = gnp_to_json(make_gnp(delta, part))
    else:
        out["witness"] = [{"part": i, "facet": list(f)} for i, f in chk.failures]
    return _Result(out, chk.ok)


def cmd_all_gnps(args) -> _Result:
    delta = polytope_from_json(_load(args.polytope, args.stdin, "polytope"))
    gs = all_gnps(delta, s=args.s)
    return _Result({"count": len(gs), "partitions": [partition_to_json(g.partition) for g in gs]})


def cmd_dual(args) -> _Result:
    if args.goodpair is not None or (args.stdin and args.polytope is None and _peek_pair(args)):
        return _Result(goodpair_to_json(dual_good_pair(_pair_input(args))))
    got = _gnp_input(args)
    g = got if not isinstance(got, tuple) else _make(*got)
    return _Result(gnp_to_json(dual_gnp(g)))


def _peek_pair(args) -> bool:
    # stdin can only be read once; stash it for the loader
    text = sys.stdin.read()
    sys.stdin = io.StringIO(text)
    try:
        return "inner" in json.loads(text)
    except (json.JSONDecodeError, TypeError):
        return False


def _make(delta, part):
    try:
        return make_gnp(delta, part)
    except ValueError as exc:
        raise InputError("", str(exc)) from None


def cmd_irreducible(args) -> _Result:
    got = _gnp_input(args)
    g = got if not isinstance(got, tuple) else _make(*got)
    irr = irreducibility(g)
    return _Result({"irreducible": irr.irreducible, "witness": None if irr.witness is None else list(irr.witness)},
                   irr.irreducible)


def cmd_goodpair(args) -> _Result:
    obj = _load(args.goodpair, args.stdin, "goodpair")
    if not isinstance(obj, dict) or "inner" not in obj or "outer" not in obj:
        raise InputError("", "expected an object with 'inner' and 'outer'")
    inner = gnp_from_json(obj["inner"], "/inner")
    outer = gnp_from_json(obj["outer"], "/outer")
    why = good_pair_failure(inner, outer)
    return _Result({"is_good_pair": why is None, "reason": why}, why is None)


def cmd_matrix(args) -> _Result:
    p = _pair_input(args)
    a = pair_matrix(p)
    perm = matrix_transpose_permutation(p)

    def labels(ls):
        return [{"part": i, "vertex": [str(x) for x in v]} for i, v in ls]

    out = {
        "matrix": [list(r) for r in a.entries],
        "row_labels": labels(a.row_labels),
        "col_labels": labels(a.col_labels),
        "dual_transpose_permutation": None if perm is None else {"rows": perm[0], "cols": perm[1]},
    }
    return _Result(out, text=_grid(a.entries) if args.format == "csv" else None)


def _grid(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_eqs(args) -> _Result:
    p = _pair_input(args)
    amb, system = equations_from_pair(p)
    return _Result(system_to_json(amb, system, marked_monomials(p, amb)))


def cmd_eqs_to_pol(args) -> _Result:
    amb, system, marked = system_from_json(_load(args.system, args.stdin, "system"))
    if args.marked is not None:
        m = _load(args.marked, False, "marked")
        _, _, marked = system_from_json({"ambient": {"rays": [list(r) for r in amb.rays]},
                                         "supports": [[list(x) for x in s] for s in system.supports],
                                         "marked": m})
    choices = [marked] if marked is not None else list(enumerate_marked_choices(amb, system))
    pairs, errors = [], []
    for ch in choices:
        try:
            pairs.append({"marked": [list(x) for x in ch], "goodpair": goodpair_to_json(pair_from_equations(amb, system, ch))})
        except GoodPairError as exc:
            errors.append({"marked": [list(x) for x in ch], "error": type(exc).__name__, "reason": str(exc)})
    if marked is not None:
        if pairs:
            return _Result(pairs[0]["goodpair"])
        return _Result(errors[0], False)
    return _Result({"pairs": pairs, "rejected": errors}, bool(pairs))


def cmd_qsci(args) -> _Result:
    amb, system, _ = _system_input(args)
    v = is_quasismooth_ci(amb, system, _budget(args))
    wf = is_well_formed(amb, system)
    return _Result(verdict_to_json(v, wf), v.quasismooth is True)


def cmd_iscy(args) -> _Result:
    amb, system, _ = _system_input(args)
    rep = is_cy_family(amb, system, _budget(args))
    return _Result(verdict_to_json(rep.quasismooth, rep.well_formed, rep), rep.cy)


# ---------------------------------------------------------------- classification


def _read_vectors(path: str) -> list[tuple[int, ...]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError("", f"cannot read {path}: {exc.strerror}") from None
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        try:
            v = tuple(int(x) for x in line.split())
        except ValueError:
            raise InputError(f"/{ln}", f"line {ln}: expected integers") from None
        if len(v) != 7 or min(v) <= 0 or v[0] + v[1] != sum(v[2:]):
            raise InputError(f"/{ln}", f"line {ln}: expected m n w1..w5 with m + n = w1 + ... + w5")
        out.append(v)
    return out


def _vector_key(v: Sequence[int]) -> str:
    return hashlib.sha256(json.dumps(list(v)).encode()).hexdigest()[:16]


def _classify_one(v: tuple[int, ...], budget: int = DEFAULT_SEARCH_BUDGET) -> dict:
    try:
        rows = classify_vector(v, budget=budget)
    except ClassificationBudgetExceeded as exc:
        return {"vector": list(v), "status": "budget", "reason": str(exc), "rows": []}
    except (ValueError, MemoryError) as exc:
        return {"vector": list(v), "status": "error", "reason": str(exc), "rows": []}
    return {"vector": list(v), "status": "ok", "rows": [r.as_row() for r in rows]}


def _load_checkpoint(path: Path) -> dict[str, dict]:
    done: dict[str, dict] = {}
    if path.exists():
        for line in path.read_text().splitlines():
            try:
                rec = json.loads(line)
                done[rec["key"]] = rec["result"]
            except (json.JSONDecodeError, KeyError, TypeError):
                continue  # a torn last line from an interrupted run
    return done


def cmd_classify_k3(args) -> _Result:
    vectors = _read_vectors(args.weights)
    ckpt = Path(args.checkpoint) if args.checkpoint else None
    done = _load_checkpoint(ckpt) if ckpt else {}
    todo = [v for v in dict.fromkeys(vectors) if _vector_key(v) not in done]

    def record(v, res):
        done[_vector_key(v)] = res
        if ckpt and res["status"] != "budget":  # retried by a run with a larger budget
            with ckpt.open("a") as fh:
                fh.write(json.dumps({"key": _vector_key(v), "result": res}, sort_keys=True) + "\n")

    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            for v, res in zip(todo, pool.map(partial(_classify_one, budget=args.budget), todo)):
                record(v, res)
    else:
        for v in todo:
            record(v, _classify_one(v, args.budget))
    results = [done[_vector_key(v)] for v in dict.fromkeys(vectors)]
    rows = [row for res in results for row in res["rows"]]
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        fields = list(rows[0]) if rows else ["vector"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    flagged = [{"vector": r["vector"], "status": r["status"], "reason": r.get("reason")} for r in results if r["status"] != "ok"]
    return _Result({"count": len(rows), "rows": rows, "flagged": flagged}, text=text)


# ---------------------------------------------------------------- driver


COMMANDS = {
    "gnp": (cmd_gnp, "check whether a vertex partition is a generalized nef partition"),
    "all-gnps": (cmd_all_gnps, "list all generalized nef partitions of a polytope"),
    "dual": (cmd_dual, "dual GNP or dual good pair"),
    "irreducible": (cmd_irreducible, "check irreducibility of a GNP"),
    "goodpair": (cmd_goodpair, "check whether two GNPs form a good pair"),
    "matrix": (cmd_matrix, "pairing matrix of a good pair"),
    "eqs": (cmd_eqs, "Cox equations of a good pair"),
    "eqs-to-pol": (cmd_eqs_to_pol, "good pair(s) from Cox equations and marked monomials"),
    "qsci": (cmd_qsci, "quasismoothness of a complete intersection"),
    "iscy": (cmd_iscy, "check the Calabi-Yau hypotheses for a family"),
    "classify-k3": (cmd_classify_k3, "Delsarte quasismooth codimension-2 K3 pairs in P(w1..w5)"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nefpart", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"nefpart {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output", "-o", help="write the result here (atomically) instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--stdin", action="store_true", help="read the main input from standard input")
        if name in ("gnp", "all-gnps", "dual", "irreducible"):
            p.add_argument("--polytope", help="polytope JSON (file, inline, or '-')")
        if name in ("gnp", "dual", "irreducible"):
            p.add_argument("--partition", help="partition JSON (file or inline)")
        if name == "all-gnps":
            p.add_argument("--s", type=int, default=None, help="only partitions with this many blocks")
        if name in ("dual", "goodpair", "matrix", "eqs", "qsci", "iscy"):
            p.add_argument("--goodpair", help="good pair JSON")
        if name in ("eqs-to-pol", "qsci", "iscy"):
            p.add_argument("--system", help="Cox system JSON")
        if name == "eqs-to-pol":
            p.add_argument("--marked", help="marked monomials (JSON list of exponent lists)")
        if name in ("qsci", "iscy"):
            p.add_argument("--budget", type=int, default=None, help=f"stratum budget (default {DEFAULT_BUDGET}, env NEFPART_BUDGET)")
        if name == "classify-k3":
            p.add_argument("--weights", required=True, help="file with one vector m n w1 .. w5 per line")
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--checkpoint", help="JSON-lines file of finished vectors, for resuming")
            p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                           help=f"candidate supports examined per vector (default {DEFAULT_SEARCH_BUDGET})")
    return ap


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        res = func(args)
    except InputError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "pointer": exc.pointer or "/"}, sort_keys=True) + "\n")
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(json.dumps({"error": f"invalid input: {exc}", "pointer": "/"}, sort_keys=True) + "\n")
        return EXIT_INPUT
    text = res.text if res.text is not None else json.dumps(res.payload, sort_keys=True, indent=1) + "\n"
    _write(text, args.output)
    return EXIT_OK if res.ok else EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
