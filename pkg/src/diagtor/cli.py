"""Command-line entry point.

JSON is the canonical report; ``--format text`` and ``--format csv`` render
the same payload. Exit status: 0 on success or a passing verdict, 1 on a
failing verdict, 2 on usage or budget errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass

from .algebra import AlgebraFamily, algebra_id, build_table, default_cache_dir, get_algebra, save_table
from .covers import cover_for, synthesize_idempotent, verify_cover
from .errors import BudgetExceeded, DiagtorError, ObstructionError
from .exactla.rings import CoefficientRing
from .mv import build_mv, check_acyclic, export, simplex_decomposition_check
from .torlab.pipeline import THEOREMS, induced_tor_map, tor, verify_theorem

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    n: int | None = None
    ring: str = "Z"
    delta: int = 0
    q_max: int | None = None
    budget: int | None = None
    cache: str | None = None
    format: str = "json"

    def coefficient_ring(self) -> CoefficientRing:
        return CoefficientRing.parse(self.ring, self.delta)

    def to_argv(self) -> list[str]:
        """Flags that re-create this configuration (positional arguments first)."""
        argv = self.command.split()
        if self.family is not None:
            argv.append(self.family)
        if self.n is not None:
            argv.append(str(self.n))
        argv += ["--ring", self.ring, "--delta", str(self.delta), "--format", self.format]
        if self.q_max is not None:
            argv += ["--qmax", str(self.q_max)]
        if self.budget is not None:
            argv += ["--budget", str(self.budget)]
        if self.cache is not None:
            argv += ["--cache", self.cache]
        return argv


def _family(name: str) -> str:
    try:
        return AlgebraFamily.parse(name).value
    except (ValueError, DiagtorError) as exc:
        raise argparse.ArgumentTypeError(f"unknown family {name!r}") from exc


def _ring(spec: str) -> str:
    try:
        return CoefficientRing.parse(spec).spec
    except DiagtorError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


_TAG_RE = re.compile(r"([KLJ])\(?\s*(\d+)\s*(?:[,\-]\s*(\d+))?\s*\)?")


def parse_subset(spec: str) -> list[tuple]:
    """``K1,L(1,2),J3`` style subset specs; separators may be ``;`` or whitespace too."""
    tags = []
    for m in _TAG_RE.finditer(spec.replace(" ", "")):
        kind, a, b = m.group(1), int(m.group(2)), m.group(3)
        if kind == "L":
            if b is None:
                raise argparse.ArgumentTypeError(f"L needs two indices in {spec!r}")
            tags.append(("L", a, int(b)))
        else:
            if b is not None:
                raise argparse.ArgumentTypeError(f"{kind} takes one index in {spec!r}")
            tags.append((kind, a))
    if not tags:
        raise argparse.ArgumentTypeError(f"empty subset spec {spec!r}")
    return tags


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", type=_ring, default="Z", help="Z, Q, Fp:<prime> or Zmod:<m>")
    common.add_argument("--delta", type=int, default=0, help="loop value, reduced into the ring")
    common.add_argument("--qmax", type=_nonneg, default=None)
    common.add_argument("--budget", type=_positive, default=None, help="size budget overriding the defaults")
    common.add_argument("--cache", default=None, help="table cache directory (default: $DIAGTOR_CACHE_DIR)")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--format", choices=FORMATS, default="json")

    p = argparse.ArgumentParser(prog="diagtor", description="Exact computations with diagram algebras and their Tor groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def fam_n(sp):
        sp.add_argument("family", type=_family)
        sp.add_argument("n", type=_positive)

    fam_n(sub.add_parser("dim", parents=[common], help="dimension of the algebra"))
    fam_n(sub.add_parser("multable", parents=[common], help="build and cache the multiplication table"))

    cov = sub.add_parser("cover", help="idempotent covers").add_subparsers(dest="action", required=True)
    cv = cov.add_parser("verify", parents=[common])
    fam_n(cv)
    cv.add_argument("--height", type=_positive, default=None)

    idem = sub.add_parser("idem", parents=[common], help="idempotent generator for an intersection")
    fam_n(idem)
    idem.add_argument("--subset", required=True)

    mv = sub.add_parser("mv", help="Mayer-Vietoris complexes").add_subparsers(dest="action", required=True)
    for name in ("build", "check"):
        sp = mv.add_parser(name, parents=[common])
        fam_n(sp)
        sp.add_argument("--height", type=_positive, default=None)
        if name == "build":
            sp.add_argument("--out", default=None, help="directory for manifest.json and d_<p>.txt")

    t = sub.add_parser("tor", parents=[common], help="Tor of the trivial module")
    fam_n(t)
    t.add_argument("--method", choices=("bar", "minres", "auto"), default="auto")

    c = sub.add_parser("compare", parents=[common], help="induced map to the group quotient")
    fam_n(c)
    c.add_argument("--method", choices=("bar", "minres", "auto"), default="auto")

    v = sub.add_parser("verify", parents=[common], help="verify a theorem at one parameter point")
    v.add_argument("theorem", choices=THEOREMS)
    v.add_argument("n", type=_positive)
    v.add_argument("--family", type=_family, default=None)
    v.add_argument("--height", type=_positive, default=None)
    v.add_argument("--method", choices=("bar", "minres", "auto"), default="auto")
    return p


# -- rendering -------------------------------------------------------------------------


def _rows(payload: dict) -> list[dict]:
    """Flatten the tabular part of a report for CSV output."""
    if "checks" in payload:
        return [{"name": c["name"], "status": c["status"]} for c in payload["checks"]]
    if "degrees" in payload:
        return [
            {"q": d["q"], "source": d["source"]["text"], "target": d["target"]["text"], "classification": d["classification"], "expected": d["expected"] or "", "ok": "" if d["ok"] is None else d["ok"]}
            for d in payload["degrees"]
        ]
    if "groups" in payload:
        return [{"q": g["q"], "free_rank": g["free_rank"], "torsion": " ".join(map(str, g["torsion"])), "text": g["text"]} for g in payload["groups"]]
    if "subsets" in payload:
        return [{"subset": " ".join(e["subset"]), "size": e["size"], "status": e["status"]} for e in payload["subsets"]]
    return [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]


def _text(payload: dict) -> str:
    lines = []
    for k, v in payload.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            for row in v:
                lines.append("  " + ", ".join(f"{a}={b if not isinstance(b, (dict, list)) else json.dumps(b, sort_keys=True)}" for a, b in row.items()))
        elif isinstance(v, dict):
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    if fmt == "csv":
        rows = _rows(payload)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return _text(payload)


# -- commands --------------------------------------------------------------------------


def _cmd_dim(args, ring):
    aid = algebra_id(args.family, args.n)
    return {"algebra": str(aid), "dim": len(get_algebra(aid).basis)}, True


def _cmd_multable(args, ring):
    aid = algebra_id(args.family, args.n)
    cache = args.cache or default_cache_dir()
    kw = {} if args.budget is None else {"budget": args.budget}
    table = build_table(aid, cache_dir=cache, **kw)
    out = {"algebra": str(aid), "dim": table.size, "digest": table.digest}
    if cache is not None:
        out["path"] = str(save_table(table, cache))
    return out, True


def _cmd_cover(args, ring):
    rep = verify_cover(cover_for(args.family, args.n, args.height), ring)
    return rep, rep["pass"]


def _cmd_idem(args, ring):
    aid = algebra_id(args.family, args.n)
    try:
        cert = synthesize_idempotent(aid, parse_subset(args.subset), ring)
    except ObstructionError as exc:
        return {"algebra": str(aid), "subset": args.subset, "status": "obstructed", "detail": str(exc)}, False
    out = cert.to_json()
    out["status"] = "idempotent"
    return out, all(cert.checks.values()) if cert.checks else True


def _cmd_mv(args, ring):
    cover = cover_for(args.family, args.n, args.height)
    kw = {} if args.budget is None else {"budget": args.budget}
    c = build_mv(cover, **kw)
    if args.action == "build":
        out = {"algebra": str(cover.algebra), "width": cover.width, "height": cover.height, "ranks": {str(p): c.rank(p) for p in c.degrees}}
        if args.out:
            out["directory"] = str(export(c, args.out))
        return out, True
    rep = check_acyclic(c)
    rep["simplex_decomposition"] = simplex_decomposition_check(c)
    rep["algebra"] = str(cover.algebra)
    return rep, rep["square_zero"] and rep["acyclic"] and rep["simplex_decomposition"]


def _qmax(args) -> int:
    if args.qmax is None:
        raise _Usage("--qmax is required for this command")
    return args.qmax


def _cmd_tor(args, ring):
    rep = tor(algebra_id(args.family, args.n), ring, _qmax(args), args.method, args.budget)
    return rep.to_dict(), True


def _cmd_compare(args, ring):
    rep = induced_tor_map(algebra_id(args.family, args.n), ring, _qmax(args), args.method, args.budget)
    return rep.to_dict(), rep.verdict


def _cmd_verify(args, ring):
    out = verify_theorem(args.theorem, args.n, ring, args.qmax, args.method, args.budget, args.family, args.height)
    return out, out["overall"] == "pass"


class _Usage(Exception):
    pass


COMMANDS = {
    "dim": _cmd_dim,
    "multable": _cmd_multable,
    "cover": _cmd_cover,
    "idem": _cmd_idem,
    "mv": _cmd_mv,
    "tor": _cmd_tor,
    "compare": _cmd_compare,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads > 1:
        import numba

        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
    try:
        ring = CoefficientRing.parse(args.ring, args.delta)
        payload, ok = COMMANDS[args.command](args, ring)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc.what} requires {exc.required} (budget {exc.budget}); raise --budget to proceed", file=err)
        return EXIT_USAGE
    except (_Usage, DiagtorError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    if args.command == "dim" and args.format == "text":
        print(payload["dim"], file=out)
    else:
        print(render(payload, args.format), file=out)
    return EXIT_OK if ok else EXIT_FAIL


def config_from_args(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    family = getattr(args, "family", None)
    if args.command == "verify":
        family = args.theorem
    return RunConfig(command, family, args.n, args.ring, args.delta, args.qmax, args.budget, args.cache, args.format)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

