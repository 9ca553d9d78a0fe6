"""Command-line entry point: ``tame-params``.

Exit codes: 0 success, 1 validation or usage error, 2 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import CATALOG_NAMES, catalog as build_catalog
from .dl import dl_forward, dl_inverse, make_presentation, niveau, presentation_to_json
from .errors import TameParamsError
from .lattice import TorsionVector
from .rootdatum import parse_word, spec_from_json, validate, word_matrix
from .serre import (
    herzig_R,
    is_regular,
    make_weight,
    restricted_box,
    restricted_representative,
    serre_recipe,
)
from .twisted import canonical_tf, check_level, enumerate_tame_types, frame, is_rational, TameInertialType

SPEC_SCHEMA = """group spec JSON fields:
  name: str, rank: int, roots: [[int]], coroots: [[int]] (aligned with roots),
  simple: [int] (indices into roots), frobenius_matrix: [[int]], inertia_matrix: [[int]],
  p: int, q: int (power of p), e: int (order of inertia_matrix, prime to p)"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "y"):
        return True
    if t in ("0", "false", "no", "n"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")


def _fracs(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in text.replace(" ", "").split(",") if x != "")


# ---------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def format_table(rows: list[dict]) -> str:
    if not rows:
        return "(empty)"
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
        return
    if isinstance(obj, dict) and "results" in obj and isinstance(obj["results"], list):
        head = {k: v for k, v in obj.items() if k != "results"}
        out.write(format_table([head]) + "\n\n" + format_table(obj["results"]) + "\n")
    elif isinstance(obj, list):
        out.write(format_table(obj) + "\n")
    else:
        out.write(format_table([obj]) + "\n")


def class_json(c) -> list[str]:
    return [str(x) for x in c.rep.coords]


def type_json(t: TameInertialType) -> dict:
    spec = t.cls.spec
    return {"class": class_json(t.cls), "level": t.cls.level,
            "witnesses": [" ".join(f"s{i + 1}" for i in w) or "e" for w in t.witness_words()],
            "rational_classes": len(dl_inverse(t).presentations),
            "niveau": [niveau(spec, hp) for hp in dl_inverse(t).presentations]}


# ---------------------------------------------------------------------------
# group selection


def _add_group_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("group")
    g.add_argument("--spec", help="group spec JSON file")
    g.add_argument("--catalog", help=f"catalog name ({', '.join(CATALOG_NAMES)})")
    g.add_argument("--n", type=int)
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--f", type=int, default=2, help="degree for res-gl / res-sl")
    g.add_argument("--ramified", type=_bool, default=False)


def load_spec(args):
    if args.spec:
        with open(args.spec) as fh:
            spec = spec_from_json(json.load(fh))
        validate(spec)
        return spec
    if args.catalog:
        return build_catalog(args.catalog, n=args.n, q=args.q, ramified=args.ramified, f=args.f)
    raise UsageError("choose a group with --spec FILE.json or --catalog NAME")


def _type_of_class(spec, coords) -> TameInertialType:
    c = canonical_tf(spec, TorsionVector(coords, spec.p))
    wit = is_rational(c)
    if not wit:
        raise TameParamsError(f"class {class_json(c)} is not Frobenius-stable")
    return TameInertialType(c, tuple(wit))


# ---------------------------------------------------------------------------
# commands


def cmd_group(args):
    if args.action == "list":
        return [{"name": n} for n in CATALOG_NAMES]
    spec = load_spec(args)
    if args.action == "show":
        d = spec.to_json()
        d["coinvariant_rank"] = frame(spec).dim
        d["omega_theta_order"] = frame(spec).omega.order
        return d
    return {"name": spec.name, "valid": True}


def cmd_tame_types(args):
    spec = load_spec(args)
    check_level(spec, args.level)
    return [type_json(t) for t in enumerate_tame_types(spec, args.level)]


def cmd_dl(args):
    spec = load_spec(args)
    if args.action == "forward":
        if args.w is None or args.mu is None:
            raise UsageError("dl forward needs --w WORD and --mu CSV")
        w = word_matrix(spec.datum, parse_word(args.w))
        hp = make_presentation(spec, w, _ints(args.mu))
        return {"presentation": presentation_to_json(spec, hp),
                "class": class_json(dl_forward(spec, hp))}
    if args.cls is None:
        raise UsageError("dl inverse needs --class CSV")
    t = _type_of_class(spec, _fracs(args.cls))
    packet = dl_inverse(t)
    return {"class": class_json(t.cls),
            "presentations": [presentation_to_json(spec, hp) for hp in packet.presentations]}


def _weight_row(spec, s):
    return {"lambda": list(s.lam), "r": s.r, "regular": s.regular}


def cmd_serre(args):
    spec = load_spec(args)
    if args.action == "box":
        return [_weight_row(spec, s) for s in restricted_box(spec, args.r)]
    if args.action == "recipe":
        if args.cls is None:
            raise UsageError("serre recipe needs --class CSV")
        return serre_recipe(spec, _type_of_class(spec, _fracs(args.cls))).to_json()
    if args.lam is None:
        raise UsageError(f"serre {args.action} needs --lambda CSV")
    lam = _ints(args.lam)
    if args.action == "restrict":
        return _weight_row(spec, restricted_representative(spec, lam, args.r))
    s = make_weight(spec, lam, 1)
    if args.action == "regular":
        return {"lambda": list(lam), "regular": is_regular(spec, s)}
    out = herzig_R(spec, s)
    return {"lambda": list(lam), "reflected": list(out.lam), "regular": out.regular}


def cmd_verify(args):
    from .oracle import bench
    qf = (args.qfield,) if args.qfield else None
    if args.action == "twisted":
        rep = bench.verify_twisted(qf or (3, 4, 9))
    elif args.action == "tori":
        rep = bench.verify_tori()
    elif args.action == "metacyclic":
        rep = bench.verify_metacyclic(qf or (3, 4), args.kmax, args.seed)
    else:
        rep = bench.verify_all(qf or (3, 4, 9), args.kmax, args.seed)
    return rep


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(add_help=False)
    top.add_argument("--format", choices=("json", "table"), default="table")
    top.add_argument("--seed", type=int, default=0)
    # repeated on every subcommand without defaults, so either position works
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    root = _Parser(prog="tame-params", parents=[top],
                   description="Tame inertial types, Deligne-Lusztig data and Serre weights.")
    sub = root.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("group", parents=[common], help="catalog and spec ingestion")
    p.add_argument("action", choices=("list", "show", "validate"))
    _add_group_args(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("tame-types", parents=[common], help="enumerate tame inertial types")
    _add_group_args(p)
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_tame_types)

    p = sub.add_parser("dl", parents=[common], help="Deligne-Lusztig maps")
    p.add_argument("action", choices=("forward", "inverse"))
    _add_group_args(p)
    p.add_argument("--w", help="Weyl word, e.g. 's1 s2' or 'e'")
    p.add_argument("--mu", help="comma-separated coinvariant coordinates")
    p.add_argument("--class", dest="cls", help="comma-separated fractions, e.g. 1/8,3/8")
    p.set_defaults(func=cmd_dl)

    p = sub.add_parser("serre", parents=[common], help="Serre weight queries")
    p.add_argument("action", choices=("box", "regular", "reflect", "restrict", "recipe"))
    _add_group_args(p)
    p.add_argument("--lambda", dest="lam", help="comma-separated weight")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--class", dest="cls", help="class of the type, for recipe")
    p.set_defaults(func=cmd_serre)

    p = sub.add_parser("verify", parents=[common], help="oracle verification runs")
    p.add_argument("action", choices=("all", "twisted", "tori", "metacyclic"))
    p.add_argument("--qfield", type=int)
    p.add_argument("--kmax", type=int, default=3)
    p.set_defaults(func=cmd_verify)
    return root


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required")
        result = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n\n{parser.format_usage()}\n{SPEC_SCHEMA}\n")
        return 1
    except (TameParamsError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    emit(result, args.format, out)
    if args.command == "verify" and result["mismatches"]:
        return 2
    return 0


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error of ours
        code = 0
        sys.stdout = None
    sys.exit(code)


if __name__ == "__main__":
    main()
