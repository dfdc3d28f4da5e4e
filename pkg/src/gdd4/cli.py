"""Command-line interface: ``gdd4 <verb> ...``.

Exit codes: 0 success, 1 domain failure (failed verdict, nothing found),
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .catalog import Catalog, CatalogError, RegistrationRejected
from .design import Design, DesignError, dumps, loads
from .development import DevelopmentError, develop, load_system
from .feasibility import check_feasible, enumerate_feasible
from .fixtures import FIXTURE_NAMES, UnknownFixture, build_fixture
from .grouptype import TypeSyntaxError, format_type, parse_type
from .planner import EXISTS, PlanError, decide, render
from .realize import PartialResult, realize
from .regression import run_regression
from .search import CyclicLayout, SearchError, SearchProblem, prove_nonexistence, search
from .verifier import verify

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _write_design(design: Design, out: str | None) -> None:
    text = dumps(design)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read_design(path: str) -> Design:
    """A design file, a base-block file (developed), or a fixture name."""
    if path in FIXTURE_NAMES:
        return build_fixture(path)
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file or fixture: {path}")
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".bbs" or text.lstrip().startswith(("name:", "modulus:")):
        return develop(load_system(p))
    return loads(text, strict=False)


def _catalog(args) -> Catalog:
    return Catalog(args.catalog)


# -- verbs -----------------------------------------------------------------------


def cmd_feasible(args) -> int:
    report = check_feasible(parse_type(args.type))
    _emit(args, report.to_dict(), report.render())
    return OK if report.feasible else FAIL


def cmd_enumerate(args) -> int:
    types = enumerate_feasible(args.vmax)
    names = [format_type(t) for t in types]
    _emit(args, {"v_max": args.vmax, "count": len(names), "types": names},
          "\n".join(names + [f"# {len(names)} feasible types"]))
    return OK


def cmd_develop(args) -> int:
    design = develop(load_system(args.file))
    if args.json:
        report = verify(design)
        _emit(args, {"type": format_type(design.group_type), "points": design.v,
                     "blocks": len(design.blocks), "verification": report.to_dict()}, "")
        if args.output:
            _write_design(design, args.output)
        return OK
    _write_design(design, args.output)
    return OK


def cmd_verify(args) -> int:
    targets = list(FIXTURE_NAMES) if args.all_fixtures else args.files
    if not targets:
        raise UsageError("give design files, fixture names or --all-fixtures")
    results, failed = [], 0
    for item in targets:
        report = verify(_read_design(item))
        failed += not report.passed
        results.append((item, report))
    payload = {"results": [{"input": i, **r.to_dict()} for i, r in results]}
    text = "\n".join(f"{i}: {r.render()}" for i, r in results)
    _emit(args, payload, text)
    return FAIL if failed else OK


def cmd_search(args) -> int:
    gt = parse_type(args.type)
    if args.prove_nonexistence:
        res = prove_nonexistence(gt, node_budget=args.nodes, time_budget=args.time, threads=args.threads)
        _emit(args, {"type": format_type(gt), **res.to_dict()},
              f"{format_type(gt)}: {res.status} ({res.branches} branches, {res.stats.nodes} nodes, "
              f"{res.stats.elapsed:.2f}s)")
        return OK if res.certified else FAIL
    layout = CyclicLayout(load_system(args.layout)) if args.layout else None
    outcome = search(SearchProblem(gt, symmetry=layout, node_budget=args.nodes, time_budget=args.time,
                                   seed=args.seed, exhaustive=args.exhaustive, threads=args.threads))
    if outcome.found and args.register:
        _catalog(args).register(outcome.design, "searched")
    if outcome.found and args.output:
        _write_design(outcome.design, args.output)
    _emit(args, outcome.to_dict(),
          f"{format_type(gt)}: {outcome.status} ({outcome.stats.nodes} nodes, {outcome.stats.elapsed:.2f}s, "
          f"backend {kernels.BACKEND})")
    return OK if outcome.found else FAIL


def cmd_decide(args) -> int:
    d = decide(args.t, args.s)
    lines = [f"2^{args.t} 5^{args.s} (v={d.v}): {d.verdict}" + (f" ({d.reason})" if d.reason else "")]
    if d.certificate is not None:
        lines.append(render(d.certificate))
    _emit(args, d.to_dict(), "\n".join(lines))
    return OK if d.verdict == EXISTS else FAIL


def cmd_construct(args) -> int:
    from .realize import construct

    catalog = _catalog(args)
    result = construct(parse_type(args.type), catalog=catalog, search=not args.no_search,
                       register=args.register, time_budget=args.time)
    if isinstance(result, PartialResult):
        _emit(args, {"status": "partial", **result.to_dict()}, result.render())
        return FAIL if args.require_concrete else OK
    if args.output:
        _write_design(result, args.output)
    if args.json:
        _emit(args, {"status": "concrete", "type": format_type(result.group_type), "points": result.v,
                     "blocks": len(result.blocks), "output": args.output}, "")
    elif not args.output:
        _write_design(result, None)
    else:
        print(f"{format_type(result.group_type)}: {len(result.blocks)} blocks written to {args.output}")
    return OK


def cmd_catalog(args) -> int:
    cat = _catalog(args)
    if args.action == "list":
        entries = cat.lookup(args.target) if args.target else cat.entries()
        _emit(args, {"entries": [e.to_dict() for e in entries]},
              "\n".join(f"{e.digest[:12]}  {e.type:<16} {e.provenance:<14} {e.verified_at}" for e in entries)
              or "(empty)")
        return OK
    if args.action == "add":
        if not args.target:
            raise UsageError("catalog add needs a design file or fixture name")
        design = _read_design(args.target)
        try:
            entry = cat.register(design, args.provenance)
        except RegistrationRejected as exc:
            _emit(args, {"rejected": exc.report.to_dict()}, str(exc))
            return FAIL
        _emit(args, entry.to_dict(), f"registered {entry.type} as {entry.digest[:12]}")
        return OK
    if not args.target:
        raise UsageError("catalog show needs a digest prefix or a type")
    try:
        entry = cat.find(args.target)
    except CatalogError:
        hits = cat.lookup(parse_type(args.target))
        if not hits:
            _emit(args, {"entries": []}, f"nothing in the catalog for {args.target}")
            return FAIL
        entry = hits[0]
    design = cat.load(entry)
    if args.json:
        _emit(args, {**entry.to_dict(), "design": dumps(design)}, "")
    else:
        sys.stdout.write(dumps(design))
    return OK


def cmd_regression(args) -> int:
    summary = run_regression()
    _emit(args, summary.to_dict(), summary.render())
    return OK if summary.passed else FAIL


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--catalog", metavar="DIR", help="catalog directory (default $GDD4_CATALOG)")

    parser = argparse.ArgumentParser(prog="gdd4", description="4-GDDs of type 2^t 5^s and friends")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("feasible", parents=[common], help="check the necessary conditions for a type")
    p.add_argument("type", help='group type, e.g. "2^17 5^8"')
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("enumerate", parents=[common], help="list feasible types up to v points")
    p.add_argument("vmax", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("develop", parents=[common], help="develop a base-block file into a design")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_develop)

    p = sub.add_parser("verify", parents=[common], help="verify designs, base-block files or fixtures")
    p.add_argument("files", nargs="*")
    p.add_argument("--all-fixtures", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for a design of the given type")
    p.add_argument("type")
    p.add_argument("--layout", help="base-block file giving a cyclic layout")
    p.add_argument("--seed", type=int)
    p.add_argument("--nodes", type=int, help="node budget")
    p.add_argument("--time", type=float, help="wall-clock budget in seconds")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--prove-nonexistence", action="store_true")
    p.add_argument("--register", action="store_true", help="add a found design to the catalog")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("decide", parents=[common], help="existence verdict and certificate for 2^t 5^s")
    p.add_argument("t", type=int)
    p.add_argument("s", type=int)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("construct", parents=[common], help="build a concrete design from its certificate")
    p.add_argument("type")
    p.add_argument("--require-concrete", action="store_true")
    p.add_argument("--no-search", action="store_true", help="do not search for small ingredients")
    p.add_argument("--register", action="store_true")
    p.add_argument("--time", type=float, default=20.0, help="budget per ingredient search")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("catalog", parents=[common], help="list, add or show catalog entries")
    p.add_argument("action", choices=("list", "add", "show"))
    p.add_argument("target", nargs="?")
    p.add_argument("--provenance", choices=("shipped-table", "searched", "fill-in", "manual"))
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("regression", parents=[common], help="run the end-to-end regression")
    p.set_defaults(func=cmd_regression)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TypeSyntaxError, UnknownFixture, DevelopmentError, DesignError,
            FileNotFoundError, SearchError) as exc:
        print(f"gdd4 {args.verb}: {exc}", file=sys.stderr)
        return USAGE
    except (PlanError, CatalogError) as exc:
        print(f"gdd4 {args.verb}: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
