"""Command-line interface.

Exit codes: 0 success (valid / separated / full agreement), 1 connected or
failed check, 2 degenerate query, 3 unreadable input or parse errors, 4
unknown identifiers or bad query arguments.  Machine-readable output (JSON,
CSV, DOT, DSL) goes to stdout; diagnostics go to stderr.

The environment variable DETDAG_SEED supplies the default seed for
``simulate`` and ``verify`` when ``--seed`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import wire
from .classify import (
    DegenerateQueryError,
    classify_confounder,
    classify_estimand,
    detect_tautologies,
)
from .dsep import CONNECTED, SEPARATED, is_d_separated, is_D_separated
from .dsl import try_parse, serialize
from .graph import Dag, UnknownNodeError
from .oracle import SimParams, SimulationError, simulate, verify_dseps
from .reduction import reduce_all
from .render import to_dot

EXIT_OK = 0
EXIT_CONNECTED = 1
EXIT_DEGENERATE = 2
EXIT_PARSE = 3
EXIT_BAD_QUERY = 4


def _default_seed() -> int:
    return int(os.environ.get("DETDAG_SEED", "0"))


def _load(path: str) -> Dag:
    """Read and parse a .dag file or terminate with the right exit code."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    dag, errors = try_parse(source)
    if dag is None:
        for e in errors:
            print(f"{path}:{e.line}:{e.column}: {e.message}", file=sys.stderr)
            if e.snippet:
                print(f"    {e.snippet}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    return dag


def _split(ids: Optional[str]) -> list[str]:
    if not ids:
        return []
    return [part.strip() for part in ids.split(",") if part.strip()]


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_check(args) -> int:
    dag = _load(args.file)
    det = sum(1 for n in dag.nodes if n.deterministic)
    print(
        f"ok: dag {dag.name!r}: {len(dag.nodes)} nodes "
        f"({det} deterministic), {len(dag.edges)} edges"
    )
    return EXIT_OK


def cmd_dsep(args) -> int:
    dag = _load(args.file)
    fn = is_d_separated if args.classic else is_D_separated
    try:
        verdict = fn(dag, args.x, args.y, _split(args.given))
    except UnknownNodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    _emit(wire.verdict_to_json(verdict))
    if verdict.status == SEPARATED:
        return EXIT_OK
    if verdict.status == CONNECTED:
        return EXIT_CONNECTED
    return EXIT_DEGENERATE


def cmd_reduce(args) -> int:
    dag = _load(args.file)
    try:
        reduced = reduce_all(dag, _split(args.keep))
    except (UnknownNodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    sys.stdout.write(serialize(reduced))
    return EXIT_OK


def cmd_classify(args) -> int:
    dag = _load(args.file)
    try:
        report = classify_estimand(dag, args.exposure, args.outcome, _split(args.adjust))
    except DegenerateQueryError as exc:
        print(f"error: degenerate query: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UnknownNodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    _emit(wire.estimand_to_json(report))
    return EXIT_OK


def cmd_tautologies(args) -> int:
    dag = _load(args.file)
    _emit(wire.findings_to_json(detect_tautologies(dag)))
    return EXIT_OK


def cmd_confounder(args) -> int:
    dag = _load(args.file)
    try:
        role = classify_confounder(dag, args.exposure, args.outcome, args.candidate)
    except (UnknownNodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    _emit(wire.confounder_to_json(role))
    return EXIT_OK


def cmd_simulate(args) -> int:
    dag = _load(args.file)
    try:
        ds = simulate(dag, SimParams(), n=args.n, seed=args.seed)
    except (SimulationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    if args.out:
        ds.to_csv(args.out)
        print(f"wrote {args.n} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(ds.to_csv_text())
    return EXIT_OK


def cmd_verify(args) -> int:
    dag = _load(args.file)
    try:
        report = verify_dseps(dag, SimParams(), n=args.n, seed=args.seed, alpha=args.alpha)
    except (SimulationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    _emit(wire.verification_to_json(report))
    return EXIT_OK if report.full_agreement else EXIT_CONNECTED


def cmd_render(args) -> int:
    dag = _load(args.file)
    try:
        sys.stdout.write(to_dot(dag, _split(args.highlight)))
    except UnknownNodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_QUERY
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detdag",
        description="Analyse causal DAGs that contain deterministic variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a .dag file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("dsep", help="separation query (deterministic-aware by default)")
    p.add_argument("file")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--given", default="", help="comma-separated conditioning set")
    p.add_argument(
        "--classic",
        action="store_true",
        help="use plain d-separation, ignoring functional determination",
    )
    p.set_defaults(fn=cmd_dsep)

    p = sub.add_parser("reduce", help="remove deterministic nodes outside a kept set")
    p.add_argument("file")
    p.add_argument("--keep", default="", help="comma-separated node ids to keep")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("classify", help="diagnose what an analysis estimates")
    p.add_argument("file")
    p.add_argument("--exposure", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--adjust", default="", help="comma-separated adjustment set")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("tautologies", help="list built-in (tautological) associations")
    p.add_argument("file")
    p.set_defaults(fn=cmd_tautologies)

    p = sub.add_parser("confounder", help="role of a candidate confounder per component")
    p.add_argument("file")
    p.add_argument("--exposure", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--candidate", required=True)
    p.set_defaults(fn=cmd_confounder)

    p = sub.add_parser("simulate", help="draw a seeded sample as CSV")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default="", help="write CSV here instead of stdout")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="check graph verdicts against simulated data")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=50_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--alpha", type=float, default=0.01)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("render", help="emit DOT with deterministic notation")
    p.add_argument("file")
    p.add_argument("--highlight", default="", help="comma-separated shaded nodes")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("serve", help="run the JSON analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:  # raised by _load with the right code
        code = exc.code if isinstance(exc.code, int) else EXIT_PARSE
        return code


if __name__ == "__main__":
    sys.exit(main())
