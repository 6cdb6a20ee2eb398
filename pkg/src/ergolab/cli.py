"""Command-line entry point.

Verbs: run, demo-kakutani, selftest, emit-plot.  Exit codes: 0 all
assertions pass, 1 assertion failure, 2 budget exhaustion, 3 config error.
"""

from __future__ import annotations

import argparse
import pathlib
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import (ComponentBudgetError, ConfigError,
                     RefinementBudgetError)
from .harness import (demo_kakutani, emit_plot_data, parse_config, run)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="exact experiments on measure-preserving interval maps")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("run", "demo-kakutani", "selftest", "emit-plot"):
        p = sub.add_parser(verb)
        p.add_argument("--config", type=pathlib.Path,
                       required=verb in ("run", "emit-plot"))
        p.add_argument("--seed", type=int, default=None,
                       help="64-bit seed for randomized suites")
        p.add_argument("--parallel", type=int, default=1, metavar="K",
                       help="fan out independent fixture runs")
        p.add_argument("--out", type=pathlib.Path, default=None,
                       help="output directory")
        p.add_argument("--format", choices=("csv", "structured"),
                       default="csv")
    return parser


def _load_config(path: pathlib.Path, seed):
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    config = parse_config(text)
    if seed is not None:
        config.parameters["seed"] = seed
    return config


def _write_trace(trace, args, stem: str) -> None:
    if args.out is None:
        body = (trace.to_structured() if args.format == "structured"
                else trace.to_columnar())
        sys.stdout.write(body)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    suffix = ".json" if args.format == "structured" else ".txt"
    path = args.out / f"{stem}{suffix}"
    body = (trace.to_structured() if args.format == "structured"
            else trace.to_columnar())
    stamp = (f"# artifact_version={trace.header.get('artifact_version')} "
             f"config_hash={trace.header.get('config_hash', 'none')}\n")
    path.write_text(stamp + body)
    print(f"wrote {path}")


def _selftest(args) -> int:
    """Quick internal battery: shipped splinter fixtures plus the
    Kakutani demo, fanned out when --parallel > 1."""
    from . import fixtures
    from .splinter import CONVERGED, STALLED, splinter

    jobs = [
        ("doubling-splinter", fixtures.doubling_splinter_inputs(), CONVERGED,
         fixtures.DOUBLING_N_STAR),
        ("odometer-splinter", fixtures.odometer_splinter_inputs(), CONVERGED,
         1),
        ("rational-third-stall", fixtures.rational_third_stall_inputs(),
         STALLED, None),
        ("tower-splinter", fixtures.tower_splinter_inputs(), CONVERGED, 3),
        ("tower-column-splinter", fixtures.tower_column_splinter_inputs(),
         CONVERGED, 1),
    ]

    def one(job):
        name, kw, want_status, want_depth = job
        d = splinter(**kw)
        ok = d.status == want_status
        if want_depth is not None:
            ok &= d.depth == want_depth
        return name, ok, d.status, d.depth

    if args.parallel > 1:
        with ThreadPoolExecutor(max_workers=args.parallel) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(job) for job in jobs]

    failed = False
    for name, ok, status, depth in results:
        print(f"[{'pass' if ok else 'FAIL'}] {name}: {status} at depth {depth}")
        failed |= not ok
    trace, code = demo_kakutani()
    print(f"[{'pass' if code == 0 else 'FAIL'}] demo-kakutani")
    failed |= code != 0
    return 1 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "run":
            config = _load_config(args.config, args.seed)
            trace, code = run(config)
            _write_trace(trace, args, f"run-{config.digest()}")
            return code
        if args.verb == "demo-kakutani":
            trace, code = demo_kakutani()
            _write_trace(trace, args, "demo-kakutani")
            return code
        if args.verb == "selftest":
            return _selftest(args)
        if args.verb == "emit-plot":
            config = _load_config(args.config, args.seed)
            trace, code = run(config)
            out_dir = args.out or pathlib.Path(".")
            suffix = ".json" if args.format == "structured" else ".csv"
            out = out_dir / f"plot-{config.digest()}{suffix}"
            for path in emit_plot_data(trace, args.format, out):
                print(f"wrote {path}")
            return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (ComponentBudgetError, RefinementBudgetError) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
