"""Command-line interface: run, converge, riemann-suite, list-presets.

Exit codes: 0 success, 2 usage error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (PRESETS, convergence_study, get_preset, parse_config,
                      riemann_suite, run_preset, write_convergence_csv,
                      write_riemann_csv, write_solution_csv)
from .models import InadmissibleStateError
from .solver import SolverError

_RUN_KEYS = ("dx", "n_cells", "cfl", "t_end", "limiter", "operator", "bc",
             "rk_alpha")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="activeflux",
        description="Finite-volume/point-value solver for conservation laws")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one preset and write CSV output")
    run_p.add_argument("--preset", required=True)
    run_p.add_argument("--config", type=Path, help="key = value file; flags override it")
    run_p.add_argument("--dx", type=float)
    run_p.add_argument("--n", dest="n_cells", type=int)
    run_p.add_argument("--cfl", type=float)
    run_p.add_argument("--t-end", dest="t_end", type=float)
    run_p.add_argument("--limiter", choices=["none", "power", "sym-power"])
    run_p.add_argument("--operator",
                       choices=["simple", "modified", "projector", "rk2", "rk2-fixed"])
    run_p.add_argument("--bc", choices=["periodic", "extrapolate"])
    run_p.add_argument("--rk-alpha", dest="rk_alpha", type=float)
    run_p.add_argument("--out", type=Path, default=Path("out"))

    conv_p = sub.add_parser("converge", help="refinement study against the preset reference")
    conv_p.add_argument("--preset", required=True)
    conv_p.add_argument("--grids", required=True,
                        help="comma-separated cell counts, e.g. 50,100,200,400")
    conv_p.add_argument("--operator",
                        choices=["simple", "modified", "projector", "rk2", "rk2-fixed"])
    conv_p.add_argument("--cfl", type=float)
    conv_p.add_argument("--out", type=Path, default=Path("out"))

    rs_p = sub.add_parser("riemann-suite", help="two-state battery for a scalar model")
    rs_p.add_argument("--model", required=True, choices=["burgers", "quartic"])
    rs_p.add_argument("--operator", default="modified",
                      choices=["simple", "modified"])
    rs_p.add_argument("--out", type=Path, default=Path("out"))

    sub.add_parser("list-presets", help="print the preset table")
    return parser


def _collect_overrides(args: argparse.Namespace) -> dict:
    overrides = {}
    if getattr(args, "config", None):
        file_values = parse_config(args.config.read_text())
        for key in _RUN_KEYS:
            if key in file_values:
                overrides[key] = file_values[key]
    for key in _RUN_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return overrides


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            width = max(len(n) for n in PRESETS)
            for name in sorted(PRESETS):
                print(f"{name:<{width}}  {PRESETS[name].figure}")
            return 0
        if args.command == "run":
            get_preset(args.preset)
            result = run_preset(args.preset, **_collect_overrides(args))
            for path in write_solution_csv(result, args.out):
                print(path)
            return 0
        if args.command == "converge":
            get_preset(args.preset)
            grids = [int(g) for g in args.grids.split(",") if g.strip()]
            overrides = {k: v for k, v in (("operator", args.operator),
                                           ("cfl", args.cfl)) if v is not None}
            report = convergence_study(args.preset, grids, **overrides)
            path = write_convergence_csv(
                report, Path(args.out) / f"convergence_{args.preset}_{report.operator}.csv")
            print(path)
            return 0
        if args.command == "riemann-suite":
            rows = riemann_suite(args.model, operator=args.operator)
            path = write_riemann_csv(rows, Path(args.out) / f"riemann_{args.model}.csv")
            for r in rows:
                status = "pass" if r.ok else "FAIL"
                speed = "" if r.speed_exact is None else \
                    f" speed {r.speed_measured:+.4f} (exact {r.speed_exact:+.4f})"
                print(f"[{status}] ({r.q_l:+.2f}, {r.q_r:+.2f}) {r.wave:<11}"
                      f" l1 {r.l1_points:.3e}{speed}")
            print(path)
            return 0 if all(r.ok for r in rows) else 3
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, InadmissibleStateError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    return 2


if __name__ == "__main__":
    sys.exit(main())
