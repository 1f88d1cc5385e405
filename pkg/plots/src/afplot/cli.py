"""plot <kind> --in ... --out ... driver.

Flags may also come from a key = value spec file (--spec); flags override.
Exit codes: 0 success, 2 usage/schema error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureSpec, SchemaError, plot_convergence, plot_heatmap, \
    plot_snapshot

_KINDS = {"snapshot": plot_snapshot, "convergence": plot_convergence,
          "heatmap": plot_heatmap}


def _parse_spec_file(path: Path) -> dict:
    out = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad spec line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot",
                                     description="Render solver CSV outputs")
    parser.add_argument("kind", choices=sorted(_KINDS))
    parser.add_argument("--in", dest="inputs", action="append", type=Path,
                        default=None, help="input CSV (repeatable)")
    parser.add_argument("--exact", type=Path)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--var")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    parser.add_argument("--title")
    parser.add_argument("--label", dest="labels", action="append", default=None)
    parser.add_argument("--spec", type=Path, help="key = value spec file")
    args = parser.parse_args(argv)

    values = {}
    if args.spec:
        try:
            values = _parse_spec_file(args.spec)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    inputs = args.inputs or [Path(p) for p in values.get("in", "").split(";") if p]
    labels = args.labels or [s for s in values.get("labels", "").split(";") if s]
    out = args.out or (Path(values["out"]) if "out" in values else None)
    if not inputs or out is None:
        print("error: need --in and --out (or a spec file providing them)",
              file=sys.stderr)
        return 2
    spec = FigureSpec(
        kind=args.kind, inputs=inputs, output=out,
        exact=args.exact or (Path(values["exact"]) if "exact" in values else None),
        var=args.var or values.get("var"),
        xlabel=args.xlabel or values.get("xlabel", "x"),
        ylabel=args.ylabel or values.get("ylabel", ""),
        title=args.title or values.get("title", ""),
        labels=labels,
    )
    try:
        path = _KINDS[args.kind](spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
