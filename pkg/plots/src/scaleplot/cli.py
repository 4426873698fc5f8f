"""plot-scaling command-line entry point."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .render import PlotSpec, plot_scaling


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="plot-scaling",
        description="Mean-evaluations-versus-a curves from aggregate result CSVs",
    )
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    help="aggregate CSV path (repeatable)")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--n", type=int, default=None, help="keep only rows with this n")
    ap.add_argument("--log-y", action="store_true", help="logarithmic y axis")
    args = ap.parse_args(argv)

    spec = PlotSpec(
        inputs=tuple(args.inputs),
        output=args.out,
        n_filter=args.n,
        log_y=args.log_y,
    )
    try:
        plot_scaling(spec)
    except (ValueError, OSError) as e:
        print(f"plot-scaling: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
