"""Command-line entry point: render --in <dir> --which <kind> --out <dir>."""

import argparse
import sys

from .figures import KINDS, FigureRequest, render

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render figures from pedestrian-flow simulation outputs.",
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory with simulation outputs")
    parser.add_argument("--which", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="image output directory")
    parser.add_argument("--scale-max", type=float, default=1.0,
                        help="top of the density color scale (default 1.0)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        request = FigureRequest(in_dir=args.in_dir, which=args.which,
                                out_dir=args.out, scale_max=args.scale_max)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        written = render(request)
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(written)} files to {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
