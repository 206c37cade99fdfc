"""Command line front end.

    python -m laguerre_schrodinger solve --potential "x^2 + sin(3*x)" --omega 25 --N 500
    python -m laguerre_schrodinger sweep --potential one --N 100 --omega -1000:1000:2001:log
    python -m laguerre_schrodinger repro-example1 --out results/

Exit status: 0 on success, 9 when a check failed, otherwise the code of the
library error that stopped the run (see ``errors.py``); 8 for I/O failures.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import SchrodingerError
from .experiments import COMMANDS, ExperimentConfig, emit_outputs, load_manifest, run_experiment

EXIT_IO = 8
EXIT_CHECK_FAILED = 9
QUICK_N_LARGE = 1000
# options whose values may start with "-" (negative omegas and shifts)
_SIGNED_OPTIONS = ("--omega", "--shift")


def _glue_signed_values(argv):
    """Rewrite ``--omega -5`` as ``--omega=-5`` so argparse does not see a flag."""
    out = []
    it = iter(argv)
    for arg in it:
        if arg in _SIGNED_OPTIONS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def _common(p):
    p.add_argument("--potential", default="one",
                   help="expression in x, 'zero'/'one', or @file.csv with columns x,q")
    p.add_argument("--d", type=float, default=None, help="interval length (default 1, or file extent)")
    p.add_argument("--grid", type=int, default=5001, help="number of grid nodes")
    p.add_argument("--N", type=int, default=100, help="truncation order")
    p.add_argument("--omega", default="0", help="v | v1,v2,... | min:max:count[:log]")
    p.add_argument("--shift", default=None,
                   help="lambda[,omega0_im]: solve with q+lambda at omega0 = i*omega0_im (default -0.25)")
    p.add_argument("--stride", type=int, default=None, help="store every k-th node of the coefficients")
    p.add_argument("--outputs", default="", help="comma separated subset of artifacts")
    p.add_argument("--out", default=None, help="output directory (omit to print a summary only)")
    p.add_argument("--format", default="csv", choices=["csv"])


def build_parser():
    parser = argparse.ArgumentParser(prog="laguerre_schrodinger", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "kernel":
            p.add_argument("--x", type=float, default=None, help="first kernel argument (default d)")
            p.add_argument("--t", default="10:201", help="tmax:count of the t = x - y nodes")
            p.add_argument("--j-max", type=int, default=2, dest="j_max")
        if name == "repro-example1":
            p.add_argument("--grid-sizes", default="2001,5001")
            p.add_argument("--n-large", type=int, default=10_000, dest="n_large")
            p.add_argument("--streaming", action="store_true",
                           help="also build 1e5 coefficients in streaming mode")
            p.add_argument("--quick", action="store_true", help="stop at N = 1000 and skip the large-N sweep")
    p = sub.add_parser("rerun", help="repeat a run from its manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)
    return parser


def config_from_args(args):
    fields = dict(command=args.command, potential=args.potential, d=args.d, grid=args.grid,
                  N=args.N, omega=args.omega, shift=args.shift, stride=args.stride,
                  outputs=[o for o in args.outputs.split(",") if o])
    if args.command == "kernel":
        fields.update(x=args.x, t=args.t, j_max=args.j_max)
    if args.command == "repro-example1":
        fields.update(grid_sizes=[int(s) for s in args.grid_sizes.split(",")],
                      n_large=QUICK_N_LARGE if args.quick else args.n_large, streaming=args.streaming)
    return ExperimentConfig(**fields)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_signed_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_manifest(args.manifest) if args.command == "rerun" else config_from_args(args)
        report = run_experiment(cfg)
        if args.out:
            for path in emit_outputs(report, args.out):
                print(f"wrote {path}")
    except SchrodingerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for line in report.summary.pop("lines", []):
        print(line)
    for key, value in report.summary.items():
        print(f"{key}: {value}")
    for name, passed, detail in report.checks:
        if cfg.command != "repro-example1" or not passed:
            print(f"[{'PASS' if passed else 'FAIL'}] {name} {detail}".rstrip())
    timing = ", ".join(f"{k} {v:.2f}s" for k, v in report.timings.items())
    print(f"timings: {timing}")
    return 0 if report.ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
