#!/usr/bin/env python3
"""Write COUNT consecutive nontrivial zeta zeros (imaginary parts), one per line.

Uses python-flint (arb, certified isolation) when installed, mpmath otherwise.
With --base the file gets a "# base B" header and every line holds gamma - B.

Usage: gen_zeros.py [--start N] [--base B] COUNT OUTPUT
"""
import argparse
from decimal import Decimal


def zeros_flint(start, count):
    import flint

    flint.ctx.dps = 30
    out = []
    for first in range(start, start + count, 1000):
        n = min(1000, start + count - first)
        for z in flint.acb.zeta_zeros(first, n):
            out.append(Decimal(z.imag.mid().str(25, radius=False)))
    return out


def zeros_mpmath(start, count):
    import mpmath

    mpmath.mp.dps = 30
    return [Decimal(mpmath.nstr(mpmath.zetazero(n).imag, 25)) for n in range(start, start + count)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("count", type=int)
    ap.add_argument("output")
    ap.add_argument("--start", type=int, default=1, help="1-based index of the first zero")
    ap.add_argument("--base", default=None, help="write offsets from this decimal base")
    args = ap.parse_args()

    try:
        values = zeros_flint(args.start, args.count)
        source = "python-flint"
    except ImportError:
        values = zeros_mpmath(args.start, args.count)
        source = "mpmath"
    for a, b in zip(values, values[1:]):
        if not b > a:
            raise SystemExit(f"ordinates not increasing at {b}")
    base = Decimal(args.base) if args.base else None
    with open(args.output, "w") as f:
        f.write(f"# {args.count} nontrivial zeta zeros from index {args.start}, imaginary parts ({source})\n")
        if base is not None:
            f.write(f"# base {args.base}\n")
        f.write(f"# first_index {args.start}\n")
        for v in values:
            f.write(f"{(v - base) if base is not None else v:.12f}\n")


if __name__ == "__main__":
    main()
