"""Generate 50-digit reference values of the modified Bessel function I0.

Writes 1000 log-spaced points on [0, 700] (first point exactly 0) as
`y,i0` lines; both columns are printed with 30 significant digits.
"""
import sys

import mpmath

mpmath.mp.dps = 50


def main(path):
    n = 1000
    lo = mpmath.mpf("1e-6")
    hi = mpmath.mpf(700)
    ys = [mpmath.mpf(0)]
    for i in range(1, n):
        ys.append(lo * (hi / lo) ** (mpmath.mpf(i - 1) / (n - 2)))
    with open(path, "w") as fh:
        fh.write("y,i0\n")
        for y in ys:
            # round y to a double first so the reference is evaluated at the exact input
            yd = mpmath.mpf(float(y))
            fh.write(f"{mpmath.nstr(yd, 30)},{mpmath.nstr(mpmath.besseli(0, yd), 30)}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "i0_oracle.csv")
