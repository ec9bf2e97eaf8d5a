"""Coded orthogonal signaling bound for the (2,2,2) and (4,4,2) profiles vs SNR.

    python scripts/ber_curves.py --snr-db 0:20:0.5 --exponent L --out ber.csv
"""

import argparse
import sys

from crosslayer.analysis import PROFILES, CurveSpec, emit_curves, parse_grid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snr-db", default="0:20:1")
    ap.add_argument("--exponent", choices=("L", "d"), default="L")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)
    text = emit_curves(CurveSpec("ber", parse_grid(args.snr_db), list(PROFILES.values()),
                                 args.exponent))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
