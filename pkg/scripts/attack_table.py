"""Attack step counts over a grid of symbol widths and cascade depths.

Prints one CSV row per (k, N): the Fermat steps for the RSA primes, the
cascade pair count as printed, and their product.

    python scripts/attack_table.py --k 4,8,16 --stages 1:4:1 --blocks 40
"""

import argparse
import csv
import sys

from crosslayer.analysis import (
    AttackParams,
    cascade_attack_steps,
    combined_attack_steps,
    fermat_steps,
    parse_grid,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="4,8,16", help="comma list of symbol widths")
    ap.add_argument("--stages", default="1:4:1")
    ap.add_argument("--blocks", type=int, default=40, help="pair count p (> k + 1)")
    ap.add_argument("--states", type=int, default=2)
    ap.add_argument("--rsa", default="13,37")
    args = ap.parse_args(argv)
    p, q = (int(v) for v in args.rsa.split(","))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["k", "N", "s1", "s2", "s"])
    for k in (int(v) for v in args.k.split(",")):
        for n in parse_grid(args.stages):
            ap_ = AttackParams(args.blocks, args.states, k, int(n), p, q)
            w.writerow([k, int(n), f"{fermat_steps(p, q):.6g}",
                        f"{float(cascade_attack_steps(ap_)):.6g}",
                        f"{float(combined_attack_steps(ap_)):.6g}"])


if __name__ == "__main__":
    main()
