"""Clause counts of the factoring reduction and their log-log slope.

    python3 scripts/reduction_growth.py --widths 8 20
"""

import argparse

import numpy as np

from queasylab.reduction import clause_growth


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--widths", type=int, nargs=2, default=[8, 20])
    args = ap.parse_args()
    g = clause_growth(range(args.widths[0], args.widths[1] + 1))
    print("width,bits_of_x,clauses")
    for w, c in zip(g["widths"], g["clauses"]):
        print(f"{w},{w + 1},{c}")
    bits = np.array(g["widths"]) + 1
    slope_bits = float(np.polyfit(np.log(bits), np.log(g["clauses"]), 1)[0])
    print(f"# exponent vs multiplicand width: {g['exponent']:.3f}")
    print(f"# exponent vs bit length of x: {slope_bits:.3f}")
    print("# quadratic fit: " + ", ".join(f"{c:.3f}" for c in g["quadratic"]))


if __name__ == "__main__":
    main()
