"""Proxy-mode landscape over reduction formulas and random 3-CNF, with a
class histogram.

    python3 scripts/landscape_demo.py --seed 3
"""

import argparse
from collections import Counter

from queasylab.metrics import LandscapeConfig, classify_queasy, landscape, landscape_csv
from queasylab.problems import SAT, FacInstance, random_kcnf


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--random", type=int, default=8)
    ap.add_argument("--margin", type=int, default=4)
    args = ap.parse_args()
    batch = [FacInstance(x, a) for x, a in ((15, "1"), (21, "11"), (221, "1101"), (899, "11"))]
    batch += [random_kcnf(14, 60, 3, seed=args.seed * 1000 + i) for i in range(args.random)]
    cfg = LandscapeConfig(mode="proxy", margin=args.margin, seed=args.seed)
    records = landscape(batch, SAT, cfg)
    print(landscape_csv(records, args.margin), end="")
    print("# classes:", dict(Counter(classify_queasy(r, args.margin) for r in records)))


if __name__ == "__main__":
    main()
