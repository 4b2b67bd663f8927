"""Measure c, cd, ic, qcd, qic on all n-bit strings and derive the additive
constants of the inequality chain.

    python3 scripts/measure_constants.py --n 1 --caps 26 28
"""

import argparse
import json
import time

from queasylab.complexity import SearchLimits, c_t, cd_t, ic_t
from queasylab.problems import PARITY, all_strings
from queasylab.quantum import qcd_t, qic_t


def measure(x: str, cap: int, budget: int, eps: float) -> dict:
    lim = SearchLimits(cap, budget)
    return {"c": c_t(x, lim).value, "cd": cd_t(x, lim).value,
            "ic": ic_t(x, PARITY, lim).value, "qcd": qcd_t(x, eps, lim).value,
            "qic": qic_t(x, PARITY, eps, lim).value}


def worst_gap(rows, a, b):
    gaps = [r[a] - r[b] for r in rows if r[a] is not None and r[b] is not None]
    return max(gaps) if gaps else None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--caps", type=int, nargs="+", default=[26])
    ap.add_argument("--budget", type=int, default=256)
    ap.add_argument("--epsilon", type=float, default=0.1)
    args = ap.parse_args()
    for cap in args.caps:
        t0 = time.time()
        rows = []
        for x in all_strings(args.n):
            r = measure(x, cap, args.budget, args.epsilon)
            rows.append(r)
            print(json.dumps({"x": x, "cap": cap, **r}))
        print(json.dumps({"cap": cap, "c1": worst_gap(rows, "ic", "cd"),
                          "c2": worst_gap(rows, "cd", "c"),
                          "c_enc": max(filter(None.__ne__, [worst_gap(rows, "qcd", "cd"),
                                                            worst_gap(rows, "qic", "ic")]),
                                       default=None),
                          "seconds": round(time.time() - t0, 1)}))


if __name__ == "__main__":
    main()
