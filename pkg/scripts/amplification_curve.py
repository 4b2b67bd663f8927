"""Monte Carlo failure rate of the amplification plan against its bound.

    python3 scripts/amplification_curve.py --copies 10 50 200 --trials 1000
"""

import argparse
import math

from queasylab.quantum import amplify, parse_circuit, simulate

SOURCES = {
    "single-H": lambda: simulate(parse_circuit("qubits 1\nmeasure 0\nH 0\n")),
    "three-way": lambda: {"0": 0.5, "1": 0.3, "2": 0.2},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--copies", type=int, nargs="+", default=[10, 50, 200])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 7])
    args = ap.parse_args()
    print("source,seed,n_copies,j,a,failure_rate,failure_bound,binomial_se")
    for name, make in SOURCES.items():
        dist = make()
        for seed in args.seeds:
            for n in args.copies:
                res = amplify(dist, "0", n, seed=seed, trials=args.trials)
                fail = 1 - res["success_estimate"]
                se = math.sqrt(fail * (1 - fail) / args.trials)
                plan = res["plan"]
                print(f"{name},{seed},{n},{plan.j},{plan.a},{fail:.4f},"
                      f"{plan.failure_bound():.4f},{se:.4f}")


if __name__ == "__main__":
    main()
