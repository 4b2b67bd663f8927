"""Extend-and-prune over all x below a bound, for a range of adversary seeds.

    python3 scripts/prune_sweep.py --limit 1000 --seeds 100
"""

import argparse
import time
from collections import Counter

from queasylab.problems import largest_prime_factor
from queasylab.pruning import PremiseViolation, adversaries, extend_and_prune, oracle_decider


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=1000)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--adversaries", type=int, default=50)
    args = ap.parse_args()
    t0 = time.time()
    failures, rounds, ejected = [], Counter(), 0
    for seed in range(args.seeds):
        pool = [oracle_decider()] + adversaries(args.adversaries, seed)
        for x in range(2, args.limit):
            try:
                res = extend_and_prune(x, pool, check_premise=True)
            except PremiseViolation as exc:
                failures.append((seed, x, str(exc)))
                continue
            if int(res.factor_bits, 2) != largest_prime_factor(x):
                failures.append((seed, x, res.factor_bits))
            rounds[res.rounds] += 1
            ejected += sum(len(r.ejected) for r in res.trace)
    print(f"runs={args.seeds * (args.limit - 2)} failures={len(failures)} "
          f"ejections={ejected} seconds={time.time() - t0:.1f}")
    print("rounds histogram:", dict(sorted(rounds.items())))
    for f in failures[:10]:
        print("failure:", f)


if __name__ == "__main__":
    main()
