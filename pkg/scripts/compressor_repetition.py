"""Largest observed proxy(xx) - proxy(x) over seeded mixed inputs.

    python3 scripts/compressor_repetition.py --trials 4000 --seed 2
"""

import argparse
import random

from queasylab.metrics import compressor_cd_proxy


def block(rng: random.Random, n: int) -> str:
    kind = rng.randrange(4)
    if kind == 0:
        return "".join(rng.choice("01") for _ in range(n))
    if kind == 1:
        unit = "".join(rng.choice("01") for _ in range(rng.randint(1, 40)))
        return (unit * n)[:n]
    if kind == 2:
        return "".join(rng.choice("0001") for _ in range(n))
    return rng.choice("01") * n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--max-len", type=int, default=2048)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst = (0, 0)
    for _ in range(args.trials):
        x = "".join(block(rng, rng.randint(1, 700)) for _ in range(rng.randint(1, 4)))
        x = x[:args.max_len]
        gap = compressor_cd_proxy(x + x) - compressor_cd_proxy(x)
        worst = max(worst, (gap, len(x)))
    print(f"c_rep observed={worst[0]} at |x|={worst[1]}")


if __name__ == "__main__":
    main()
