"""Slow, obviously-correct reference computations used by the tests.

Nothing here touches the compiled kernels: enumeration walks every bitstring
through the pure-Python interpreter, number theory goes through sympy, and
satisfiability is checked by listing assignments.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Sequence

import sympy

from queasylab.machine import enumerate_programs, run_acceptor, run_generator


def brute_generator_table(max_len: int, budget: int) -> dict[str, str]:
    """output -> first program (length, then lexicographic) printing it."""
    table: dict[str, str] = {}
    for p in enumerate_programs(max_len):
        out = run_generator(p, budget).output
        if out is not None and out not in table:
            table[out] = p.bits
    return table


def brute_acceptor_minima(members: Sequence[str], chis: Sequence[Sequence[int]],
                          max_len: int, budget: int):
    """(cd, ic) minima over every bitstring program.

    ``cd[x]`` is the first program accepting x and rejecting every other
    member; ``ic[k][x]`` the first program whose non-None answers agree with
    ``chis[k]`` and that answers x.
    """
    cd: dict[str, str] = {}
    ic: list[dict[str, str]] = [dict() for _ in chis]
    for p in enumerate_programs(max_len):
        ans = [run_acceptor(p, y, budget).answer for y in members]
        accepted = [y for y, a in zip(members, ans) if a == 1]
        if len(accepted) == 1 and all(a is not None for a in ans):
            cd.setdefault(accepted[0], p.bits)
        for k, chi in enumerate(chis):
            if all(a is None or a == c for a, c in zip(ans, chi)):
                for y, a in zip(members, ans):
                    if a is not None:
                        ic[k].setdefault(y, p.bits)
    return cd, ic


def largest_prime_factor(x: int) -> int:
    return max(sympy.factorint(x))


def factor_prefix(x: int, a: str) -> int:
    return int(any(format(d, "b").startswith(a) for d in sympy.divisors(x) if 1 < d < x))


def satisfiable(n_vars: int, clauses: Sequence[Sequence[int]]) -> int:
    for bits in itertools.product((False, True), repeat=n_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return 1
    return 0


def gap_holds(probs: Sequence[float], index: int, tol: float = 1e-12) -> bool:
    """The gap at the 1-based index clears p1^2/(2+p1) (list padded with 0)."""
    padded = list(probs) + [0.0]
    thr = probs[0] ** 2 / (2 + probs[0])
    return padded[index - 1] - padded[index] >= thr - tol


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rho via average ranks; NaN when either side is constant."""
    def ranks(v):
        order = sorted(range(len(v)), key=lambda i: v[i])
        r = [0.0] * len(v)
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
                j += 1
            for k in range(i, j + 1):
                r[order[k]] = (i + j) / 2
            i = j + 1
        return r
    rx, ry = ranks(xs), ranks(ys)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0 or syy == 0:
        return math.nan
    return sxy / math.sqrt(sxx * syy)


def bounded_le(a: Optional[int], b: Optional[int], c: int, cap_a: int, cap_b: int) -> Optional[bool]:
    """Three-valued check of a <= b + c when None means 'above its cap'.

    Returns True/False when censoring still decides the comparison, None
    otherwise.
    """
    if a is not None and b is not None:
        return a <= b + c
    if a is not None:               # b > cap_b
        return True if a <= cap_b + 1 + c else None
    if b is not None:               # a > cap_a
        return False if cap_a + 1 > b + c else None
    return None

