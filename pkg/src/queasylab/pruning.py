"""Extend-and-prune recovery of the largest prime factor from a pool of
candidate FAC deciders.

The pool (GOOD) is queried on <x, b> for every extension b in POS. A decider
accepting two different extensions of the same length cannot be
FAC-consistent and is ejected; don't-know answers never eject. Extensions no
surviving decider accepts are dropped, which leaves |POS| <= |GOOD| <= m.
POS is then re-extended by the fewest bits k with 2^k |POS| >= 2m.

After each round, every new prefix of the queried extensions is checked
against a completion certificate: a prime dividing x whose cofactor has no
larger prime factor. Checking prefixes covers extension widths that overshoot
the factor's bit length, where a consistent decider accepts nothing.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .problems import FacInstance, largest_prime_factor


class PremiseViolation(RuntimeError):
    """The pool failed the procedure's premise (true prefix lost)."""


@dataclass(frozen=True, eq=False)
class CandidateDecider:
    id: str
    decide: Callable[[FacInstance], Optional[int]]
    description_length: int = 1

    def __post_init__(self):
        if self.description_length <= 0:
            raise ValueError("description_length must be positive")

    def decide_many(self, x: int, extensions: Sequence[str]) -> list[Optional[int]]:
        return [self.decide(FacInstance(x, b)) for b in extensions]


class OracleDecider(CandidateDecider):
    """FAC-consistent decider backed by trial factorization."""

    def __init__(self, description_length: int = 1, id: str = "oracle"):
        cache: dict[int, str] = {}

        def truth(x: int) -> str:
            if x not in cache:
                cache[x] = format(largest_prime_factor(x), "b")
            return cache[x]

        super().__init__(id, lambda z: int(truth(z.x).startswith(z.a)), description_length)
        object.__setattr__(self, "_truth", truth)

    def decide_many(self, x: int, extensions: Sequence[str]) -> list[Optional[int]]:
        t = self._truth(x)
        return [int(t.startswith(b)) for b in extensions]


def oracle_decider(description_length: int = 1) -> CandidateDecider:
    return OracleDecider(description_length)


_MASK64 = (1 << 64) - 1


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(_MASK64)
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(_MASK64)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(_MASK64)
    return z ^ (z >> np.uint64(31))


def _unit_hash(seed: int, idents: np.ndarray, x: int, vals: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) values keyed by (seed, ident, x, extension); the result
    has shape (len(idents), len(vals))."""
    with np.errstate(over="ignore"):
        h = _splitmix(np.full(idents.shape, seed & _MASK64, dtype=np.uint64))
        h = _splitmix(h ^ idents.astype(np.uint64))
        h = _splitmix(h ^ np.uint64(x & _MASK64))
        h = _splitmix(h[:, None] ^ vals[None, :])
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def _keys(extensions: Sequence[str]) -> np.ndarray:
    return _layout(tuple(extensions))[0]


@lru_cache(maxsize=4096)
def _layout(extensions: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Hash keys and lengths of an extension set (the same sets recur across x)."""
    keys = np.array([(int(b, 2) if b else 0) | (len(b) << 48) for b in extensions],
                    dtype=np.uint64)
    return keys, np.array([len(b) for b in extensions])


@dataclass(frozen=True, eq=False)
class AdversarialDecider(CandidateDecider):
    """Answers from a keyed hash of (seed, id, x, extension): accept with
    ``accept_rate``, don't-know with ``unknown_rate``, reject otherwise."""

    seed: int = 0
    index: int = 0
    accept_rate: float = 0.02
    unknown_rate: float = 0.0

    def decide_many(self, x: int, extensions: Sequence[str]) -> list[Optional[int]]:
        if not extensions:
            return []
        row = _adversary_matrix([self], x, _keys(extensions))[0]
        return [None if v < 0 else int(v) for v in row]


def _adversary_matrix(advs: Sequence[AdversarialDecider], x: int, keys: np.ndarray) -> np.ndarray:
    """Answers as int8 (1 accept, 0 reject, -1 don't know), grouped by seed."""
    out = np.zeros((len(advs), len(keys)), dtype=np.int8)
    by_seed: dict[int, list[int]] = {}
    for i, d in enumerate(advs):
        by_seed.setdefault(d.seed, []).append(i)
    for seed, rows in by_seed.items():
        idents = np.array([advs[i].index for i in rows], dtype=np.uint64)
        acc = np.array([advs[i].accept_rate for i in rows])[:, None]
        unk = np.array([advs[i].unknown_rate for i in rows])[:, None]
        u = _unit_hash(seed, idents, x, keys)
        out[rows] = np.where(u < acc, 1, np.where(u < acc + unk, -1, 0))
    return out


def answer_matrix(good: Sequence[CandidateDecider], x: int, pos: Sequence[str]) -> np.ndarray:
    """Every decider's answer on every extension, as an int8 matrix."""
    out = np.zeros((len(good), len(pos)), dtype=np.int8)
    adv_rows = [i for i, d in enumerate(good) if isinstance(d, AdversarialDecider)]
    if adv_rows and pos:
        out[adv_rows] = _adversary_matrix([good[i] for i in adv_rows], x, _keys(pos))
    for i, d in enumerate(good):
        if not isinstance(d, AdversarialDecider):
            out[i] = [-1 if a is None else a for a in d.decide_many(x, pos)]
    return out


def adversaries(count: int, seed: int, description_length: int = 1) -> list[AdversarialDecider]:
    rng = random.Random(f"adversaries:{seed}")
    pool = []
    for i in range(count):
        accept = rng.choice([0.0, 0.002, 0.01, 0.03, 0.1, 0.5])
        unknown = rng.choice([0.0, 0.2, 0.9])

        def _decide(z: FacInstance, _i=i, _a=accept, _u=unknown):
            return pool[_i].decide_many(z.x, [z.a])[0]

        pool.append(AdversarialDecider(f"adv{i}", _decide, description_length,
                                       seed=seed, index=i, accept_rate=accept,
                                       unknown_rate=min(unknown, 1.0 - accept)))
    return pool


@dataclass(frozen=True)
class PruneState:
    good: tuple[CandidateDecider, ...]
    pos: tuple[str, ...]
    m: int
    round: int = 0


@dataclass
class RoundRecord:
    round: int
    width: int
    good_before: int
    pos_before: int
    good_after: int
    pos_after: int
    runs: int
    ejected: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def min_extension_bits(pos_size: int, m: int) -> int:
    """Fewest k with 2^k * pos_size >= 2m."""
    if pos_size <= 0:
        raise PremiseViolation("cannot extend an empty POS")
    k = 0
    while (pos_size << k) < 2 * m:
        k += 1
    return max(k, 1)


def initial_state(pool: Sequence[CandidateDecider]) -> PruneState:
    m = len(pool)
    if m == 0:
        raise ValueError("pool is empty")
    k = min_extension_bits(1, m)
    return PruneState(tuple(pool), tuple(_all_strings(k)), m, 0)


@lru_cache(maxsize=64)
def _all_strings(k: int) -> tuple[str, ...]:
    return tuple(format(v, f"0{k}b") for v in range(1 << k))


def prune_round(state: PruneState, x: int, record: Optional[RoundRecord] = None) -> PruneState:
    """Query every decider on every extension, eject double-acceptors and
    drop extensions nobody accepts."""
    if not state.pos:
        raise PremiseViolation("POS is empty while GOOD is not")
    pos = state.pos
    answers = answer_matrix(state.good, x, pos)
    hits = answers == 1
    lengths = _layout(pos)[1]
    if lengths[0] == lengths[-1] and (lengths == lengths[0]).all():
        double = hits.sum(axis=1) > 1
    else:
        double = np.zeros(len(state.good), dtype=bool)
        for w in np.unique(lengths):
            double |= hits[:, lengths == w].sum(axis=1) > 1
    ejected = [{"id": d.id, "reason": f"accepted {int(hits[i].sum())} extensions"}
               for i, d in enumerate(state.good) if double[i]]
    survivors = [d for i, d in enumerate(state.good) if not double[i]]
    keep = hits[~double].any(axis=0)
    new_pos = tuple(b for b, k in zip(pos, keep) if k)
    runs = answers.size
    if record is not None:
        record.good_after = len(survivors)
        record.pos_after = len(new_pos)
        record.runs = runs
        record.ejected = ejected
    if not new_pos:
        raise PremiseViolation(f"no surviving decider accepts any extension (round {state.round + 1})")
    return replace(state, good=tuple(survivors), pos=new_pos, round=state.round + 1)


def extend(state: PruneState) -> PruneState:
    k = min_extension_bits(len(state.pos), state.m)
    return replace(state, pos=tuple(b + c for b in state.pos for c in _all_strings(k)))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def is_largest_prime_factor(x: int, p: int) -> bool:
    """Certificate check: p prime, p | x, and x / p^e has no prime factor > p."""
    if p < 2 or x % p or not _is_prime(p):
        return False
    c = x
    while c % p == 0:
        c //= p
    d = 2
    while d < p and c > 1:
        while c % d == 0:
            c //= d
        d += 1
    return c == 1


def _completion(x: int, pos: Sequence[str], floor: int) -> Optional[str]:
    """Shortest certified largest-prime-factor among the new prefixes of pos."""
    live = [b for b in pos if b[:1] == "1"]
    width = max((len(b) for b in live), default=0)
    for cut in range(max(floor, 1), width + 1):
        for t in sorted({b[:cut] for b in live if len(b) >= cut}):
            if x % int(t, 2) == 0 and is_largest_prime_factor(x, int(t, 2)):
                return t
    return None


@dataclass
class PruneResult:
    factor_bits: str
    rounds: int
    trace: list[RoundRecord]
    runs: int

    def trace_lines(self) -> list[str]:
        lines = [r.to_json() for r in self.trace]
        lines.append(json.dumps({"factor_bits": self.factor_bits, "rounds": self.rounds,
                                 "runs": self.runs}, sort_keys=True))
        return lines


def extend_and_prune(x: int, pool: Sequence[CandidateDecider], k_width: Optional[int] = None,
                     check_premise: bool = False, max_rounds: Optional[int] = None) -> PruneResult:
    """Recover the binary form of the largest prime factor of ``x``.

    ``k_width`` overrides the initial extension width. With ``check_premise``
    every round is compared against trial factorization and a lost true
    prefix raises :class:`PremiseViolation`.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    state = initial_state(pool)
    if k_width is not None:
        state = replace(state, pos=tuple(_all_strings(k_width)))
    truth = format(largest_prime_factor(x), "b") if check_premise else None
    limit = max_rounds if max_rounds is not None else x.bit_length() + 1
    trace: list[RoundRecord] = []
    floor = 1
    runs = 0
    while True:
        if state.round >= limit:
            raise PremiseViolation(f"no factor certified after {state.round} rounds")
        queried = state.pos
        width = len(queried[0])
        rec = RoundRecord(state.round + 1, width, len(state.good), len(queried), 0, 0, 0)
        failure = None
        try:
            state = prune_round(state, x, rec)
        except PremiseViolation as exc:
            failure = exc
        runs += rec.runs
        trace.append(rec)
        done = _completion(x, queried, floor)
        if done is not None:
            return PruneResult(done, rec.round, trace, runs)
        if failure is not None:
            raise failure
        if truth is not None and width <= len(truth) and truth[:width] not in state.pos:
            raise PremiseViolation(f"true prefix {truth[:width]} eliminated in round {state.round}")
        floor = width + 1
        state = extend(state)


def cost_model(n: int, delta: float) -> dict:
    """Pool capacity m = floor(2^(n^delta)), per-round bound 4 m^2 runs and
    the total bound 4 n m^2 runs (each run costing t(2n) steps)."""
    if n < 1 or not 0 < delta < 1:
        raise ValueError("need n >= 1 and 0 < delta < 1")
    m = int(math.floor(2 ** (n ** delta)))
    return {"n": n, "delta": delta, "m": m,
            "runs_per_round": 4 * m * m,
            "total_runs": 4 * n * m * m,
            "total_bound": f"4*{n}*{m}^2*t({2 * n})"}
