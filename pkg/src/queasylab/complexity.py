"""Exact time-bounded measures by exhaustive program enumeration.

All three measures are computed by scanning programs in length-then-lex
order and keeping the first witness. Distinguishing and consistency
predicates are checked over a finite universe of inputs, which every result
records.
"""

from __future__ import annotations

import functools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernel
from .machine import Program, bits_to_hex, run_acceptor, run_generator
from .problems import LanguageOracle, all_strings, strings_up_to

MAX_PROGRAM_LEN_CAP = 30
DEFAULT_STEP_BUDGET = 256
DEFAULT_OUT_CAP = 16


class IndeterminateError(ValueError):
    """Raised when a classification needs a censored (above-limit) value."""


class InconsistentProgramError(ValueError):
    pass


@dataclass(frozen=True)
class UniverseSpec:
    kind: str = "same_length"   # or "up_to_length"
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("same_length", "up_to_length"):
            raise ValueError(f"unknown universe kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("universe length must be non-negative")

    @classmethod
    def same_length(cls, n: int) -> "UniverseSpec":
        return cls("same_length", n)

    @classmethod
    def up_to_length(cls, n: int) -> "UniverseSpec":
        return cls("up_to_length", n)

    def members(self) -> list[str]:
        return all_strings(self.n) if self.kind == "same_length" else strings_up_to(self.n)

    def __contains__(self, x: str) -> bool:
        return len(x) == self.n if self.kind == "same_length" else len(x) <= self.n

    def describe(self) -> str:
        return f"{self.kind}({self.n})"


@dataclass(frozen=True)
class SearchLimits:
    max_program_len: int = 26
    step_budget: int = DEFAULT_STEP_BUDGET
    universe: Optional[UniverseSpec] = None   # None: same_length(|x|)

    def __post_init__(self):
        if not 0 <= self.max_program_len <= MAX_PROGRAM_LEN_CAP:
            raise ValueError(
                f"max_program_len={self.max_program_len} outside [0, {MAX_PROGRAM_LEN_CAP}]")
        if self.step_budget < 0:
            raise ValueError("step_budget must be non-negative")

    def universe_for(self, x: str) -> UniverseSpec:
        return self.universe if self.universe is not None else UniverseSpec.same_length(len(x))


@dataclass(frozen=True)
class ComplexityValue:
    value: Optional[int]                 # None means above the search limit
    witness: Optional[Program] = None

    @property
    def censored(self) -> bool:
        return self.value is None

    def __int__(self) -> int:
        if self.value is None:
            raise IndeterminateError("value is above the search limit")
        return self.value

    def to_json(self):
        return {"value": self.value,
                "witness": None if self.witness is None else bits_to_hex(self.witness.bits),
                "censored": self.censored}


ABOVE_LIMIT = ComplexityValue(None, None)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("QUEASYLAB_THREADS", "1")))
    except ValueError:
        return 1


def _chunks(length: int, parts: int):
    total = 1 << length
    step = max(1, -(-total // parts))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


# ------------------------------------------------------------ generator scan

def _gen_part(args):
    length, lo, hi, budget, out_cap = args
    size = (1 << (out_cap + 1)) - 1
    bl = np.full(size, kernel.NONE, dtype=np.int64)
    bv = np.zeros(size, dtype=np.int64)
    kernel.scan_generators(length, lo, hi, budget, out_cap, bl, bv)
    return bl, bv


@functools.lru_cache(maxsize=16)
def generator_table(max_len: int, budget: int, out_cap: int = DEFAULT_OUT_CAP):
    """Shortest program for every output of at most ``out_cap`` bits.

    Returns ``{output_bits: Program}``.
    """
    size = (1 << (out_cap + 1)) - 1
    best_len = np.full(size, kernel.NONE, dtype=np.int64)
    best_val = np.zeros(size, dtype=np.int64)
    workers = _workers()
    for length in range(max_len + 1):
        if workers > 1 and length >= 16:
            jobs = [(length, lo, hi, budget, out_cap) for lo, hi in _chunks(length, workers)]
            with ProcessPoolExecutor(workers) as pool:
                for bl, bv in pool.map(_gen_part, jobs):
                    kernel.merge_best(best_len, best_val, bl, bv)
        else:
            kernel.scan_generators(length, 0, 1 << length, budget, out_cap, best_len, best_val)
    table = {}
    for idx in np.nonzero(best_len != kernel.NONE)[0]:
        k = int(idx + 1).bit_length() - 1
        val = int(idx) + 1 - (1 << k)
        out = format(val, f"0{k}b") if k else ""
        table[out] = _program(int(best_len[idx]), int(best_val[idx]))
    return table


def _program(length: int, value: int) -> Program:
    return Program(format(value, f"0{length}b") if length else "")


# ------------------------------------------------------------ acceptor scan

@dataclass(frozen=True)
class AcceptorTable:
    universe: UniverseSpec
    members: tuple[str, ...]
    languages: tuple[str, ...]
    cd: dict = field(default_factory=dict)        # x -> Program
    ic: dict = field(default_factory=dict)        # (language, x) -> Program


def _acc_arrays(members: Sequence[str]):
    width = max([len(m) for m in members] + [1])
    inputs = np.zeros((len(members), width), dtype=np.int64)
    lens = np.zeros(len(members), dtype=np.int64)
    for j, m in enumerate(members):
        lens[j] = len(m)
        for i, c in enumerate(m):
            inputs[j, i] = 1 if c == "1" else 0
    return inputs, lens


def _acc_part(args):
    length, lo, hi, budget, inputs, lens, chi = args
    n_u, n_l = inputs.shape[0], chi.shape[0]
    cl = np.full(n_u, kernel.NONE, dtype=np.int64)
    cv = np.zeros(n_u, dtype=np.int64)
    il = np.full((n_l, n_u), kernel.NONE, dtype=np.int64)
    iv = np.zeros((n_l, n_u), dtype=np.int64)
    kernel.scan_acceptors(length, lo, hi, budget, inputs, lens, chi, cl, cv, il, iv)
    return cl, cv, il, iv


@functools.lru_cache(maxsize=32)
def acceptor_table(universe: UniverseSpec, languages: tuple[LanguageOracle, ...],
                   max_len: int, budget: int) -> AcceptorTable:
    """Distinguishing and instance-complexity witnesses for every universe
    member and every language, from one enumeration pass."""
    members = universe.members()
    inputs, lens = _acc_arrays(members)
    chi = np.array([[lang(y) for y in members] for lang in languages],
                   dtype=np.int64).reshape(len(languages), len(members))
    n_u, n_l = len(members), len(languages)
    cd_len = np.full(n_u, kernel.NONE, dtype=np.int64)
    cd_val = np.zeros(n_u, dtype=np.int64)
    ic_len = np.full((n_l, n_u), kernel.NONE, dtype=np.int64)
    ic_val = np.zeros((n_l, n_u), dtype=np.int64)
    workers = _workers()
    for length in range(max_len + 1):
        if workers > 1 and length >= 16:
            jobs = [(length, lo, hi, budget, inputs, lens, chi)
                    for lo, hi in _chunks(length, workers)]
            with ProcessPoolExecutor(workers) as pool:
                for cl, cv, il, iv in pool.map(_acc_part, jobs):
                    kernel.merge_best(cd_len, cd_val, cl, cv)
                    kernel.merge_best(ic_len, ic_val, il, iv)
        else:
            kernel.scan_acceptors(length, 0, 1 << length, budget, inputs, lens, chi,
                                  cd_len, cd_val, ic_len, ic_val)
    cd = {members[j]: _program(int(cd_len[j]), int(cd_val[j]))
          for j in range(n_u) if cd_len[j] != kernel.NONE}
    ic = {(languages[k].name, members[j]): _program(int(ic_len[k, j]), int(ic_val[k, j]))
          for k in range(n_l) for j in range(n_u) if ic_len[k, j] != kernel.NONE}
    return AcceptorTable(universe, tuple(members), tuple(l.name for l in languages), cd, ic)


def _value(program: Optional[Program]) -> ComplexityValue:
    return ABOVE_LIMIT if program is None else ComplexityValue(program.length, program)


# ------------------------------------------------------------ measures

def c_t(x: str, limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Length of the shortest program that prints ``x`` within the step budget."""
    if not x:
        raise ValueError("x must be non-empty")
    table = generator_table(limits.max_program_len, limits.step_budget,
                            max(DEFAULT_OUT_CAP, len(x)))
    return _value(table.get(x))


def cd_t(x: str, limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Shortest program accepting ``x`` and rejecting the rest of the universe."""
    universe = limits.universe_for(x)
    if x not in universe:
        raise ValueError(f"{x!r} is not in universe {universe.describe()}")
    table = acceptor_table(universe, (), limits.max_program_len, limits.step_budget)
    return _value(table.cd.get(x))


def ic_t(x: str, language: LanguageOracle,
         limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Shortest program consistent with ``language`` on the universe that
    answers ``x`` (necessarily correctly)."""
    universe = limits.universe_for(x)
    if x not in universe:
        raise ValueError(f"{x!r} is not in universe {universe.describe()}")
    table = acceptor_table(universe, (language,), limits.max_program_len, limits.step_budget)
    return _value(table.ic.get((language.name, x)))


def classify_instance(x: str, language: LanguageOracle, limits: SearchLimits,
                      threshold: int) -> str:
    """``"hard"`` when cd - ic <= threshold, else ``"easy"``."""
    cd = cd_t(x, limits)
    ic = ic_t(x, language, limits)
    return classify_values(cd, ic, threshold)


def classify_values(cd: ComplexityValue, ic: ComplexityValue, threshold: int) -> str:
    if cd.censored or ic.censored:
        raise IndeterminateError("cannot classify: a measure is above the search limit")
    return "hard" if cd.value - ic.value <= threshold else "easy"


def verdicts(program: Program, members: Sequence[str], budget: int) -> list[Optional[int]]:
    return [run_acceptor(program, y, budget).answer for y in members]


def is_consistent(program: Program, language: LanguageOracle, members: Sequence[str],
                  budget: int) -> bool:
    return all(v is None or v == language(y)
               for v, y in zip(verdicts(program, members, budget), members))


def utility_set(program: Program, language: LanguageOracle,
                limits: SearchLimits, universe: Optional[UniverseSpec] = None) -> dict:
    """Universe members the program answers (its utility set) and their count."""
    universe = universe or limits.universe
    if universe is None:
        raise ValueError("utility_set needs an explicit universe")
    members = universe.members()
    answers = verdicts(program, members, limits.step_budget)
    for y, v in zip(members, answers):
        if v is not None and v != language(y):
            raise InconsistentProgramError(
                f"program answers {v} on {y!r} but chi={language(y)}")
    chosen = [y for y, v in zip(members, answers) if v is not None]
    return {"count": len(chosen), "members": chosen}


def check_generator_witness(program: Program, x: str, budget: int) -> bool:
    return run_generator(program, budget).output == x


def check_cd_witness(program: Program, x: str, members: Sequence[str], budget: int) -> bool:
    return all(v == (1 if y == x else 0)
               for v, y in zip(verdicts(program, members, budget), members))


def check_ic_witness(program: Program, x: str, language: LanguageOracle,
                     members: Sequence[str], budget: int) -> bool:
    return (is_consistent(program, language, members, budget)
            and run_acceptor(program, x, budget).answer is not None)


# ------------------------------------------------------------ reports

@dataclass
class ComplexityReport:
    instance: str
    language: str
    universe: UniverseSpec
    limits: SearchLimits
    c: ComplexityValue
    cd: ComplexityValue
    ic: ComplexityValue
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "instance_hex": bits_to_hex(self.instance),
            "instance_bits": self.instance,
            "language": self.language,
            "universe": self.universe.describe(),
            "budgets": {"max_program_len": self.limits.max_program_len,
                        "step_budget": self.limits.step_budget},
            "c": self.c.value, "cd": self.cd.value, "ic": self.ic.value,
            "witnesses": {k: (None if v.witness is None else bits_to_hex(v.witness.bits))
                          for k, v in (("c", self.c), ("cd", self.cd), ("ic", self.ic))},
            "censored": {"c": self.c.censored, "cd": self.cd.censored, "ic": self.ic.censored},
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def report(x: str, language: LanguageOracle, limits: SearchLimits) -> ComplexityReport:
    return ComplexityReport(x, language.name, limits.universe_for(x), limits,
                            c_t(x, limits), cd_t(x, limits), ic_t(x, language, limits))
