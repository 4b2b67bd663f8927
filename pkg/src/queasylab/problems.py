"""Toy languages with exact oracles, plus the budgeted SAT decider.

PARITY is the set of bitstrings with an odd number of ones. FAC holds the
pairs <x, a> such that the binary form of the largest prime factor of x
starts with a (the empty prefix matches everything). SAT instances are
:class:`CnfFormula` objects.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

FAC_MAX_X = 1 << 40


class DimacsError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class LanguageOracle:
    """Ground-truth characteristic function on a declared domain."""

    name: str
    chi: Callable[[Any], int]
    domain: str = "bitstrings"

    def __call__(self, instance) -> int:
        return self.chi(instance)


def parity(x: str) -> int:
    return x.count("1") & 1


PARITY = LanguageOracle("parity", parity)


# ------------------------------------------------------------------ FAC

def largest_prime_factor(x: int) -> int:
    """Trial division; fine up to 40-bit inputs."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    largest = 1
    while x % 2 == 0:
        largest = 2
        x //= 2
    d = 3
    while d * d <= x:
        while x % d == 0:
            largest = d
            x //= d
        d += 2
    return max(largest, x) if x > 1 else largest


@dataclass(frozen=True)
class FacInstance:
    x: int
    a: str = ""

    def __post_init__(self):
        if self.x < 2:
            raise ValueError(f"FAC instance needs x >= 2, got {self.x}")
        if any(c not in "01" for c in self.a):
            raise ValueError(f"prefix must be a bitstring, got {self.a!r}")

    def __str__(self) -> str:
        return f"{self.x}:{self.a}"

    @classmethod
    def parse(cls, text: str) -> "FacInstance":
        """Parse the textual form ``x:a`` (``a`` may be empty)."""
        x, sep, a = text.partition(":")
        if not sep:
            raise ValueError(f"expected 'x:a', got {text!r}")
        try:
            xv = int(x)
        except ValueError:
            raise ValueError(f"bad integer in {text!r}") from None
        return cls(xv, a)

    def encode(self) -> str:
        return encode_pair(self.x, self.a)


def fac_decide(z: FacInstance) -> int:
    if not 2 <= z.x <= FAC_MAX_X:
        raise ValueError(f"x={z.x} outside the supported range [2, 2^40]")
    return int(format(largest_prime_factor(z.x), "b").startswith(z.a))


def encode_pair(x: int, a: str) -> str:
    """Self-delimiting pairing: ``1^m 0``, then the m-bit length of bin(x),
    then bin(x), then the bits of ``a``."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if any(c not in "01" for c in a):
        raise ValueError(f"prefix must be a bitstring, got {a!r}")
    bx = format(x, "b")
    bl = format(len(bx), "b")
    return "1" * len(bl) + "0" + bl + bx + a


def decode_pair(bits: str) -> tuple[int, str]:
    if any(c not in "01" for c in bits):
        raise ValueError("encoding must be a bitstring")
    m = 0
    while m < len(bits) and bits[m] == "1":
        m += 1
    if m == 0 or m >= len(bits):
        raise ValueError("malformed pair encoding: missing length header")
    pos = m + 1
    bl = bits[pos:pos + m]
    if len(bl) < m or bl[0] != "1":
        raise ValueError("malformed pair encoding: bad length field")
    length = int(bl, 2)
    pos += m
    bx = bits[pos:pos + length]
    if len(bx) < length or bx[0] != "1":
        raise ValueError("malformed pair encoding: truncated or non-minimal x")
    x = int(bx, 2)
    if x < 2:
        raise ValueError("malformed pair encoding: x < 2")
    return x, bits[pos + length:]


def _fac_chi(bits: str) -> int:
    """Strings that are not pair encodings are non-members."""
    try:
        x, a = decode_pair(bits)
    except ValueError:
        return 0
    return fac_decide(FacInstance(x, a))


FAC = LanguageOracle("fac", _fac_chi, domain="encode_pair strings")


# ------------------------------------------------------------------ CNF

@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula. ``tag_vars`` lists variables owned by the tag block;
    ``comments`` is a side channel that never affects semantics or equality."""

    variable_count: int
    clauses: tuple[tuple[int, ...], ...]
    tag_vars: tuple[int, ...] = ()
    comments: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for i, clause in enumerate(self.clauses):
            if not clause:
                raise ValueError(f"clause {i} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range in clause {i}")
        if self.tag_vars:
            tags = set(self.tag_vars)
            for clause in self.clauses:
                vs = {abs(l) for l in clause}
                if vs & tags and (len(clause) != 1):
                    raise ValueError("tag variables may only appear in unit clauses")

    @property
    def clause_count(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF. Clauses may span lines; each ends with ``0``."""
    header = None
    comments = []
    clauses = []
    current: list[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        last_line = lineno
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(lineno, "duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(lineno, f"malformed header {line!r}")
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(lineno, f"malformed header {line!r}") from None
            if nv < 0 or nc < 0:
                raise DimacsError(lineno, "negative counts in header")
            header = (nv, nc)
            continue
        if line.startswith("%"):
            break
        if header is None:
            raise DimacsError(lineno, "clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise DimacsError(lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsError(lineno, f"literal {lit} exceeds variable count {header[0]}")
                current.append(lit)
    if header is None:
        raise DimacsError(last_line, "missing problem line")
    if current:
        raise DimacsError(last_line, "unterminated clause")
    if len(clauses) != header[1]:
        raise DimacsError(last_line, f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses), comments=tuple(comments))


def emit_dimacs(f: CnfFormula) -> str:
    """Comments first, then ``p cnf V C``, then one clause per line ending ``0``."""
    lines = [f"c {c}".rstrip() for c in f.comments]
    lines.append(f"p cnf {f.variable_count} {f.clause_count}")
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def random_kcnf(n_vars: int, n_clauses: int, k: int = 3, seed: int = 0) -> CnfFormula:
    """Uniform random k-CNF with distinct variables in each clause."""
    rng = random.Random(seed)
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n_vars + 1), min(k, n_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n_vars, tuple(clauses))


def brute_force_sat(f: CnfFormula, chunk: int = 1 << 16) -> int:
    """Exhaustive check over all assignments (vectorized)."""
    n = f.variable_count
    if not f.clauses:
        return 1
    total = 1 << n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        sat = np.ones(idx.shape, dtype=bool)
        for clause in f.clauses:
            cl = np.zeros(idx.shape, dtype=bool)
            for lit in clause:
                bit = (idx >> (abs(lit) - 1)) & 1
                cl |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
            sat &= cl
            if not sat.any():
                break
        if sat.any():
            return 1
    return 0


def brute_force_models(f: CnfFormula) -> list[dict[int, bool]]:
    """All satisfying assignments; tiny formulas only."""
    out = []
    for bits in itertools.product((False, True), repeat=f.variable_count):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in f.clauses):
            out.append({i + 1: b for i, b in enumerate(bits)})
    return out


def _simplify(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = tuple(l for l in c if l != -lit)
            if not c:
                return None
        out.append(c)
    return out


def _unit_propagate(clauses):
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses
        clauses = _simplify(clauses, unit)
        if clauses is None:
            return None


class _OutOfBudget(Exception):
    pass


def sat_decide_budgeted(f: CnfFormula, budget: int) -> Optional[int]:
    """DPLL with unit propagation. Each branching trial costs one unit of
    budget; returns None (don't know) once the budget is spent before the
    search resolves. Branching picks the lowest-numbered free variable of the
    first clause, trying the positive literal first."""
    used = 0

    def solve(clauses) -> bool:
        nonlocal used
        clauses = _unit_propagate(clauses)
        if clauses is None:
            return False
        if not clauses:
            return True
        var = min(abs(l) for l in clauses[0])
        for lit in (var, -var):
            if used >= budget:
                raise _OutOfBudget
            used += 1
            nxt = _simplify(clauses, lit)
            if nxt is not None and solve(nxt):
                return True
        return False

    try:
        return int(solve(list(f.clauses)))
    except _OutOfBudget:
        return None


def unit_propagation_decide(f: CnfFormula) -> Optional[int]:
    """Answer only what unit propagation alone settles."""
    clauses = _unit_propagate(list(f.clauses))
    if clauses is None:
        return 0
    if not clauses:
        return 1
    return None


SAT = LanguageOracle("sat", brute_force_sat, domain="CnfFormula")


def all_strings(n: int) -> list[str]:
    return ["".join(t) for t in itertools.product("01", repeat=n)]


def strings_up_to(n: int) -> list[str]:
    return [s for k in range(n + 1) for s in all_strings(k)]


def chi_vector(language: LanguageOracle, members: Sequence[str]) -> list[int]:
    return [language(y) for y in members]
