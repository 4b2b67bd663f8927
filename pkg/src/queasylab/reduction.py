"""FACTOR-PREFIX to SAT, one-to-one and invertible.

Layout of the produced formula:

* Tag block: variables ``1..T`` where ``T = len(encode_pair(x, a))``; clause
  ``i`` is the unit clause on variable ``i`` with the polarity of bit ``i``.
* Semantic block: a ripple-carry multiplier ``p * q`` over fresh variables
  (Tseitin gate clauses), the product pinned to ``x``, ``p >= 2`` and
  ``q >= 2``, and a one-hot leading-bit selector on ``p`` that anchors the
  prefix ``a`` at the leading one. The block opens with a gate clause of two
  literals, so the tag block is recovered as the maximal run of leading unit
  clauses whose variable equals the clause position.

The formula is satisfiable iff some p with ``2 <= p < x`` divides x and
``bin(p)`` starts with ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .problems import CnfFormula, FacInstance, decode_pair, encode_pair

Lit = Union[int, bool]


class NotInImage(ValueError):
    """The formula carries no well-formed tag block."""


@dataclass(frozen=True)
class ReductionArtifact:
    formula: CnfFormula
    source: FacInstance
    widths: tuple[int, int]
    p_vars: tuple[int, ...]
    q_vars: tuple[int, ...]

    def stats(self) -> dict:
        f = self.formula
        return {"variables": f.variable_count, "clauses": f.clause_count,
                "literals": sum(len(c) for c in f.clauses),
                "tag_bits": len(f.tag_vars), "width_p": self.widths[0],
                "width_q": self.widths[1]}


class _Builder:
    def __init__(self, first_var: int):
        self.nv = first_var - 1
        self.clauses: list[tuple[int, ...]] = []

    def var(self) -> int:
        self.nv += 1
        return self.nv

    def add(self, *lits: int):
        self.clauses.append(tuple(lits))

    def and_(self, a: Lit, b: Lit) -> Lit:
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        g = self.var()
        self.add(-g, a)
        self.add(-g, b)
        self.add(g, -a, -b)
        return g

    def xor(self, a: Lit, b: Lit) -> Lit:
        if isinstance(a, bool) and isinstance(b, bool):
            return a != b
        if isinstance(a, bool):
            a, b = b, a
        if b is False:
            return a
        if b is True:
            return -a
        g = self.var()
        self.add(-g, a, b)
        self.add(-g, -a, -b)
        self.add(g, -a, b)
        self.add(g, a, -b)
        return g

    def full_add(self, a: Lit, b: Lit, c: Lit) -> tuple[Lit, Lit]:
        """(sum, carry); constants fold into half adders."""
        ins = [a, b, c]
        consts = [v for v in ins if isinstance(v, bool)]
        vs = [v for v in ins if not isinstance(v, bool)]
        ones = sum(consts)
        if len(vs) == 3:
            s, co = self.var(), self.var()
            for sa in (1, -1):
                for sb in (1, -1):
                    for sc in (1, -1):
                        parity = (sa < 0) ^ (sb < 0) ^ (sc < 0)
                        # forbids the wrong sum on the assignment this clause excludes
                        self.add(sa * a, sb * b, sc * c, s if parity else -s)
            self.add(-a, -b, co)
            self.add(-a, -c, co)
            self.add(-b, -c, co)
            self.add(a, b, -co)
            self.add(a, c, -co)
            self.add(b, c, -co)
            return s, co
        if len(vs) == 2:
            x, y = vs
            if ones == 0:
                return self.xor(x, y), self.and_(x, y)
            # x + y + 1
            s = self.xor(x, -y)
            co = self._or(x, y)
            return s, co
        if len(vs) == 1:
            x = vs[0]
            if ones == 0:
                return x, False
            if ones == 1:
                return -x, x
            return x, True
        return (ones % 2 == 1), ones >= 2

    def _or(self, a: int, b: int) -> int:
        g = self.var()
        self.add(g, -a)
        self.add(g, -b)
        self.add(-g, a, b)
        return g


def _multiply(b: _Builder, p: list[int], q: list[int]) -> list[Lit]:
    """LSB-first product bits of width len(p) + len(q)."""
    width = len(p) + len(q)
    acc: list[Lit] = [False] * width
    for i, pi in enumerate(p):
        carry: Lit = False
        for j in range(len(q)):
            pp = b.and_(pi, q[j])
            acc[i + j], carry = b.full_add(acc[i + j], pp, carry)
        k = i + len(q)
        while k < width and carry is not False:
            acc[k], carry = b.full_add(acc[k], carry, False)
            k += 1
    return acc


def reduce_to_sat(z: FacInstance) -> ReductionArtifact:
    x, a = z.x, z.a
    if x < 4:
        raise ValueError(f"x={x}: no nontrivial factor possible below 4")
    tag = encode_pair(x, a)
    t = len(tag)
    w = x.bit_length() - 1          # p, q <= x/2 fit in w bits
    b = _Builder(t + 1)
    p = [b.var() for _ in range(w)]
    q = [b.var() for _ in range(w)]
    prod = _multiply(b, p, q)
    if not b.clauses or len(b.clauses[0]) < 2:
        raise AssertionError("semantic block must open with a gate clause")
    # product == x
    for k, lit in enumerate(prod):
        bit = (x >> k) & 1
        if isinstance(lit, bool):
            if lit != bool(bit):
                v = b.var()
                b.add(v)
                b.add(-v)
        else:
            b.add(lit if bit else -lit)
    # p >= 2, q >= 2
    b.add(*p[1:])
    b.add(*q[1:])
    # one-hot leading-bit selector on p, prefix anchored at the leading one
    sel = [b.var() for _ in range(w)]
    b.add(*sel)
    for i in range(w):
        for j in range(i + 1, w):
            b.add(-sel[i], -sel[j])
    for k in range(w):
        b.add(-sel[k], p[k])
        for j in range(k + 1, w):
            b.add(-sel[k], -p[j])
        if len(a) > k + 1:
            b.add(-sel[k])
            continue
        for i, ch in enumerate(a):
            bit = p[k - i]
            b.add(-sel[k], bit if ch == "1" else -bit)
    clauses = [(i + 1,) if ch == "1" else (-(i + 1),) for i, ch in enumerate(tag)]
    clauses.extend(b.clauses)
    comments = (f"queasylab FACTOR-PREFIX reduction of {x}:{a}",
                f"tag block: clauses 1..{t} spell encode_pair(x, a)")
    f = CnfFormula(b.nv, tuple(clauses), tuple(range(1, t + 1)), comments)
    return ReductionArtifact(f, z, (w, w), tuple(p), tuple(q))


def tag_bits(f: CnfFormula) -> str:
    bits = []
    for i, clause in enumerate(f.clauses, 1):
        if len(clause) != 1 or abs(clause[0]) != i:
            break
        bits.append("1" if clause[0] > 0 else "0")
    return "".join(bits)


def invert_reduction(f: CnfFormula) -> FacInstance:
    bits = tag_bits(f)
    if not bits:
        raise NotInImage("formula has no tag block")
    try:
        x, a = decode_pair(bits)
        return FacInstance(x, a)
    except ValueError as exc:
        raise NotInImage(f"corrupt tag block: {exc}") from None


def factor_prefix(z: FacInstance) -> int:
    """Brute-force FACTOR-PREFIX oracle: some 2 <= p < x with p | x and
    bin(p) starting with a."""
    return int(any(z.x % p == 0 and format(p, "b").startswith(z.a)
                   for p in range(2, z.x)))


def solve(f: CnfFormula) -> tuple[int, list[int] | None]:
    """Decide with MiniSat; returns (sat, model)."""
    from pysat.solvers import Minisat22

    with Minisat22(bootstrap_with=[list(c) for c in f.clauses]) as s:
        ok = s.solve()
        return int(ok), (s.get_model() if ok else None)


def decode_model(art: ReductionArtifact, model: list[int]) -> tuple[int, int]:
    val = {abs(l): l > 0 for l in model}
    p = sum(1 << i for i, v in enumerate(art.p_vars) if val.get(v, False))
    q = sum(1 << i for i, v in enumerate(art.q_vars) if val.get(v, False))
    return p, q


def verify_reduction(z: FacInstance) -> dict:
    art = reduce_to_sat(z)
    sat, model = solve(art.formula)
    expected = factor_prefix(z)
    report = {"instance": str(z), "sat": sat, "expected": expected,
              "match": sat == expected, "roundtrip": invert_reduction(art.formula) == z}
    if model is not None:
        p, q = decode_model(art, model)
        report["witness"] = {"p": p, "q": q,
                             "valid": p * q == z.x and p >= 2 and q >= 2
                             and format(p, "b").startswith(z.a)}
    report.update(art.stats())
    return report


def clause_growth(widths=range(8, 21), a: str = "1") -> dict:
    """Clause counts against the multiplicand width w (x = 2^(w+1) - 1) with
    the fitted log-log exponent and the exact quadratic fit."""
    ws, cs = [], []
    for w in widths:
        art = reduce_to_sat(FacInstance((1 << (w + 1)) - 1, a))
        ws.append(art.widths[0])
        cs.append(art.formula.clause_count)
    slope = float(np.polyfit(np.log(ws), np.log(cs), 1)[0])
    quad = [float(c) for c in np.polyfit(ws, cs, 2)]
    return {"widths": ws, "clauses": cs, "exponent": slope, "quadratic": quad}
