"""Exact statevector simulation, quantum time-bounded measures, the gap
lemma scan, and the amplification procedure.

Circuit codec (bit-exact). A circuit with k qubits (1 <= k <= 12) is

    1^(k-1) 0                unary qubit count
    m_0 m_1 ... m_(k-1)      measured-qubit mask, qubit 0 first
    gate*                    2-bit tag + qubit indices

with tags ``00`` H, ``01`` T, ``10`` X, ``11`` CNOT (control, then target).
Each index takes ceil(log2 k) bits (zero bits when k = 1) and must be < k;
a CNOT needs distinct qubits. A trailing partial gate makes the string
invalid. Measurement outcomes are written with the lowest measured qubit
first.

Acceptor conventions: an input y is loaded by X gates on qubits
0..|y|-1 before the described gates run. For distinguishing circuits the
accept qubit is the highest-index measured qubit. For consistency circuits
the confidence qubit is the highest-index measured qubit and the answer qubit
the next one down.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .complexity import (ABOVE_LIMIT, ComplexityValue, SearchLimits, generator_table)
from .machine import EMIT0, EMIT1, Instruction, Program, encode, run_generator
from .problems import LanguageOracle

MAX_QUBITS = 12
GATE_TAGS = {"H": "00", "T": "01", "X": "10", "CNOT": "11"}
TAG_GATES = {v: k for k, v in GATE_TAGS.items()}
DEFAULT_EPSILON = 0.1
CIRCUIT_OUT_CAP = 16

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_T = np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_ONE_QUBIT = {"H": _H, "T": _T, "X": _X}


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class GateCircuit:
    qubit_count: int
    gates: tuple[tuple, ...] = ()
    measured: tuple[int, ...] = ()

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ValueError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(tuple(g) for g in self.gates))
        object.__setattr__(self, "measured", tuple(sorted(set(self.measured))))
        for g in self.gates:
            if g[0] not in GATE_TAGS:
                raise ValueError(f"unknown gate {g[0]!r}")
            qs = g[1:]
            if len(qs) != (2 if g[0] == "CNOT" else 1):
                raise ValueError(f"wrong arity for {g}")
            if any(not 0 <= q < self.qubit_count for q in qs):
                raise ValueError(f"qubit index out of range in {g}")
            if g[0] == "CNOT" and qs[0] == qs[1]:
                raise ValueError("CNOT control and target must differ")
        if any(not 0 <= q < self.qubit_count for q in self.measured):
            raise ValueError("measured qubit out of range")


# ------------------------------------------------------------------ codec

def _index_bits(k: int) -> int:
    return (k - 1).bit_length()


def encode_circuit(c: GateCircuit) -> str:
    k = c.qubit_count
    if k > MAX_QUBITS:
        raise ResourceError(f"{k} qubits exceeds the {MAX_QUBITS}-qubit limit")
    w = _index_bits(k)
    bits = "1" * (k - 1) + "0"
    bits += "".join("1" if q in c.measured else "0" for q in range(k))
    for g in c.gates:
        bits += GATE_TAGS[g[0]]
        bits += "".join(format(q, f"0{w}b") if w else "" for q in g[1:])
    return bits


def decode_circuit(bits: str) -> Optional[GateCircuit]:
    """Inverse of :func:`encode_circuit`; None for strings outside its image."""
    k = 1
    pos = 0
    while pos < len(bits) and bits[pos] == "1":
        k += 1
        pos += 1
    if pos >= len(bits) or k > MAX_QUBITS:
        return None
    pos += 1
    if len(bits) - pos < k:
        return None
    mask = bits[pos:pos + k]
    pos += k
    w = _index_bits(k)
    gates = []
    while pos < len(bits):
        tag = bits[pos:pos + 2]
        if len(tag) < 2:
            return None
        name = TAG_GATES[tag]
        pos += 2
        arity = 2 if name == "CNOT" else 1
        if len(bits) - pos < arity * w:
            return None
        qs = []
        for _ in range(arity):
            q = int(bits[pos:pos + w], 2) if w else 0
            pos += w
            if q >= k:
                return None
            qs.append(q)
        if name == "CNOT" and qs[0] == qs[1]:
            return None
        gates.append((name, *qs))
    return GateCircuit(k, tuple(gates), tuple(q for q in range(k) if mask[q] == "1"))


def parse_circuit(text: str) -> GateCircuit:
    """Textual fixture format, one item per line::

        qubits 2
        measure 0 1
        H 0
        CNOT 0 1
    """
    k = None
    measured: list[int] = []
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head.lower() == "qubits":
            k = int(rest[0])
        elif head.lower() == "measure":
            measured.extend(int(r) for r in rest)
        elif head.upper() in GATE_TAGS:
            gates.append((head.upper(), *map(int, rest)))
        else:
            raise ValueError(f"line {lineno}: unknown directive {head!r}")
    if k is None:
        raise ValueError("missing 'qubits' line")
    return GateCircuit(k, tuple(gates), tuple(measured))


def format_circuit(c: GateCircuit) -> str:
    lines = [f"qubits {c.qubit_count}"]
    if c.measured:
        lines.append("measure " + " ".join(map(str, c.measured)))
    lines.extend(" ".join(map(str, g)) for g in c.gates)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ simulation

def _apply_1q(state: np.ndarray, mat: np.ndarray, q: int, k: int) -> np.ndarray:
    psi = state.reshape((2,) * k)
    axis = k - 1 - q        # qubit q is bit q of the basis index
    psi = np.moveaxis(np.tensordot(mat, psi, axes=([1], [axis])), 0, axis)
    return psi.reshape(-1)


def _apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    idx = np.arange(state.size)
    flip = ((idx >> control) & 1).astype(bool)
    out = state.copy()
    out[idx[flip]] = state[idx[flip] ^ (1 << target)]
    return out


def statevector(c: GateCircuit, loaded: str = "") -> np.ndarray:
    k = c.qubit_count
    if k > MAX_QUBITS:
        raise ResourceError(f"{k} qubits exceeds the {MAX_QUBITS}-qubit limit")
    if len(loaded) > k:
        raise ValueError("input longer than the register")
    state = np.zeros(1 << k, dtype=complex)
    start = sum(1 << q for q, b in enumerate(loaded) if b == "1")
    state[start] = 1.0
    for g in c.gates:
        if g[0] == "CNOT":
            state = _apply_cnot(state, g[1], g[2])
        else:
            state = _apply_1q(state, _ONE_QUBIT[g[0]], g[1], k)
    return state


def basis_probabilities(c: GateCircuit, loaded: str = "") -> np.ndarray:
    return np.abs(statevector(c, loaded)) ** 2


def simulate(c: GateCircuit, loaded: str = "") -> dict[str, float]:
    """Exact outcome distribution over the measured qubits."""
    probs = basis_probabilities(c, loaded)
    idx = np.arange(probs.size)
    out: dict[str, float] = {}
    for i in np.nonzero(probs > 0)[0]:
        key = "".join(str((int(idx[i]) >> q) & 1) for q in c.measured)
        out[key] = out.get(key, 0.0) + float(probs[i])
    return out


def qubit_marginal(probs: np.ndarray, q: int) -> float:
    """Probability that qubit ``q`` reads 1."""
    idx = np.arange(probs.size)
    return float(probs[((idx >> q) & 1) == 1].sum())


# ------------------------------------------------------------------ gap lemma

def gap_index(probs: Sequence[float], tol: float = 1e-12) -> tuple[int, float]:
    """First 1-based index i with p_i - p_(i+1) >= p_1^2/(2+p_1), where the
    list is padded with a trailing zero (so i may equal the list length)."""
    p = [float(v) for v in probs]
    if not p:
        raise ValueError("need at least one probability")
    if any(v < 0 for v in p):
        raise ValueError("probabilities must be non-negative")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError("probabilities must be sorted in descending order")
    if sum(p) > 1 + 1e-9:
        raise ValueError("probabilities must sum to at most 1")
    threshold = p[0] ** 2 / (2 + p[0])
    padded = p + [0.0]
    for i in range(len(p)):
        gap = padded[i] - padded[i + 1]
        if gap >= threshold - tol:
            return i + 1, gap
    raise ArithmeticError("no gap found; the input violates the lemma's premise")


# ------------------------------------------------------------------ amplification

@dataclass(frozen=True)
class AmplificationPlan:
    n_copies: int
    j: int
    a: int
    r: float
    two_delta: float
    epsilon: float
    top_list: tuple[str, ...]

    @property
    def delta(self) -> float:
        return self.two_delta / 2

    def failure_bound(self, n: Optional[int] = None) -> float:
        return self.r ** (-(self.n_copies if n is None else n))


def plan_amplification(dist: Mapping[str, float], target: str, n_copies: int) -> AmplificationPlan:
    eps = float(dist.get(target, 0.0))
    if eps <= 0:
        raise ValueError(f"target {target!r} has probability 0")
    # descending probability; target first among equals, then lexicographic
    order = sorted(dist, key=lambda s: (-dist[s], s != target, s))
    m = order.index(target)
    i, _ = gap_index([dist[s] for s in order[m:]])
    j = m + i
    top = tuple(sorted(order[:j]))
    two_delta = eps ** 2 / (2 + eps)
    r = math.exp((two_delta / 2) ** 2 / 3)
    return AmplificationPlan(n_copies, j, top.index(target) + 1, r, two_delta, eps, top)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2 ** 64 - 1), trial]))


def run_amplified(dist: Mapping[str, float], plan: AmplificationPlan,
                  rng: np.random.Generator) -> str:
    """One execution: sample n copies, keep the j most frequent strings
    (ties by lexicographic order), sort them, return the a-th."""
    keys = sorted(dist)
    p = np.array([dist[s] for s in keys], dtype=float)
    p = p / p.sum()
    counts = rng.multinomial(plan.n_copies, p)
    ranked = sorted(range(len(keys)), key=lambda i: (-counts[i], keys[i]))
    chosen = sorted(keys[i] for i in ranked[:plan.j])
    return chosen[plan.a - 1] if plan.a <= len(chosen) else ""


def amplify(source: Union[GateCircuit, Mapping[str, float]], target: str, n_copies: int,
            seed: int = 0, trials: int = 1000) -> dict:
    """Build the amplification plan and estimate its success rate by Monte
    Carlo. ``source`` is a circuit or an explicit outcome distribution."""
    dist = simulate(source) if isinstance(source, GateCircuit) else dict(source)
    plan = plan_amplification(dist, target, n_copies)
    hits = sum(run_amplified(dist, plan, _trial_rng(seed, t)) == target for t in range(trials))
    return {"plan": plan, "success_estimate": hits / trials, "trials": trials}


# ------------------------------------------------------------------ measures

@functools.lru_cache(maxsize=16)
def circuit_table(max_len: int, budget: int, out_cap: int = CIRCUIT_OUT_CAP):
    """Shortest emitter for every valid circuit description, ordered by
    (program length, program bits)."""
    table = generator_table(max_len, budget, out_cap)
    rows = []
    for out, prog in table.items():
        c = decode_circuit(out)
        if c is not None:
            rows.append((prog, out, c))
    rows.sort(key=lambda row: row[0].sort_key())
    return tuple(rows)


@functools.lru_cache(maxsize=200_000)
def _probs_cached(c: GateCircuit, loaded: str) -> np.ndarray:
    probs = basis_probabilities(c, loaded)
    probs.setflags(write=False)
    return probs


def accept_probability(c: GateCircuit, y: str) -> float:
    if not c.measured or len(y) > c.qubit_count:
        return 0.0
    return qubit_marginal(_probs_cached(c, y), c.measured[-1])


def confidence_readout(c: GateCircuit, y: str, chi: int) -> Optional[tuple[float, float]]:
    """(p(confidence=1), p(answer=chi)) or None when the circuit lacks the
    two designated qubits or cannot hold the input."""
    if len(c.measured) < 2 or len(y) > c.qubit_count:
        return None
    probs = _probs_cached(c, y)
    p_know = qubit_marginal(probs, c.measured[-1])
    p_one = qubit_marginal(probs, c.measured[-2])
    return p_know, (p_one if chi == 1 else 1.0 - p_one)


def _q_consistent(readout, eps: float) -> tuple[bool, bool]:
    """(consistent, decides) for one input."""
    if readout is None:
        return False, False
    p_know, p_right = readout
    confident = p_know > 0.5 + eps and p_right > 0.5 + eps
    abstains = (1.0 - p_know) > 0.5 + eps
    return confident or abstains, confident


def _witness(prog: Program) -> ComplexityValue:
    return ComplexityValue(prog.length, prog)


def qc_t(x: str, epsilon: float, limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Shortest program emitting a circuit that outputs ``x`` with probability >= epsilon."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    for prog, _, c in circuit_table(limits.max_program_len, limits.step_budget):
        if len(c.measured) == len(x) and simulate(c).get(x, 0.0) >= epsilon - 1e-12:
            return _witness(prog)
    return ABOVE_LIMIT


def qcd_t(x: str, epsilon: float = DEFAULT_EPSILON,
          limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Shortest emitter of a circuit accepting ``x`` with probability above
    1/2+eps and every other universe member with probability below 1/2-eps."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    universe = limits.universe_for(x)
    members = universe.members()
    for prog, _, c in circuit_table(limits.max_program_len, limits.step_budget):
        if accept_probability(c, x) <= 0.5 + epsilon:
            continue
        if all(accept_probability(c, y) < 0.5 - epsilon for y in members if y != x):
            return _witness(prog)
    return ABOVE_LIMIT


def is_quantum_consistent(c: GateCircuit, language: LanguageOracle,
                          members: Sequence[str], epsilon: float) -> bool:
    return all(_q_consistent(confidence_readout(c, y, language(y)), epsilon)[0]
               for y in members)


def qic_t(x: str, language: LanguageOracle, epsilon: float = DEFAULT_EPSILON,
          limits: SearchLimits = SearchLimits()) -> ComplexityValue:
    """Shortest emitter of a quantum epsilon-consistent circuit that decides ``x``."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    universe = limits.universe_for(x)
    members = universe.members()
    for prog, _, c in circuit_table(limits.max_program_len, limits.step_budget):
        ok, decides = _q_consistent(confidence_readout(c, x, language(x)), epsilon)
        if not decides:
            continue
        if is_quantum_consistent(c, language, members, epsilon):
            return _witness(prog)
    return ABOVE_LIMIT


def circuit_of(program: Program, budget: int) -> Optional[GateCircuit]:
    out = run_generator(program, budget)
    return None if out.output is None else decode_circuit(out.output)


def emitter_program(bits: str) -> Program:
    """Literal emitter: one EMIT per bit, no HALT (falling off the end halts)."""
    return encode([Instruction(EMIT1 if b == "1" else EMIT0) for b in bits])
