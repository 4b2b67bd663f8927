"""Queasiness quantities, proxy estimators and the landscape table.

Exact mode compares enumerated ic against enumerated qic on bitstring
instances. Proxy mode works on CNF formulas: the ic side is a pre-registered
solver portfolio, the cd side a sliding-window compressor, and the quantum
side a declared constant for reduction-generated instances (never measured).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Union

from .complexity import SearchLimits, c_t, cd_t, ic_t
from .machine import bits_to_hex
from .problems import (SAT, CnfFormula, FacInstance, LanguageOracle, emit_dimacs,
                       sat_decide_budgeted, unit_propagation_decide)
from .quantum import DEFAULT_EPSILON, qic_t
from .reduction import reduce_to_sat

CSV_COLUMNS = ("instance_id", "language", "mode", "n", "ic", "qic", "cd", "c",
               "delta_ic", "ric", "class", "censored", "seed", "budgets")

EASY, QUEASY, HARD, INDETERMINATE = "Easy", "Queasy", "Hard", "Indeterminate"


class ConfigurationError(ValueError):
    """A portfolio member contradicts the language on the validation set."""


# ------------------------------------------------------------ arithmetic

def delta_from_values(ic: Optional[int], qic: Optional[int]) -> Optional[int]:
    """ic - qic, or None (censored) when either side is censored."""
    if ic is None or qic is None:
        return None
    return ic - qic


def ric_from_values(ic: Optional[int], qic: Optional[int]) -> Optional[float]:
    """Raw 1 - qic/ic; may be negative when qic exceeds ic."""
    if ic is None or qic is None:
        return None
    if ic <= 0:
        raise ValueError("ic must be at least 1")
    return 1.0 - qic / ic


@dataclass(frozen=True)
class QuantumLimits:
    max_program_len: int = 26
    step_budget: int = 256
    epsilon: float = DEFAULT_EPSILON

    def search(self, universe=None) -> SearchLimits:
        return SearchLimits(self.max_program_len, self.step_budget, universe)


def delta_ic(x: str, language: LanguageOracle, classical: SearchLimits,
             quantum: QuantumLimits) -> Optional[int]:
    ic = ic_t(x, language, classical).value
    qic = qic_t(x, language, quantum.epsilon, quantum.search(classical.universe)).value
    return delta_from_values(ic, qic)


def ric(x: str, language: LanguageOracle, classical: SearchLimits,
        quantum: QuantumLimits) -> Optional[float]:
    ic = ic_t(x, language, classical).value
    qic = qic_t(x, language, quantum.epsilon, quantum.search(classical.universe)).value
    return ric_from_values(ic, qic)


@dataclass
class QueasinessRecord:
    instance_id: str
    language: str
    mode: str                      # "exact" or "proxy"
    n: int
    ic: Optional[int]
    qic: Optional[int]
    cd: Optional[int] = None
    c: Optional[int] = None
    seed: int = 0
    budgets: str = ""
    note: str = ""

    @property
    def delta_ic(self) -> Optional[int]:
        return delta_from_values(self.ic, self.qic)

    @property
    def ric(self) -> Optional[float]:
        return ric_from_values(self.ic, self.qic) if self.ic else None

    @property
    def anomaly(self) -> bool:
        r = self.ric
        return r is not None and r < 0

    @property
    def ric_clamped(self) -> Optional[float]:
        r = self.ric
        return None if r is None else max(r, 0.0)

    @property
    def censored(self) -> tuple[str, ...]:
        return tuple(k for k in ("ic", "qic", "cd", "c") if getattr(self, k) is None)

    def row(self, margin: int) -> dict:
        r = self.ric
        flags = list(self.censored)
        if self.anomaly:
            flags.append("anomaly")
        if self.note:
            flags.append(self.note)
        return {"instance_id": self.instance_id, "language": self.language,
                "mode": self.mode, "n": self.n,
                "ic": _cell(self.ic), "qic": _cell(self.qic),
                "cd": _cell(self.cd), "c": _cell(self.c),
                "delta_ic": _cell(self.delta_ic),
                "ric": "" if r is None else f"{r:.6f}",
                "class": classify_queasy(self, margin),
                "censored": "|".join(flags), "seed": self.seed, "budgets": self.budgets}


def _cell(v) -> str:
    return "" if v is None else str(v)


def classify_queasy(record: QueasinessRecord, margin: int) -> str:
    """Queasy when qic + margin < ic; Easy when both are at most ``margin`` or
    ic sits more than ``margin`` below cd; Hard when ic is within ``margin``
    of cd; Indeterminate when a needed value is censored."""
    ic, qic, cd = record.ic, record.qic, record.cd
    if ic is None or qic is None:
        return INDETERMINATE
    if qic + margin < ic:
        return QUEASY
    if ic <= margin and qic <= margin:
        return EASY
    if cd is None:
        return INDETERMINATE
    return HARD if ic >= cd - margin else EASY


# ------------------------------------------------------------ compressor

def _gamma(v: int) -> str:
    """Elias gamma code of v >= 1."""
    b = format(v, "b")
    return "0" * (len(b) - 1) + b


def _read_gamma(bits: str, pos: int) -> tuple[int, int]:
    z = 0
    while bits[pos + z] == "0":
        z += 1
    end = pos + 2 * z + 1
    return int(bits[pos + z:end], 2), end


@dataclass(frozen=True)
class CompressorConfig:
    window_bits: int = 12          # match offsets in [1, 2^window_bits]
    min_match: int = 16
    max_candidates: Optional[int] = None   # None: every earlier match in the window


def compress(x: str, cfg: CompressorConfig = CompressorConfig()) -> str:
    """Bit-level LZ77. Stream: gamma(|x|+1), then tokens. ``0 gamma(r) bits``
    is a literal run of r bits; ``1 offset gamma(len-min_match+1)`` copies
    ``len`` bits from ``offset`` back (overlap allowed)."""
    n = len(x)
    out = [_gamma(n + 1)]
    window = 1 << cfg.window_bits
    k = cfg.min_match
    table: dict[str, list[int]] = {}
    lit_start = 0
    indexed = 0
    i = 0

    def flush(end: int):
        if end > lit_start:
            out.append("0" + _gamma(end - lit_start) + x[lit_start:end])

    while i < n:
        best_len, best_off = 0, 0
        if i + k <= n:
            for j in range(indexed, i):
                table.setdefault(x[j:j + k], []).append(j)
            indexed = max(indexed, i)
            cands = table.get(x[i:i + k], [])
            if cfg.max_candidates is not None:
                cands = cands[-cfg.max_candidates:]
            for j in reversed(cands):
                off = i - j
                if off > window:
                    break
                length = k
                while i + length < n and x[i + length] == x[i + length - off]:
                    length += 1
                if length > best_len:
                    best_len, best_off = length, off
        if best_len >= k:
            flush(i)
            out.append("1" + format(best_off - 1, f"0{cfg.window_bits}b")
                       + _gamma(best_len - k + 1))
            i += best_len
            lit_start = i
        else:
            i += 1
    flush(n)
    return "".join(out)


def decompress(bits: str, cfg: CompressorConfig = CompressorConfig()) -> str:
    n, pos = _read_gamma(bits, 0)
    n -= 1
    out: list[str] = []
    while len(out) < n:
        flag = bits[pos]
        pos += 1
        if flag == "0":
            r, pos = _read_gamma(bits, pos)
            out.extend(bits[pos:pos + r])
            pos += r
        else:
            off = int(bits[pos:pos + cfg.window_bits], 2) + 1
            pos += cfg.window_bits
            length, pos = _read_gamma(bits, pos)
            length += cfg.min_match - 1
            for _ in range(length):
                out.append(out[-off])
    if pos != len(bits) or len(out) != n:
        raise ValueError("trailing or truncated compressed stream")
    return "".join(out)


def compressor_cd_proxy(x: str, cfg: CompressorConfig = CompressorConfig()) -> int:
    return len(compress(x, cfg))


# ------------------------------------------------------------ solver portfolio

@dataclass(frozen=True)
class PortfolioMember:
    id: str                 # "unit-propagation" or "dpll"
    description_length: int
    budget: int

    def __post_init__(self):
        if self.description_length <= 0:
            raise ValueError("description lengths must be positive")
        if self.id not in _SOLVERS:
            raise ValueError(f"unknown solver {self.id!r}")

    def decide(self, f: CnfFormula) -> Optional[int]:
        return _SOLVERS[self.id](f, self.budget)


_SOLVERS = {
    "unit-propagation": lambda f, budget: unit_propagation_decide(f),
    "dpll": sat_decide_budgeted,
}


@dataclass(frozen=True)
class ProxyConfig:
    compressor: CompressorConfig = CompressorConfig()
    portfolio: tuple[PortfolioMember, ...] = (
        PortfolioMember("unit-propagation", 8, 1),
        PortfolioMember("dpll", 20, 10_000),
    )
    fac_qic_constant: int = 20     # declared, not measured

    def __post_init__(self):
        if not self.portfolio:
            raise ValueError("portfolio must be nonempty")


def validate_portfolio(cfg: ProxyConfig, validation: Sequence[CnfFormula],
                       language: LanguageOracle = SAT):
    for member in cfg.portfolio:
        for f in validation:
            ans = member.decide(f)
            if ans is not None and ans != language(f):
                raise ConfigurationError(f"{member.id} answers {ans} against chi={language(f)}")


def solver_ic_proxy(f: CnfFormula, cfg: ProxyConfig = ProxyConfig(),
                    validation: Sequence[CnfFormula] = ()) -> dict:
    """Shortest declared description among members deciding ``f``."""
    validate_portfolio(cfg, validation)
    for member in sorted(cfg.portfolio, key=lambda m: (m.description_length, m.id)):
        if member.decide(f) is not None:
            return {"value": member.description_length, "decider": member.id}
    return {"value": None, "decider": None}


def formula_bits(f: CnfFormula) -> str:
    """Bit serialization of the DIMACS text (8 bits per character)."""
    return "".join(format(b, "08b") for b in emit_dimacs(f).encode("ascii"))


# ------------------------------------------------------------ landscape

@dataclass(frozen=True)
class LandscapeConfig:
    mode: str = "exact"
    classical: SearchLimits = SearchLimits()
    quantum: QuantumLimits = QuantumLimits()
    proxy: ProxyConfig = ProxyConfig()
    margin: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "proxy"):
            raise ValueError("mode must be 'exact' or 'proxy'")

    def budgets(self) -> str:
        if self.mode == "exact":
            return (f"L={self.classical.max_program_len};t={self.classical.step_budget};"
                    f"L'={self.quantum.max_program_len};t'={self.quantum.step_budget};"
                    f"eps={self.quantum.epsilon}")
        return ";".join(f"{m.id}:{m.description_length}@{m.budget}" for m in self.proxy.portfolio)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)


Instance = Union[str, CnfFormula, FacInstance]


def _exact_record(x: str, language: LanguageOracle, cfg: LandscapeConfig) -> QueasinessRecord:
    lim = cfg.classical
    q = cfg.quantum
    return QueasinessRecord(
        instance_id=bits_to_hex(x), language=language.name, mode="exact", n=len(x),
        ic=ic_t(x, language, lim).value,
        qic=qic_t(x, language, q.epsilon, q.search(lim.universe)).value,
        cd=cd_t(x, lim).value, c=c_t(x, lim).value,
        seed=cfg.seed, budgets=cfg.budgets())


def _proxy_record(inst, index: int, cfg: LandscapeConfig) -> QueasinessRecord:
    qic = None
    if isinstance(inst, FacInstance):
        f = reduce_to_sat(inst).formula
        qic = cfg.proxy.fac_qic_constant
        ident = f"fac:{inst}"
    else:
        f = inst
        ident = f"cnf:{index}"
    ic = solver_ic_proxy(f, cfg.proxy)["value"]
    cd = compressor_cd_proxy(formula_bits(f), cfg.proxy.compressor)
    return QueasinessRecord(ident, SAT.name, "proxy", f.variable_count, ic, qic, cd, None,
                            seed=cfg.seed, budgets=cfg.budgets())


def landscape(instances: Sequence[Instance], language: LanguageOracle,
              cfg: LandscapeConfig) -> list[QueasinessRecord]:
    """One record per instance, in input order. Failures become censored rows."""
    rows = []
    for i, inst in enumerate(instances):
        try:
            if cfg.mode == "exact":
                rows.append(_exact_record(inst, language, cfg))
            else:
                rows.append(_proxy_record(inst, i, cfg))
        except Exception as exc:   # recorded, run continues
            ident = inst if isinstance(inst, str) else f"item:{i}"
            rows.append(QueasinessRecord(ident, language.name, cfg.mode, 0, None, None,
                                         seed=cfg.seed, budgets=cfg.budgets(),
                                         note=f"error:{type(exc).__name__}"))
    return rows


def landscape_csv(records: Sequence[QueasinessRecord], margin: int) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row(margin))
    return buf.getvalue()
