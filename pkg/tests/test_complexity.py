import json
import random

import pytest

import oracles
from queasylab.complexity import (ABOVE_LIMIT, ComplexityValue, IndeterminateError,
                                  InconsistentProgramError, SearchLimits, UniverseSpec,
                                  c_t, cd_t, check_cd_witness, check_generator_witness,
                                  check_ic_witness, classify_values, ic_t, is_consistent,
                                  report, utility_set)
from queasylab.machine import assemble, enumerate_programs, run_acceptor, run_generator
from queasylab.problems import PARITY, LanguageOracle

PARITY_SRC = """
even: READ r0
      JEOF rej
      JZ r0 even
odd:  READ r0
      JEOF acc
      JZ r0 odd
      JMP even
rej:  REJECT
acc:  ACCEPT
"""

LIM14 = SearchLimits(14, 256)
LIM22 = SearchLimits(22, 256)


def test_c_values_match_generator_oracle():
    ref = oracles.brute_generator_table(14, 256)
    for x in ("0", "1", "00", "01", "10", "11", "000", "101"):
        got = c_t(x, LIM14)
        assert got.value == (len(ref[x]) if x in ref else None)
    assert c_t("0", LIM14).value == 4                   # EMIT0, then fall off the end


def test_c_bounded_by_literal_print():
    for x in ("0", "1", "01", "110"):
        literal = assemble("\n".join("EMIT1" if b == "1" else "EMIT0" for b in x) + "\nHALT")
        assert c_t(x, LIM14).value <= literal.length


def test_c_witness_prints_x():
    v = c_t("01", LIM14)
    assert check_generator_witness(v.witness, "01", 256)
    assert v.witness.length == v.value


def test_ic_value_and_witness_at_22():
    v = ic_t("1", PARITY, LIM22)
    assert v.value == 22
    assert check_ic_witness(v.witness, "1", PARITY, ["0", "1"], 256)


def test_measures_censored_below_acceptor_sizes():
    # full minimality scan: nothing up to 16 bits separates or decides these
    for x in ("0", "1"):
        assert cd_t(x, SearchLimits(16, 256)).censored
        assert ic_t(x, PARITY, SearchLimits(16, 256)).censored
    members = ["0", "1"]
    for p in enumerate_programs(16):
        assert not check_cd_witness(p, "0", members, 256)


def test_minimality_spot_check():
    v = ic_t("1", PARITY, LIM22)
    rng = random.Random(3)
    for _ in range(100):
        k = rng.randrange(1, v.value)
        p = format(rng.getrandbits(k), f"0{k}b")
        assert not check_ic_witness(p, "1", PARITY, ["0", "1"], 256)


def test_singleton_universe_cd_is_shortest_acceptor():
    lim = SearchLimits(14, 64, UniverseSpec.same_length(0))
    assert cd_t("", lim).value == len(assemble("ACCEPT").bits)


@pytest.mark.parametrize("budget", [0, 1, 2, 4, 16])
def test_budget_monotonicity(budget):
    for x in ("0", "01", "111"):
        lo, hi = c_t(x, SearchLimits(14, budget)), c_t(x, SearchLimits(14, budget + 8))
        if not lo.censored:
            assert not hi.censored and hi.value <= lo.value


def test_always_unknown_is_consistent_but_never_a_witness():
    p = assemble("UNKNOWN")
    assert is_consistent(p, PARITY, ["0", "1"], 10)
    assert not check_ic_witness(p, "1", PARITY, ["0", "1"], 10)


def test_argument_validation():
    with pytest.raises(ValueError):
        c_t("", LIM14)
    with pytest.raises(ValueError):
        cd_t("01", SearchLimits(14, 256, UniverseSpec.same_length(1)))
    with pytest.raises(ValueError):
        SearchLimits(31)
    with pytest.raises(ValueError):
        UniverseSpec("other", 1)


# ------------------------------------------------------------ classify

def test_classify_values():
    assert classify_values(ComplexityValue(20), ComplexityValue(20), 0) == "hard"
    assert classify_values(ComplexityValue(20), ComplexityValue(4), 8) == "easy"
    with pytest.raises(IndeterminateError):
        classify_values(ABOVE_LIMIT, ComplexityValue(4), 8)
    with pytest.raises(IndeterminateError):
        int(ABOVE_LIMIT)


# ------------------------------------------------------------ utility set

def test_parity_program_decides_length_8():
    p = assemble(PARITY_SRC)
    lim = SearchLimits(26, 256, UniverseSpec.same_length(8))
    u = utility_set(p, PARITY, lim)
    assert u["count"] == 256


def test_utility_set_edge_cases():
    lim = SearchLimits(14, 64, UniverseSpec.up_to_length(3))
    assert utility_set(assemble("UNKNOWN"), PARITY, lim)["count"] == 0
    single = assemble("""
        READ r0
        JZ r0 no
        JEOF no
        READ r0
        JEOF yes
    no: UNKNOWN
    yes: ACCEPT
    """)
    assert utility_set(single, PARITY, lim) == {"count": 1, "members": ["1"]}
    with pytest.raises(InconsistentProgramError):
        utility_set(assemble("ACCEPT"), PARITY, lim)
    with pytest.raises(ValueError):
        utility_set(assemble("UNKNOWN"), PARITY, LIM14)


def test_witnesses_rerun_under_interpreter():
    v = ic_t("1", PARITY, LIM22)
    assert run_acceptor(v.witness, "1", 256).answer == 1
    assert run_generator(c_t("10", LIM14).witness, 256).output == "10"


# ------------------------------------------------------------ reports

def test_report_json_fields():
    r = json.loads(report("1", PARITY, LIM22).to_json())
    assert set(r) >= {"instance_hex", "language", "universe", "budgets", "c", "cd", "ic",
                      "witnesses", "censored"}
    assert (r["c"], r["cd"], r["ic"]) == (4, None, 22)
    assert r["censored"] == {"c": False, "cd": True, "ic": False}
    assert r["universe"] == "same_length(1)"
    assert r["witnesses"]["cd"] is None


def test_zero_language_ic_is_reject_program():
    zero = LanguageOracle("zero", lambda y: 0)
    assert ic_t("0", zero, LIM14).value == len(assemble("REJECT").bits)
