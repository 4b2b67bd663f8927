import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

import oracles
from queasylab.problems import CnfFormula, FacInstance, emit_dimacs, encode_pair, parse_dimacs
from queasylab.reduction import (NotInImage, clause_growth, decode_model, factor_prefix,
                                 invert_reduction, reduce_to_sat, solve, tag_bits,
                                 verify_reduction)

prefixes = [""] + ["".join(t) for k in (1, 2, 3) for t in itertools.product("01", repeat=k)]


def _residual_sat(f: CnfFormula) -> int:
    """Fix unit clauses, then list every assignment of what remains."""
    fixed = {abs(c[0]): c[0] > 0 for c in f.clauses if len(c) == 1}
    rest = []
    for c in f.clauses:
        if any(abs(l) in fixed and fixed[abs(l)] == (l > 0) for l in c):
            continue
        c = [l for l in c if abs(l) not in fixed]
        if not c:
            return 0
        rest.append(c)
    free = sorted({abs(l) for c in rest for l in c})
    index = {v: i + 1 for i, v in enumerate(free)}
    return oracles.satisfiable(len(free), [[index[abs(l)] * (1 if l > 0 else -1) for l in c]
                                           for c in rest])


@pytest.mark.parametrize("z,expected", [("15:10", 1), ("9:10", 0), ("15:11", 1)])
def test_examples(z, expected):
    z = FacInstance.parse(z)
    assert solve(reduce_to_sat(z).formula)[0] == expected == oracles.factor_prefix(z.x, z.a)


@pytest.mark.parametrize("x", [4, 5, 6, 7])
def test_small_formulas_against_assignment_listing(x):
    for a in prefixes:
        if a.startswith("0"):
            continue
        f = reduce_to_sat(FacInstance(x, a)).formula
        assert _residual_sat(f) == oracles.factor_prefix(x, a), (x, a)


def test_oracle_match_and_roundtrip_on_sample():
    for x in range(4, 128):
        for a in prefixes:
            r = verify_reduction(FacInstance(x, a))
            assert r["match"] and r["roundtrip"], r
            assert r["expected"] == oracles.factor_prefix(x, a)
            if r["sat"]:
                assert r["witness"]["valid"]


def test_constructed_positives():
    primes = list(primerange(2, 32))
    for p in primes:
        for q in primes:
            big = format(max(p, q), "b")
            for k in range(len(big) + 1):
                assert solve(reduce_to_sat(FacInstance(p * q, big[:k])).formula)[0] == 1


def test_model_decodes_to_factorization():
    art = reduce_to_sat(FacInstance(221, "1101"))
    sat, model = solve(art.formula)
    assert sat
    p, q = decode_model(art, model)
    assert p * q == 221 and format(p, "b").startswith("1101")


def test_injective_and_invertible_below_256():
    seen = {}
    for x in range(4, 256):
        for a in prefixes:
            z = FacInstance(x, a)
            f = reduce_to_sat(z).formula
            assert invert_reduction(f) == z
            key = emit_dimacs(f)
            assert key not in seen, (z, seen.get(key))
            seen[key] = z


def test_tag_block_spells_pair_encoding():
    f = reduce_to_sat(FacInstance(15, "10")).formula
    assert tag_bits(f) == encode_pair(15, "10")
    semantic = {abs(l) for c in f.clauses[len(f.tag_vars):] for l in c}
    assert semantic.isdisjoint(f.tag_vars)


def test_golden_fixture(fixtures):
    text = (fixtures / "fac_15_10.cnf").read_text()
    assert emit_dimacs(reduce_to_sat(FacInstance(15, "10")).formula) == text
    assert invert_reduction(parse_dimacs(text)) == FacInstance(15, "10")


def test_not_in_image():
    with pytest.raises(NotInImage):
        invert_reduction(CnfFormula(2, ((1, 2), (-1,))))
    with pytest.raises(NotInImage):
        invert_reduction(CnfFormula(3, ((1,), (2,), (3,))))      # "111" is not a pair


def test_small_x_refused():
    for x in (2, 3):
        with pytest.raises(ValueError):
            reduce_to_sat(FacInstance(x, ""))


def test_clause_growth_is_quadratic_in_width():
    g = clause_growth(range(8, 21))
    assert 1.8 <= g["exponent"] <= 2.2
    assert g["clauses"] == sorted(g["clauses"])


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 1 << 20), st.text(alphabet="01", max_size=4))
def test_brute_force_prefix_oracle_agrees_with_sympy(x, a):
    if x < 4096:
        assert factor_prefix(FacInstance(x, a)) == oracles.factor_prefix(x, a)
    assert invert_reduction(reduce_to_sat(FacInstance(x, a)).formula) == FacInstance(x, a)
