import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import multinomial

import oracles
from queasylab.complexity import SearchLimits
from queasylab.problems import PARITY
from queasylab.quantum import (GATE_TAGS, GateCircuit, ResourceError, accept_probability, amplify,
                               circuit_of, confidence_readout, decode_circuit, emitter_program,
                               encode_circuit, format_circuit, gap_index, is_quantum_consistent,
                               parse_circuit, plan_amplification, qc_t, qcd_t, simulate,
                               statevector)

H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
T = np.diag([1, np.exp(1j * math.pi / 4)])
X = np.array([[0, 1], [1, 0]])
I2 = np.eye(2)


def _kron_state(c: GateCircuit, loaded: str = "") -> np.ndarray:
    """Reference simulator from full Kronecker-product operators (qubit q is
    bit q of the basis index, so qubit k-1 is the leftmost factor)."""
    k = c.qubit_count
    state = np.zeros(1 << k, dtype=complex)
    state[sum(1 << q for q, b in enumerate(loaded) if b == "1")] = 1
    for g in c.gates:
        if g[0] == "CNOT":
            u = np.zeros((1 << k, 1 << k))
            for i in range(1 << k):
                j = i ^ (1 << g[2]) if (i >> g[1]) & 1 else i
                u[j, i] = 1
        else:
            mats = [{"H": H, "T": T, "X": X}[g[0]] if q == g[1] else I2 for q in range(k)]
            u = reduce(np.kron, reversed(mats))
        state = u @ state
    return state


@st.composite
def circuits(draw, max_qubits=4, max_gates=8):
    k = draw(st.integers(1, max_qubits))
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        name = draw(st.sampled_from(sorted(GATE_TAGS)))
        if name == "CNOT":
            if k < 2:
                continue
            c, t = draw(st.lists(st.integers(0, k - 1), min_size=2, max_size=2, unique=True))
            gates.append(("CNOT", c, t))
        else:
            gates.append((name, draw(st.integers(0, k - 1))))
    measured = tuple(q for q in range(k) if draw(st.booleans()))
    return GateCircuit(k, tuple(gates), measured)


@settings(max_examples=150, deadline=None)
@given(circuits(), st.data())
def test_statevector_matches_kronecker_reference(c, data):
    y = data.draw(st.text(alphabet="01", max_size=c.qubit_count))
    np.testing.assert_allclose(statevector(c, y), _kron_state(c, y), atol=1e-12)


@given(circuits())
def test_codec_roundtrip(c):
    assert decode_circuit(encode_circuit(c)) == c


@given(circuits())
def test_text_format_roundtrip(c):
    assert parse_circuit(format_circuit(c)) == c


def test_codec_layout():
    c = parse_circuit("qubits 2\nmeasure 1\nH 0\nCNOT 0 1\n")
    assert encode_circuit(c) == "10" + "01" + "00" + "0" + "11" + "0" + "1"
    assert decode_circuit("10" + "01" + "00") is None           # partial gate
    assert decode_circuit("10" + "01" + "11" + "0" + "0") is None   # CNOT on one qubit
    assert decode_circuit("") is None


def test_resource_guard():
    with pytest.raises(ResourceError):
        encode_circuit(GateCircuit(13))


@settings(max_examples=100, deadline=None)
@given(circuits())
def test_simulated_distribution_is_normalized(c):
    dist = simulate(c)
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(len(k) == len(c.measured) for k in dist)


def test_single_h_distribution():
    dist = simulate(parse_circuit("qubits 1\nmeasure 0\nH 0"))
    assert dist == pytest.approx({"0": 0.5, "1": 0.5}, abs=1e-15)


def test_bell_pair_outcomes_are_lowest_qubit_first():
    dist = simulate(parse_circuit("qubits 2\nmeasure 0 1\nH 0\nCNOT 0 1\nX 0"))
    assert dist == pytest.approx({"10": 0.5, "01": 0.5})


# ------------------------------------------------------------ gap lemma

descending = st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=32).map(
    lambda v: sorted((x / max(1.0, sum(v)) for x in v), reverse=True))


@given(descending)
def test_gap_index_returns_first_qualifying_index(p):
    if p[0] == 0:
        return
    i, gap = gap_index(p)
    assert 1 <= i <= len(p)
    assert oracles.gap_holds(p, i)
    assert not any(oracles.gap_holds(p, j, tol=-1e-12) for j in range(1, i))


def test_gap_index_examples():
    assert gap_index([0.5, 0.5])[0] == 2
    assert gap_index([0.5, 0.3, 0.2])[0] == 1
    assert gap_index([1.0])[0] == 1


@pytest.mark.parametrize("bad", [[], [0.3, 0.5], [0.8, 0.4], [-0.1]])
def test_gap_index_validates(bad):
    with pytest.raises(ValueError):
        gap_index(bad)


# ------------------------------------------------------------ amplification

def test_plan_for_single_h():
    plan = plan_amplification({"0": 0.5, "1": 0.5}, "0", 10)
    assert (plan.j, plan.a, plan.top_list) == (2, 1, ("0", "1"))
    assert plan.two_delta == pytest.approx(0.25 / 2.5)
    assert plan.r == pytest.approx(math.exp(0.05 ** 2 / 3))
    assert plan.failure_bound() == pytest.approx(plan.r ** -10)


def test_plan_position_uses_lexicographic_order():
    plan = plan_amplification({"11": 0.4, "01": 0.35, "00": 0.25}, "11", 5)
    assert plan.top_list == tuple(sorted(plan.top_list))
    assert plan.top_list[plan.a - 1] == "11"


def _exact_failure(dist, target, n):
    """Enumerate every count vector of n samples; ties broken lexicographically."""
    plan = plan_amplification(dist, target, n)
    keys = sorted(dist)
    rv = multinomial(n, [dist[k] for k in keys])
    fail = 0.0
    for c0 in range(n + 1):
        for c1 in range(n + 1 - c0):
            counts = (c0, c1, n - c0 - c1)
            ranked = sorted(range(3), key=lambda i: (-counts[i], keys[i]))
            chosen = sorted(keys[i] for i in ranked[:plan.j])
            if chosen[plan.a - 1] != target:
                fail += rv.pmf(counts)
    return fail


@pytest.mark.parametrize("n", [4, 10, 25])
def test_monte_carlo_matches_exact_failure(n):
    dist = {"0": 0.5, "1": 0.3, "2": 0.2}
    exact = _exact_failure(dist, "0", n)
    res = amplify(dist, "0", n, seed=11, trials=4000)
    se = math.sqrt(max(exact * (1 - exact), 1e-4) / 4000)
    assert abs((1 - res["success_estimate"]) - exact) <= 4 * se


def test_amplify_is_seeded():
    dist = {"0": 0.5, "1": 0.3, "2": 0.2}
    assert amplify(dist, "0", 20, seed=5) == amplify(dist, "0", 20, seed=5)


# ------------------------------------------------------------ measures

LIM26 = SearchLimits(26, 256)


def test_qcd_values_and_witnesses():
    got = {x: qcd_t(x, 0.1, LIM26) for x in ("0", "1")}
    assert {x: v.value for x, v in got.items()} == {"0": 16, "1": 8}
    for x, v in got.items():
        c = circuit_of(v.witness, 256)
        assert accept_probability(c, x) > 0.6
        other = "1" if x == "0" else "0"
        assert accept_probability(c, other) < 0.4


def test_qc_values():
    v = qc_t("0", 0.5, LIM26)
    assert v.value == 8
    assert simulate(circuit_of(v.witness, 256)).get("0", 0) >= 0.5
    assert qc_t("1", 1.0, LIM26).value == 16


def test_emitter_program_prints_bits():
    c = parse_circuit("qubits 2\nmeasure 0 1\nX 1")
    p = emitter_program(encode_circuit(c))
    assert circuit_of(p, 64) == c


def test_confidence_circuit_is_consistent_for_parity():
    # confidence = NOT input bit 1, answer = input bit 0
    c = parse_circuit("qubits 2\nmeasure 0 1\nX 1")
    assert is_quantum_consistent(c, PARITY, ["00", "01", "10", "11"], 0.1)
    assert confidence_readout(c, "00", 0) == (1.0, 1.0)
    assert confidence_readout(c, "01", 1)[0] == 0.0
    bad = parse_circuit("qubits 2\nmeasure 0 1\nX 1\nX 0")
    assert not is_quantum_consistent(bad, PARITY, ["00", "01", "10", "11"], 0.1)


def test_measure_argument_validation():
    with pytest.raises(ValueError):
        qcd_t("0", 0.5, LIM26)
    with pytest.raises(ValueError):
        qc_t("0", 0.0, LIM26)
