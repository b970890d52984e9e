import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_circuit, random_state
from qdataload.circuit import (
    PHASE,
    RY,
    RZ,
    X,
    Circuit,
    CircuitParseError,
    Gate,
    ancilla_count,
    circuit_depth,
    cx,
    cx_equivalent_count,
    fidelity,
    parse_circuit,
    serialize_circuit,
    simulate,
    zero_state,
)

S = 1 / math.sqrt(2)

BELL_MOTTONEN = Circuit(
    2,
    (
        Gate(RY, 0, (), math.pi / 2),
        Gate(RY, 1, (), math.pi / 2),
        cx(0, 1),
        Gate(RY, 1, (), -math.pi / 2),
        cx(0, 1),
    ),
)


# Oracle: full unitary from projectors and Kronecker products, little-endian.
def _op(n, factors):
    out = np.array([[1.0 + 0j]])
    for q in reversed(range(n)):
        out = np.kron(out, factors.get(q, np.eye(2)))
    return out


def _single(g):
    if g.kind == X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if g.kind == RY:
        c, s = math.cos(g.angle / 2), math.sin(g.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if g.kind == RZ:
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    return np.diag([1, np.exp(1j * g.angle)])


def gate_unitary(g, n):
    proj = {True: np.diag([0, 1]).astype(complex), False: np.diag([1, 0]).astype(complex)}
    ctrl = {q: proj[pol] for q, pol in g.controls}
    fire = _op(n, ctrl)
    return fire @ _op(n, {g.target: _single(g)}) + (np.eye(2**n) - fire)


def circuit_unitary(c):
    u = np.eye(2**c.num_qubits, dtype=complex)
    for g in c.gates:
        u = gate_unitary(g, c.num_qubits) @ u
    return u


def test_x_on_zero():
    assert np.allclose(simulate(Circuit(1, (Gate(X, 0),))), [0, 1])


def test_ry_half_pi():
    assert np.allclose(simulate(Circuit(1, (Gate(RY, 0, (), math.pi / 2),))), [S, S])


def test_bell():
    c = Circuit(2, (Gate(RY, 0, (), math.pi / 2), cx(0, 1)))
    assert np.allclose(simulate(c), [S, 0, 0, S])


def test_gate_matrices():
    psi = np.array([0.6, 0.8j])
    out = simulate(Circuit(1, (Gate(RZ, 0, (), 0.3),)), psi)
    assert np.allclose(out, [0.6 * np.exp(-0.15j), 0.8j * np.exp(0.15j)])
    out = simulate(Circuit(1, (Gate(PHASE, 0, (), 0.3),)), psi)
    assert np.allclose(out, [0.6, 0.8j * np.exp(0.3j)])


@pytest.mark.parametrize("seed", range(20))
def test_simulate_matches_unitary_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    c = random_circuit(rng, n, 15)
    psi = random_state(rng, n)
    assert np.allclose(simulate(c, psi), circuit_unitary(c) @ psi, atol=1e-12)


def test_negative_control_polarity():
    c = Circuit(2, (Gate(X, 1, ((0, False),)),))
    for basis in range(4):
        psi = np.zeros(4, dtype=complex)
        psi[basis] = 1
        out = simulate(c, psi)
        fires = (basis & 1) == 0
        expected = basis ^ 2 if fires else basis
        assert out[expected] == 1


def test_norm_preserved_random(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        c = random_circuit(rng, n, int(rng.integers(0, 201)))
        out = simulate(c, random_state(rng, n))
        assert abs(np.linalg.norm(out) - 1) <= 1e-12


def test_inverse_rotation_restores(rng):
    psi = random_state(rng, 3)
    for theta in rng.uniform(-7, 7, size=10):
        c = Circuit(3, (Gate(RY, 1, ((0, True),), theta), Gate(RY, 1, ((0, True),), -theta)))
        assert np.max(np.abs(simulate(c, psi) - psi)) <= 1e-12


def test_simulate_errors():
    with pytest.raises(ValueError):
        simulate(Circuit(21))
    with pytest.raises(ValueError):
        simulate(Circuit(2), np.ones(8))


def test_fidelity():
    psi = random_state(np.random.default_rng(3), 3)
    assert fidelity(psi, psi) == pytest.approx(1)
    assert fidelity(zero_state(1), np.array([0, 1])) == 0
    assert fidelity(psi, np.exp(0.7j) * psi) == pytest.approx(1)
    with pytest.raises(ValueError):
        fidelity(psi, psi[:4])


def test_depth_examples():
    assert circuit_depth(Circuit(2)) == 0
    assert circuit_depth(Circuit(2, (Gate(X, 0), Gate(X, 1)))) == 1
    assert circuit_depth(BELL_MOTTONEN) == 4


def test_cx_cost_table():
    assert cx_equivalent_count(Circuit(2, (cx(0, 1),))) == 1
    assert cx_equivalent_count(Circuit(3, (Gate(X, 2, ((0, True), (1, True))),))) == 6
    mcry = Gate(RY, 3, ((0, True), (1, False), (2, True)), 0.1)
    assert cx_equivalent_count(Circuit(4, (mcry,))) == 18
    assert cx_equivalent_count(Circuit(2, (Gate(RY, 1, ((0, True),), 0.2),))) == 2
    assert cx_equivalent_count(Circuit(1, (Gate(RZ, 0, (), 0.2),))) == 0
    assert ancilla_count(Circuit(4, (mcry,))) == 1
    assert ancilla_count(BELL_MOTTONEN) == 0


def test_gate_invariants():
    with pytest.raises(ValueError):
        Gate(X, 0, ((0, True),))
    with pytest.raises(ValueError):
        Gate(X, 0, ((1, True), (1, False)))
    with pytest.raises(ValueError):
        Gate(RY, 0, (), math.inf)
    with pytest.raises(ValueError):
        Circuit(2, (Gate(X, 2),))


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_depth_subadditive_and_cost_additive(s1, s2):
    c1 = random_circuit(np.random.default_rng(s1), 4, s1 % 30)
    c2 = random_circuit(np.random.default_rng(s2), 4, s2 % 30)
    both = c1 + c2
    assert circuit_depth(both) <= circuit_depth(c1) + circuit_depth(c2)
    assert cx_equivalent_count(both) == cx_equivalent_count(c1) + cx_equivalent_count(c2)


def test_serialize_examples():
    assert serialize_circuit(Circuit(1, (Gate(X, 0),))) == "qubits 1\nX t=0\n"
    g = Gate(RY, 1, ((0, True), (2, False)), math.pi / 2)
    assert serialize_circuit(Circuit(3, (g,))) == "qubits 3\nRY(1.5707963267948966) t=1 c=0:+,2:-\n"
    assert parse_circuit(serialize_circuit(BELL_MOTTONEN)) == BELL_MOTTONEN


def test_parse_comments_and_blank_lines():
    text = "# header\nqubits 2\n\nX t=1 c=0:+  # cx\n"
    assert parse_circuit(text) == Circuit(2, (cx(0, 1),))


@pytest.mark.parametrize(
    "text, line",
    [
        ("qubits 2\nX t=5\n", 2),
        ("qubits 2\nRY t=0\n", 2),
        ("qubits 2\nX(1.0) t=0\n", 2),
        ("qubits 2\nFOO(1) t=0\n", 2),
        ("qubits 2\nX t=0\nX t=1 c=1:+\n", 3),
        ("X t=0\n", 1),
        ("", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(CircuitParseError) as info:
        parse_circuit(text)
    assert info.value.line == line


def test_round_trip_random(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        c = random_circuit(rng, n, int(rng.integers(0, 60)))
        text = serialize_circuit(c)
        assert parse_circuit(text) == c
        assert serialize_circuit(parse_circuit(text)) == text
