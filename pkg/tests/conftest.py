import math
import os

import hypothesis
import numpy as np
import pytest

from qdataload.circuit import KINDS, X, Circuit, Gate

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def random_gate(rng: np.random.Generator, n: int) -> Gate:
    kind = KINDS[rng.integers(len(KINDS))]
    qubits = rng.permutation(n)
    target = int(qubits[0])
    k = int(rng.integers(0, n))
    controls = tuple((int(q), bool(rng.integers(2))) for q in qubits[1 : 1 + k])
    angle = 0.0 if kind == X else float(rng.uniform(-2 * math.pi, 2 * math.pi))
    return Gate(kind, target, controls, angle)


def random_circuit(rng: np.random.Generator, n: int, size: int) -> Circuit:
    return Circuit(n, tuple(random_gate(rng, n) for _ in range(size)))


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
