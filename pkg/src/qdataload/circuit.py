"""Gate-level circuit IR, metrics, statevector simulation and text format.

Basis ordering is little-endian: qubit 0 is the least-significant bit of a
basis index. Multi-controlled gates are primitive; their two-qubit cost is
charged through :func:`control_cost` rather than decomposed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

X = "X"
RY = "RY"
RZ = "RZ"
PHASE = "PHASE"
KINDS = (X, RY, RZ, PHASE)

MAX_SIM_QUBITS = 20
NORM_TOL = 1e-10


@dataclass(frozen=True)
class Gate:
    """``kind`` on ``target``; fires where every ``(qubit, polarity)`` control holds.

    Polarity ``True`` means the control must be |1>, ``False`` means |0>.
    """

    kind: str
    target: int
    controls: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == X and self.angle != 0.0:
            raise ValueError("X takes no angle")
        if not math.isfinite(self.angle):
            raise ValueError(f"gate angle must be finite, got {self.angle!r}")
        if self.target < 0:
            raise ValueError(f"negative target {self.target}")
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated control qubit in {self.controls}")
        if self.target in qubits:
            raise ValueError(f"target {self.target} is also a control")
        if any(q < 0 for q in qubits):
            raise ValueError("negative control index")

    @property
    def support(self) -> frozenset:
        return frozenset([self.target, *(q for q, _ in self.controls)])


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple = field(default=())

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be positive, got {self.num_qubits}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.support) >= self.num_qubits:
                raise ValueError(
                    f"gate {g} references a qubit outside 0..{self.num_qubits - 1}"
                )

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.num_qubits, other.num_qubits), self.gates + other.gates)

    def __len__(self):
        return len(self.gates)


def cx(control: int, target: int) -> Gate:
    return Gate(X, target, ((control, True),))


# --- metrics -----------------------------------------------------------------


def circuit_depth(c: Circuit) -> int:
    """Greedy as-soon-as-possible layering in program order."""
    busy_until: dict = {}
    depth = 0
    for g in c.gates:
        layer = 1 + max((busy_until.get(q, 0) for q in g.support), default=0)
        for q in g.support:
            busy_until[q] = layer
        depth = max(depth, layer)
    return depth


def control_cost(kind: str, num_controls: int) -> int:
    """CX-equivalent cost of one gate with ``num_controls`` controls."""
    if num_controls == 0:
        return 0
    if num_controls == 1:
        return 1 if kind == X else 2
    # V-chain with num_controls - 2 ancillas; 2 controls is the 6-CX Toffoli.
    return 12 * num_controls - 18


def cx_equivalent_count(c: Circuit) -> int:
    return sum(control_cost(g.kind, len(g.controls)) for g in c.gates)


def ancilla_count(c: Circuit) -> int:
    """Ancillas implied by the V-chain costing of the widest gate."""
    widest = max((len(g.controls) for g in c.gates), default=0)
    return max(0, widest - 2)


def gate_counts(c: Circuit) -> dict:
    counts = {k: 0 for k in KINDS}
    counts["CX"] = 0
    for g in c.gates:
        if g.kind == X and len(g.controls) == 1 and g.controls[0][1]:
            counts["CX"] += 1
        else:
            counts[g.kind] += 1
    return counts


def metrics(c: Circuit) -> dict:
    return {
        "qubits": c.num_qubits,
        "gates": len(c.gates),
        "depth": circuit_depth(c),
        "cx_equivalent": cx_equivalent_count(c),
        "ancillas": ancilla_count(c),
    }


# --- simulation --------------------------------------------------------------


def zero_state(num_qubits: int) -> np.ndarray:
    psi = np.zeros(2**num_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def _matrix(g: Gate) -> np.ndarray:
    if g.kind == X:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if g.kind == RY:
        c, s = math.cos(g.angle / 2), math.sin(g.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if g.kind == RZ:
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    return np.diag([1.0, np.exp(1j * g.angle)])


def simulate(c: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Apply ``c`` to ``initial`` (default |0...0>) and return the new statevector."""
    n = c.num_qubits
    if n > MAX_SIM_QUBITS:
        raise ValueError(f"simulator is capped at {MAX_SIM_QUBITS} qubits, circuit has {n}")
    if initial is None:
        psi = zero_state(n)
    else:
        psi = np.array(initial, dtype=complex)
        if psi.shape != (2**n,):
            raise ValueError(f"initial state has shape {psi.shape}, expected ({2**n},)")

    index = np.arange(2**n)
    low_half = {}  # target -> indices with that bit clear
    for g in c.gates:
        t = g.target
        if t not in low_half:
            low_half[t] = index[(index >> t) & 1 == 0]
        i0 = low_half[t]
        if g.controls:
            mask = sum(1 << q for q, _ in g.controls)
            want = sum(1 << q for q, pol in g.controls if pol)
            i0 = i0[(i0 & mask) == want]
        i1 = i0 | (1 << t)
        a0, a1 = psi[i0], psi[i1]
        m = _matrix(g)
        psi[i0] = m[0, 0] * a0 + m[0, 1] * a1
        psi[i1] = m[1, 0] * a0 + m[1, 1] * a1
    return psi


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Global-phase-insensitive overlap ``|<a|b>|``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(min(1.0, abs(np.vdot(a, b))))


# --- text format -------------------------------------------------------------

_GATE_RE = re.compile(
    r"^(?P<kind>[A-Z]+)(?:\((?P<angle>[^()]*)\))?\s+t=(?P<target>\d+)"
    r"(?:\s+c=(?P<controls>\d+:[+-](?:,\d+:[+-])*))?$"
)


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _format_gate(g: Gate) -> str:
    head = g.kind if g.kind == X else f"{g.kind}({g.angle:.17g})"
    text = f"{head} t={g.target}"
    if g.controls:
        text += " c=" + ",".join(f"{q}:{'+' if pol else '-'}" for q, pol in g.controls)
    return text


def serialize_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    lines.extend(_format_gate(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    num_qubits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if num_qubits is None:
            m = re.fullmatch(r"qubits\s+(\d+)", line)
            if m is None:
                raise CircuitParseError("expected 'qubits <k>' header", lineno)
            num_qubits = int(m.group(1))
            if num_qubits < 1:
                raise CircuitParseError("qubit count must be positive", lineno)
            continue
        m = _GATE_RE.match(line)
        if m is None:
            raise CircuitParseError(f"malformed gate {line!r}", lineno)
        kind = m.group("kind")
        if kind not in KINDS:
            raise CircuitParseError(f"unknown gate kind {kind!r}", lineno)
        angle_text = m.group("angle")
        if (kind == X) != (angle_text is None):
            raise CircuitParseError(f"{kind} {'takes no' if kind == X else 'needs an'} angle", lineno)
        controls = ()
        if m.group("controls"):
            controls = tuple(
                (int(q), pol == "+")
                for q, pol in (item.split(":") for item in m.group("controls").split(","))
            )
        try:
            gate = Gate(kind, int(m.group("target")), controls,
                        0.0 if angle_text is None else float(angle_text))
        except ValueError as exc:
            raise CircuitParseError(str(exc), lineno) from exc
        if max(gate.support) >= num_qubits:
            raise CircuitParseError(
                f"qubit index {max(gate.support)} out of range for {num_qubits} qubits", lineno
            )
        gates.append(gate)
    if num_qubits is None:
        raise CircuitParseError("missing 'qubits <k>' header", 1)
    return Circuit(num_qubits, tuple(gates))
