"""Reference state-preparation circuits.

``load_dense`` is a uniformly-controlled-rotation amplitude encoder: one
RY multiplexor per qubit (qubit ``k`` controlled by qubits ``0..k-1``),
each decomposed into a Gray-code ladder of RY and CX gates, followed by an
RZ ladder of the same shape when the amplitudes carry phases.

``load_sparse`` writes one gate block per non-zero amplitude onto a data
register plus a flag qubit. The flag is |1> on the branch that still holds
unassigned amplitude; each block moves the data register to the next
pattern, splits off that pattern's share, and freezes it with flag |0>.
:class:`SparseBuilder` keeps those blocks so points can be added and
removed without re-synthesizing the whole circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .circuit import PHASE, RY, RZ, X, Circuit, Gate, cx

MAX_DENSE_QUBITS = 20
MAX_SPARSE_QUBITS = 19
NORM_TOL = 1e-8
ZERO_AMPLITUDE = 1e-12


class NormalizationError(ValueError):
    pass


# --- input types -------------------------------------------------------------


def _check_norm(norm_sq: float, normalize: bool) -> float:
    norm = math.sqrt(norm_sq)
    if norm == 0:
        raise NormalizationError("state has zero norm")
    if not normalize and abs(norm - 1) > NORM_TOL:
        raise NormalizationError(f"state is not normalized (norm = {norm!r})")
    return norm


class DenseState:
    """A full 2**n amplitude vector."""

    def __init__(self, amplitudes: Iterable[complex], normalize: bool = False):
        amps = np.asarray(list(amplitudes), dtype=complex)
        size = len(amps)
        if size < 2 or size & (size - 1):
            raise ValueError(f"dense state length must be a power of two >= 2, got {size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = _check_norm(float(np.vdot(amps, amps).real), normalize)
        if normalize:
            amps = amps / norm
        self.amplitudes = amps
        self.n = size.bit_length() - 1

    def __len__(self):
        return len(self.amplitudes)


@dataclass(frozen=True)
class SparsePoint:
    pattern: int
    amplitude: complex


class SparsePointSet:
    """Ordered non-zero amplitudes ``(pattern, amplitude)`` over ``n`` qubits.

    Patterns are basis indices; bit ``j`` of a pattern is qubit ``j``.
    """

    def __init__(self, n: int, points: Iterable[tuple], normalize: bool = False):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        pts = [SparsePoint(int(p), complex(a)) for p, a in points]
        if not pts:
            raise ValueError("sparse point set is empty")
        seen = set()
        for pt in pts:
            if not 0 <= pt.pattern < 2**n:
                raise ValueError(f"pattern {pt.pattern} does not fit in {n} bits")
            if pt.pattern in seen:
                raise ValueError(f"duplicate pattern {pt.pattern:0{n}b}")
            seen.add(pt.pattern)
            if not (math.isfinite(pt.amplitude.real) and math.isfinite(pt.amplitude.imag)):
                raise ValueError("amplitudes must be finite")
            if abs(pt.amplitude) < ZERO_AMPLITUDE:
                raise ValueError(f"amplitude of {pt.pattern:0{n}b} is zero")
        norm = _check_norm(math.fsum(abs(pt.amplitude) ** 2 for pt in pts), normalize)
        if normalize:
            pts = [SparsePoint(pt.pattern, pt.amplitude / norm) for pt in pts]
        self.n = n
        self.points = tuple(pts)

    def __len__(self):
        return len(self.points)

    @property
    def patterns(self) -> list[int]:
        return [pt.pattern for pt in self.points]

    def to_dense(self) -> np.ndarray:
        psi = np.zeros(2**self.n, dtype=complex)
        for pt in self.points:
            psi[pt.pattern] = pt.amplitude
        return psi


# --- dense loader ------------------------------------------------------------


def _block_norms(mags: np.ndarray, level: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Norms of the two halves split by qubit ``level``, per prefix of lower qubits.

    Returns arrays indexed by prefix ``c`` in ``0..2**level - 1``.
    """
    # Index bits: [higher qubits | qubit level | prefix]; reshape puts the
    # most significant bits first.
    sq = (mags**2).reshape(2 ** (n - level - 1), 2, 2**level)
    left = np.sqrt(sq[:, 0, :].sum(axis=0))
    right = np.sqrt(sq[:, 1, :].sum(axis=0))
    return left, right


def magnitude_angles(v: DenseState) -> list[np.ndarray]:
    """RY angle tree; level ``k`` holds ``2**k`` angles indexed by the value of qubits ``0..k-1``."""
    mags = np.abs(v.amplitudes)
    tree = []
    for level in range(v.n):
        left, right = _block_norms(mags, level, v.n)
        block = np.sqrt(left**2 + right**2)
        ratio = np.divide(left, block, out=np.ones_like(left), where=block > 0)
        angles = 2 * np.arccos(np.clip(ratio, 0.0, 1.0))
        angles[block == 0] = 0.0
        tree.append(angles)
    return tree


def phase_angles(v: DenseState) -> list[np.ndarray]:
    """RZ angle tree: mean phase of the |1> half minus mean phase of the |0> half."""
    amps = v.amplitudes
    phases = np.where(np.abs(amps) > 0, np.angle(amps), 0.0)
    tree = []
    n = v.n
    for level in range(n):
        split = phases.reshape(2 ** (n - level - 1), 2, 2**level)
        tree.append(split[:, 1, :].mean(axis=0) - split[:, 0, :].mean(axis=0))
    return tree


def _signed_leaf_angles(v: DenseState) -> np.ndarray:
    # Real inputs: fold signs into the last RY level instead of an RZ ladder.
    re = v.amplitudes.real.reshape(2, 2 ** (v.n - 1))
    # The last level splits on qubit n-1; each prefix holds a (left, right)
    # pair scaled by the positive norm of its ancestors.
    return 2 * np.arctan2(re[1], re[0])


def _walsh_hadamard(x: np.ndarray) -> np.ndarray:
    """``H @ x`` with ``H[i, c] = (-1)**popcount(i & c)``."""
    x = np.array(x, dtype=float)
    size = len(x)
    h = 1
    while h < size:
        blocks = x.reshape(-1, 2, h)
        x = np.stack([blocks[:, 0] + blocks[:, 1], blocks[:, 0] - blocks[:, 1]], axis=1).reshape(-1)
        h *= 2
    return x


def _multiplexor_coefficients(angles: np.ndarray) -> np.ndarray:
    """Solve for the rotation angles of a Gray-code multiplexor ladder.

    Rotation ``i`` of the ladder is seen with sign ``(-1)**popcount(c & g_i)``
    by control value ``c``, where ``g_i = i ^ (i >> 1)``.
    """
    size = len(angles)
    gray = np.arange(size) ^ (np.arange(size) >> 1)
    return _walsh_hadamard(angles)[gray] / size


def uniformly_controlled(kind: str, target: int, angles: np.ndarray) -> list[Gate]:
    """Rotation on ``target`` whose angle is ``angles[c]`` when qubits ``0..k-1`` read ``c``."""
    k = int(len(angles)).bit_length() - 1
    if k == 0:
        return [Gate(kind, target, (), float(angles[0]))]
    coeffs = _multiplexor_coefficients(np.asarray(angles, dtype=float))
    size = len(angles)
    gates = []
    for i in range(size):
        g_here = i ^ (i >> 1)
        nxt = (i + 1) % size
        g_next = nxt ^ (nxt >> 1)
        control = (g_here ^ g_next).bit_length() - 1
        gates.append(Gate(kind, target, (), float(coeffs[i])))
        gates.append(cx(control, target))
    return gates


def load_dense(v: DenseState) -> Circuit:
    if v.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense loader is capped at {MAX_DENSE_QUBITS} qubits")
    tree = magnitude_angles(v)
    amps = v.amplitudes
    is_real = bool(np.all(amps.imag == 0))
    if is_real:
        tree[-1] = _signed_leaf_angles(v)
        needs_phase = False
    else:
        needs_phase = True

    gates: list[Gate] = []
    for level, angles in enumerate(tree):
        gates.extend(uniformly_controlled(RY, level, angles))
    if needs_phase:
        for level, angles in enumerate(phase_angles(v)):
            gates.extend(uniformly_controlled(RZ, level, angles))
    return Circuit(v.n, tuple(gates))


# --- sparse loader -----------------------------------------------------------


def _pattern_controls(pattern: int, n: int) -> tuple:
    return tuple((q, bool((pattern >> q) & 1)) for q in range(n))


def residual_norms(amplitudes: Sequence[complex]) -> list[float]:
    """``s_k``: remaining norm before point ``k``; length ``r + 1`` ending at 0."""
    sq = [abs(a) ** 2 for a in amplitudes]
    out = [0.0] * (len(sq) + 1)
    # Suffix sums avoid cancellation in 1 - sum(prefix).
    acc = 0.0
    for k in range(len(sq) - 1, -1, -1):
        acc += sq[k]
        out[k] = math.sqrt(acc)
    return out


def split_angles(amplitudes: Sequence[complex]) -> list[float]:
    """``theta_k`` with ``sin(theta_k / 2) = |a_k| / s_k``."""
    s = residual_norms(amplitudes)
    return [2 * math.asin(min(1.0, abs(a) / s[k])) for k, a in enumerate(amplitudes)]


@dataclass(frozen=True)
class BlockShape:
    """What determines a block's gates apart from its rotation angle."""

    previous: int
    pattern: int
    last: bool
    phase: bool


def _block_gates(shape: BlockShape, n: int, theta: float, phase: float) -> list[Gate]:
    flag = n
    data_ctrl = _pattern_controls(shape.pattern, n)
    gates = []
    diff = shape.previous ^ shape.pattern
    for q in range(n):
        if (diff >> q) & 1:
            gates.append(cx(flag, q))
    zero_pattern = shape.pattern == 0
    if shape.phase and zero_pattern:
        # No data qubit reads |1>; mark the live branch, then undo on the remainder.
        gates.append(Gate(PHASE, flag, data_ctrl, phase))
    if shape.last:
        gates.append(Gate(X, flag, data_ctrl))
    else:
        gates.append(Gate(RY, flag, data_ctrl, -theta))
    if shape.phase:
        if zero_pattern:
            if not shape.last:
                gates.append(Gate(PHASE, flag, data_ctrl, -phase))
        else:
            target = (shape.pattern & -shape.pattern).bit_length() - 1
            ctrl = tuple(c for c in data_ctrl if c[0] != target) + ((flag, False),)
            gates.append(Gate(PHASE, target, ctrl, phase))
    return gates


def _shapes(patterns: Sequence[int], phases: Sequence[bool]) -> list[BlockShape]:
    shapes = []
    prev = 0
    for k, (p, ph) in enumerate(zip(patterns, phases)):
        shapes.append(BlockShape(prev, p, k == len(patterns) - 1, ph))
        prev = p
    return shapes


def _has_phase(a: complex) -> bool:
    return math.atan2(a.imag, a.real) != 0.0


def _emit(n: int, shapes: Sequence[BlockShape], amplitudes: Sequence[complex]) -> Circuit:
    thetas = split_angles(amplitudes)
    gates = [Gate(X, n)]
    for shape, theta, a in zip(shapes, thetas, amplitudes):
        gates.extend(_block_gates(shape, n, theta, math.atan2(a.imag, a.real)))
    return Circuit(n + 1, tuple(gates))


def load_sparse(s: SparsePointSet) -> Circuit:
    if s.n > MAX_SPARSE_QUBITS:
        raise ValueError(f"sparse loader is capped at {MAX_SPARSE_QUBITS} data qubits")
    amps = [pt.amplitude for pt in s.points]
    return _emit(s.n, _shapes(s.patterns, [_has_phase(a) for a in amps]), amps)


def embed_sparse_target(s: SparsePointSet) -> np.ndarray:
    """Target statevector of :func:`load_sparse`: data amplitudes with the flag at |0>."""
    psi = np.zeros(2 ** (s.n + 1), dtype=complex)
    for pt in s.points:
        psi[pt.pattern] = pt.amplitude
    return psi


class SparseBuilder:
    """Incrementally maintained sparse loader.

    Each point owns a block of gates whose shape depends only on its own
    pattern, its predecessor's pattern, whether it is last, and whether its
    amplitude has a phase. Edits re-derive the shapes of at most the edited
    block and one neighbour; the remaining shapes are reused. Rotation
    angles depend on all residual norms and are refreshed on every emit.
    """

    def __init__(self, points: SparsePointSet):
        self.n = points.n
        self._patterns = list(points.patterns)
        self._amps = [pt.amplitude for pt in points.points]
        self._shapes = _shapes(self._patterns, [_has_phase(a) for a in self._amps])
        self.resynthesized = len(self._shapes)

    @property
    def points(self) -> SparsePointSet:
        return SparsePointSet(self.n, zip(self._patterns, self._amps))

    def __len__(self):
        return len(self._patterns)

    def _shape_at(self, k: int) -> BlockShape:
        prev = self._patterns[k - 1] if k > 0 else 0
        return BlockShape(prev, self._patterns[k], k == len(self._patterns) - 1,
                          _has_phase(self._amps[k]))

    def _apply_amplitudes(self, amplitudes: Optional[dict], renormalize: bool) -> set:
        """Update existing amplitudes; returns positions whose phase flag changed."""
        changed = set()
        if amplitudes:
            index = {p: k for k, p in enumerate(self._patterns)}
            for pattern, a in amplitudes.items():
                if pattern not in index:
                    raise KeyError(f"pattern {pattern:0{self.n}b} is not loaded")
                a = complex(a)
                if abs(a) < ZERO_AMPLITUDE:
                    raise ValueError("use remove_point to drop a pattern")
                k = index[pattern]
                if _has_phase(a) != _has_phase(self._amps[k]):
                    changed.add(k)
                self._amps[k] = a
        norm = _check_norm(math.fsum(abs(a) ** 2 for a in self._amps), renormalize)
        if renormalize and norm != 1.0:
            self._amps = [a / norm for a in self._amps]
        return changed

    def _refresh(self, positions: Iterable[int]):
        count = 0
        for k in sorted(set(positions)):
            if 0 <= k < len(self._shapes):
                shape = self._shape_at(k)
                if shape != self._shapes[k]:
                    self._shapes[k] = shape
                    count += 1
        self.resynthesized = count

    def add_point(self, pattern: int, amplitude: complex, amplitudes: Optional[dict] = None,
                  renormalize: bool = False) -> "SparseBuilder":
        """Append ``pattern``.

        ``amplitudes`` optionally rescales existing points; with
        ``renormalize`` the whole set is scaled to unit norm instead.
        """
        if not 0 <= pattern < 2**self.n:
            raise ValueError(f"pattern {pattern} does not fit in {self.n} bits")
        if pattern in self._patterns:
            raise ValueError(f"pattern {pattern:0{self.n}b} is already loaded")
        amplitude = complex(amplitude)
        if abs(amplitude) < ZERO_AMPLITUDE:
            raise ValueError("amplitude is zero")
        old_patterns, old_amps = list(self._patterns), list(self._amps)
        self._patterns.append(pattern)
        self._amps.append(amplitude)
        # Placeholder; the new block is always synthesized below.
        self._shapes.append(None)
        try:
            changed = self._apply_amplitudes(amplitudes, renormalize)
        except Exception:
            self._patterns, self._amps = old_patterns, old_amps
            self._shapes.pop()
            raise
        k = len(self._patterns) - 1
        self._refresh({k - 1, k} | changed)
        return self

    def remove_point(self, pattern: int, amplitudes: Optional[dict] = None,
                     renormalize: bool = False) -> "SparseBuilder":
        if pattern not in self._patterns:
            raise KeyError(f"pattern {pattern:0{self.n}b} is not loaded")
        if len(self._patterns) == 1:
            raise ValueError("cannot remove the only point")
        k = self._patterns.index(pattern)
        old = (list(self._patterns), list(self._amps), list(self._shapes))
        del self._patterns[k], self._amps[k], self._shapes[k]
        try:
            changed = self._apply_amplitudes(amplitudes, renormalize)
        except Exception:
            self._patterns, self._amps, self._shapes = old
            raise
        # The successor now follows a different pattern; if the last point
        # went away, the predecessor becomes last.
        self._refresh({k - 1, k} | changed)
        return self

    def emit(self) -> Circuit:
        return _emit(self.n, self._shapes, self._amps)


# --- file formats ------------------------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _complex(fields: list[str], lineno: int) -> complex:
    if len(fields) not in (1, 2):
        raise ValueError(f"line {lineno}: expected 're [im]', got {' '.join(fields)!r}")
    try:
        value = complex(float(fields[0]), float(fields[1]) if len(fields) == 2 else 0.0)
    except ValueError:
        raise ValueError(f"line {lineno}: bad number in {' '.join(fields)!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"line {lineno}: amplitude must be finite")
    return value


def parse_dsv(text: str) -> list[complex]:
    """Dense amplitudes: one ``re [im]`` per line."""
    amps = [_complex(fields, lineno) for lineno, fields in _data_lines(text)]
    if not amps:
        raise ValueError("no amplitudes found")
    return amps


def parse_ssv(text: str) -> tuple[int, list[tuple[int, complex]]]:
    """Sparse points: ``<bitstring> re [im]`` per line; returns ``(n, points)``.

    The bitstring is written most-significant qubit first, so its integer
    value is the basis index.
    """
    n = None
    points = []
    for lineno, fields in _data_lines(text):
        bits = fields[0]
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"line {lineno}: {bits!r} is not a bitstring")
        if n is None:
            n = len(bits)
        elif len(bits) != n:
            raise ValueError(f"line {lineno}: bitstring length {len(bits)} != {n}")
        points.append((int(bits, 2), _complex(fields[1:], lineno)))
    if n is None:
        raise ValueError("no points found")
    return n, points


def format_dsv(amplitudes: Iterable[complex]) -> str:
    return "".join(f"{a.real!r} {a.imag!r}\n" for a in map(complex, amplitudes))


def format_ssv(s: SparsePointSet) -> str:
    return "".join(
        f"{pt.pattern:0{s.n}b} {pt.amplitude.real!r} {pt.amplitude.imag!r}\n" for pt in s.points
    )
