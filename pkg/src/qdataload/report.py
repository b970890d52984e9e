"""Comparison reports, SVG scatter plots and loader scaling studies."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circuit import MAX_SIM_QUBITS, circuit_depth, cx_equivalent_count, fidelity, simulate
from .complexity import Bindings
from .loaders import (
    DenseState,
    SparsePointSet,
    embed_sparse_target,
    load_dense,
    load_sparse,
)
from .pareto import (
    ConstraintSet,
    WeightVector,
    filter_constraints,
    pareto_set,
    rank_weighted,
    weighted_score,
)
from .registry import AlgorithmRecord, ObjectivePoint, evaluate_record

CSV_COLUMNS = (
    "algorithm",
    "group",
    "representation",
    "n",
    "r",
    "depth",
    "runtime",
    "qubits",
    "pareto",
    "passed_constraints",
    "rank",
    "score",
)


@dataclass(frozen=True)
class ReportRow:
    point: ObjectivePoint
    in_pareto: bool
    passed_constraints: bool
    rank: Optional[int]
    score: float


@dataclass(frozen=True)
class ComparisonReport:
    representation: str
    bindings: Bindings
    rows: tuple
    weights: WeightVector = field(default_factory=WeightVector)
    constraints: ConstraintSet = field(default_factory=ConstraintSet)

    @property
    def pareto_names(self) -> list[str]:
        return [row.point.algorithm for row in self.rows if row.in_pareto]

    @property
    def survivors(self) -> list[str]:
        return [row.point.algorithm for row in self.rows if row.passed_constraints]


def compare(
    records: Sequence[AlgorithmRecord],
    representation: str,
    bindings: Bindings,
    constraints: ConstraintSet = ConstraintSet(),
    weights: WeightVector = WeightVector(),
) -> ComparisonReport:
    """Evaluate every record of ``representation`` and mark Pareto membership.

    Pareto membership and ranks are computed among the points that pass the
    constraints; rejected points are never Pareto members and carry no rank.
    """
    points = [evaluate_record(rec, bindings) for rec in records if rec.representation == representation]
    if not points:
        raise ValueError(f"registry has no {representation} records")
    passed = filter_constraints(points, constraints)
    front = {id(p) for p in pareto_set(passed)} if passed else set()
    ranks = {id(rp.point): rp for rp in rank_weighted(passed, weights)}
    rows = []
    for p in points:
        ranked = ranks.get(id(p))
        rows.append(
            ReportRow(
                point=p,
                in_pareto=id(p) in front,
                passed_constraints=ranked is not None,
                rank=ranked.rank if ranked else None,
                score=ranked.score if ranked else weighted_score(p, weights),
            )
        )
    return ComparisonReport(representation, bindings, tuple(rows), weights, constraints)


def _num(x: float) -> str:
    return repr(float(x))


def _row_fields(report: ComparisonReport, row: ReportRow) -> list[str]:
    p = row.point
    b = report.bindings
    return [
        p.algorithm,
        p.group,
        report.representation,
        str(b.n),
        "" if b.r is None else str(b.r),
        _num(p.depth_value),
        _num(p.runtime_value),
        _num(p.qubit_value),
        "true" if row.in_pareto else "false",
        "true" if row.passed_constraints else "false",
        "" if row.rank is None else str(row.rank),
        _num(row.score),
    ]


def render_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow(_row_fields(report, row))
    return buf.getvalue()


def render_json(report: ComparisonReport) -> str:
    b = report.bindings
    doc = {
        "representation": report.representation,
        "bindings": {"n": b.n, "r": b.r},
        "weights": dict(zip(("depth", "runtime", "qubits"), report.weights.values)),
        "constraints": {
            "max_depth": report.constraints.max_depth,
            "max_runtime": report.constraints.max_runtime,
            "max_qubits": report.constraints.max_qubits,
        },
        "rows": [
            {
                "algorithm": row.point.algorithm,
                "group": row.point.group,
                "depth": row.point.depth_value,
                "runtime": row.point.runtime_value,
                "qubits": row.point.qubit_value,
                "pareto": row.in_pareto,
                "passed_constraints": row.passed_constraints,
                "rank": row.rank,
                "score": row.score,
            }
            for row in report.rows
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_table(report: ComparisonReport) -> str:
    b = report.bindings
    header = ["algorithm", "depth", "runtime", "qubits", "pareto", "ok", "rank", "score"]
    body = [
        [
            row.point.algorithm,
            f"{row.point.depth_value:.4g}",
            f"{row.point.runtime_value:.4g}",
            f"{row.point.qubit_value:.4g}",
            "*" if row.in_pareto else "",
            "yes" if row.passed_constraints else "no",
            "" if row.rank is None else str(row.rank),
            f"{row.score:.3f}",
        ]
        for row in report.rows
    ]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = [f"{report.representation} n={b.n}" + ("" if b.r is None else f" r={b.r}")]
    for r in [header, *body]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


# --- plotting ----------------------------------------------------------------


class PlotInputError(ValueError):
    pass


@dataclass(frozen=True)
class PlotPoint:
    label: str
    depth: float
    runtime: float
    qubits: float
    pareto: bool


def read_comparison_csv(text: str) -> list[PlotPoint]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
        raise PlotInputError(f"expected CSV header {','.join(CSV_COLUMNS)}")
    points = []
    for lineno, row in enumerate(reader, start=2):
        try:
            vals = [float(row[k]) for k in ("depth", "runtime", "qubits")]
        except (TypeError, ValueError):
            raise PlotInputError(f"line {lineno}: non-numeric objective value") from None
        if any(not (math.isfinite(v) and v > 0) for v in vals):
            raise PlotInputError(f"line {lineno}: objectives must be positive for log axes")
        if row["pareto"] not in ("true", "false"):
            raise PlotInputError(f"line {lineno}: pareto must be true/false")
        points.append(PlotPoint(row["algorithm"], *vals, row["pareto"] == "true"))
    if not points:
        raise PlotInputError("comparison CSV has no rows")
    return points


_PANEL = 300
_MARGIN = 60
_AXES = (("depth", "order of depth"), ("runtime", "order of runtime"), ("qubits", "order of qubits"))
_PAIRS = ((0, 1), (0, 2), (1, 2))


def _log_scale(values: Sequence[float]):
    lo = math.floor(math.log10(min(values)))
    hi = math.ceil(math.log10(max(values)))
    if hi == lo:
        hi = lo + 1
    return lo, hi


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def render_svg(points: Sequence[PlotPoint], title: str = "") -> str:
    """Three log-log panels; Pareto members are red circles, others blue triangles."""
    width = 3 * (_PANEL + 2 * _MARGIN)
    height = _PANEL + 2 * _MARGIN + 30
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{_esc(title)}</text>')
    for panel, (ix, iy) in enumerate(_PAIRS):
        x0 = panel * (_PANEL + 2 * _MARGIN) + _MARGIN
        y0 = _MARGIN + 30
        xs = [getattr(p, _AXES[ix][0]) for p in points]
        ys = [getattr(p, _AXES[iy][0]) for p in points]
        xlo, xhi = _log_scale(xs)
        ylo, yhi = _log_scale(ys)

        def sx(v, lo=xlo, hi=xhi, x0=x0):
            return x0 + (math.log10(v) - lo) / (hi - lo) * _PANEL

        def sy(v, lo=ylo, hi=yhi, y0=y0):
            return y0 + _PANEL - (math.log10(v) - lo) / (hi - lo) * _PANEL

        out.append(f'<g class="panel" id="panel-{_AXES[ix][0]}-{_AXES[iy][0]}">')
        out.append(
            f'<rect x="{x0}" y="{y0}" width="{_PANEL}" height="{_PANEL}" fill="none" stroke="black"/>'
        )
        out.append(
            f'<text x="{x0 + _PANEL / 2:.1f}" y="{y0 + _PANEL + 35}" text-anchor="middle">'
            f"{_AXES[ix][1]} (log10)</text>"
        )
        out.append(
            f'<text x="{x0 - 40}" y="{y0 + _PANEL / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 {x0 - 40} {y0 + _PANEL / 2:.1f})">{_AXES[iy][1]} (log10)</text>'
        )
        for tick in (xlo, xhi):
            out.append(f'<text x="{sx(10.0**tick):.1f}" y="{y0 + _PANEL + 14}" text-anchor="middle">1e{tick}</text>')
        for tick in (ylo, yhi):
            out.append(f'<text x="{x0 - 5}" y="{sy(10.0**tick):.1f}" text-anchor="end">1e{tick}</text>')
        for p, xv, yv in zip(points, xs, ys):
            cx, cy = sx(xv), sy(yv)
            if p.pareto:
                out.append(f'<circle class="marker pareto" cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="red"/>')
            else:
                tri = f"{cx:.2f},{cy - 6:.2f} {cx - 5.5:.2f},{cy + 4:.2f} {cx + 5.5:.2f},{cy + 4:.2f}"
                out.append(f'<polygon class="marker dominated" points="{tri}" fill="blue"/>')
            out.append(f'<text class="label" x="{cx + 7:.2f}" y="{cy - 7:.2f}">{_esc(p.label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- scaling -----------------------------------------------------------------


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log2(y)`` against ``log2(x)``."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    if any(not x > 0 for x in xs) or any(not y > 0 for y in ys):
        raise ValueError("slope fit needs positive values")
    if len(set(xs)) < 2:
        raise ValueError("slope fit needs at least two distinct x values")
    slope, _ = np.polyfit(np.log2(xs), np.log2(ys), 1)
    return float(slope)


@dataclass(frozen=True)
class ScalingRow:
    size: int
    gates: float
    cx_equivalent: float
    depth: float
    seconds: float
    fidelity: Optional[float]


def random_dense(n: int, rng: np.random.Generator) -> DenseState:
    # Non-negative reals: the input class with the exact 2**n - 2 CX law.
    v = np.abs(rng.normal(size=2**n))
    return DenseState(v / np.linalg.norm(v))


def random_sparse(n: int, r: int, rng: np.random.Generator, complex_amps: bool = False) -> SparsePointSet:
    patterns = rng.choice(2**n, size=r, replace=False)
    a = rng.normal(size=r) + (1j * rng.normal(size=r) if complex_amps else 0)
    a = np.where(np.abs(a) < 1e-6, 1.0, a)
    a = a / np.linalg.norm(a)
    return SparsePointSet(n, zip(patterns.tolist(), a.tolist()))


def run_scaling(loader: str, sizes: Sequence[int], trials: int = 3, seed: int = 0,
                n: Optional[int] = None, verify: bool = True) -> list[ScalingRow]:
    """Median circuit metrics per size.

    ``sizes`` are qubit counts for the dense loader and point counts for
    the sparse loader (which then needs ``n``).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if loader == "sparse" and n is None:
        raise ValueError("sparse scaling needs a fixed n")
    rng = np.random.default_rng(seed)
    rows = []
    for size in sizes:
        gates, cxs, depths, secs, fids = [], [], [], [], []
        for _ in range(trials):
            if loader == "dense":
                state = random_dense(size, rng)
                t0 = time.perf_counter()
                circ = load_dense(state)
                secs.append(time.perf_counter() - t0)
                target = state.amplitudes
            elif loader == "sparse":
                if size > 2**n:
                    raise ValueError(f"r={size} exceeds 2**n={2**n}")
                state = random_sparse(n, size, rng)
                t0 = time.perf_counter()
                circ = load_sparse(state)
                secs.append(time.perf_counter() - t0)
                target = embed_sparse_target(state)
            else:
                raise ValueError(f"unknown loader {loader!r}")
            gates.append(len(circ.gates))
            cxs.append(cx_equivalent_count(circ))
            depths.append(circuit_depth(circ))
            if verify and circ.num_qubits <= MAX_SIM_QUBITS:
                fids.append(fidelity(simulate(circ), target))
            elif verify:
                warnings.warn(f"size {size}: {circ.num_qubits} qubits exceeds the simulator cap; not verified")
        rows.append(
            ScalingRow(
                size=size,
                gates=statistics.median(gates),
                cx_equivalent=statistics.median(cxs),
                depth=statistics.median(depths),
                seconds=statistics.median(secs),
                fidelity=min(fids) if fids else None,
            )
        )
    return rows


def scaling_slope(loader: str, rows: Sequence[ScalingRow]) -> Optional[float]:
    """log-log slope: CX count against N = 2**n (dense), gate count against r (sparse)."""
    if len({row.size for row in rows}) < 2:
        return None
    if loader == "dense":
        return fit_loglog_slope([2.0**row.size for row in rows], [row.cx_equivalent for row in rows])
    return fit_loglog_slope([row.size for row in rows], [row.gates for row in rows])


def render_scaling_csv(rows: Sequence[ScalingRow], slope: Optional[float], include_time: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["size", "median_gates", "median_cx_equivalent", "median_depth"]
    if include_time:
        header.append("median_seconds")
    header.append("min_fidelity")
    writer.writerow(header)
    for row in rows:
        fields = [row.size, _num(row.gates), _num(row.cx_equivalent), _num(row.depth)]
        if include_time:
            fields.append(f"{row.seconds:.6g}")
        fields.append("" if row.fidelity is None else _num(row.fidelity))
        writer.writerow(fields)
    buf.write(f"# slope,{'undefined' if slope is None else _num(slope)}\n")
    return buf.getvalue()
