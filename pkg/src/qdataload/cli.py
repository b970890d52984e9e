"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 numeric or domain error.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from pathlib import Path

from .circuit import (
    CircuitParseError,
    fidelity,
    gate_counts,
    metrics,
    parse_circuit,
    serialize_circuit,
    simulate,
)
from .complexity import Bindings, ComplexityDomainError, UnboundVariableError
from .loaders import (
    DenseState,
    NormalizationError,
    SparsePointSet,
    embed_sparse_target,
    load_dense,
    load_sparse,
    parse_dsv,
    parse_ssv,
)
from .pareto import ConstraintSet, WeightVector
from .registry import RegistryError, load_registry, serialize_registry
from .report import (
    PlotInputError,
    compare,
    read_comparison_csv,
    render_csv,
    render_json,
    render_scaling_csv,
    render_svg,
    render_table,
    run_scaling,
    scaling_slope,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _weights(text: str) -> WeightVector:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weights {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("weights need three values: depth,runtime,qubits")
    try:
        return WeightVector(*parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _write(path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _read_target(path: str, loader: str | None):
    """Load a .dsv/.ssv file; returns ``(kind, state)``."""
    kind = loader or {".dsv": "dense", ".ssv": "sparse"}.get(Path(path).suffix.lower())
    if kind is None:
        raise UsageError(f"cannot tell dense from sparse input for {path}; pass --loader")
    text = Path(path).read_text(encoding="utf-8")
    return kind, text


# --- subcommands -------------------------------------------------------------


def cmd_compare(args) -> int:
    if args.representation == "sparse" and args.r is None:
        raise UsageError("--r is required for sparse comparisons")
    if args.representation == "dense" and args.r is not None:
        raise UsageError("--r only applies to sparse comparisons")
    records = load_registry(args.registry)
    constraints = ConstraintSet(args.max_depth, args.max_runtime, args.max_qubits)
    report = compare(records, args.representation, Bindings(args.n, args.r), constraints, args.weights)
    render = {"csv": render_csv, "json": render_json, "table": render_table}[args.format]
    _write(args.out, render(report))
    return EXIT_OK


def cmd_registry(args) -> int:
    _write(args.out, serialize_registry(load_registry(args.registry)))
    return EXIT_OK


def cmd_synthesize(args) -> int:
    kind, text = _read_target(args.input, args.loader)
    t0 = time.perf_counter()
    if kind == "dense":
        state = DenseState(parse_dsv(text), normalize=args.normalize)
        circuit = load_dense(state)
    else:
        n, points = parse_ssv(text)
        state = SparsePointSet(n, points, normalize=args.normalize)
        circuit = load_sparse(state)
    elapsed = time.perf_counter() - t0
    _write(args.out, serialize_circuit(circuit))
    summary = metrics(circuit)
    counts = gate_counts(circuit)
    lines = [f"loader: {kind}"]
    lines += [f"{key}: {value}" for key, value in summary.items()]
    lines += [f"count_{key}: {value}" for key, value in counts.items()]
    lines.append(f"synthesis_seconds: {elapsed:.6f}")
    stream = sys.stderr if args.out is None else sys.stdout
    stream.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = parse_circuit(Path(args.circuit).read_text(encoding="utf-8"))
    kind, text = _read_target(args.input, args.loader)
    if kind == "dense":
        target = DenseState(parse_dsv(text), normalize=True).amplitudes
    else:
        n, points = parse_ssv(text)
        target = embed_sparse_target(SparsePointSet(n, points, normalize=True))
    if len(target) != 2**circuit.num_qubits:
        raise UsageError(
            f"target has {len(target)} amplitudes but the circuit acts on {circuit.num_qubits} qubits"
        )
    fid = fidelity(simulate(circuit), target)
    ok = fid >= 1 - args.tolerance
    print(f"fidelity: {fid!r}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_scaling(args) -> int:
    if args.loader == "dense":
        if args.n_range is None:
            raise UsageError("dense scaling needs --n-range")
        sizes = list(range(args.n_range[0], args.n_range[1] + 1))
        n = None
    else:
        if args.r_range is None or args.n is None:
            raise UsageError("sparse scaling needs --n and --r-range")
        n = args.n
        lo, hi = args.r_range
        # Doubling steps; r is swept geometrically.
        sizes = []
        r = lo
        while r <= hi:
            sizes.append(r)
            r *= 2
        if 2**n < sizes[-1]:
            raise UsageError(f"r up to {sizes[-1]} does not fit in n={n} qubits")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = run_scaling(args.loader, sizes, trials=args.trials, seed=args.seed, n=n,
                           verify=not args.no_verify)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    slope = scaling_slope(args.loader, rows)
    _write(args.out, render_scaling_csv(rows, slope, include_time=not args.no_time))
    return EXIT_OK


def cmd_plot(args) -> int:
    points = read_comparison_csv(Path(args.input).read_text(encoding="utf-8"))
    _write(args.out, render_svg(points, title=args.title or ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdataload", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compare", help="Pareto comparison of registry algorithms")
    p.add_argument("--registry", help="registry JSON file (default: built-in table)")
    p.add_argument("--representation", choices=("dense", "sparse"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--max-depth", type=_positive)
    p.add_argument("--max-runtime", type=_positive)
    p.add_argument("--max-qubits", type=_positive)
    p.add_argument("--weights", type=_weights, default=WeightVector())
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("registry", help="print the registry as JSON")
    p.add_argument("--registry")
    p.add_argument("--out")
    p.set_defaults(func=cmd_registry)

    p = sub.add_parser("synthesize", help="build a loader circuit from a .dsv/.ssv file")
    p.add_argument("--input", required=True)
    p.add_argument("--loader", choices=("dense", "sparse"))
    p.add_argument("--out")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="simulate a circuit and compare with a target state")
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p.add_argument("--loader", choices=("dense", "sparse"))
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", help="empirical gate-count scaling of a loader")
    p.add_argument("--loader", choices=("dense", "sparse"), required=True)
    p.add_argument("--n-range", type=_range)
    p.add_argument("--n", type=int)
    p.add_argument("--r-range", type=_range)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--no-time", action="store_true", help="omit wall-clock column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("plot", help="SVG scatter panels from a comparison CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ComplexityDomainError, NormalizationError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, RegistryError, CircuitParseError, PlotInputError,
            UnboundVariableError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
