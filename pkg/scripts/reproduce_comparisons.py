"""Run the dense and sparse comparisons on the standard (n, r) grid.

Writes one CSV and one SVG per grid cell into the output directory and
prints the Pareto members of each cell.

    python scripts/reproduce_comparisons.py --out results/
"""

import argparse
from pathlib import Path

from qdataload.complexity import Bindings
from qdataload.pareto import ConstraintSet
from qdataload.registry import REFERENCE_N_GRID, REFERENCE_R_GRID, builtin_registry
from qdataload.report import compare, read_comparison_csv, render_csv, render_svg


def run_cell(out_dir, records, rep, b, constraints=ConstraintSet(), tag=""):
    report = compare(records, rep, b, constraints)
    stem = f"{rep}_n{b.n}" + ("" if b.r is None else f"_r{b.r}") + tag
    text = render_csv(report)
    (out_dir / f"{stem}.csv").write_text(text)
    title = f"{rep} n={b.n}" + ("" if b.r is None else f" r={b.r}")
    (out_dir / f"{stem}.svg").write_text(render_svg(read_comparison_csv(text), title=title))
    print(f"{stem:24s} pareto: {', '.join(report.pareto_names)}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="results")
    parser.add_argument("--max-qubits", type=float, default=1e4)
    args = parser.parse_args()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = builtin_registry()
    for n in REFERENCE_N_GRID:
        run_cell(out_dir, records, "dense", Bindings(n))
    for n in REFERENCE_N_GRID:
        for r in REFERENCE_R_GRID:
            run_cell(out_dir, records, "sparse", Bindings(n, r))
    # Practical qubit budget.
    for n in REFERENCE_N_GRID:
        run_cell(out_dir, records, "dense", Bindings(n), ConstraintSet(max_qubits=args.max_qubits),
                 tag="_qubit_budget")


if __name__ == "__main__":
    main()
