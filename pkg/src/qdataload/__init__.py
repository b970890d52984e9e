"""Compare quantum state-preparation algorithms and check two reference loaders."""

from .circuit import Circuit, Gate, circuit_depth, cx_equivalent_count, fidelity, simulate
from .complexity import Bindings, evaluate_complexity, free_variables, parse_complexity
from .loaders import DenseState, SparseBuilder, SparsePointSet, load_dense, load_sparse
from .pareto import ConstraintSet, WeightVector, dominates, filter_constraints, pareto_set, rank_weighted
from .registry import AlgorithmRecord, ObjectivePoint, builtin_registry, evaluate_record, parse_registry

__version__ = "0.1.0"

__all__ = [
    "AlgorithmRecord", "Bindings", "Circuit", "ConstraintSet", "DenseState", "Gate",
    "ObjectivePoint", "SparseBuilder", "SparsePointSet", "WeightVector", "builtin_registry",
    "circuit_depth", "cx_equivalent_count", "dominates", "evaluate_complexity", "evaluate_record",
    "fidelity", "filter_constraints", "free_variables", "load_dense", "load_sparse",
    "parse_complexity", "parse_registry", "pareto_set", "rank_weighted", "simulate",
]
