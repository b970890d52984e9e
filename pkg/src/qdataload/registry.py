"""Catalog of state-preparation algorithms and their complexity orders."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

from .complexity import (
    Bindings,
    ComplexityDomainError,
    ComplexityExpr,
    ComplexitySyntaxError,
    evaluate_complexity,
    free_variables,
    parse_complexity,
    serialize_complexity,
)

DENSE = "dense"
SPARSE = "sparse"
REPRESENTATIONS = (DENSE, SPARSE)
ALTERABLE_VALUES = ("yes", "no", "unknown")

RECORD_KEYS = (
    "name",
    "group",
    "citations",
    "representation",
    "depth",
    "classical_runtime",
    "qubit_count",
    "alterable",
    "notes",
)
OBJECTIVES = ("depth", "classical_runtime", "qubit_count")

REFERENCE_N_GRID = (10, 20, 30)
REFERENCE_R_GRID = (10, 100, 1000)


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class AlgorithmRecord:
    name: str
    group: str
    citations: tuple
    representation: str
    depth: ComplexityExpr
    classical_runtime: ComplexityExpr
    qubit_count: ComplexityExpr
    alterable: str = "unknown"
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "citations": list(self.citations),
            "representation": self.representation,
            "depth": serialize_complexity(self.depth),
            "classical_runtime": serialize_complexity(self.classical_runtime),
            "qubit_count": serialize_complexity(self.qubit_count),
            "alterable": self.alterable,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class ObjectivePoint:
    """Evaluated (depth, runtime, qubits) order values of one algorithm."""

    algorithm: str
    group: str
    depth_value: float
    runtime_value: float
    qubit_value: float
    bindings: Bindings
    representation: str = DENSE

    def __post_init__(self):
        for v in self.values:
            if not (math.isfinite(v) and v > 0):
                raise ComplexityDomainError(
                    f"{self.algorithm}: objective values must be finite and > 0, got {self.values}"
                )

    @property
    def values(self) -> tuple:
        return (self.depth_value, self.runtime_value, self.qubit_value)


# Verbatim complexity orders of the compared algorithm groups.
_BUILTIN = [
    dict(name="Araujo'21", citations=["araujo2021divide"], representation=DENSE,
         depth="O(log(N)^2)", classical_runtime="O(N)", qubit_count="O(N)"),
    dict(name="Unitary", citations=["mottonen2005transformation", "plesch2011quantum"],
         representation=DENSE, depth="O(N)", classical_runtime="O(N)", qubit_count="O(n)"),
    dict(name="Zhang'21a", citations=["zhang2021low"], representation=DENSE,
         depth="O(n^2)", classical_runtime="O(N^2)", qubit_count="O(n)"),
    dict(name="Zhang'21b", citations=["zhang2021low"], representation=DENSE,
         depth="O(n^2)", classical_runtime="O(n^2)", qubit_count="O(N^2)"),
    dict(name="Zhang'21c", citations=["zhang2021low"], representation=DENSE,
         depth="O(n^2)", classical_runtime="O(N^1.52)", qubit_count="O(N)"),
    dict(name="Zhang'22a", citations=["zhang2022quantum"], representation=DENSE,
         depth="Theta(n)", classical_runtime="O(N)", qubit_count="O(N)"),
    dict(name="deVeras'22", citations=["deVeras2022double"], representation=SPARSE,
         depth="O(nr)", classical_runtime="O(nr + r log(r))", qubit_count="O(n)",
         alterable="yes",
         notes="depth order uncertain (not reported explicitly by the authors)"),
    dict(name="Gleinig'21", citations=["gleinig2021efficient"], representation=SPARSE,
         depth="O(nr)", classical_runtime="O(n r^2 log(r))", qubit_count="O(n)"),
    dict(name="NR-group",
         citations=["deVeras2020circuit", "malvetti2021quantum", "khan2022ep"],
         representation=SPARSE, depth="O(nr)", classical_runtime="O(nr)",
         qubit_count="O(n)", alterable="yes",
         notes="three algorithms; splitting attempts assumed capped by a constant"),
    dict(name="Zhang'22b", citations=["zhang2022quantum"], representation=SPARSE,
         depth="Theta(log(nr))", classical_runtime="O(log(nr))",
         qubit_count="O(n + n r log(r))",
         notes="ancilla accounting in the qubit order may differ from other rows"),
]


def _record_from_dict(raw: dict) -> AlgorithmRecord:
    if not isinstance(raw, dict):
        raise RegistryError(f"registry entries must be objects, got {type(raw).__name__}")
    keys = set(raw)
    unknown = keys - set(RECORD_KEYS)
    missing = set(RECORD_KEYS) - keys
    if unknown:
        raise RegistryError(f"unknown keys {sorted(unknown)} in record {raw.get('name')!r}")
    if missing:
        raise RegistryError(f"missing keys {sorted(missing)} in record {raw.get('name')!r}")

    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise RegistryError(f"record name must be a non-empty string, got {name!r}")
    rep = raw["representation"]
    if rep not in REPRESENTATIONS:
        raise RegistryError(f"{name}: representation must be 'dense' or 'sparse', got {rep!r}")
    alterable = raw["alterable"]
    if alterable not in ALTERABLE_VALUES:
        raise RegistryError(f"{name}: alterable must be one of {ALTERABLE_VALUES}")
    citations = raw["citations"]
    if not isinstance(citations, list) or not all(isinstance(c, str) for c in citations):
        raise RegistryError(f"{name}: citations must be a list of strings")
    group = raw["group"]
    notes = raw["notes"]
    if not isinstance(group, str) or not isinstance(notes, str):
        raise RegistryError(f"{name}: group and notes must be strings")

    allowed = {"n"} if rep == DENSE else {"n", "r"}
    exprs = {}
    for key in OBJECTIVES:
        text = raw[key]
        if not isinstance(text, str):
            raise RegistryError(f"{name}: {key} must be a formula string")
        try:
            expr = parse_complexity(text)
        except ComplexitySyntaxError as exc:
            raise RegistryError(f"{name}: bad {key} formula {text!r}: {exc}") from exc
        extra = free_variables(expr) - allowed
        if extra:
            raise RegistryError(
                f"{name}: {rep} record uses variable(s) {sorted(extra)} in {key}"
            )
        exprs[key] = expr

    return AlgorithmRecord(
        name=name,
        group=group,
        citations=tuple(citations),
        representation=rep,
        alterable=alterable,
        notes=notes,
        **exprs,
    )


def _build(raws: Iterable[dict]) -> list[AlgorithmRecord]:
    records = []
    seen = set()
    for raw in raws:
        rec = _record_from_dict(raw)
        if rec.name in seen:
            raise RegistryError(f"duplicate algorithm name {rec.name!r}")
        seen.add(rec.name)
        records.append(rec)
    return records


def builtin_registry() -> list[AlgorithmRecord]:
    defaults = {"alterable": "unknown", "notes": ""}
    return _build({**defaults, "group": raw["name"], **raw} for raw in _BUILTIN)


def parse_registry(text: str) -> list[AlgorithmRecord]:
    """Parse a JSON registry document (a top-level list of record objects)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise RegistryError("registry must be a JSON list of records")
    records = _build(data)
    for message in check_groups(records):
        warnings.warn(message, stacklevel=2)
    return records


def serialize_registry(records: Iterable[AlgorithmRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2, ensure_ascii=False) + "\n"


def load_registry(path: Optional[str] = None) -> list[AlgorithmRecord]:
    if path is None:
        return builtin_registry()
    with open(path, encoding="utf-8") as fh:
        return parse_registry(fh.read())


def lookup(records: Iterable[AlgorithmRecord], name: str) -> AlgorithmRecord:
    for rec in records:
        if rec.name == name:
            return rec
    raise KeyError(name)


def evaluate_record(rec: AlgorithmRecord, b: Bindings) -> ObjectivePoint:
    if rec.representation == DENSE and b.r is not None:
        # r is meaningless for dense loaders; drop it so points compare cleanly.
        b = Bindings(b.n)
    return ObjectivePoint(
        algorithm=rec.name,
        group=rec.group,
        depth_value=evaluate_complexity(rec.depth, b),
        runtime_value=evaluate_complexity(rec.classical_runtime, b),
        qubit_value=evaluate_complexity(rec.qubit_count, b),
        bindings=b,
        representation=rec.representation,
    )


def reference_grid(representation: str) -> list[Bindings]:
    if representation == DENSE:
        return [Bindings(n) for n in REFERENCE_N_GRID]
    return [Bindings(n, r) for n in REFERENCE_N_GRID for r in REFERENCE_R_GRID]


def check_groups(records: Iterable[AlgorithmRecord]) -> list[str]:
    """Warnings for groups whose members evaluate differently on the reference grid."""
    by_group: dict = {}
    for rec in records:
        by_group.setdefault((rec.representation, rec.group), []).append(rec)
    messages = []
    for (rep, group), members in by_group.items():
        if len(members) < 2:
            continue
        for b in reference_grid(rep):
            values = {evaluate_record(m, b).values for m in members}
            if len(values) > 1:
                messages.append(
                    f"group {group!r} members evaluate differently at n={b.n}, r={b.r}"
                )
                break
    return messages
