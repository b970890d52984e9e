import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdataload.complexity import Bindings
from qdataload.pareto import (
    ConstraintSet,
    WeightVector,
    dominates,
    filter_constraints,
    pareto_set,
    rank_weighted,
)
from qdataload.registry import ObjectivePoint, builtin_registry, evaluate_record

B = Bindings(10)


def pt(name, d, rt, q, b=B):
    return ObjectivePoint(name, name, float(d), float(rt), float(q), b)


def points(rep, b):
    return [evaluate_record(rec, b) for rec in builtin_registry() if rec.representation == rep]


def names(ps):
    return {p.algorithm for p in ps}


def brute_force_front(ps):
    def dom(a, b):
        return all(x <= y for x, y in zip(a, b)) and a != b

    return [p for p in ps if not any(dom(q.values, p.values) for q in ps)]


def test_dominates_examples():
    assert dominates(pt("a", 10, 1024, 1024), pt("b", 100, 1024, 1024))
    a, u = pt("Zhang'21a", 100, 1048576, 10), pt("Unitary", 1024, 1024, 10)
    assert not dominates(a, u) and not dominates(u, a)
    assert not dominates(pt("x", 1, 2, 3), pt("y", 1, 2, 3))


def test_dominates_requires_common_bindings():
    with pytest.raises(ValueError):
        dominates(pt("a", 1, 1, 1), pt("b", 2, 2, 2, Bindings(11)))


def test_dense_front_n10():
    assert names(pareto_set(points("dense", B))) == {"Unitary", "Zhang'21a", "Zhang'21b", "Zhang'22a"}


def test_sparse_front_n20_r100():
    assert names(pareto_set(points("sparse", Bindings(20, 100)))) == {"NR-group", "Zhang'22b"}


def test_single_and_empty():
    p = pt("only", 1, 2, 3)
    assert pareto_set([p]) == [p]
    with pytest.raises(ValueError):
        pareto_set([])


def test_front_keeps_ties_and_order():
    ps = [pt("c", 2, 2, 2), pt("a", 1, 5, 5), pt("b", 1, 5, 5), pt("d", 3, 3, 3)]
    assert [p.algorithm for p in pareto_set(ps)] == ["c", "a", "b"]


def test_constraints():
    dense30 = points("dense", Bindings(30))
    kept = filter_constraints(dense30, ConstraintSet(max_qubits=1e4))
    assert names(kept) == {"Unitary", "Zhang'21a"}
    assert names(pareto_set(kept)) == {"Unitary", "Zhang'21a"}
    assert filter_constraints(dense30, ConstraintSet()) == dense30
    assert filter_constraints(dense30, ConstraintSet(max_depth=0.5)) == []


def test_rank_equal_weights_dense_n10():
    ranked = rank_weighted(points("dense", B), WeightVector())
    # Hand-computed mean log10 scores.
    expected = {
        "Araujo'21": (2 + 2 * math.log10(1024)) / 3,
        "Unitary": (2 * math.log10(1024) + 1) / 3,
        "Zhang'21a": (2 + math.log10(2**20) + 1) / 3,
        "Zhang'21b": (2 + 2 + math.log10(2**20)) / 3,
        "Zhang'21c": (2 + 15.2 * math.log10(2) + math.log10(1024)) / 3,
        "Zhang'22a": (1 + 2 * math.log10(1024)) / 3,
    }
    for rp in ranked:
        assert rp.score == pytest.approx(expected[rp.point.algorithm], rel=1e-12)
    assert [rp.point.algorithm for rp in ranked] == sorted(expected, key=lambda k: (round(expected[k], 9), k))
    # Unitary and Zhang'22a tie exactly and share first place.
    top = [(rp.rank, rp.point.algorithm) for rp in ranked[:2]]
    assert top == [(1, "Unitary"), (1, "Zhang'22a")]
    assert ranked[0].score == pytest.approx(2.3402, abs=1e-4)
    assert ranked[2].rank == 3


def test_rank_depth_only():
    ranked = rank_weighted(points("dense", B), WeightVector(1, 0, 0))
    assert ranked[0].point.algorithm == "Zhang'22a" and ranked[0].rank == 1
    assert ranked[1].rank == 2


def test_rank_single_point():
    p = pt("only", 5, 6, 7)
    for w in [WeightVector(), WeightVector(0, 0, 1), WeightVector(3, 1, 0)]:
        assert rank_weighted([p], w)[0].rank == 1


@pytest.mark.parametrize("ws", [(0, 0, 0), (-1, 1, 1), (math.nan, 1, 1)])
def test_bad_weights(ws):
    with pytest.raises(ValueError):
        WeightVector(*ws)


def test_weights_normalize():
    assert WeightVector(2, 1, 1).values == (0.5, 0.25, 0.25)


# --- properties --------------------------------------------------------------

values = st.sampled_from([1.0, 2.0, 3.0, 5.0, 8.0, 1e3, 1e9])
triples = st.tuples(values, values, values)
point_sets = st.lists(triples, min_size=1, max_size=12).map(
    lambda ts: [pt(f"p{i}", *t) for i, t in enumerate(ts)]
)


@given(triples, triples, triples)
def test_dominance_order_properties(a, b, c):
    pa, pb, pc = pt("a", *a), pt("b", *b), pt("c", *c)
    assert not dominates(pa, pa)
    assert not (dominates(pa, pb) and dominates(pb, pa))
    if dominates(pa, pb) and dominates(pb, pc):
        assert dominates(pa, pc)


@given(point_sets)
def test_matches_all_pairs_oracle(ps):
    assert pareto_set(ps) == brute_force_front(ps)


@given(point_sets)
def test_cover_and_idempotence(ps):
    front = pareto_set(ps)
    for p in ps:
        assert p in front or any(dominates(f, p) for f in front)
    assert pareto_set(front) == front


@given(point_sets, st.sampled_from(["log2", "x7"]))
def test_invariant_under_monotone_transform(ps, how):
    f = math.log2 if how == "log2" else (lambda v: 7 * v)
    # log2(1) = 0 is not a valid objective; shift to keep values positive.
    g = (lambda v: f(v) + 1) if how == "log2" else f
    moved = [pt(p.algorithm, *(g(v) for v in p.values)) for p in ps]
    assert [p.algorithm for p in pareto_set(moved)] == [p.algorithm for p in pareto_set(ps)]


@given(point_sets, st.integers(0, 2))
def test_concentrated_weight_picks_argmin(ps, axis):
    w = [0.0, 0.0, 0.0]
    w[axis] = 1.0
    top = rank_weighted(ps, WeightVector(*w))[0].point
    assert top.values[axis] == min(p.values[axis] for p in ps)
