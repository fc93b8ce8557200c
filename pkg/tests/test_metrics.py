import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from acisim.metrics import Counters, execution_rate, reuse_entropy, top_quality
from acisim.model import Actor, Concept, Instance, Store
from acisim.ranking import rank_indegree


def entropy_oracle(counts, m):
    """Materialise the (instance x concept) table with fractional rows and sum -p ln p."""
    concepts = list(range(len(counts))) + (["virtual"] if m else [])
    table = []
    for c, n in enumerate(counts):
        for _ in range(n):
            table.append({c: Fraction(1)})
    for _ in range(m):
        table.append({c: Fraction(1, len(concepts)) for c in concepts})
    total = sum(sum(row.values()) for row in table)
    if total == 0:
        return None
    h = 0.0
    for c in concepts:
        mass = sum(row.get(c, 0) for row in table)
        if mass:
            p = float(mass / total)
            h -= p * math.log(p)
    return h


def test_golden_values():
    assert reuse_entropy([3, 2], 0) == pytest.approx(0.673, abs=0.005)
    assert reuse_entropy([1], 0) == 0.0
    assert reuse_entropy([3], 2) == pytest.approx(0.500, abs=0.005)
    assert reuse_entropy([4, 4], 0) == pytest.approx(math.log(2), abs=1e-12)


def test_no_mass():
    assert reuse_entropy([], 0) is None
    assert reuse_entropy([0, 0], 0) is None


def test_only_unannotated():
    # one virtual concept receives everything
    assert reuse_entropy([], 3) == 0.0
    assert reuse_entropy([0], 2) == pytest.approx(math.log(2), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 6), max_size=8), st.integers(0, 6))
def test_matches_oracle(counts, m):
    expected = entropy_oracle(counts, m)
    got = reuse_entropy(counts, m)
    if expected is None:
        assert got is None
    else:
        assert got == pytest.approx(expected, abs=1e-12)
        assert 0.0 <= got <= math.log(len(counts) + (1 if m else 0)) + 1e-12


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=2, max_size=10))
def test_feeding_the_leader_lowers_entropy(counts):
    top = max(counts)
    if counts.count(top) != 1 or top == 0:
        return
    before = reuse_entropy(counts, 0)
    bumped = list(counts)
    bumped[counts.index(top)] += 1
    assert reuse_entropy(bumped, 0) <= before + 1e-12


def _store_with_qualities(qualities):
    s = Store([Actor(0, 0.5)], [Concept(k, q, 0.5) for k, q in enumerate(qualities)],
              [Instance(0, 0.5)])
    for k in range(len(qualities)):
        s.publish_concept(k, 0)
    return s


def test_top_quality():
    s = _store_with_qualities([0.2, 0.9, 0.4, 0.6])
    s.publish_instance(0, 0)
    s.add_annotation(0, 1, 0)
    snap = rank_indegree(s.graph)
    assert top_quality(snap, s, 1) == 0.9
    assert top_quality(snap, s, 10) == pytest.approx(np.mean([0.2, 0.9, 0.4, 0.6]), abs=1e-15)
    with pytest.raises(ValueError):
        top_quality(snap, s, 0)


def test_top_quality_constant_and_empty():
    s = _store_with_qualities([0.5] * 5)
    snap = rank_indegree(s.graph)
    assert top_quality(snap, s, 3) == 0.5
    empty = Store([Actor(0, 0.5)], [Concept(0, 0.5, 0.5)], [Instance(0, 0.5)])
    assert top_quality(rank_indegree(empty.graph), empty, 1) is None


def test_top_quality_ignores_score_scale():
    s = _store_with_qualities([0.1, 0.3, 0.8])
    s.publish_instance(0, 0)
    s.add_annotation(0, 2, 0)
    snap = rank_indegree(s.graph)
    scaled = type(snap)(snap.algorithm, snap.version, snap.ids,
                        {k: v * 1000 for k, v in snap.scores.items()}, snap.ranks)
    assert top_quality(snap, s, 2) == top_quality(scaled, s, 2)


@pytest.mark.parametrize("attempts, successes, expected", [(2000, 1000, 0.5), (10, 0, 0.0),
                                                           (7, 7, 1.0), (0, 0, None)])
def test_execution_rate(attempts, successes, expected):
    assert execution_rate(attempts, successes) == expected


def test_execution_rate_rejects_impossible():
    with pytest.raises(ValueError):
        execution_rate(1, 2)


def test_counters():
    c = Counters()
    c.attempt("semantic_annotation")
    c.success("semantic_annotation")
    c.attempt("publish_concept")
    assert c.rate("semantic_annotation") == 1.0
    assert c.rate("publish_concept") == 0.0
    assert c.rate("publish_instance") is None
    assert c.attempts == 2
