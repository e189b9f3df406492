from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from manycolour.core import DomainError, FeasibilityError, Hypergraph, to_mask
from manycolour.construct import complete_uniform_hypergraph, projective_plane_hypergraph
from manycolour.hypergraph import (
    cover_number,
    default_edge_count,
    disjoint_pair,
    double_count_lower_bound,
    exclusion_edge_probability,
    exclusion_expected_edges,
    exclusion_sample,
    is_intersecting,
    min_edges_in_subsets,
    uniform_intersecting_sample,
)


@st.composite
def hypergraphs(draw, r_max=8, m_max=8):
    r = draw(st.integers(1, r_max))
    edges = draw(st.lists(st.sets(st.integers(0, r - 1), min_size=1), min_size=1, max_size=m_max))
    return Hypergraph.from_sets(r, edges)


def brute_cover(H: Hypergraph) -> int:
    for size in range(H.r + 1):
        for C in combinations(range(H.r), size):
            mask = to_mask(C)
            if all(e & mask for e in H.edges):
                return size
    raise AssertionError("unreachable")


def test_intersecting_examples():
    assert is_intersecting(projective_plane_hypergraph(2))
    H = Hypergraph.from_sets(4, [[0, 1], [2, 3]])
    assert not is_intersecting(H) and disjoint_pair(H) == (0, 1)
    assert is_intersecting(complete_uniform_hypergraph(7, 4))
    # duplicate copies count as separate edges but always meet
    assert is_intersecting(Hypergraph.from_sets(3, [[0], [0]]))


def test_cover_examples():
    assert cover_number(projective_plane_hypergraph(2)) == 3
    assert cover_number(Hypergraph.from_sets(3, [[0, 1, 2]])) == 1
    for r, u in [(5, 3), (6, 2), (7, 4)]:
        assert cover_number(complete_uniform_hypergraph(r, u)) == r - u + 1


def test_cover_guard():
    big = Hypergraph(41, tuple(1 << (i % 41) | 1 << ((i + 1) % 41) for i in range(10**4 + 1)))
    with pytest.raises(FeasibilityError):
        cover_number(big)


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_cover_matches_brute_force(H):
    assert cover_number(H) == brute_cover(H)


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_subset_minima_monotone_and_linked_to_cover(H):
    ts = [min_edges_in_subsets(H, m)[0] for m in range(H.r + 1)]
    assert ts == sorted(ts) and ts[-1] == H.m
    tau = cover_number(H)
    for s in range(H.r + 1):
        assert (tau > s) == (ts[H.r - s] >= 1)
    t, W = min_edges_in_subsets(H, H.r // 2)
    assert len(W) == H.r // 2 and sum(1 for e in H.edges if e & to_mask(W) == e) == t


def test_subset_examples_and_guard():
    assert min_edges_in_subsets(projective_plane_hypergraph(2), 6)[0] == 4
    with pytest.raises(DomainError):
        min_edges_in_subsets(projective_plane_hypergraph(2), 8)
    with pytest.raises(FeasibilityError):
        min_edges_in_subsets(Hypergraph.from_sets(30, [[0]]), 15)


def test_uniform_sample_examples():
    s = uniform_intersecting_sample(7, 1, seed=3, u=4, m=5)
    assert s.intersecting and s.hypergraph.m == 5 and s.hypergraph.uniformity() == 4
    assert s.cover_exceeds_s == (cover_number(s.hypergraph) > 1)
    one = uniform_intersecting_sample(10, 1, seed=0, u=3, m=1)
    assert not one.cover_exceeds_s and not one.success
    assert uniform_intersecting_sample(20, 2, seed=5, u=8, m=30) == uniform_intersecting_sample(20, 2, seed=5, u=8, m=30)
    entry = s.log_entry()
    assert entry["seed"] == 3 and entry["u"] == 4 and entry["success"] == s.success
    assert default_edge_count(20, 8) == 4
    with pytest.raises(DomainError):
        uniform_intersecting_sample(5, 1, seed=0)  # default u = 8 > r


def test_double_count_bound():
    assert double_count_lower_bound(7, 3, 4) == 35
    assert double_count_lower_bound(9, 2, 7) == comb(9, 2)
    assert double_count_lower_bound(10, 2, 4) == Fraction(45, 15)
    with pytest.raises(DomainError):
        double_count_lower_bound(7, 4, 4)


@pytest.mark.parametrize("seed", range(30))
def test_successful_uniform_samples_respect_double_count(seed):
    for r, s, u, m in [(7, 3, 4, 150), (9, 2, 5, 40)]:
        sample = uniform_intersecting_sample(r, s, seed, u=u, m=m)
        if sample.success:
            assert sample.hypergraph.m >= double_count_lower_bound(r, s, u)


def exact_exclusion_mean(r: int, x: int) -> Fraction:
    """E[kept edges] by summing over every firing pattern."""
    sets = [to_mask(c) for c in combinations(range(r), x)]
    p = Fraction(1, comb(r - x, x))
    total = Fraction(0)
    for fired in product((0, 1), repeat=len(sets)):
        weight = Fraction(1)
        for z in fired:
            weight *= p if z else 1 - p
        kept = sum(1 for i, X in enumerate(sets) if fired[i]
                   and not any(fired[j] and not X & Y for j, Y in enumerate(sets)))
        total += weight * kept
    return total


@pytest.mark.parametrize("r,x", [(5, 2), (4, 1), (3, 1)])
def test_exclusion_formula_against_full_enumeration(r, x):
    assert exclusion_expected_edges(r, x) == exact_exclusion_mean(r, x)


def test_exclusion_formula_values():
    p = Fraction(1, 36)
    assert exclusion_edge_probability(16, 7) == p * (1 - p) ** 36
    assert exclusion_expected_edges(16, 7) == 11440 * p * (1 - p) ** 36
    assert exclusion_expected_edges(16, 7, within=10) == 120 * p * (1 - p) ** 36


@pytest.mark.parametrize("seed", range(20))
def test_exclusion_sample_is_intersecting(seed):
    for r, x in [(16, 7), (9, 3), (7, 2), (5, 1)]:
        H = exclusion_sample(r, x, seed)
        if H.m:
            assert is_intersecting(H) and H.uniformity() == x


def test_exclusion_sample_errors():
    with pytest.raises(DomainError, match="= 1"):
        exclusion_sample(8, 4, 0)
    with pytest.raises(DomainError):
        exclusion_sample(5, 3, 0)
    with pytest.raises(FeasibilityError):
        exclusion_sample(40, 10, 0)
    assert exclusion_sample(16, 7, 11) == exclusion_sample(16, 7, 11)
