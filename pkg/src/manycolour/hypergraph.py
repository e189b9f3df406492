"""Checks and samplers for (multi-)hypergraphs on the colour set."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    DomainError,
    FeasibilityError,
    Hypergraph,
    iter_bits,
    make_rng,
    popcount,
    to_mask,
)

COVER_EDGE_GUARD = 10**4
COVER_VERTEX_GUARD = 40
SUBSET_GUARD = 10**6


def disjoint_pair(H: Hypergraph) -> tuple[int, int] | None:
    """Indices of the first pair of disjoint edges, or None if H is intersecting."""
    edges = H.edges
    for i in range(len(edges)):
        ei = edges[i]
        for j in range(i + 1, len(edges)):
            if not ei & edges[j]:
                return i, j
    return None


def is_intersecting(H: Hypergraph) -> bool:
    return disjoint_pair(H) is None


def _drop_supersets(edges) -> tuple[int, ...]:
    uniq = sorted(set(edges), key=lambda e: (popcount(e), e))
    kept: list[int] = []
    for e in uniq:
        if not any(f & e == f for f in kept):
            kept.append(e)
    return tuple(kept)


@lru_cache(maxsize=None)
def _min_hitting(edges: tuple[int, ...]) -> int:
    if not edges:
        return 0
    pivot = min(edges, key=popcount)
    best = popcount(pivot) + len(edges)  # loose upper bound
    for v in iter_bits(pivot):
        rest = _drop_supersets(e for e in edges if not e >> v & 1)
        best = min(best, 1 + _min_hitting(rest))
        if best == 1:
            break
    return best


def cover_number(H: Hypergraph, *, force: bool = False) -> int:
    """Minimum number of vertices meeting every edge (exact branch and bound)."""
    if H.m < 1:
        raise DomainError("cover number needs at least one edge")
    if H.r > COVER_VERTEX_GUARD and H.m > COVER_EDGE_GUARD and not force:
        raise FeasibilityError(
            f"exact cover number guard exceeded (r={H.r} > {COVER_VERTEX_GUARD} and |E|={H.m} > {COVER_EDGE_GUARD})")
    edges = _drop_supersets(H.edges)
    try:
        return _min_hitting(edges)
    finally:
        _min_hitting.cache_clear()


def min_edges_in_subsets(H: Hypergraph, m: int, *, force: bool = False,
                         guard: int = SUBSET_GUARD) -> tuple[int, tuple[int, ...]]:
    """Fewest edges (with multiplicity) inside any m-subset of vertices, and
    the lexicographically first subset attaining it.
    """
    if not 0 <= m <= H.r:
        raise DomainError(f"need 0 <= m <= r, got m={m}, r={H.r}")
    if comb(H.r, m) > guard and not force:
        raise FeasibilityError(f"C({H.r},{m}) = {comb(H.r, m)} subsets exceeds guard {guard}")
    best_t, best_w = None, ()
    for combo in combinations(range(H.r), m):
        w = to_mask(combo)
        t = sum(1 for e in H.edges if e & w == e)
        if best_t is None or t < best_t:
            best_t, best_w = t, combo
            if t == 0:
                break
    return best_t, best_w


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniformSample:
    hypergraph: Hypergraph
    s: int
    seed: int
    intersecting: bool
    cover_exceeds_s: bool

    @property
    def success(self) -> bool:
        return self.intersecting and self.cover_exceeds_s

    def log_entry(self) -> dict:
        return {
            "sampler": "uniform", "seed": self.seed, "r": self.hypergraph.r, "s": self.s,
            "u": self.hypergraph.uniformity(), "m": self.hypergraph.m,
            "intersecting": self.intersecting, "cover_exceeds_s": self.cover_exceeds_s,
            "success": self.success,
        }


def default_edge_count(r: int, u: int) -> int:
    return math.floor(math.exp(u * u / (2 * r)))


def uniform_intersecting_sample(r: int, s: int, seed: int, *, u: int | None = None,
                                m: int | None = None) -> UniformSample:
    """m independent uniform u-subsets of 0..r-1, then both checks.

    Success means intersecting and every (r-s)-subset contains an edge, i.e.
    cover number > s. Defaults: u = 8s, m = floor(e^{u^2/(2r)}).
    """
    u = 8 * s if u is None else u
    if not 1 <= u <= r:
        raise DomainError(f"uniformity u={u} must lie in 1..r={r}")
    m = default_edge_count(r, u) if m is None else m
    if m < 1:
        raise DomainError("need at least one edge")
    rng = make_rng(seed)
    edges = tuple(to_mask(rng.choice(r, size=u, replace=False).tolist()) for _ in range(m))
    H = Hypergraph(r, edges)
    return UniformSample(H, s, seed, is_intersecting(H), cover_number(H) > s)


def exclusion_sample(r: int, x: int, seed: int, *, guard: int = SUBSET_GUARD) -> Hypergraph:
    """Keep each fired x-set X only if no x-set disjoint from X also fired.

    Every x-subset fires independently with probability 1/C(r-x, x). The
    result is intersecting for every outcome.
    """
    if x < 1 or r - x < x:
        raise DomainError(f"need 1 <= x <= r - x, got r={r}, x={x}")
    if r == 2 * x:
        raise DomainError(f"r = 2x gives firing probability 1/C({x},{x}) = 1, so nothing survives")
    total = comb(r, x)
    if total > guard:
        raise FeasibilityError(f"C({r},{x}) = {total} x-sets exceeds guard {guard}")
    p = 1 / comb(r - x, x)
    rng = make_rng(seed)
    fired_idx = np.flatnonzero(rng.random(total) < p)
    all_sets = _x_sets(r, x)
    fired = all_sets[fired_idx]
    if fired.size == 0:
        return Hypergraph(r, ())
    clash = (fired[:, None] & fired[None, :]) == 0
    keep = ~clash.any(axis=1)
    return Hypergraph(r, tuple(int(e) for e in fired[keep]))


@lru_cache(maxsize=16)
def _x_sets(r: int, x: int) -> np.ndarray:
    return np.array([to_mask(c) for c in combinations(range(r), x)], dtype=np.int64)


def exclusion_edge_probability(r: int, x: int) -> Fraction:
    """Exact P(X is kept) = p (1-p)^{C(r-x, x)} with p = 1/C(r-x, x)."""
    q = comb(r - x, x)
    p = Fraction(1, q)
    return p * (1 - p) ** q


def exclusion_expected_edges(r: int, x: int, within: int | None = None) -> Fraction:
    """Exact expected number of kept edges, overall or inside a set of size ``within``."""
    size = r if within is None else within
    return comb(size, x) * exclusion_edge_probability(r, x)


def double_count_lower_bound(r: int, s: int, u: int) -> Fraction:
    """Edges needed by a u-uniform H whose every (r-s)-set contains an edge: C(r,s)/C(r-u,s)."""
    if not (1 <= u and 0 <= s and u <= r - s):
        raise DomainError(f"need 1 <= u <= r - s, got r={r}, s={s}, u={u}")
    return Fraction(comb(r, s), comb(r - u, s))
