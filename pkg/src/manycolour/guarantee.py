"""Constructive lower bounds: given any colouring, find a witness meeting the bound.

Where a bound comes from an averaging argument ("a random choice does this well
in expectation"), the algorithms take the best choice instead, which is at least
the average.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .core import (
    ColourSet,
    DomainError,
    EdgeColouring,
    GuaranteeReport,
    ceil_fraction,
    iter_bits,
    lex_key,
    popcount,
    to_mask,
)
from .evaluate import (
    DEFAULT_SEARCH_BUDGET,
    colour_subsets,
    component_mask,
    graph_is_k_connected,
    is_k_connected,
    largest_k_connected,
    touched_mask,
)

EXACT_SUBSET_GUARD = 10**6


class GuaranteeError(DomainError):
    """An algorithm could not produce a verifiable witness."""


# ---------------------------------------------------------------------------
# bounds as exact rationals
# ---------------------------------------------------------------------------

def lower_g_bound(n: int, r: int, s: int, d: int) -> Fraction:
    """min{1 + s(n-1)/d, (1 - C(r-d-1, s)/C(r, s)) n}."""
    return min(1 + Fraction(s * (n - 1), d),
               (1 - Fraction(comb(r - d - 1, s), comb(r, s))) * n)


def valid_d_values(r: int, s: int) -> range:
    return range(s, r - s)


def augment_bound(n: int, r: int, s: int) -> Fraction:
    """n - n * prod_{i=1..s} (1 - i/(r-i+1))."""
    prod = Fraction(1)
    for i in range(1, s + 1):
        prod *= 1 - Fraction(i, r - i + 1)
    return n - n * prod


def contraction_bound(n: int, r: int, s: int) -> Fraction:
    return Fraction(2**s * n, 4 * r)


def contraction_theorem_applies(r: int, s: int) -> bool:
    """s <= loglog r - log(4 + 3 loglog r), all logs base 2."""
    if r <= 2:
        return False
    ll = math.log2(math.log2(r))
    return ll > 0 and s <= ll - math.log2(4 + 3 * ll)


# ---------------------------------------------------------------------------
# touching many vertices with s colours
# ---------------------------------------------------------------------------

def _greedy_cover(c: EdgeColouring, s: int) -> int:
    chosen = 0
    for _ in range(s):
        best_col, best_size = -1, -1
        for col in range(c.r):
            if chosen >> col & 1:
                continue
            size = popcount(touched_mask(c, chosen | 1 << col))
            if size > best_size:
                best_col, best_size = col, size
        chosen |= 1 << best_col
    improved = True
    while improved:
        improved = False
        current = popcount(touched_mask(c, chosen))
        for out in iter_bits(chosen):
            for into in range(c.r):
                if chosen >> into & 1:
                    continue
                cand = chosen & ~(1 << out) | 1 << into
                if popcount(touched_mask(c, cand)) > current:
                    chosen, improved = cand, True
                    break
            if improved:
                break
    return chosen


def _max_cover(c: EdgeColouring, s: int) -> int:
    best_bits, best_size = 0, -1
    for bits in colour_subsets(c.r, s, force=True):
        size = popcount(touched_mask(c, bits))
        if size > best_size:
            best_bits, best_size = bits, size
    return best_bits


def best_colour_set_d(c: EdgeColouring, s: int, d: int, *,
                      exact_guard: int = EXACT_SUBSET_GUARD) -> GuaranteeReport:
    """s colours touching at least min{1 + s(n-1)/d, (1 - C(r-d-1,s)/C(r,s)) n} vertices.

    If some vertex sees at most d colours, its s most frequent colours already
    reach 1 + s(n-1)/d vertices through its own star. Otherwise every vertex
    sees at least d+1 colours and the best s-set touches at least the average.
    """
    n, r = c.n, c.r
    if not 1 <= s <= d < r - s:
        raise DomainError(f"need 1 <= s <= d < r - s, got s={s}, d={d}, r={r}")
    if n < 2:
        raise DomainError("need n >= 2")
    bound = lower_g_bound(n, r, s, d)
    seen = c.vertex_colour_masks
    for v in range(n):
        if popcount(seen[v]) > d:
            continue
        counts = [0] * r
        for u in range(n):
            if u != v:
                counts[c.colour(u, v)] += 1
        top = sorted(range(r), key=lambda col: (-counts[col], col))[:s]
        bits = to_mask(top)
        witness = [v] + [u for u in range(n) if u != v and bits >> c.colour(u, v) & 1]
        return GuaranteeReport(ColourSet(r, bits), tuple(witness), bound, 0,
                               note=f"vertex {v} sees at most {d} colours")

    if comb(r, s) <= exact_guard:
        bits, note = _max_cover(c, s), "exact maximum over colour sets"
    else:
        bits, note = _greedy_cover(c, s), "greedy with single swaps"
        if popcount(touched_mask(c, bits)) < ceil_fraction(bound):
            bits, note = _max_cover(c, s), "greedy fell short; exact maximum"
    return GuaranteeReport(ColourSet(r, bits), tuple(iter_bits(touched_mask(c, bits))),
                           bound, 0, note=note)


# ---------------------------------------------------------------------------
# growing a component one colour at a time
# ---------------------------------------------------------------------------

def _colours_to(c: EdgeColouring, u: int, S: int) -> int:
    bits = 0
    for w in iter_bits(S):
        bits |= 1 << c.colour(u, w)
    return bits


def _grow(c: EdgeColouring, C: int, S: int, target: int) -> tuple[int, int]:
    """Add best colours until |C| = target; S stays the component of its vertices."""
    root = (S & -S).bit_length() - 1
    while popcount(C) < target:
        best_col, best = -1, 0
        for col in range(c.r):
            if C >> col & 1:
                continue
            comp = component_mask(c.union_adjacency(C | 1 << col), root)
            if popcount(comp) > popcount(best):
                best_col, best = col, comp
        C |= 1 << best_col
        S = best
    return C, S


def greedy_augment(c: EdgeColouring, s: int) -> GuaranteeReport:
    """A component in s colours of size at least n - n prod_{i<=s}(1 - i/(r-i+1)).

    Invariant before adding the i-th colour: S is a whole component of the
    union of the i-1 chosen colours and every vertex outside S sends at least
    i colours to S. A vertex sending fewer lets its star replace the current
    colours with a strictly larger component, so the repair loop terminates.
    Under the invariant the best new colour reaches at least a fraction
    i/(r-i+1) of the outside vertices.
    """
    n, r = c.n, c.r
    if not 1 <= s <= r // 2:
        raise DomainError(f"need 1 <= s <= r/2, got s={s}, r={r}")
    best_v, best_col, S = 0, 0, 0
    for v in range(n):
        counts = Counter(c.colour(u, v) for u in range(n) if u != v)
        col = min(counts, key=lambda x: (-counts[x], x)) if counts else 0
        comp = component_mask(c.adjacency[col], v)
        if popcount(comp) > popcount(S):
            best_v, best_col, S = v, col, comp
    C = 1 << best_col
    trace = [popcount(S)]
    everyone = (1 << n) - 1
    for i in range(2, s + 1):
        while True:
            weak = next((u for u in iter_bits(everyone & ~S)
                         if popcount(_colours_to(c, u, S)) <= i - 1), None)
            if weak is None:
                break
            C = _colours_to(c, weak, S)
            S = component_mask(c.union_adjacency(C), weak)
            C, S = _grow(c, C, S, i - 1)
            trace.append(popcount(S))
        C, S = _grow(c, C, S, i)
        trace.append(popcount(S))
    if not is_k_connected(c, C, S, 1):
        raise GuaranteeError("greedy witness is not connected in its colours")
    return GuaranteeReport(ColourSet(r, C), tuple(iter_bits(S)), augment_bound(n, r, s), 1,
                           note=f"started at vertex {best_v} in colour {best_col}",
                           trace=tuple(trace))


# ---------------------------------------------------------------------------
# many disjoint k-connected pieces in one colour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Extraction:
    """Pieces peeled from a dense graph.

    ``sets`` is the size class ``j`` whose count certifies the bound
    ``ceil(r / (4^j log2 r))``; ``extracted`` lists every piece in peeling order.
    """

    j: int | None
    sets: tuple[tuple[int, ...], ...]
    extracted: tuple[tuple[int, ...], ...]
    certified: bool
    exact: bool


def _edge_count(adj: Sequence[int]) -> int:
    return sum(popcount(a) for a in adj) // 2


def extract_disjoint_kconnected(adj: Sequence[int], r: int, k: int, *,
                                budget: int = DEFAULT_SEARCH_BUDGET) -> Extraction:
    """Greedily peel largest k-connected subgraphs of more than n/(2r)+1
    vertices, then bucket them by dyadic size class [2^{j-1}, 2^j] * n/(4r).

    Requires at least C(n,2)/r edges. Each peel is an exact search; ``exact``
    turns False only if a search hit its node budget.
    """
    n = len(adj)
    if r < 2 or k < 1:
        raise DomainError(f"need r >= 2 and k >= 1, got r={r}, k={k}")
    if 2 * r * _edge_count(adj) < n * (n - 1):
        raise DomainError(f"graph has {_edge_count(adj)} edges, fewer than C({n},2)/{r}")
    remaining = (1 << n) - 1
    pieces: list[int] = []
    exact = True
    while remaining:
        mask, ok = largest_k_connected(adj, remaining, k, budget)
        exact = exact and ok
        if 2 * r * popcount(mask) <= n + 2 * r:
            break
        pieces.append(mask)
        remaining &= ~mask

    log_r = math.log2(r)
    best_j, best_sets, best_total = None, [], -1
    j_max = max(2, math.ceil(math.log2(4 * r)) + 1)
    for j in range(2, j_max + 1):
        members = [p for p in pieces if 2 ** (j - 1) * n <= 4 * r * popcount(p) <= 2**j * n]
        need = math.ceil(r / (4**j * log_r))
        total = sum(popcount(p) for p in members)
        if members and len(members) >= need and total > best_total:
            best_j, best_sets, best_total = j, members, total
    return Extraction(
        best_j,
        tuple(lex_key(p) for p in best_sets),
        tuple(lex_key(p) for p in pieces),
        best_j is not None,
        exact,
    )


def monochromatic_matching(c: EdgeColouring, A: Sequence[int], B: Sequence[int],
                           k: int) -> tuple[int, list[tuple[int, int]]]:
    """Pair sorted A with sorted B by rank; some colour occurs on at least k pairs."""
    A, B = sorted(A), sorted(B)
    if set(A) & set(B):
        raise DomainError("A and B must be disjoint")
    if len(A) != len(B):
        raise DomainError(f"|A| = {len(A)} differs from |B| = {len(B)}")
    if len(A) <= c.r * (k - 1) or not A:
        raise DomainError(f"need |A| = |B| > r(k-1) = {c.r * (k - 1)}, got {len(A)}")
    matched = list(zip(A, B))
    counts = Counter(c.colour(a, b) for a, b in matched)
    colour = min(counts, key=lambda x: (-counts[x], x))
    return colour, [(a, b) for a, b in matched if c.colour(a, b) == colour][:k]


def _most_common(colours) -> int | None:
    counts = Counter(x for x in colours if x is not None)
    if not counts:
        return None
    return min(counts, key=lambda x: (-counts[x], x))


def iterated_contraction(c: EdgeColouring, s: int, k: int = 1, *,
                         budget: int = DEFAULT_SEARCH_BUDGET) -> GuaranteeReport:
    """A k-connected subgraph in at most s colours via repeated contraction.

    Round 1 peels k-connected pieces from the majority colour; pieces become
    super-vertices, and each pair of pieces keeps one colour that carries a
    k-edge matching between them. Later rounds peel connected pieces (k = 1)
    of the majority colour among super-vertices and merge them. The witness is
    the largest expanded piece seen, or the largest k-connected subgraph of a
    single colour if that is bigger.

    ``claimed_bound`` is 2^{s-2} n / r when the theorem's range applies, or
    when k = 1 and s <= 2 (the first round alone already gives n/r);
    otherwise it is None.
    """
    n, r = c.n, c.r
    if s < 1 or k < 1:
        raise DomainError(f"need s >= 1 and k >= 1, got s={s}, k={k}")
    if r < 2:
        raise DomainError("need r >= 2")
    everyone = (1 << n) - 1
    notes: list[str] = []
    certified = True

    candidates: list[tuple[int, int]] = []  # (vertex mask, colour bits)
    for col in range(r):
        mask, ok = largest_k_connected(c.adjacency[col], everyone, k, budget)
        certified = certified and ok
        if mask:
            candidates.append((mask, 1 << col))

    sizes = c.class_sizes()
    c1 = min(range(r), key=lambda x: (-sizes[x], x))
    first = extract_disjoint_kconnected(c.adjacency[c1], r, k, budget=budget)
    if not first.certified:
        certified = False
        notes.append("round 1 size classes did not certify")
    if not first.exact:
        certified = False
        notes.append("round 1 search budget exhausted")
    group_sets = first.sets if first.sets else first.extracted
    groups = [to_mask(g) for g in group_sets]
    used = [c1]

    L = len(groups)
    base_col: dict[tuple[int, int], int | None] = {}
    for a in range(L):
        for b in range(a + 1, L):
            U, V = lex_key(groups[a]), lex_key(groups[b])
            size = min(len(U), len(V))
            if size > r * (k - 1):
                base_col[a, b] = monochromatic_matching(c, U[:size], V[:size], k)[0]
            else:
                base_col[a, b] = None
    if any(v is None for v in base_col.values()):
        certified = False
        notes.append("some piece pairs too small for a k-matching")

    def pair_colour(X: int, Y: int) -> int | None:
        return _most_common(base_col[min(a, b), max(a, b)]
                            for a in iter_bits(X) for b in iter_bits(Y))

    current = [1 << a for a in range(L)]
    rounds = 1
    for _ in range(2, s + 1):
        N = len(current)
        if N < 2:
            break
        sup = {(x, y): pair_colour(current[x], current[y]) for x in range(N) for y in range(x + 1, N)}
        ci = _most_common(sup.values())
        if ci is None:
            break
        sadj = [0] * N
        for (x, y), col in sup.items():
            if col == ci:
                sadj[x] |= 1 << y
                sadj[y] |= 1 << x
        if 2 * r * _edge_count(sadj) < N * (N - 1):
            certified = False
            notes.append(f"round {rounds + 1} majority colour too sparse")
            break
        ext = extract_disjoint_kconnected(sadj, r, 1)
        if not ext.extracted:
            break
        used.append(ci)
        rounds += 1
        colour_bits = to_mask(used)
        for piece in ext.extracted:
            level1 = 0
            for x in piece:
                level1 |= current[x]
            candidates.append((sum(groups[a] for a in iter_bits(level1)), colour_bits))
        chosen = ext.sets if ext.sets else ext.extracted
        current = [sum(current[x] for x in piece) for piece in chosen]

    if not candidates:
        raise GuaranteeError(f"no {k}-connected subgraph in any single colour")
    witness, bits = max(candidates, key=lambda wb: popcount(wb[0]))
    if not is_k_connected(c, bits, witness, k):
        raise GuaranteeError("witness failed k-connectivity verification")

    in_range = contraction_theorem_applies(r, s) and n > 16 * r * r * (k - 1) + 1
    if in_range or (k == 1 and s <= 2):
        bound = contraction_bound(n, r, s)
    else:
        bound = None
        notes.append("outside theorem range")
    return GuaranteeReport(ColourSet(r, bits), tuple(iter_bits(witness)), bound, k,
                           certified=certified, note="; ".join(notes),
                           trace=(rounds,))
