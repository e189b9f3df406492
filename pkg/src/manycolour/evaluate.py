"""Exact scoring of a colouring under colour subsets.

The two headline scores are ``val_f`` (largest component of the union graph of
some s colours) and ``val_g`` (most vertices touched by some s colours).
``val_f_k`` generalizes ``val_f`` to k-connected witnesses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

from .core import (
    ColourSet,
    DomainError,
    EdgeColouring,
    FeasibilityError,
    iter_bits,
    lex_key,
    pairs,
    popcount,
    to_mask,
)

SUBSET_GUARD = 10**8
DEFAULT_SEARCH_BUDGET = 200_000


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class ComponentDecomposition:
    """Component label per vertex; labels are numbered by smallest member."""

    labels: tuple[int, ...]

    @property
    def sizes(self) -> list[int]:
        counts = [0] * (max(self.labels) + 1 if self.labels else 0)
        for lab in self.labels:
            counts[lab] += 1
        return counts

    def components(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.sizes]
        for v, lab in enumerate(self.labels):
            out[lab].append(v)
        return out


@dataclass(frozen=True)
class EvalResult:
    value: int
    colours: ColourSet
    witness: tuple[int, ...]
    exact: bool = True


def _colour_bits(c: EdgeColouring, S) -> int:
    if isinstance(S, ColourSet):
        bits = S.bits
    elif isinstance(S, int):
        bits = S
    else:
        bits = to_mask(S)
    if bits < 0 or bits >> c.r:
        raise DomainError(f"colour set must lie within 0..{c.r - 1}")
    return bits


def _vertex_bits(W) -> int:
    return W if isinstance(W, int) else to_mask(W)


# ---------------------------------------------------------------------------
# components and touched sets
# ---------------------------------------------------------------------------

def union_graph_components(c: EdgeColouring, S) -> ComponentDecomposition:
    """Components of the graph whose edges are the pairs coloured in S."""
    bits = _colour_bits(c, S)
    uf = UnionFind(c.n)
    for (u, v), col in zip(pairs(c.n), c.colours):
        if bits >> col & 1:
            uf.union(u, v)
    relabel: dict[int, int] = {}
    labels = []
    for v in range(c.n):
        root = uf.find(v)
        labels.append(relabel.setdefault(root, len(relabel)))
    return ComponentDecomposition(tuple(labels))


def touched_mask(c: EdgeColouring, colour_bits: int) -> int:
    masks = c.vertex_colour_masks
    out = 0
    for v in range(c.n):
        if masks[v] & colour_bits:
            out |= 1 << v
    return out


def touched_vertices(c: EdgeColouring, S) -> frozenset[int]:
    """Vertices incident to at least one edge whose colour is in S."""
    return frozenset(iter_bits(touched_mask(c, _colour_bits(c, S))))


def component_mask(adj: Sequence[int], start: int, within: int = -1) -> int:
    """Bitset of the component containing ``start`` in adj restricted to ``within``."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def component_masks(adj: Sequence[int], within: int) -> list[int]:
    out = []
    rest = within
    while rest:
        v = (rest & -rest).bit_length() - 1
        comp = component_mask(adj, v, within)
        out.append(comp)
        rest &= ~comp
    return out


def largest_component(adj: Sequence[int], within: int) -> int:
    """Largest component; ties go to the lexicographically smallest vertex set."""
    best = 0
    for comp in component_masks(adj, within):
        # components come out in order of smallest member, so the first of a
        # given size is also the lexicographically smallest
        if popcount(comp) > popcount(best):
            best = comp
    return best


# ---------------------------------------------------------------------------
# vertex connectivity
# ---------------------------------------------------------------------------

class _UnitFlow:
    """Split-vertex network for local vertex connectivity inside a vertex set."""

    def __init__(self, verts: list[int], adj: Sequence[int], within: int, k: int):
        self.verts = verts
        index = {v: i for i, v in enumerate(verts)}
        size = 2 * len(verts)
        self.graph: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []
        for i, v in enumerate(verts):
            self._arc(2 * i, 2 * i + 1, 1)
            for w in iter_bits(adj[v] & within):
                j = index[w]
                if i < j:
                    self._arc(2 * i + 1, 2 * j, k)
                    self._arc(2 * j + 1, 2 * i, k)
        self.base_cap = list(self.cap)

    def _arc(self, a: int, b: int, c: int) -> None:
        self.graph[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(c)
        self.graph[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def _bfs(self, source: int, sink: int):
        prev = {source: -1}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for arc in self.graph[x]:
                if self.cap[arc] > 0:
                    y = self.to[arc]
                    if y not in prev:
                        prev[y] = arc
                        if y == sink:
                            return prev
                        queue.append(y)
        return prev

    def separator(self, s: int, t: int, k: int) -> int | None:
        """A vertex cut (global bitset) of size < k between s and t, or None."""
        self.cap = list(self.base_cap)
        source, sink = 2 * s + 1, 2 * t
        flow = 0
        while flow < k:
            prev = self._bfs(source, sink)
            if sink not in prev:
                cut = 0
                for i, v in enumerate(self.verts):
                    if 2 * i in prev and 2 * i + 1 not in prev:
                        cut |= 1 << v
                return cut
            y = sink
            while y != source:
                arc = prev[y]
                self.cap[arc] -= 1
                self.cap[arc ^ 1] += 1
                y = self.to[arc ^ 1]
            flow += 1
        return None


def min_vertex_cut(adj: Sequence[int], within: int, k: int) -> int | None:
    """A separating vertex set of size < k in G[within], or None if none exists.

    Assumes |within| > k. Uses the sources v_1..v_k scheme: a cut X with |X| < k
    misses one of the first k vertices, and that vertex is separated from a
    later non-neighbour.
    """
    verts = list(iter_bits(within))
    for v in verts:
        nbrs = adj[v] & within
        if popcount(nbrs) < k:
            return nbrs
    if k == 1:
        comp = component_mask(adj, verts[0], within)
        return None if comp == within else 0
    net = _UnitFlow(verts, adj, within, k)
    for i in range(min(k, len(verts))):
        vi = verts[i]
        for j in range(i + 1, len(verts)):
            if adj[vi] >> verts[j] & 1:
                continue
            cut = net.separator(i, j, k)
            if cut is not None:
                return cut
    return None


def graph_is_k_connected(adj: Sequence[int], within: int, k: int) -> bool:
    size = popcount(within)
    if k <= 0:
        return size > 0 and all(adj[v] & within for v in iter_bits(within))
    if k == 1:
        return size > 0 and component_mask(adj, (within & -within).bit_length() - 1, within) == within
    if size <= k:
        return False
    return min_vertex_cut(adj, within, k) is None


def is_k_connected(c: EdgeColouring, S, W: Iterable[int] | int, k: int) -> bool:
    """Whether the union graph of S induced on W is k-connected.

    k = 0 means W is nonempty with no isolated vertex; k = 1 means connected
    (a single vertex counts); k >= 2 requires |W| > k and no cut below k.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    within = _vertex_bits(W)
    if within >> c.n:
        raise DomainError("vertex subset outside 0..n-1")
    return graph_is_k_connected(c.union_adjacency(_colour_bits(c, S)), within, k)


def k_core(adj: Sequence[int], within: int, k: int) -> int:
    changed = True
    while changed:
        changed = False
        for v in iter_bits(within):
            if popcount(adj[v] & within) < k:
                within &= ~(1 << v)
                changed = True
    return within


def _better(cand: int, best: int) -> bool:
    pc, pb = popcount(cand), popcount(best)
    return pc > pb or (pc == pb and cand != best and lex_key(cand) < lex_key(best))


def largest_k_connected(adj: Sequence[int], within: int, k: int,
                        budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[int, bool]:
    """Largest vertex set inducing a k-connected subgraph of G[within].

    Returns ``(mask, exact)``. For k >= 2 this branches on small vertex cuts:
    any k-connected subgraph avoids being split by a cut X of size < k, so it
    lies inside X plus one component of G - X. ``exact`` is False only when
    ``budget`` search nodes were exhausted; the returned set is still verified
    k-connected.
    """
    if k <= 0:
        return sum(1 << v for v in iter_bits(within) if adj[v] & within), True
    if k == 1:
        return largest_component(adj, within), True

    best = 0
    seen: set[int] = set()
    stack = [within]
    nodes = 0
    while stack:
        W = k_core(adj, stack.pop(), k)
        if W in seen or popcount(W) <= k or popcount(W) < popcount(best):
            continue
        seen.add(W)
        nodes += 1
        if nodes > budget:
            return best, False
        cut = min_vertex_cut(adj, W, k)
        if cut is None:
            if _better(W, best):
                best = W
            continue
        for comp in component_masks(adj, W & ~cut):
            stack.append(comp | cut)
    return best, True


# ---------------------------------------------------------------------------
# max over colour subsets
# ---------------------------------------------------------------------------

def colour_subsets(r: int, s: int, *, force: bool = False,
                   guard: int = SUBSET_GUARD) -> Iterator[int]:
    """All s-subsets of 0..r-1 as bitsets, in lexicographic order."""
    if not 1 <= s <= r:
        raise DomainError(f"need 1 <= s <= r, got s={s}, r={r}")
    if comb(r, s) > guard and not force:
        raise FeasibilityError(f"C({r},{s}) = {comb(r, s)} subsets exceeds guard {guard}")
    for combo in combinations(range(r), s):
        yield to_mask(combo)


def best_f(c: EdgeColouring, s: int, k: int = 1, *, force: bool = False,
           budget: int = DEFAULT_SEARCH_BUDGET) -> EvalResult:
    """Best s-colour set for the largest k-connected union-graph subgraph."""
    if k == 0:
        return best_g(c, s, force=force)
    everyone = (1 << c.n) - 1
    best = EvalResult(0, ColourSet(c.r), (), True)
    best_mask = -1
    exact = True
    for bits in colour_subsets(c.r, s, force=force):
        adj = c.union_adjacency(bits)
        mask, ok = largest_k_connected(adj, everyone, k, budget)
        exact = exact and ok
        if best_mask < 0 or popcount(mask) > popcount(best_mask):
            best_mask = mask
            best = EvalResult(popcount(mask), ColourSet(c.r, bits), lex_key(mask))
    return EvalResult(best.value, best.colours, best.witness, exact)


def best_g(c: EdgeColouring, s: int, *, force: bool = False) -> EvalResult:
    best = None
    for bits in colour_subsets(c.r, s, force=force):
        mask = touched_mask(c, bits)
        if best is None or popcount(mask) > best.value:
            best = EvalResult(popcount(mask), ColourSet(c.r, bits), lex_key(mask))
    return best


def val_f(c: EdgeColouring, s: int, **kw) -> int:
    return best_f(c, s, 1, **kw).value


def val_f_k(c: EdgeColouring, s: int, k: int, **kw) -> int:
    return best_f(c, s, k, **kw).value


def val_g(c: EdgeColouring, s: int, **kw) -> int:
    return best_g(c, s, **kw).value
