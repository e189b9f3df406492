"""Exact f(n,r,s) and g(n,r,s) by exhaustive search over colourings.

Colourings are enumerated in restricted-growth form: the first edge gets
colour 0 and every later edge uses a colour at most one above the largest
used so far. Every colour-permutation orbit has exactly one such member, and
both values are invariant under colour permutations.

The search is depth-first over edges in pair-rank order. Adding edges only
merges components and touches more vertices, so the value of a partial
colouring is a lower bound for every completion; a branch is cut as soon as
that bound reaches the incumbent.
"""

from __future__ import annotations

import csv
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .core import DomainError, EdgeColouring, ExactRecord, FeasibilityError, pairs
from .evaluate import val_f, val_g

ENUMERATION_GUARD = 10**9


def _largest_component(adj: list[int], n: int) -> int:
    seen, best = 0, 0
    for v in range(n):
        if seen >> v & 1:
            continue
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= adj[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        best = max(best, bin(comp).count("1"))
    return best


@dataclass
class _Outcome:
    value: int | None
    colours: tuple[int, ...] | None
    below: int = 0  # leaves strictly below the threshold (counting mode)


class _Search:
    def __init__(self, n: int, r: int, s: int, kind: str, vertex_sym: bool):
        self.n, self.r, self.kind, self.vertex_sym = n, r, kind, vertex_sym
        self.edges = list(pairs(n))
        self.subsets = list(combinations(range(r), s))
        self.adj = [[0] * n for _ in range(r)]
        self.touched = [0] * r
        self.colours = [0] * len(self.edges)

    def _set(self, i: int, col: int) -> None:
        u, v = self.edges[i]
        self.colours[i] = col
        self.adj[col][u] |= 1 << v
        self.adj[col][v] |= 1 << u
        self.touched[col] |= 1 << u | 1 << v

    def _unset(self, i: int) -> None:
        u, v = self.edges[i]
        col = self.colours[i]
        self.adj[col][u] &= ~(1 << v)
        self.adj[col][v] &= ~(1 << u)
        t = 0
        for w in range(self.n):
            if self.adj[col][w]:
                t |= 1 << w
        self.touched[col] = t

    def value(self) -> int:
        best = 0
        if self.kind == "g":
            for S in self.subsets:
                t = 0
                for col in S:
                    t |= self.touched[col]
                best = max(best, bin(t).count("1"))
            return best
        n = self.n
        for S in self.subsets:
            union = [0] * n
            for col in S:
                a = self.adj[col]
                for v in range(n):
                    union[v] |= a[v]
            best = max(best, _largest_component(union, n))
            if best == n:
                break
        return best

    def choices(self, i: int, top: int) -> range:
        lo = 0
        if self.vertex_sym and 1 <= i < self.n - 1:
            # star at vertex 0 occupies pair ranks 0..n-2; keep it non-decreasing
            lo = self.colours[i - 1]
        return range(lo, min(top + 1, self.r - 1) + 1)

    def run(self, prefix=(), shared=None, threshold: int | None = None) -> _Outcome:
        """Minimize, or with ``threshold`` count leaves whose value is below it."""
        E = len(self.edges)
        top = -1
        for i, col in enumerate(prefix):
            if col not in self.choices(i, top):
                raise DomainError(f"prefix {prefix} is not in restricted-growth form")
            self._set(i, col)
            top = max(top, col)
        counting = threshold is not None
        out = _Outcome(None, None)
        best = [threshold if counting else self.n + 1]

        def rec(i: int, top: int, partial: int) -> None:
            if i == E:
                if counting:
                    out.below += 1
                else:
                    best[0] = partial
                    out.value, out.colours = partial, tuple(self.colours)
                    if shared is not None:
                        with shared.get_lock():
                            if partial < shared.value:
                                shared.value = partial
                return
            for col in self.choices(i, top):
                self._set(i, col)
                v = self.value()
                # a stale shared value is only ever too large; ties are kept so
                # every shard still finds its own first minimizer
                if v < best[0] and (shared is None or v <= shared.value):
                    rec(i + 1, max(top, col), v)
                self._unset(i)

        start = self.value()
        if start < best[0]:
            rec(len(prefix), top, start)
        return out


def _prefixes(search: _Search, depth: int) -> list[tuple[int, ...]]:
    """Restricted-growth colour prefixes of the first ``depth`` edges, in search order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], top: int) -> None:
        i = len(prefix)
        if i == depth:
            out.append(prefix)
            return
        for col in search.choices(i, top):
            search.colours[i] = col
            rec(prefix + (col,), max(top, col))

    rec((), -1)
    return out


_SHARED = None


def _init_worker(cell) -> None:
    global _SHARED
    _SHARED = cell


def _run_shard(args) -> _Outcome:
    n, r, s, kind, vertex_sym, prefix = args
    return _Search(n, r, s, kind, vertex_sym).run(prefix, shared=_SHARED)


def enumeration_size(n: int, r: int) -> int:
    """r^(C(n,2) - 1): colourings left once the first edge is fixed to colour 0."""
    E = n * (n - 1) // 2
    return r ** max(E - 1, 0)


def _check(n: int, r: int, s: int, kind: str, force: bool) -> None:
    if kind not in ("f", "g"):
        raise DomainError(f"kind must be 'f' or 'g', got {kind!r}")
    if n < 1 or r < 1 or not 1 <= s <= r:
        raise DomainError(f"need n >= 1, r >= 1 and 1 <= s <= r, got n={n}, r={r}, s={s}")
    size = enumeration_size(n, r)
    if size > ENUMERATION_GUARD and not force:
        raise FeasibilityError(f"{r}^{n * (n - 1) // 2 - 1} = {size} colourings exceeds guard {ENUMERATION_GUARD}")


def exact_value(n: int, r: int, s: int, kind: str, *, vertex_sym: bool = False,
                jobs: int = 1, force: bool = False) -> ExactRecord:
    """Minimum of val_kind over all r-colourings of K_n, with the first minimizer
    in enumeration order as witness (independent of ``jobs``).
    """
    _check(n, r, s, kind, force)
    if jobs <= 1:
        out = _Search(n, r, s, kind, vertex_sym).run()
    else:
        E = n * (n - 1) // 2
        depth = min(2, E)
        shards = _prefixes(_Search(n, r, s, kind, vertex_sym), depth)
        while len(shards) < 4 * jobs and depth < E:
            depth += 1
            shards = _prefixes(_Search(n, r, s, kind, vertex_sym), depth)
        cell = mp.Value("i", n + 1)
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(cell,)) as pool:
            results = list(pool.map(_run_shard, [(n, r, s, kind, vertex_sym, p) for p in shards]))
        found = [o for o in results if o.value is not None]
        out = min(found, key=lambda o: o.value)  # min keeps the earliest shard on ties
    return ExactRecord(n, r, s, kind, out.value, EdgeColouring(n, r, out.colours))


def verify_record(rec: ExactRecord, mode: str = "count") -> bool:
    """Re-evaluate the witness; in counting mode also re-enumerate to confirm
    that no colouring has a smaller value."""
    try:
        c = rec.extremal_colouring
        if (c.n, c.r) != (rec.n, rec.r):
            return False
        evaluator = val_f if rec.kind == "f" else val_g
        if evaluator(c, rec.s) != rec.value:
            return False
        if mode == "cheap":
            return True
        if mode != "count":
            raise DomainError(f"mode must be 'count' or 'cheap', got {mode!r}")
        _check(rec.n, rec.r, rec.s, rec.kind, False)
        return _Search(rec.n, rec.r, rec.s, rec.kind, False).run(threshold=rec.value).below == 0
    except DomainError:
        return False


def census(ns, rs, kinds=("f", "g"), *, out=None, vertex_sym: bool = False,
           jobs: int = 1) -> list[ExactRecord]:
    """Exact values for every (n, r, s <= r, kind); optionally written as CSV."""
    records = []
    for n in ns:
        for r in rs:
            for s in range(1, r + 1):
                for kind in kinds:
                    records.append(exact_value(n, r, s, kind, vertex_sym=vertex_sym, jobs=jobs))
    if out is not None:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "r", "s", "kind", "value"])
            for rec in records:
                w.writerow([rec.n, rec.r, rec.s, rec.kind, rec.value])
    return records
