"""Generators for the extremal (upper-bound) colourings and certificate hypergraphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    DomainError,
    EdgeColouring,
    Hypergraph,
    iter_bits,
    make_rng,
    part_sizes,
    to_mask,
)
from .evaluate import best_f
from .hypergraph import disjoint_pair


class NotIntersectingError(DomainError):
    def __init__(self, pair: tuple[int, int], H: Hypergraph):
        self.pair = pair
        a, b = (list(iter_bits(H.edges[i])) for i in pair)
        super().__init__(f"hypergraph is not intersecting: edges {pair[0]} {a} and {pair[1]} {b} are disjoint")


class RetryBudgetExceeded(DomainError):
    def __init__(self, message: str, best: EdgeColouring, best_value: int):
        super().__init__(message)
        self.best = best
        self.best_value = best_value


# ---------------------------------------------------------------------------
# blow-ups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlowupSpec:
    """Replace vertex i of ``base`` by a part of ``part_sizes[i]`` vertices.

    Cross-part edges copy the base colour; edges inside part i get
    ``internal_colours[i]``.
    """

    base: EdgeColouring
    n: int
    internal_colours: tuple[int, ...]

    @property
    def part_sizes(self) -> list[int]:
        return part_sizes(self.n, self.base.n)

    def part_of(self) -> list[int]:
        out = []
        for i, size in enumerate(self.part_sizes):
            out.extend([i] * size)
        return out

    def colouring(self) -> EdgeColouring:
        part = self.part_of()
        base = self.base

        def colour(u: int, v: int) -> int:
            a, b = part[u], part[v]
            return self.internal_colours[a] if a == b else base.colour(a, b)

        return EdgeColouring.from_function(self.n, base.r, colour)


def smallest_incident_colours(base: EdgeColouring) -> tuple[int, ...]:
    """For each base vertex, the smallest colour id on an edge at it."""
    out = []
    for mask in base.vertex_colour_masks:
        out.append((mask & -mask).bit_length() - 1 if mask else 0)
    return tuple(out)


def blow_up(base: EdgeColouring, n: int) -> EdgeColouring:
    if n < base.n:
        raise DomainError(f"blow-up target n={n} smaller than base size {base.n}")
    return BlowupSpec(base, n, smallest_incident_colours(base)).colouring()


# ---------------------------------------------------------------------------
# Z_2^d cube colouring
# ---------------------------------------------------------------------------

def cube_base(d: int) -> EdgeColouring:
    """K_{2^d} on Z_2^d, edge xy coloured by the nonzero vector x+y (id = vector - 1)."""
    if d < 1:
        raise DomainError("d must be at least 1")
    m = 2**d
    return EdgeColouring.from_function(m, m - 1, lambda x, y: (x ^ y) - 1)


def cube_colouring(d: int, n: int) -> EdgeColouring:
    """Blow-up of the cube colouring to n vertices using r = 2^d - 1 colours.

    For every s <= d, any s colours connect at most 2^s parts.
    """
    if d < 1:
        raise DomainError("d must be at least 1")
    if n < 2**d:
        raise DomainError(f"need n >= 2^d = {2**d}, got n={n}")
    return blow_up(cube_base(d), n)


# ---------------------------------------------------------------------------
# hypergraphs and the hypergraph colouring
# ---------------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def _projective_points(p: int) -> list[tuple[int, int, int]]:
    """Normalized homogeneous coordinates: first nonzero coordinate equals 1."""
    pts = [(1, y, z) for y in range(p) for z in range(p)]
    pts += [(0, 1, z) for z in range(p)]
    pts.append((0, 0, 1))
    return pts


def projective_plane_hypergraph(p: int) -> Hypergraph:
    """Points and lines of PG(2, p) for a prime p; vertices are points."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime (prime powers are not supported)")
    pts = _projective_points(p)
    edges = []
    for a, b, c in pts:  # the same normalized triples index the lines
        edges.append(to_mask(i for i, (x, y, z) in enumerate(pts) if (a * x + b * y + c * z) % p == 0))
    return Hypergraph(len(pts), tuple(edges))


def complete_uniform_hypergraph(r: int, u: int) -> Hypergraph:
    if not 1 <= u <= r:
        raise DomainError(f"need 1 <= u <= r, got u={u}, r={r}")
    return Hypergraph(r, tuple(to_mask(e) for e in combinations(range(r), u)))


def hypergraph_colouring(H: Hypergraph, n: int) -> EdgeColouring:
    """Colour K_n from an intersecting hypergraph on the colour set.

    Vertices are split into one part per edge of H; a pair with endpoints in
    the parts of e and e' (possibly e = e') gets the smallest colour in e & e'.
    """
    pair = disjoint_pair(H)
    if pair is not None:
        raise NotIntersectingError(pair, H)
    if n < H.m:
        raise DomainError(f"need n >= |E(H)| = {H.m}, got n={n}")
    part = []
    for i, size in enumerate(part_sizes(n, H.m)):
        part.extend([i] * size)
    edges = H.edges

    def colour(u: int, v: int) -> int:
        common = edges[part[u]] & edges[part[v]]
        return (common & -common).bit_length() - 1

    return EdgeColouring.from_function(n, H.r, colour)


def hypergraph_parts(H: Hypergraph, n: int) -> list[list[int]]:
    """Vertex parts A_e used by :func:`hypergraph_colouring`, in edge order."""
    out, start = [], 0
    for size in part_sizes(n, H.m):
        out.append(list(range(start, start + size)))
        start += size
    return out


def _one_indexed(r: int, words: list[str]) -> Hypergraph:
    return Hypergraph.from_sets(r, [[int(ch) - 1 for ch in w] for w in words])


def _fano_minus_vertex() -> Hypergraph:
    fano = projective_plane_hypergraph(2)
    drop = fano.r - 1
    return Hypergraph(fano.r - 1, tuple(e for e in fano.edges if not e >> drop & 1))


CATALOGUE = {
    # g(n,5,1) = 5n/9 when 9 | n
    "g519": lambda: _one_indexed(5, ["145", "145", "145", "234", "234", "235", "235", "12", "13"]),
    # g(n,6,1) = n/2 when 4 | n
    "fano_minus_vertex": _fano_minus_vertex,
    # g(n,6,2) = 4n/5 when 10 | n
    "g6210": lambda: _one_indexed(6, ["123", "124", "346", "345", "256", "135", "245", "236", "146", "156"]),
    # g(n,7,1) = 3n/7 and g(n,7,2) = 5n/7 when 7 | n
    "fano": lambda: projective_plane_hypergraph(2),
    "plane3": lambda: projective_plane_hypergraph(3),
    # g(n,5,2) = ceil(9n/10)
    "k5_3": lambda: complete_uniform_hypergraph(5, 3),
    # g(n,7,3) = ceil(34n/35)
    "k7_4": lambda: complete_uniform_hypergraph(7, 4),
}


def certificate_catalogue(name: str) -> Hypergraph:
    try:
        H = CATALOGUE[name]()
    except KeyError:
        raise DomainError(f"unknown catalogue entry {name!r}; known: {', '.join(CATALOGUE)}") from None
    pair = disjoint_pair(H)
    if pair is not None:
        raise NotIntersectingError(pair, H)
    return H


# ---------------------------------------------------------------------------
# random base colouring + blow-up
# ---------------------------------------------------------------------------

def random_colouring(n: int, r: int, rng: np.random.Generator) -> EdgeColouring:
    return EdgeColouring(n, r, tuple(rng.integers(0, r, size=n * (n - 1) // 2).tolist()))


def random_base_blowup(r: int, s: int, n: int, seed: int, *, max_draws: int = 1000) -> EdgeColouring:
    """Blow up a random r-colouring of K_m, m = floor(r/(6s)), in which no s
    colours connect ceil((s+1) log2 r) or more vertices.
    """
    if not 2 <= s <= r:
        raise DomainError(f"need 2 <= s <= r, got s={s}, r={r}")
    m = r // (6 * s)
    if m < 2:
        raise DomainError(f"base size m = floor(r/(6s)) = {m} < 2")
    if n < m:
        # n >= r/s only matters for the asymptotic form of the bound
        raise DomainError(f"need n >= m = {m} to blow up the base, got n={n}")
    threshold = math.ceil((s + 1) * math.log2(r))
    rng = make_rng(seed)
    best, best_value = None, None
    for _ in range(max_draws):
        base = random_colouring(m, r, rng)
        value = best_f(base, s).value
        if value < threshold:
            return blow_up(base, n)
        if best_value is None or value < best_value:
            best, best_value = base, value
    raise RetryBudgetExceeded(
        f"no base colouring with val_f < {threshold} in {max_draws} draws (best {best_value})",
        best, best_value)

