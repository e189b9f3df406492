"""Domain types for edge colourings of complete graphs, plus JSON certificates.

Colours are integer ids ``0..r-1``; vertices are ``0..n-1``. Vertex and colour
subsets are stored as Python ints used as bitsets.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np


class DomainError(ValueError):
    """A precondition, range or feasibility guard was violated."""


class FeasibilityError(DomainError):
    """An exhaustive computation would exceed its configured guard."""


class ParseError(ValueError):
    """Malformed certificate text; the message carries the location."""


# ---------------------------------------------------------------------------
# bitset helpers
# ---------------------------------------------------------------------------

def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key ordering vertex/colour sets lexicographically by sorted members."""
    return tuple(iter_bits(mask))


def pair_rank(n: int, u: int, v: int) -> int:
    """Index of the pair {u, v} in the dense upper-triangular layout."""
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def part_sizes(n: int, m: int) -> list[int]:
    """Near-equal split of n into m parts; the first ``n mod m`` get the ceiling."""
    q, rem = divmod(n, m)
    return [q + 1 if i < rem else q for i in range(m)]


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator: the same 64-bit seed gives the same stream everywhere."""
    return np.random.Generator(np.random.Philox(int(seed) % 2**64))


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeColouring:
    """An r-edge-colouring of K_n in pair-rank order."""

    n: int
    r: int
    colours: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1:
            raise DomainError(f"need n >= 1 and r >= 1, got n={self.n}, r={self.r}")
        if self.n >= 2**32 or self.r >= 2**32:
            raise DomainError("n and r must fit in 32 bits")
        cols = tuple(int(c) for c in self.colours)
        object.__setattr__(self, "colours", cols)
        expected = self.n * (self.n - 1) // 2
        if len(cols) != expected:
            raise DomainError(f"expected {expected} colour entries, got {len(cols)}")
        for i, c in enumerate(cols):
            if not 0 <= c < self.r:
                raise DomainError(f"colour id {c} at pair index {i} outside 0..{self.r - 1}")

    @classmethod
    def from_function(cls, n: int, r: int, fn) -> "EdgeColouring":
        """Build from ``fn(u, v)`` called once per pair u < v."""
        return cls(n, r, tuple(fn(u, v) for u, v in pairs(n)))

    @classmethod
    def monochromatic(cls, n: int, r: int = 1, colour: int = 0) -> "EdgeColouring":
        return cls(n, r, (colour,) * (n * (n - 1) // 2))

    def colour(self, u: int, v: int) -> int:
        if u == v:
            raise DomainError("no loop edges in K_n")
        return self.colours[pair_rank(self.n, u, v)]

    def pairs(self) -> Iterator[tuple[int, int]]:
        return pairs(self.n)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """``adjacency[c][v]`` is the bitset of neighbours of v in colour c."""
        adj = [[0] * self.n for _ in range(self.r)]
        for (u, v), c in zip(pairs(self.n), self.colours):
            adj[c][u] |= 1 << v
            adj[c][v] |= 1 << u
        return tuple(tuple(row) for row in adj)

    @cached_property
    def vertex_colour_masks(self) -> tuple[int, ...]:
        """Bitset of colours seen at each vertex."""
        masks = [0] * self.n
        for (u, v), c in zip(pairs(self.n), self.colours):
            masks[u] |= 1 << c
            masks[v] |= 1 << c
        return tuple(masks)

    def union_adjacency(self, colour_bits: int) -> list[int]:
        """Neighbour bitsets of the union graph of the given colours."""
        adj = [0] * self.n
        for c in iter_bits(colour_bits):
            row = self.adjacency[c]
            for v in range(self.n):
                adj[v] |= row[v]
        return adj

    def class_sizes(self) -> list[int]:
        sizes = [0] * self.r
        for c in self.colours:
            sizes[c] += 1
        return sizes


def pairs(n: int) -> Iterator[tuple[int, int]]:
    for u in range(n):
        for v in range(u + 1, n):
            yield u, v


@dataclass(frozen=True)
class ColourSet:
    """A set of colour ids drawn from ``0..r-1``."""

    r: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.r:
            raise DomainError(f"colour set {bin(self.bits)} not within 0..{self.r - 1}")

    @classmethod
    def of(cls, r: int, colours: Iterable[int]) -> "ColourSet":
        return cls(r, to_mask(colours))

    @property
    def size(self) -> int:
        return popcount(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, c: int) -> bool:
        return bool(self.bits >> c & 1)

    def members(self) -> list[int]:
        return list(self)


@dataclass(frozen=True)
class Hypergraph:
    """Multi-hypergraph on vertex set ``0..r-1``; edge order is significant."""

    r: int
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        edges = tuple(int(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.r < 1:
            raise DomainError("hypergraph needs at least one vertex")
        for i, e in enumerate(edges):
            if e <= 0:
                raise DomainError(f"edge {i} is empty")
            if e >> self.r:
                raise DomainError(f"edge {i} uses a vertex outside 0..{self.r - 1}")

    @classmethod
    def from_sets(cls, r: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(r, tuple(to_mask(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_sets(self) -> list[list[int]]:
        return [list(iter_bits(e)) for e in self.edges]

    def degrees(self) -> list[int]:
        deg = [0] * self.r
        for e in self.edges:
            for v in iter_bits(e):
                deg[v] += 1
        return deg

    def uniformity(self) -> int | None:
        sizes = {popcount(e) for e in self.edges}
        return sizes.pop() if len(sizes) == 1 else None


@dataclass(frozen=True)
class GuaranteeReport:
    """Witness produced by a constructive lower-bound algorithm.

    ``claimed_bound`` is ``None`` when the producing theorem does not apply to
    the parameters; ``certified`` is False when an internal step could not
    establish its own guarantee (``note`` says why).
    """

    colours: ColourSet
    witness_vertices: tuple[int, ...]
    claimed_bound: Fraction | None
    k: int
    certified: bool = True
    note: str = ""
    trace: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "witness_vertices", tuple(sorted(self.witness_vertices)))
        object.__setattr__(self, "trace", tuple(self.trace))
        if self.claimed_bound is not None:
            object.__setattr__(self, "claimed_bound", Fraction(self.claimed_bound))

    @property
    def achieved(self) -> int:
        return len(self.witness_vertices)

    @property
    def required(self) -> int | None:
        """Smallest integer witness size meeting the claimed bound."""
        return None if self.claimed_bound is None else ceil_fraction(self.claimed_bound)

    def meets_bound(self) -> bool:
        return self.claimed_bound is None or self.achieved >= self.required


@dataclass(frozen=True)
class ExactRecord:
    n: int
    r: int
    s: int
    kind: str
    value: int
    extremal_colouring: EdgeColouring

    def __post_init__(self) -> None:
        if self.kind not in ("f", "g"):
            raise DomainError(f"kind must be 'f' or 'g', got {self.kind!r}")


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def canonical_colour_form(c: EdgeColouring) -> EdgeColouring:
    """Relabel colours by first appearance scanning pairs in rank order."""
    relabel: dict[int, int] = {}
    out = []
    for col in c.colours:
        if col not in relabel:
            relabel[col] = len(relabel)
        out.append(relabel[col])
    return EdgeColouring(c.n, c.r, tuple(out))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_REQUIRED = {
    "EdgeColouring": ("n", "r", "colours"),
    "Hypergraph": ("r", "edges"),
    "GuaranteeReport": ("colours", "witness_vertices", "claimed_bound", "achieved", "k"),
    "ExactRecord": ("n", "r", "s", "kind", "value", "extremal_colouring"),
}


def to_dict(obj) -> dict:
    if isinstance(obj, EdgeColouring):
        return {"n": obj.n, "r": obj.r, "colours": list(obj.colours)}
    if isinstance(obj, Hypergraph):
        return {"r": obj.r, "edges": obj.edge_sets()}
    if isinstance(obj, GuaranteeReport):
        bound = obj.claimed_bound
        return {
            "colours": {"r": obj.colours.r, "members": obj.colours.members()},
            "witness_vertices": list(obj.witness_vertices),
            "claimed_bound": None if bound is None
            else {"num": bound.numerator, "den": bound.denominator},
            "achieved": obj.achieved,
            "k": obj.k,
            "certified": obj.certified,
            "note": obj.note,
            "trace": list(obj.trace),
        }
    if isinstance(obj, ExactRecord):
        return {
            "n": obj.n, "r": obj.r, "s": obj.s, "kind": obj.kind, "value": obj.value,
            "extremal_colouring": to_dict(obj.extremal_colouring),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), separators=(",", ":"))


def _need(d: dict, key: str, kind: str):
    if not isinstance(d, dict):
        raise ParseError(f"{kind}: expected a JSON object")
    if key not in d:
        raise ParseError(f"{kind}: missing field '{key}'")
    return d[key]


def _int(value, key: str, kind: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{kind}: field '{key}' must be an integer, got {value!r}")
    return value


def _int_list(value, key: str, kind: str) -> list[int]:
    if not isinstance(value, list):
        raise ParseError(f"{kind}: field '{key}' must be a list")
    return [_int(v, f"{key}[{i}]", kind) for i, v in enumerate(value)]


def _build(kind: str, d: dict):
    try:
        if kind == "EdgeColouring":
            n = _int(_need(d, "n", kind), "n", kind)
            r = _int(_need(d, "r", kind), "r", kind)
            return EdgeColouring(n, r, tuple(_int_list(_need(d, "colours", kind), "colours", kind)))
        if kind == "Hypergraph":
            r = _int(_need(d, "r", kind), "r", kind)
            edges = _need(d, "edges", kind)
            if not isinstance(edges, list):
                raise ParseError(f"{kind}: field 'edges' must be a list")
            return Hypergraph.from_sets(
                r, [_int_list(e, f"edges[{i}]", kind) for i, e in enumerate(edges)])
        if kind == "GuaranteeReport":
            cs = _need(d, "colours", kind)
            colours = ColourSet.of(_int(_need(cs, "r", "colours"), "r", kind),
                                   _int_list(_need(cs, "members", "colours"), "members", kind))
            witness = _int_list(_need(d, "witness_vertices", kind), "witness_vertices", kind)
            raw = _need(d, "claimed_bound", kind)
            bound = None if raw is None else Fraction(
                _int(_need(raw, "num", "claimed_bound"), "num", kind),
                _int(_need(raw, "den", "claimed_bound"), "den", kind))
            achieved = _int(_need(d, "achieved", kind), "achieved", kind)
            if achieved != len(witness):
                raise ParseError(f"{kind}: field 'achieved'={achieved} but witness has {len(witness)} vertices")
            return GuaranteeReport(
                colours, tuple(witness), bound, _int(_need(d, "k", kind), "k", kind),
                certified=bool(d.get("certified", True)), note=str(d.get("note", "")),
                trace=tuple(_int_list(d.get("trace", []), "trace", kind)))
        if kind == "ExactRecord":
            return ExactRecord(
                *(_int(_need(d, key, kind), key, kind) for key in ("n", "r", "s")),
                kind=str(_need(d, "kind", kind)),
                value=_int(_need(d, "value", kind), "value", kind),
                extremal_colouring=_build("EdgeColouring", _need(d, "extremal_colouring", kind)))
    except DomainError as exc:
        raise ParseError(f"{kind}: {exc}") from exc
    raise ParseError(f"unknown object kind {kind!r}")


def _guess_kind(d: dict) -> str:
    if not isinstance(d, dict):
        raise ParseError("expected a JSON object")
    if "extremal_colouring" in d:
        return "ExactRecord"
    if "witness_vertices" in d:
        return "GuaranteeReport"
    if "edges" in d:
        return "Hypergraph"
    if "colours" in d or "n" in d:
        return "EdgeColouring"
    raise ParseError("cannot tell which certificate type this object is")


def loads(text: str, kind: str | type | None = None):
    """Parse certificate text; ``kind`` may be a class, its name, or None to infer."""
    if isinstance(kind, type):
        kind = kind.__name__
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        msg = f"line {exc.lineno} column {exc.colno}: {exc.msg}"
        if kind in _REQUIRED:
            seen = set(re.findall(r'"(\w+)"\s*:', text))
            missing = [k for k in _REQUIRED[kind] if k not in seen]
            if missing:
                msg += f" (missing field(s): {', '.join(missing)})"
        raise ParseError(msg) from None
    return _build(kind or _guess_kind(data), data)


def load(path, kind: str | type | None = None):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), kind)


def dump(obj, path) -> str:
    text = dumps(obj)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    return text
