"""Weighted undirected graphs, coalitions and the edge-list file format.

File format (line oriented, ``#`` starts a comment line)::

    p <n> <m> [weighted|unweighted]
    e <u> <v> [<w>]

Weights are decimals (``2.5``) or rationals (``5/2``) and are stored as
:class:`fractions.Fraction`; they are required iff the header says
``weighted``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

__all__ = [
    "Coalition",
    "GraphParseError",
    "WeightedGraph",
    "complement",
    "connected_components",
    "format_graph",
    "induced_subgraph",
    "parse_graph",
]

_WEIGHT_RE = re.compile(r"(?:\d+(?:\.\d+)?|\.\d+|\d+/\d+)\Z")


class GraphParseError(ValueError):
    """Malformed graph text. ``lineno`` is 1-based (0 for end of input)."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices ``0..vertex_count-1``.

    Edges are stored as ``(u, v, w)`` with ``u < v`` in sorted order and
    ``w`` a positive :class:`Fraction`. Instances are immutable and hashable.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, Fraction], ...] = ()

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        norm = {}
        for u, v, w in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= n:
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if (u, v) in norm:
                raise ValueError(f"duplicate edge ({u}, {v})")
            w = Fraction(w)
            if w <= 0:
                raise ValueError(f"edge ({u}, {v}) has nonpositive weight {w}")
            norm[(u, v)] = w
        object.__setattr__(
            self, "edges", tuple((u, v, norm[(u, v)]) for u, v in sorted(norm))
        )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> WeightedGraph:
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; missing weights are 1."""
        triples = []
        for e in edges:
            if len(e) == 2:
                triples.append((e[0], e[1], Fraction(1)))
            else:
                triples.append((e[0], e[1], Fraction(e[2])))
        return cls(n, tuple(triples))

    @property
    def n(self) -> int:
        return self.vertex_count

    @cached_property
    def adjacency(self) -> tuple[dict[int, Fraction], ...]:
        adj: list[dict[int, Fraction]] = [{} for _ in range(self.vertex_count)]
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return tuple(adj)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << j for j in nb) for nb in self.adjacency)

    @cached_property
    def is_unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adjacency), default=0)

    def weight(self, u: int, v: int) -> Fraction | None:
        return self.adjacency[u].get(v)

    def max_incident_weight(self, i: int) -> Fraction:
        return max(self.adjacency[i].values(), default=Fraction(0))

    @cached_property
    def integer_weights(self) -> tuple[int, tuple[tuple[int, int, int], ...]]:
        """``(scale, edges)`` where ``scale * w`` is an integer for every edge."""
        scale = 1
        for _, _, w in self.edges:
            scale = math.lcm(scale, w.denominator)
        return scale, tuple((u, v, int(w * scale)) for u, v, w in self.edges)

    def relabel(self, order: list[int]) -> WeightedGraph:
        """Graph whose vertex ``k`` is this graph's vertex ``order[k]``."""
        pos = {old: new for new, old in enumerate(order)}
        return WeightedGraph(
            len(order),
            tuple((pos[u], pos[v], w) for u, v, w in self.edges if u in pos and v in pos),
        )


@dataclass(frozen=True)
class Coalition:
    """A vertex subset stored as a bitmask over ``universe_size`` players."""

    members: int
    universe_size: int = field(default=0)

    def __post_init__(self):
        if self.members < 0 or self.members >> self.universe_size:
            raise ValueError(
                f"coalition mask {self.members:#x} exceeds universe of {self.universe_size}"
            )

    @classmethod
    def of(cls, universe_size: int, vertices: Iterable[int]) -> Coalition:
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return cls(mask, universe_size)

    @classmethod
    def empty(cls, universe_size: int) -> Coalition:
        return cls(0, universe_size)

    @classmethod
    def full(cls, universe_size: int) -> Coalition:
        return cls((1 << universe_size) - 1, universe_size)

    def __contains__(self, v: int) -> bool:
        return bool(self.members >> v & 1)

    def __iter__(self) -> Iterator[int]:
        m = self.members
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def add(self, v: int) -> Coalition:
        return Coalition(self.members | 1 << v, self.universe_size)

    def remove(self, v: int) -> Coalition:
        return Coalition(self.members & ~(1 << v), self.universe_size)


def parse_graph(text: bytes | str) -> WeightedGraph:
    """Parse the edge-list format. Errors carry the offending line number."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphParseError(0, f"input is not UTF-8: {exc}") from None

    header = None
    weighted = False
    edges: list[tuple[int, int, Fraction]] = []
    seen: set[tuple[int, int]] = set()
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "p":
                raise GraphParseError(lineno, "expected header 'p <n> <m> [weighted|unweighted]'")
            if len(tok) not in (3, 4):
                raise GraphParseError(lineno, "malformed header")
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphParseError(lineno, "header counts must be integers") from None
            if n < 0 or m < 0:
                raise GraphParseError(lineno, "header counts must be nonnegative")
            if len(tok) == 4:
                if tok[3] not in ("weighted", "unweighted"):
                    raise GraphParseError(lineno, f"unknown header flag {tok[3]!r}")
                weighted = tok[3] == "weighted"
            header = (n, m)
            continue
        n, m = header
        if tok[0] != "e":
            raise GraphParseError(lineno, f"expected edge line, got {tok[0]!r}")
        if len(tok) != (4 if weighted else 3):
            need = "e <u> <v> <w>" if weighted else "e <u> <v>"
            raise GraphParseError(lineno, f"malformed edge line, expected '{need}'")
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise GraphParseError(lineno, "vertex ids must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(lineno, f"vertex id out of range 0..{n - 1}")
        if u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(lineno, f"duplicate edge {key}")
        seen.add(key)
        w = Fraction(1)
        if weighted:
            if not _WEIGHT_RE.match(tok[3]):
                raise GraphParseError(lineno, f"bad weight {tok[3]!r}")
            try:
                w = Fraction(tok[3])
            except ZeroDivisionError:
                raise GraphParseError(lineno, "zero denominator in weight") from None
            if w <= 0:
                raise GraphParseError(lineno, "edge weight must be positive")
        if len(edges) == m:
            raise GraphParseError(lineno, f"more than {m} edge lines")
        edges.append((key[0], key[1], w))

    if header is None:
        raise GraphParseError(0, "missing header line")
    if len(edges) != header[1]:
        raise GraphParseError(lineno, f"expected {header[1]} edge lines, found {len(edges)}")
    return WeightedGraph(header[0], tuple(edges))


def format_graph(g: WeightedGraph) -> str:
    """Serialize in the edge-list format; inverse of :func:`parse_graph`."""
    if g.is_unweighted:
        lines = [f"p {g.n} {len(g.edges)}"]
        lines += [f"e {u} {v}" for u, v, _ in g.edges]
    else:
        lines = [f"p {g.n} {len(g.edges)} weighted"]
        lines += [f"e {u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def induced_subgraph(g: WeightedGraph, s: Coalition) -> WeightedGraph:
    """Subgraph on ``s``; vertex ids are renumbered in increasing order."""
    if s.universe_size != g.n:
        raise ValueError("coalition universe does not match graph")
    return g.relabel(list(s))


def connected_components(g: WeightedGraph) -> list[list[int]]:
    """Vertex sets of the components, each sorted, ordered by smallest member."""
    seen = [False] * g.n
    blocks = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        stack, block = [root], []
        while stack:
            u = stack.pop()
            block.append(u)
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        blocks.append(sorted(block))
    return blocks


def complement(g: WeightedGraph) -> WeightedGraph:
    if not g.is_unweighted:
        raise ValueError("complement is only defined for unweighted graphs")
    present = {(u, v) for u, v, _ in g.edges}
    return WeightedGraph.from_edges(
        g.n, [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in present]
    )
