"""Labeled multi-digraphs: ingestion, canonical JSON, and test populations.

Vertex ids are 1-based in every text format and 0-based in memory.

Edge-list format::

    3 3
    1 2
    2 3
    3 1

JSON format (either ``arcs`` or ``adjacency``, never both)::

    {"n": 2, "arcs": [[1, 2]]}
    {"n": 2, "adjacency": [[0, 3], [0, 0]]}

Random digraphs use numpy's ``default_rng(seed)`` (PCG64).  One uniform
draw per cell of the n x n grid is taken in row-major order, and the arc
``(i, j)`` exists when its draw is below ``p``.  Diagonal draws are consumed
but discarded unless loops are requested.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

MAX_EXHAUSTIVE_N = 5


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Digraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"a digraph needs at least one vertex, got n={self.n}")
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        if len(adj) != self.n or any(len(row) != self.n for row in adj):
            raise ValueError(f"adjacency must be {self.n}x{self.n}")
        if any(x < 0 for row in adj for x in row):
            raise ValueError("arc counts must be non-negative")
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_arcs(cls, n: int, arcs: Sequence[tuple[int, int]], name: str | None = None) -> Digraph:
        """Build from 0-based ``(u, v)`` pairs; repeats become parallel arcs."""
        adj = [[0] * n for _ in range(n)]
        for u, v in arcs:
            adj[u][v] += 1
        return cls(n, tuple(map(tuple, adj)), name)

    def has_arc(self, i: int, j: int) -> bool:
        return self.adjacency[i][j] > 0

    @property
    def arcs(self) -> list[tuple[int, int]]:
        """Arc set as 0-based pairs, without multiplicity."""
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.adjacency[i][j] > 0]

    def successors(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.adjacency[i][j] > 0]

    def has_loop(self, i: int) -> bool:
        return self.adjacency[i][i] > 0

    def code(self) -> int:
        """0/1 arc pattern flattened row-major, first cell as most significant bit."""
        c = 0
        for row in self.adjacency:
            for x in row:
                c = (c << 1) | (x > 0)
        return c

    def sort_key(self) -> tuple[int, int, str]:
        return (self.n, self.code(), emit_json_graph(self))


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise GraphParseError(f"expected {count} integers, got {line.strip()!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphParseError(f"non-integer token in {line.strip()!r}", lineno) from None


def parse_edge_list(text: str, name: str | None = None) -> Digraph:
    """Parse the ``n m`` header plus ``m`` lines of 1-based ``u v`` arcs.

    Blank lines and lines starting with ``#`` are ignored.
    """
    lines = [
        (no, line)
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise GraphParseError("empty input: expected header 'n m'")
    no, header = lines[0]
    n, m = _ints(header, no, 2)
    if n < 1:
        raise GraphParseError(f"vertex count must be positive, got {n}", no)
    if m < 0:
        raise GraphParseError(f"arc count must be non-negative, got {m}", no)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else no)
        raise GraphParseError(f"header announces {m} arcs but {len(body)} arc lines follow", where)
    adj = [[0] * n for _ in range(n)]
    for no, line in body:
        u, v = _ints(line, no, 2)
        for x in (u, v):
            if not 1 <= x <= n:
                raise GraphParseError(f"vertex id {x} outside 1..{n}", no)
        adj[u - 1][v - 1] += 1
    return Digraph(n, tuple(map(tuple, adj)), name)


def emit_edge_list(g: Digraph) -> str:
    arcs = [(i, j) for i in range(g.n) for j in range(g.n) for _ in range(g.adjacency[i][j])]
    return "\n".join([f"{g.n} {len(arcs)}"] + [f"{i + 1} {j + 1}" for i, j in arcs]) + "\n"


def parse_json_graph(text: str | dict) -> Digraph:
    try:
        obj = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise GraphParseError("graph JSON must be an object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GraphParseError(f"field 'n' must be a positive integer, got {n!r}")
    has_arcs, has_adj = "arcs" in obj, "adjacency" in obj
    if has_arcs == has_adj:
        raise GraphParseError("exactly one of 'arcs' or 'adjacency' must be present")
    name = obj.get("name")
    if has_adj:
        adj = obj["adjacency"]
        if (
            not isinstance(adj, list)
            or len(adj) != n
            or any(not isinstance(row, list) or len(row) != n for row in adj)
        ):
            raise GraphParseError(f"'adjacency' must be an {n}x{n} list of lists")
        if any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for row in adj for x in row):
            raise GraphParseError("'adjacency' entries must be non-negative integers")
        return Digraph(n, tuple(map(tuple, adj)), name)
    arcs = obj["arcs"]
    if not isinstance(arcs, list):
        raise GraphParseError("'arcs' must be a list of [u, v] pairs")
    pairs = []
    for idx, arc in enumerate(arcs):
        if (
            not isinstance(arc, list)
            or len(arc) != 2
            or any(not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= n for x in arc)
        ):
            raise GraphParseError(f"arc #{idx + 1} must be a pair of ids in 1..{n}, got {arc!r}")
        pairs.append((arc[0] - 1, arc[1] - 1))
    return Digraph.from_arcs(n, pairs, name)


def graph_to_obj(g: Digraph) -> dict:
    obj: dict = {"n": g.n, "adjacency": [list(row) for row in g.adjacency]}
    if g.name is not None:
        obj["name"] = g.name
    return obj


def emit_json_graph(g: Digraph) -> str:
    """Canonical form: adjacency counts, sorted keys, compact separators."""
    return json.dumps(graph_to_obj(g), sort_keys=True, separators=(",", ":"))


def parse_graph(text: str) -> Digraph:
    """Sniff the format: a leading ``{`` means JSON, anything else an edge list."""
    if text.lstrip().startswith("{"):
        return parse_json_graph(text)
    return parse_edge_list(text)


def enumerate_digraphs(n: int, loops: bool = True) -> Iterator[Digraph]:
    """Every labeled 0/1 digraph on ``n`` vertices, once each.

    Order is lexicographic in the flattened row-major bit pattern (with the
    diagonal skipped when ``loops`` is false).
    """
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {MAX_EXHAUSTIVE_N}, got {n}")
    cells = [(i, j) for i in range(n) for j in range(n) if loops or i != j]
    for pattern in itertools.product((0, 1), repeat=len(cells)):
        adj = [[0] * n for _ in range(n)]
        for (i, j), bit in zip(cells, pattern):
            adj[i][j] = bit
        yield Digraph(n, tuple(map(tuple, adj)))


def random_digraph(n: int, p: float, seed: int, loops: bool = False) -> Digraph:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"arc probability must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"a digraph needs at least one vertex, got n={n}")
    draws = np.random.default_rng(seed).random((n, n))
    adj = (draws < p).astype(int)
    if not loops:
        np.fill_diagonal(adj, 0)
    return Digraph(n, tuple(map(tuple, adj.tolist())))


def complete_digraph(n: int) -> Digraph:
    return Digraph(n, tuple(tuple(int(i != j) for j in range(n)) for i in range(n)), f"K{n}")


@dataclass(frozen=True)
class GraphPopulation:
    """Either every labeled digraph on ``n`` vertices, or ``count`` random ones.

    Random graph ``t`` (0-based) is drawn with seed ``seed + t``.
    """

    kind: str
    n: int
    loops: bool = True
    p: float | None = None
    seed: int = 0
    count: int = 0

    def __post_init__(self) -> None:
        if self.kind == "exhaustive":
            if not 1 <= self.n <= MAX_EXHAUSTIVE_N:
                raise ValueError(
                    f"exhaustive populations support 1 <= n <= {MAX_EXHAUSTIVE_N}, got {self.n}"
                )
        elif self.kind == "random":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError(f"random populations need p in [0, 1], got {self.p}")
            if self.count < 0 or self.n < 1:
                raise ValueError("random populations need n >= 1 and count >= 0")
        else:
            raise ValueError(f"unknown population kind {self.kind!r}")

    @classmethod
    def exhaustive(cls, n: int, loops: bool = True) -> GraphPopulation:
        return cls("exhaustive", n, loops)

    @classmethod
    def random(cls, n: int, p: float, seed: int, count: int, loops: bool = False) -> GraphPopulation:
        return cls("random", n, loops, p, seed, count)

    def __len__(self) -> int:
        if self.kind == "exhaustive":
            return 2 ** (self.n * self.n if self.loops else self.n * (self.n - 1))
        return self.count

    def __iter__(self) -> Iterator[Digraph]:
        if self.kind == "exhaustive":
            return enumerate_digraphs(self.n, self.loops)
        return (random_digraph(self.n, self.p, self.seed + t, self.loops) for t in range(self.count))

    def describe(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "loops": self.loops, "graphs": len(self)}
        if self.kind == "random":
            d.update(p=self.p, seed=self.seed)
        return d
