"""Brute-force ground truth for simple k-paths, k-cycles and bridge sets.

Nothing here touches the set-matrix algebra; everything is explicit
depth-first enumeration over vertex sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .graph import Digraph
from .set_algebra import SetCell

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class PathSample:
    """A simple path ``start -> vertices[0] -> ... -> vertices[-1]`` (0-based)."""

    start: int
    vertices: tuple[int, ...]

    @property
    def finish(self) -> int:
        return self.vertices[-1]

    @property
    def k(self) -> int:
        return len(self.vertices)

    def one_based(self) -> list[int]:
        return [self.start + 1] + [v + 1 for v in self.vertices]


@dataclass
class PathQuery:
    exists: bool
    count: Optional[int]  # None when the enumeration hit the cap
    samples: list[PathSample] = field(default_factory=list)
    truncated: bool = False


@dataclass
class CycleQuery:
    exists: bool
    count: int


def _check_vertex(g: Digraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} outside 0..{g.n - 1}")


def _check_path_args(g: Digraph, i: int, j: int, k: int) -> None:
    _check_vertex(g, i)
    _check_vertex(g, j)
    if i == j:
        raise ValueError("path queries need i != j; use oracle_k_cycles for closed walks")
    if k < 1:
        raise ValueError(f"path length must be >= 1, got {k}")


def iter_k_paths(g: Digraph, i: int, j: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield the vertex tuple after ``i`` of every simple ``k``-arc path ``i -> j``.

    Successors are tried in ascending order, so the output order is fixed.
    """
    if k > g.n - 1:
        return
    succ = [g.successors(v) for v in range(g.n)]
    path: list[int] = []
    used = [False] * g.n
    used[i] = True

    def extend(v: int) -> Iterator[tuple[int, ...]]:
        depth = len(path)
        if depth == k - 1:
            if g.adjacency[v][j] > 0 and not used[j]:
                yield (*path, j)
            return
        for w in succ[v]:
            if used[w] or w == j:
                continue
            used[w] = True
            path.append(w)
            yield from extend(w)
            path.pop()
            used[w] = False

    yield from extend(i)


def oracle_k_paths(g: Digraph, i: int, j: int, k: int, cap: int = DEFAULT_CAP) -> PathQuery:
    _check_path_args(g, i, j, k)
    samples: list[PathSample] = []
    for verts in iter_k_paths(g, i, j, k):
        if len(samples) >= cap:
            return PathQuery(True, None, samples, truncated=True)
        samples.append(PathSample(i, verts))
    return PathQuery(bool(samples), len(samples), samples)


def k_path_exists(g: Digraph, i: int, j: int, k: int) -> bool:
    _check_path_args(g, i, j, k)
    return next(iter_k_paths(g, i, j, k), None) is not None


def oracle_k_cycles(g: Digraph, i: int, k: int) -> CycleQuery:
    """Count simple directed cycles of exactly ``k`` arcs through ``i``.

    A cycle is a ``(k-1)``-path from ``i`` to some ``ν`` plus the arc ``ν -> i``;
    for ``k = 1`` it is a self-loop.  Parallel arcs are not counted separately.
    """
    _check_vertex(g, i)
    if k < 1:
        raise ValueError(f"cycle length must be >= 1, got {k}")
    if k == 1:
        c = int(g.has_loop(i))
        return CycleQuery(bool(c), c)
    count = 0
    for nu in range(g.n):
        if nu != i and g.has_arc(nu, i):
            count += sum(1 for _ in iter_k_paths(g, i, nu, k - 1))
    return CycleQuery(count > 0, count)


def bridge_set(g: Digraph, i: int, j: int, k: int) -> SetCell:
    """Vertices shared by every simple ``k``-path ``i -> j`` (start excluded).

    Returns V when there is no such path.
    """
    _check_path_args(g, i, j, k)
    floor = 1 << j
    acc = None
    for verts in iter_k_paths(g, i, j, k):
        bits = 0
        for v in verts:
            bits |= 1 << v
        acc = bits if acc is None else acc & bits
        if acc == floor:
            break
    return SetCell((1 << g.n) - 1 if acc is None else acc, g.n)


@dataclass
class PathProfile:
    """Per ``(i, j, k)`` path counts and bridge sets from one DFS per start.

    ``count[i][j][k]`` and ``bridge[i][j][k]`` are indexed by 0-based vertices
    and arc count ``k`` (index 0 unused); a bridge of ``None`` means no path.
    """

    n: int
    max_k: int
    count: list[list[list[int]]]
    bridge: list[list[list[Optional[int]]]]

    def exists(self, i: int, j: int, k: int) -> bool:
        return k <= self.max_k and self.count[i][j][k] > 0

    def cycle_count(self, g: Digraph, i: int, k: int) -> int:
        if k == 1:
            return int(g.has_loop(i))
        if k - 1 > self.max_k:
            return 0
        return sum(self.count[i][nu][k - 1] for nu in range(self.n) if nu != i and g.has_arc(nu, i))


def path_profile(g: Digraph, max_k: int | None = None) -> PathProfile:
    """Enumerate every simple path of 1..max_k arcs from every start vertex."""
    n = g.n
    max_k = n - 1 if max_k is None else min(max_k, n - 1)
    max_k = max(max_k, 0)
    count = [[[0] * (max_k + 1) for _ in range(n)] for _ in range(n)]
    bridge: list[list[list[Optional[int]]]] = [[[None] * (max_k + 1) for _ in range(n)] for _ in range(n)]
    succ = [[w for w in g.successors(v) if w != v] for v in range(n)]
    for i in range(n):
        cnt_i, br_i = count[i], bridge[i]
        # stack entries: (vertex, arcs so far, visited-vertex bits)
        stack = [(i, 0, 1 << i)]
        while stack:
            v, depth, seen = stack.pop()
            if depth:
                cnt_i[v][depth] += 1
                b = seen & ~(1 << i)
                prev = br_i[v][depth]
                br_i[v][depth] = b if prev is None else prev & b
            if depth < max_k:
                for w in succ[v]:
                    if not seen >> w & 1:
                        stack.append((w, depth + 1, seen | (1 << w)))
    return PathProfile(n, max_k, count, bridge)


def validate_sample(g: Digraph, sample: PathSample, i: int, j: int, k: int) -> list[str]:
    """Check a sample against the definition of a simple k-path, independently of the DFS."""
    errors = []
    mu = sample.vertices
    if sample.start != i:
        errors.append(f"start {sample.start} != {i}")
    if len(mu) != k:
        errors.append(f"length {len(mu)} != {k}")
    if any(not 0 <= x < g.n for x in mu):
        errors.append("vertex index out of range")
        return errors
    if mu and not g.has_arc(i, mu[0]):
        errors.append(f"no arc {i}->{mu[0]}")
    for a, b in zip(mu, mu[1:]):
        if not g.has_arc(a, b):
            errors.append(f"no arc {a}->{b}")
    if i in mu:
        errors.append("path revisits its start")
    if not mu or mu[-1] != j:
        errors.append(f"path does not finish at {j}")
    if len(set(mu)) != len(mu):
        errors.append("path repeats a vertex")
    return errors
