"""Path and cycle detection from adjacency set matrices.

``build_T`` colors each arc with its finish vertex, ``build_R`` with its
start vertex, and ``build_S1`` marks self-loops with the loop token.  A pair
``(i, j)`` is reported for length ``k`` when ``(T^k)_ij`` differs from V, and
vertex ``i`` carries a ``k``-cycle report when ``(S^k)_ii`` differs from V,
where ``S^k = T^{k-1} · R`` under the diagonal-only product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .graph import Digraph
from .set_algebra import (
    Role,
    SetCell,
    SetMatrix,
    Universe,
    product_dual,
    right_power,
    right_power_words_row,
    right_powers,
    words_to_int,
)


def _coloring(g: Digraph, finish: bool) -> SetMatrix:
    u = Universe(g.n)
    v = u.v_bits
    rows = [
        [(1 << (j if finish else i)) if i != j and g.adjacency[i][j] > 0 else v for j in range(g.n)]
        for i in range(g.n)
    ]
    return SetMatrix.from_bits(u, rows, Role.T if finish else Role.R, 1)


def build_T(g: Digraph) -> SetMatrix:
    """``{v_j}`` on every non-loop arc ``i -> j``, V elsewhere."""
    return _coloring(g, finish=True)


def build_R(g: Digraph) -> SetMatrix:
    """``{v_i}`` on every non-loop arc ``i -> j``, V elsewhere."""
    return _coloring(g, finish=False)


def build_S1(g: Digraph) -> SetMatrix:
    u = Universe(g.n)
    rows = [
        [u.loop_bit if i == j and g.has_loop(i) else u.v_bits for j in range(g.n)]
        for i in range(g.n)
    ]
    return SetMatrix.from_bits(u, rows, Role.S, 1)


def _bitrows(flags: np.ndarray) -> list[str]:
    return ["".join("1" if x else "0" for x in row) for row in np.atleast_2d(flags)]


@dataclass
class PathReport:
    k: int
    pairs: np.ndarray  # (n, n) bool
    witness_matrix: Optional[SetMatrix] = None

    def rows(self) -> list[str]:
        return _bitrows(self.pairs)

    def to_json(self) -> dict:
        return {"k": self.k, "kind": "path", "matrix": self.rows()}

    def to_text(self) -> str:
        return f"path k={self.k}\n" + "\n".join(self.rows())


@dataclass
class CycleReport:
    k: int
    vertices: np.ndarray  # (n,) bool
    cells: Optional[list[SetCell]] = None

    def vector(self) -> str:
        return "".join("1" if x else "0" for x in self.vertices)

    def to_json(self) -> dict:
        return {"k": self.k, "kind": "cycle", "vector": self.vector()}

    def to_text(self) -> str:
        return f"cycle k={self.k}\n{self.vector()}"


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")


def _path_report(tk: SetMatrix, k: int, keep_witness: bool) -> PathReport:
    return PathReport(k, ~tk.v_mask(), tk if keep_witness else None)


def detect_paths(g: Digraph, k: int, keep_witness: bool = False) -> PathReport:
    _check_k(k)
    return _path_report(right_power(build_T(g), k), k, keep_witness)


def iter_path_reports(g: Digraph, k_max: int, keep_witness: bool = False) -> Iterator[PathReport]:
    """Reports for k = 1..k_max, sharing the power iteration."""
    _check_k(k_max)
    for k, tk in enumerate(right_powers(build_T(g), k_max), start=1):
        yield _path_report(tk, k, keep_witness)


def cycle_matrix(t_prev: SetMatrix, r: SetMatrix, k: int) -> SetMatrix:
    """``S^k`` from ``T^{k-1}`` and ``R`` via the diagonal-only product."""
    s = product_dual(t_prev, r)
    return SetMatrix(s.universe, s.words, Role.S, k)


def _cycle_report(s: SetMatrix, k: int) -> CycleReport:
    n = s.universe.n
    diag = [words_to_int(s.words[i, i]) for i in range(n)]
    cells = [SetCell(b, n) for b in diag]
    return CycleReport(k, np.array([b != s.universe.v_bits for b in diag], dtype=bool), cells)


def detect_cycles(g: Digraph, k: int) -> CycleReport:
    _check_k(k)
    if k == 1:
        return _cycle_report(build_S1(g), 1)
    return _cycle_report(cycle_matrix(right_power(build_T(g), k - 1), build_R(g), k), k)


def iter_cycle_reports(g: Digraph, k_max: int) -> Iterator[CycleReport]:
    _check_k(k_max)
    yield _cycle_report(build_S1(g), 1)
    if k_max == 1:
        return
    r = build_R(g)
    for k, tk in enumerate(right_powers(build_T(g), k_max - 1), start=2):
        yield _cycle_report(cycle_matrix(tk, r, k), k)


def _need_two(g: Digraph) -> None:
    if g.n < 2:
        raise ValueError(f"Hamiltonian queries need at least 2 vertices, got {g.n}")


def hamiltonian_path(g: Digraph) -> PathReport:
    _need_two(g)
    return detect_paths(g, g.n - 1)


def hamiltonian_cycle_cell(g: Digraph) -> SetCell:
    """``(S^n)_00`` computed from row 0 of ``T^{n-1}`` only."""
    _need_two(g)
    t = build_T(g)
    r = build_R(g)
    row = right_power_words_row(t, 0, g.n - 1)
    # ∩_ν (T^{n-1})_{0ν} ∪ R_{ν0}
    cell = np.bitwise_and.reduce(row | r.words[:, 0], axis=0)
    return SetCell(words_to_int(cell), g.n)


def hamiltonian_cycle(g: Digraph) -> bool:
    return not hamiltonian_cycle_cell(g).is_V()


@dataclass
class Language:
    """All path matrices (k = 1..n-1) and cycle vectors (k = 1..n) of a digraph."""

    n: int
    paths: list[PathReport]
    cycles: list[CycleReport]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "paths": [p.to_json() for p in self.paths],
            "cycles": [c.to_json() for c in self.cycles],
        }


def language(g: Digraph) -> Language:
    paths = list(iter_path_reports(g, g.n - 1)) if g.n > 1 else []
    cycles = list(iter_cycle_reports(g, g.n))
    return Language(g.n, paths, cycles)
