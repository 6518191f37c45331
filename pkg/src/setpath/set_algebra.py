"""Set-valued matrices over a finite token universe.

A universe of size ``n`` holds ``n`` vertex tokens (indices ``0..n-1``) and
one extra ``LoopToken`` at index ``n``.  The distinguished value ``V`` is the
set of all vertex tokens, without the loop token.

Cells are stored as little-endian arrays of 64-bit words so that the two
matrix products below vectorise over numpy; the public cell type
:class:`SetCell` is a thin immutable wrapper around a Python ``int`` bitmask.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

WORD_BITS = 64
# Upper bound on temporary elements materialised by one product chunk.
_CHUNK_ELEMENTS = 1 << 22


class DimensionError(ValueError):
    """Operands do not share a universe or have incompatible shapes."""


@dataclass(frozen=True)
class Universe:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"universe needs at least one vertex token, got n={self.n}")

    @property
    def loop_index(self) -> int:
        return self.n

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def words(self) -> int:
        return (self.size + WORD_BITS - 1) // WORD_BITS

    @property
    def v_bits(self) -> int:
        return (1 << self.n) - 1

    @property
    def loop_bit(self) -> int:
        return 1 << self.n

    @property
    def all_bits(self) -> int:
        return (1 << self.size) - 1

    def V(self) -> SetCell:
        return SetCell(self.v_bits, self.n)

    def empty(self) -> SetCell:
        return SetCell(0, self.n)

    def loop(self) -> SetCell:
        return SetCell(self.loop_bit, self.n)

    def vertices(self, *indices: int) -> SetCell:
        """Cell holding the given 0-based vertex tokens."""
        bits = 0
        for v in indices:
            if not 0 <= v < self.n:
                raise IndexError(f"vertex token {v} outside universe of size {self.n}")
            bits |= 1 << v
        return SetCell(bits, self.n)

    def to_words(self, bits: int) -> np.ndarray:
        return np.array(
            [(bits >> (WORD_BITS * w)) & 0xFFFFFFFFFFFFFFFF for w in range(self.words)],
            dtype=np.uint64,
        )

    def v_words(self) -> np.ndarray:
        return self.to_words(self.v_bits)


def words_to_int(words: Sequence[int]) -> int:
    bits = 0
    for w, word in enumerate(words):
        bits |= int(word) << (WORD_BITS * w)
    return bits


@dataclass(frozen=True)
class SetCell:
    """A subset of the universe ``V ∪ {LoopToken}``.

    ``bits`` is the membership mask; bit ``n`` is the loop token.
    """

    bits: int
    n: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> (self.n + 1):
            raise ValueError(f"bits {self.bits:#x} exceed a universe of size {self.n}")

    @property
    def universe(self) -> Universe:
        return Universe(self.n)

    def is_V(self) -> bool:
        return self.bits == (1 << self.n) - 1

    def __contains__(self, token: int) -> bool:
        return bool(self.bits >> token & 1)

    def vertex_tokens(self) -> list[int]:
        return [v for v in range(self.n) if self.bits >> v & 1]

    def has_loop(self) -> bool:
        return bool(self.bits >> self.n & 1)

    def __str__(self) -> str:
        return render_bits(self.bits, self.n)


def render_bits(bits: int, n: int) -> str:
    """Render a cell as ``V``, ``{}``, ``{2,3}`` (1-based) or ``{Loop}``."""
    if bits == (1 << n) - 1:
        return "V"
    parts = [str(v + 1) for v in range(n) if bits >> v & 1]
    if bits >> n & 1:
        parts.append("Loop")
    return "{" + ",".join(parts) + "}"


def _same_universe(*cells: SetCell) -> int:
    n = cells[0].n
    for c in cells[1:]:
        if c.n != n:
            raise DimensionError(f"universe mismatch: {n} vs {c.n}")
    return n


def set_complement(a: SetCell) -> SetCell:
    return SetCell(~a.bits & ((1 << (a.n + 1)) - 1), a.n)


def set_join(a: SetCell, b: SetCell) -> SetCell:
    return SetCell(a.bits | b.bits, _same_universe(a, b))


def set_intersect(a: SetCell, b: SetCell) -> SetCell:
    return SetCell(a.bits & b.bits, _same_universe(a, b))


class Role(enum.Enum):
    GENERIC = "generic"
    T = "T"  # finish-vertex coloring and its right powers
    R = "R"  # start-vertex coloring, and left powers
    S = "S"  # cycle coloring


class SetMatrix:
    """Immutable dense matrix of :class:`SetCell` values.

    ``words`` has shape ``(rows, cols, universe.words)`` and is read-only.
    """

    __slots__ = ("universe", "words", "role", "k")

    def __init__(
        self,
        universe: Universe,
        words: np.ndarray,
        role: Role = Role.GENERIC,
        k: int | None = None,
    ) -> None:
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 3 or words.shape[2] != universe.words:
            raise DimensionError(
                f"word array of shape {words.shape} does not fit a universe of {universe.n}"
            )
        if words.shape[0] < 1 or words.shape[1] < 1:
            raise DimensionError("set matrices need at least one row and one column")
        words.setflags(write=False)
        self.universe = universe
        self.words = words
        self.role = role
        self.k = k

    @classmethod
    def from_bits(
        cls,
        universe: Universe,
        rows: Sequence[Sequence[int]],
        role: Role = Role.GENERIC,
        k: int | None = None,
    ) -> SetMatrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        words = np.zeros((r, c, universe.words), dtype=np.uint64)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise DimensionError("ragged rows")
            for j, bits in enumerate(row):
                if bits < 0 or bits > universe.all_bits:
                    raise ValueError(f"cell ({i},{j}) bits outside universe")
                words[i, j] = universe.to_words(bits)
        return cls(universe, words, role, k)

    @classmethod
    def from_cells(cls, rows: Sequence[Sequence[SetCell]], role: Role = Role.GENERIC) -> SetMatrix:
        n = rows[0][0].n
        for row in rows:
            _same_universe(rows[0][0], *row)
        return cls.from_bits(Universe(n), [[c.bits for c in row] for row in rows], role)

    @classmethod
    def filled(cls, universe: Universe, rows: int, cols: int, bits: int) -> SetMatrix:
        words = np.broadcast_to(universe.to_words(bits), (rows, cols, universe.words))
        return cls(universe, words.copy())

    @property
    def shape(self) -> tuple[int, int]:
        return self.words.shape[0], self.words.shape[1]

    def __getitem__(self, index: tuple[int, int]) -> SetCell:
        i, j = index
        return SetCell(words_to_int(self.words[i, j]), self.universe.n)

    def bits(self) -> list[list[int]]:
        """Cells as nested lists of Python int bitmasks."""
        if self.universe.words == 1:
            return [[int(x) for x in row] for row in self.words[:, :, 0].tolist()]
        return [[words_to_int(cell) for cell in row] for row in self.words.tolist()]

    def row_bits(self, i: int) -> list[int]:
        return [words_to_int(cell) for cell in self.words[i].tolist()]

    def v_mask(self) -> np.ndarray:
        """Boolean ``(rows, cols)`` array, true where the cell equals V."""
        return np.all(self.words == self.universe.v_words(), axis=2)

    def is_all_V(self) -> bool:
        return bool(self.v_mask().all())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetMatrix):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.universe.n, self.words.shape, self.words.tobytes()))

    def render(self) -> str:
        n = self.universe.n
        return "\n".join(" ".join(render_bits(b, n) for b in row) for row in self.bits())

    def __repr__(self) -> str:
        tag = self.role.value + (f"^{self.k}" if self.k is not None else "")
        return f"SetMatrix<{tag} {self.shape[0]}x{self.shape[1]} n={self.universe.n}>"


def _check_same_shape(a: SetMatrix, b: SetMatrix) -> None:
    if a.universe != b.universe:
        raise DimensionError(f"universe mismatch: {a.universe.n} vs {b.universe.n}")
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def matrix_join(a: SetMatrix, b: SetMatrix) -> SetMatrix:
    _check_same_shape(a, b)
    return SetMatrix(a.universe, a.words | b.words)


def matrix_intersect(a: SetMatrix, b: SetMatrix) -> SetMatrix:
    _check_same_shape(a, b)
    return SetMatrix(a.universe, a.words & b.words)


def matrix_complement(a: SetMatrix) -> SetMatrix:
    full = a.universe.to_words(a.universe.all_bits)
    return SetMatrix(a.universe, ~a.words & full)


def _check_product_operands(a: SetMatrix, b: SetMatrix) -> None:
    if a.universe != b.universe:
        raise DimensionError(f"universe mismatch: {a.universe.n} vs {b.universe.n}")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"inner dimensions differ: {a.shape} x {b.shape}")
    loop = a.universe.to_words(a.universe.loop_bit)
    for m in (a, b):
        if np.any(m.words & loop):
            raise ValueError("the loop token must not enter a matrix product")


def _reduce_intersect(a_rows: np.ndarray, b: np.ndarray) -> np.ndarray:
    # a_rows: (r, m, W), b: (m, c, W) -> (r, c, W) with AND over m of (a | b)
    r, m, w = a_rows.shape
    c = b.shape[1]
    out = np.empty((r, c, w), dtype=np.uint64)
    step = max(1, _CHUNK_ELEMENTS // max(1, m * c * w))
    for lo in range(0, r, step):
        hi = min(r, lo + step)
        joined = a_rows[lo:hi, :, None, :] | b[None, :, :, :]
        np.bitwise_and.reduce(joined, axis=1, out=out[lo:hi])
    return out


def product(a: SetMatrix, b: SetMatrix) -> SetMatrix:
    """Intersection-of-unions product with a forced-V diagonal.

    ``(AB)_ij = ∩_μ (a_iμ ∪ b_μj)`` for ``i != j`` and ``V`` on the diagonal.
    The reduction runs over the inner dimension.
    """
    _check_product_operands(a, b)
    out = _reduce_intersect(a.words, b.words)
    d = min(out.shape[0], out.shape[1])
    out[np.arange(d), np.arange(d)] = a.universe.v_words()
    return SetMatrix(a.universe, out)


def product_dual(a: SetMatrix, b: SetMatrix) -> SetMatrix:
    """Diagonal-only product: ``(AB)_ii = ∩_ν (a_iν ∪ b_νi)``, V elsewhere."""
    _check_product_operands(a, b)
    r, c = a.shape[0], b.shape[1]
    d = min(r, c)
    out = np.empty((r, c, a.universe.words), dtype=np.uint64)
    out[:] = a.universe.v_words()
    # a[i, ν] | b[ν, i] for i < d
    joined = a.words[:d] | np.swapaxes(b.words[:, :d], 0, 1)
    out[np.arange(d), np.arange(d)] = np.bitwise_and.reduce(joined, axis=1)
    return SetMatrix(a.universe, out, Role.S)


def _check_power_args(a: SetMatrix, k: int) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"powers need a square matrix, got {a.shape}")
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise TypeError(f"exponent must be an integer, got {k!r}")
    if k < 1:
        raise ValueError(f"exponent must be >= 1, got {k}")


def _power_role(a: SetMatrix, left: bool) -> Role:
    if a.role is Role.T:
        return Role.R if left else Role.T
    if a.role is Role.R and left:
        return Role.R
    return Role.GENERIC


def right_powers(a: SetMatrix, k_max: int) -> Iterator[SetMatrix]:
    """Yield ``A^1 .. A^k_max`` where ``A^{k+1} = A^k · A``."""
    _check_power_args(a, k_max)
    role = _power_role(a, left=False)
    p = SetMatrix(a.universe, a.words, role, 1)
    yield p
    for k in range(2, k_max + 1):
        p = SetMatrix(a.universe, product(p, a).words, role, k)
        yield p


def left_powers(a: SetMatrix, k_max: int) -> Iterator[SetMatrix]:
    """Yield ``A^1 .. A^k_max`` where ``A^{k+1} = A · A^k``."""
    _check_power_args(a, k_max)
    role = _power_role(a, left=True)
    p = SetMatrix(a.universe, a.words, role, 1)
    yield p
    for k in range(2, k_max + 1):
        p = SetMatrix(a.universe, product(a, p).words, role, k)
        yield p


def right_power(a: SetMatrix, k: int) -> SetMatrix:
    for p in right_powers(a, k):
        pass
    return p


def left_power(a: SetMatrix, k: int) -> SetMatrix:
    for p in left_powers(a, k):
        pass
    return p


def right_power_words_row(a: SetMatrix, i: int, k: int) -> np.ndarray:
    """Row ``i`` of the ``k``-th right power as a ``(n, W)`` word array."""
    _check_power_args(a, k)
    n = a.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"row {i} out of range for a {n}x{n} matrix")
    _check_product_operands(a, a)
    v = a.universe.v_words()
    row = a.words[i].copy()
    for _ in range(k - 1):
        row = _reduce_intersect(row[None], a.words)[0]
        row[i] = v
    return row


def right_power_row(a: SetMatrix, i: int, k: int) -> list[SetCell]:
    """Row ``i`` of ``right_power(a, k)`` via row-vector iteration, O(n^2) per step."""
    n = a.universe.n
    return [SetCell(words_to_int(w), n) for w in right_power_words_row(a, i, k).tolist()]


def check_role_invariants(m: SetMatrix) -> list[str]:
    """Return descriptions of every role invariant the matrix breaks."""
    problems: list[str] = []
    v = m.universe.v_bits
    cells = m.bits()
    rows, cols = m.shape
    if m.role in (Role.T, Role.R):
        problems += [f"diagonal ({i},{i}) is not V" for i in range(min(rows, cols)) if cells[i][i] != v]
    if m.role is Role.S and m.k is not None and m.k >= 2:
        problems += [
            f"off-diagonal ({i},{j}) is not V"
            for i in range(rows)
            for j in range(cols)
            if i != j and cells[i][j] != v
        ]
    if m.role is Role.T:
        for i in range(rows):
            for j in range(cols):
                c = cells[i][j]
                if c != v and (not c >> j & 1 or c >> i & 1):
                    problems.append(f"cell ({i},{j}) = {render_bits(c, m.universe.n)}")
    return problems


def exercise_matrices(universe: Universe | None = None) -> tuple[SetMatrix, SetMatrix, SetMatrix]:
    """The 2x2, 2x2, 2x1 operands of the classic non-associativity example.

    Tokens ``a, b, c`` are vertex tokens 0, 1, 2 of a three-token universe.
    """
    u = universe or Universe(3)
    a, b, c = (1 << 0), (1 << 1), (1 << 2)
    return (
        SetMatrix.from_bits(u, [[0, 0], [0, a]]),
        SetMatrix.from_bits(u, [[0, 0], [0, b]]),
        SetMatrix.from_bits(u, [[0], [c]]),
    )


def iter_cells(m: SetMatrix) -> Iterable[tuple[int, int, SetCell]]:
    n = m.universe.n
    for i, row in enumerate(m.bits()):
        for j, bits in enumerate(row):
            yield i, j, SetCell(bits, n)
