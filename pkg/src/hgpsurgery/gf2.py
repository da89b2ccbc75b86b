"""Bit-packed linear algebra over GF(2).

Rows of a :class:`BinaryMatrix` are packed little-endian into ``uint64``
words, bit ``j`` of a row living in word ``j // 64`` at position ``j % 64``.
Padding bits past the last column are always zero, so word-level
comparisons and popcounts are exact.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch

WORD = 64


def _nwords(n: int) -> int:
    return (n + WORD - 1) // WORD


def _pack(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into uint64 words along axis 1."""
    rows, cols = dense.shape
    nw = _nwords(cols)
    if rows == 0 or cols == 0:
        return np.zeros((rows, nw), dtype=np.uint64)
    packed = np.packbits(dense.astype(np.uint8, copy=False), axis=1, bitorder="little")
    pad = nw * 8 - packed.shape[1]
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def _unpack(data: np.ndarray, cols: int) -> np.ndarray:
    rows = data.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(data.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, count=cols, bitorder="little")


class BinaryVector:
    """A fixed-length vector over GF(2).

    Args:
        length: Number of coordinates.
        data: Packed ``uint64`` words; zeros if omitted.
    """

    __slots__ = ("length", "data")

    def __init__(self, length: int, data: np.ndarray | None = None):
        if length < 0:
            raise DimensionMismatch("negative length")
        self.length = int(length)
        if data is None:
            data = np.zeros(_nwords(length), dtype=np.uint64)
        self.data = data

    @classmethod
    def from_dense(cls, bits: Iterable[int]) -> "BinaryVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = (arr.astype(np.int64) & 1).astype(np.uint8).reshape(1, -1)
        return cls(arr.shape[1], _pack(arr)[0])

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BinaryVector":
        dense = np.zeros(length, dtype=np.uint8)
        for j in support:
            if not 0 <= j < length:
                raise DimensionMismatch(f"index {j} outside length {length}")
            dense[j] ^= 1
        return cls.from_dense(dense)

    @classmethod
    def from_int(cls, length: int, value: int) -> "BinaryVector":
        """Build from a Python integer whose bit ``j`` is coordinate ``j``."""
        if value >> length:
            raise DimensionMismatch("integer has bits beyond the vector length")
        words = [(value >> (WORD * w)) & 0xFFFFFFFFFFFFFFFF for w in range(_nwords(length))]
        return cls(length, np.array(words, dtype=np.uint64))

    @classmethod
    def ones(cls, length: int) -> "BinaryVector":
        return cls.from_dense(np.ones(length, dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data.reshape(1, -1), self.length)[0]

    def to_int(self) -> int:
        return sum(int(w) << (WORD * i) for i, w in enumerate(self.data))

    def support(self) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.to_dense())]

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self.data).sum())

    def is_zero(self) -> bool:
        return not self.data.any()

    def dot(self, other: "BinaryVector") -> int:
        self._check_len(other)
        return int(np.bitwise_count(self.data & other.data).sum()) & 1

    def concat(self, *others: "BinaryVector") -> "BinaryVector":
        parts = [self.to_dense()] + [o.to_dense() for o in others]
        return BinaryVector.from_dense(np.concatenate(parts))

    def _check_len(self, other):
        if self.length != other.length:
            raise DimensionMismatch(f"lengths {self.length} and {other.length} differ")

    def __add__(self, other: "BinaryVector") -> "BinaryVector":
        self._check_len(other)
        return BinaryVector(self.length, self.data ^ other.data)

    __xor__ = __add__

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.length, self.data.tobytes()))

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return int(self.data[j // WORD] >> np.uint64(j % WORD)) & 1

    def __repr__(self) -> str:
        bits = "".join(map(str, self.to_dense())) if self.length <= 80 else "..."
        return f"BinaryVector({self.length}, {bits})"


class BinaryMatrix:
    """A dense matrix over GF(2) with bit-packed rows.

    Empty shapes (zero rows or zero columns) are valid and behave as the
    canonical zero map between the corresponding spaces.

    Args:
        rows: Number of rows.
        cols: Number of columns.
        data: ``(rows, ceil(cols / 64))`` array of ``uint64`` words.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative dimension")
        self.rows = int(rows)
        self.cols = int(cols)
        if data is None:
            data = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        if data.shape != (rows, _nwords(cols)):
            raise DimensionMismatch(f"packed data has shape {data.shape}")
        self.data = data

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array, shape: tuple[int, int] | None = None) -> "BinaryMatrix":
        arr = np.asarray(array)
        if arr.size == 0:
            if shape is None:
                shape = arr.shape if arr.ndim == 2 else (0, 0)
            return cls(*shape)
        if arr.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        arr = (arr.astype(np.int64) & 1).astype(np.uint8)
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BinaryVector], cols: int | None = None) -> "BinaryMatrix":
        if not rows:
            return cls(0, cols or 0)
        n = rows[0].length
        if any(r.length != n for r in rows):
            raise DimensionMismatch("rows of unequal length")
        return cls(len(rows), n, np.stack([r.data for r in rows]))

    @classmethod
    def from_columns(cls, cols: Sequence[BinaryVector], rows: int | None = None) -> "BinaryMatrix":
        if not cols:
            return cls(rows or 0, 0)
        return cls.from_rows(cols).T

    @classmethod
    def from_supports(cls, rows: int, cols: int, supports: Iterable[Iterable[int]]) -> "BinaryMatrix":
        """Build from per-row lists of column indices."""
        dense = np.zeros((rows, cols), dtype=np.uint8)
        for r, supp in enumerate(supports):
            for c in supp:
                dense[r, c] ^= 1
        return cls.from_dense(dense, shape=(rows, cols))

    # views -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data, self.cols)

    def row(self, i: int) -> BinaryVector:
        return BinaryVector(self.cols, self.data[i].copy())

    def column(self, j: int) -> BinaryVector:
        return BinaryVector.from_dense(self.to_dense()[:, j])

    def row_ints(self) -> list[int]:
        """Rows as Python integers (bit ``j`` is column ``j``)."""
        return [sum(int(w) << (WORD * k) for k, w in enumerate(r)) for r in self.data]

    def col_ints(self) -> list[int]:
        return self.T.row_ints()

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.data).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(np.int64)

    def is_zero(self) -> bool:
        return not self.data.any()

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, self.data.copy())

    @property
    def T(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T, shape=(self.cols, self.rows))

    def transpose(self) -> "BinaryMatrix":
        return self.T

    def select_columns(self, idx: Sequence[int]) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense()[:, list(idx)], shape=(self.rows, len(idx)))

    def select_rows(self, idx: Sequence[int]) -> "BinaryMatrix":
        idx = list(idx)
        if not idx:
            return BinaryMatrix(0, self.cols)
        return BinaryMatrix(len(idx), self.cols, self.data[idx].copy())

    def permute_columns(self, perm: Sequence[int]) -> "BinaryMatrix":
        """Return ``M'`` with ``M'[:, perm[j]] = M[:, j]``."""
        dense = self.to_dense()
        out = np.zeros_like(dense)
        out[:, list(perm)] = dense
        return BinaryMatrix.from_dense(out, shape=self.shape)

    def permute_rows(self, perm: Sequence[int]) -> "BinaryMatrix":
        """Return ``M'`` with ``M'[perm[i], :] = M[i, :]``."""
        out = np.zeros_like(self.data)
        out[list(perm)] = self.data
        return BinaryMatrix(self.rows, self.cols, out)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")
        return BinaryMatrix(self.rows, self.cols, self.data ^ other.data)

    __xor__ = __add__

    def __matmul__(self, other):
        if isinstance(other, BinaryVector):
            return self.matvec(other)
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return BinaryMatrix(self.rows, other.cols)
        # float64 BLAS is exact for inner dimensions below 2**53
        prod = self.to_dense().astype(np.float64) @ other.to_dense().astype(np.float64)
        return BinaryMatrix.from_dense(prod.astype(np.int64) & 1)

    def matvec(self, v: BinaryVector) -> BinaryVector:
        if v.length != self.cols:
            raise DimensionMismatch(f"vector length {v.length} vs {self.cols} columns")
        if self.rows == 0:
            return BinaryVector(0)
        bits = np.bitwise_count(self.data & v.data).sum(axis=1) & 1
        return BinaryVector.from_dense(bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return int(self.data[i, j // WORD] >> np.uint64(j % WORD)) & 1

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={int(self.row_weights().sum())})"

    # elimination -------------------------------------------------------

    def rref(self) -> tuple["BinaryMatrix", list[int]]:
        """Reduced row echelon form.

        Pivots are chosen leftmost column first and, within a column, the
        topmost available row, so the result is deterministic.

        Returns:
            The RREF matrix and the list of pivot columns.
        """
        data, pivots = _rref_words(self.data, self.cols)
        return BinaryMatrix(self.rows, self.cols, data), pivots

    def rank(self) -> int:
        return len(_rref_words(self.data, self.cols)[1])


def _rref_words(words: np.ndarray, ncols: int, limit: int | None = None):
    a = words.copy()
    nrows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols if limit is None else limit):
        if r == nrows:
            break
        w = c // WORD
        mask = np.uint64(1) << np.uint64(c % WORD)
        below = (a[r:, w] & mask) != 0
        if not below.any():
            continue
        p = r + int(np.argmax(below))
        if p != r:
            a[[r, p]] = a[[p, r]]
        hits = (a[:, w] & mask) != 0
        hits[r] = False
        if hits.any():
            a[hits] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: BinaryMatrix) -> int:
    return m.rank()


def kernel_basis_with_info(m: BinaryMatrix) -> tuple[list[BinaryVector], list[int]]:
    """Kernel basis together with its information set.

    The basis vector for free column ``f`` has a one at ``f``, ones at the
    pivot columns of rows with a one in column ``f``, and zeros at every
    other free column. The free columns therefore form an information set.

    Returns:
        ``(basis, free_columns)`` with ``basis[i]`` anchored at ``free_columns[i]``.
    """
    r, pivots = m.rref()
    dense = r.to_dense()[: len(pivots)]
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.uint8)
        v[f] = 1
        if pivots:
            v[np.asarray(pivots)[dense[:, f] == 1]] = 1
        basis.append(BinaryVector.from_dense(v))
    return basis, free


def kernel_basis(m: BinaryMatrix) -> list[BinaryVector]:
    """Basis of ``{x : m x = 0}``, deterministic given ``m``."""
    return kernel_basis_with_info(m)[0]


def solve(m: BinaryMatrix, b: BinaryVector) -> BinaryVector | None:
    """Return some ``x`` with ``m x = b``, or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    if b.length != m.rows:
        raise DimensionMismatch(f"right-hand side length {b.length} vs {m.rows} rows")
    aug = np.concatenate([m.to_dense(), b.to_dense().reshape(-1, 1)], axis=1)
    red, pivots = BinaryMatrix.from_dense(aug, shape=(m.rows, m.cols + 1)).rref()
    if pivots and pivots[-1] == m.cols:
        return None
    dense = red.to_dense()
    x = np.zeros(m.cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = dense[r, m.cols]
    return BinaryVector.from_dense(x)


def in_column_span(m: BinaryMatrix, b: BinaryVector) -> bool:
    return solve(m, b) is not None


def kron(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product; index ``(i, j)`` maps to ``i * cols(b) + j``."""
    shape = (a.rows * b.rows, a.cols * b.cols)
    if 0 in shape:
        return BinaryMatrix(*shape)
    return BinaryMatrix.from_dense(np.kron(a.to_dense(), b.to_dense()), shape=shape)


def kron_vec(u: BinaryVector, v: BinaryVector) -> BinaryVector:
    return BinaryVector.from_dense(np.kron(u.to_dense(), v.to_dense()))


def direct_sum(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Block-diagonal matrix ``[[a, 0], [0, b]]``."""
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.uint8)
    out[: a.rows, : a.cols] = a.to_dense()
    out[a.rows :, a.cols :] = b.to_dense()
    return BinaryMatrix.from_dense(out, shape=out.shape)


def block_matrix(blocks: Sequence[Sequence[BinaryMatrix]]) -> BinaryMatrix:
    """Assemble a matrix from a grid of blocks with consistent shapes."""
    heights = [row[0].rows for row in blocks]
    widths = [m.cols for m in blocks[0]] if blocks else []
    for row, h in zip(blocks, heights):
        if [m.cols for m in row] != widths or any(m.rows != h for m in row):
            raise DimensionMismatch("inconsistent block shapes")
    out = np.zeros((sum(heights), sum(widths)), dtype=np.uint8)
    r0 = 0
    for row, h in zip(blocks, heights):
        c0 = 0
        for m, w in zip(row, widths):
            if h and w:
                out[r0 : r0 + h, c0 : c0 + w] = m.to_dense()
            c0 += w
        r0 += h
    return BinaryMatrix.from_dense(out, shape=out.shape)


class XorBasis:
    """Incremental GF(2) span of Python-integer vectors.

    Used to extend a basis greedily: :meth:`insert` reports whether the new
    vector was independent of everything inserted before.
    """

    def __init__(self):
        self._pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            p = self._pivots.get(top)
            if p is None:
                return v
            v ^= p
        return 0

    def insert(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self._pivots[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._pivots)
