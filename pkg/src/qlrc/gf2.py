"""Dense bit-packed linear algebra over GF(2).

Rows are stored as Python ints: bit ``j`` of a row is the entry in column ``j``.
Elimination always picks the leftmost (lowest index) available pivot, so every
basis returned here is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Operands live in spaces of different dimension."""


class NotSelfOrthogonal(ValueError):
    """row(M) is not contained in ker(M), i.e. M M^T != 0."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_to_int(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def int_to_bits(x: int, length: int) -> tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(length))


def support(x: int) -> list[int]:
    out = []
    j = 0
    while x:
        if x & 1:
            out.append(j)
        x >>= 1
        j += 1
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Immutable binary matrix with bit-packed rows."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix shape must be non-negative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for i, row in enumerate(self.data):
            if row < 0 or row >= limit:
                raise ValueError(f"row {i} has bits outside {self.cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError(f"row {i} has length {len(row)}, expected {cols}")
        return cls(len(rows), cols, tuple(bits_to_int(r) for r in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {idx} out of range for shape {self.shape}")
        return (self.data[i] >> j) & 1

    def row_bits(self, i: int) -> tuple[int, ...]:
        return int_to_bits(self.data[i], self.cols)

    def to_lists(self) -> list[list[int]]:
        return [list(self.row_bits(i)) for i in range(self.rows)]

    def weight(self) -> int:
        return sum(popcount(r) for r in self.data)

    def transpose(self) -> BitMatrix:
        cols = [0] * self.cols
        for i, row in enumerate(self.data):
            for j in support(row):
                cols[j] |= 1 << i
        return BitMatrix(self.cols, self.rows, tuple(cols))

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def matvec(self, v: int) -> int:
        """Return M v as a packed vector of length ``rows``."""
        out = 0
        for i, row in enumerate(self.data):
            if popcount(row & v) & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for row in self.data:
            acc = 0
            for k in support(row):
                acc ^= other.data[k]
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise DimensionMismatch("column counts differ")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def flip(self, i: int, j: int) -> BitMatrix:
        """Copy with entry (i, j) toggled."""
        self[i, j]
        data = list(self.data)
        data[i] ^= 1 << j
        return BitMatrix(self.rows, self.cols, tuple(data))

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in self.row_bits(i)) for i in range(self.rows))


class _Echelon:
    """Incremental echelon basis keyed by lowest set bit."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            low = v & -v
            p = self.pivots.get(low)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[v & -v] = v
        return True

    def __len__(self) -> int:
        return len(self.pivots)


def _rank_of(vectors: Iterable[int]) -> int:
    ech = _Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def rref(M: BitMatrix) -> tuple[list[int], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns), leftmost pivots first."""
    work = list(M.data)
    pivots: list[int] = []
    top = 0
    for col in range(M.cols):
        bit = 1 << col
        found = next((i for i in range(top, len(work)) if work[i] & bit), None)
        if found is None:
            continue
        work[top], work[found] = work[found], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent packed vectors spanning a subspace of GF(2)^ambient_dim."""

    ambient_dim: int
    vectors: tuple[int, ...]

    def __post_init__(self) -> None:
        limit = 1 << self.ambient_dim
        if any(v < 0 or v >= limit for v in self.vectors):
            raise ValueError("vector longer than ambient dimension")
        if _rank_of(self.vectors) != len(self.vectors):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def as_matrix(self) -> BitMatrix:
        return BitMatrix(len(self.vectors), self.ambient_dim, self.vectors)

    def contains(self, v: int) -> bool:
        ech = _Echelon()
        for u in self.vectors:
            ech.add(u)
        return ech.reduce(v) == 0

    def contains_all(self, vs: Iterable[int]) -> bool:
        ech = _Echelon()
        for u in self.vectors:
            ech.add(u)
        return all(ech.reduce(v) == 0 for v in vs)


def rank(M: BitMatrix) -> int:
    return len(rref(M)[0])


def row_space_basis(M: BitMatrix) -> SubspaceBasis:
    rows, _ = rref(M)
    return SubspaceBasis(M.cols, tuple(rows))


def kernel_basis(M: BitMatrix) -> SubspaceBasis:
    """Basis of {x : M x = 0}, one vector per free column in increasing order."""
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    vectors = []
    for f in range(M.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(rows, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        vectors.append(v)
    return SubspaceBasis(M.cols, tuple(vectors))


def is_self_orthogonal(M: BitMatrix) -> bool:
    """True iff M M^T = 0 over GF(2)."""
    data = M.data
    for i, a in enumerate(data):
        for b in data[i:]:
            if popcount(a & b) & 1:
                return False
    return True


def complement_in_kernel(M: BitMatrix) -> SubspaceBasis:
    """Basis U with U + row(M) = ker(M) as a direct sum.

    Kernel basis vectors are tried in order and kept whenever they are
    independent of row(M) and of the vectors already kept.
    """
    if not is_self_orthogonal(M):
        raise NotSelfOrthogonal("row(M) is not contained in ker(M)")
    ech = _Echelon()
    for row in rref(M)[0]:
        ech.add(row)
    kept = [v for v in kernel_basis(M).vectors if ech.add(v)]
    return SubspaceBasis(M.cols, tuple(kept))


def tensor_packed(u: int, v: int, v_len: int) -> int:
    """Kronecker product of packed vectors; entry i*v_len + j is u_i v_j."""
    out = 0
    for i in support(u):
        out |= v << (i * v_len)
    return out


def tensor_vector(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return int_to_bits(tensor_packed(bits_to_int(u), bits_to_int(v), len(v)), len(u) * len(v))


def tensor_basis(A: SubspaceBasis, B: SubspaceBasis) -> SubspaceBasis:
    return SubspaceBasis(
        A.ambient_dim * B.ambient_dim,
        tuple(tensor_packed(a, b, B.ambient_dim) for a in A for b in B),
    )


def span_union_rank(*bases: SubspaceBasis) -> int:
    dims = {b.ambient_dim for b in bases}
    if len(dims) > 1:
        raise DimensionMismatch(f"ambient dimensions differ: {sorted(dims)}")
    return _rank_of(v for b in bases for v in b)


def intersection_dim(A: SubspaceBasis, B: SubspaceBasis) -> int:
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {A.ambient_dim} != {B.ambient_dim}")
    return A.dim + B.dim - span_union_rank(A, B)


def restrict_to_support(basis: SubspaceBasis, mask: int) -> SubspaceBasis:
    """Basis of the vectors of span(basis) whose support lies inside ``mask``."""
    outside = ((1 << basis.ambient_dim) - 1) & ~mask
    work = list(basis.vectors)
    top = 0
    for col in support(outside):
        bit = 1 << col
        found = next((i for i in range(top, len(work)) if work[i] & bit), None)
        if found is None:
            continue
        work[top], work[found] = work[found], work[top]
        for i in range(len(work)):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        top += 1
    return SubspaceBasis(basis.ambient_dim, tuple(work[top:]))
