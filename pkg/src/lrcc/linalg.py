"""Dense exact matrices over a :class:`~lrcc.gf.FieldTower`.

Entries are kept as integer element encodings in an ``int64`` numpy array so
every row operation is a vectorized table lookup.  Elimination uses the first
nonzero entry at or below the current row as pivot, which makes every result
deterministic.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf import FieldElement, FieldTower

_CHUNK = 4_000_000


class LinalgError(ValueError):
    pass


class MixedTowers(LinalgError):
    pass


class Singular(LinalgError):
    pass


class NoSolution(LinalgError):
    pass


class IndexOutOfRange(LinalgError):
    pass


class ShapeMismatch(LinalgError):
    pass


# -- raw-array kernels ---------------------------------------------------------


def mat_mul(F: FieldTower, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of two 2-D element arrays."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"cannot multiply {A.shape} by {B.shape}")
    r, k = A.shape
    c = B.shape[1]
    if k == 0:
        return np.zeros((r, c), dtype=np.int64)
    if F.m == 1:
        # GF(p): integers mod p; accumulate in chunks of k to stay inside int64
        step = max(1, (2**62) // max(1, (F.p - 1) ** 2))
        out = np.zeros((r, c), dtype=np.int64)
        for s in range(0, k, step):
            out = (out + A[:, s : s + step] @ B[s : s + step, :]) % F.p
        return out
    rows_per_chunk = max(1, _CHUNK // max(1, k * c * F.m))
    out = np.empty((r, c), dtype=np.int64)
    for s in range(0, r, rows_per_chunk):
        prod = F.mul(A[s : s + rows_per_chunk, :, None], B[None, :, :])
        if F.p == 2:
            out[s : s + rows_per_chunk] = np.bitwise_xor.reduce(prod, axis=1)
        else:
            out[s : s + rows_per_chunk] = F.from_digits(F.to_digits(prod).sum(axis=1))
    return out


def rref_array(F: FieldTower, M: np.ndarray, col_order: Sequence[int] | None = None):
    """Reduced row echelon form of ``M``.

    If ``col_order`` is given, columns are visited in that order when looking
    for pivots (the matrix itself is not permuted).  Returns ``(R, pivots)``.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    nrows, ncols = R.shape
    cols = range(ncols) if col_order is None else col_order
    pivots: list[int] = []
    row = 0
    for col in cols:
        if row == nrows:
            break
        nz = np.flatnonzero(R[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        lead = int(R[row, col])
        if lead != 1:
            R[row] = F.mul(R[row], F.inv(lead))
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        if others.size:
            R[others] = F.sub(R[others], F.mul(R[others, col][:, None], R[row][None, :]))
        pivots.append(int(col))
        row += 1
    return R, pivots


def rank_array(F: FieldTower, M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_array(F, M)[1])


def kernel_array(F: FieldTower, M: np.ndarray) -> np.ndarray:
    """Rows spanning the right kernel {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_array(F, M)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        if pivots:
            K[i, pivots] = F.neg(R[: len(pivots), f])
    return K


def invert_array(F: FieldTower, M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ShapeMismatch("only square matrices can be inverted")
    if n == 0:
        return M.copy()
    R, pivots = rref_array(F, np.hstack([M, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return R[:, n:]


def solve_array(F: FieldTower, M: np.ndarray, b: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != M.shape[0]:
        raise ShapeMismatch("right-hand side length does not match row count")
    n = M.shape[1]
    R, pivots = rref_array(F, np.hstack([M, b[:, None]]))
    if pivots and pivots[-1] == n:
        raise NoSolution("system is inconsistent")
    x = np.zeros(n, dtype=np.int64)
    x[pivots] = R[: len(pivots), n]
    return x


# -- MatrixGF ----------------------------------------------------------------


class MatrixGF:
    """Dense matrix over one tower; immutable by convention."""

    __slots__ = ("tower", "data")

    def __init__(self, tower: FieldTower, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ShapeMismatch("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= tower.order):
            raise ValueError("entry outside the field")
        arr.setflags(write=False)
        self.tower = tower
        self.data = arr

    # construction helpers
    @classmethod
    def from_rows(cls, tower: FieldTower, rows: Sequence[Sequence]) -> "MatrixGF":
        def enc(x):
            if isinstance(x, FieldElement):
                if x.tower != tower:
                    raise MixedTowers("entry from another tower")
                return x.value
            if isinstance(x, (list, tuple)):
                return tower.encode(x)
            return int(x)

        return cls(tower, [[enc(x) for x in row] for row in rows])

    @classmethod
    def zeros(cls, tower: FieldTower, rows: int, cols: int) -> "MatrixGF":
        return cls(tower, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, tower: FieldTower, n: int) -> "MatrixGF":
        return cls(tower, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __getitem__(self, idx):
        out = self.data[idx]
        if np.ndim(out) == 0:
            return FieldElement(self.tower, int(out))
        if np.ndim(out) == 1:
            return MatrixGF(self.tower, np.asarray(out)[None, :])
        return MatrixGF(self.tower, out)

    def columns(self, idx) -> "MatrixGF":
        return MatrixGF(self.tower, self.data[:, list(idx)])

    def row_select(self, idx) -> "MatrixGF":
        return MatrixGF(self.tower, self.data[list(idx), :])

    def _check(self, other: "MatrixGF") -> None:
        if not isinstance(other, MatrixGF):
            raise TypeError("expected MatrixGF")
        if other.tower != self.tower:
            raise MixedTowers("matrices over different towers")

    def __matmul__(self, other):
        if isinstance(other, MatrixGF):
            self._check(other)
            return MatrixGF(self.tower, mat_mul(self.tower, self.data, other.data))
        vec = np.asarray(other, dtype=np.int64)
        return mat_mul(self.tower, self.data, vec.reshape(-1, 1)).reshape(-1)

    def __add__(self, other: "MatrixGF") -> "MatrixGF":
        self._check(other)
        return MatrixGF(self.tower, self.tower.add(self.data, other.data))

    def __sub__(self, other: "MatrixGF") -> "MatrixGF":
        self._check(other)
        return MatrixGF(self.tower, self.tower.sub(self.data, other.data))

    def __neg__(self) -> "MatrixGF":
        return MatrixGF(self.tower, self.tower.neg(self.data))

    def scale(self, c) -> "MatrixGF":
        return MatrixGF(self.tower, self.tower.mul(self.data, int(c)))

    @property
    def T(self) -> "MatrixGF":
        return MatrixGF(self.tower, self.data.T)

    def __eq__(self, other):
        return (
            isinstance(other, MatrixGF)
            and self.tower == other.tower
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.tower, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"MatrixGF({self.rows}x{self.cols} over GF({self.tower.order}))"

    def pretty(self, col_groups: Sequence[int] | None = None, row_groups: Sequence[int] | None = None) -> str:
        cells = [[self.tower.fmt(v) for v in row] for row in self.data]
        width = max((len(c) for row in cells for c in row), default=1)
        col_breaks = set(np.cumsum(col_groups)[:-1]) if col_groups else set()
        row_breaks = set(np.cumsum(row_groups)[:-1]) if row_groups else set()
        lines = []
        for i, row in enumerate(cells):
            if i in row_breaks:
                lines.append("-" * len(lines[-1]))
            parts = []
            for j, c in enumerate(row):
                if j in col_breaks:
                    parts.append("|")
                parts.append(c.rjust(width))
            lines.append(" ".join(parts))
        return "\n".join(lines)

    # serialization
    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "tower": self.tower.to_dict(),
            "entries": self.data.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict, tower: FieldTower | None = None) -> "MatrixGF":
        from .gf import make_tower

        if tower is None:
            t = d["tower"]
            tower = make_tower(t["p"], t["m"], t.get("modulus"), t.get("base_degree"))
        rows = d["entries"]
        M = cls.from_rows(tower, rows) if rows else cls.zeros(tower, d.get("rows", 0), d.get("cols", 0))
        if M.shape != (d.get("rows", M.rows), d.get("cols", M.cols)):
            raise ShapeMismatch("declared shape does not match entries")
        return M

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.data:
            w.writerow([self.tower.fmt(v) for v in row])
        return buf.getvalue()


def hstack(mats: Sequence[MatrixGF]) -> MatrixGF:
    for m in mats[1:]:
        mats[0]._check(m)
    return MatrixGF(mats[0].tower, np.hstack([m.data for m in mats]))


def vstack(mats: Sequence[MatrixGF]) -> MatrixGF:
    for m in mats[1:]:
        mats[0]._check(m)
    return MatrixGF(mats[0].tower, np.vstack([m.data for m in mats]))


def rref(M: MatrixGF) -> tuple[MatrixGF, list[int], int]:
    R, pivots = rref_array(M.tower, M.data)
    return MatrixGF(M.tower, R), pivots, len(pivots)


def rank(M: MatrixGF) -> int:
    return rank_array(M.tower, M.data)


def row_space_key(M: MatrixGF) -> MatrixGF:
    """Nonzero rows of the RREF: a canonical representative of the row space."""
    R, pivots, r = rref(M)
    return MatrixGF(M.tower, R.data[:r])


def invert(M: MatrixGF) -> MatrixGF:
    return MatrixGF(M.tower, invert_array(M.tower, M.data))


def kernel_basis(M: MatrixGF) -> MatrixGF:
    """Matrix whose rows form a basis of the right kernel of ``M``."""
    return MatrixGF(M.tower, kernel_array(M.tower, M.data))


def solve(M: MatrixGF, b) -> np.ndarray:
    """One solution ``x`` of ``M x = b`` (free variables set to zero)."""
    return solve_array(M.tower, M.data, b)


# -- block structure ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """Parity-check matrix in local/global block form.

    ``A[i]`` is the local block of group ``i`` (``local_rows x width``) and
    ``B[i]`` its global block (``global_rows x width``).  Groups are 0-based.
    """

    tower: FieldTower
    A: tuple[np.ndarray, ...]
    B: tuple[np.ndarray, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.A) != len(self.B) or not self.A:
            raise ShapeMismatch("need the same positive number of local and global blocks")
        shapes_a = {a.shape for a in self.A}
        shapes_b = {b.shape for b in self.B}
        if len(shapes_a) != 1 or len(shapes_b) != 1:
            raise ShapeMismatch("all local blocks and all global blocks must share a shape")
        if self.A[0].shape[1] != self.B[0].shape[1]:
            raise ShapeMismatch("local and global blocks differ in width")

    def __eq__(self, other):
        if not isinstance(other, BlockStructure):
            return NotImplemented
        return (
            self.tower == other.tower
            and self.g == other.g
            and all(np.array_equal(a, b) for a, b in zip(self.A + self.B, other.A + other.B))
        )

    __hash__ = None

    @property
    def g(self) -> int:
        return len(self.A)

    @property
    def width(self) -> int:
        return self.A[0].shape[1]

    @property
    def local_rows(self) -> int:
        return self.A[0].shape[0]

    @property
    def global_rows(self) -> int:
        return self.B[0].shape[0]

    def assemble(self) -> MatrixGF:
        return block_select(self, range(self.g))

    def group_columns(self, i: int) -> list[int]:
        w = self.width
        return list(range(i * w, (i + 1) * w))

    @classmethod
    def from_matrix(cls, H: MatrixGF, g: int, local_rows: int) -> "BlockStructure":
        if H.cols % g:
            raise ShapeMismatch(f"{H.cols} columns do not split into {g} blocks")
        w = H.cols // g
        lr = local_rows
        if H.rows < g * lr:
            raise ShapeMismatch("not enough rows for the local blocks")
        A, B = [], []
        for i in range(g):
            cols = slice(i * w, (i + 1) * w)
            top = H.data[: g * lr, cols]
            mine = top[i * lr : (i + 1) * lr]
            rest = np.delete(top, range(i * lr, (i + 1) * lr), axis=0)
            if rest.size and rest.any():
                raise ShapeMismatch(f"block column {i} has nonzero entries outside its local rows")
            A.append(mine.copy())
            B.append(H.data[g * lr :, cols].copy())
        return cls(H.tower, tuple(A), tuple(B))

    def to_dict(self) -> dict:
        return {
            "tower": self.tower.to_dict(),
            "A": [a.tolist() for a in self.A],
            "B": [b.tolist() for b in self.B],
        }

    @classmethod
    def from_dict(cls, d: dict, tower: FieldTower) -> "BlockStructure":
        A = tuple(np.array(a, dtype=np.int64).reshape(len(a), -1) for a in d["A"])
        B = tuple(np.array(b, dtype=np.int64).reshape(len(b), -1) if b else np.zeros((0, A[0].shape[1]), dtype=np.int64) for b in d["B"])
        return cls(tower, A, B)


def block_select(H: BlockStructure, P) -> MatrixGF:
    """Sub-matrix keeping the listed groups: their local blocks on the
    diagonal and their global blocks side by side underneath.

    Groups appear in the order given by ``P`` (0-based).
    """
    P = list(P)
    if not P:
        raise IndexOutOfRange("empty block selection")
    for i in P:
        if not 0 <= i < H.g:
            raise IndexOutOfRange(f"block {i} outside 0..{H.g - 1}")
    if len(set(P)) != len(P):
        raise IndexOutOfRange("repeated block in selection")
    lr, w, gr = H.local_rows, H.width, H.global_rows
    v = len(P)
    out = np.zeros((v * lr + gr, v * w), dtype=np.int64)
    for j, i in enumerate(P):
        out[j * lr : (j + 1) * lr, j * w : (j + 1) * w] = H.A[i]
        out[v * lr :, j * w : (j + 1) * w] = H.B[i]
    return MatrixGF(H.tower, out)
