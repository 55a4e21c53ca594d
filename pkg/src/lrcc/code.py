"""Linear codes given by a parity-check matrix."""

from __future__ import annotations

import os
import threading
from typing import Sequence

import numpy as np

from .gf import FieldTower, make_tower
from .linalg import MatrixGF, kernel_array, mat_mul, rank_array, rref_array, row_space_key

DEFAULT_WORK_CEILING = 10**7
ENUMERATION_LIMIT = 1 << 16


class CodeError(ValueError):
    pass


class ZeroCode(CodeError):
    pass


class EmptySupport(CodeError):
    pass


class DimensionMismatch(CodeError):
    pass


class WorkCeilingExceeded(CodeError):
    """Raised when an exhaustive search would exceed the work budget.

    Attributes:
        lower_bound: best proven lower bound on the quantity searched for
            (for distance searches), or ``None``.
        work: work units spent before giving up.
        progress: optional free-form progress count (e.g. patterns checked).
    """

    def __init__(self, message: str, lower_bound: int | None = None, work: int = 0, progress=None):
        super().__init__(message)
        self.lower_bound = lower_bound
        self.work = work
        self.progress = progress


def default_ceiling() -> int:
    env = os.environ.get("LRCC_WORK_CEILING")
    if env:
        try:
            value = int(float(env))
        except ValueError:
            raise CodeError(f"LRCC_WORK_CEILING={env!r} is not a number") from None
        if value <= 0:
            raise CodeError("LRCC_WORK_CEILING must be positive")
        return value
    return DEFAULT_WORK_CEILING


class LinearCode:
    """A linear code ``{c : H c^T = 0}``.

    Attributes:
        H: parity-check matrix (any rank; redundant rows are allowed).
        n: length.
        k: dimension, ``n - rank(H)``.
        metadata: free-form dictionary carried through serialization.
    """

    def __init__(self, H: MatrixGF, metadata: dict | None = None, d: int | None = None):
        self.H = H
        self.tower: FieldTower = H.tower
        self.n = H.cols
        self.redundancy = rank_array(self.tower, H.data) if H.rows else 0
        self.k = self.n - self.redundancy
        self.metadata = dict(metadata or {})
        self._d = d
        self._G = None
        self._lock = threading.Lock()

    def __repr__(self):
        d = "?" if self._d is None else self._d
        return f"LinearCode[{self.n}, {self.k}, {d}] over GF({self.tower.order})"

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.min_distance())

    # -- generator / membership -------------------------------------------

    def generator(self) -> np.ndarray:
        """Rows form a basis of the code (kernel of H, RREF-derived)."""
        if self._G is None:
            G = kernel_array(self.tower, self.H.data) if self.H.rows else np.eye(self.n, dtype=np.int64)
            G.setflags(write=False)
            self._G = G
        return self._G

    def syndrome(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64).reshape(-1)
        if c.shape[0] != self.n:
            raise DimensionMismatch(f"vector of length {c.shape[0]}, code length {self.n}")
        if self.H.rows == 0:
            return np.zeros(0, dtype=np.int64)
        return mat_mul(self.tower, self.H.data, c[:, None]).reshape(-1)

    def contains(self, c) -> bool:
        return not self.syndrome(c).any()

    def encode(self, message) -> np.ndarray:
        m = np.asarray(message, dtype=np.int64).reshape(-1)
        if m.shape[0] != self.k:
            raise DimensionMismatch(f"message of length {m.shape[0]}, dimension {self.k}")
        if self.k == 0:
            return np.zeros(self.n, dtype=np.int64)
        return mat_mul(self.tower, m[None, :], self.generator()).reshape(-1)

    def random_codeword(self, rng: np.random.Generator) -> np.ndarray:
        return self.encode(rng.integers(0, self.tower.order, size=self.k))

    def same_code(self, other: "LinearCode") -> bool:
        """True iff both codes have the same set of codewords."""
        if self.tower != other.tower or self.n != other.n or self.k != other.k:
            return False
        return row_space_key(self.H) == row_space_key(other.H)

    # -- distance -----------------------------------------------------------

    def min_distance(self, ceiling: int | None = None, method: str = "auto") -> int:
        """Exact minimum distance.

        ``method`` is ``"auto"``, ``"enumerate"`` (all q^k codewords) or
        ``"columns"`` (smallest dependent set of columns of H).
        """
        if self.k == 0:
            raise ZeroCode("the zero code has no minimum distance")
        if method == "auto" and self._d is not None:
            return self._d
        ceiling = default_ceiling() if ceiling is None else ceiling
        with self._lock:
            if method == "auto" and self._d is not None:
                return self._d
            if method == "auto":
                method = "enumerate" if self._enumeration_cost() <= min(ceiling, ENUMERATION_LIMIT * self.n) else "columns"
            if method == "enumerate":
                d = self._distance_by_enumeration(ceiling)
            elif method == "columns":
                d = self._distance_by_columns(ceiling)
            else:
                raise ValueError(f"unknown method {method!r}")
            self._d = d
            return d

    def _enumeration_cost(self) -> int:
        return self.tower.order**self.k * self.n

    def _distance_by_enumeration(self, ceiling: int) -> int:
        cost = self._enumeration_cost()
        if cost > ceiling:
            raise WorkCeilingExceeded(f"codeword enumeration needs {cost} steps", lower_bound=1, work=0)
        F = self.tower
        G = self.generator()
        words = np.zeros((1, self.n), dtype=np.int64)
        scalars = np.arange(F.order, dtype=np.int64)
        for g in G:
            multiples = F.mul(scalars[:, None], g[None, :])
            words = F.add(words[None, :, :], multiples[:, None, :]).reshape(-1, self.n)
        weights = np.count_nonzero(words, axis=1)
        return int(weights[weights > 0].min())

    def _distance_by_columns(self, ceiling: int) -> int:
        F = self.tower
        H = rref_array(F, self.H.data)[0][: self.redundancy]
        n = self.n
        rho = self.redundancy
        work = 0

        if np.any(~H.any(axis=0)):
            return 1

        def dependent_exists(depth: int, start: int, rem: np.ndarray) -> bool:
            # rem: columns start..n-1 reduced against the current basis
            nonlocal work
            for j in range(rem.shape[1] - 1):
                v = rem[:, j]
                piv = int(np.flatnonzero(v)[0])
                b = F.mul(v, F.inv(int(v[piv])))
                tail = rem[:, j + 1 :]
                tail = F.sub(tail, F.mul(b[:, None], tail[piv][None, :]))
                work += tail.shape[1]
                if work > ceiling:
                    raise _Stop()
                if depth == 1:
                    if np.any(~tail.any(axis=0)):
                        return True
                elif dependent_exists(depth - 1, start + j + 1, tail):
                    return True
            return False

        w = 2
        try:
            while w <= rho + 1:
                if dependent_exists(w - 1, 0, H):
                    return w
                w += 1
        except _Stop:
            raise WorkCeilingExceeded(
                f"column-dependence search exceeded {ceiling} steps while testing weight {w}",
                lower_bound=w,
                work=work,
            ) from None
        raise AssertionError("n - k + 1 columns are always dependent")  # pragma: no cover

    def is_mds(self, ceiling: int | None = None) -> bool:
        return self.min_distance(ceiling) == self.n - self.k + 1

    # -- puncturing ---------------------------------------------------------

    def puncture(self, S: Sequence[int]) -> "LinearCode":
        """Restriction of every codeword to the coordinates ``S`` (in that order).

        The parity-check matrix is obtained by shortening the dual: H is
        row-reduced with the deleted coordinates eliminated first, and the
        rows supported only on ``S`` are kept.
        """
        S = [int(s) for s in S]
        if not S:
            raise EmptySupport("cannot puncture to an empty coordinate set")
        if len(set(S)) != len(S) or min(S) < 0 or max(S) >= self.n:
            raise EmptySupport(f"invalid coordinate set {S}")
        if S == list(range(self.n)):
            return self
        keep = set(S)
        outside = [c for c in range(self.n) if c not in keep]
        R, pivots = rref_array(self.tower, self.H.data, col_order=outside + S)
        rows = [i for i, p in enumerate(pivots) if p in keep]
        Hs = R[np.array(rows, dtype=np.int64)][:, S] if rows else np.zeros((0, len(S)), dtype=np.int64)
        meta = {"punctured_from": self.n, "coordinates": S}
        return LinearCode(MatrixGF(self.tower, Hs), metadata=meta)

    # -- serialization --------------------------------------------------------

    def to_dict(self, with_distance: bool = False) -> dict:
        out = {
            "tower": self.tower.to_dict(),
            "H": self.H.to_dict()["entries"],
            "n": self.n,
            "k": self.k,
            "metadata": self.metadata,
        }
        if with_distance or self._d is not None:
            out["d"] = self.min_distance() if self.k else None
        return out

    @classmethod
    def from_dict(cls, d: dict, tower: FieldTower | None = None) -> "LinearCode":
        if tower is None:
            t = d["tower"]
            tower = make_tower(t["p"], t["m"], t.get("modulus"), t.get("base_degree"))
        rows = d["H"]
        if rows:
            H = MatrixGF.from_rows(tower, rows)
        else:
            H = MatrixGF.zeros(tower, 0, int(d["n"]))
        if "n" in d and H.cols != d["n"]:
            raise CodeError(f"declared n={d['n']} but H has {H.cols} columns")
        code = cls(H, metadata=d.get("metadata"))
        if "k" in d and code.k != d["k"]:
            raise CodeError(f"declared k={d['k']} but H has nullity {code.k}")
        return code


class _Stop(Exception):
    pass
