"""Merge conversion of t codewords into one codeword of a longer code.

A plan carves ``t`` initial codes and one final code out of a single base
code in block form (``g`` repair groups of width ``r+delta-1``, dimension
``l*r``):

* group windows ``P_1..P_t`` of ``s = l/t`` groups each, plus the last
  ``g - l`` groups ``P`` shared by every initial code;
* initial code ``i`` is the block selection of ``P_i`` and ``P``;
* the final code keeps every ``P_i`` unchanged and ``h`` of the shared groups,
  whose content is the sum of the corresponding parts of the initial
  codewords.

The final parity-check matrix comes from eliminating the dropped shared
groups with one invertible block ``M13`` common to all initial codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .code import LinearCode
from .construct import BaseCode, scaling_certificate
from .gf import FieldTower
from .linalg import (
    BlockStructure,
    MatrixGF,
    block_select,
    invert_array,
    mat_mul,
    rank_array,
    row_space_key,
    solve_array,
)
from .lrc import AccessBound, BoundInputs, LocalityPartition, Regime, access_lb_new, singleton_bound


class ConvertError(ValueError):
    pass


class HypothesisViolated(ConvertError):
    pass


class NoInvertiblePermutation(ConvertError):
    pass


class NotACodeword(ConvertError):
    def __init__(self, index: int, message: str = ""):
        super().__init__(message or f"input {index} is not a codeword of its initial code")
        self.index = index


class LocalDecodeFailure(ConvertError):
    pass


class ScalingNotCertified(ConvertError):
    pass


def _blockdiag(mats: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _hcat(blocks: Sequence[np.ndarray], rows: int) -> np.ndarray:
    return np.hstack(blocks) if blocks else np.zeros((rows, 0), dtype=np.int64)


@dataclass
class ConversionPlan:
    """Static data of one conversion; immutable after :func:`make_plan`."""

    tower: FieldTower
    blocks: BlockStructure
    base_code: LinearCode
    r: int
    delta: int
    g: int
    l: int
    t: int
    h: int
    s: int
    P_i: list[list[int]]
    P: list[int]
    regime: Regime
    m_rows: list[int]
    n_rows: list[int]
    M13: np.ndarray
    M13_inv: np.ndarray
    N13: np.ndarray
    Hbar: list[np.ndarray]
    H_F: MatrixGF
    initial: list[LinearCode] = field(repr=False)
    final: LinearCode = field(repr=False)

    @property
    def width(self) -> int:
        return self.r + self.delta - 1

    @property
    def retained(self) -> list[int]:
        return self.P[: self.h]

    @property
    def dropped(self) -> list[int]:
        return self.P[self.h :]

    @property
    def n_I(self) -> int:
        return (self.s + self.g - self.l) * self.width

    @property
    def k_I(self) -> int:
        return self.s * self.r

    @property
    def n_F(self) -> int:
        return (self.l + self.h) * self.width

    @property
    def k_F(self) -> int:
        return self.l * self.r

    def final_columns(self) -> list[int]:
        """Base-code coordinates of the final code, in final order."""
        w = self.width
        order = [b for Pi in self.P_i for b in Pi] + self.retained
        return [b * w + j for b in order for j in range(w)]

    def final_partition(self) -> LocalityPartition:
        return LocalityPartition.contiguous(self.l + self.h, self.width, self.r, self.delta)

    def initial_partition(self) -> LocalityPartition:
        return LocalityPartition.contiguous(self.s + self.g - self.l, self.width, self.r, self.delta)

    def design_distance(self) -> int:
        """Final distance if the final code meets the regime's Singleton-type bound."""
        return singleton_bound(self.n_F, self.k_F, self.r, self.delta, self.regime)

    def bound_inputs(self, d: int | None = None) -> BoundInputs:
        return BoundInputs(
            n_F=self.n_F,
            k=self.k_I,
            t=self.t,
            r=self.r,
            delta=self.delta,
            d=self.design_distance() if d is None else d,
            n_I=self.n_I,
            regime=self.regime,
        )

    def to_dict(self) -> dict:
        return {
            "schema": "lrcc.plan/1",
            "tower": self.tower.to_dict(),
            "base": {
                "H": self.base_code.H.data.tolist(),
                "g": self.g,
                "local_rows": self.blocks.local_rows,
                "r": self.r,
                "delta": self.delta,
            },
            "g": self.g,
            "l": self.l,
            "t": self.t,
            "h": self.h,
            "s": self.s,
            "regime": self.regime.value,
            "P_i": self.P_i,
            "P": self.P,
            "m_rows": self.m_rows,
            "n_rows": self.n_rows,
            "M13": self.M13.tolist(),
            "M13_inv": self.M13_inv.tolist(),
            "N13": self.N13.tolist(),
            "Hbar": [H.tolist() for H in self.Hbar],
            "initial_H": [c.H.data.tolist() for c in self.initial],
            "H_F": self.H_F.data.tolist(),
            "n_I": self.n_I,
            "k_I": self.k_I,
            "n_F": self.n_F,
            "k_F": self.k_F,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConversionPlan":
        """Rebuild a plan from its JSON form and check the stored matrices."""
        from .gf import FieldTower as _FT

        F = _FT.from_dict(d["tower"])
        b = d["base"]
        H = MatrixGF(F, b["H"])
        blocks = BlockStructure.from_matrix(H, int(b["g"]), int(b["local_rows"]))
        part = LocalityPartition.contiguous(blocks.g, blocks.width, int(b["r"]), int(b["delta"]))
        base = BaseCode(LinearCode(H), part, blocks, "custom")
        groups = [list(p) for p in d["P_i"]] + [list(d["P"])]
        plan = make_plan(base, int(d["t"]), int(d["h"]), regime=Regime(d.get("regime", "standard")), groups=groups)
        if "H_F" in d and plan.H_F.data.tolist() != d["H_F"]:
            raise ConvertError("stored final parity-check matrix does not match the rebuilt plan")
        return plan


def make_plan(
    base: BaseCode,
    t: int,
    h: int,
    regime: Regime | str = Regime.STANDARD,
    groups: Sequence[Sequence[int]] | None = None,
) -> ConversionPlan:
    """Build the conversion plan for ``t`` initial codes keeping ``h`` shared groups.

    Args:
        base: base code in block form; assumed to be an optimal LRC (this is
            the caller's responsibility and is not recomputed here).
        t: number of initial codes; must divide ``l = dim / r``.
        h: number of shared groups kept in the final code.
        regime: distance-bound regime used when auditing access cost.
        groups: optional explicit ``[P_1, ..., P_t, P]`` (0-based group
            indices); defaults to contiguous windows with ``P`` last.

    Raises:
        HypothesisViolated: when ``t`` does not divide ``l`` or
            ``l/t > g-l >= h >= 0`` fails.
        NoInvertiblePermutation: when no choice of global rows makes the
            elimination block invertible.
    """
    bs = base.blocks
    F = bs.tower
    r, delta = base.r, base.delta
    g, w = bs.g, bs.width
    k = base.code.k
    if w != r + delta - 1:
        raise HypothesisViolated(f"group width {w} != r+delta-1 = {r + delta - 1}")
    if k % r:
        raise HypothesisViolated(f"base dimension {k} is not a multiple of r = {r}")
    l = k // r
    if t < 1 or l % t:
        raise HypothesisViolated(f"t | l fails: t = {t}, l = {l}")
    s = l // t
    if not s > g - l:
        raise HypothesisViolated(f"l/t > g-l fails: l/t = {s}, g-l = {g - l}")
    if not g - l >= h >= 0:
        raise HypothesisViolated(f"g-l >= h >= 0 fails: g-l = {g - l}, h = {h}")

    if groups is None:
        P_i = [list(range(i * s, (i + 1) * s)) for i in range(t)]
        P = list(range(l, g))
    else:
        groups = [list(map(int, G)) for G in groups]
        if len(groups) != t + 1:
            raise HypothesisViolated("explicit groups must list P_1..P_t and P")
        P_i, P = groups[:t], groups[t]
        if any(len(G) != s for G in P_i) or len(P) != g - l:
            raise HypothesisViolated("explicit groups have the wrong sizes")
        if sorted(b for G in groups for b in G) != list(range(g)):
            raise HypothesisViolated("explicit groups do not partition the block indices")

    retained, dropped = P[:h], P[h:]
    lr, gr = bs.local_rows, bs.global_rows

    # elimination block: local rows of dropped groups plus greedily chosen global rows
    W_drop = _blockdiag([bs.A[j] for j in dropped]) if dropped else np.zeros((0, 0), dtype=np.int64)
    B_drop = _hcat([bs.B[j] for j in dropped], gr)
    target = len(dropped) * w
    chosen: list[int] = []
    current = W_drop
    cur_rank = rank_array(F, current) if current.size else 0
    for row in range(gr):
        if cur_rank == target:
            break
        trial = np.vstack([current, B_drop[row : row + 1]]) if current.size else B_drop[row : row + 1]
        tr = rank_array(F, trial)
        if tr > cur_rank:
            chosen.append(row)
            current, cur_rank = trial, tr
    if cur_rank != target or current.shape[0] != target:
        raise NoInvertiblePermutation(
            f"elimination block reaches rank {cur_rank} of {target}; the base code is not optimal"
        )
    rest = [row for row in range(gr) if row not in chosen]
    M13 = current.reshape(target, target)
    M13_inv = invert_array(F, M13)
    N13 = B_drop[rest] if dropped else np.zeros((len(rest), 0), dtype=np.int64)
    X = mat_mul(F, N13, M13_inv)

    def reduce(cols: list[int]) -> np.ndarray:
        # N_{.} - N13 M13^{-1} M_{.} on the given groups
        Bc = _hcat([bs.B[j] for j in cols], gr)
        M = np.vstack([np.zeros((len(dropped) * lr, Bc.shape[1]), dtype=np.int64), Bc[chosen]])
        return F.sub(Bc[rest], mat_mul(F, X, M))

    Nbar_ret = reduce(retained)
    W_ret = _blockdiag([bs.A[j] for j in retained]) if retained else np.zeros((0, 0), dtype=np.int64)
    Hbar = []
    heads = []
    for G in P_i:
        W_i = _blockdiag([bs.A[j] for j in G])
        Nbar_i = reduce(G)
        heads.append((W_i, Nbar_i))
        top = np.hstack([W_i, np.zeros((W_i.shape[0], W_ret.shape[1]), dtype=np.int64)])
        mid = np.hstack([np.zeros((W_ret.shape[0], W_i.shape[1]), dtype=np.int64), W_ret])
        Hbar.append(np.vstack([top, mid, np.hstack([Nbar_i, Nbar_ret])]))

    HF = np.vstack(
        [
            _blockdiag([W for W, _ in heads] + ([W_ret] if retained else [])),
            np.hstack([N for _, N in heads] + [Nbar_ret]),
        ]
    )
    initial = [LinearCode(block_select(bs, G + P)) for G in P_i]
    final = LinearCode(MatrixGF(F, HF), metadata={"family": "final"})
    return ConversionPlan(
        tower=F,
        blocks=bs,
        base_code=base.code,
        r=r,
        delta=delta,
        g=g,
        l=l,
        t=t,
        h=h,
        s=s,
        P_i=P_i,
        P=P,
        regime=Regime(regime),
        m_rows=chosen,
        n_rows=rest,
        M13=M13,
        M13_inv=M13_inv,
        N13=N13,
        Hbar=Hbar,
        H_F=MatrixGF(F, HF),
        initial=initial,
        final=final,
    )


def final_matches_puncture(plan: ConversionPlan) -> bool:
    """Row space of the final parity-check matrix equals that of the base code
    punctured (by dual shortening) to the final coordinates."""
    punct = plan.base_code.puncture(plan.final_columns())
    return row_space_key(plan.H_F) == row_space_key(punct.H)


# -- execution ----------------------------------------------------------------------------


@dataclass
class ConversionTrace:
    """Access ledger of one conversion.

    Coordinates in ``U`` and ``D`` refer to each initial codeword; ``W`` refers
    to the final codeword.
    """

    U: list[list[int]]
    D: list[list[int]]
    W: list[int]
    final_codeword: np.ndarray
    variant: str = "generic"

    @property
    def rho_r(self) -> int:
        return sum(len(d) for d in self.D)

    @property
    def rho_w(self) -> int:
        return len(self.W)

    def to_dict(self) -> dict:
        return {
            "schema": "lrcc.trace/1",
            "variant": self.variant,
            "U_i": self.U,
            "D_i": self.D,
            "W": self.W,
            "rho_r": self.rho_r,
            "rho_w": self.rho_w,
            "final_codeword": [int(x) for x in self.final_codeword],
        }


def _check_inputs(codes: Sequence[LinearCode], codewords: Sequence) -> list[np.ndarray]:
    if len(codewords) != len(codes):
        raise ConvertError(f"expected {len(codes)} codewords, got {len(codewords)}")
    out = []
    for i, (C, c) in enumerate(zip(codes, codewords)):
        c = np.asarray(c, dtype=np.int64).reshape(-1)
        if c.shape[0] != C.n or not C.contains(c):
            raise NotACodeword(i)
        out.append(c)
    return out


def _local_fill(F: FieldTower, A: np.ndarray, read: np.ndarray, r: int) -> np.ndarray:
    """Recover the last w-r symbols of a group from its first r symbols."""
    w = A.shape[1]
    if w == r:
        return read.copy()
    Ae, Ar = A[:, r:], A[:, :r]
    if Ae.shape[0] != Ae.shape[1] or rank_array(F, Ae) != Ae.shape[1]:
        raise LocalDecodeFailure("local block cannot recover its last delta-1 symbols")
    rhs = F.neg(mat_mul(F, Ar, read[:, None]).reshape(-1))
    return np.concatenate([read, solve_array(F, Ae, rhs)])


def _read_tails(plan: ConversionPlan, words: Sequence[np.ndarray]) -> tuple[list[np.ndarray], list[list[int]]]:
    """Read r symbols of each retained group of each word and fill the rest locally."""
    F, w, s, r = plan.tower, plan.width, plan.s, plan.r
    tails, reads = [], []
    for c in words:
        parts, D = [], []
        for j, b in enumerate(plan.retained):
            start = (s + j) * w
            idx = list(range(start, start + r))
            D.extend(idx)
            parts.append(_local_fill(F, plan.blocks.A[b], c[idx], r))
        tails.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
        reads.append(D)
    return tails, reads


def _assemble(plan: ConversionPlan, words: Sequence[np.ndarray], c_star: np.ndarray, reads, variant: str) -> ConversionTrace:
    sw = plan.s * plan.width
    final = np.concatenate([c[:sw] for c in words] + [c_star])
    if not plan.final.contains(final):
        raise ConvertError("produced word is not a codeword of the final code")
    U = [list(range(sw)) for _ in words]
    W = list(range(plan.t * sw, plan.t * sw + len(c_star)))
    return ConversionTrace(U, reads, W, final, variant)


def convert(plan: ConversionPlan, codewords: Sequence) -> ConversionTrace:
    """Merge ``t`` initial codewords; reads ``t*h*r`` symbols, writes ``h(r+delta-1)``."""
    words = _check_inputs(plan.initial, codewords)
    tails, reads = _read_tails(plan, words)
    F = plan.tower
    c_star = np.zeros(plan.h * plan.width, dtype=np.int64)
    for tl in tails:
        c_star = F.add(c_star, tl)
    return _assemble(plan, words, c_star, reads, "generic")


def convert_direct(plan: ConversionPlan, codewords: Sequence) -> np.ndarray:
    """Oracle: the final codeword computed by reading whole retained groups."""
    words = _check_inputs(plan.initial, codewords)
    sw, n = plan.s * plan.width, plan.h * plan.width
    F = plan.tower
    c_star = np.zeros(n, dtype=np.int64)
    for c in words:
        c_star = F.add(c_star, c[sw : sw + n])
    return np.concatenate([c[:sw] for c in words] + [c_star])


# -- same-initial-code variant ---------------------------------------------------------------


@dataclass
class SameInitialCertificate:
    """Diagonal matrices ``D_i`` with ``final head blocks of P_i = D_i * initial head``."""

    initial: LinearCode
    initial_blocks: BlockStructure
    D: list[np.ndarray]

    def global_part(self, i: int, local_rows: int) -> np.ndarray:
        return self.D[i][local_rows:]


def certify_same_initial(plan: ConversionPlan, initial_blocks: BlockStructure) -> SameInitialCertificate:
    """Check that every ``P_i`` head of the final code is a row scaling of the
    head of one initial code given in block form (``s`` head groups followed
    by ``g-l`` tail groups)."""
    if plan.h != plan.g - plan.l:
        raise ScalingNotCertified("the same-initial variant needs h = g - l")
    if initial_blocks.g != plan.s + plan.g - plan.l or initial_blocks.width != plan.width:
        raise ScalingNotCertified("initial code does not have s + g - l groups of the plan's width")
    if initial_blocks.global_rows != plan.blocks.global_rows or initial_blocks.local_rows != plan.blocks.local_rows:
        raise ScalingNotCertified("initial code has a different row layout than the base code")
    head = block_select(initial_blocks, range(plan.s)).data
    Ds = []
    for i, G in enumerate(plan.P_i):
        target = block_select(plan.blocks, G).data
        D = scaling_certificate(target, head, plan.tower)
        if D is None or np.any(D == 0):
            raise ScalingNotCertified(f"head of P_{i + 1} is not a diagonal scaling of the initial head")
        Ds.append(D)
    return SameInitialCertificate(LinearCode(initial_blocks.assemble()), initial_blocks, Ds)


def _tail_matrices(plan: ConversionPlan, cert: SameInitialCertificate):
    bs0 = cert.initial_blocks
    tail_idx = list(range(plan.s, bs0.g))
    WN_p = block_select(bs0, tail_idx).data
    WN_F = block_select(plan.blocks, plan.P).data
    if rank_array(plan.tower, WN_F) != WN_F.shape[1]:
        raise ScalingNotCertified("final shared block does not determine the written symbols")
    return WN_p, WN_F


def _twisted_tail(plan: ConversionPlan, cert: SameInitialCertificate, i: int, tail: np.ndarray, WN_p, WN_F) -> np.ndarray:
    F = plan.tower
    lr_tail = len(plan.P) * plan.blocks.local_rows
    Dg = cert.D[i][plan.s * plan.blocks.local_rows :]
    scale = np.concatenate([np.ones(lr_tail, dtype=np.int64), Dg])
    return F.mul(scale, mat_mul(F, WN_p, tail[:, None]).reshape(-1))


def convert_same_initial(plan: ConversionPlan, cert: SameInitialCertificate, codewords: Sequence) -> ConversionTrace:
    """Merge ``t`` codewords of one initial code.

    The written symbols solve ``(W_F; N_F) c* = sum_i diag(I, D_i)(W_p; N_p) c_i,tail``
    where ``(W_F; N_F)`` is the final shared block and ``(W_p; N_p)`` the
    initial code's tail block.
    """
    words = _check_inputs([cert.initial] * plan.t, codewords)
    F = plan.tower
    tails, reads = _read_tails(plan, words)
    WN_p, WN_F = _tail_matrices(plan, cert)
    rhs = np.zeros(WN_F.shape[0], dtype=np.int64)
    for i, tl in enumerate(tails):
        rhs = F.add(rhs, _twisted_tail(plan, cert, i, tl, WN_p, WN_F))
    c_star = solve_array(F, WN_F, rhs)
    return _assemble(plan, words, c_star, reads, "same-initial")


def lift_to_plan_initial(plan: ConversionPlan, cert: SameInitialCertificate, i: int, c) -> np.ndarray:
    """Map a codeword of the single initial code to the i-th plan initial code
    (head kept, tail re-solved through the final shared block)."""
    c = np.asarray(c, dtype=np.int64)
    sw = plan.s * plan.width
    WN_p, WN_F = _tail_matrices(plan, cert)
    tail = _twisted_tail(plan, cert, i, c[sw:], WN_p, WN_F)
    return np.concatenate([c[:sw], solve_array(plan.tower, WN_F, tail)])


# -- audit ------------------------------------------------------------------------------------


@dataclass
class AuditReport:
    rho_r: int
    rho_w: int
    bound: AccessBound
    read_optimal: bool
    write_optimal: bool
    baseline_read: int
    baseline_write: int
    regime: Regime

    @property
    def optimal(self) -> bool:
        return self.read_optimal and self.write_optimal

    def to_dict(self) -> dict:
        return {
            "rho_r": self.rho_r,
            "rho_w": self.rho_w,
            "bound_rho_r": self.bound.rho_r,
            "bound_rho_w": self.bound.rho_w,
            "Delta": self.bound.delta_value,
            "read_gap": self.rho_r - self.bound.rho_r,
            "write_gap": self.rho_w - self.bound.rho_w,
            "optimal": self.optimal,
            "regime": self.regime.value,
            "baseline_read": self.baseline_read,
            "baseline_write": self.baseline_write,
        }

    def table(self) -> str:
        rows = [
            ("conversion", self.rho_r, self.rho_w),
            ("lower bound", self.bound.rho_r, self.bound.rho_w),
            ("re-encode", self.baseline_read, self.baseline_write),
        ]
        lines = [f"{'':<12}{'read':>8}{'write':>8}"]
        lines += [f"{name:<12}{a:>8}{b:>8}" for name, a, b in rows]
        lines.append(f"optimal: {'yes' if self.optimal else 'no'} ({self.regime.value} regime)")
        return "\n".join(lines)


def audit_optimality(plan: ConversionPlan, trace: ConversionTrace, d: int | None = None) -> AuditReport:
    bound = access_lb_new(plan.bound_inputs(d))
    return AuditReport(
        rho_r=trace.rho_r,
        rho_w=trace.rho_w,
        bound=bound,
        read_optimal=trace.rho_r == bound.rho_r,
        write_optimal=trace.rho_w == bound.rho_w,
        baseline_read=plan.t * plan.k_I,
        baseline_write=plan.n_F,
        regime=plan.regime,
    )
