"""Locality, distance bounds, maximal recoverability and access-cost bounds."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .code import LinearCode, WorkCeilingExceeded, ZeroCode, default_ceiling


class LRCError(ValueError):
    pass


class NonpositiveBound(LRCError):
    pass


class PreconditionViolated(LRCError):
    pass


class InvalidPartition(LRCError):
    pass


class Regime(str, enum.Enum):
    """Which Singleton-type distance bound is taken as the optimum.

    ``STANDARD`` uses phi = (ceil(k/r) - 1)(delta - 1); ``IMPROVED`` uses
    phi = ceil(k/r)(delta - 1), valid when r = d - delta and (r+delta-1) | n.
    """

    STANDARD = "standard"
    IMPROVED = "improved"


def phi(k: int, r: int, delta: int, regime: Regime = Regime.STANDARD) -> int:
    c = -(-k // r)
    if Regime(regime) is Regime.IMPROVED:
        return c * (delta - 1)
    return (c - 1) * (delta - 1)


def singleton_bound(n: int, k: int, r: int, delta: int, improved: bool | Regime = False) -> int:
    regime = improved if isinstance(improved, Regime) else (Regime.IMPROVED if improved else Regime.STANDARD)
    value = n - k + 1 - phi(k, r, delta, regime)
    if value <= 0:
        raise NonpositiveBound(f"distance bound {value} <= 0 for n={n}, k={k}, r={r}, delta={delta}")
    return value


# -- locality -----------------------------------------------------------------


@dataclass(frozen=True)
class LocalityPartition:
    """Disjoint repair groups (0-based coordinates) covering ``[n]``."""

    groups: tuple[tuple[int, ...], ...]
    r: int
    delta: int

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(int(c) for c in g) for g in self.groups))
        seen: set[int] = set()
        for g in self.groups:
            if not g:
                raise InvalidPartition("empty repair group")
            if seen.intersection(g) or len(set(g)) != len(g):
                raise InvalidPartition("repair groups overlap")
            seen.update(g)
        if self.r < 1 or self.delta < 2:
            raise InvalidPartition("need r >= 1 and delta >= 2")

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    def covers(self, n: int) -> bool:
        return sorted(c for g in self.groups for c in g) == list(range(n))

    def group_of(self) -> dict[int, int]:
        return {c: i for i, g in enumerate(self.groups) for c in g}

    @classmethod
    def contiguous(cls, g: int, width: int, r: int, delta: int) -> "LocalityPartition":
        return cls(tuple(tuple(range(i * width, (i + 1) * width)) for i in range(g)), r, delta)

    def to_dict(self) -> dict:
        return {"groups": [list(g) for g in self.groups], "r": self.r, "delta": self.delta}

    @classmethod
    def from_dict(cls, d: dict) -> "LocalityPartition":
        return cls(tuple(tuple(g) for g in d["groups"]), int(d["r"]), int(d["delta"]))


@dataclass
class GroupReport:
    index: int
    size: int
    dim: int
    distance: int | None
    ok: bool
    reason: str = ""


@dataclass
class LocalityReport:
    passed: bool
    groups: list[GroupReport]
    first_failure: int | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "first_failure": self.first_failure,
            "groups": [g.__dict__ for g in self.groups],
        }


def verify_locality(C: LinearCode, part: LocalityPartition, ceiling: int | None = None) -> LocalityReport:
    """Check every group has size <= r+delta-1, local dimension <= r and local
    distance >= delta.  A group whose local code is the zero code passes."""
    reports = []
    if not part.covers(C.n):
        return LocalityReport(False, [GroupReport(-1, 0, 0, None, False, "partition does not cover [n]")], -1)
    for i, g in enumerate(part.groups):
        sub = C.puncture(g)
        reasons = []
        if len(g) > part.r + part.delta - 1:
            reasons.append(f"size {len(g)} > r+delta-1")
        if sub.k > part.r:
            reasons.append(f"local dimension {sub.k} > r")
        dist = None
        if sub.k > 0:
            dist = sub.min_distance(ceiling)
            if dist < part.delta:
                reasons.append(f"local distance {dist} < delta")
        reports.append(GroupReport(i, len(g), sub.k, dist, not reasons, "; ".join(reasons)))
    failing = [r.index for r in reports if not r.ok]
    return LocalityReport(not failing, reports, failing[0] if failing else None)


def is_optimal_lrc(C: LinearCode, part: LocalityPartition, regime: Regime, ceiling: int | None = None) -> bool:
    if not verify_locality(C, part, ceiling).passed:
        return False
    try:
        bound = singleton_bound(C.n, C.k, part.r, part.delta, Regime(regime))
    except NonpositiveBound:
        return False
    return C.min_distance(ceiling) == bound


# -- maximal recoverability -----------------------------------------------------


@dataclass
class MRResult:
    is_mr: bool
    patterns_checked: int
    total_patterns: int
    witness: tuple[tuple[int, ...], ...] | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "is_mr": self.is_mr,
            "patterns_checked": self.patterns_checked,
            "total_patterns": self.total_patterns,
            "witness": [list(w) for w in self.witness] if self.witness else None,
            "reason": self.reason,
        }


def mr_check(
    C: LinearCode,
    part: LocalityPartition,
    ceiling: int | None = None,
    distance_ceiling: int | None = None,
) -> MRResult:
    """Exhaustive MR test over every deletion pattern (delta-1 erasures per group).

    Patterns are visited in mixed-radix order (last group fastest, deletions
    within a group in lexicographic order) and the first failure is returned
    as the witness.  Each pattern costs one unit of the work ceiling, so a
    failing pattern found early gives a verdict even when the full
    enumeration would be out of reach.  A pattern passes when the punctured
    code keeps dimension k and is MDS; ``distance_ceiling`` bounds each of
    those distance searches.
    """
    ceiling = default_ceiling() if ceiling is None else ceiling
    distance_ceiling = default_ceiling() if distance_ceiling is None else distance_ceiling
    choices = [list(itertools.combinations(g, part.delta - 1)) for g in part.groups]
    total = math.prod(len(c) for c in choices)
    checked = 0
    for pattern in itertools.product(*choices):
        if checked >= ceiling:
            raise WorkCeilingExceeded(
                f"checked {checked} of {total} deletion patterns without a failure; ceiling {ceiling}",
                work=checked,
                progress=checked,
            )
        deleted = {c for block in pattern for c in block}
        keep = [c for c in range(C.n) if c not in deleted]
        sub = C.puncture(keep)
        checked += 1
        if sub.k != C.k:
            return MRResult(False, checked, total, pattern, f"punctured dimension {sub.k} != {C.k}")
        if sub.k and not sub.is_mds(distance_ceiling):
            return MRResult(False, checked, total, pattern, f"punctured code has d={sub.min_distance()} < {sub.n - sub.k + 1}")
    return MRResult(True, checked, total)


def is_mr(C: LinearCode, part: LocalityPartition, ceiling: int | None = None) -> bool:
    return mr_check(C, part, ceiling).is_mr


# -- access-cost bounds -----------------------------------------------------------


@dataclass(frozen=True)
class BoundInputs:
    n_F: int
    k: int
    t: int
    r: int
    delta: int
    d: int
    n_I: int
    regime: Regime = Regime.STANDARD

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        for name in ("n_F", "k", "t", "r", "d", "n_I"):
            if getattr(self, name) <= 0:
                raise LRCError(f"{name} must be positive")
        if self.delta < 2:
            raise LRCError("delta must be >= 2")


@dataclass(frozen=True)
class AccessBound:
    rho_w: int
    rho_r: int
    delta_value: int


def access_lb_new(B: BoundInputs) -> AccessBound:
    """Write/read lower bounds parametrized by the regime's phi."""
    t, k, r, dl, d, nF = B.t, B.k, B.r, B.delta, B.d, B.n_F
    ph = phi((t - 1) * k, r, dl, B.regime) if t > 1 else 0
    rho_w = t * (d + (t - 1) * k - 1 + ph) - (t - 1) * nF
    Delta = nF - 2 * d - (t - 1) * k + 2 - ph
    if Delta <= 0 or d > B.n_I - k + 1:
        rho_r = t * k
    else:
        rho_r = t * (k - Delta + (dl - 1) * (Delta // (r + dl - 1)))
    return AccessBound(rho_w, rho_r, Delta)


def access_lb_old(B: BoundInputs) -> AccessBound:
    """The earlier bound, which ignores delta."""
    t, k, r, d, nF = B.t, B.k, B.r, B.d, B.n_F
    c = -(-((t - 1) * k) // r)
    rho_w = t * (d + (t - 1) * k + c - 2) - (t - 1) * nF
    Dbar = nF - 2 * d - ((t - 1) * k + c) + 3
    if Dbar <= 0 or d > B.n_I - k + 1:
        rho_r = t * k
    else:
        rho_r = t * (k - (-(-r * Dbar // (r + 1))))
    return AccessBound(rho_w, rho_r, Dbar)


def fig1_grid(
    deltas: Sequence[int] = (3, 4, 5),
    t: int = 3,
    n_I: int = 80,
    k: int = 40,
    d: int = 15,
    r: int = 10,
    n_F_values: Iterable[int] | None = None,
    regime: Regime = Regime.STANDARD,
    positive_only: bool = True,
) -> list[dict]:
    """Old versus new read bound across final lengths (code rate tk/n_F).

    With ``positive_only`` only points in the nontrivial branch (Delta > 0 and
    d <= n_I - k + 1) are kept, which is the region where the bounds differ.
    """
    kF = t * k
    if n_F_values is None:
        n_F_values = range(kF + d - 1, 2 * kF + 1)
    rows = []
    for dl in deltas:
        for nF in n_F_values:
            B = BoundInputs(nF, k, t, r, dl, d, n_I, regime)
            new = access_lb_new(B)
            if positive_only and (new.delta_value <= 0 or d > n_I - k + 1):
                continue
            rows.append(
                {
                    "rate": kF / nF,
                    "delta": dl,
                    "n_F": nF,
                    "rho_r_old": access_lb_old(B).rho_r,
                    "rho_r_new": new.rho_r,
                }
            )
    return rows


# -- constructive B-set -------------------------------------------------------------


@dataclass
class BSet:
    B: list[int]
    blocks: list[list[int]]
    groups: list[int] = field(default_factory=list)


def find_B_set(part: LocalityPartition, V: Iterable[int], r: int | None = None, delta: int | None = None) -> BSet:
    """Greedy B-set of size (delta-1) * floor(|V| / (r+delta-1)).

    Repeatedly take the smallest remaining element of V, grab up to delta-1
    elements of V from its repair group (in coordinate order) and drop the
    whole group from V.  Full pieces are preferred; if there are not enough,
    all full pieces are used and partial pieces, in order, fill the rest.
    """
    r = part.r if r is None else r
    delta = part.delta if delta is None else delta
    V = sorted(set(int(v) for v in V))
    target_blocks = len(V) // (r + delta - 1)
    where = part.group_of()
    remaining = list(V)
    pieces: list[tuple[int, list[int]]] = []
    while remaining:
        gi = where[remaining[0]]
        group = set(part.groups[gi])
        inside = [v for v in remaining if v in group]
        pieces.append((gi, inside[: delta - 1]))
        remaining = [v for v in remaining if v not in group]
    full = [(g, p) for g, p in pieces if len(p) == delta - 1]
    need = target_blocks * (delta - 1)
    if len(full) >= target_blocks:
        chosen = full[:target_blocks]
    else:
        chosen = []
        have = len(full) * (delta - 1)
        for g, p in pieces:
            if len(p) == delta - 1:
                chosen.append((g, p))
            elif have < need:
                take = p[: need - have]
                have += len(take)
                chosen.append((g, take))
        chosen = [(g, p) for g, p in chosen if p]
    B = sorted(c for _, p in chosen for c in p)
    return BSet(B, [list(p) for _, p in chosen], [g for g, _ in chosen])


def check_B_set(part: LocalityPartition, V: Iterable[int], res: BSet, r: int | None = None, delta: int | None = None) -> list[str]:
    """Independent check of the size and structure conditions; returns violations."""
    r = part.r if r is None else r
    delta = part.delta if delta is None else delta
    V = set(int(v) for v in V)
    out = []
    where = part.group_of()
    want = (delta - 1) * (len(V) // (r + delta - 1))
    if len(res.B) != want:
        out.append(f"|B|={len(res.B)} != {want}")
    if len(set(res.B)) != len(res.B) or not set(res.B) <= V:
        out.append("B is not a subset of V without repeats")
    groups = []
    for t, blk in enumerate(res.blocks):
        gs = {where[c] for c in blk}
        if len(gs) != 1:
            out.append(f"block {t} spans several repair groups")
            groups.append(None)
            continue
        groups.append(gs.pop())
        if len(blk) > delta - 1:
            out.append(f"block {t} has {len(blk)} > delta-1 elements")
    for t1, blk in enumerate(res.blocks):
        for t2 in range(t1):
            if groups[t2] is not None and set(blk) & set(part.groups[groups[t2]]):
                out.append(f"block {t1} meets the repair group of block {t2}")
    for t, blk in enumerate(res.blocks):
        if groups[t] is None or len(blk) >= delta - 1:
            continue
        earlier = set().union(*(part.groups[g] for g in groups[:t] if g is not None)) if t else set()
        fresh = (set(part.groups[groups[t]]) - earlier) & V
        if len(fresh) >= delta - 1:
            out.append(f"block {t} is short although its group offers {len(fresh)} elements of V")
    if sorted(c for blk in res.blocks for c in blk) != sorted(res.B):
        out.append("blocks do not partition B")
    return out


# -- super-linear length bound ------------------------------------------------------------


def superlinear_length_bound(
    n: int | None,
    k: int | None,
    d: int,
    r: int,
    delta: int,
    q: int,
    w: int | None = None,
    u: int | None = None,
    v: int | None = None,
) -> float:
    """Upper bound on the length of an optimal LRC with n = w(r+delta-1), k = ur+v.

    ``w``, ``u`` and ``v`` are derived from ``n`` and ``k`` when omitted.
    """
    width = r + delta - 1
    if w is None:
        if n is None or n % width:
            raise PreconditionViolated("n must be a multiple of r+delta-1")
        w = n // width
    elif n is not None and n != w * width:
        raise PreconditionViolated("n != w(r+delta-1)")
    if u is None or v is None:
        if k is None:
            raise PreconditionViolated("need k or both u and v")
        u, v = divmod(k, r)
    elif k is not None and k != u * r + v:
        raise PreconditionViolated("k != ur+v")
    if not 0 <= v < r:
        raise PreconditionViolated("v must satisfy 0 <= v < r")
    if delta < 2:
        raise PreconditionViolated("delta must be >= 2")
    t = (d - 1) // delta
    if not 2 * t + 1 > 4:
        raise PreconditionViolated(f"2t+1 > 4 fails with t = floor((d-1)/delta) = {t}")
    if not (v == 0 or u >= 2 * (r + 1 - v)):
        raise PreconditionViolated("needs r | k or u >= 2(r+1-v)")
    wu = w - u
    if t % 2:
        return width / r * ((t - 1) / (2 * (q - 1)) * q ** ((2 * wu * r - 2 * v - 2) / (t - 1)) + 1)
    return t * width / (2 * r * (q - 1)) * q ** ((2 * wu * r - 2 * v) / t)


__all__ = [
    "AccessBound",
    "BSet",
    "BoundInputs",
    "LocalityPartition",
    "LocalityReport",
    "MRResult",
    "NonpositiveBound",
    "PreconditionViolated",
    "Regime",
    "ZeroCode",
    "access_lb_new",
    "access_lb_old",
    "check_B_set",
    "fig1_grid",
    "find_B_set",
    "is_mr",
    "is_optimal_lrc",
    "mr_check",
    "phi",
    "singleton_bound",
    "superlinear_length_bound",
    "verify_locality",
]
