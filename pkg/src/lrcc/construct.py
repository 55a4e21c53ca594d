"""Explicit base codes and their same-initial-code families.

Two families are provided:

* Vandermonde base codes ("base A"): group ``i`` contributes a Vandermonde
  block on a generating set ``G_i``; the first ``delta-1`` rows are local and
  the remaining ``d-delta`` rows are shared global rows.
* Linearized Reed-Solomon base codes ("base B"): every group uses the same
  local Vandermonde block on points of GF(q) and global rows obtained from
  Frobenius twists in GF(q^h), which gives maximally recoverable codes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .code import LinearCode
from .gf import FieldTower, coset_enumerate, frobenius, make_tower, primitive_element
from .linalg import BlockStructure, MatrixGF, block_select, rank_array
from .lrc import LocalityPartition


class ConstructError(ValueError):
    pass


class ConditionGViolated(ConstructError):
    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class DuplicatePoints(ConstructError):
    pass


class NotSingleCoset(ConstructError):
    pass


class FieldTooSmall(ConstructError):
    pass


class BasisNotIndependent(ConstructError):
    pass


class RequiresHEqualsR(ConstructError):
    pass


@dataclass
class BaseCode:
    """A built base code: the code, its repair groups and its block form.

    Unpacks as ``code, partition = base``.
    """

    code: LinearCode
    partition: LocalityPartition
    blocks: BlockStructure
    family: str
    params: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.code, self.partition))

    @property
    def g(self) -> int:
        return self.blocks.g

    @property
    def r(self) -> int:
        return self.partition.r

    @property
    def delta(self) -> int:
        return self.partition.delta

    def select(self, P: Sequence[int]) -> LinearCode:
        return LinearCode(block_select(self.blocks, P))

    def to_dict(self) -> dict:
        out = self.code.to_dict()
        out["metadata"] = {**out.get("metadata", {}), "family": self.family, **self.params}
        out["partition"] = self.partition.to_dict()
        out["blocks"] = {"g": self.blocks.g, "local_rows": self.blocks.local_rows}
        return out


# -- base A -------------------------------------------------------------------------


@dataclass(frozen=True)
class BaseCodeASpec:
    tower: FieldTower
    r: int
    delta: int
    d: int
    G: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "G", tuple(tuple(int(x) for x in g) for g in self.G))

    @property
    def m(self) -> int:
        return len(self.G)

    @property
    def width(self) -> int:
        return self.r + self.delta - 1

    def validate(self) -> None:
        if self.delta < 2 or self.r < 1:
            raise ConstructError("need r >= 1 and delta >= 2")
        if self.d < self.delta + 1:
            raise ConstructError("need d >= delta + 1")
        for i, g in enumerate(self.G):
            if len(g) != self.width:
                raise ConstructError(f"G_{i} has {len(g)} points, expected r+delta-1 = {self.width}")
            if len(set(g)) != len(g):
                raise DuplicatePoints(f"G_{i} has repeated points")
            if any(not 0 <= x < self.tower.order for x in g):
                raise ConstructError(f"G_{i} has an element outside the field")

    def to_dict(self) -> dict:
        return {
            "family": "A",
            "tower": self.tower.to_dict(),
            "m": self.m,
            "r": self.r,
            "delta": self.delta,
            "d": self.d,
            "G": [list(g) for g in self.G],
        }


@dataclass
class ConditionReport:
    passed: bool
    sizes: tuple[int, int]
    checked: int
    violations: list[tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "sizes": list(self.sizes),
            "checked": self.checked,
            "violations": [list(v) for v in self.violations],
        }


def check_condition_g(spec: BaseCodeASpec, max_violations: int | None = None) -> ConditionReport:
    """Union-size condition on the generating sets.

    For every S with 2 <= |S| <= floor((d-1)/delta) it requires
    ``|U_{i in S} G_i| >= (r + delta/2 - 1)|S| + delta/2``, evaluated with
    integers as ``2|U| >= (2r + delta - 2)|S| + delta``.  Subsets are scanned in
    lexicographic order, so the first violation is the smallest one.
    """
    lo, hi = 2, (spec.d - 1) // spec.delta
    sets = [frozenset(g) for g in spec.G]
    violations: list[tuple[int, ...]] = []
    checked = 0
    for size in range(lo, hi + 1):
        for S in itertools.combinations(range(spec.m), size):
            checked += 1
            union = frozenset().union(*(sets[i] for i in S))
            if 2 * len(union) < (2 * spec.r + spec.delta - 2) * size + spec.delta:
                violations.append(S)
                if max_violations is not None and len(violations) >= max_violations:
                    return ConditionReport(False, (lo, hi), checked, violations)
    return ConditionReport(not violations, (lo, hi), checked, violations)


def _vandermonde(F: FieldTower, points: Sequence[int], exponents: Sequence[int]) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    return np.stack([F.power(pts, e) for e in exponents]) if exponents else np.zeros((0, len(pts)), dtype=np.int64)


def build_base_a(spec: BaseCodeASpec, check_condition: bool = True) -> BaseCode:
    spec.validate()
    F = spec.tower
    if check_condition:
        rep = check_condition_g(spec, max_violations=1)
        if not rep.passed:
            S = rep.violations[0]
            raise ConditionGViolated(f"generating sets {list(S)} have too small a union", S)
    local_exp = list(range(spec.delta - 1))
    global_exp = list(range(spec.delta - 1, spec.d - 1))
    A = tuple(_vandermonde(F, g, local_exp) for g in spec.G)
    B = tuple(_vandermonde(F, g, global_exp) for g in spec.G)
    blocks = BlockStructure(F, A, B)
    code = LinearCode(blocks.assemble(), metadata={"family": "A"})
    part = LocalityPartition.contiguous(spec.m, spec.width, spec.r, spec.delta)
    params = {"r": spec.r, "delta": spec.delta, "d_design": spec.d, "G": [list(g) for g in spec.G]}
    return BaseCode(code, part, blocks, "A", params)


def _scale_set(F: FieldTower, lam: int, G: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(x) for x in F.mul(int(lam), np.asarray(G, dtype=np.int64)))


def _coset_index(F: FieldTower, subgroup_order: int) -> dict[int, int]:
    return {x: i for i, c in enumerate(coset_enumerate(F, subgroup_order)) for x in c.elements}


def _check_leaders(F: FieldTower, subgroup_order: int, leaders: Sequence[int]) -> dict[int, int]:
    where = _coset_index(F, subgroup_order)
    seen = set()
    for lam in leaders:
        if lam == 0 or lam not in where:
            raise NotSingleCoset(f"{F.fmt(lam)} is not a nonzero field element")
        if where[lam] in seen:
            raise NotSingleCoset(f"leaders {F.fmt(lam)} and an earlier one share a coset")
        seen.add(where[lam])
    return where


def coset_family_base_a(
    spec: BaseCodeASpec,
    subgroup_order: int,
    leaders: Sequence[int],
    shared: Sequence[int] = (),
) -> list[BaseCodeASpec]:
    """One spec per leader, every generating set multiplied by the leader.

    Scaling all points by a nonzero constant multiplies each Vandermonde row
    by a constant, so all returned specs define the same code.  The groups
    that are not listed in ``shared`` must together lie in one coset of the
    order-``subgroup_order`` subgroup; then different leaders give disjoint
    scaled copies, which is what lets the copies sit side by side in one
    larger base code.
    """
    F = spec.tower
    where = _check_leaders(F, subgroup_order, leaders)
    own = [i for i in range(spec.m) if i not in set(shared)]
    pts = {x for i in own for x in spec.G[i]}
    if 0 in pts or len({where[x] for x in pts}) != 1:
        raise NotSingleCoset("the non-shared generating sets do not lie in a single coset")
    return [replace(spec, G=tuple(_scale_set(F, lam, g) for g in spec.G)) for lam in leaders]


def final_family_base_a(
    spec: BaseCodeASpec,
    subgroup_order: int,
    leaders: Sequence[int],
    shared: Sequence[int] = (),
) -> BaseCodeASpec:
    """Merge the scaled copies of the non-shared groups, followed by the shared groups.

    Group order: copies for the first leader, copies for the second leader,
    ..., then the shared groups unscaled.  This is the column order expected by
    :func:`lrcc.convert.make_plan` with ``P`` = the shared groups.
    """
    coset_family_base_a(spec, subgroup_order, leaders, shared)
    own = [i for i in range(spec.m) if i not in set(shared)]
    F = spec.tower
    G = [_scale_set(F, lam, spec.G[i]) for lam in leaders for i in own]
    G += [spec.G[i] for i in shared]
    return replace(spec, G=tuple(G))


def scaling_certificate(
    H_target: np.ndarray, H_source: np.ndarray, F: FieldTower
) -> np.ndarray | None:
    """Diagonal ``D`` with ``H_target = diag(D) H_source`` if one exists."""
    H_target = np.asarray(H_target, dtype=np.int64)
    H_source = np.asarray(H_source, dtype=np.int64)
    if H_target.shape != H_source.shape:
        return None
    D = np.zeros(H_target.shape[0], dtype=np.int64)
    for i, (a, b) in enumerate(zip(H_target, H_source)):
        if not (np.count_nonzero(a) == np.count_nonzero(b) and np.array_equal(a != 0, b != 0)):
            return None
        nz = np.flatnonzero(b)
        if nz.size == 0:
            D[i] = 1
            continue
        ratio = F.mul(a[nz], F.inv(b[nz]))
        if np.any(ratio != ratio[0]):
            return None
        D[i] = ratio[0]
    return D


# -- base B ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaseCodeBSpec:
    """Parameters of a linearized Reed-Solomon base code.

    ``tower`` is GF(q^h) with its subfield GF(q) marked.  ``alphas`` are
    distinct nonzero elements of GF(q) (given as encodings in the big field).
    ``gammas`` default to the polynomial basis 1, b, ..., b^(h-1).  ``betas``,
    when given, override the default column labels
    ``beta_i = sum_j gamma_j * alpha_i^(delta-2+j)``.
    """

    tower: FieldTower
    h: int
    m: int
    r: int
    delta: int
    alphas: tuple[int, ...]
    gammas: tuple[int, ...] | None = None
    betas: tuple[int, ...] | None = None
    gamma: int | None = None

    @property
    def q(self) -> int:
        return self.tower.subfield_order

    @property
    def width(self) -> int:
        return self.r + self.delta - 1

    @property
    def distance(self) -> int:
        return (self.h // self.r + 1) * (self.delta - 1) + self.h + 1

    def basis(self) -> tuple[int, ...]:
        if self.gammas is not None:
            return tuple(int(g) for g in self.gammas)
        F = self.tower
        b = F.gen().value
        return tuple(int(F.power(b, j)) for j in range(self.h))

    def column_labels(self) -> tuple[int, ...]:
        if self.betas is not None:
            return tuple(int(b) for b in self.betas)
        F = self.tower
        out = []
        for a in self.alphas:
            acc = 0
            for j, g in enumerate(self.basis(), start=1):
                acc = int(F.add(acc, F.mul(g, F.power(a, self.delta - 2 + j))))
            out.append(acc)
        return tuple(out)

    def primitive(self) -> int:
        return primitive_element(self.tower).value if self.gamma is None else int(self.gamma)

    def validate(self) -> None:
        F = self.tower
        if self.h < 1:
            raise ConstructError("need h >= 1 global rows")
        if self.r < 1 or self.delta < 2 or self.m < 1:
            raise ConstructError("need r >= 1, delta >= 2, m >= 1")
        if F.base_degree is None or F.m != F.base_degree * self.h:
            raise ConstructError("tower must be GF(q^h) with GF(q) marked")
        if self.q < max(self.r + self.delta, self.m + 1):
            raise FieldTooSmall(f"q={self.q} < max(r+delta, m+1) = {max(self.r + self.delta, self.m + 1)}")
        if len(self.alphas) != self.width:
            raise ConstructError(f"need r+delta-1 = {self.width} evaluation points")
        if len(set(self.alphas)) != len(self.alphas) or 0 in self.alphas:
            raise DuplicatePoints("evaluation points must be distinct and nonzero")
        if not all(F.in_subfield(a) for a in self.alphas):
            raise ConstructError("evaluation points must lie in GF(q)")
        if self.betas is not None and len(self.betas) != self.width:
            raise ConstructError("need one beta per column")
        gam = self.primitive()
        if gam == 0 or F.order - 1 != _order(F, gam):
            raise ConstructError("gamma must be primitive")
        basis = self.basis()
        if len(basis) != self.h:
            raise BasisNotIndependent(f"need exactly h = {self.h} basis elements")
        M = np.array([[frobenius(F(g), i).value for g in basis] for i in range(self.h)], dtype=np.int64)
        if rank_array(F, M) != self.h:
            raise BasisNotIndependent("gammas are not linearly independent over GF(q)")

    def to_dict(self) -> dict:
        F = self.tower
        out = {
            "family": "B",
            "p": F.p,
            "q_degree": F.base_degree,
            "modulus": list(F.modulus),
            "h": self.h,
            "m": self.m,
            "r": self.r,
            "delta": self.delta,
            "alphas": list(self.alphas),
        }
        if self.gammas is not None:
            out["gammas"] = list(self.gammas)
        if self.betas is not None:
            out["betas"] = list(self.betas)
        if self.gamma is not None:
            out["gamma"] = self.gamma
        return out


def _order(F: FieldTower, x: int) -> int:
    import math

    q1 = F.order - 1
    return q1 // math.gcd(q1, F.log(x))


def twisted_block(F: FieldTower, a: int, betas: Sequence[int], rows: int) -> np.ndarray:
    """Rows ``j = 0..rows-1`` with entries ``beta^(q^j) * prod_{k<j} a^(q^k)``."""
    out = np.zeros((rows, len(betas)), dtype=np.int64)
    mult = 1
    for j in range(rows):
        out[j] = [int(F.mul(frobenius(F(b), j).value, mult)) for b in betas]
        mult = int(F.mul(mult, frobenius(F(a), j).value))
    return out


def twist_multipliers(F: FieldTower, a: int, rows: int) -> np.ndarray:
    """``prod_{k<j} a^(q^k)`` for ``j = 0..rows-1``."""
    out = np.ones(rows, dtype=np.int64)
    for j in range(1, rows):
        out[j] = F.mul(out[j - 1], frobenius(F(a), j - 1).value)
    return out


def build_base_b(spec: BaseCodeBSpec, validate: bool = True) -> BaseCode:
    if validate:
        spec.validate()
    F = spec.tower
    P = _vandermonde(F, spec.alphas, list(range(spec.delta - 1)))
    betas = spec.column_labels()
    gam = spec.primitive()
    A = tuple(P.copy() for _ in range(spec.m))
    B = tuple(twisted_block(F, int(F.power(gam, i)), betas, spec.h) for i in range(spec.m))
    blocks = BlockStructure(F, A, B)
    code = LinearCode(blocks.assemble(), metadata={"family": "B"})
    part = LocalityPartition.contiguous(spec.m, spec.width, spec.r, spec.delta)
    params = {
        "r": spec.r,
        "delta": spec.delta,
        "h": spec.h,
        "d_design": spec.distance,
        "alphas": list(spec.alphas),
        "betas": list(betas),
        "gamma": gam,
    }
    return BaseCode(code, part, blocks, "B", params)


@dataclass
class DiagonalCertificate:
    """Initial parity-check matrices ``H_i = D_i H_1`` and whether they define one code."""

    s: int
    H: list[MatrixGF]
    D: list[np.ndarray]
    equal: list[bool]

    @property
    def all_equal(self) -> bool:
        return all(self.equal)


def diagonal_family_base_b(spec: BaseCodeBSpec, t: int) -> DiagonalCertificate:
    """Same-initial-code family for a base-B code with h = r.

    ``spec`` describes the final base code with ``m = t*s + 1`` groups.  The
    first initial code uses groups with twists gamma^0..gamma^s; the i-th one
    (1-based) is ``D_i H_1`` where ``D_i`` is the identity on local rows and
    ``prod_{k<j} (gamma^((i-1)s))^(q^k)`` on global row ``j``.
    """
    if spec.h != spec.r:
        raise RequiresHEqualsR(f"h = {spec.h} differs from r = {spec.r}")
    if t < 1 or (spec.m - 1) % t:
        raise ConstructError(f"m - 1 = {spec.m - 1} is not a multiple of t = {t}")
    s = (spec.m - 1) // t
    F = spec.tower
    H1 = build_base_b(replace(spec, m=s + 1), validate=False).code.H
    gam = spec.primitive()
    local = (s + 1) * (spec.delta - 1)
    Hs, Ds, eq = [], [], []
    base_key = LinearCode(H1)
    for i in range(1, t + 1):
        mult = twist_multipliers(F, int(F.power(gam, (i - 1) * s)), spec.h)
        D = np.concatenate([np.ones(local, dtype=np.int64), mult])
        Hi = MatrixGF(F, F.mul(D[:, None], H1.data))
        Hs.append(Hi)
        Ds.append(D)
        eq.append(LinearCode(Hi).same_code(base_key))
    return DiagonalCertificate(s, Hs, Ds, eq)


# -- spec files ----------------------------------------------------------------------------


def _elem(F: FieldTower, x) -> int:
    if isinstance(x, (list, tuple)):
        return F.encode(x)
    x = int(x)
    if not 0 <= x < F.order:
        raise ConstructError(f"{x} is not an element encoding")
    return x


def spec_from_dict(d: dict, ceiling: int | None = None):
    """Parse a base-A or base-B spec dictionary."""
    from .gf import DEFAULT_CEILING

    ceiling = DEFAULT_CEILING if ceiling is None else ceiling
    family = d.get("family") or ("A" if "G" in d else "B")
    if family == "A":
        t = d["tower"]
        F = make_tower(int(t["p"]), int(t.get("m", 1)), t.get("modulus"), t.get("base_degree"), ceiling=ceiling)
        G = tuple(tuple(_elem(F, x) for x in g) for g in d["G"])
        if "m" in d and int(d["m"]) != len(G):
            raise ConstructError(f"m = {d['m']} but {len(G)} generating sets given")
        return BaseCodeASpec(F, int(d["r"]), int(d["delta"]), int(d["d"]), G)
    if family == "B":
        p, b, h = int(d["p"]), int(d.get("q_degree", 1)), int(d["h"])
        F = make_tower(p, b * h, d.get("modulus"), b, ceiling=ceiling)
        opt = lambda key: tuple(_elem(F, x) for x in d[key]) if d.get(key) is not None else None  # noqa: E731
        return BaseCodeBSpec(
            F,
            h,
            int(d["m"]),
            int(d["r"]),
            int(d["delta"]),
            tuple(_elem(F, x) for x in d["alphas"]),
            gammas=opt("gammas"),
            betas=opt("betas"),
            gamma=_elem(F, d["gamma"]) if d.get("gamma") is not None else None,
        )
    raise ConstructError(f"unknown family {family!r}")


def build(spec) -> BaseCode:
    if isinstance(spec, BaseCodeASpec):
        return build_base_a(spec)
    if isinstance(spec, BaseCodeBSpec):
        return build_base_b(spec)
    raise TypeError("expected a base-A or base-B spec")


# -- worked instances ----------------------------------------------------------------------


def gf49() -> FieldTower:
    """GF(49) = GF(7)[x]/(x^2 - 3) with GF(7) marked."""
    return make_tower(7, 2, [4, 0, 1], base_degree=1)


def example1_initial_spec(order: str = "shared_last") -> BaseCodeASpec:
    """The 9-symbol Vandermonde code over GF(49) with r = 2, delta = 2, d = 4.

    ``order="shared_last"`` lists the sets as {1,2,3}, {3,4,5}, {5,6,0} so the
    shared group sits last, as conversion plans expect; ``"listed"`` keeps
    {5,6,0}, {1,2,3}, {3,4,5}.
    """
    G0, G1, G2 = (5, 6, 0), (1, 2, 3), (3, 4, 5)
    G = (G1, G2, G0) if order == "shared_last" else (G0, G1, G2)
    return BaseCodeASpec(gf49(), 2, 2, 4, G)


def example1_leaders() -> list[int]:
    """Coset leaders 1, b, 1+b, ..., 6+b of GF(7)* inside GF(49)."""
    return [c.leader for c in coset_enumerate(gf49(), 6)]


def example1_final_spec() -> BaseCodeASpec:
    return final_family_base_a(example1_initial_spec(), 6, example1_leaders(), shared=(2,))


def example2_spec(m: int = 5, betas: str = "formula") -> BaseCodeBSpec:
    """Linearized Reed-Solomon code over GF(49), q = 7, h = r = 2, delta = 2.

    ``betas="formula"`` uses sum_j gamma_j alpha_i^(delta-2+j) = alpha_i + alpha_i^2 b,
    which gives a [15, 8, 5] MR code.  ``"listed"`` uses 1 + alpha_i^2 b instead;
    that variant only reaches distance 3 and is kept for comparison.
    """
    F = gf49()
    alphas = (1, 2, 3)
    spec = BaseCodeBSpec(F, 2, m, 2, 2, alphas, gamma=F.encode([1, 1]))
    if betas == "listed":
        spec = replace(spec, betas=tuple(F.encode([1, a * a]) for a in alphas))
    elif betas != "formula":
        raise ValueError("betas must be 'listed' or 'formula'")
    return spec
