from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lrcc.code import LinearCode, WorkCeilingExceeded
from lrcc.construct import build_base_b, example2_spec
from lrcc.gf import make_tower
from lrcc.linalg import MatrixGF
from lrcc.lrc import (
    BoundInputs,
    BSet,
    InvalidPartition,
    LocalityPartition,
    NonpositiveBound,
    PreconditionViolated,
    Regime,
    access_lb_new,
    access_lb_old,
    check_B_set,
    fig1_grid,
    find_B_set,
    is_mr,
    is_optimal_lrc,
    mr_check,
    phi,
    singleton_bound,
    superlinear_length_bound,
    verify_locality,
)


def ceil_div(a, b):
    return -(-a // b)


# -- oracles written directly from the bound statements ------------------------


def oracle_new(nF, k, t, r, dl, d, nI, improved):
    c = ceil_div((t - 1) * k, r)
    ph = c * (dl - 1) if improved else (c - 1) * (dl - 1)
    rho_w = t * (d + (t - 1) * k - 1 + ph) - (t - 1) * nF
    Delta = nF - 2 * d - (t - 1) * k + 2 - ph
    if Delta <= 0 or d > nI - k + 1:
        return rho_w, t * k, Delta
    return rho_w, t * (k - Delta + (dl - 1) * (Delta // (r + dl - 1))), Delta


def oracle_old(nF, k, t, r, d, nI):
    c = ceil_div((t - 1) * k, r)
    rho_w = t * (d + (t - 1) * k + c - 2) - (t - 1) * nF
    Dbar = nF - 2 * d - ((t - 1) * k + c) + 3
    if Dbar <= 0 or d > nI - k + 1:
        return rho_w, t * k, Dbar
    return rho_w, t * (k - ceil_div(r * Dbar, r + 1)), Dbar


bound_inputs = st.builds(
    lambda k, t, r, dl, d, extra_I, extra_F: (t * k + extra_F, k, t, r, dl, d, k + d - 1 + extra_I),
    st.integers(1, 30),
    st.integers(2, 6),
    st.integers(1, 12),
    st.integers(2, 6),
    st.integers(1, 30),
    st.integers(-3, 30),
    st.integers(0, 150),
)


# -- singleton / phi ------------------------------------------------------------------


def test_singleton_examples():
    assert singleton_bound(9, 4, 2, 2, improved=True) == 4
    assert singleton_bound(9, 4, 2, 2) == 5
    assert singleton_bound(51, 32, 2, 2, Regime.IMPROVED) == 4
    assert singleton_bound(15, 8, 2, 2) == 5
    assert singleton_bound(10, 4, 4, 3) == 7  # plain Singleton when r = k
    with pytest.raises(NonpositiveBound):
        singleton_bound(4, 4, 1, 3)
    assert phi(5, 2, 3) == 4 and phi(5, 2, 3, Regime.IMPROVED) == 6


# -- locality / optimality / MR -------------------------------------------------------


def test_locality_of_example_codes(ex1_initial, ex2_base):
    for base in (ex1_initial, ex2_base):
        rep = verify_locality(base.code, base.partition)
        assert rep.passed and rep.first_failure is None
        assert all(g.size == 3 and g.dim <= 2 and g.distance >= 2 for g in rep.groups)


def test_mds_code_single_group_and_failure():
    F = make_tower(11)
    n, k = 8, 3
    H = MatrixGF(F, np.stack([F.power(np.arange(1, n + 1), e) for e in range(n - k)]))
    C = LinearCode(H)
    assert verify_locality(C, LocalityPartition((tuple(range(n)),), k, n - k + 1)).passed
    rep = verify_locality(C, LocalityPartition((tuple(range(n)),), k, n - k + 2))
    assert not rep.passed and rep.first_failure == 0
    assert is_mr(C, LocalityPartition((tuple(range(n)),), k, 2))
    assert is_optimal_lrc(C, LocalityPartition((tuple(range(n)),), k, n - k + 1), Regime.STANDARD)


def test_partition_validation():
    with pytest.raises(InvalidPartition):
        LocalityPartition(((0, 1), (1, 2)), 1, 2)
    with pytest.raises(InvalidPartition):
        LocalityPartition(((0, 1), ()), 1, 2)
    with pytest.raises(InvalidPartition):
        LocalityPartition(((0, 1),), 1, 1)
    p = LocalityPartition(((0, 1), (3, 2)), 1, 2)
    assert not p.covers(5) and p.covers(4)
    assert LocalityPartition.from_dict(p.to_dict()) == p
    rep = verify_locality(LinearCode(MatrixGF.identity(make_tower(3), 2)), LocalityPartition(((0,),), 1, 2))
    assert not rep.passed


def test_optimality_examples(ex1_initial, ex1_base, ex2_base):
    assert is_optimal_lrc(ex1_initial.code, ex1_initial.partition, Regime.IMPROVED)
    assert is_optimal_lrc(ex1_base.code, ex1_base.partition, Regime.IMPROVED)
    assert is_optimal_lrc(ex2_base.code, ex2_base.partition, Regime.STANDARD)
    # dropping the global row raises the dimension and the distance falls below the bound
    H = ex1_initial.code.H
    C = LinearCode(H.row_select(list(range(H.rows - 1))))
    assert C.k == 5 and not is_optimal_lrc(C, ex1_initial.partition, Regime.IMPROVED)


def test_mr_example2_and_listed_labels(ex2_base):
    res = mr_check(ex2_base.code, ex2_base.partition)
    assert res.is_mr and res.patterns_checked == res.total_patterns == 243
    listed = build_base_b(example2_spec(betas="listed"))
    assert listed.code.min_distance() == 3
    res = mr_check(listed.code, listed.partition)
    assert not res.is_mr and res.patterns_checked == 1 and res.witness == ((0,), (3,), (6,), (9,), (12,))


def test_mr_regression_example1(ex1_initial, ex1_base):
    # neither base-A code is MR; the first pattern is already a witness
    for base in (ex1_initial, ex1_base):
        res = mr_check(base.code, base.partition)
        assert not res.is_mr and res.patterns_checked == 1
    assert mr_check(ex1_base.code, ex1_base.partition).total_patterns == 3**17


def test_mr_ceiling(ex2_base):
    with pytest.raises(WorkCeilingExceeded) as exc:
        mr_check(ex2_base.code, ex2_base.partition, ceiling=10)
    assert exc.value.progress == 10


# -- access bounds -----------------------------------------------------------------------


def test_bound_examples():
    ex1 = access_lb_new(BoundInputs(51, 4, 8, 2, 2, 4, 9, Regime.IMPROVED))
    assert (ex1.rho_w, ex1.rho_r) == (3, 16)
    ex2 = access_lb_new(BoundInputs(15, 4, 2, 2, 2, 5, 9, Regime.STANDARD))
    assert (ex2.rho_w, ex2.rho_r) == (3, 4)
    trivial = access_lb_old(BoundInputs(10, 4, 2, 2, 2, 5, 9))
    assert trivial.delta_value <= 0 and trivial.rho_r == 8


@given(bound_inputs, st.booleans())
def test_bounds_match_oracles(args, improved):
    nF, k, t, r, dl, d, nI = args
    B = BoundInputs(nF, k, t, r, dl, d, nI, Regime.IMPROVED if improved else Regime.STANDARD)
    new, old = access_lb_new(B), access_lb_old(B)
    assert (new.rho_w, new.rho_r, new.delta_value) == oracle_new(nF, k, t, r, dl, d, nI, improved)
    assert (old.rho_w, old.rho_r, old.delta_value) == oracle_old(nF, k, t, r, d, nI)


@given(bound_inputs)
def test_delta_two_new_equals_old(args):
    nF, k, t, r, _, d, nI = args
    B = BoundInputs(nF, k, t, r, 2, d, nI, Regime.STANDARD)
    assert access_lb_new(B) == access_lb_old(B)


@given(bound_inputs)
def test_new_write_bound_never_below_old(args):
    nF, k, t, r, dl, d, nI = args
    for reg in Regime:
        B = BoundInputs(nF, k, t, r, dl, d, nI, reg)
        assert access_lb_new(B).rho_w >= access_lb_old(B).rho_w


def test_bound_inputs_validation():
    with pytest.raises(ValueError):
        BoundInputs(0, 1, 1, 1, 2, 1, 1)
    with pytest.raises(ValueError):
        BoundInputs(5, 1, 2, 1, 1, 1, 3)


def test_fig1_grid_rows():
    rows = fig1_grid()
    assert len(rows) == 318
    assert {r["delta"] for r in rows} == {3, 4, 5}
    assert all(0 < r["rate"] <= 1 for r in rows)
    assert all(r["rho_r_new"] >= r["rho_r_old"] for r in rows)
    full = fig1_grid(positive_only=False)
    assert len(full) > len(rows)


# -- B-set --------------------------------------------------------------------------------


@st.composite
def partitions_and_sets(draw):
    r = draw(st.integers(1, 4))
    dl = draw(st.integers(2, 4))
    g = draw(st.integers(1, 7))
    w = r + dl - 1
    sizes = [draw(st.integers(1, w)) for _ in range(g)]
    coords = list(range(sum(sizes)))
    perm = draw(st.permutations(coords))
    groups, pos = [], 0
    for s in sizes:
        groups.append(tuple(perm[pos : pos + s]))
        pos += s
    V = draw(st.sets(st.sampled_from(coords)))
    return LocalityPartition(tuple(groups), r, dl), V


@given(partitions_and_sets())
def test_find_B_set_properties(pv):
    part, V = pv
    res = find_B_set(part, V)
    assert len(res.B) == (part.delta - 1) * (len(V) // (part.r + part.delta - 1))
    assert check_B_set(part, V, res) == []


def test_find_B_set_examples(ex2_base):
    part = ex2_base.partition
    assert find_B_set(part, []).B == []
    res = find_B_set(part, [0, 1, 2])
    assert len(res.B) == 1 and res.B[0] in (0, 1, 2)
    assert check_B_set(part, [0, 1, 2], BSet([0, 3], [[0], [3]], [0, 1]))  # too large
    assert check_B_set(part, [0, 1, 2, 3, 4, 5], BSet([0, 1], [[0, 1]], [0]))  # block too big


# -- length bound ---------------------------------------------------------------------------


def test_length_bound_remark_value():
    # d = 2*delta + 1 and r = delta + 1 with delta = 3, q = 7
    val = superlinear_length_bound(None, None, 7, 4, 3, 7, w=3, u=2, v=0)
    assert math.isclose(val, (2 * 3 / (3 + 1)) * 7 ** (3 + 1) / (7 - 1))
    assert math.isclose(val, 600.25)


def test_length_bound_even_branch_and_errors():
    # t = floor(8/2) = 4 is even
    val = superlinear_length_bound(18, 4, 9, 2, 2, 7)
    t, w, u, v, r, dl, q = 4, 6, 2, 0, 2, 2, 7
    assert math.isclose(val, t * (r + dl - 1) / (2 * r * (q - 1)) * q ** ((2 * (w - u) * r - 2 * v) / t))
    with pytest.raises(PreconditionViolated, match="2t"):
        superlinear_length_bound(9, 4, 4, 2, 2, 49)
    with pytest.raises(PreconditionViolated):
        superlinear_length_bound(10, 4, 9, 2, 2, 7)
    with pytest.raises(PreconditionViolated):
        superlinear_length_bound(30, 5, 7, 2, 2, 7)  # v = 1 and u < 2(r+1-v)


def test_divisible_delta_family_counterexample_is_vacuous():
    # with ceil((t-1)k/r) = 1 the new read bound can fall below the old one,
    # but only where both are non-positive and hence say nothing
    B = BoundInputs(9, 1, 2, 1, 4, 4, 4, Regime.STANDARD)
    new, old = access_lb_new(B), access_lb_old(B)
    assert new.delta_value == 2 and (1 + 4 - 1) % new.delta_value == 0
    assert new.rho_r == -2 < old.rho_r == 0
    rng = random.Random(1)
    for _ in range(3000):
        r, dl, k, t = rng.randint(1, 8), rng.randint(3, 6), rng.randint(1, 12), rng.randint(2, 4)
        d = rng.randint(dl, 20)
        Bx = BoundInputs(t * k + rng.randint(0, 60), k, t, r, dl, d, k + d - 1, Regime.STANDARD)
        nx, ox = access_lb_new(Bx), access_lb_old(Bx)
        if nx.delta_value > 0 and (r + dl - 1) % nx.delta_value == 0 and ox.rho_r > 0:
            assert nx.rho_r >= ox.rho_r
