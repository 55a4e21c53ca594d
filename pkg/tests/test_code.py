from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lrcc.code import (
    CodeError,
    DimensionMismatch,
    EmptySupport,
    LinearCode,
    WorkCeilingExceeded,
    ZeroCode,
    default_ceiling,
)
from lrcc.gf import make_tower
from lrcc.linalg import MatrixGF

F2, F3, F4, F5, F7 = make_tower(2), make_tower(3), make_tower(2, 2), make_tower(5), make_tower(7)


def rs_parity(F, points, redundancy):
    pts = np.asarray(points)
    return MatrixGF(F, np.stack([F.power(pts, e) for e in range(redundancy)]))


@st.composite
def small_codes(draw):
    F = draw(st.sampled_from([F2, F3, F4, F5]))
    n = draw(st.integers(2, 7))
    rows = draw(st.integers(1, n))
    vals = draw(st.lists(st.integers(0, F.order - 1), min_size=rows * n, max_size=rows * n))
    return LinearCode(MatrixGF(F, np.array(vals).reshape(rows, n)))


def brute_distance(C):
    best = None
    for m in itertools.product(range(C.tower.order), repeat=C.k):
        if any(m):
            w = int(np.count_nonzero(C.encode(m)))
            best = w if best is None else min(best, w)
    return best


@pytest.mark.parametrize("n,k", [(6, 3), (7, 2), (12, 5), (13, 9)])
def test_reed_solomon_is_mds(n, k):
    F = make_tower(13)
    C = LinearCode(rs_parity(F, range(n), n - k))
    assert C.k == k
    assert C.min_distance(method="columns") == n - k + 1
    if 13**k * n < 1 << 22:
        assert LinearCode(C.H).min_distance(method="enumerate") == n - k + 1
    assert C.is_mds()


@given(small_codes())
def test_distance_methods_agree(C):
    if C.k == 0:
        with pytest.raises(ZeroCode):
            C.min_distance()
        return
    d1 = LinearCode(C.H).min_distance(method="enumerate")
    d2 = LinearCode(C.H).min_distance(method="columns")
    assert d1 == d2
    if C.tower.order**C.k <= 4096:
        assert d1 == brute_distance(C)


@given(small_codes(), st.data())
def test_generator_and_membership(C, data):
    G = C.generator()
    assert G.shape == (C.k, C.n)
    for row in G:
        assert C.contains(row)
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    c = C.random_codeword(rng)
    assert C.contains(c)


@given(small_codes(), st.data())
def test_puncture_contains_restrictions(C, data):
    S = sorted(data.draw(st.sets(st.integers(0, C.n - 1), min_size=1)))
    P = C.puncture(S)
    assert P.n == len(S) and P.k <= C.k
    rng = np.random.default_rng(0)
    for _ in range(5):
        c = C.random_codeword(rng)
        assert P.contains(c[S])
    # dimension of the puncture equals the rank of G restricted to S
    from lrcc.linalg import rank_array

    assert P.k == (rank_array(C.tower, C.generator()[:, S]) if C.k else 0)


@given(small_codes(), st.data())
def test_puncturing_fewer_than_d_keeps_dimension(C, data):
    if C.k == 0:
        return
    d = C.min_distance()
    removed = data.draw(st.sets(st.integers(0, C.n - 1), max_size=d - 1))
    S = [i for i in range(C.n) if i not in removed]
    if S:
        assert C.puncture(S).k == C.k


def test_same_code_and_roundtrip():
    H = rs_parity(F7, range(6), 2)
    C = LinearCode(H)
    H2 = MatrixGF(F7, F7.mul(3, H.data))
    assert C.same_code(LinearCode(H2))
    assert not C.same_code(LinearCode(rs_parity(F7, range(6), 3)))
    D = LinearCode.from_dict(C.to_dict(with_distance=True))
    assert D.same_code(C) and D.min_distance() == 3
    with pytest.raises(CodeError):
        LinearCode.from_dict({**C.to_dict(), "k": 5})


def test_errors():
    C = LinearCode(rs_parity(F7, range(6), 2))
    with pytest.raises(EmptySupport):
        C.puncture([])
    with pytest.raises(EmptySupport):
        C.puncture([0, 0])
    with pytest.raises(DimensionMismatch):
        C.encode([1, 2])
    with pytest.raises(DimensionMismatch):
        C.syndrome([1, 2])
    with pytest.raises(ZeroCode):
        LinearCode(MatrixGF.identity(F7, 3)).min_distance()


def test_work_ceiling_reports_lower_bound():
    F = make_tower(2, 6)
    rng = np.random.default_rng(3)
    C = LinearCode(MatrixGF(F, rng.integers(1, F.order, size=(10, 30))))
    with pytest.raises(WorkCeilingExceeded) as exc:
        C.min_distance(ceiling=500)
    assert exc.value.lower_bound >= 2 and exc.value.work > 0


def test_env_ceiling(monkeypatch):
    monkeypatch.setenv("LRCC_WORK_CEILING", "1234")
    assert default_ceiling() == 1234
    monkeypatch.setenv("LRCC_WORK_CEILING", "abc")
    with pytest.raises(CodeError):
        default_ceiling()
    monkeypatch.delenv("LRCC_WORK_CEILING")
    assert default_ceiling() == 10**7
