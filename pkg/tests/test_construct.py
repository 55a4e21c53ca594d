from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lrcc.code import LinearCode
from lrcc.construct import (
    BaseCodeASpec,
    BaseCodeBSpec,
    BasisNotIndependent,
    ConditionGViolated,
    ConstructError,
    DuplicatePoints,
    FieldTooSmall,
    NotSingleCoset,
    RequiresHEqualsR,
    build,
    build_base_a,
    build_base_b,
    check_condition_g,
    coset_family_base_a,
    diagonal_family_base_b,
    example1_initial_spec,
    example1_leaders,
    example2_spec,
    final_family_base_a,
    scaling_certificate,
    spec_from_dict,
)
from lrcc.gf import make_tower, multiplicative_order
from lrcc.lrc import Regime, is_optimal_lrc, mr_check, singleton_bound

DATA = Path(__file__).resolve().parent.parent / "data"


def test_example1_initial_parameters(ex1_initial):
    C = ex1_initial.code
    assert (C.n, C.k) == (9, 4)
    assert C.min_distance(method="columns") == 4
    listed = build_base_a(example1_initial_spec("listed")).code
    assert listed.params == (9, 4, 4)


def test_condition_range_is_empty_for_example1():
    rep = check_condition_g(example1_initial_spec())
    assert rep.sizes == (2, 1) and rep.checked == 0 and rep.passed


def test_condition_violation_reports_smallest_subset(F49):
    spec = BaseCodeASpec(F49, 2, 2, 5, ((1, 2, 3), (1, 2, 3), (4, 5, 6)))
    rep = check_condition_g(spec)
    assert not rep.passed and rep.violations[0] == (0, 1)
    with pytest.raises(ConditionGViolated) as exc:
        build_base_a(spec)
    assert exc.value.witness == (0, 1)
    build_base_a(spec, check_condition=False)


def test_spec_validation(F49):
    with pytest.raises(DuplicatePoints):
        build_base_a(BaseCodeASpec(F49, 2, 2, 4, ((1, 1, 2),)))
    with pytest.raises(ConstructError):
        build_base_a(BaseCodeASpec(F49, 2, 2, 4, ((1, 2),)))
    with pytest.raises(ConstructError):
        build_base_a(BaseCodeASpec(F49, 2, 2, 2, ((1, 2, 3),)))


def test_coset_family_gives_equal_codes(ex1_initial):
    specs = coset_family_base_a(example1_initial_spec(), 6, example1_leaders(), shared=(2,))
    assert len(specs) == 8
    codes = [build_base_a(s).code for s in specs]
    assert all(c.same_code(ex1_initial.code) for c in codes)
    for s in specs:
        D = scaling_certificate(build_base_a(s).code.H.data, ex1_initial.code.H.data, s.tower)
        assert D is not None and np.all(D != 0)


def test_coset_family_rejections(F49):
    spec = example1_initial_spec()
    with pytest.raises(NotSingleCoset):
        coset_family_base_a(spec, 6, [1, 2])  # same coset
    with pytest.raises(NotSingleCoset):
        coset_family_base_a(spec, 6, [1, 7])  # shared group not excluded: contains 0


def test_example1_final_code(ex1_base):
    C = ex1_base.code
    assert (C.n, C.k, C.min_distance()) == (51, 32, 4)
    assert ex1_base.g == 17
    final = final_family_base_a(example1_initial_spec(), 6, example1_leaders(), shared=(2,))
    pts = [x for g in final.G[:16] for x in g]
    # 8 scaled copies of G1 u G2 (5 points each, G1 and G2 share one) are disjoint
    assert len(set(pts)) == 40 and 0 not in pts
    assert final.G[16] == (5, 6, 0)
    assert is_optimal_lrc(C, ex1_base.partition, Regime.IMPROVED)


def test_scaling_certificate_negative(F49):
    A = np.array([[1, 2], [3, 4]])
    assert scaling_certificate(A, np.array([[1, 2], [3, 5]]), F49) is None
    assert scaling_certificate(A, np.array([[1, 0], [3, 4]]), F49) is None
    assert scaling_certificate(A, A[:1], F49) is None


def test_example2_code(ex2_base, F49):
    C = ex2_base.code
    assert (C.n, C.k) == (15, 8)
    assert C.min_distance() == 5 == example2_spec().distance
    beta = F49.gen().value
    labels = example2_spec().column_labels()
    assert labels == tuple(int(F49.add(a, F49.mul(a * a % 7, beta))) for a in (1, 2, 3))
    res = mr_check(C, ex2_base.partition)
    assert res.is_mr and res.total_patterns == 243


def test_example2_diagonal_certificate(F49):
    cert = diagonal_family_base_b(example2_spec(), 2)
    assert cert.s == 2 and cert.all_equal
    gamma = F49.encode([1, 1])
    g2 = int(F49.power(gamma, 2))
    assert g2 == 18 == F49.encode([4, 2])
    assert [d.tolist() for d in cert.D] == [[1, 1, 1, 1, 1], [1, 1, 1, 1, g2]]
    C1, C2 = LinearCode(cert.H[0]), LinearCode(cert.H[1])
    assert C1.params == (9, 4, 5) and C1.same_code(C2)


def test_diagonal_family_requires_h_equals_r():
    spec = replace(example2_spec(), r=1, delta=3, alphas=(1, 2, 3))
    with pytest.raises(RequiresHEqualsR):
        diagonal_family_base_b(spec, 2)


def test_base_b_validation(F49):
    spec = example2_spec()
    with pytest.raises(FieldTooSmall):
        build_base_b(replace(spec, m=7))
    with pytest.raises(DuplicatePoints):
        build_base_b(replace(spec, alphas=(1, 1, 2)))
    with pytest.raises(ConstructError):
        build_base_b(replace(spec, alphas=(1, 2, 7)))  # b is not in GF(7)
    with pytest.raises(BasisNotIndependent):
        build_base_b(replace(spec, gammas=(1, 2)))
    with pytest.raises(ConstructError):
        build_base_b(replace(spec, gamma=2))  # 2 has order 3


PRIME_TOWERS = {p: make_tower(p, 2, base_degree=1) for p in (5, 7)}
PRIMS = {p: [v for v in range(1, F.order) if multiplicative_order(F(v)) == F.order - 1] for p, F in PRIME_TOWERS.items()}


@st.composite
def base_b_specs(draw):
    p = draw(st.sampled_from([5, 7]))
    F = PRIME_TOWERS[p]
    r, dl = draw(st.sampled_from([(2, 2), (1, 3), (2, 3), (3, 2), (1, 2)]))
    w = r + dl - 1
    if w > p - 1:
        r, dl, w = 2, 2, 3
    m = draw(st.integers(1, min(4, p - 1)))
    alphas = tuple(draw(st.permutations(range(1, p)))[:w])
    return BaseCodeBSpec(F, 2, m, r, dl, alphas, gamma=draw(st.sampled_from(PRIMS[p])))


@settings(max_examples=25)
@given(base_b_specs())
def test_random_base_b_codes_are_mr_with_design_distance(spec):
    base = build_base_b(spec)
    C = base.code
    if C.k == 0:
        return
    assert C.min_distance() == spec.distance
    assert mr_check(C, base.partition).is_mr


@pytest.mark.parametrize("name", ["base_a_ex1.json", "base_a_ex1_initial.json", "base_b_ex2.json"])
def test_data_files_roundtrip(name):
    d = json.loads((DATA / name).read_text())
    spec = spec_from_dict(d)
    base = build(spec)
    again = build(spec_from_dict(json.loads(json.dumps(spec.to_dict()))))
    assert again.code.same_code(base.code)


def test_spec_accepts_coefficient_lists():
    d = json.loads((DATA / "base_b_ex2.json").read_text())
    d["gamma"] = [1, 1]
    assert build(spec_from_dict(d)).code.same_code(build_base_b(example2_spec()).code)
    with pytest.raises(ConstructError):
        spec_from_dict({**d, "family": "Z"})


def test_optimality_against_regime_bounds(ex1_initial, ex2_base):
    assert ex1_initial.code.min_distance() == singleton_bound(9, 4, 2, 2, Regime.IMPROVED)
    assert ex2_base.code.min_distance() == singleton_bound(15, 8, 2, 2, Regime.STANDARD)
