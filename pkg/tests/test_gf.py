from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lrcc.gf import (
    FieldError,
    FieldTower,
    NoSubfieldMarked,
    NotPrime,
    OrderDoesNotDivide,
    Reducible,
    TooLarge,
    coset_enumerate,
    frobenius,
    is_irreducible,
    make_tower,
    multiplicative_order,
    primitive_element,
    smallest_irreducible,
)

SMALL = [(2, 1), (2, 3), (2, 4), (3, 2), (5, 1), (5, 2), (7, 2), (11, 1), (3, 3)]
TOWERS = {pm: make_tower(*pm) for pm in SMALL}


def tower_and_elems(n):
    return st.sampled_from(SMALL).flatmap(
        lambda pm: st.tuples(
            st.just(TOWERS[pm]), *[st.integers(0, TOWERS[pm].order - 1) for _ in range(n)]
        )
    )


def test_smallest_irreducible_examples():
    assert smallest_irreducible(2, 2) == [1, 1, 1]
    assert smallest_irreducible(2, 3) == [1, 1, 0, 1]
    assert smallest_irreducible(7, 2) == [1, 0, 1]  # -1 is a non-residue mod 7


def test_gf49_modulus_x2_minus_3(F49):
    b = F49.gen()
    assert (b * b).value == 3
    assert F49.modulus == (4, 0, 1)
    assert F49.subfield_order == 7
    assert F49.subfield_elements() == list(range(7))


def test_constructor_errors():
    with pytest.raises(NotPrime):
        make_tower(4)
    with pytest.raises(Reducible):
        make_tower(7, 2, [6, 0, 1])  # x^2 - 1
    with pytest.raises(TooLarge):
        make_tower(2, 21)
    with pytest.raises(FieldError):
        make_tower(7, 2, [1, 1])
    with pytest.raises(FieldError):
        make_tower(7, 2, [3, 0, 2])
    with pytest.raises(FieldError):
        make_tower(2, 3, base_degree=2)
    with pytest.raises(NoSubfieldMarked):
        make_tower(7, 2).subfield_order
    with pytest.raises(OrderDoesNotDivide):
        coset_enumerate(make_tower(7, 2), 5)


def test_largest_supported_tower_builds():
    F = make_tower(2, 20)
    a = np.array([3, 12345, 2**20 - 1])
    assert np.array_equal(F.mul(a, F.inv(a)), np.ones(3, dtype=np.int64))
    assert F.mul_reference(12345, 999) == int(F.mul(12345, 999))


def test_exhaustive_tables_match_schoolbook():
    for F in TOWERS.values():
        a = np.arange(F.order)
        prod = F.mul(a[:, None], a[None, :])
        ref = np.array([[F.mul_reference(x, y) for y in range(F.order)] for x in range(F.order)])
        assert np.array_equal(prod, ref)
        s = F.add(a[:, None], a[None, :])
        ref = np.array([[F.add_reference(x, y) for y in range(F.order)] for x in range(F.order)])
        assert np.array_equal(s, ref)


@given(tower_and_elems(3))
def test_field_axioms(data):
    F, a, b, c = data
    x, y, z = F(a), F(b), F(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == F(0)
    assert x + (-x) == F(0)
    if x:
        assert x * x.inverse() == F(1)
        assert (y / x) * x == y


@given(tower_and_elems(1), st.integers(-50, 200))
def test_power_matches_reference(data, e):
    F, a = data
    if a == 0 and e <= 0:
        return
    expected = F.pow_reference(a if e >= 0 else int(F.inv(a)), abs(e))
    assert int(F.power(a, e)) == expected


@given(tower_and_elems(2))
def test_frobenius_is_additive_and_fixes_subfield(data):
    F0, a, b = data
    if F0.m == 1:
        return
    F = make_tower(F0.p, F0.m, F0.modulus, base_degree=1)
    x, y = F(a), F(b)
    assert frobenius(x + y) == frobenius(x) + frobenius(y)
    assert frobenius(x * y) == frobenius(x) * frobenius(y)
    assert frobenius(x, F.m) == x
    fixed = frobenius(x) == x
    assert fixed == F.in_subfield(a)


def test_primitive_element_and_orders():
    for F in TOWERS.values():
        g = primitive_element(F)
        assert multiplicative_order(g) == F.order - 1
        assert all(multiplicative_order(F(v)) < F.order - 1 for v in range(1, g.value))


def test_cosets_partition_the_multiplicative_group(F49):
    cosets = coset_enumerate(F49, 6)
    assert len(cosets) == 8
    assert [c.leader for c in cosets] == [1] + list(range(7, 14))  # 1, b, 1+b, ..., 6+b
    allv = sorted(v for c in cosets for v in c.elements)
    assert allv == list(range(1, 49))
    assert cosets[0].elements == tuple(range(1, 7))


def test_roundtrip_and_display(F49):
    G = FieldTower.from_dict(F49.to_dict())
    assert G == F49 and hash(G) == hash(F49)
    assert F49.fmt(F49.encode([3, 2])) == "3+2b"
    assert F49(F49.encode([0, 1])).to_json() == [0, 1]
    assert F49.decode(F49.encode([5, 6])) == (5, 6)
    with pytest.raises(FieldError):
        F49(49)
    with pytest.raises(FieldError):
        F49(0) + make_tower(7, 2, [1, 0, 1])(1)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (5, 3), (2, 5)])
def test_auto_modulus_is_smallest(p, m):
    F = make_tower(p, m, "auto")
    # every monic polynomial preceding it in integer order is reducible
    lead = p**m
    code = sum(c * p**i for i, c in enumerate(F.modulus))
    for v in range(lead, code):
        coeffs = [(v // p**i) % p for i in range(m + 1)]
        assert not is_irreducible(coeffs, p)
