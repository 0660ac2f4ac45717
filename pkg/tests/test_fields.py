import random

import pytest
from hypothesis import given, settings, strategies as st

from cabjac.errors import UsageError
from cabjac.fields import ExtensionField, FiniteField, extension_by_degree, extension_of


def test_f5_inverse():
    F = FiniteField(5)
    assert F.inv(2) == 3  # 2*3 = 6 = 1


def test_f5_fermat_power():
    F = FiniteField(5)
    assert F.pow(2, 4) == 1


def test_f8_multiplication_reduces_by_modulus():
    # t^3 + t + 1; t * t^2 = t^3 = t + 1, encodings t=2, t^2=4, t+1=3
    F = FiniteField(2, 3, (1, 1, 0, 1))
    assert F.mul(2, 4) == 3


def test_inversion_of_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        FiniteField(7).inv(0)
    with pytest.raises(ZeroDivisionError):
        FiniteField(2, 3).inv(0)


def test_nonprime_characteristic_rejected():
    with pytest.raises(UsageError):
        FiniteField(6)


def test_reducible_modulus_rejected():
    with pytest.raises(UsageError):
        FiniteField(2, 2, (1, 0, 1))  # t^2 + 1 = (t+1)^2 over F_2


FIELDS = [FiniteField(2), FiniteField(5), FiniteField(7), FiniteField(2, 3), FiniteField(3, 2)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.data())
def test_field_axioms(idx, data):
    F = FIELDS[idx]
    a = data.draw(st.integers(0, F.order - 1))
    b = data.draw(st.integers(0, F.order - 1))
    c = data.draw(st.integers(0, F.order - 1))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(a, b) == F.add(a, F.neg(b))
    if a != 0:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.order - 1) == 1


def test_elements_enumeration_count():
    F = FiniteField(3, 2)
    elems = list(F.elements())
    assert len(elems) == 9
    assert len(set(elems)) == 9


def test_table_and_slow_paths_agree():
    fast = FiniteField(3, 3)
    slow = ExtensionField(FiniteField(3), fast.modulus, want_tables=False)
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randrange(27), rng.randrange(27)
        assert fast.mul(a, b) == slow.mul(a, b)
        if a:
            assert fast.inv(a) == slow.inv(a)


def test_tower_extension_embeds_constants():
    F9 = FiniteField(3, 2)
    K = extension_by_degree(F9, 2)  # F_81 over F_9
    assert K.order == 81
    for c in range(9):
        for d in range(9):
            assert K.mul(c, d) == F9.mul(c, d)


def test_extension_of_residue_field():
    F5 = FiniteField(5)
    K = extension_of(F5, (2, 0, 1))  # F_5[x]/(x^2 + 2)
    xbar = K.encode((0, 1))
    # xbar^2 = -2 = 3
    assert K.mul(xbar, xbar) == 3
    assert K.digits(xbar) == (0, 1)


def test_random_element_is_seeded():
    F = FiniteField(7)
    assert [F.random(random.Random(9)) for _ in range(5)] == [
        F.random(random.Random(9)) for _ in range(5)
    ]


def test_descriptor_round_trip():
    F = FiniteField(2, 3)
    d = F.descriptor()
    assert d["p"] == 2 and d["k"] == 3
    G = FiniteField(d["p"], d["k"], d["field_modulus"])
    assert G.modulus == F.modulus
