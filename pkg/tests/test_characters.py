import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from farey_audit.characters import (
    MODULUS_CAP,
    character,
    enumerate_characters,
    gauss_sum,
    is_primitive,
    parity,
)
from oracles import phi_count


def _real_nonprincipal(q):
    return next(c for c in enumerate_characters(q) if c.is_real and not c.is_principal)


def test_trivial_modulus():
    (chi,) = enumerate_characters(1)
    assert chi.is_principal and parity(chi) == 0
    assert all(chi(n) == 1 for n in range(-5, 20))
    assert gauss_sum(chi).value == pytest.approx(1, abs=1e-15)


def test_mod_4():
    chars = enumerate_characters(4)
    assert len(chars) == 2
    chi = chars[1]
    assert chi(3) == -1 and chi(1) == 1 and chi(2) == 0
    assert parity(chi) == 1 and is_primitive(chi)
    assert not is_primitive(chars[0]) and chars[0].conductor == 1
    assert abs(gauss_sum(chi).value - 2j) < 1e-12


def test_mod_5():
    chars = enumerate_characters(5)
    assert len(chars) == 4
    for chi in chars:
        for n in range(1, 5):
            assert chi.exact(n)[1] in (1, 2, 4)
    chi = _real_nonprincipal(5)
    assert [chi(n) for n in (2, 3, 4)] == [-1, -1, 1]
    assert parity(chi) == 0
    assert gauss_sum(chi).value == pytest.approx(math.sqrt(5), abs=1e-12)


def test_mod_8_structure():
    chars = enumerate_characters(8)
    assert character(8, 0).is_principal
    assert sorted(c.conductor for c in chars) == [1, 4, 8, 8]
    induced = next(c for c in chars if c.conductor == 4)
    assert not is_primitive(induced)
    assert [induced(n) for n in (1, 3, 5, 7)] == [1, -1, 1, -1]


def test_exact_values_and_conjugation():
    chi = character(7, 1)
    assert chi.exact(7) is None and chi.exact(1) == (0, 1)
    bar = chi.conjugate()
    for n in range(1, 7):
        assert bar(n) == pytest.approx(chi(n).conjugate(), abs=1e-15)
    assert bar.conjugate() == chi


def test_index_roundtrip_and_errors():
    for q in (1, 8, 15, 24, 60):
        for i, chi in enumerate(enumerate_characters(q)):
            assert chi.index == i and character(q, i) == chi
    with pytest.raises(ValueError):
        character(5, 4)
    with pytest.raises(ValueError):
        enumerate_characters(0)
    with pytest.raises(ValueError):
        enumerate_characters(MODULUS_CAP + 1)


def test_character_count():
    for q in range(1, 201):
        chars = enumerate_characters(q)
        assert len(chars) == phi_count(q)
        assert sum(c.is_principal for c in chars) == 1
        assert len({c.value_exponents.tobytes() for c in chars}) == len(chars)


def test_orthogonality():
    for q in range(1, 101):
        for chi in enumerate_characters(q):
            if not chi.is_principal:
                assert abs(chi.values.sum()) < 1e-12


def test_multiplicativity_grid():
    for q in range(1, 31):
        for chi in enumerate_characters(q):
            k, M = chi.value_exponents, chi.group.exponent
            for m in range(1, 51):
                for n in range(1, 51):
                    a, b, c = k[m % q], k[n % q], k[m * n % q]
                    if a < 0 or b < 0:
                        assert c < 0
                    else:
                        assert c == (a + b) % M


@given(st.integers(1, 400), st.integers(-10_000, 10_000), st.data())
def test_periodicity_and_units(q, n, data):
    chi = character(q, data.draw(st.integers(0, phi_count(q) - 1)))
    assert chi(n) == chi(n + q)
    if math.gcd(n, q) > 1:
        assert chi(n) == 0
    else:
        assert abs(abs(chi(n)) - 1) < 1e-15


def test_gauss_modulus_for_primitive():
    for q in range(1, 51):
        for chi in enumerate_characters(q):
            if is_primitive(chi):
                assert abs(abs(gauss_sum(chi).value) - math.sqrt(q)) < 1e-10


def test_parity_rule():
    for q in range(3, 40):
        for chi in enumerate_characters(q):
            assert parity(chi) == (0 if chi(q - 1) == 1 else 1)
    assert all(parity(chi) == 0 for chi in enumerate_characters(2))


def test_conductor_against_induction():
    # a character of conductor d agrees on units with a character mod d
    for q in (12, 16, 20, 36, 45):
        for chi in enumerate_characters(q):
            d = chi.conductor
            units = [n for n in range(1, q) if math.gcd(n, q) == 1]
            assert any(
                all(np.isclose(chi(n), psi(n)) for n in units) for psi in enumerate_characters(d)
            )
