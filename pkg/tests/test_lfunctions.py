import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from farey_audit.characters import character, enumerate_characters, is_primitive
from farey_audit.lfunctions import (
    MethodError,
    NumericalError,
    PoleError,
    SieveTooSmall,
    abel_transform,
    complex_gamma,
    functional_equation_residual,
    functional_equation_sides,
    inv_l_series,
    l_series,
    theta_chi,
    zeta_strip,
)
from farey_audit.sieves import mertens, sieve_build

CATALAN = 0.915965594177219015
CHI4 = character(4, 1)
CHI1 = character(1, 0)
CHI5 = character(5, 2)  # the real nonprincipal character mod 5


@pytest.mark.parametrize("z, expected", [(1, 1), (0.5, math.sqrt(math.pi)), (5, 24), (-0.5, -2 * math.sqrt(math.pi))])
def test_gamma_examples(z, expected):
    assert complex_gamma(z) == pytest.approx(expected, rel=1e-13)


@settings(deadline=None)
@given(st.floats(-20, 40), st.floats(-40, 40))
def test_gamma_against_mpmath(x, y):
    z = complex(x, y)
    if min(abs(z + n) for n in range(0, 25)) < 1e-3:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    if not (1e-290 < abs(ref) < 1e300):
        return
    assert abs(complex_gamma(z) - ref) <= 1e-12 * abs(ref) * (1 + abs(y) / 10 + abs(min(x, 0)))


def test_gamma_recurrence():
    grid = [complex(x, y) for x in (0.1, 0.3, 0.5, 0.7, 0.9) for y in (-10, -1, 2, 15)]
    for z in grid:
        g1 = complex_gamma(z + 1)
        assert abs(g1 - z * complex_gamma(z)) / abs(g1) < 1e-11


def test_gamma_poles():
    for n in (0, -1, -7):
        with pytest.raises(PoleError):
            complex_gamma(n)
    with pytest.raises(NumericalError):
        complex_gamma(300)


@pytest.mark.parametrize(
    "s, expected",
    [(2, math.pi**2 / 6), (0.5, -1.4603545088095868), (3, 1.2020569031595942)],
)
def test_zeta_examples(s, expected):
    assert zeta_strip(s).real == pytest.approx(expected, abs=1e-12)


def test_zeta_against_mpmath():
    for s in (0.1 + 3j, 0.5 + 14.134725j, 0.9 - 25j, 1.5 + 30j, 2 - 7j, 0.3):
        assert abs(zeta_strip(s) - complex(mpmath.zeta(s))) < 1e-10


def test_zeta_errors():
    with pytest.raises(PoleError):
        zeta_strip(1)
    with pytest.raises(ValueError):
        zeta_strip(-0.5)
    with pytest.raises(ValueError):
        zeta_strip(1 + 2j * math.pi / math.log(2))


def test_abel_examples():
    assert abel_transform(lambda n: n, lambda t: np.ones_like(t), 0, 10) == pytest.approx(10)
    h = abel_transform(lambda n: n, lambda t: 1 / t, 1, 10)
    assert h.real == pytest.approx(sum(1 / n for n in range(2, 11)), abs=1e-13)
    U = np.cumsum([0] + [CHI4(n).real for n in range(1, 10_001)])
    v = abel_transform(lambda n: U[n], lambda t: t**-2.0, 0, 10_000)
    direct = math.fsum(CHI4(n).real / n**2 for n in range(1, 10_001))
    assert abs(v - direct) < 1e-10
    with pytest.raises(ValueError):
        abel_transform(lambda n: n, lambda t: t, 3, 3)


def test_abel_scalar_callables():
    v = abel_transform(lambda n: int(n), lambda t: math.sqrt(t), 2.5, 7.25)
    assert v.real == pytest.approx(sum(math.sqrt(n) for n in range(3, 8)), abs=1e-12)


@pytest.fixture(scope="module")
def small_table():
    return sieve_build(10_000)


def test_theta_examples(small_table):
    assert theta_chi(1, CHI4, small_table).value == 1
    assert theta_chi(5, CHI4, small_table).value == 1
    assert theta_chi(5, CHI1, small_table).value == -2
    assert theta_chi(1, CHI1, small_table).ratio == 0
    with pytest.raises(SieveTooSmall):
        theta_chi(10_001, CHI1, small_table)


def test_theta_is_mertens(small_table):
    for x in range(1, 10_001):
        assert theta_chi(x, CHI1, small_table).value == mertens(small_table, x).value


def test_theta_lattice(small_table):
    chi = character(7, 1)
    direct = sum(small_table.mu[n] * chi(n) for n in range(1, 501))
    assert abs(theta_chi(500, chi, small_table).value - direct) < 1e-12


def test_l_examples():
    assert l_series(2, CHI1).value.real == pytest.approx(math.pi**2 / 6, abs=2e-6)
    r = l_series(2, CHI4)
    assert abs(r.value - CATALAN) <= r.tail_bound + 1e-12
    assert abs(l_series(2, CHI4, "abel").value - CATALAN) < 1e-14
    assert abs(l_series(1, CHI4, "abel").value - math.pi / 4) < 1e-14
    e = l_series(2, CHI4, "euler_product", 100_000)
    assert abs(e.value - CATALAN) <= e.tail_bound


def test_l_against_mpmath():
    for s in (0.5 + 3j, 1.0, 1.5, 2 + 1j):
        for chi in (CHI4, CHI5, character(7, 2)):
            coeffs = [chi(n) for n in range(chi.modulus)]
            if s == 1:
                # Hurwitz poles only cancel for exactly zero-sum coefficients
                q = chi.modulus
                ref = -complex(mpmath.fsum(c * mpmath.digamma(mpmath.mpf(a) / q) for a, c in enumerate(coeffs) if a)) / q
            else:
                ref = complex(mpmath.dirichlet(s, coeffs))
            assert abs(l_series(s, chi, "abel").value - ref) < 1e-12


def test_l_errors():
    with pytest.raises(MethodError):
        l_series(2, CHI4, "bogus")
    with pytest.raises(ValueError):
        l_series(1, CHI4, "direct")
    with pytest.raises(ValueError):
        l_series(1, CHI4, "euler_product")
    with pytest.raises(ValueError):
        l_series(2, CHI1, "abel")
    with pytest.raises(ValueError):
        l_series(-0.5, CHI4, "abel")


@pytest.mark.parametrize("method", ["direct", "abel", "euler_product"])
def test_tail_bound_holds_under_doubling(method):
    for chi, s in ((CHI4, 1.5), (CHI5, 2 + 1j), (character(7, 3), 3)):
        a = l_series(s, chi, method, 20_000)
        b = l_series(s, chi, method, 40_000)
        assert abs(a.value - b.value) <= a.tail_bound


def test_conjugation_symmetry():
    for q in (5, 7, 8, 12):
        for chi in enumerate_characters(q):
            if chi.is_principal:
                continue
            for s in (1.5 + 2j, 0.7 - 4j):
                a = l_series(s, chi, "abel", 10_000).value
                b = l_series(s.conjugate(), chi.conjugate(), "abel", 10_000).value
                assert abs(a.conjugate() - b) < 1e-12


def test_abel_vs_direct():
    worst = 0.0
    for q in range(3, 11):
        for chi in enumerate_characters(q):
            if chi.is_principal:
                continue
            for s in (1.5, 2, 3):
                d = l_series(s, chi, "direct", 10**6).value
                a = l_series(s, chi, "abel", 10**6).value
                worst = max(worst, abs(d - a))
    assert worst < 1e-9


@pytest.fixture(scope="module")
def big_table():
    return sieve_build(10**6)


@pytest.mark.parametrize("s", [2, 3, 2 + 1j])
@pytest.mark.parametrize("chi", [CHI1, CHI4, CHI5], ids=["mod1", "mod4", "mod5"])
def test_inverse_cross_method(big_table, s, chi):
    a = inv_l_series(s, chi, "dirichlet_mu", big_table)
    b = inv_l_series(s, chi, "integral", big_table)
    assert a.terms_used == b.terms_used == 10**6
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound


def test_inverse_examples(big_table):
    assert inv_l_series(2, CHI1, "dirichlet_mu", big_table).value.real == pytest.approx(6 / math.pi**2, abs=1e-6)
    assert inv_l_series(3, CHI1, "integral", big_table).value.real == pytest.approx(1 / 1.2020569031595942, abs=1e-6)
    assert inv_l_series(2, CHI4, "integral", big_table).value.real == pytest.approx(1 / CATALAN, abs=1e-6)


def test_inverse_errors(small_table):
    with pytest.raises(MethodError):
        inv_l_series(0.5, CHI4, "dirichlet_mu", small_table)
    with pytest.raises(MethodError):
        inv_l_series(2, CHI4, "series", small_table)
    with pytest.raises(SieveTooSmall):
        inv_l_series(1.1, CHI4, "dirichlet_mu", small_table, tol=1e-9)


def test_inverse_diagnostic_mode(small_table):
    r = inv_l_series(0.8, CHI4, "dirichlet_mu", small_table)
    assert r.diagnostic and r.tail_bound == math.inf
    assert [x for x, _ in r.trajectory] == [10, 100, 1000, 10_000]
    assert r.trajectory[-1][1] == r.value
    assert not inv_l_series(2, CHI4, "dirichlet_mu", small_table).diagnostic


def test_feq_examples():
    assert functional_equation_residual(0.5, "zeta") == 0
    assert functional_equation_residual(0.3, "zeta") < 1e-8
    assert functional_equation_residual(0.7, CHI4) < 1e-8


def test_feq_primitive_characters():
    for q in (3, 4, 5, 7, 8):
        for chi in enumerate_characters(q):
            if chi.is_principal or not is_primitive(chi):
                continue
            for s in (0.3, 0.5 + 5j, 0.8 - 2j):
                assert functional_equation_residual(s, chi) < 1e-8


def test_feq_errors():
    with pytest.raises(ValueError):
        functional_equation_residual(0.5, character(8, 2))  # induced from mod 4
    with pytest.raises(ValueError):
        functional_equation_residual(0.5, CHI1)
    with pytest.raises(ValueError):
        functional_equation_residual(1.5, "zeta")
    with pytest.raises(ValueError):
        functional_equation_sides(0.5, "eta")


def test_feq_sides_differ_off_symmetry():
    lhs, rhs = functional_equation_sides(0.3 + 2j, CHI5)
    assert abs(lhs) > 0.01 and cmath.isclose(lhs, rhs, rel_tol=1e-10)
