"""Gamma, zeta and Dirichlet L-series evaluation, and functional-equation checks.

All values are plain Python ``complex``; public routines raise
:class:`NumericalError` instead of returning NaN or infinity. Series come
back as :class:`SeriesResult` carrying the number of terms used and a tail
bound (``math.inf`` when no bound is available).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from farey_audit.characters import DirichletCharacter, gauss_sum, is_primitive, parity, root_of_unity
from farey_audit.sieves import SieveTable, sieve_build

DEFAULT_TERMS = 1_000_000

# Lanczos approximation, g = 7, n = 9 (P. Godfrey's coefficient set, as
# tabulated in Numerical Recipes 3rd ed. section 6.1 and widely reproduced).
_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2 * math.pi)

# eta(s) acceleration: partial sums up to ETA_TERMS + ETA_DEPTH, then the last
# ETA_DEPTH + 1 of them averaged pairwise ETA_DEPTH times. Reaches ~1e-14
# for 0 < Re s <= 2, |Im s| <= 30.
ETA_TERMS = 100
ETA_DEPTH = 40

# Euler-Maclaurin order for the Hurwitz tails used by the abel method.
EM_ORDER = 8

# Terms used by functional_equation_* for the abel-evaluated L values.
FEQ_TERMS = 20_000

FEQ_CONVENTION = (
    "L side evaluated as (pi/q)^(-(1-s+sigma)/2) Gamma((1-s+sigma)/2) L(1-s, conj chi) "
    "= i^sigma q^(1/2) / tau(chi) (pi/q)^(-(s+sigma)/2) Gamma((s+sigma)/2) L(s, chi)"
)


class NumericalError(ArithmeticError):
    """A non-finite value or a pole was hit."""


class PoleError(NumericalError):
    pass


class MethodError(ValueError):
    """Evaluation method is not valid in the requested region."""


class SieveTooSmall(ValueError):
    pass


def _finite(z: complex, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NumericalError(f"{what} is not finite: {z}")
    return z


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    tail_bound: float
    method: str
    trajectory: tuple[tuple[int, complex], ...] | None = None

    @property
    def diagnostic(self) -> bool:
        return self.trajectory is not None


# --- Gamma and zeta ----------------------------------------------------------


def complex_gamma(z: complex) -> complex:
    """Gamma(z) via Lanczos for Re z >= 1/2 and reflection otherwise."""
    z = complex(z)
    if z.real <= 0.5:
        n = round(z.real)
        if n <= 0 and abs(z - n) < 1e-12:
            raise PoleError(f"Gamma has a pole at {n}")
    if z.real < 0.5:
        return _finite(cmath.pi / (cmath.sin(cmath.pi * z) * complex_gamma(1 - z)), "Gamma")
    z -= 1
    acc = _LANCZOS_COEF[0]
    for i in range(1, _LANCZOS_G + 2):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    log_val = _HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)
    if log_val.real > 709:
        raise NumericalError(f"Gamma({z + 1}) overflows")
    return _finite(cmath.exp(log_val), "Gamma")


def zeta_strip(s: complex) -> complex:
    """zeta(s) for Re s > 0 as eta(s) / (1 - 2^(1-s))."""
    s = complex(s)
    if s.real <= 0:
        raise ValueError(f"zeta_strip needs Re(s) > 0, got {s}")
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    denom = 1 - 2 ** (1 - s)
    if abs(denom) < 1e-10:
        raise ValueError(f"s = {s} is a zero of 1 - 2^(1-s); excluded")
    n = np.arange(1, ETA_TERMS + ETA_DEPTH + 1, dtype=float)
    signs = np.where(n % 2 == 1, 1.0, -1.0)
    partial = np.cumsum(signs * np.exp(-s * np.log(n)))[ETA_TERMS - 1:]
    for _ in range(ETA_DEPTH):
        partial = 0.5 * (partial[1:] + partial[:-1])
    return _finite(partial[0] / denom, "zeta")


# --- partial summation -------------------------------------------------------


def _apply(fn: Callable, arr: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(fn(arr))
        if out.shape == arr.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([fn(v) for v in arr.tolist()])


def abel_transform(U: Callable, f: Callable, y: float, x: float) -> complex:
    """U(x)f(x) - U(y)f(y) - integral_y^x U(t) f'(t) dt.

    ``U`` is the summatory function of some u(n), evaluated at integers
    (it is constant on [n, n+1)). The integral is summed exactly over those
    unit steps, so for differentiable ``f`` the result equals
    sum_{y < n <= x} u(n) f(n) up to rounding. Both callables may be
    vectorised over numpy arrays; scalar ones are mapped element-wise.
    """
    if not 0 <= y < x:
        raise ValueError(f"abel_transform needs 0 <= y < x, got y={y}, x={x}")
    ns = np.arange(math.floor(y), math.floor(x) + 1)
    lo = np.maximum(ns, y).astype(float)
    hi = np.minimum(ns + 1, x).astype(float)
    keep = hi > lo
    ns, lo, hi = ns[keep], lo[keep], hi[keep]
    un = _apply(U, ns)
    live = un != 0
    integral = np.sum(un[live] * (_apply(f, hi[live]) - _apply(f, lo[live])))
    ux = complex(U(math.floor(x)))
    uy = complex(U(math.floor(y)))
    boundary = (ux * complex(f(x)) if ux else 0) - (uy * complex(f(y)) if uy else 0)
    return _finite(boundary - integral, "abel_transform")


# --- twisted Moebius sums ----------------------------------------------------


@dataclass(frozen=True)
class ThetaValue:
    """theta(x, chi) = sum_k lattice[k] exp(2 pi i k / M)."""

    x: int
    value: complex
    lattice: tuple[int, ...]

    @property
    def ratio(self) -> float:
        """|theta| / (sqrt(x) ln x); 0 at x = 1."""
        if self.x < 2:
            return 0.0
        return abs(self.value) / (math.sqrt(self.x) * math.log(self.x))


def _check_bound(table: SieveTable, x: int) -> None:
    if x < 1 or x > table.bound:
        raise SieveTooSmall(f"x={x} outside sieve range 1..{table.bound}")


def theta_chi(x: int, chi: DirichletCharacter, table: SieveTable) -> ThetaValue:
    x = int(x)
    _check_bound(table, x)
    M = chi.group.exponent
    k = chi.value_exponents[np.arange(1, x + 1) % chi.modulus]
    mu = table.mu[1: x + 1].astype(np.int64)
    live = (mu != 0) & (k >= 0)
    lattice = np.zeros(M, np.int64)
    np.add.at(lattice, k[live], mu[live])
    terms = [int(c) * root_of_unity(j, M) for j, c in enumerate(lattice) if c]
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return ThetaValue(x, value, tuple(int(c) for c in lattice))


def _theta_path(chi: DirichletCharacter, table: SieveTable, X: int) -> np.ndarray:
    """theta(n, chi) for n = 1..X."""
    coeff = table.mu[1: X + 1] * chi.values[np.arange(1, X + 1) % chi.modulus]
    return np.cumsum(coeff)


# --- L-series ----------------------------------------------------------------

SComplex = Union[complex, float, int]


def _powers(n: np.ndarray, s: complex) -> np.ndarray:
    return np.exp(-s * np.log(n.astype(float)))


def _zeta_tail_bound(sigma: float, X: int) -> float:
    # sum_{n > X} n^-sigma <= X^(1-sigma) / (sigma - 1)
    return X ** (1 - sigma) / (sigma - 1)


@lru_cache(maxsize=4)
def _bernoulli_even(K: int) -> tuple[Fraction, ...]:
    """B_0, B_2, ..., B_2K (Akiyama-Tanigawa)."""
    n_max = 2 * K
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m % 2 == 0:
            out.append(a[0])
    return tuple(out)


def _hurwitz_tail(s: complex, w: np.ndarray) -> tuple[np.ndarray, float]:
    """Euler-Maclaurin for sum_{m >= 0} (m + w)^-s, shifted by -1/(s-1).

    The constant shift cancels whenever the results are weighted by a
    mean-zero sequence, and makes s = 1 regular. Returns the values and a
    bound on the per-entry remainder.
    """
    logw = np.log(w)
    z = (1 - s) * logw
    small = np.abs(z) < 1e-8
    ratio = np.where(small, 1 + z / 2, np.expm1(z) / np.where(small, 1, z))
    val = -logw * ratio + 0.5 * np.exp(-s * logw)
    B = _bernoulli_even(EM_ORDER + 1)
    rising = s  # s (s+1) ... (s+2j-2)
    for j in range(1, EM_ORDER + 1):
        val = val + float(B[j]) / math.factorial(2 * j) * rising * np.exp(-(s + 2 * j - 1) * logw)
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    K = EM_ORDER
    rem = (
        abs(rising) * abs(float(B[K + 1])) / math.factorial(2 * K + 2)
        * float(np.min(w)) ** (-(s.real + 2 * K + 1))
        * abs(s + 2 * K + 1) / (s.real + 2 * K + 1)
    )
    return val, rem


def _l_direct(s: complex, chi: DirichletCharacter, X: int) -> SeriesResult:
    if s.real <= 1:
        raise MethodError(f"direct summation needs Re(s) > 1, got {s}")
    n = np.arange(1, X + 1)
    value = np.sum(chi.values[n % chi.modulus] * _powers(n, s))
    return SeriesResult(_finite(value, "L"), X, _zeta_tail_bound(s.real, X), "direct")


def _l_abel(s: complex, chi: DirichletCharacter, X: int) -> SeriesResult:
    if s.real <= 0:
        raise MethodError(f"abel summation needs Re(s) > 0, got {s}")
    if chi.is_principal:
        raise MethodError("abel summation needs a nonprincipal character")
    q = chi.modulus
    X = max(q, X - X % q)
    cyc = np.concatenate(([0], np.cumsum(chi.values[1:q])))  # U(r) for r = 0..q-1

    def U(t):
        return cyc[np.asarray(t, dtype=np.int64) % q]

    def f(t):
        return np.exp(-s * np.log(t))

    head = abel_transform(U, f, 0, X)
    a = np.arange(1, q)
    w = X // q + a / q
    tail_vals, rem = _hurwitz_tail(s, w)
    weights = chi.values[1:q]
    tail = q ** (-s) * np.sum(weights * tail_vals)
    rounding = 8 * np.finfo(float).eps * math.sqrt(X) * max(1.0, abs(head))
    bound = q ** (-s.real) * (q - 1) * rem + rounding
    return SeriesResult(_finite(head + tail, "L"), X, float(bound), "abel")


@lru_cache(maxsize=4)
def _primes_upto(n: int) -> np.ndarray:
    return sieve_build(n).primes


def _l_euler(s: complex, chi: DirichletCharacter, X: int) -> SeriesResult:
    if s.real <= 1:
        raise MethodError(f"Euler product needs Re(s) > 1, got {s}")
    p = _primes_upto(X)
    cp = chi.values[p % chi.modulus]
    live = cp != 0
    p, cp = p[live], cp[live]
    factors = cp * _powers(p, s)
    value = np.exp(-np.sum(np.log1p(-factors)))
    # |log of the omitted factors| <= sum_{n > X} n^-sigma / (1 - X^-sigma)
    log_tail = _zeta_tail_bound(s.real, X) / (1 - X ** (-s.real))
    bound = abs(value) * math.expm1(log_tail)
    return SeriesResult(_finite(value, "L"), int(p.size), float(bound), "euler_product")


def l_series(
    s: SComplex, chi: DirichletCharacter, method: str = "direct", terms: int = DEFAULT_TERMS
) -> SeriesResult:
    """L(s, chi) by ``direct`` summation, ``abel`` summation or ``euler_product``.

    direct and euler_product need Re s > 1; abel needs Re s > 0 and a
    nonprincipal chi, and adds an Euler-Maclaurin evaluation of the periodic
    tail beyond ``terms`` (rounded down to a multiple of q).
    """
    s = complex(s)
    terms = int(terms)
    if terms < 1:
        raise ValueError("terms must be positive")
    if method == "direct":
        return _l_direct(s, chi, terms)
    if method == "abel":
        return _l_abel(s, chi, terms)
    if method == "euler_product":
        return _l_euler(s, chi, max(terms, 2))
    raise MethodError(f"unknown method {method!r}")


def _checkpoints(X: int) -> list[int]:
    pts = []
    p = 10
    while p < X:
        pts.append(p)
        p *= 10
    pts.append(X)
    return pts


def inv_l_series(
    s: SComplex,
    chi: DirichletCharacter,
    method: str,
    table: SieveTable,
    tol: float | None = None,
) -> SeriesResult:
    """1/L(s, chi) as sum mu(n)chi(n)/n^s (``dirichlet_mu``) or as
    s * integral_1^X theta(t, chi) t^(-s-1) dt (``integral``), with X the
    sieve bound.

    For 1/2 < Re s <= 1 nothing is claimed about convergence: the result
    carries the partial-sum trajectory at X = 10, 100, ... and an infinite
    tail bound.
    """
    s = complex(s)
    X = table.bound
    if s.real <= 0.5:
        raise MethodError(f"inv_l_series needs Re(s) > 1/2, got {s}")
    if method not in ("dirichlet_mu", "integral"):
        raise MethodError(f"unknown method {method!r}")
    n = np.arange(1, X + 1)
    if method == "dirichlet_mu":
        pieces = table.mu[1:] * chi.values[n % chi.modulus] * _powers(n, s)
    else:
        theta = _theta_path(chi, table, X)
        # s * int_n^{n+1} t^(-s-1) dt = n^-s - (n+1)^-s, written to avoid cancellation
        step = _powers(n, s) * -np.expm1(-s * np.log1p(1.0 / n))
        pieces = np.concatenate((theta[:-1] * step[:-1], [0]))
    if s.real <= 1:
        cum = np.cumsum(pieces)
        traj = tuple((c, complex(cum[c - 1])) for c in _checkpoints(X))
        return SeriesResult(_finite(cum[-1], "1/L"), X, math.inf, method, traj)
    value = np.sum(pieces)
    bound = _zeta_tail_bound(s.real, X)
    if method == "integral":
        bound *= abs(s)
    if tol is not None and bound > tol:
        raise SieveTooSmall(f"sieve bound {X} gives tail bound {bound:.3g} > tol {tol:.3g}")
    return SeriesResult(_finite(value, "1/L"), X, bound, method)


# --- functional equations ----------------------------------------------------


Subject = Union[str, DirichletCharacter]


def functional_equation_sides(s: SComplex, subject: Subject) -> tuple[complex, complex]:
    """Both sides of the completed functional equation for zeta or primitive chi."""
    s = complex(s)
    if isinstance(subject, str):
        if subject != "zeta":
            raise ValueError(f"unknown subject {subject!r}")
        if not 0 < s.real < 1:
            raise ValueError(f"zeta check needs 0 < Re(s) < 1, got {s}")
        lhs = cmath.pi ** (-s / 2) * complex_gamma(s / 2) * zeta_strip(s)
        t = 1 - s
        rhs = cmath.pi ** (-t / 2) * complex_gamma(t / 2) * zeta_strip(t)
        return lhs, rhs
    chi = subject
    if chi.is_principal or not is_primitive(chi):
        raise ValueError(f"character mod {chi.modulus} index {chi.index} is not primitive nonprincipal")
    if not 0 < s.real < 1:
        raise ValueError(f"L check needs 0 < Re(s) < 1, got {s}")
    q = chi.modulus
    sig = parity(chi)
    tau = gauss_sum(chi).value
    a_left = (1 - s + sig) / 2
    a_right = (s + sig) / 2
    lhs = (cmath.pi / q) ** (-a_left) * complex_gamma(a_left) * l_series(1 - s, chi.conjugate(), "abel", FEQ_TERMS).value
    rhs = (
        (1j**sig) * math.sqrt(q) / tau
        * (cmath.pi / q) ** (-a_right) * complex_gamma(a_right) * l_series(s, chi, "abel", FEQ_TERMS).value
    )
    return lhs, rhs


def functional_equation_residual(s: SComplex, subject: Subject) -> float:
    """|LHS - RHS| / max(|LHS|, |RHS|, 1e-30)."""
    lhs, rhs = functional_equation_sides(s, subject)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
