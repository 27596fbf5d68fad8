"""Dirichlet characters mod q built from generators of (Z/qZ)*.

(Z/qZ)* is split by CRT into cyclic components: one per odd prime power
p^e (generated by a primitive root), none for 2, {-1} for 4, and {-1, 5}
for 2^e with e >= 3. A character is an exponent vector ``a`` with one entry
per component; chi(n) = exp(2 pi i sum_c a_c log_c(n) / ord_c).

Values are kept exact as exponents k of exp(2 pi i k / M) where M is the
group exponent, and only turned into complex floats on request.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

#: Largest modulus accepted (factorisation is by trial division).
MODULUS_CAP = 1_000_000


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root(p: int, e: int) -> int:
    order = p - 1
    qs = [f for f, _ in factorize(order)]
    g = 2
    while any(pow(g, order // f, p) == 1 for f in qs):
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    modulus: int  # prime power p^e this component lives on
    generator: int
    order: int
    dlog: np.ndarray = field(repr=False)  # dlog[r] for r mod modulus, -1 off this component


def _components(p: int, e: int) -> list[_Component]:
    m = p**e
    if p != 2:
        g = _primitive_root(p, e)
        order = m // p * (p - 1)
        dlog = np.full(m, -1, np.int64)
        x = 1
        for i in range(order):
            dlog[x] = i
            x = x * g % m
        return [_Component(m, g, order, dlog)]
    if e == 1:
        return []
    half = m // 4 if e >= 3 else 1
    sign_log = np.full(m, -1, np.int64)
    five_log = np.full(m, -1, np.int64)
    x = 1
    for j in range(half):
        sign_log[x] = 0
        sign_log[m - x] = 1
        five_log[x] = j
        five_log[m - x] = j
        x = x * 5 % m
    comps = [_Component(m, m - 1, 2, sign_log)]
    if e >= 3:
        comps.append(_Component(m, 5, half, five_log))
    return comps


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    """Generator data and per-residue logarithms for (Z/qZ)*."""

    modulus: int
    components: tuple[_Component, ...]
    exponent: int  # M: every chi(n) is an M-th root of unity
    logs: np.ndarray = field(repr=False)  # shape (n_components, q), -1 off units
    units: np.ndarray = field(repr=False)  # bool, length q

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(c.order for c in self.components)

    @property
    def size(self) -> int:
        return math.prod(self.orders)


@lru_cache(maxsize=64)
def character_group(q: int) -> CharacterGroup:
    q = int(q)
    if q < 1 or q > MODULUS_CAP:
        raise ValueError(f"modulus {q} must be in 1..{MODULUS_CAP}")
    comps = tuple(c for p, e in factorize(q) for c in _components(p, e))
    residues = np.arange(q)
    logs = np.array([c.dlog[residues % c.modulus] for c in comps], dtype=np.int64).reshape(len(comps), q)
    units = np.gcd(residues, q) == 1
    exponent = math.lcm(*(c.order for c in comps)) if comps else 1
    for arr in (logs, units):
        arr.setflags(write=False)
    return CharacterGroup(q, comps, exponent, logs, units)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi mod ``modulus`` given by its exponent vector on the group generators."""

    modulus: int
    exponents: tuple[int, ...]

    @property
    def group(self) -> CharacterGroup:
        return character_group(self.modulus)

    @property
    def index(self) -> int:
        """Lexicographic rank of the exponent vector (0 is principal)."""
        idx = 0
        for a, o in zip(self.exponents, self.group.orders):
            idx = idx * o + a
        return idx

    @cached_property
    def value_exponents(self) -> np.ndarray:
        """k(n) for n mod q with chi(n) = exp(2 pi i k/M); -1 where gcd(n, q) > 1."""
        grp = self.group
        M = grp.exponent
        k = np.zeros(self.modulus, np.int64)
        for a, comp, log in zip(self.exponents, grp.components, grp.logs):
            k += a * (M // comp.order) * np.where(log >= 0, log, 0)
        k %= M
        k[~grp.units] = -1
        k.setflags(write=False)
        return k

    @cached_property
    def values(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as complex floats."""
        k = self.value_exponents
        M = self.group.exponent
        out = np.zeros(self.modulus, complex)
        unit = k >= 0
        out[unit] = [root_of_unity(int(x), M) for x in k[unit]]
        out.setflags(write=False)
        return out

    def exact(self, n: int) -> tuple[int, int] | None:
        """chi(n) as a reduced pair (k, m) meaning exp(2 pi i k/m), or None if chi(n) = 0."""
        k = int(self.value_exponents[n % self.modulus])
        if k < 0:
            return None
        M = self.group.exponent
        g = math.gcd(k, M)
        return k // g, M // g

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def is_real(self) -> bool:
        k = self.value_exponents
        M = self.group.exponent
        return bool(np.all((k <= 0) | (2 * k == M)))

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter(
            self.modulus, tuple((-a) % o for a, o in zip(self.exponents, self.group.orders))
        )

    @cached_property
    def conductor(self) -> int:
        """Smallest d | q such that chi is trivial on units congruent to 1 mod d."""
        k = self.value_exponents
        residues = np.arange(self.modulus)
        for d in _divisors(self.modulus):
            mask = (k >= 0) & (residues % d == 1 % d)
            if np.all(k[mask] == 0):
                return d
        return self.modulus


def root_of_unity(k: int, m: int) -> complex:
    # exact where the value is a fourth root of unity
    k %= m
    if 4 * k % m == 0:
        return (1, 1j, -1, -1j)[4 * k // m]
    return cmath.exp(2j * math.pi * k / m)


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, ordered by exponent vector (principal first)."""
    grp = character_group(q)
    return [DirichletCharacter(q, e) for e in itertools.product(*(range(o) for o in grp.orders))]


def character(q: int, index: int) -> DirichletCharacter:
    """The character mod q of the given lexicographic rank."""
    grp = character_group(q)
    if not 0 <= index < grp.size:
        raise ValueError(f"character index {index} out of range 0..{grp.size - 1} for q={q}")
    exps = []
    for o in reversed(grp.orders):
        index, a = divmod(index, o)
        exps.append(a)
    return DirichletCharacter(q, tuple(reversed(exps)))


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.conductor == chi.modulus


def parity(chi: DirichletCharacter) -> int:
    """sigma_chi: 0 for even characters (chi(-1) = 1), 1 for odd ones."""
    if chi.modulus <= 2:
        return 0
    k = int(chi.value_exponents[chi.modulus - 1])
    return 0 if k == 0 else 1


@dataclass(frozen=True)
class GaussSum:
    character: DirichletCharacter
    value: complex


def gauss_sum(chi: DirichletCharacter) -> GaussSum:
    """tau(chi) = sum_{m=1}^{q} chi(m) exp(2 pi i m/q), summed with math.fsum."""
    q = chi.modulus
    M = chi.group.exponent
    k = chi.value_exponents
    m = np.arange(1, q + 1)
    km = k[m % q]
    keep = km >= 0
    m, km = m[keep], km[keep]
    # chi(m) e(m/q) = e((k*q + m*M) / (M*q)), reduced to a symmetric residue
    period = M * q
    t = (km * q + m * M) % period
    t = np.where(2 * t > period, t - period, t)
    angle = 2 * math.pi * t / period
    value = complex(math.fsum(np.cos(angle)), math.fsum(np.sin(angle)))
    return GaussSum(chi, value)
