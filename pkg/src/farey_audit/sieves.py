"""Euler phi and Moebius sieves, their cumulative sums, and harmonic sums."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from farey_audit import _kernels

#: Largest bound accepted by :func:`sieve_build` (about 170 MB of tables).
SIEVE_CAP = 20_000_000


class SieveSizeError(ValueError):
    """Requested bound is zero, negative or above :data:`SIEVE_CAP`."""


class BoundError(ValueError):
    """Query argument lies outside the range a table was built for."""


@dataclass(frozen=True, eq=False)
class SieveTable:
    """phi(n) and mu(n) for 0 <= n <= bound.

    Index 0 is padding (phi[0] = mu[0] = 0) so that ``phi[n]`` is phi(n).
    ``cum_phi[n]`` and ``cum_mu[n]`` are the prefix sums Phi(n) and M(n).
    """

    bound: int
    phi: np.ndarray
    mu: np.ndarray
    primes: np.ndarray
    cum_phi: np.ndarray = field(repr=False)
    cum_mu: np.ndarray = field(repr=False)

    def _check(self, n: int, name: str) -> None:
        if n < 1 or n > self.bound:
            raise BoundError(f"{name}={n} outside sieve range 1..{self.bound}")


@dataclass(frozen=True)
class CumulativeTotient:
    N: int
    value: int

    @property
    def audit(self) -> float:
        """(Phi(N) - 3N^2/pi^2) / (N ln N); 0 at N = 1."""
        if self.N < 2:
            return 0.0
        return (self.value - 3 * self.N**2 / math.pi**2) / (self.N * math.log(self.N))


@dataclass(frozen=True)
class MertensValue:
    x: int
    value: int

    @property
    def normalized(self) -> float:
        """M(x) / (sqrt(x) ln x); 0 at x = 1."""
        if self.x < 2:
            return 0.0
        return self.value / (math.sqrt(self.x) * math.log(self.x))


def sieve_build(n_max: int) -> SieveTable:
    """Linear sieve for phi and mu up to ``n_max``.

    Raises:
        SieveSizeError: if ``n_max`` is not in ``1..SIEVE_CAP``.
    """
    n_max = int(n_max)
    if n_max < 1 or n_max > SIEVE_CAP:
        raise SieveSizeError(f"sieve bound {n_max} must be in 1..{SIEVE_CAP}")
    phi, mu, primes = _kernels.linear_sieve(n_max)
    cum_phi = np.cumsum(phi)
    cum_mu = np.cumsum(mu, dtype=np.int64)
    for arr in (phi, mu, primes, cum_phi, cum_mu):
        arr.setflags(write=False)
    return SieveTable(n_max, phi, mu, primes, cum_phi, cum_mu)


def totient_cumulative(table: SieveTable, N: int) -> CumulativeTotient:
    table._check(N, "N")
    return CumulativeTotient(int(N), int(table.cum_phi[N]))


def phi_sum(N: int) -> int:
    """Phi(N) without keeping a table around."""
    return totient_cumulative(sieve_build(N), N).value


def mertens(table: SieveTable, x: int) -> MertensValue:
    table._check(x, "x")
    return MertensValue(int(x), int(table.cum_mu[x]))


def harmonic_sum(x: int) -> float:
    """H(x) = sum_{n<=x} 1/n with Neumaier-compensated accumulation."""
    x = int(x)
    if x < 1:
        raise ValueError(f"harmonic_sum needs x >= 1, got {x}")
    return float(_kernels.neumaier_reciprocal_sum(x))


def gamma_estimate(x: int) -> float:
    """H(x) - ln x, which tends to Euler's constant with error below 1/x."""
    return harmonic_sum(x) - math.log(x)
