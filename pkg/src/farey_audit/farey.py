"""Streaming enumeration of the Farey series F_N on (0, 1].

F_N holds every reduced h/k with 0 < h <= k <= N; it has Phi(N) members.
0/1 is not a member; it only seeds the neighbour recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from farey_audit._kernels import farey_chunk
from farey_audit.sieves import CumulativeTotient

ZERO = Fraction(0)
ONE = Fraction(1)

#: Terms per compiled step of the walk.
CHUNK = 1 << 14

#: delta_stream keeps h*Phi and nu*k below 2**63 up to this N.
DELTA_CAP = 1_000_000


class EndOfSequence(Exception):
    """Raised by :func:`farey_next` when asked for the successor of 1/1."""


@dataclass(frozen=True)
class DeltaStat:
    nu: int
    fraction: Fraction
    delta: Fraction


def farey_next(prev: Fraction, cur: Fraction, N: int) -> Fraction:
    """Successor of ``cur`` in F_N given its predecessor ``prev``.

    >>> farey_next(Fraction(1, 4), Fraction(1, 3), 5)
    Fraction(2, 5)
    """
    a, b = prev.numerator, prev.denominator
    c, d = cur.numerator, cur.denominator
    if c == d:
        raise EndOfSequence(f"{cur} is the last term of F_{N}")
    if b * c - a * d != 1 or d > N or b > N:
        raise ValueError(f"{prev}, {cur} are not neighbours in F_{N}")
    t = (N + b) // d
    return Fraction(t * c - a, t * d - b)


def farey_chunks(N: int, size: int = CHUNK) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(nu0, hs, ks)`` blocks of F_N in order; hs[i]/ks[i] is r_{nu0+i}.

    Only the recurrence state and one block are held at a time.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    state = (0, 1, 1, N)
    nu0 = 1
    done = False
    while not done:
        hs, ks, *st, done = farey_chunk(N, *state, size)
        state = tuple(st)
        yield nu0, hs, ks
        nu0 += hs.size


def _walk(N: int) -> Iterator[tuple[int, int, int]]:
    for nu0, hs, ks in farey_chunks(N):
        yield from zip(range(nu0, nu0 + hs.size), hs.tolist(), ks.tolist())


def farey_stream(N: int) -> Iterator[tuple[int, Fraction]]:
    """Yield ``(nu, r_nu)`` for nu = 1..Phi(N) in increasing order of r_nu."""
    for nu, h, k in _walk(N):
        yield nu, Fraction(h, k)


def delta_stream(N: int, phi_N: CumulativeTotient) -> Iterator[DeltaStat]:
    """Yield the exact discrepancy delta_nu = r_nu - nu/Phi(N) for each nu."""
    if phi_N.N != N:
        raise ValueError(f"Phi was computed for N={phi_N.N}, not N={N}")
    if N > DELTA_CAP:
        raise OverflowError(f"N={N} exceeds the exact-arithmetic cap {DELTA_CAP}")
    phi = phi_N.value
    for nu, h, k in _walk(N):
        yield DeltaStat(nu, Fraction(h, k), Fraction(h * phi - nu * k, k * phi))
