"""Compiled inner loops.

Everything here is plain integer or float arithmetic on numpy arrays so that
numba can compile it with ``nogil=True``; the public modules wrap these with
validation and dataclasses. All Farey kernels walk the sequence with the
neighbour recurrence starting from the virtual seed 0/1, 1/N.
"""

import numba as nb
import numpy as np

# Per-denominator |h*Phi - nu*k| accumulators carry into a high word at 2**62,
# giving an exact 126-bit sum.
_CARRY = np.int64(1) << np.int64(62)


@nb.njit(nogil=True, cache=True)
def linear_sieve(n_max):
    phi = np.zeros(n_max + 1, np.int64)
    mu = np.zeros(n_max + 1, np.int8)
    primes = np.empty(max(16, n_max // 2 + 1), np.int64)
    n_primes = 0
    if n_max >= 1:
        phi[1] = 1
        mu[1] = 1
    for i in range(2, n_max + 1):
        if phi[i] == 0:
            phi[i] = i - 1
            mu[i] = -1
            primes[n_primes] = i
            n_primes += 1
        for j in range(n_primes):
            p = primes[j]
            m = i * p
            if m > n_max:
                break
            if i % p == 0:
                phi[m] = phi[i] * p
                mu[m] = 0
                break
            phi[m] = phi[i] * (p - 1)
            mu[m] = -mu[i]
    return phi, mu, primes[:n_primes].copy()


@nb.njit(nogil=True, cache=True)
def neumaier_reciprocal_sum(x):
    total = 0.0
    comp = 0.0
    for n in range(1, x + 1):
        v = 1.0 / n
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


@nb.njit(nogil=True, cache=True)
def denominator_stats(n, phi_n):
    """Walk F_n once and collect per-denominator |h*Phi - nu*k| statistics.

    Returns (length, count, sum_lo, sum_hi, max_abs) where the arrays are
    indexed by denominator k and sum = sum_hi * 2**62 + sum_lo exactly.
    """
    count = np.zeros(n + 1, np.int64)
    sum_lo = np.zeros(n + 1, np.int64)
    sum_hi = np.zeros(n + 1, np.int64)
    max_abs = np.zeros(n + 1, np.int64)
    a, b, c, d = 0, 1, 1, n
    nu = 0
    while True:
        nu += 1
        t = c * phi_n - nu * d
        if t < 0:
            t = -t
        count[d] += 1
        sum_lo[d] += t
        if sum_lo[d] >= _CARRY:
            sum_lo[d] -= _CARRY
            sum_hi[d] += 1
        if t > max_abs[d]:
            max_abs[d] = t
        if c == d:
            break
        m = (n + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return nu, count, sum_lo, sum_hi, max_abs


@nb.njit(nogil=True, cache=True)
def occupancy_counts(n, k, phi_n):
    """Counts over the half-open cells (j/k, (j+1)/k], j = 0..k-1."""
    total = np.zeros(k, np.int64)
    in_k = np.zeros(k, np.int64)
    index = np.zeros(k, np.int64)
    a, b, c, d = 0, 1, 1, n
    nu = 0
    jr = 0  # cell of r_nu, nondecreasing
    ji = 0  # cell of nu/Phi, nondecreasing
    while True:
        nu += 1
        # r = c/d lies in cell jr iff jr/k < c/d <= (jr+1)/k
        while c * k > (jr + 1) * d:
            jr += 1
        while nu * k > (ji + 1) * phi_n:
            ji += 1
        total[jr] += 1
        if d == k:
            in_k[jr] += 1
        index[ji] += 1
        if c == d:
            break
        m = (n + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return total, in_k, index


@nb.njit(nogil=True, cache=True)
def denominator_hits(n, k):
    """Indices nu (1-based) and numerators h of every h/k in F_n, in order."""
    nus = np.empty(k, np.int64)
    hs = np.empty(k, np.int64)
    m_hits = 0
    a, b, c, d = 0, 1, 1, n
    nu = 0
    while True:
        nu += 1
        if d == k:
            nus[m_hits] = nu
            hs[m_hits] = c
            m_hits += 1
        if c == d:
            break
        m = (n + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return nus[:m_hits].copy(), hs[:m_hits].copy(), nu


@nb.njit(nogil=True, cache=True)
def farey_arrays(n, phi_n):
    hs = np.empty(phi_n, np.int64)
    ds = np.empty(phi_n, np.int64)
    a, b, c, d = 0, 1, 1, n
    i = 0
    while True:
        hs[i] = c
        ds[i] = d
        i += 1
        if c == d:
            break
        m = (n + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return hs, ds


@nb.njit(nogil=True, cache=True)
def occupancy_from_arrays(hs, ds, k, phi_n):
    total = np.zeros(k, np.int64)
    in_k = np.zeros(k, np.int64)
    index = np.zeros(k, np.int64)
    jr = 0
    ji = 0
    for i in range(hs.size):
        c = hs[i]
        d = ds[i]
        nu = i + 1
        while c * k > (jr + 1) * d:
            jr += 1
        while nu * k > (ji + 1) * phi_n:
            ji += 1
        total[jr] += 1
        if d == k:
            in_k[jr] += 1
        index[ji] += 1
    return total, in_k, index


@nb.njit(nogil=True, cache=True)
def farey_chunk(n, a, b, c, d, size):
    """Next ``size`` terms from state (a/b, c/d), c/d being the next to emit.

    Returns (hs, ds, a, b, c, d, done); on done the arrays may be short.
    """
    hs = np.empty(size, np.int64)
    ds = np.empty(size, np.int64)
    i = 0
    done = False
    while i < size:
        hs[i] = c
        ds[i] = d
        i += 1
        if c == d:
            done = True
            break
        m = (n + b) // d
        a, b, c, d = c, d, m * c - a, m * d - b
    return hs[:i], ds[:i], a, b, c, d, done
