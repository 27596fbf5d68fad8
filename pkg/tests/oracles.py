"""Brute-force reference implementations, deliberately naive."""

from fractions import Fraction
from math import gcd


def phi_count(n):
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def mu_trial(n):
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def farey_pairs(N):
    """Reduced (h, k) with 0 < h <= k <= N, sorted exactly by h * lcm(1..N) / k."""
    L = 1
    for k in range(2, N + 1):
        L = L * k // gcd(L, k)
    pairs = [(h, k) for k in range(1, N + 1) for h in range(1, k + 1) if gcd(h, k) == 1]
    return sorted(pairs, key=lambda p: p[0] * (L // p[1]))


def farey_sorted(N):
    return [Fraction(h, k) for h, k in farey_pairs(N)]


def franel_landau_exact(N):
    fr = farey_sorted(N)
    P = len(fr)
    return sum((abs(r - Fraction(nu, P)) for nu, r in enumerate(fr, start=1)), Fraction(0))


def franel_landau_table(N_max):
    """Exact sums for every N <= N_max from one sorted brute-force F_{N_max}.

    F_N is F_{N_max} filtered to denominators <= N; each sum is accumulated
    over the common denominator lcm(1..N) * Phi(N) with plain integers.
    """
    full = farey_sorted(N_max)
    out = {}
    for N in range(1, N_max + 1):
        fr = [(r.numerator, r.denominator) for r in full if r.denominator <= N]
        P = len(fr)
        L = 1
        for k in range(2, N + 1):
            L = L * k // gcd(L, k)
        num = sum(abs(h * P - nu * k) * (L // k) for nu, (h, k) in enumerate(fr, start=1))
        out[N] = Fraction(num, L * P)
    return out
