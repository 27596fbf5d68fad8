"""Franel-Landau sums and distribution audits of the Farey series.

The exact sum is assembled per denominator: for r_nu = h/k,

    |delta_nu| = |h*Phi - nu*k| / (k*Phi),

so sum |delta_nu| = (1/Phi) * sum_k S_k / k with integer S_k accumulated by
the compiled walk. The reduced rational is only formed on request.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from farey_audit import _kernels
from farey_audit.sieves import phi_sum

#: Largest N accepted by the exact discrepancy routines.
FL_CAP = 1_000_000

_CARRY = 1 << 62


class ScanError(RuntimeError):
    def __init__(self, N: int, cause: BaseException):
        super().__init__(f"N={N}: {cause}")
        self.N = N
        self.cause = cause


def _check_n(N: int) -> int:
    N = int(N)
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if N > FL_CAP:
        raise OverflowError(f"N={N} exceeds the exact-arithmetic cap {FL_CAP}")
    return N


@dataclass(frozen=True)
class _WalkStats:
    N: int
    phi_N: int
    count: np.ndarray
    sums: list  # exact python ints S_k, index k
    max_abs: np.ndarray


def _walk_stats(N: int) -> _WalkStats:
    phi_n = phi_sum(N)
    length, count, lo, hi, max_abs = _kernels.denominator_stats(N, phi_n)
    if length != phi_n:
        raise RuntimeError(f"Farey walk produced {length} terms, expected Phi({N})={phi_n}")
    sums = [int(h) * _CARRY + int(l) for h, l in zip(hi.tolist(), lo.tolist())]
    return _WalkStats(N, phi_n, count, sums, max_abs)


@dataclass(frozen=True)
class FranelLandauRow:
    """One row of the scan: N, Phi(N), sum |delta_nu| and its normalisation.

    ``fl_sum`` is the float rendering; ``fl_sum_exact`` the reduced rational
    (available for rows produced by :func:`franel_landau_sum`).
    """

    N: int
    phi_N: int
    fl_sum: float
    normalized: float
    per_k_sums: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    @cached_property
    def fl_sum_exact(self) -> Fraction:
        if self.per_k_sums is None:
            raise ValueError("row carries no exact per-denominator data")
        den = math.lcm(*range(1, self.N + 1))
        num = sum(s * (den // k) for k, s in enumerate(self.per_k_sums) if s)
        return Fraction(num, den * self.phi_N)


def _normalize(N: int, value: float) -> float:
    if N < 2:
        return 0.0
    return value / (math.sqrt(N) * math.log(N))


def franel_landau_sum(N: int) -> FranelLandauRow:
    """Exact sum_{nu <= Phi(N)} |r_nu - nu/Phi(N)|."""
    stats = _walk_stats(_check_n(N))
    value = math.fsum(s / k for k, s in enumerate(stats.sums) if s) / stats.phi_N
    return FranelLandauRow(stats.N, stats.phi_N, value, _normalize(stats.N, value), tuple(stats.sums))


def franel_landau_scan(N_list: Sequence[int], threads: int | None = None) -> list[FranelLandauRow]:
    """Rows for every N, computed independently; output order follows ``N_list``."""
    N_list = [int(n) for n in N_list]
    if not N_list:
        raise ValueError("N_list is empty")
    if any(b < a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be ascending")

    def one(n: int) -> FranelLandauRow:
        try:
            return franel_landau_sum(n)
        except Exception as exc:
            raise ScanError(n, exc) from exc

    if threads is not None and threads <= 1:
        return [one(n) for n in N_list]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, N_list))


@dataclass(frozen=True)
class PowerFit:
    slope: float
    intercept: float
    r2: float


def exponent_fit(rows: Iterable[FranelLandauRow]) -> PowerFit:
    """Least-squares line through (ln N, ln fl_sum)."""
    usable = []
    for row in rows:
        if row.fl_sum > 0:
            usable.append(row)
        else:
            warnings.warn(f"dropping N={row.N}: fl_sum is zero", stacklevel=2)
    if len(usable) < 3:
        raise ValueError(f"exponent_fit needs at least 3 rows with fl_sum > 0, got {len(usable)}")
    x = np.log([r.N for r in usable])
    y = np.log([r.fl_sum for r in usable])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return PowerFit(float(slope), float(intercept), r2)


# --- k-interval statistics ---------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    """A maximal run of consecutive members of F_{Nk} whose indices share a cell.

    lambda2 counts fractions of other denominators strictly between the
    run's first and last member; lambda3 counts indices strictly between the
    run's last member and the next member of F_{Nk} (or through Phi(N) for
    the final run).
    """

    cell: int
    first_nu: int
    last_nu: int
    lambda1: int
    lambda2: int
    lambda3: int
    holds_width: bool
    holds_spacing: bool
    holds_product: bool


LAMBDA_BRACKETING = (
    "runs group consecutive h/k hits whose nu/Phi(N) share a cell (j/k,(j+1)/k]; "
    "lambda2 counts non-k fractions strictly between the first and last hit of the run; "
    "lambda3 counts indices strictly between the last hit and the next hit "
    "(final run: through Phi(N) inclusive)"
)


@dataclass(frozen=True)
class LambdaAudit:
    N: int
    k: int
    phi_N: int
    runs: list[RunRecord]
    bracketing: str = LAMBDA_BRACKETING

    @property
    def violations(self) -> dict[str, int]:
        return {
            "width": sum(not r.holds_width for r in self.runs),
            "spacing": sum(not r.holds_spacing for r in self.runs),
            "product": sum(not r.holds_product for r in self.runs),
        }

    @property
    def max_lambda1(self) -> int:
        return max((r.lambda1 for r in self.runs), default=0)


def lambda_audit(N: int, k: int) -> LambdaAudit:
    """Run-length audit of h/k hits against the equally spaced index cells.

    For each run the three inequalities

        k (l1 + l2 - 1) < Phi,   (l1 - 1) Phi < (l3 - 1) k,
        (l1 - 1)(l1 + l2 - 1) < l3 - 1

    are evaluated in exact integer form and flagged, never asserted.
    """
    N = _check_n(N)
    k = int(k)
    if k < 2:
        raise ValueError(f"lambda_audit needs k >= 2, got {k}")
    if k > N:
        raise ValueError(f"k={k} exceeds N={N}")
    nus, _, phi_n = _kernels.denominator_hits(N, k)
    nus = nus.tolist()
    cells = [(nu * k + phi_n - 1) // phi_n - 1 for nu in nus]
    runs = []
    start = 0
    for i in range(1, len(nus) + 1):
        if i < len(nus) and cells[i] == cells[start]:
            continue
        first, last = nus[start], nus[i - 1]
        l1 = i - start
        l2 = (last - first + 1) - l1
        l3 = (nus[i] - last - 1) if i < len(nus) else (phi_n - last)
        runs.append(RunRecord(
            cell=cells[start], first_nu=first, last_nu=last,
            lambda1=l1, lambda2=l2, lambda3=l3,
            holds_width=k * (l1 + l2 - 1) < phi_n,
            holds_spacing=(l1 - 1) * phi_n < (l3 - 1) * k,
            holds_product=(l1 - 1) * (l1 + l2 - 1) < l3 - 1,
        ))
        start = i
    return LambdaAudit(N, k, phi_n, runs)


@dataclass(frozen=True)
class KIntervalReport:
    """Occupancy of the cells (j/k, (j+1)/k], j = 0..k-1.

    ``count_total[j]`` counts r_nu in cell j, ``count_in_k[j]`` those with
    denominator k, ``index_count[j]`` the nu with nu/Phi(N) in cell j.
    """

    N: int
    k: int
    phi_N: int
    count_total: np.ndarray
    count_in_k: np.ndarray
    index_count: np.ndarray
    runs: LambdaAudit | None = None

    def __post_init__(self):
        if int(self.count_total.sum()) != self.phi_N or int(self.index_count.sum()) != self.phi_N:
            raise RuntimeError(f"occupancy not conserved for N={self.N}, k={self.k}")
        if (self.count_other < 0).any():
            raise RuntimeError(f"negative off-denominator count for N={self.N}, k={self.k}")
        lo, hi = self.phi_N // self.k, -(-self.phi_N // self.k)
        if ((self.index_count != lo) & (self.index_count != hi)).any():
            raise RuntimeError(f"index cells not two-valued for N={self.N}, k={self.k}")

    @property
    def count_other(self) -> np.ndarray:
        return self.count_total - self.count_in_k

    @property
    def mean_other(self) -> float:
        """Empirical mean of off-denominator fractions per cell."""
        return float(self.count_other.mean())


def k_interval_occupancy(N: int, k: int, with_runs: bool = True) -> KIntervalReport:
    N = _check_n(N)
    k = int(k)
    if k < 1 or k > N:
        raise ValueError(f"k must satisfy 1 <= k <= N={N}, got {k}")
    phi_n = phi_sum(N)
    total, in_k, index = _kernels.occupancy_counts(N, k, phi_n)
    runs = lambda_audit(N, k) if with_runs and k >= 2 else None
    return KIntervalReport(N, k, phi_n, total, in_k, index, runs)


def k_interval_sweep(N: int, ks: Iterable[int] | None = None) -> Iterator[KIntervalReport]:
    """Occupancy reports for many k at one N (default every k <= N).

    F_N is materialised once and re-read for each k, which is much cheaper
    than re-running the recurrence when k ranges over all of 1..N.
    """
    N = _check_n(N)
    phi_n = phi_sum(N)
    hs, ds = _kernels.farey_arrays(N, phi_n)
    for k in (range(1, N + 1) if ks is None else ks):
        k = int(k)
        if k < 1 or k > N:
            raise ValueError(f"k must satisfy 1 <= k <= N={N}, got {k}")
        total, in_k, index = _kernels.occupancy_from_arrays(hs, ds, k, phi_n)
        yield KIntervalReport(N, k, phi_n, total, in_k, index)


# --- deviation by denominator -----------------------------------------------


@dataclass(frozen=True)
class DenominatorDeviation:
    k: int
    count: int
    max_abs_delta: float
    mean_abs_delta: float
    scaled: float  # max_abs_delta * Phi(N)


@dataclass(frozen=True)
class EnvelopeFit:
    """Comparison of ``scaled`` with ``c * shape(k)`` over one range of k.

    ``envelope_c`` is the smallest c with scaled <= c*shape for every k in
    range; ``ls_c`` the least-squares c through the origin.
    """

    regime: str
    n_records: int
    envelope_c: float
    ls_c: float


@dataclass(frozen=True)
class DeviationReport:
    N: int
    phi_N: int
    records: list[DenominatorDeviation]
    small_k: EnvelopeFit  # k <= N^(3/4), shape N^(3/2)/k
    large_k: EnvelopeFit  # k >  N^(3/4), shape k^2


def _fit_envelope(regime: str, scaled: np.ndarray, shape: np.ndarray) -> EnvelopeFit:
    if scaled.size == 0:
        return EnvelopeFit(regime, 0, math.nan, math.nan)
    return EnvelopeFit(
        regime,
        int(scaled.size),
        float(np.max(scaled / shape)),
        float(np.dot(scaled, shape) / np.dot(shape, shape)),
    )


def deviation_by_denominator(N: int) -> DeviationReport:
    N = _check_n(N)
    if N < 2:
        raise ValueError(f"deviation_by_denominator needs N >= 2, got {N}")
    stats = _walk_stats(N)
    phi_n = stats.phi_N
    records = []
    for k in range(1, N + 1):
        cnt = int(stats.count[k])
        if cnt == 0:
            continue
        scale = k * phi_n
        records.append(DenominatorDeviation(
            k=k,
            count=cnt,
            max_abs_delta=int(stats.max_abs[k]) / scale,
            mean_abs_delta=float(Fraction(stats.sums[k], cnt * scale)),
            scaled=int(stats.max_abs[k]) / k,
        ))
    ks = np.array([r.k for r in records], dtype=np.int64)
    scaled = np.array([r.scaled for r in records])
    small = np.array([k**4 <= N**3 for k in ks.tolist()], dtype=bool)
    kf = ks.astype(float)
    return DeviationReport(
        N,
        phi_n,
        records,
        _fit_envelope("k<=N^(3/4)", scaled[small], N**1.5 / kf[small]),
        _fit_envelope("k>N^(3/4)", scaled[~small], kf[~small] ** 2),
    )
