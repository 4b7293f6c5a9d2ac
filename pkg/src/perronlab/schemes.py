"""Analytic-weight calculus: coefficient streams, scheme families, the
normalization/positivity/decay checks, truncated evaluation f(T) and the
boundedness probes."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lattice import LatticeVector, NormTag, vector_norm
from .operators import OperatorMatrix, cesaro_mean, op_norm, spectral_radius

__all__ = [
    "Verdict",
    "CoeffStream",
    "SchemeKind",
    "SchemeFamily",
    "builtin_scheme",
    "check_ws1",
    "check_ws2",
    "check_ws3",
    "convolve",
    "apply_weight",
    "TailReport",
    "ProbeReport",
    "ws_bounded_probe",
    "weighted_scalar_sum",
    "monotone_orbit_report",
    "OrbitReport",
    "pole_order_at",
    "numerical_rank",
]


class Verdict(str, enum.Enum):
    PASS = "pass"
    PASS_ON_PREFIX = "pass-on-prefix"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CoeffStream:
    """Coefficient sequence a_k of an analytic weight.

    `coeff(k)` returns a_k; `tail_bound(K)`, when available, bounds the mass
    beyond index K (needed to certify normalization from a finite prefix).
    """

    coeff: Callable[[int], float]
    tail_bound: Callable[[int], float] | None = None
    description: str = ""

    def coeffs(self, K: int) -> np.ndarray:
        return np.array([self.coeff(k) for k in range(K + 1)])


class SchemeKind(str, enum.Enum):
    POWERS = "powers"
    ABEL_NET = "abel_net"
    ABEL_POWERS = "abel_powers"
    CESARO = "cesaro"
    EXPONENTIAL = "exponential"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SchemeFamily:
    """Indexed family of coefficient streams (a weighting scheme)."""

    index_set: tuple
    stream: Callable[[object], CoeffStream]
    kind: SchemeKind = SchemeKind.CUSTOM

    def streams(self) -> list[CoeffStream]:
        return [self.stream(j) for j in self.index_set]


def _powers_stream(j: int) -> CoeffStream:
    return CoeffStream(
        coeff=lambda k, j=j: 1.0 if k == j else 0.0,
        tail_bound=lambda K, j=j: 0.0 if K >= j else 1.0,
        description=f"monomial z^{j}",
    )


def _abel_stream(lam: float) -> CoeffStream:
    if lam <= 1.0:
        raise ValueError("Abel parameter must be > 1")
    return CoeffStream(
        coeff=lambda k, lam=lam: (lam - 1.0) / lam ** (k + 1),
        tail_bound=lambda K, lam=lam: lam ** (-(K + 1)),
        description=f"Abel weight, lambda={lam}",
    )


def _abel_powers_stream(lam: float, j: int) -> CoeffStream:
    if lam <= 1.0:
        raise ValueError("Abel parameter must be > 1")
    if j == 0:
        return _powers_stream(0)

    def coeff(k: int, lam=lam, j=j) -> float:
        # binomial(j+k-1, k) * (lam-1)^j / lam^(j+k), multiplicative recurrence
        c = ((lam - 1.0) / lam) ** j
        for i in range(1, k + 1):
            c *= (j + i - 1) / i / lam
        return c

    def tail_bound(K: int, lam=lam, j=j) -> float:
        # ratio a_{k+1}/a_k = (j+k)/(k+1)/lam; geometric tail once ratio < 1
        q = (j + K + 1) / (K + 2) / lam
        if q >= 1.0:
            return 1.0
        return coeff(K + 1) / (1.0 - q)

    return CoeffStream(coeff, tail_bound, f"Abel weight power, lambda={lam}, j={j}")


def _cesaro_stream(j: int) -> CoeffStream:
    if j < 1:
        raise ValueError("Cesaro index must be >= 1")
    return CoeffStream(
        coeff=lambda k, j=j: 1.0 / j if k < j else 0.0,
        tail_bound=lambda K, j=j: 0.0 if K >= j - 1 else (j - 1 - K) / j,
        description=f"Cesaro mean of order {j}",
    )


def _exponential_stream(t: float) -> CoeffStream:
    if t < 0.0:
        raise ValueError("exponential parameter must be >= 0")

    def coeff(k: int, t=t) -> float:
        return math.exp(-t + k * math.log(t) - math.lgamma(k + 1)) if t > 0 else (
            1.0 if k == 0 else 0.0
        )

    def tail_bound(K: int, t=t) -> float:
        if t == 0.0:
            return 0.0
        if t >= K + 2:
            return 1.0
        return coeff(K + 1) / (1.0 - t / (K + 2))

    return CoeffStream(coeff, tail_bound, f"Poisson weight, t={t}")


def builtin_scheme(kind: SchemeKind | str, params: dict | None = None) -> SchemeFamily:
    """The five built-in scheme families with their coefficient formulas."""
    kind = SchemeKind(kind)
    params = dict(params or {})
    if kind is SchemeKind.POWERS:
        count = int(params.get("count", 20))
        return SchemeFamily(tuple(range(count)), lambda j: _powers_stream(j), kind)
    if kind is SchemeKind.ABEL_NET:
        if "lambdas" in params:
            lams = tuple(float(l) for l in params["lambdas"])
        else:
            count = int(params.get("count", 20))
            lams = tuple(1.0 + 1.0 / j for j in range(1, count + 1))
        if any(l <= 1.0 for l in lams):
            raise ValueError("Abel net parameters must be > 1")
        return SchemeFamily(lams, lambda lam: _abel_stream(lam), kind)
    if kind is SchemeKind.ABEL_POWERS:
        lam = float(params.get("lam", 2.0))
        count = int(params.get("count", 20))
        return SchemeFamily(
            tuple(range(count)), lambda j, lam=lam: _abel_powers_stream(lam, j), kind
        )
    if kind is SchemeKind.CESARO:
        count = int(params.get("count", 20))
        return SchemeFamily(
            tuple(range(1, count + 1)), lambda j: _cesaro_stream(j), kind
        )
    if kind is SchemeKind.EXPONENTIAL:
        if "t" in params:
            ts = tuple(float(t) for t in params["t"])
        else:
            count = int(params.get("count", 20))
            ts = tuple(float(j) for j in range(1, count + 1))
        if any(t < 0 for t in ts):
            raise ValueError("exponential parameters must be >= 0")
        if list(ts) != sorted(ts):
            raise ValueError("exponential parameters must be nondecreasing")
        return SchemeFamily(ts, lambda t: _exponential_stream(t), kind)
    raise ValueError("custom schemes are constructed directly, not via builtin_scheme")


def check_ws1(s: CoeffStream, K: int = 200, tol: float = 1e-10) -> Verdict:
    """Partial sums plus tail bound must bracket 1."""
    if K < 0:
        raise ValueError("K must be >= 0")
    if s.tail_bound is None:
        return Verdict.INCONCLUSIVE
    total = float(s.coeffs(K).sum())
    if abs(total - 1.0) <= tol + s.tail_bound(K):
        return Verdict.PASS
    return Verdict.FAIL


def check_ws2(s: CoeffStream, K: int = 200, tol: float = 1e-10) -> Verdict:
    if K < 0:
        raise ValueError("K must be >= 0")
    return Verdict.PASS if float(s.coeffs(K).min()) >= -tol else Verdict.FAIL


def check_ws3(fam: SchemeFamily, k_max: int = 10, tol: float = 0.1) -> Verdict:
    """Columnwise decay over the finite index prefix: for each k the sequence
    j -> a_{j,k} must be non-increasing on the tail half and end below tol.
    A limit statement cannot be decided from a prefix, so a positive result
    is reported as pass-on-prefix."""
    if len(fam.index_set) < 3:
        raise ValueError("index prefix must have length >= 3")
    streams = fam.streams()
    verdict = Verdict.PASS_ON_PREFIX
    for k in range(k_max + 1):
        col = np.array([s.coeff(k) for s in streams])
        tail = col[len(col) // 2 :]
        nonincreasing = bool(np.all(np.diff(tail) <= 1e-12))
        if tail[-1] > tol and not nonincreasing:
            return Verdict.FAIL
        if tail[-1] > tol and nonincreasing and tail[0] - tail[-1] <= 1e-12:
            # constant above tolerance: certain failure of decay
            return Verdict.FAIL
        if tail[-1] > tol or not nonincreasing:
            verdict = Verdict.INCONCLUSIVE
    return verdict


def convolve(s: CoeffStream, t: CoeffStream) -> CoeffStream:
    """Cauchy product of coefficient streams (product of the weights)."""

    def coeff(k: int) -> float:
        return float(sum(s.coeff(i) * t.coeff(k - i) for i in range(k + 1)))

    tail = None
    if s.tail_bound is not None and t.tail_bound is not None:
        def tail(K: int) -> float:
            # mass of the product beyond K is at most the mass either factor
            # carries beyond K/2 (indices i + j > K force i > K/2 or j > K/2)
            h = K // 2
            return s.tail_bound(h) + t.tail_bound(h)

    return CoeffStream(coeff, tail, f"({s.description}) * ({t.description})")


@dataclass(frozen=True)
class TailReport:
    """Truncation diagnostics for a weighted operator sum."""

    K: int
    tail_mass: float | None
    max_power_norm: float
    tail_norm_proxy: float | None
    power_growth: bool


def apply_weight(T: OperatorMatrix, s: CoeffStream, K: int
                 ) -> tuple[OperatorMatrix, TailReport]:
    """Truncated weighted power sum  sum_{k<=K} a_k T^k.

    Requires spectral radius <= 1 (up to 1e-8); the calculus is only used on
    that normalization."""
    r = spectral_radius(T)
    # defective eigenvalues on the unit circle overshoot by ~eps^(1/m)
    if r > 1.0 + 1e-4:
        raise ValueError("spectral radius exceeds 1")
    coeffs = s.coeffs(K)
    acc = np.zeros((T.dim, T.dim), dtype=complex)
    cur = np.eye(T.dim, dtype=complex)
    norms = np.empty(K + 1)
    for k in range(K + 1):
        if k > 0:
            cur = T.entries @ cur
        norms[k] = op_norm(OperatorMatrix(cur, T.model))
        acc += coeffs[k] * cur
    max_norm = float(norms.max())
    growth = bool(norms[-1] > 2.0 * max(1.0, norms[: max(1, K // 2)].max()))
    mass = s.tail_bound(K) if s.tail_bound is not None else None
    proxy = mass * max_norm if mass is not None else None
    return OperatorMatrix(acc, T.model), TailReport(K, mass, max_norm, proxy, growth)


@dataclass(frozen=True)
class ProbeReport:
    """Finite-prefix evidence about boundedness of {f_j(T)}; never a proof."""

    indices: tuple
    norms: tuple[float, ...]
    max_norm: float
    growth_slope: float
    verdict: str  # bounded-evidence | growth-evidence | inconclusive


def _family_operator_norms(T: OperatorMatrix, fam: SchemeFamily, K: int,
                           budget: int) -> tuple[tuple, list[float]]:
    indices = fam.index_set[:budget]
    norms = []
    if fam.kind is SchemeKind.CESARO:
        # exact: finitely supported coefficients reproduce the Cesaro mean
        acc = np.eye(T.dim, dtype=complex)
        cur = np.eye(T.dim, dtype=complex)
        by_j = {}
        jmax = max(indices)
        for n in range(1, jmax + 1):
            if n > 1:
                cur = T.entries @ cur
                acc += cur
            by_j[n] = op_norm(OperatorMatrix(acc / n, T.model))
        norms = [by_j[j] for j in indices]
    else:
        for j in indices:
            fT, _ = apply_weight(T, fam.stream(j), K)
            norms.append(op_norm(fT))
    return indices, norms


def ws_bounded_probe(T: OperatorMatrix, fam: SchemeFamily, K: int = 200,
                     budget: int = 20) -> ProbeReport:
    """Evaluate ||f_j(T)|| along the family prefix and classify the trend.

    The verdict is evidence only.  Polynomial growth n^(m-1) keeps a steady
    log-log slope, while a bounded family approaching a large limit shows a
    decaying slope; so the probe compares the slope over the late window
    against the earlier one and calls growth only when a slope >= 0.5
    persists."""
    r = spectral_radius(T)
    # defective eigenvalues on the unit circle overshoot by ~eps^(1/m)
    if r > 1.0 + 1e-4:
        raise ValueError("spectral radius exceeds 1")
    indices, norms = _family_operator_norms(T, fam, K, budget)
    arr = np.array(norms)
    n = len(arr)
    if n < 6:
        return ProbeReport(tuple(indices), tuple(norms), float(arr.max()), 0.0,
                           "inconclusive")

    def _slope(lo: int, hi: int) -> float:
        js = np.arange(1, n + 1)[lo:hi]
        vals = np.maximum(arr[lo:hi], 1e-300)
        return float(np.polyfit(np.log(js), np.log(vals), 1)[0])

    tail_start = max(2, n // 5)
    mid = max(tail_start + 2, n // 2)
    slope = _slope(tail_start, n)
    early = _slope(tail_start, mid)
    late = _slope(mid, n)
    growing = late >= 0.5 and late >= 0.75 * early
    verdict = "growth-evidence" if growing else "bounded-evidence"
    return ProbeReport(tuple(indices), tuple(norms), float(arr.max()), slope, verdict)


def weighted_scalar_sum(fam: SchemeFamily, r_seq: Sequence[float], K: int
                        ) -> list[float]:
    """Per-index sums sum_{k<=K} a_{j,k} r_k for a nondecreasing r_k >= 0."""
    rs = np.asarray(r_seq, dtype=float)
    if rs.shape[0] < K + 1:
        raise ValueError("r_seq must cover indices 0..K")
    if np.any(np.diff(rs[: K + 1]) < 0):
        raise ValueError("r_seq must be nondecreasing")
    if rs.min() < 0:
        raise ValueError("r_seq must be nonnegative")
    out = []
    for j in fam.index_set:
        a = fam.stream(j).coeffs(K)
        out.append(float(a @ rs[: K + 1]))
    return out


@dataclass(frozen=True)
class OrbitReport:
    norms: tuple[float, ...]
    monotone: bool
    bounded_flag: bool


def monotone_orbit_report(T: OperatorMatrix, x: LatticeVector, N: int,
                          tol: float = 1e-10) -> OrbitReport:
    """Norms of the orbit T^n x for a nonnegative x with Tx >= x."""
    if x.model != T.model:
        raise ValueError("model mismatch")
    if np.max(np.abs(T.entries.imag)) > tol or T.entries.real.min() < -tol:
        raise ValueError("T must be positive")
    v = x.entries.real
    if np.max(np.abs(x.entries.imag)) > tol or v.min() < -tol:
        raise ValueError("x must be nonnegative")
    if np.min(T.entries.real @ v - v) < -tol:
        raise ValueError("orbit not monotone")
    norms = []
    cur = v.astype(float)
    monotone = True
    for _ in range(N + 1):
        norms.append(vector_norm(cur, T.model.norm_tag))
        nxt = T.entries.real @ cur
        if np.min(nxt - cur) < -tol:
            monotone = False
        cur = nxt
    arr = np.array(norms)
    # bounded flag is heuristic: the observed tail stops growing
    bounded = bool(arr[-1] <= arr[len(arr) // 2] * 1.05 + tol)
    return OrbitReport(tuple(float(t) for t in norms), monotone, bounded)


def numerical_rank(A: np.ndarray, rtol_factor: float = 1e3) -> int:
    """Dense numerical rank: singular values below n*eps*smax*rtol_factor
    count as zero."""
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    thresh = max(A.shape) * np.finfo(float).eps * s[0] * rtol_factor
    return int((s > thresh).sum())


def pole_order_at(T: OperatorMatrix, lam0: complex, tol: float = 1e-7) -> int:
    """Resolvent pole order at an eigenvalue: smallest m with
    rank((lam0 - T)^m) = rank((lam0 - T)^(m+1)) (largest Jordan block)."""
    eigs = np.linalg.eigvals(T.entries)
    if np.min(np.abs(eigs - lam0)) > tol:
        raise ValueError("lambda not in spectrum")
    A = lam0 * np.eye(T.dim) - T.entries
    prev = numerical_rank(np.eye(T.dim))
    P = np.eye(T.dim, dtype=complex)
    for m in range(1, T.dim + 1):
        P = P @ A
        rank = numerical_rank(P)
        if rank == prev:
            return m - 1 if m > 1 else 1
        prev = rank
    return T.dim
