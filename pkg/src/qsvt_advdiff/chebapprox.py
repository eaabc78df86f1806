"""Bessel functions, Jacobi-Anger truncations and degree planning for exp(-M1 x^2 + i M2 x).

Truncations (degree ``2R``, ``2R+1``, ``2R``)::

    C_R(x; M) = J_0(M) + 2 sum_{k=1}^{R} (-1)^k J_{2k}(M) T_{2k}(x)
    S_R(x; M) = 2 sum_{k=0}^{R} (-1)^k J_{2k+1}(M) T_{2k+1}(x)
    E_R(x; M) = e^{-M/2} I_0(M/2) + 2 sum_{n=1}^{R} (-1)^n e^{-M/2} I_n(M/2) T_{2n}(x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import brentq

MAX_ORDER = 4000
MAX_ARG = 2000.0
_BIG = 1e250
_SERIES_X = 1e-3


# --------------------------------------------------------------------------
# Bessel functions by downward recurrence


def _check_bessel(nmax: int, x: float):
    if not 0 <= nmax <= MAX_ORDER:
        raise ValueError(f"Bessel order must lie in [0, {MAX_ORDER}]")
    if not (0.0 <= x <= MAX_ARG) or not math.isfinite(x):
        raise ValueError(f"Bessel argument must lie in [0, {MAX_ARG}]")


def _series(nmax: int, x: float, sign: int) -> np.ndarray:
    """Power series sum_k sign^k (x/2)^{2k+n} / (k! (n+k)!) for small x."""
    out = np.zeros(nmax + 1)
    h = x / 2
    lh = math.log(h)
    for n in range(nmax + 1):
        lead = n * lh - math.lgamma(n + 1)
        if lead < -745:
            break
        term = math.exp(lead)
        total = term
        for k in range(1, 30):
            term *= sign * h * h / (k * (n + k))
            total += term
            if abs(term) < 1e-17 * abs(total):
                break
        out[n] = total
    return out


def bessel_j_all(nmax: int, x: float) -> np.ndarray:
    """J_0(x) .. J_nmax(x) by Miller's algorithm normalized with J_0 + 2 sum J_2k = 1."""
    _check_bessel(nmax, x)
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x < _SERIES_X:
        return _series(nmax, x, -1)
    top = max(nmax, int(x)) + 30 + int(math.sqrt(60.0 * max(nmax, x, 1.0)))
    top += top % 2
    vals = np.zeros(top + 2)
    vals[top] = 1e-300
    norm = 0.0
    for k in range(top, 0, -1):
        v = 2.0 * k / x * vals[k] - vals[k + 1]
        vals[k - 1] = v
        if abs(v) > _BIG:
            vals[k - 1:] /= _BIG
            norm /= _BIG
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * vals[k - 1]
    norm += vals[0]
    return vals[: nmax + 1] / norm


def bessel_ie_all(nmax: int, x: float) -> np.ndarray:
    """Scaled e^{-x} I_0(x) .. e^{-x} I_nmax(x), normalized with I_0 + 2 sum I_k = e^x."""
    _check_bessel(nmax, x)
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x < _SERIES_X:
        return _series(nmax, x, 1) * math.exp(-x)
    top = max(nmax, int(math.sqrt(120.0 * x))) + 40
    vals = np.zeros(top + 2)
    vals[top] = 1e-300
    norm = 0.0
    for k in range(top, 0, -1):
        v = 2.0 * k / x * vals[k] + vals[k + 1]
        vals[k - 1] = v
        if v > _BIG:
            vals[k - 1:] /= _BIG
            norm /= _BIG
        if k - 1 > 0:
            norm += 2.0 * vals[k - 1]
    norm += vals[0]
    return vals[: nmax + 1] / norm


def bessel_j(n: int, x: float) -> float:
    return float(bessel_j_all(n, x)[n])


def bessel_i(n: int, x: float, scaled: bool = False) -> float:
    """I_n(x); ``scaled=True`` returns e^{-x} I_n(x)."""
    v = float(bessel_ie_all(n, x)[n])
    if scaled:
        return v
    with np.errstate(over="ignore"):
        return float(v * np.exp(x))


# --------------------------------------------------------------------------
# Chebyshev polynomials with parity


@dataclass(frozen=True)
class ChebPoly:
    """Real Chebyshev series sum_k coeffs[k] T_k with a parity tag."""

    coeffs: np.ndarray
    parity: str = "none"

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite Chebyshev coefficient")
        if self.parity not in ("even", "odd", "none"):
            raise ValueError(f"bad parity {self.parity!r}")
        if self.parity == "even":
            c[1::2] = 0.0
        elif self.parity == "odd":
            c[0::2] = 0.0
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x):
        return C.chebval(x, self.coeffs)

    def scaled(self, s: float) -> "ChebPoly":
        return ChebPoly(self.coeffs * s, self.parity)

    def trimmed(self) -> "ChebPoly":
        return ChebPoly(self.coeffs[: self.degree + 1], self.parity)

    def __mul__(self, other: "ChebPoly") -> "ChebPoly":
        par = "none"
        if "none" not in (self.parity, other.parity):
            par = "even" if self.parity == other.parity else "odd"
        return ChebPoly(C.chebmul(self.coeffs, other.coeffs), par)

    def sup_norm(self, samples: int = 4001) -> float:
        x = np.cos(np.pi * (np.arange(samples) + 0.5) / samples)
        return float(np.max(np.abs(self(np.concatenate([x, [-1.0, 0.0, 1.0]])))))


def chebyshev_nodes(count: int) -> np.ndarray:
    return np.cos(np.pi * (np.arange(count) + 0.5) / count)


def cos_trunc(M: float, R: int) -> ChebPoly:
    j = bessel_j_all(2 * R, M) if R or M else np.ones(1)
    c = np.zeros(2 * R + 1)
    c[0] = j[0]
    for k in range(1, R + 1):
        c[2 * k] = 2 * (-1) ** k * j[2 * k]
    return ChebPoly(c, "even")


def sin_trunc(M: float, R: int) -> ChebPoly:
    j = bessel_j_all(2 * R + 1, M)
    c = np.zeros(2 * R + 2)
    for k in range(R + 1):
        c[2 * k + 1] = 2 * (-1) ** k * j[2 * k + 1]
    return ChebPoly(c, "odd")


def gauss_trunc(M: float, R: int) -> ChebPoly:
    ie = bessel_ie_all(R, M / 2)
    c = np.zeros(2 * R + 1)
    c[0] = ie[0]
    for k in range(1, R + 1):
        c[2 * k] = 2 * (-1) ** k * ie[k]
    return ChebPoly(c, "even")


# --------------------------------------------------------------------------
# degree planning


def solve_r(M: float, eps: float) -> float:
    """Root r > M of (M/r)^r = eps, i.e. r ln(r/M) = ln(1/eps)."""
    if not M > 0 or not 0 < eps < 1:
        raise ValueError("solve_r needs M > 0 and 0 < eps < 1")
    L = math.log(1 / eps)

    def g(r):
        return r * math.log(r / M) - L

    hi = 2 * M
    while g(hi) <= 0:
        hi *= 2
    r = brentq(g, M, hi, xtol=1e-14 * M, maxiter=500)
    for _ in range(3):
        r -= g(r) / (math.log(r / M) + 1)
    return r


@dataclass(frozen=True)
class DegreePlan:
    R1: int
    R2: int
    eps_budget: float
    M1: float = 0.0
    M2: float = 0.0

    def __post_init__(self):
        if self.R1 < 0 or self.R2 < 0:
            raise ValueError("truncation indices must be nonnegative")

    @property
    def even_degree(self) -> int:
        return 2 * (self.R1 + self.R2)

    @property
    def odd_degree(self) -> int:
        return self.even_degree + 1 if self.M2 > 0 else 0

    @property
    def total_degree(self) -> int:
        return self.odd_degree if self.M2 > 0 else self.even_degree


def plan_degrees(M1: float, M2: float, eps_uniform: float) -> DegreePlan:
    """R1 = floor r(e M1/4, 5 eps/12), R2 = floor r(e M2/2, 5 eps/8)/2; zero for M = 0."""
    if M1 < 0 or M2 < 0:
        raise ValueError("M1 and M2 must be nonnegative")
    if not 0 < eps_uniform < 1:
        raise ValueError("eps_uniform must lie in (0, 1)")
    R1 = int(math.floor(solve_r(math.e * M1 / 4, 5 * eps_uniform / 12))) if M1 > 0 else 0
    R2 = int(math.floor(0.5 * solve_r(math.e * M2 / 2, 5 * eps_uniform / 8))) if M2 > 0 else 0
    return DegreePlan(R1, R2, eps_uniform, float(M1), float(M2))


def target_function(x, M1: float, M2: float):
    return np.exp(-M1 * np.asarray(x) ** 2 + 1j * M2 * np.asarray(x))


def build_targets(M1: float, M2: float, eps_uniform: float, plan: DegreePlan | None = None):
    """(E_R1 C_R2, E_R1 S_R2) scaled by 1/(1+eps) so both stay below 1 in magnitude."""
    plan = plan_degrees(M1, M2, eps_uniform) if plan is None else plan
    safety = 1.0 / (1.0 + eps_uniform)
    gauss = gauss_trunc(M1, plan.R1) if M1 > 0 else ChebPoly([1.0], "even")
    if M2 > 0:
        q_even = gauss * cos_trunc(M2, plan.R2)
        q_odd = gauss * sin_trunc(M2, plan.R2)
    else:
        q_even = gauss
        q_odd = ChebPoly([0.0, 0.0], "odd")
    return q_even.scaled(safety).trimmed(), q_odd.scaled(safety), safety
