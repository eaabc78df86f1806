"""Centered finite-difference stencils of order 2p and their Fourier symbols.

On a periodic grid ``x_i = i dx`` with ``N = 2**n`` points the first-derivative
operator is ``(D v)_i = sum_j alpha_j (v_{i+j} - v_{i-j}) / (2 j dx)`` and the
second-derivative operator is ``sum_j alpha_j (v_{i+j} - 2 v_i + v_{i-j}) / (j dx)**2``.
On the Fourier mode ``e_k(x) = exp(i omega k x)`` they act as ``i lambda_k`` and
``-mu_k`` respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DENSE_LIMIT = 1 << 14


@dataclass(frozen=True)
class StencilParams:
    p: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"half-order p must be a positive integer, got {self.p}")

    @property
    def order(self) -> int:
        return 2 * self.p


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [0, d) with 2**n points."""

    d: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid needs n >= 1")
        if not self.d > 0:
            raise ValueError("domain length must be positive")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def dx(self) -> float:
        return self.d / self.N

    @property
    def omega(self) -> float:
        return 2 * math.pi / self.d

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.N) * self.dx


def _check_p(p: int) -> int:
    StencilParams(p)
    return int(p)


def alpha_coefficients(p: int, exact: bool = False):
    """alpha_1..alpha_p via the product 2 prod_s (1 - j/(p+s)) with sign (-1)^{j+1}."""
    p = _check_p(p)
    out = []
    for j in range(1, p + 1):
        a = Fraction(2)
        for s in range(1, j + 1):
            a *= 1 - Fraction(j, p + s)
        out.append(a if j % 2 else -a)
    return out if exact else np.array([float(a) for a in out])


def cp_constant(p: int, exact: bool = False):
    """c_p = 1 / sum_j |alpha_j| / j, the LCU normalization."""
    inv = sum(abs(a) / j for j, a in enumerate(alpha_coefficients(p, exact=True), start=1))
    c = 1 / inv
    return c if exact else float(c)


def _symbol_terms(p: int, grid: GridSpec, k):
    alpha = alpha_coefficients(p)
    j = np.arange(1, p + 1)
    k = np.asarray(k, dtype=float)
    # reduce k mod N so huge inputs keep full precision
    kk = np.mod(k, grid.N)
    h = np.multiply.outer(grid.omega * kk * grid.dx, j)
    return alpha, j, h


def lambda_k(p: int, grid: GridSpec, k):
    """sum_j alpha_j sin(omega k j dx) / (j dx); scalar or array in k."""
    alpha, j, h = _symbol_terms(p, grid, k)
    val = (np.sin(h) / (j * grid.dx)) @ alpha
    return float(val) if np.ndim(val) == 0 else val


def mu_k(p: int, grid: GridSpec, k):
    """sum_j alpha_j (2 - 2 cos(omega k j dx)) / (j dx)^2."""
    alpha, j, h = _symbol_terms(p, grid, k)
    # 2 - 2 cos h = 4 sin^2(h/2), avoids cancellation at small h
    val = (4 * np.sin(h / 2) ** 2 / (j * grid.dx) ** 2) @ alpha
    return float(val) if np.ndim(val) == 0 else val


def symbols(p: int, grid: GridSpec):
    """(lambda_k, mu_k) for k = 0..N-1."""
    k = np.arange(grid.N)
    return lambda_k(p, grid, k), mu_k(p, grid, k)


def _shift(N: int, j: int) -> np.ndarray:
    """S_j with (S_j v)_i = v_{i+j}."""
    return np.roll(np.eye(N), j, axis=1)


def dense_operator(p: int, grid: GridSpec, which: str = "D2p") -> np.ndarray:
    """Dense circulant matrix of D2p, D2p_squared or D2p_second."""
    N = grid.N
    if N > DENSE_LIMIT:
        raise ValueError(f"dense operator limited to N <= {DENSE_LIMIT}")
    alpha = alpha_coefficients(p)
    dx = grid.dx
    if which in ("D2p", "D2p_squared"):
        D = np.zeros((N, N))
        for j, a in enumerate(alpha, start=1):
            D += a / (2 * j * dx) * (_shift(N, j) - _shift(N, -j))
        return D if which == "D2p" else D @ D
    if which == "D2p_second":
        D = np.zeros((N, N))
        for j, a in enumerate(alpha, start=1):
            D += a / (j * dx) ** 2 * (_shift(N, j) - 2 * np.eye(N) + _shift(N, -j))
        return D
    raise ValueError(f"unknown operator {which!r}")


def cosine_identity_rhs(p: int, h):
    """1 - 4^p / C(2p, p) sin(h/2)^{2p}, the closed form of sum_j alpha_j cos(j h)."""
    return 1 - 4.0 ** p / math.comb(2 * p, p) * np.sin(np.asarray(h) / 2) ** (2 * p)


def accuracy_constants(p: int) -> tuple[float, float, float]:
    """(C_p, C'_p, C''_p) = ((p!)^2/(2p+1)!, 2(p!)^2/(2p+2)!, 2(p!)^2/(2p+1)!)."""
    _check_p(p)
    f2 = Fraction(math.factorial(p) ** 2)
    cp = f2 / math.factorial(2 * p + 1)
    return float(cp), float(2 * f2 / math.factorial(2 * p + 2)), float(2 * cp)
