"""Classical oracles: exact and semidiscrete solutions, norms, and error bounds.

Fourier convention: ``u(x) = sum_k a_k e^{i omega k x}`` on ``[0, d)`` with
``omega = 2 pi / d``.  Norms are the plain L^2 norm on ``[0, d]``, so
``||u||^2 = d sum_k |a_k|^2`` and ``||u^{(m)}||^2 = d sum_k |omega k|^{2m} |a_k|^2``.
Two-dimensional samples are arrays indexed ``[iy, ix]``; flattened in C order
they follow the state index ``ix + N iy``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .stencil import GridSpec, accuracy_constants, cp_constant, lambda_k, mu_k
from .stateprep import ancilla_count

FINE_POINTS = 1 << 12
RECT_MODES = 1 << 16
KINDS_1D = ("gaussian", "sine_sum", "wavepacket", "rectangle", "literal_samples", "literal_fourier")
KINDS_2D = ("gaussian2d", "mixed_wave", "literal_samples_2d")

_DEFAULTS = {
    "gaussian": {"a": 10.0, "x0": 5 / 3},
    "sine_sum": {"offset": 1.0, "terms": [[0.5, 3 * math.pi / 2], [0.5, 11 * math.pi / 2]]},
    "wavepacket": {"offset": 0.6, "amp": 0.5, "a": 5.0, "x0": 2.0, "freq": 17 * math.pi / 2},
    "rectangle": {"lo": 0.0, "hi": 2.0},
    "gaussian2d": {"a": 7.0, "x0": 5 / 3, "y0": 2.0},
    "mixed_wave": {"a": 7.0, "x0": 2.0, "freq": 5 * math.pi / 2},
}


@dataclass
class InitialCondition:
    """A catalog or literal initial condition on the periodic domain [0, d)."""

    kind: str
    params: dict = field(default_factory=dict)
    d: float = 4.0
    N0: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS_1D + KINDS_2D:
            raise ValueError(f"unknown initial condition {self.kind!r}")
        merged = dict(_DEFAULTS.get(self.kind, {}))
        merged.update(self.params or {})
        self.params = merged
        if self.kind.startswith("literal"):
            key = "coeffs" if self.kind == "literal_fourier" else "values"
            if key not in self.params:
                raise ValueError(f"{self.kind} needs params[{key!r}]")
            arr = np.asarray(self.params[key], dtype=complex if key == "coeffs" else float)
            if self.kind == "literal_fourier" and arr.ndim == 2:
                arr = arr[:, 0] + 1j * arr[:, 1]
            self.params[key] = arr
            if self.N0 is None:
                self.N0 = arr.shape[0]
        if self.N0 is not None and (self.N0 < 2 or self.N0 % 2):
            raise ValueError("N0 must be an even integer >= 2")

    @property
    def dim(self) -> int:
        return 2 if self.kind in KINDS_2D else 1

    @property
    def omega(self) -> float:
        return 2 * math.pi / self.d

    # ---- 1D evaluation -------------------------------------------------

    def __call__(self, x, y=None):
        if self.dim == 2:
            fx, fy = self.factors()
            if fx is None:
                raise ValueError("pointwise evaluation needs a separable condition")
            return np.multiply.outer(fy(y), fx(x))
        return self._eval1(np.asarray(x, dtype=float))

    def _eval1(self, x):
        p, d = self.params, self.d
        xm = np.mod(x, d)
        if self.kind == "gaussian":
            return np.exp(-p["a"] * (xm - p["x0"]) ** 2)
        if self.kind == "sine_sum":
            out = np.full_like(xm, p["offset"], dtype=float)
            for amp, freq in p["terms"]:
                out = out + amp * np.sin(freq * xm)
            return out
        if self.kind == "wavepacket":
            s = xm - p["x0"]
            return p["offset"] + p["amp"] * np.exp(-p["a"] * s * s) * np.cos(p["freq"] * s)
        if self.kind == "rectangle":
            # half-open so the grid samples equal a uniform load on the first half
            return ((xm >= p["lo"]) & (xm < p["hi"])).astype(float)
        coeffs = self.coefficients(self.N0 // 2)
        k = np.fft.fftfreq(coeffs.size, 1 / coeffs.size)
        return np.real(np.exp(1j * self.omega * np.multiply.outer(xm, k)) @ coeffs)

    def factors(self):
        """(f_x, f_y) one-dimensional factors of a separable 2D condition."""
        p = self.params
        if self.kind == "gaussian2d":
            return (InitialCondition("gaussian", {"a": p["a"], "x0": p["x0"]}, self.d),
                    InitialCondition("gaussian", {"a": p["a"], "x0": p["y0"]}, self.d))
        if self.kind == "mixed_wave":
            return (InitialCondition("gaussian", {"a": p["a"], "x0": p["x0"]}, self.d),
                    InitialCondition("sine_sum", {"offset": 1.0, "terms": [[1.0, p["freq"]]]}, self.d))
        return None, None

    def samples(self, grid: GridSpec) -> np.ndarray:
        """Grid values; shape (N,) in 1D and (N, N) indexed [iy, ix] in 2D."""
        if self.kind == "literal_samples_2d":
            vals = np.asarray(self.params["values"], dtype=float)
            if vals.shape != (grid.N, grid.N):
                return _resample_2d(vals, grid.N)
            return vals.copy()
        if self.kind == "literal_samples":
            vals = np.asarray(self.params["values"], dtype=float)
            if vals.size != grid.N:
                return np.real(_eval_coeffs_on_grid(self.coefficients(self.N0 // 2), grid.N))
            return vals.copy()
        if self.kind == "literal_fourier":
            return np.real(_eval_coeffs_on_grid(self.coefficients(self.N0 // 2), grid.N))
        return self(grid.x, grid.x) if self.dim == 2 else self(grid.x)

    def coefficients(self, K: int) -> np.ndarray:
        """a_k for k = -K..K-1 in FFT order (length 2K)."""
        if K < 1:
            raise ValueError("need K >= 1")
        if self.dim == 2:
            raise ValueError("use factors() for two-dimensional conditions")
        if self.kind == "rectangle":
            return _rectangle_coeffs(K, self.params["lo"], self.params["hi"], self.d)
        if self.kind == "literal_fourier":
            return _pad_coeffs(np.asarray(self.params["coeffs"], dtype=complex), K)
        if self.kind == "literal_samples":
            vals = np.asarray(self.params["values"], dtype=float)
            return _pad_coeffs(np.fft.fft(vals) / vals.size, K)
        x = np.arange(2 * K) * self.d / (2 * K)
        return np.fft.fft(self._eval1(x)) / (2 * K)

    def native_resolution(self, rel_tol: float = 1e-10, cap: int = 1 << 16) -> int:
        """Smallest even N0 whose discarded Fourier tail is below ``rel_tol``."""
        if self.N0 is not None:
            return self.N0
        if self.dim == 2:
            return max(f.native_resolution(rel_tol, cap) for f in self.factors())
        K = RECT_MODES if self.kind == "rectangle" else FINE_POINTS // 2
        a = np.abs(self.coefficients(K))
        k = np.abs(np.fft.fftfreq(2 * K, 1 / (2 * K)))
        top = a.max()
        N0 = 2
        while N0 < cap:
            if np.all(a[k >= N0 // 2] <= rel_tol * top):
                break
            N0 *= 2
        return N0


def _pad_coeffs(c: np.ndarray, K: int) -> np.ndarray:
    """Re-index FFT-ordered coefficients of length M onto length 2K."""
    M = c.size
    k = np.fft.fftfreq(M, 1 / M).astype(int)
    out = np.zeros(2 * K, dtype=complex)
    keep = (k >= -K) & (k < K)
    out[np.mod(k[keep], 2 * K)] = c[keep]
    return out


def _eval_coeffs_on_grid(c: np.ndarray, N: int) -> np.ndarray:
    """Values at x_i = i d / N of sum_k c_k e_k, with c in FFT order of any even length."""
    M = c.size
    k = np.fft.fftfreq(M, 1 / M).astype(int)
    folded = np.zeros(N, dtype=complex)
    np.add.at(folded, np.mod(k, N), c)
    return np.fft.ifft(folded) * N


def _resample_2d(vals: np.ndarray, N: int) -> np.ndarray:
    M = vals.shape[0]
    c = np.fft.fft2(vals) / (M * M)
    k = np.fft.fftfreq(M, 1 / M).astype(int)
    folded = np.zeros((N, N), dtype=complex)
    ky, kx = np.meshgrid(np.mod(k, N), np.mod(k, N), indexing="ij")
    np.add.at(folded, (ky, kx), c)
    return np.real(np.fft.ifft2(folded) * N * N)


def _rectangle_coeffs(K: int, lo: float, hi: float, d: float) -> np.ndarray:
    k = np.fft.fftfreq(2 * K, 1 / (2 * K))
    w = 2 * math.pi / d
    out = np.empty(2 * K, dtype=complex)
    nz = k != 0
    kk = k[nz]
    out[nz] = (np.exp(-1j * w * kk * lo) - np.exp(-1j * w * kk * hi)) / (1j * w * kk * d)
    out[~nz] = (hi - lo) / d
    return out


# --------------------------------------------------------------------------
# solutions


def _exact_1d(ic: InitialCondition, c: float, nu: float, t: float, N: int) -> np.ndarray:
    x = np.arange(N) * ic.d / N
    if t == 0:
        return ic.samples(GridSpec(ic.d, int(round(math.log2(N)))))
    if nu == 0 and not ic.kind.startswith("literal"):
        return ic(x - c * t)
    K = RECT_MODES if ic.kind == "rectangle" else max(FINE_POINTS, 2 * N) // 2
    if ic.kind.startswith("literal"):
        K = max(ic.N0 // 2, N // 2)
    a = ic.coefficients(K)
    k = np.fft.fftfreq(2 * K, 1 / (2 * K))
    wk = ic.omega * k
    a = a * np.exp(-nu * wk * wk * t - 1j * c * wk * t)
    return np.real(_eval_coeffs_on_grid(a, N))


def exact_solution(ic: InitialCondition, c, nu: float, d: float, t: float, n: int) -> np.ndarray:
    """Exact periodic solution on the 2**n grid (per axis in 2D)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if abs(d - ic.d) > 1e-12:
        ic = InitialCondition(ic.kind, ic.params, d, ic.N0)
    N = 1 << n
    if ic.dim == 1:
        return _exact_1d(ic, float(np.atleast_1d(c)[0]), nu, t, N)
    cx, cy = (float(v) for v in np.broadcast_to(np.asarray(c, dtype=float), (2,)))
    fx, fy = ic.factors()
    if fx is not None:
        return np.outer(_exact_1d(fy, cy, nu, t, N), _exact_1d(fx, cx, nu, t, N))
    vals = ic.samples(GridSpec(d, n))
    k = np.fft.fftfreq(N, 1 / N) * ic.omega
    gx = np.exp(-nu * k * k * t - 1j * cx * k * t)
    gy = np.exp(-nu * k * k * t - 1j * cy * k * t)
    return np.real(np.fft.ifft2(np.fft.fft2(vals) * np.outer(gy, gx)))


def semidiscrete_gain(c: float, nu: float, p: int, grid: GridSpec, t: float, variant: str = "Dsq"):
    """exp(-i c lambda_k t - nu m_k t) with m_k = lambda_k^2 (Dsq) or mu_k (D2), k = 0..N-1."""
    lam, mu = lambda_k(p, grid, np.arange(grid.N)), mu_k(p, grid, np.arange(grid.N))
    if variant == "Dsq":
        second = lam * lam
    elif variant == "D2":
        second = mu
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return np.exp(-1j * c * lam * t - nu * second * t)


def semidiscrete_solution(ic: InitialCondition, c, nu: float, p: int, grid: GridSpec, t: float,
                          variant: str = "Dsq") -> np.ndarray:
    """Exact-in-time solution of the space-discretized system started from grid samples."""
    u0 = ic.samples(grid)
    if ic.dim == 1:
        g = semidiscrete_gain(float(np.atleast_1d(c)[0]), nu, p, grid, t, variant)
        return np.real(np.fft.ifft(np.fft.fft(u0) * g))
    cx, cy = (float(v) for v in np.broadcast_to(np.asarray(c, dtype=float), (2,)))
    gx = semidiscrete_gain(cx, nu, p, grid, t, variant)
    gy = semidiscrete_gain(cy, nu, p, grid, t, variant)
    return np.real(np.fft.ifft2(np.fft.fft2(u0) * np.outer(gy, gx)))


def error_metric(a, b) -> float:
    """max_i |a_i - b_i|."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def l2_norm_grid(values, dx: float) -> float:
    """(dx)^{1/2} ||samples||, the L^2 norm of a band-limited function."""
    return math.sqrt(dx) * float(np.linalg.norm(np.ravel(values)))


# --------------------------------------------------------------------------
# theory


@dataclass(frozen=True)
class TheoryReport:
    B: float
    tau: float
    mu1: float
    l2_bound: float
    technical_ok: tuple[bool, bool]
    planned_n: int
    complexity_estimate: float

    def as_dict(self) -> dict:
        return {
            "B": self.B,
            "tau": self.tau,
            "mu1": self.mu1,
            "l2_bound": self.l2_bound,
            "technical_ok": list(self.technical_ok),
            "planned_n": self.planned_n,
            "complexity_estimate": self.complexity_estimate,
        }


def sobolev_seminorm(ic: InitialCondition, m: int, K: int | None = None) -> float:
    """||u_0^{(m)}||_{L^2} = (d sum_k |omega k|^{2m} |a_k|^2)^{1/2}."""
    N0 = ic.native_resolution()
    K = N0 // 2 if K is None else K
    a = ic.coefficients(K)
    wk = ic.omega * np.fft.fftfreq(2 * K, 1 / (2 * K))
    return math.sqrt(ic.d * float(np.sum(np.abs(wk) ** (2 * m) * np.abs(a) ** 2)))


def bound_constant(ic: InitialCondition, c: float, nu: float, p: int, variant: str = "D2",
                   K: int | None = None) -> float:
    """B = [c^2 C_p^2 ||u^{(2p+1)}||^2 + nu^2 C'^2 ||u^{(2p+2)}||^2]^{1/2}."""
    cp1, cp2, cp3 = accuracy_constants(p)
    c2 = cp2 if variant == "D2" else cp3
    s1 = sobolev_seminorm(ic, 2 * p + 1, K)
    s2 = sobolev_seminorm(ic, 2 * p + 2, K)
    return math.sqrt((c * cp1 * s1) ** 2 + (nu * c2 * s2) ** 2)


def _rate(p: int, grid: GridSpec, variant: str) -> float:
    return mu_k(p, grid, 1) if variant == "D2" else lambda_k(p, grid, 1) ** 2


def l2_error_bound(ic: InitialCondition, c: float, nu: float, p: int, grid: GridSpec, t: float,
                   variant: str = "D2") -> TheoryReport:
    """t e^{-nu t mu_1} dx^{2p} B for a condition band-limited on ``grid``."""
    K = grid.N // 2
    B = bound_constant(ic, c, nu, p, variant, K)
    mu1 = _rate(p, grid, variant)
    tau = t * math.exp(-nu * t * mu1)
    bound = tau * grid.dx ** (2 * p) * B
    return TheoryReport(B, tau, mu1, bound, (True, True), grid.n, float("nan"))


def plan_grid_and_check(ic: InitialCondition, c: float, nu: float, d: float, T: float, p: int,
                        eps: float) -> TheoryReport:
    """Grid size for an L^2 error eps, the technical assumptions, and the cost estimate."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    N0 = ic.native_resolution()
    n0 = max(1, math.ceil(math.log2(N0)))
    grid0 = GridSpec(d, n0)
    mu_prime = mu_k(p, grid0, 1)
    tau = T * math.exp(-nu * T * mu_prime)
    B = bound_constant(ic, c, nu, p, "D2")
    norm0 = sobolev_seminorm(ic, 0)
    cp = cp_constant(p)
    if tau * B > 0:
        n_acc = math.ceil(math.log2(d * (2 * tau * B / eps) ** (1 / (2 * p))))
    else:
        n_acc = n0
    n = max(n_acc, n0)
    tb = tau * B
    lhs1 = math.e ** 2 / 4 * nu * T * tb ** (1 / p) / (cp ** 2 * eps ** (1 / p))
    lhs2 = math.e ** 2 / 2 * c * T * tb ** (1 / (2 * p)) / (cp * eps ** (1 / (2 * p)))
    ok1 = lhs1 >= math.log(48 * norm0 / (5 * math.sqrt(2) * eps))
    ok2 = lhs2 >= math.log(32 * norm0 / (5 * math.sqrt(2) * eps))
    depth = max(math.log2(d * (tb / eps) ** (1 / (2 * p))), 1.0) if tb > 0 else 1.0
    rate = nu * tb ** (1 / p) / (cp ** 2 * eps ** (1 / p)) + c * tb ** (1 / (2 * p)) / (cp * eps ** (1 / (2 * p)))
    complexity = T * rate * depth * ancilla_count(p)
    grid = GridSpec(d, n)
    bound = tau * grid.dx ** (2 * p) * B
    return TheoryReport(B, tau, mu_prime, bound, (bool(ok1), bool(ok2)), int(n), float(complexity))


def energy_bound(ic: InitialCondition, nu: float, t: float) -> float:
    """e^{-t nu omega^2} ||u_0 - rho||_{L^2}, with rho the mean of u_0.

    Bounds ||u_t - rho||_{L^2}: every nonzero mode decays at least as fast as k = 1.
    """
    if nu < 0 or t < 0:
        raise ValueError("nu and t must be nonnegative")
    K = ic.native_resolution() // 2
    a = ic.coefficients(K).copy()
    a[0] = 0
    return math.exp(-t * nu * ic.omega ** 2) * math.sqrt(ic.d * float(np.sum(np.abs(a) ** 2)))
