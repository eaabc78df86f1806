"""Quantum signal processing phases for real parity-definite polynomials.

Two conventions appear here.

* Reflection convention (what the QSVT circuits realize)::

      q(x) = Re [ prod_{k=1}^{d} e^{i phi_k Z} R(x) ]_{00},   R(x) = [[x, s], [s, -x]]

  with ``s = sqrt(1 - x^2)``; the leftmost factor is applied last.

* Symmetric W_x convention (used internally by the Newton solver)::

      q(x) = Re [ e^{i psi_0 Z} prod_{k=1}^{d} W(x) e^{i psi_k Z} ]_{00},  W(x) = [[x, i s], [i s, x]]

  with ``psi_k = psi_{d-k}``.  Since ``R = -i e^{i pi/4 Z} W e^{i pi/4 Z}`` the two
  are related by ``phi_1 = psi_0 + psi_d + (d-1) pi/2`` and
  ``phi_k = psi_{k-1} - pi/2`` for ``k >= 2``.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chebapprox import ChebPoly, chebyshev_nodes

MAX_DEGREE = 4000
MAX_ITER = 60
CACHE_ENV = "QSVT_ADVDIFF_CACHE"
CACHE_VERSION = "qsp-angles v1"


class QSPError(RuntimeError):
    """Angle solving failed or the polynomial is not admissible."""


@dataclass(frozen=True)
class AngleSequence:
    phases: np.ndarray
    parity: str = "none"
    residual: float = 0.0
    wx_phases: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float).copy()
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @property
    def degree(self) -> int:
        return int(self.phases.size)


def qsp_eval(phi, x, convention: str = "reflection"):
    """Re [prod_k e^{i phi_k Z} R(x)]_{00}, vectorized over ``x``.

    ``convention="wx"`` evaluates the symmetric W_x form instead; there an
    all-zero sequence of length d+1 gives T_d.
    """
    if convention == "wx":
        psi = phi.wx_phases if isinstance(phi, AngleSequence) else phi
        out = wx_eval(psi, x)
        return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])
    if convention != "reflection":
        raise ValueError(f"unknown convention {convention!r}")
    phases = phi.phases if isinstance(phi, AngleSequence) else np.asarray(phi, dtype=float)
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    s = np.sqrt(np.clip(1 - flat * flat, 0, None))
    # row vector e0^T times the product, built from the left
    a = np.ones_like(flat, dtype=complex)
    b = np.zeros_like(flat, dtype=complex)
    for ph in phases:
        a, b = a * np.exp(1j * ph), b * np.exp(-1j * ph)
        a, b = a * flat + b * s, a * s - b * flat
    out = a.real
    return out.reshape(x.shape) if x.ndim else float(out[0])


def wx_eval(psi, x):
    """Re [e^{i psi_0 Z} prod_k W(x) e^{i psi_k Z}]_{00}, vectorized over ``x``."""
    psi = np.asarray(psi, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = np.sqrt(np.clip(1 - x * x, 0, None))
    a = np.exp(1j * psi[0]) * np.ones_like(x, dtype=complex)
    b = np.zeros_like(a)
    for ph in psi[1:]:
        a, b = a * x + 1j * b * s, 1j * a * s + b * x
        a, b = a * np.exp(1j * ph), b * np.exp(-1j * ph)
    return a.real


def wx_to_reflection(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=float)
    d = psi.size - 1
    if d == 0:
        raise QSPError("degree-0 sequence has no reflection form")
    phi = np.empty(d)
    phi[0] = psi[0] + psi[d] + (d - 1) * math.pi / 2
    phi[1:] = psi[1:d] - math.pi / 2
    return np.mod(phi + math.pi, 2 * math.pi) - math.pi


def _full_phases(red: np.ndarray, d: int) -> np.ndarray:
    psi = np.empty(d + 1)
    k = red.size
    psi[:k] = red
    psi[d - np.arange(k)] = red
    return psi


def _residual_and_jacobian(red: np.ndarray, d: int, x: np.ndarray):
    """F_j = Re U_00(x_j) and dF_j / d red_k for the symmetric W_x product."""
    psi = _full_phases(red, d)
    s = np.sqrt(1 - x * x)
    nk = red.size
    # suffix columns S_k = W P_{k+1} ... W P_d e_0, stored for k = 0..d
    suf = np.empty((d + 1, x.size, 2), dtype=complex)
    u = np.ones_like(x, dtype=complex)
    v = np.zeros_like(u)
    suf[d, :, 0], suf[d, :, 1] = u, v
    for k in range(d, 0, -1):
        e = np.exp(1j * psi[k])
        u, v = u * e, v / e
        u, v = x * u + 1j * s * v, 1j * s * u + x * v
        suf[k - 1, :, 0], suf[k - 1, :, 1] = u, v
    jac = np.zeros((x.size, nk))
    a = np.ones_like(x, dtype=complex)
    b = np.zeros_like(a)
    for k in range(d + 1):
        if k:
            a, b = a * x + 1j * b * s, 1j * a * s + b * x
        e = np.exp(1j * psi[k])
        a, b = a * e, b / e
        dk = (1j * (a * suf[k, :, 0] - b * suf[k, :, 1])).real
        kk = k if k < nk else d - k
        jac[:, kk] += dk
    val = (a * suf[d, :, 0] + b * suf[d, :, 1]).real
    return val, jac


def _coeff_key(q: ChebPoly, tol: float, degree: int) -> str:
    h = hashlib.sha256(np.ascontiguousarray(q.coeffs, dtype="<f8").tobytes())
    h.update(repr(float(tol)).encode())
    h.update(q.parity.encode())
    h.update(str(degree).encode())
    return h.hexdigest()


def _cache_dir(cache_dir=None) -> Path | None:
    path = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def _cache_load(path: Path, parity: str):
    try:
        lines = path.read_text().splitlines()
    except OSError:
        return None
    if not lines or lines[0] != CACHE_VERSION:
        return None
    fields = dict(item.split("=", 1) for item in lines[1].split())
    psi = np.array([float(t) for t in lines[2:]])
    return AngleSequence(wx_to_reflection(psi), parity, float(fields["residual"]), psi)


def _cache_store(path: Path, seq: AngleSequence) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = [CACHE_VERSION, f"degree={seq.degree} parity={seq.parity} residual={seq.residual!r}"]
    body += [repr(float(v)) for v in seq.wx_phases]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(body) + "\n")
    tmp.replace(path)


def solve_angles(q: ChebPoly, tol: float = 1e-12, cache_dir=None, max_iter: int = MAX_ITER,
                 degree: int | None = None) -> AngleSequence:
    """Reflection-convention phases with qsp_eval(phases, x) = q(x).

    Newton's method on the symmetric W_x phases from the start point
    (pi/4, 0, ..., 0, pi/4), collocated at the positive Chebyshev nodes.
    ``degree`` pads the sequence to at least that length (same parity).
    """
    q = q.trimmed()
    if q.parity == "none":
        raise QSPError("polynomial must have definite parity")
    d = q.degree
    if degree is not None:
        if degree < d:
            raise QSPError(f"requested degree {degree} below polynomial degree {d}")
        d = degree
    if q.parity == "even" and d == 0:
        # pad a constant to degree 2 so the reflection form exists
        d = 2
    if q.parity == "odd" and d == 0:
        d = 1
    if d > MAX_DEGREE:
        raise QSPError(f"degree {d} exceeds {MAX_DEGREE}")
    if (d % 2 == 0) != (q.parity == "even"):
        raise QSPError("degree parity does not match the parity tag")
    if q.sup_norm() > 1 + 1e-12:
        raise QSPError("polynomial magnitude exceeds 1 on [-1, 1]")

    lead = q.coeffs[d] if d < q.coeffs.size else 0.0
    if abs(abs(lead) - 1) < 1e-15 and not np.any(q.coeffs[:d]):
        # +-T_d: zero W_x phases, with pi/2 at both ends flipping the sign
        psi = np.zeros(d + 1)
        if lead < 0:
            psi[0] = psi[d] = math.pi / 2
        return AngleSequence(wx_to_reflection(psi), q.parity, 0.0, psi)

    cdir = _cache_dir(cache_dir)
    cpath = cdir / f"{_coeff_key(q, tol, d)}.txt" if cdir else None
    if cpath is not None and cpath.exists():
        hit = _cache_load(cpath, q.parity)
        if hit is not None:
            return hit

    nk = (d + 2) // 2
    x = np.cos((2 * np.arange(1, nk + 1) - 1) * math.pi / (4 * nk))
    target = q(x)
    red = np.zeros(nk)
    red[0] = math.pi / 4
    err = np.inf
    for _ in range(max_iter):
        val, jac = _residual_and_jacobian(red, d, x)
        res = val - target
        err = float(np.max(np.abs(res)))
        if err <= 0.1 * tol:
            break
        try:
            step = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError as exc:
            raise QSPError("singular Jacobian in the angle solver") from exc
        red = red - step
    psi = _full_phases(red, d)
    check = chebyshev_nodes(d + 1)
    residual = float(np.max(np.abs(wx_eval(psi, check) - q(check))))
    if not residual <= tol:
        raise QSPError(f"angle solver did not converge: residual {residual:.3e} > {tol:.1e} at degree {d}")
    seq = AngleSequence(wx_to_reflection(psi), q.parity, residual, psi)
    if cpath is not None:
        _cache_store(cpath, seq)
    return seq
