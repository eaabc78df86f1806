"""Amplitude loading circuits and the state-preparation pair for the LCU of D_2p.

The pair ``(S_L, S_R)`` acts on ``m = ceil(log2(2p+1))`` ancilla qubits with

    S_L|0> = i sqrt(c_p) sum_j sqrt(|alpha_j| / 2j) (|p+j> + |p-j>)
    S_R|0> =   sqrt(c_p) sum_j (-1)^{j+1} sqrt(|alpha_j| / 2j) (|p+j> - |p-j>)

so that ``b_i conj(c_i) = a_i`` with ``a = i c_p sum_j alpha_j/(2j) (|p+j> - |p-j>)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitError
from .stencil import alpha_coefficients, cp_constant

_ZERO = 1e-15


def ancilla_count(p: int) -> int:
    """m = ceil(log2(2p+1))."""
    return max(1, (2 * p).bit_length())


def _multiplexed(circ: Circuit, kind: str, target: int, controls: list[int], angles: np.ndarray):
    """Uniformly controlled rotation; ``angles[h]`` applies when the controls read ``h``.

    ``controls[i]`` carries bit ``i`` of ``h``.  Angles are gate parameters of ``kind``.
    """
    if np.all(np.abs(angles) < _ZERO):
        return
    if not controls:
        circ.append(kind, target, float(angles[0]))
        return
    half = len(angles) // 2
    a, b = angles[:half], angles[half:]
    top = controls[-1]
    _multiplexed(circ, kind, target, controls[:-1], (a + b) / 2)
    diff = (a - b) / 2
    if np.all(np.abs(diff) < _ZERO):
        return
    circ.append("X", target, controls=[(top, 1)])
    _multiplexed(circ, kind, target, controls[:-1], diff)
    circ.append("X", target, controls=[(top, 1)])


def prepare_amplitudes(v, qubits=None, num_qubits: int | None = None, tol: float = 1e-12) -> Circuit:
    """Circuit C with C|0...0> = v, built from multiplexed RotY and RotZExp stages."""
    v = np.asarray(v, dtype=complex).ravel()
    size = v.size
    m = size.bit_length() - 1
    if size < 1 or 1 << m != size:
        raise CircuitError("vector length must be a power of two")
    if abs(np.linalg.norm(v) - 1) > tol:
        raise CircuitError("vector is not normalized")
    q = list(range(m)) if qubits is None else list(qubits)
    if len(q) != m:
        raise CircuitError("qubit list does not match vector length")
    circ = Circuit((max(q) + 1 if q else 0) if num_qubits is None else num_qubits)

    # a vector that is real up to one overall phase needs no RotZExp stage
    lead = np.angle(v[np.argmax(np.abs(v))])
    rot = v * np.exp(-1j * lead)
    real = bool(np.all(np.abs(rot.imag) < 1e-14))
    amp = rot.real if real else np.abs(v)
    # magnitudes from the top qubit down; the last level keeps signs when real
    for t in range(m - 1, -1, -1):
        blocks = amp.reshape(-1, 2, 1 << t)
        if t == 0 and real:
            lo, hi = blocks[:, 0, 0], blocks[:, 1, 0]
        else:
            lo = np.linalg.norm(blocks[:, 0, :], axis=1)
            hi = np.linalg.norm(blocks[:, 1, :], axis=1)
        _multiplexed(circ, "RotY", q[t], q[t + 1:], 2 * np.arctan2(hi, lo))
    if real:
        if abs(lead) > _ZERO:
            circ.append("GlobalPhase", None, float(lead))
        return circ
    ph = np.angle(v)
    for t in range(m):
        pairs = ph.reshape(-1, 2)
        # diag(e^{-i phi}, e^{i phi}) with phi = (phb - pha) / 2
        _multiplexed(circ, "RotZExp", q[t], q[t + 1:], (pairs[:, 1] - pairs[:, 0]) / 2)
        ph = pairs.mean(axis=1)
    if abs(ph[0]) > _ZERO:
        circ.append("GlobalPhase", None, float(ph[0]))
    return circ


@dataclass
class PreparationPair:
    s_l: Circuit
    s_r: Circuit
    m: int
    p: int


def sp_vectors(p: int) -> tuple[np.ndarray, np.ndarray]:
    """The target columns S_L|0> and S_R|0>."""
    m = ancilla_count(p)
    cp = cp_constant(p)
    alpha = alpha_coefficients(p)
    b = np.zeros(1 << m, dtype=complex)
    c = np.zeros(1 << m, dtype=complex)
    for j, a in enumerate(alpha, start=1):
        w = math.sqrt(cp * abs(a) / (2 * j))
        b[p + j] = b[p - j] = 1j * w
        sgn = 1.0 if j % 2 else -1.0
        c[p + j] = sgn * w
        c[p - j] = -sgn * w
    return b, c


def lcu_coefficients(p: int) -> np.ndarray:
    """a(p) = i c_p sum_j alpha_j/(2j) (|p+j> - |p-j>)."""
    m = ancilla_count(p)
    cp = cp_constant(p)
    a = np.zeros(1 << m, dtype=complex)
    for j, al in enumerate(alpha_coefficients(p), start=1):
        a[p + j] += 1j * cp * al / (2 * j)
        a[p - j] -= 1j * cp * al / (2 * j)
    return a


def _pair_p1() -> PreparationPair:
    s_l = Circuit(2).append("GlobalPhase", None, math.pi / 2).append("H", 1)
    s_r = Circuit(2).append("X", 1).append("H", 1).append("X", 1)
    return PreparationPair(s_l, s_r, 2, 1)


def _pair_p3() -> PreparationPair:
    phi1 = math.asin(math.sqrt(9 / 11))
    phi2 = math.asin(math.sqrt(9 / 10))
    toffoli = dict(controls=[(0, 0), (2, 1)])
    s_l = Circuit(3)
    s_l.append("RotY", 1, 2 * phi1)
    s_l.append("GlobalPhase", None, math.pi / 2)
    s_l.append("RotY", 0, 2 * phi2, controls=[(1, 0)])
    s_l.append("H", 2)
    s_l.append("X", 1, **toffoli)
    s_r = Circuit(3)
    s_r.append("RotY", 1, -2 * phi1)
    s_r.append("RotY", 0, 2 * (math.pi - phi2), controls=[(1, 0)])
    s_r.append("X", 2)
    s_r.append("H", 2)
    s_r.append("X", 1, **toffoli)
    return PreparationPair(s_l, s_r, 3, 3)


def sp_pair(p: int) -> PreparationPair:
    """State-preparation pair for a(p); hand-built circuits for p = 1 and p = 3."""
    if p == 1:
        return _pair_p1()
    if p == 3:
        return _pair_p3()
    b, c = sp_vectors(p)
    return PreparationPair(prepare_amplitudes(b), prepare_amplitudes(c), ancilla_count(p), p)
