"""Fourier arithmetic: QFT, diagonal translation powers, phase and modular adders.

Register layout for the adders: the target register (``n`` qubits) occupies
qubits ``0..n-1`` and the control register (``m`` qubits) occupies
``n..n+m-1`` unless explicit qubit lists are passed.  Registers are
little-endian, so ``|j>|k>`` means control value ``j`` and target value ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, CircuitError, swap


@dataclass(frozen=True)
class AdderSpec:
    m: int
    n: int
    l: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise CircuitError(f"adder needs m, n >= 1, got m={self.m}, n={self.n}")

    @property
    def shift(self) -> int:
        return self.l % (1 << self.n)


def _layout(spec: AdderSpec, controls, targets):
    targets = list(range(spec.n)) if targets is None else list(targets)
    controls = list(range(spec.n, spec.n + spec.m)) if controls is None else list(controls)
    if len(targets) != spec.n or len(controls) != spec.m:
        raise CircuitError("register size does not match adder spec")
    if set(targets) & set(controls):
        raise CircuitError("control and target registers overlap")
    return controls, targets


def qft_circuit(n: int, qubits: Sequence[int] | None = None, num_qubits: int | None = None) -> Circuit:
    """F|k> = 2^{-n/2} sum_j e^{2 pi i jk/N} |j>, including the reversal swaps."""
    if n < 1:
        raise CircuitError("QFT needs at least one qubit")
    q = list(range(n)) if qubits is None else list(qubits)
    circ = Circuit(max(q) + 1 if num_qubits is None else num_qubits)
    for i in range(n - 1, -1, -1):
        circ.append("H", q[i])
        for j in range(i - 1, -1, -1):
            circ.append("Phase", q[i], math.pi / (1 << (i - j)), controls=[(q[j], 1)])
    for i in range(n // 2):
        swap(circ, q[i], q[n - 1 - i])
    return circ


def r_power_circuit(n: int, l: int, qubits: Sequence[int] | None = None,
                    num_qubits: int | None = None) -> Circuit:
    """R^l|k> = e^{2 pi i k l / 2^n}|k> as n Phase gates."""
    q = list(range(n)) if qubits is None else list(qubits)
    circ = Circuit((max(q) + 1 if q else 0) if num_qubits is None else num_qubits)
    lr = l % (1 << n) if n else 0
    for s in range(n):
        circ.append("Phase", q[s], 2 * math.pi * lr / (1 << (n - s)))
    return circ


def phase_adder_circuit(spec: AdderSpec, controls: Sequence[int] | None = None,
                        targets: Sequence[int] | None = None,
                        num_qubits: int | None = None) -> Circuit:
    """sum_j |j><j| (x) R^{j+l}: controlled-phase ladder, then the R^l layer."""
    controls, targets = _layout(spec, controls, targets)
    width = max(controls + targets) + 1 if num_qubits is None else num_qubits
    circ = Circuit(width)
    n = spec.n
    # control bits with s >= n add multiples of 2 pi and are dropped
    for s in range(spec.m):
        for t in range(n - s):
            circ.append("Phase", targets[t], 2 * math.pi / (1 << (n - s - t)),
                        controls=[(controls[s], 1)])
    circ.extend(r_power_circuit(n, spec.shift, targets, width))
    return circ


def modular_adder_circuit(spec: AdderSpec, controls: Sequence[int] | None = None,
                          targets: Sequence[int] | None = None,
                          num_qubits: int | None = None) -> Circuit:
    """|j>|k> -> |j>|k+j+l mod 2^n>: QFT, phase adder, inverse QFT on the target."""
    controls, targets = _layout(spec, controls, targets)
    width = max(controls + targets) + 1 if num_qubits is None else num_qubits
    f = qft_circuit(spec.n, targets, width)
    circ = f.copy()
    circ.extend(phase_adder_circuit(spec, controls, targets, width))
    circ.extend(f.adjoint())
    return circ
