"""Block encodings: LCU assembly, the two encodings of D_2p, composition, extraction.

Qubit layout for the D_2p encodings: system (grid) qubits ``0..n-1`` and the
LCU ancilla register ``n..n+m-1`` with ``m = ceil(log2(2p+1))``.

The LCU coefficient vector places ``T^{+j}`` at ancilla index ``p+j`` where
``T|k> = |k+1 mod N>``.  Evaluated directly this gives the blocks

* modular (translation) form:  ``-i c_p dx D_2p``
* Fourier-frame (phase) form:  ``diag(-c_p dx lambda_k)``

so the modular block is ``-H`` for ``H = i c_p dx D_2p`` and the Fourier block is
``F^dag H F`` read in the circuit orientation ``H = F diag F^dag``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import AdderSpec, modular_adder_circuit, phase_adder_circuit
from .circuit import (
    Circuit,
    CircuitError,
    apply_circuit_batch,
    subspace_indices,
)
from .stateprep import PreparationPair, ancilla_count, sp_pair
from .stencil import GridSpec

EXTRACT_LIMIT = 14


@dataclass
class BlockEncoding:
    """``circuit`` whose ancilla-zero block equals ``scale * A``."""

    circuit: Circuit
    ancilla_qubits: tuple[int, ...]
    system_qubits: tuple[int, ...]
    scale: float = 1.0
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ancilla_qubits = tuple(self.ancilla_qubits)
        self.system_qubits = tuple(self.system_qubits)
        both = self.ancilla_qubits + self.system_qubits
        if len(set(both)) != len(both):
            raise CircuitError("ancilla and system registers overlap")
        if any(not 0 <= q < self.circuit.num_qubits for q in both):
            raise CircuitError("register index outside the circuit")

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits


def lcu_encode(pair: PreparationPair, select: Circuit, ancilla_qubits: Sequence[int],
               system_qubits: Sequence[int], label: str = "") -> BlockEncoding:
    """S_L on the control register, then ``select``, then S_R^dag."""
    anc = list(ancilla_qubits)
    if len(anc) != pair.m:
        raise CircuitError(f"pair acts on {pair.m} qubits, register has {len(anc)}")
    width = select.num_qubits
    circ = Circuit(width)
    circ.extend(pair.s_l.remap(anc, width))
    circ.extend(select)
    circ.extend(pair.s_r.adjoint().remap(anc, width))
    return BlockEncoding(circ, tuple(anc), tuple(system_qubits), 1.0, label)


def _d2p_layout(p: int, grid: GridSpec):
    m = ancilla_count(p)
    system = list(range(grid.n))
    anc = list(range(grid.n, grid.n + m))
    return m, system, anc


def encode_d2p_modular(p: int, grid: GridSpec) -> BlockEncoding:
    """Translation-form encoding; block = -i c_p dx D_2p."""
    m, system, anc = _d2p_layout(p, grid)
    sel = modular_adder_circuit(AdderSpec(m, grid.n, -p), anc, system, grid.n + m)
    enc = lcu_encode(sp_pair(p), sel, anc, system, label=f"D2p-modular p={p}")
    enc.meta.update(p=p, n=grid.n, d=grid.d, frame="grid")
    return enc


def encode_d2p_fourier(p: int, grid: GridSpec) -> BlockEncoding:
    """Phase-adder encoding; block = diag(-c_p dx lambda_k) with no QFT inside."""
    m, system, anc = _d2p_layout(p, grid)
    sel = phase_adder_circuit(AdderSpec(m, grid.n, -p), anc, system, grid.n + m)
    enc = lcu_encode(sp_pair(p), sel, anc, system, label=f"D2p-fourier p={p}")
    enc.meta.update(p=p, n=grid.n, d=grid.d, frame="fourier")
    return enc


def widen(enc: BlockEncoding, mapping: Sequence[int], num_qubits: int) -> BlockEncoding:
    """Relabel qubit ``q`` of ``enc`` as ``mapping[q]`` in a wider register."""
    return BlockEncoding(
        enc.circuit.remap(mapping, num_qubits),
        tuple(mapping[q] for q in enc.ancilla_qubits),
        tuple(mapping[q] for q in enc.system_qubits),
        enc.scale,
        enc.label,
        dict(enc.meta),
    )


def compose_encodings(u: BlockEncoding, v: BlockEncoding) -> BlockEncoding:
    """Encoding of U_blk V_blk with one extra flag ancilla.

    Both inputs must live on the same qubit register.  The flag is flipped by a
    zero-controlled NOT on v's ancillas and then negated, so it reads 0 exactly
    on v's good branch.
    """
    if u.num_qubits != v.num_qubits:
        raise CircuitError("encodings live on registers of different width")
    if set(u.system_qubits) != set(v.system_qubits):
        raise CircuitError("encodings act on different system registers")
    width = u.num_qubits + 1
    flag = u.num_qubits
    circ = Circuit(width)
    circ.extend(v.circuit)
    circ.append("X", flag, controls=[(a, 0) for a in v.ancilla_qubits])
    circ.append("X", flag)
    circ.extend(u.circuit)
    anc = tuple(sorted(set(u.ancilla_qubits) | set(v.ancilla_qubits))) + (flag,)
    return BlockEncoding(circ, anc, u.system_qubits, u.scale * v.scale,
                         f"({u.label})*({v.label})")


def extract_block(enc: BlockEncoding) -> np.ndarray:
    """M[x, y] = <anc=0, x| U |anc=0, y> by running every ancilla-zero column."""
    if enc.num_qubits > EXTRACT_LIMIT:
        raise CircuitError(f"block extraction limited to {EXTRACT_LIMIT} qubits")
    rows = subspace_indices(enc.system_qubits)
    cols = np.zeros((rows.size, 1 << enc.num_qubits), dtype=complex)
    cols[np.arange(rows.size), rows] = 1.0
    out = apply_circuit_batch(cols, enc.circuit)
    return out[:, rows].T


def trivial_encoding(num_system: int, num_ancilla: int = 1) -> BlockEncoding:
    """Identity circuit; block = I."""
    n = num_system + num_ancilla
    return BlockEncoding(Circuit(n), tuple(range(num_system, n)), tuple(range(num_system)))
