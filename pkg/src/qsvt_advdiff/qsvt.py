"""QSVT circuits: single phase sequence, parallel even/odd pair, and QFT hoisting.

Single sequence (one signal qubit ``sig``), in time order::

    H(sig)  U  Pi(phi_d)  U^dag  Pi(phi_{d-1})  U ...  Pi(phi_1)  H(sig)

where ``Pi(phi)`` is a zero-controlled NOT from the encoding ancillas onto
``sig``, ``RotZExp(phi)`` on ``sig``, and the same NOT again.  The block over
all ancillas is ``Re P(A)`` with ``P`` the reflection-convention product of
:func:`qsvt_advdiff.qsp.qsp_eval`.

Parallel pair (``sig`` plus a selector ``sel``): the selector branch 0 runs
the even sequence (d queries), branch 1 the odd sequence (d+1 queries) whose
extra first query ``U^dag`` is the only controlled use of the encoding.  The
block is ``(q_even(A) + q_odd(A)) / 2``, or ``(q_even(A) + i q_odd(A)) / 2``
with an S gate on the selector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blockenc import BlockEncoding
from .circuit import Circuit, CircuitError, controlled
from .qsp import AngleSequence


@dataclass
class QsvtCircuit:
    circuit: Circuit
    signal_ancillas: tuple[int, ...]
    encoding_ancillas: tuple[int, ...]
    system_qubits: tuple[int, ...]
    realized_scale: float
    queries: int = 0

    @property
    def ancillas(self) -> tuple[int, ...]:
        return self.encoding_ancillas + self.signal_ancillas

    def as_encoding(self) -> BlockEncoding:
        return BlockEncoding(self.circuit, self.ancillas, self.system_qubits,
                             self.realized_scale, "qsvt")


def _phase_block(circ: Circuit, enc: BlockEncoding, sig: int, phi: float,
                 sel: int | None = None, phi_sel: float | None = None,
                 only_sel: bool = False) -> None:
    flip = [(a, 0) for a in enc.ancilla_qubits]
    circ.append("X", sig, controls=flip)
    if only_sel:
        circ.append("RotZExp", sig, phi_sel, controls=[(sel, 1)])
    else:
        circ.append("RotZExp", sig, phi)
        if sel is not None and phi_sel is not None and phi_sel != phi:
            circ.append("RotZExp", sig, phi_sel - phi, controls=[(sel, 1)])
    circ.append("X", sig, controls=flip)


def qsvt_single(enc: BlockEncoding, phi: AngleSequence) -> QsvtCircuit:
    """Fig.-1 style circuit realizing Re P_phi(A) on one extra signal qubit."""
    if phi.parity not in ("even", "odd"):
        raise CircuitError("phase sequence needs definite parity")
    d = phi.degree
    if (d % 2 == 0) != (phi.parity == "even"):
        raise CircuitError("sequence length does not match its parity")
    sig = enc.num_qubits
    circ = Circuit(enc.num_qubits + 1)
    u, udag = enc.circuit, enc.circuit.adjoint()
    circ.append("H", sig)
    for k in range(1, d + 1):
        circ.extend(u if k % 2 else udag)
        _phase_block(circ, enc, sig, float(phi.phases[d - k]))
    circ.append("H", sig)
    return QsvtCircuit(circ, (sig,), enc.ancilla_qubits, enc.system_qubits, 1.0, d)


def qsvt_parallel(enc: BlockEncoding, phi_even: AngleSequence, phi_odd: AngleSequence,
                  imaginary_combination: bool = True) -> QsvtCircuit:
    """Even and odd sequences sharing d queries plus one selector-controlled query."""
    d = phi_even.degree
    if phi_even.parity != "even" or phi_odd.parity != "odd":
        raise CircuitError("need an even and an odd sequence")
    if phi_odd.degree != d + 1:
        raise CircuitError("odd sequence must be exactly one longer than the even one")
    sig, sel = enc.num_qubits, enc.num_qubits + 1
    circ = Circuit(enc.num_qubits + 2)
    u, udag = enc.circuit, enc.circuit.adjoint()
    circ.append("H", sig)
    circ.append("H", sel)
    if imaginary_combination:
        circ.append("S", sel)
    circ.extend(controlled(udag, sel, 1))
    _phase_block(circ, enc, sig, 0.0, sel, float(phi_odd.phases[d]), only_sel=True)
    for k in range(1, d + 1):
        circ.extend(u if k % 2 else udag)
        _phase_block(circ, enc, sig, float(phi_even.phases[d - k]), sel, float(phi_odd.phases[d - k]))
    circ.append("H", sig)
    circ.append("H", sel)
    return QsvtCircuit(circ, (sig, sel), enc.ancilla_qubits, enc.system_qubits, 0.5, d + 1)


def conjugate_encoding(enc: BlockEncoding, f: Circuit) -> BlockEncoding:
    """Encoding of F A F^dag: apply f^dag, the encoding, then f (f on system qubits only)."""
    _check_system_only(f, enc.ancilla_qubits)
    circ = Circuit(enc.num_qubits)
    circ.extend(f.adjoint())
    circ.extend(enc.circuit)
    circ.extend(f)
    return BlockEncoding(circ, enc.ancilla_qubits, enc.system_qubits, enc.scale, enc.label, dict(enc.meta))


def _check_system_only(f: Circuit, ancillas) -> None:
    anc = set(ancillas)
    for g in f.gates:
        if anc & set(g.qubits):
            raise CircuitError("conjugating circuit touches ancilla qubits")


def conjugation_hoist(q: QsvtCircuit, f: Circuit, include_prefix: bool = True) -> QsvtCircuit:
    """QSVT of f A f^dag written as f^dag, QSVT(A), f rather than per-query conjugation.

    With ``include_prefix=False`` the leading f^dag is dropped; the caller then
    loads the input state already transformed by f^dag.
    """
    _check_system_only(f, q.ancillas)
    circ = Circuit(q.circuit.num_qubits)
    if include_prefix:
        circ.extend(f.adjoint())
    circ.extend(q.circuit)
    circ.extend(f)
    return QsvtCircuit(circ, q.signal_ancillas, q.encoding_ancillas, q.system_qubits,
                       q.realized_scale, q.queries)
