"""Circuit intermediate representation and exact statevector execution.

Qubit ordering is little-endian everywhere: basis index ``j = sum_s j_s 2**s``
where ``j_s`` is the state of qubit ``s``.  A statevector of ``n`` qubits is a
complex array of length ``2**n`` addressed with that convention.

Gate vocabulary
---------------
``H X Y Z S``                 fixed one-qubit gates
``Phase`` (theta)             diag(1, e^{i theta})
``RotY`` (theta)              exp(-i theta Y / 2)
``RotZExp`` (phi)             exp(-i phi Z), the QSP phase rotation
``GlobalPhase`` (theta)       scalar e^{i theta}; acts on no target

Every gate may carry controls given as ``(qubit, value)`` pairs; the gate acts
only on the subspace where each control qubit holds ``value``.

Text dump format (one gate per line)::

    GATE <kind> <param|-> t=<q,q,...> c=<q:v,q:v,...|->

preceded by a ``QUBITS <n>`` header line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ONE_QUBIT_KINDS = ("H", "X", "Y", "Z", "S", "Phase", "RotY", "RotZExp")
PARAM_KINDS = ("Phase", "RotY", "RotZExp", "GlobalPhase")
DIAGONAL_KINDS = ("Z", "S", "Phase", "RotZExp", "GlobalPhase")
ALL_KINDS = ONE_QUBIT_KINDS + ("GlobalPhase",)

_SQRT_HALF = 1.0 / math.sqrt(2.0)


class CircuitError(ValueError):
    """Raised for malformed gates, circuits or statevectors."""


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...] = ()
    controls: tuple[tuple[int, int], ...] = ()
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if self.kind == "GlobalPhase":
            if self.targets:
                raise CircuitError("GlobalPhase takes no targets")
        elif len(self.targets) != 1:
            raise CircuitError(f"{self.kind} needs exactly one target")
        if not math.isfinite(self.param):
            raise CircuitError(f"non-finite parameter in {self.kind}")
        cq = [q for q, _ in self.controls]
        if len(set(cq)) != len(cq):
            raise CircuitError("repeated control qubit")
        if set(cq) & set(self.targets):
            raise CircuitError("targets and controls overlap")
        for _, v in self.controls:
            if v not in (0, 1):
                raise CircuitError("control value must be 0 or 1")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + tuple(q for q, _ in self.controls)

    def adjoint(self) -> "Gate":
        if self.kind in ("H", "X", "Y", "Z"):
            return self
        if self.kind == "S":
            return Gate("Phase", self.targets, self.controls, -math.pi / 2)
        return Gate(self.kind, self.targets, self.controls, -self.param)

    def matrix(self) -> np.ndarray:
        """2x2 matrix of the target action (1x1 for GlobalPhase)."""
        k, t = self.kind, self.param
        if k == "H":
            return np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF
        if k == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if k == "Y":
            return np.array([[0, -1j], [1j, 0]], dtype=complex)
        if k == "Z":
            return np.diag([1, -1]).astype(complex)
        if k == "S":
            return np.diag([1, 1j])
        if k == "Phase":
            return np.diag([1, np.exp(1j * t)])
        if k == "RotY":
            c, s = math.cos(t / 2), math.sin(t / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if k == "RotZExp":
            return np.diag([np.exp(-1j * t), np.exp(1j * t)])
        return np.array([[np.exp(1j * t)]])

    def remap(self, mapping: Sequence[int]) -> "Gate":
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.targets),
            tuple((mapping[q], v) for q, v in self.controls),
            self.param,
        )

    def with_control(self, qubit: int, value: int = 1) -> "Gate":
        """Add one control; a GlobalPhase turns into a phase gate on that qubit."""
        if self.kind == "GlobalPhase":
            rest = self.controls
            if value == 1:
                return Gate("Phase", (qubit,), rest, self.param)
            # e^{i t} on |0>, 1 on |1>  ==  e^{i t} * diag(1, e^{-i t})
            raise _ZeroControlledPhase(
                Gate("GlobalPhase", (), rest, self.param), Gate("Phase", (qubit,), rest, -self.param)
            )
        return Gate(self.kind, self.targets, self.controls + ((qubit, value),), self.param)

    def dump(self) -> str:
        p = repr(float(self.param)) if self.kind in PARAM_KINDS else "-"
        t = ",".join(map(str, self.targets)) or "-"
        c = ",".join(f"{q}:{v}" for q, v in self.controls) or "-"
        return f"GATE {self.kind} {p} t={t} c={c}"


class _ZeroControlledPhase(Exception):
    def __init__(self, *gates):
        self.gates = gates


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 0:
            raise CircuitError("negative qubit count")
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate):
        for q in g.qubits:
            if not 0 <= q < self.num_qubits:
                raise CircuitError(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")

    def append(self, kind: str, target: int | None = None, param: float = 0.0,
               controls: Iterable[tuple[int, int]] = ()) -> "Circuit":
        targets = () if target is None else (target,)
        g = Gate(kind, targets, tuple(controls), float(param))
        self._check(g)
        self.gates.append(g)
        return self

    def add(self, gate: Gate) -> "Circuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, other: "Circuit") -> "Circuit":
        if other.num_qubits > self.num_qubits:
            raise CircuitError("cannot extend with a wider circuit")
        self.gates.extend(other.gates)
        return self

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise CircuitError("qubit count mismatch in concatenation")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def copy(self) -> "Circuit":
        return Circuit(self.num_qubits, list(self.gates))

    def adjoint(self) -> "Circuit":
        return Circuit(self.num_qubits, [g.adjoint() for g in reversed(self.gates)])

    def remap(self, mapping: Sequence[int], num_qubits: int) -> "Circuit":
        """Relabel qubit ``q`` as ``mapping[q]`` inside a ``num_qubits`` register."""
        if len(mapping) < self.num_qubits or len(set(mapping)) != len(mapping):
            raise CircuitError("mapping must be injective and cover every qubit")
        return Circuit(num_qubits, [g.remap(mapping) for g in self.gates])

    def dump(self) -> str:
        lines = [f"QUBITS {self.num_qubits}"] + [g.dump() for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Circuit":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("QUBITS "):
            raise CircuitError("missing QUBITS header")
        circ = cls(int(lines[0].split()[1]))
        for ln in lines[1:]:
            tag, kind, p, t, c = ln.split()
            if tag != "GATE":
                raise CircuitError(f"bad line {ln!r}")
            targets = () if t == "t=-" else tuple(int(q) for q in t[2:].split(","))
            controls = () if c == "c=-" else tuple(
                (int(q), int(v)) for q, v in (x.split(":") for x in c[2:].split(",")))
            circ.add(Gate(kind, targets, controls, 0.0 if p == "-" else float(p)))
        return circ


def controlled(circuit: Circuit, control: int, value: int = 1) -> Circuit:
    """Return ``circuit`` conditioned on qubit ``control`` holding ``value``.

    The control may be a fresh qubit beyond ``circuit.num_qubits``; the result is
    widened as needed.  Global phases become phase gates on the control.
    """
    if control < circuit.num_qubits and any(control in g.qubits for g in circuit.gates):
        raise CircuitError(f"control qubit {control} is used by the circuit")
    out = Circuit(max(circuit.num_qubits, control + 1))
    for g in circuit.gates:
        try:
            out.add(g.with_control(control, value))
        except _ZeroControlledPhase as zc:
            for h in zc.gates:
                out.add(h)
    return out


# --------------------------------------------------------------------------
# statevector execution


def _as_state(state, num_qubits: int) -> np.ndarray:
    psi = np.array(state, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise CircuitError("statevector must be a non-empty 1-D array")
    if psi.size != 1 << num_qubits:
        raise CircuitError(f"statevector length {psi.size} != 2**{num_qubits}")
    return psi


def zero_state(num_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << num_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(num_qubits: int, index: int) -> np.ndarray:
    psi = np.zeros(1 << num_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def _apply_gate(view: np.ndarray, n: int, g: Gate) -> None:
    # view has shape (2,)*n with axis n-1-q addressing qubit q
    idx: list = [slice(None)] * n
    for q, v in g.controls:
        idx[n - 1 - q] = v
    k = g.kind
    if k == "GlobalPhase":
        if g.param != 0.0:
            view[tuple(idx)] *= np.exp(1j * g.param)
        return
    ax = n - 1 - g.targets[0]
    i0 = list(idx)
    i1 = list(idx)
    i0[ax] = 0
    i1[ax] = 1
    i0, i1 = tuple(i0), tuple(i1)
    if k == "X":
        tmp = view[i0].copy()
        view[i0] = view[i1]
        view[i1] = tmp
        return
    if k in DIAGONAL_KINDS:
        m = g.matrix()
        if m[0, 0] != 1.0:
            view[i0] *= m[0, 0]
        if m[1, 1] != 1.0:
            view[i1] *= m[1, 1]
        return
    m = g.matrix()
    a = view[i0].copy()
    b = view[i1]
    view[i0] = m[0, 0] * a + m[0, 1] * b
    view[i1] = m[1, 0] * a + m[1, 1] * b


def apply_circuit(state, circuit: Circuit, inplace: bool = False) -> np.ndarray:
    """Apply ``circuit`` to ``state`` and return the resulting amplitudes.

    With ``inplace=True`` and a complex128 input array the caller's buffer is
    overwritten and returned.
    """
    n = circuit.num_qubits
    if inplace and isinstance(state, np.ndarray) and state.dtype == complex:
        psi = state
        if psi.size != 1 << n:
            raise CircuitError(f"statevector length {psi.size} != 2**{n}")
    else:
        psi = _as_state(state, n)
    if n == 0:
        for g in circuit.gates:
            psi *= g.matrix()[0, 0]
        return psi
    view = psi.reshape((2,) * n)
    gates = circuit.gates
    cache = _DiagonalCache(n)
    i = 0
    while i < len(gates):
        j = i
        while j < len(gates) and gates[j].kind in DIAGONAL_KINDS:
            j += 1
        if j - i >= FUSE_MIN_RUN:
            psi *= cache.get(tuple(gates[i:j]))
            i = j
        else:
            _apply_gate(view, n, gates[i])
            i += 1
    return psi


# runs of at least this many diagonal gates are applied as one fused vector
FUSE_MIN_RUN = 4
FUSE_CACHE_BYTES = 1 << 28


class _DiagonalCache:
    """Fused diagonals for repeated runs of diagonal gates, bounded in memory."""

    def __init__(self, n: int):
        self.n = n
        self.limit = max(1, FUSE_CACHE_BYTES // (16 << n))
        self.store: dict = {}

    def get(self, run: tuple) -> np.ndarray:
        d = self.store.get(run)
        if d is None:
            d = np.ones(1 << self.n, dtype=complex)
            view = d.reshape((2,) * self.n)
            for g in run:
                _apply_gate(view, self.n, g)
            if len(self.store) >= self.limit:
                self.store.pop(next(iter(self.store)))
            self.store[run] = d
        return d


def apply_circuit_batch(states, circuit: Circuit) -> np.ndarray:
    """Apply ``circuit`` to each row of a ``(batch, 2**n)`` array."""
    n = circuit.num_qubits
    block = np.array(states, dtype=complex)
    if block.ndim != 2 or block.shape[1] != 1 << n:
        raise CircuitError(f"batch must have shape (B, {1 << n})")
    view = block.reshape((block.shape[0],) + (2,) * n)
    for g in circuit.gates:
        _apply_gate_batched(view, n, g)
    return block


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary; column ``k`` is the circuit applied to basis state ``k``."""
    n = circuit.num_qubits
    if n > 12:
        raise CircuitError("dense unitary limited to 12 qubits")
    return apply_circuit_batch(np.eye(1 << n, dtype=complex), circuit).T


def _apply_gate_batched(view: np.ndarray, n: int, g: Gate) -> None:
    # leading batch axis; qubit q sits on axis n - q
    idx: list = [slice(None)] * (n + 1)
    for q, v in g.controls:
        idx[n - q] = v
    if g.kind == "GlobalPhase":
        view[tuple(idx)] *= np.exp(1j * g.param)
        return
    ax = n - g.targets[0]
    i0 = list(idx)
    i1 = list(idx)
    i0[ax] = 0
    i1[ax] = 1
    i0, i1 = tuple(i0), tuple(i1)
    m = g.matrix()
    a = view[i0].copy()
    b = view[i1].copy()
    view[i0] = m[0, 0] * a + m[0, 1] * b
    view[i1] = m[1, 0] * a + m[1, 1] * b


def subspace_indices(system_qubits: Sequence[int]) -> np.ndarray:
    """Basis indices with every non-system bit zero, ordered by system value."""
    idx = np.zeros(1 << len(system_qubits), dtype=np.int64)
    for s, q in enumerate(system_qubits):
        idx += ((np.arange(idx.size) >> s) & 1) << q
    return idx


def project_ancilla_zero(state, ancilla_qubits: Iterable[int], num_qubits: int | None = None):
    """Amplitudes with every ancilla bit 0, and their total probability.

    The returned sub-state is unnormalized and ordered by the remaining
    (system) qubits in increasing index.
    """
    psi = np.asarray(state)
    if psi.size == 0:
        raise CircuitError("empty state")
    n = int(round(math.log2(psi.size))) if num_qubits is None else num_qubits
    if psi.size != 1 << n:
        raise CircuitError("state length is not a power of two")
    anc = sorted(set(ancilla_qubits))
    if any(not 0 <= a < n for a in anc):
        raise CircuitError("ancilla index out of range")
    view = psi.reshape((2,) * n) if n else psi
    idx: list = [slice(None)] * n
    for a in anc:
        idx[n - 1 - a] = 0
    sub = np.array(view[tuple(idx)]).reshape(-1)
    prob = float(np.vdot(sub, sub).real)
    return sub, prob


# --------------------------------------------------------------------------
# gate counting


@dataclass(frozen=True)
class GateCounts:
    one_qubit: int = 0
    cnot: int = 0

    def __add__(self, other: "GateCounts") -> "GateCounts":
        return GateCounts(self.one_qubit + other.one_qubit, self.cnot + other.cnot)

    def __mul__(self, k: int) -> "GateCounts":
        return GateCounts(self.one_qubit * k, self.cnot * k)

    __rmul__ = __mul__

    @property
    def total(self) -> int:
        return self.one_qubit + self.cnot


_CTRL1 = GateCounts(3, 2)  # two CNOTs around an A, B, C triple


def _controlled_cost(kind: str, c: int) -> GateCounts:
    """Cost of a ``c``-controlled one-qubit gate (controls on value 1)."""
    if c == 0:
        return GateCounts(0, 0) if kind == "GlobalPhase" else GateCounts(1, 0)
    if c == 1:
        return GateCounts(0, 1) if kind == "X" else _CTRL1
    # C^c V = C(sqrt V) . C^{c-1}X . C(sqrt V)^dag . C^{c-1}X . C^{c-1}(sqrt V)
    return 2 * _controlled_cost("X", c - 1) + 2 * _CTRL1 + _controlled_cost("V", c - 1)


def count_gates(circuit: Circuit) -> GateCounts:
    """Lowered (one-qubit, CNOT) totals under the fixed lowering rules.

    Zero-valued controls add an X before and after the gate.
    """
    tally: dict[tuple[str, int, int], int] = {}
    for g in circuit.gates:
        kind = "X" if g.kind == "X" else ("GlobalPhase" if g.kind == "GlobalPhase" else "V")
        zeros = sum(1 for _, v in g.controls if v == 0)
        key = (kind, len(g.controls), zeros)
        tally[key] = tally.get(key, 0) + 1
    total = GateCounts()
    for (kind, c, zeros), num in tally.items():
        total = total + num * (_controlled_cost(kind, c) + GateCounts(2 * zeros, 0))
    return total


def two_qubit_gate_count(circuit: Circuit) -> int:
    """Number of singly-controlled one-qubit gates, before lowering."""
    return sum(1 for g in circuit.gates if len(g.controls) == 1 and g.targets)


def swap(circuit: Circuit, a: int, b: int) -> Circuit:
    """Append a SWAP as three CNOTs."""
    circuit.append("X", b, controls=[(a, 1)])
    circuit.append("X", a, controls=[(b, 1)])
    circuit.append("X", b, controls=[(a, 1)])
    return circuit
