import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsvt_advdiff.arith import qft_circuit
from qsvt_advdiff.circuit import (
    Circuit,
    CircuitError,
    Gate,
    GateCounts,
    apply_circuit,
    basis_state,
    circuit_unitary,
    controlled,
    count_gates,
    project_ancilla_zero,
    zero_state,
)

from conftest import random_state


def test_hadamard_on_zero():
    out = apply_circuit(zero_state(1), Circuit(1).append("H", 0))
    np.testing.assert_allclose(out, [1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_cnot_little_endian():
    c = Circuit(3).append("X", 1, controls=[(0, 1)])
    out = apply_circuit(basis_state(3, 0b001), c)
    assert abs(out[0b011] - 1) < 1e-15


def test_qft_roundtrip(rng):
    v = random_state(rng, 3)
    f = qft_circuit(3)
    out = apply_circuit(apply_circuit(v, f), f.adjoint())
    np.testing.assert_allclose(out, v, atol=1e-12)
    # dense oracle: U U^dag = I
    U = circuit_unitary(f)
    np.testing.assert_allclose(U @ circuit_unitary(f.adjoint()), np.eye(8), atol=1e-12)


def test_controlled_x_is_cnot():
    c = controlled(Circuit(2).append("X", 0), control=1)
    assert c.gates == [Gate("X", (0,), ((1, 1),))]


def test_controlled_global_phase_is_phase():
    theta = 0.731
    c = controlled(Circuit(2).append("GlobalPhase", None, theta), control=1)
    ref = Circuit(2).append("Phase", 1, theta)
    np.testing.assert_allclose(circuit_unitary(c), circuit_unitary(ref), atol=1e-14)


def test_zero_controlled_global_phase():
    theta = 1.1
    c = controlled(Circuit(2).append("GlobalPhase", None, theta), control=1, value=0)
    np.testing.assert_allclose(np.diag(circuit_unitary(c)),
                               [np.exp(1j * theta)] * 2 + [1, 1], atol=1e-14)


def test_controlled_qft_block_diagonal():
    f = qft_circuit(2, num_qubits=3)
    U = circuit_unitary(controlled(f, control=2))
    F = circuit_unitary(qft_circuit(2))
    ref = np.zeros((8, 8), dtype=complex)
    ref[:4, :4] = np.eye(4)
    ref[4:, 4:] = F
    np.testing.assert_allclose(U, ref, atol=1e-12)


def test_gate_count_examples():
    five_h = Circuit(1)
    for _ in range(5):
        five_h.append("H", 0)
    assert count_gates(five_h) == GateCounts(5, 0)
    assert count_gates(Circuit(2).append("Phase", 0, 0.3, controls=[(1, 1)])) == GateCounts(3, 2)
    ccx = Circuit(3).append("X", 0, controls=[(1, 1), (2, 1)])
    assert count_gates(ccx) == GateCounts(9, 8)
    assert count_gates(Circuit(1).append("GlobalPhase", None, 1.0)) == GateCounts(0, 0)
    zero_ctrl = Circuit(2).append("X", 0, controls=[(1, 0)])
    assert count_gates(zero_ctrl) == GateCounts(2, 1)


def _ccx_lowered():
    # C^2 X written out as C(V) CX C(V^dag) CX C(V) with V = sqrt(X); angles are placeholders
    c = Circuit(3)
    c.append("RotY", 0, 0.1, controls=[(1, 1)])
    c.append("X", 1, controls=[(2, 1)])
    c.append("RotY", 0, -0.1, controls=[(1, 1)])
    c.append("X", 1, controls=[(2, 1)])
    c.append("RotY", 0, 0.1, controls=[(2, 1)])
    return c


def test_ccx_count_matches_expanded_recount():
    # two CNOTs plus three singly-controlled gates at (3, 2) each
    expanded = count_gates(_ccx_lowered())
    assert expanded == GateCounts(9, 8)
    assert count_gates(Circuit(3).append("X", 0, controls=[(1, 1), (2, 1)])) == expanded


def test_project_examples(rng):
    psi = random_state(rng, 2)
    full = np.kron(np.array([1.0, 0.0]), psi)  # ancilla is qubit 2
    sub, prob = project_ancilla_zero(full, [2])
    np.testing.assert_allclose(sub, psi)
    assert prob == pytest.approx(1.0)
    uniform = np.full(8, 1 / math.sqrt(8))
    assert project_ancilla_zero(uniform, [0])[1] == pytest.approx(0.5)


def test_dump_parse_roundtrip():
    c = qft_circuit(3)
    c.append("RotZExp", 1, 0.25, controls=[(0, 0), (2, 1)]).append("GlobalPhase", None, 0.5)
    again = Circuit.parse(c.dump())
    assert again.gates == c.gates and again.num_qubits == c.num_qubits


def test_rejects_bad_gates():
    with pytest.raises(CircuitError):
        Circuit(2).append("H", 2)
    with pytest.raises(CircuitError):
        Circuit(2).append("X", 0, controls=[(0, 1)])
    with pytest.raises(CircuitError):
        Circuit(2).append("CZ", 0)


_KINDS = ["H", "X", "Y", "Z", "S", "Phase", "RotY", "RotZExp", "GlobalPhase"]


@st.composite
def circuits(draw, max_qubits=4, max_gates=12):
    n = draw(st.integers(1, max_qubits))
    c = Circuit(n)
    for _ in range(draw(st.integers(0, max_gates))):
        kind = draw(st.sampled_from(_KINDS))
        theta = draw(st.floats(-math.pi, math.pi))
        if kind == "GlobalPhase":
            c.append(kind, None, theta)
            continue
        t = draw(st.integers(0, n - 1))
        others = [q for q in range(n) if q != t]
        ctrl_q = draw(st.lists(st.sampled_from(others), unique=True, max_size=min(2, len(others)))) if others else []
        ctrls = [(q, draw(st.integers(0, 1))) for q in ctrl_q]
        c.append(kind, t, theta, controls=ctrls)
    return c


@given(circuits())
def test_unitary_times_adjoint_is_identity(c):
    U = circuit_unitary(c)
    np.testing.assert_allclose(U @ circuit_unitary(c.adjoint()), np.eye(U.shape[0]), atol=1e-10)


@given(circuits())
def test_basis_columns_match_gate_products(c):
    # oracle: product of per-gate dense matrices built by explicit Kronecker embedding
    n = c.num_qubits
    dim = 1 << n
    total = np.eye(dim, dtype=complex)
    for g in c.gates:
        G = np.zeros((dim, dim), dtype=complex)
        m = g.matrix()
        for col in range(dim):
            if any(((col >> q) & 1) != v for q, v in g.controls):
                G[col, col] = 1
                continue
            if not g.targets:
                G[col, col] = m[0, 0]
                continue
            t = g.targets[0]
            b = (col >> t) & 1
            for nb in (0, 1):
                G[(col & ~(1 << t)) | (nb << t), col] += m[nb, b]
        total = G @ total
    np.testing.assert_allclose(circuit_unitary(c), total, atol=1e-10)


@given(circuits(), circuits())
def test_count_is_additive(a, b):
    n = max(a.num_qubits, b.num_qubits)
    wa, wb = a.remap(list(range(a.num_qubits)), n), b.remap(list(range(b.num_qubits)), n)
    assert count_gates(wa + wb) == count_gates(wb + wa) == count_gates(a) + count_gates(b)


@st.composite
def diagonal_heavy(draw):
    # long repeated diagonal runs so the fused path in apply_circuit is exercised
    n = draw(st.integers(1, 4))
    block = Circuit(n)
    for _ in range(draw(st.integers(4, 10))):
        kind = draw(st.sampled_from(["Z", "S", "Phase", "RotZExp", "GlobalPhase"]))
        theta = draw(st.floats(-math.pi, math.pi))
        if kind == "GlobalPhase":
            block.append(kind, None, theta)
            continue
        t = draw(st.integers(0, n - 1))
        ctrls = [(q, draw(st.integers(0, 1))) for q in range(n) if q != t and draw(st.booleans())]
        block.append(kind, t, theta, controls=ctrls)
    mixer = Circuit(n)
    mixer.append("H", draw(st.integers(0, n - 1)))
    return block + mixer + block + mixer + block


@given(diagonal_heavy(), st.integers(0, 2**32 - 1))
def test_fused_execution_matches_unitary(c, seed):
    psi = random_state(np.random.default_rng(seed), c.num_qubits)
    np.testing.assert_allclose(apply_circuit(psi, c), circuit_unitary(c) @ psi, atol=1e-10)
