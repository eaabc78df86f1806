import math

import numpy as np
import pytest

from qsvt_advdiff.arith import qft_circuit
from qsvt_advdiff.blockenc import BlockEncoding, encode_d2p_fourier, encode_d2p_modular, extract_block
from qsvt_advdiff.chebapprox import ChebPoly, build_targets
from qsvt_advdiff.circuit import Circuit, circuit_unitary, count_gates
from qsvt_advdiff.qsp import solve_angles
from qsvt_advdiff.qsvt import conjugate_encoding, conjugation_hoist, qsvt_parallel, qsvt_single
from qsvt_advdiff.stencil import GridSpec, cp_constant, lambda_k

from test_qsp import random_poly


def scalar_encoding(x):
    # one RotY on a lone ancilla: <0|U|0> = x
    return BlockEncoding(Circuit(1).append("RotY", 0, 2 * math.acos(x)), (0,), ())


def scalar_block(builder, x):
    q = builder(scalar_encoding(x))
    return complex(extract_block(q.as_encoding())[0, 0])


SAMPLES = np.linspace(-1, 1, 21)


@pytest.mark.parametrize("seed", range(10))
def test_convention_lock(seed):
    rng = np.random.default_rng(100 + seed)
    d = int(rng.integers(1, 61))
    q = random_poly(rng, d, "even" if d % 2 == 0 else "odd")
    seq = solve_angles(q)
    got = np.array([scalar_block(lambda e: qsvt_single(e, seq), x) for x in SAMPLES])
    np.testing.assert_allclose(got.real, q(SAMPLES), atol=1e-9)


def test_chebyshev_two():
    seq = solve_angles(ChebPoly([0, 0, 1.0], "even"))
    for x in (0.0, 0.5, -0.5, 1.0, -1.0):
        assert scalar_block(lambda e: qsvt_single(e, seq), x).real == pytest.approx(2 * x * x - 1, abs=1e-12)


def test_constant_edge():
    seq = solve_angles(ChebPoly([0.3], "even"))
    g = GridSpec(4.0, 3)
    q = qsvt_single(encode_d2p_fourier(1, g), seq)
    np.testing.assert_allclose(extract_block(q.as_encoding()).real, 0.3 * np.eye(8), atol=1e-12)


def _cpinots(circ, sig, enc):
    anc = set(enc.ancilla_qubits)
    return [g for g in circ.gates if g.kind == "X" and g.targets == (sig,)
            and {a for a, _ in g.controls} == anc and all(v == 0 for _, v in g.controls)]


def test_single_resource_audit():
    enc = encode_d2p_fourier(1, GridSpec(4.0, 3))
    seq = solve_angles(random_poly(np.random.default_rng(1), 9, "odd"))
    q = qsvt_single(enc, seq)
    d = seq.degree
    sig = q.signal_ancillas[0]
    assert q.queries == d
    assert len(_cpinots(q.circuit, sig, enc)) == 2 * d
    one_q = [g for g in q.circuit.gates if g.targets == (sig,) and not g.controls]
    assert len(one_q) == d + 2
    assert len(q.circuit.gates) == d * len(enc.circuit.gates) + 3 * d + 2


def test_parallel_exponential():
    qe, qo, s = build_targets(0.0, 3.0, 1e-10)
    pe = solve_angles(qe, degree=max(qe.degree, 2))
    po = solve_angles(qo, degree=pe.degree + 1)
    xs = np.linspace(-1, 1, 11)
    got = np.array([scalar_block(lambda e: qsvt_parallel(e, pe, po), x) for x in xs])
    np.testing.assert_allclose(got, 0.5 * s * np.exp(3j * xs), atol=1e-9)


def test_parallel_trivial_odd():
    qe = random_poly(np.random.default_rng(5), 8, "even")
    pe = solve_angles(qe)
    po = solve_angles(ChebPoly([0.0, 0.0], "odd"), degree=pe.degree + 1)
    xs = np.linspace(-1, 1, 7)
    got = np.array([scalar_block(lambda e: qsvt_parallel(e, pe, po), x) for x in xs])
    np.testing.assert_allclose(got, 0.5 * qe(xs), atol=1e-10)


def test_parallel_budget_and_audit():
    enc = encode_d2p_fourier(1, GridSpec(4.0, 8))
    qe, qo, _ = build_targets(0.0, 2.0, 1e-6)
    pe = solve_angles(qe, degree=max(qe.degree, 2))
    po = solve_angles(qo, degree=pe.degree + 1)
    q = qsvt_parallel(enc, pe, po)
    assert len(q.signal_ancillas) == 2
    assert q.circuit.num_qubits - 8 - 2 == 2
    assert len(_cpinots(q.circuit, q.signal_ancillas[0], enc)) == 2 * (pe.degree + 1)
    assert q.realized_scale == 0.5


@pytest.mark.parametrize("p", [1, 3])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_block_function_identity(p, n):
    g = GridSpec(4.0, n)
    enc = encode_d2p_fourier(p, g)
    rng = np.random.default_rng(10 * p + n)
    x = -cp_constant(p) * g.dx * lambda_k(p, g, np.arange(g.N))
    qe, qo = random_poly(rng, 20, "even", 0.7), random_poly(rng, 21, "odd", 0.7)
    pe, po = solve_angles(qe), solve_angles(qo)
    single = extract_block(qsvt_single(enc, po).as_encoding())
    np.testing.assert_allclose(single.real, np.diag(qo(x)), atol=1e-9)
    par = extract_block(qsvt_parallel(enc, pe, po).as_encoding())
    np.testing.assert_allclose(par, np.diag(0.5 * (qe(x) + 1j * qo(x))), atol=1e-9)


def test_hermitian_block():
    g = GridSpec(4.0, 3)
    seq = solve_angles(random_poly(np.random.default_rng(2), 12, "even"))
    blk = extract_block(qsvt_single(encode_d2p_modular(2, g), seq).as_encoding())
    np.testing.assert_allclose(blk.real, blk.real.T, atol=1e-10)


def test_hoist_identity():
    enc = encode_d2p_fourier(1, GridSpec(4.0, 3))
    q = qsvt_single(enc, solve_angles(ChebPoly([0, 0, 1.0], "even")))
    h = conjugation_hoist(q, Circuit(q.circuit.num_qubits))
    assert h.circuit.gates == q.circuit.gates


@pytest.mark.parametrize("n,d", [(3, 2), (4, 4)])
def test_hoist_vs_naive(n, d):
    g = GridSpec(4.0, n)
    enc = encode_d2p_fourier(1, g)
    seq = solve_angles(random_poly(np.random.default_rng(n), d, "even", 0.8), degree=d)
    f = qft_circuit(n, list(range(n)), enc.num_qubits)
    naive = qsvt_single(conjugate_encoding(enc, f), seq)
    fw = qft_circuit(n, list(range(n)), naive.circuit.num_qubits)
    hoisted = conjugation_hoist(qsvt_single(enc, seq), fw)
    assert count_gates(hoisted.circuit).total < count_gates(naive.circuit).total
    if naive.circuit.num_qubits <= 12:
        np.testing.assert_allclose(circuit_unitary(hoisted.circuit), circuit_unitary(naive.circuit), atol=1e-10)
