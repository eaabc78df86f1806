import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from qsvt_advdiff.reference import (
    InitialCondition,
    bound_constant,
    energy_bound,
    error_metric,
    exact_solution,
    l2_error_bound,
    l2_norm_grid,
    plan_grid_and_check,
    semidiscrete_solution,
)
from qsvt_advdiff.stencil import GridSpec, accuracy_constants, dense_operator


def cos_mode(k, amp=1.0, N0=16):
    c = np.zeros(N0, dtype=complex)
    c[k] = c[-k] = amp / 2
    return InitialCondition("literal_fourier", {"coeffs": c})


def test_catalog_values():
    x = np.array([0.0, 1.0, 5 / 3, 2.5])
    np.testing.assert_allclose(InitialCondition("gaussian")(x), np.exp(-10 * (x - 5 / 3) ** 2))
    np.testing.assert_allclose(InitialCondition("sine_sum")(x),
                               1 + 0.5 * np.sin(1.5 * np.pi * x) + 0.5 * np.sin(5.5 * np.pi * x))
    np.testing.assert_allclose(InitialCondition("wavepacket")(x),
                               0.6 + 0.5 * np.exp(-5 * (x - 2) ** 2) * np.cos(8.5 * np.pi * (x - 2)))
    y = np.array([0.5, 2.0])
    np.testing.assert_allclose(InitialCondition("gaussian2d")(x, y),
                               np.exp(-7 * (x[None] - 5 / 3) ** 2 - 7 * (y[:, None] - 2) ** 2))
    np.testing.assert_allclose(InitialCondition("mixed_wave")(x, y),
                               np.exp(-7 * (x[None] - 2) ** 2) * (1 + np.sin(2.5 * np.pi * y[:, None])))


def test_rectangle_coefficients():
    a = InitialCondition("rectangle").coefficients(8)
    k = np.fft.fftfreq(16, 1 / 16)
    ref = np.where(k == 0, 0.5, (1 - (-1.0) ** k) / (2j * np.pi * np.where(k == 0, 1, k)))
    np.testing.assert_allclose(a, ref, atol=1e-15)


def test_rectangle_grid_samples():
    s = InitialCondition("rectangle").samples(GridSpec(4.0, 3))
    np.testing.assert_array_equal(s, [1, 1, 1, 1, 0, 0, 0, 0])


def test_exact_examples():
    for ic in (InitialCondition("gaussian"), InitialCondition("sine_sum")):
        np.testing.assert_allclose(exact_solution(ic, 1.0, 0.1, 4.0, 0.0, 5), ic.samples(GridSpec(4.0, 5)))
    const = InitialCondition("literal_fourier", {"coeffs": [2.0, 0.0]})
    np.testing.assert_allclose(exact_solution(const, 1.3, 0.2, 4.0, 0.7, 4), 2.0, atol=1e-14)
    g = InitialCondition("gaussian")
    np.testing.assert_allclose(exact_solution(g, 1.0, 0.0, 4.0, 4.0, 6), g.samples(GridSpec(4.0, 6)), atol=1e-13)


def test_exact_fourier_route_matches_closed_form():
    g = InitialCondition("gaussian")
    fourier = exact_solution(g, 1.0, 1e-14, 4.0, 1.3, 6)
    closed = exact_solution(g, 1.0, 0.0, 4.0, 1.3, 6)
    np.testing.assert_allclose(fourier, closed, atol=1e-8)


def test_exact_diffusion_single_mode():
    ic = cos_mode(3)
    nu, t = 0.05, 0.8
    w = 2 * np.pi / 4 * 3
    x = GridSpec(4.0, 5).x
    np.testing.assert_allclose(exact_solution(ic, 0.7, nu, 4.0, t, 5),
                               np.exp(-nu * w * w * t) * np.cos(w * (x - 0.7 * t)), atol=1e-13)


@pytest.mark.parametrize("variant,which", [("D2", "D2p_second"), ("Dsq", "D2p_squared")])
def test_semidiscrete_vs_expm(variant, which):
    g = GridSpec(4.0, 5)
    ic = InitialCondition("wavepacket")
    c, nu, t = 0.8, 0.03, 0.6
    L = -c * dense_operator(2, g, "D2p") + nu * dense_operator(2, g, which)
    ref = (expm(L * t) @ ic.samples(g)).real
    np.testing.assert_allclose(semidiscrete_solution(ic, c, nu, 2, g, t, variant), ref, atol=1e-10)


def test_semidiscrete_t0_and_high_order():
    g = GridSpec(4.0, 6)
    ic = InitialCondition("sine_sum")
    np.testing.assert_allclose(semidiscrete_solution(ic, 1.0, 0.02, 3, g, 0.0), ic.samples(g), atol=1e-14)
    errs = [error_metric(semidiscrete_solution(ic, 1.0, 0.02, p, g, 0.5), exact_solution(ic, 1.0, 0.02, 4.0, 0.5, 6))
            for p in (1, 4, 12)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-6


def test_error_metric():
    a = np.linspace(0, 1, 10)
    assert error_metric(a, a) == 0
    b = a.copy()
    b[4] += 1e-3
    assert error_metric(a, b) == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        error_metric(a, a[:-1])


def test_norm_bridge(rng):
    g = GridSpec(4.0, 5)
    c = np.zeros(g.N, dtype=complex)
    c[1:g.N // 2] = rng.normal(size=g.N // 2 - 1) + 1j * rng.normal(size=g.N // 2 - 1)
    c[-(g.N // 2) + 1:] = np.conj(c[1:g.N // 2][::-1])
    ic = InitialCondition("literal_fourier", {"coeffs": c})
    fine = ic.samples(GridSpec(4.0, 11))
    quad = math.sqrt(np.sum(fine ** 2) * 4.0 / fine.size)
    assert l2_norm_grid(ic.samples(g), g.dx) == pytest.approx(quad, rel=1e-12)


def test_single_mode_bound():
    k, p, t = 2, 2, 0.9
    ic = cos_mode(k)
    g = GridSpec(4.0, 4)
    rep = l2_error_bound(ic, 1.0, 0.0, p, g, t, "D2")
    wk = 2 * np.pi / 4 * k
    C = accuracy_constants(p)[0]
    # cos(w x) = (e_k + e_-k)/2 with ||e_k|| = sqrt(d)
    assert rep.l2_bound == pytest.approx(t * C * wk ** (2 * p + 1) * g.dx ** (2 * p) * math.sqrt(4.0 / 2))


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("variant", ["D2", "Dsq"])
def test_bound_holds_sine_sum(p, variant):
    ic = InitialCondition("sine_sum")
    g = GridSpec(4.0, 6)
    c, nu, t = 1.0, 0.02, 0.3
    diff = semidiscrete_solution(ic, c, nu, p, g, t, variant) - exact_solution(ic, c, nu, 4.0, t, 6)
    rep = l2_error_bound(ic, c, nu, p, g, t, variant)
    assert l2_norm_grid(diff, g.dx) <= rep.l2_bound


@pytest.mark.parametrize("p", [1, 2, 3])
def test_bound_scales_with_grid(p):
    ic = InitialCondition("sine_sum")
    b = [l2_error_bound(ic, 1.0, 0.0, p, GridSpec(4.0, n), 1.0).l2_bound for n in (6, 7, 8)]
    assert b[0] / b[1] == pytest.approx(2 ** (2 * p), rel=1e-12)
    assert b[1] / b[2] == pytest.approx(2 ** (2 * p), rel=1e-12)


def test_plan_clamps_to_native():
    ic = InitialCondition("sine_sum")
    rep = plan_grid_and_check(ic, 1.0, 0.0, 4.0, 1e-4, 2, 0.999)
    assert rep.planned_n == math.ceil(math.log2(ic.native_resolution()))
    assert np.isfinite(rep.complexity_estimate) and rep.complexity_estimate > 0


@given(st.floats(1e-9, 1e-3), st.integers(1, 3))
def test_plan_monotone_in_eps(eps, p):
    ic = InitialCondition("gaussian")
    n1 = plan_grid_and_check(ic, 1.0, 0.0, 4.0, 1.0, p, eps).planned_n
    n2 = plan_grid_and_check(ic, 1.0, 0.0, 4.0, 1.0, p, eps / 2 ** (2 * p)).planned_n
    assert n1 <= n2 <= n1 + 1


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9])
def test_plan_vs_bisection(eps):
    ic = InitialCondition("sine_sum")
    p, c, nu, T, d = 2, 1.0, 0.02, 0.3, 4.0
    rep = plan_grid_and_check(ic, c, nu, d, T, p, eps)
    B = bound_constant(ic, c, nu, p)

    def ok(n):
        return rep.tau * (d / 2 ** n) ** (2 * p) * B <= eps / 2

    lo, hi = 0, 64
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if ok(mid) else (mid, hi)
    n0 = math.ceil(math.log2(ic.native_resolution()))
    assert rep.planned_n == max(hi, n0)
    assert rep.B == pytest.approx(B)


def test_technical_flags_are_booleans():
    rep = plan_grid_and_check(InitialCondition("gaussian"), 1.0, 0.01, 4.0, 4.0, 1, 1e-3)
    assert all(isinstance(v, bool) for v in rep.technical_ok)
    assert set(rep.as_dict()) == {"B", "tau", "mu1", "l2_bound", "technical_ok", "planned_n", "complexity_estimate"}


@pytest.mark.parametrize("kind", ["gaussian", "sine_sum", "wavepacket"])
@pytest.mark.parametrize("nu,t", [(0.05, 0.5), (0.2, 1.0), (1e-3, 3.0)])
def test_energy_estimate(kind, nu, t):
    ic = InitialCondition(kind)
    u = exact_solution(ic, 1.0, nu, 4.0, t, 10)
    lhs = l2_norm_grid(u - u.mean(), 4.0 / u.size)
    assert lhs <= energy_bound(ic, nu, t) * (1 + 1e-10)


def test_exponential_difference_inequality(rng):
    z = rng.normal(size=10_000) * 3 + 1j * rng.normal(size=10_000) * 5
    w = rng.normal(size=10_000) * 3 + 1j * rng.normal(size=10_000) * 5
    lhs = np.abs(np.exp(z) - np.exp(w))
    rhs = np.exp(np.maximum(z.real, w.real)) * np.abs(z - w)
    assert np.all(lhs <= rhs * (1 + 1e-12))


def test_literal_samples_roundtrip():
    g = GridSpec(4.0, 4)
    vals = InitialCondition("sine_sum").samples(g)
    lit = InitialCondition("literal_samples", {"values": vals})
    np.testing.assert_allclose(lit.samples(g), vals)
    np.testing.assert_allclose(lit.samples(GridSpec(4.0, 6))[::4], vals, atol=1e-12)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        InitialCondition("triangle")
    with pytest.raises(ValueError):
        InitialCondition("literal_samples")
    with pytest.raises(ValueError):
        exact_solution(InitialCondition("gaussian"), 1.0, 0.0, 4.0, -1.0, 4)
    with pytest.raises(ValueError):
        plan_grid_and_check(InitialCondition("gaussian"), 1.0, 0.0, 4.0, 1.0, 1, 1.5)
