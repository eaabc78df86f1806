"""End-to-end pipelines: plan, encode, transform, simulate, post-select, rescale.

The 1D pipeline works in the Fourier frame.  The phase-adder encoding of
``D_2p`` is diagonal there, so the QSVT circuit acts on ``F^dag u_0 / ||u_0||``
(loaded directly as amplitudes) and a single trailing QFT returns to the grid.
Initial-state loading is classical and excluded from the gate counts.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import qft_circuit
from .blockenc import compose_encodings, encode_d2p_fourier, extract_block, widen
from .chebapprox import ChebPoly, DegreePlan, build_targets, plan_degrees
from .circuit import GateCounts, apply_circuit, count_gates, project_ancilla_zero
from .qsp import MAX_DEGREE, solve_angles
from .qsvt import QsvtCircuit, conjugation_hoist, qsvt_parallel, qsvt_single
from .reference import (
    InitialCondition,
    TheoryReport,
    error_metric,
    exact_solution,
    l2_error_bound,
    plan_grid_and_check,
    semidiscrete_solution,
)
from .stateprep import ancilla_count
from .stencil import GridSpec, cp_constant, lambda_k

MAX_QUBITS = 26


class SolverError(RuntimeError):
    """Raised when a spec cannot be run (budget, planning, or numeric failure)."""


@dataclass
class ProblemSpec:
    """Advection-diffusion problem u_t + c u_x = nu u_xx on a periodic domain.

    Parameters
    ----------
    dim : 1 or 2.
    c : advection speed, a scalar in 1D or an (x, y) pair in 2D.
    nu : diffusivity.
    d : domain length per axis.
    T : final time.
    p : stencil half-order (order 2p).
    n : spatial qubits per axis, or ``"auto"`` to plan from ``eps_target``.
    ic : initial condition.
    eps_poly : uniform tolerance of the polynomial approximation.
    target_scale : extra factor (<= 1) applied to the target polynomials and
        divided back out at readout.
    eps_target : L^2 accuracy used when ``n == "auto"``.
    angle_tol : residual tolerance of the phase solver.
    """

    dim: int = 1
    c: float | tuple = 1.0
    nu: float = 0.0
    d: float = 4.0
    T: float = 1.0
    p: int = 1
    n: int | str = 6
    ic: InitialCondition = field(default_factory=lambda: InitialCondition("gaussian"))
    eps_poly: float = 1e-8
    target_scale: float = 1.0
    eps_target: float = 1e-3
    angle_tol: float = 1e-12

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.T < 0:
            raise ValueError("T must be nonnegative")
        if self.nu < 0:
            raise ValueError("nu must be nonnegative")
        if self.d <= 0:
            raise ValueError("d must be positive")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if not 0 < self.eps_poly < 1:
            raise ValueError("eps_poly must lie in (0, 1)")
        if not 0 < self.target_scale <= 1:
            raise ValueError("target_scale must lie in (0, 1]")
        if self.ic.dim != self.dim:
            raise ValueError(f"initial condition {self.ic.kind!r} is not {self.dim}D")
        cvec = np.atleast_1d(np.asarray(self.c, dtype=float))
        if self.dim == 1 and cvec.size != 1:
            raise ValueError("1D problems take a scalar c")
        if self.dim == 2 and cvec.size not in (1, 2):
            raise ValueError("2D problems take c as a pair")
        if self.n != "auto":
            if not isinstance(self.n, (int, np.integer)) or self.n < 1:
                raise ValueError("n must be a positive integer or 'auto'")
            if self.n < ancilla_count(self.p):
                raise ValueError(f"n={self.n} is below the ancilla width m={ancilla_count(self.p)}")

    @property
    def velocity(self) -> tuple[float, ...]:
        cvec = np.atleast_1d(np.asarray(self.c, dtype=float))
        if self.dim == 2 and cvec.size == 1:
            cvec = np.repeat(cvec, 2)
        return tuple(float(v) for v in cvec)

    def resolved_n(self) -> int:
        if self.n != "auto":
            return int(self.n)
        if self.dim != 1:
            raise SolverError("automatic grid planning is available in 1D only")
        rep = plan_grid_and_check(self.ic, self.velocity[0], self.nu, self.d, self.T, self.p, self.eps_target)
        return max(rep.planned_n, ancilla_count(self.p))


@dataclass
class SolveReport:
    grid_solution: np.ndarray
    error_vs_exact: float
    error_vs_semidiscrete: float
    success_rate: float
    gate_counts: GateCounts
    total_qubits: int
    degrees: DegreePlan
    theory: TheoryReport | None
    predicted_success: float = float("nan")
    exact: np.ndarray | None = None
    semidiscrete: np.ndarray | None = None
    n: int = 0
    queries: int = 0


@dataclass
class AxisPlan:
    """Everything needed to build one axis' QSVT circuit."""

    grid: GridSpec
    p: int
    c: float
    M1: float
    M2: float
    degrees: DegreePlan
    q_even: ChebPoly
    q_odd: ChebPoly
    safety: float
    scale: float

    @property
    def parallel(self) -> bool:
        return self.M2 != 0

    def symbol(self) -> np.ndarray:
        """Polynomial gain on each Fourier mode, including realized and target scales."""
        x = block_diagonal(self.grid, self.p)
        g = self.q_even(x) + (1j * self.q_odd(x) if self.parallel else 0)
        return (0.5 if self.parallel else 1.0) * g


@functools.lru_cache(maxsize=None)
def fourier_block_sign() -> int:
    """Sign s with block(encode_d2p_fourier) = s c_p dx diag(lambda_k), found by extraction."""
    grid = GridSpec(4.0, 3)
    blk = np.diag(extract_block(encode_d2p_fourier(1, grid)))
    ref = cp_constant(1) * grid.dx * lambda_k(1, grid, np.arange(grid.N))
    if np.allclose(blk, -ref, atol=1e-12):
        return -1
    if np.allclose(blk, ref, atol=1e-12):
        return 1
    raise SolverError("Fourier-frame encoding does not match either sign of the symbol")


def block_diagonal(grid: GridSpec, p: int) -> np.ndarray:
    """Diagonal of the Fourier-frame block, x_k = s c_p dx lambda_k."""
    return fourier_block_sign() * cp_constant(p) * grid.dx * lambda_k(p, grid, np.arange(grid.N))


def plan_axis(spec: ProblemSpec, c: float, n: int) -> AxisPlan:
    grid = GridSpec(spec.d, n)
    beta = cp_constant(spec.p) * grid.dx
    M1 = spec.nu * spec.T / beta ** 2
    # the block carries s c_p dx lambda; flip the odd part so the phase is -i c T lambda
    M2 = -fourier_block_sign() * c * spec.T / beta
    sgn = 1.0
    if M2 < 0:
        M2, sgn = -M2, -1.0
    degrees = plan_degrees(M1, M2, spec.eps_poly)
    if degrees.total_degree + 1 > MAX_DEGREE:
        raise SolverError(f"polynomial degree {degrees.total_degree} exceeds the solver limit {MAX_DEGREE}")
    q_even, q_odd, safety = build_targets(M1, M2, spec.eps_poly, degrees)
    q_even = q_even.scaled(spec.target_scale)
    q_odd = q_odd.scaled(spec.target_scale * sgn)
    return AxisPlan(grid, spec.p, c, M1, M2, degrees, q_even, q_odd, safety, spec.target_scale)


def build_axis_circuit(spec: ProblemSpec, plan: AxisPlan, cache_dir=None) -> QsvtCircuit:
    """QSVT on the Fourier-frame encoding followed by one QFT on the system register."""
    enc = encode_d2p_fourier(spec.p, plan.grid)
    if plan.parallel:
        de = max(plan.degrees.even_degree, 2)
        phi_e = solve_angles(plan.q_even, spec.angle_tol, cache_dir, degree=de)
        phi_o = solve_angles(plan.q_odd, spec.angle_tol, cache_dir, degree=de + 1)
        q = qsvt_parallel(enc, phi_e, phi_o)
    else:
        phi = solve_angles(plan.q_even, spec.angle_tol, cache_dir, degree=max(plan.degrees.even_degree, 2))
        q = qsvt_single(enc, phi)
    f = qft_circuit(plan.grid.n, list(range(plan.grid.n)), q.circuit.num_qubits)
    return conjugation_hoist(q, f, include_prefix=False)


def _fourier_load(u0: np.ndarray) -> np.ndarray:
    """F^dag u0 for the QFT convention F|k> = N^{-1/2} sum_j e^{2 pi i jk/N} |j>."""
    if u0.ndim == 1:
        return np.fft.fft(u0) / math.sqrt(u0.size)
    return (np.fft.fft2(u0) / u0.shape[0]).reshape(-1)


def success_rate_prediction(spec: ProblemSpec, degrees: DegreePlan | None = None) -> float:
    """||realized_scale q(V) F^dag u0||^2 / ||u0||^2 from the spectral symbol alone."""
    n = spec.resolved_n()
    plans = [plan_axis(spec, c, n) for c in spec.velocity]
    if degrees is not None and spec.dim == 1:
        plans[0] = _with_degrees(spec, plans[0], degrees)
    grid = plans[0].grid
    u0 = spec.ic.samples(grid)
    a = _fourier_load(u0)
    if spec.dim == 1:
        g = plans[0].symbol()
    else:
        g = np.outer(plans[1].symbol(), plans[0].symbol()).reshape(-1)
    return float(np.sum(np.abs(g * a) ** 2) / np.sum(np.abs(a) ** 2))


def _with_degrees(spec: ProblemSpec, plan: AxisPlan, degrees: DegreePlan) -> AxisPlan:
    q_even, q_odd, safety = build_targets(plan.M1, plan.M2, spec.eps_poly, degrees)
    sgn = 1.0 if -fourier_block_sign() * plan.c >= 0 else -1.0
    new = dataclasses.replace(plan, degrees=degrees, q_even=q_even.scaled(spec.target_scale),
                              q_odd=q_odd.scaled(spec.target_scale * sgn), safety=safety)
    return new


def _check_budget(width: int) -> None:
    if width > MAX_QUBITS:
        raise SolverError(f"circuit needs {width} qubits; the budget is {MAX_QUBITS}")


def planned_width(spec: ProblemSpec, n: int) -> int:
    """Total qubits: system registers, LCU register, signal qubits, and the 2D flag."""
    signal = 2 if any(c != 0 and spec.T > 0 for c in spec.velocity) else 1
    return spec.dim * n + ancilla_count(spec.p) + signal + (1 if spec.dim == 2 else 0)


def dry_run(spec: ProblemSpec) -> dict:
    """Plan without building phases or simulating."""
    n = spec.resolved_n()
    plans = [plan_axis(spec, c, n) for c in spec.velocity]
    width = planned_width(spec, n)
    return {
        "n": n,
        "degrees": [dataclasses.asdict(pl.degrees) | {"even_degree": pl.degrees.even_degree,
                                                     "odd_degree": pl.degrees.odd_degree}
                    for pl in plans],
        "total_qubits": width,
        "predicted_success": success_rate_prediction(spec),
    }


def build_circuits(spec: ProblemSpec, cache_dir=None):
    """(plans, encoding of the full transform, ancilla qubits, system qubits)."""
    n = spec.resolved_n()
    _check_budget(planned_width(spec, n))
    plans = [plan_axis(spec, c, n) for c in spec.velocity]
    circs = [build_axis_circuit(spec, pl, cache_dir) for pl in plans]
    if spec.dim == 1:
        q = circs[0]
        _check_budget(q.circuit.num_qubits)
        return plans, q.as_encoding(), q.queries
    # axes on different paths differ by one idle signal qubit; pad to the wider one
    width = n + max(q.circuit.num_qubits for q in circs)
    _check_budget(width + 1)
    encs = []
    for axis, q in enumerate(circs):
        mapping = [s + axis * n if s < n else s + n for s in range(q.circuit.num_qubits)]
        wide = widen(q.as_encoding(), mapping, width)
        # each axis encodes A (x) I on the full 2n-qubit system register
        encs.append(dataclasses.replace(wide, system_qubits=tuple(range(2 * n))))
    full = compose_encodings(encs[1], encs[0])
    return plans, full, circs[0].queries + circs[1].queries


def solve(spec: ProblemSpec, cache_dir=None) -> SolveReport:
    return solve_1d(spec, cache_dir) if spec.dim == 1 else solve_2d(spec, cache_dir)


def _run(spec: ProblemSpec, cache_dir=None) -> SolveReport:
    plans, enc, queries = build_circuits(spec, cache_dir)
    grid = plans[0].grid
    u0 = spec.ic.samples(grid)
    norm0 = float(np.linalg.norm(u0))
    if norm0 == 0:
        raise SolverError("initial condition vanishes on the grid")
    amp = _fourier_load(u0) / norm0
    state = np.zeros(1 << enc.num_qubits, dtype=complex)
    state[: amp.size] = amp
    state = apply_circuit(state, enc.circuit, inplace=True)
    sub, prob = project_ancilla_zero(state, enc.ancilla_qubits, enc.num_qubits)
    gain = enc.scale * np.prod([pl.safety * pl.scale for pl in plans])
    out = np.real(sub) * norm0 / gain
    if spec.dim == 2:
        out = out.reshape(grid.N, grid.N)
    exact = exact_solution(spec.ic, spec.c, spec.nu, spec.d, spec.T, grid.n)
    semi = semidiscrete_solution(spec.ic, spec.c, spec.nu, spec.p, grid, spec.T, "Dsq")
    theory = None
    if spec.dim == 1:
        theory = plan_grid_and_check(spec.ic, spec.velocity[0], spec.nu, spec.d, spec.T, spec.p, spec.eps_target)
        bound = l2_error_bound(spec.ic, spec.velocity[0], spec.nu, spec.p, grid, spec.T, "Dsq")
        theory = dataclasses.replace(theory, l2_bound=bound.l2_bound)
    return SolveReport(
        grid_solution=out,
        error_vs_exact=error_metric(out, exact),
        error_vs_semidiscrete=error_metric(out, semi),
        success_rate=prob,
        gate_counts=count_gates(enc.circuit),
        total_qubits=enc.num_qubits,
        degrees=plans[0].degrees,
        theory=theory,
        predicted_success=success_rate_prediction(spec),
        exact=exact,
        semidiscrete=semi,
        n=grid.n,
        queries=queries,
    )


def solve_1d(spec: ProblemSpec, cache_dir=None) -> SolveReport:
    """Run the 1D pipeline; see the module docstring."""
    if spec.dim != 1:
        raise SolverError("solve_1d needs a 1D spec")
    return _run(spec, cache_dir)


def solve_2d(spec: ProblemSpec, cache_dir=None) -> SolveReport:
    """Run one QSVT per axis on a shared ancilla register, composed with one flag qubit.

    ``theory`` is ``None``: the error bound is stated for one dimension.
    """
    if spec.dim != 2:
        raise SolverError("solve_2d needs a 2D spec")
    return _run(spec, cache_dir)


def gate_report(spec: ProblemSpec, cache_dir=None) -> tuple[GateCounts, int]:
    """(gate counts, total qubits) without simulating."""
    _, enc, _ = build_circuits(spec, cache_dir)
    return count_gates(enc.circuit), enc.num_qubits
