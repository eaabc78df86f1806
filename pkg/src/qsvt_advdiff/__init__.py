"""Advection-diffusion solver built from QSVT circuits on a statevector simulator."""

__version__ = "0.1.0"

from .circuit import Circuit, Gate, GateCounts, apply_circuit, count_gates
from .reference import InitialCondition, exact_solution, semidiscrete_solution
from .solver import ProblemSpec, SolveReport, solve, solve_1d, solve_2d

__all__ = [
    "Circuit",
    "Gate",
    "GateCounts",
    "InitialCondition",
    "ProblemSpec",
    "SolveReport",
    "apply_circuit",
    "count_gates",
    "exact_solution",
    "semidiscrete_solution",
    "solve",
    "solve_1d",
    "solve_2d",
]
