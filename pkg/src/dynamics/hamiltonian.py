"""Hamiltonian vector fields and Poisson brackets of invariant functions."""
from __future__ import annotations

import numpy as np

from src.dynamics.loops import ScalarField
from src.errors import SolveError
from src.forms.omega import omega_at
from src.lie.calculus import move
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import boundary_differential

RESIDUAL_TOL = 1e-9


def hamiltonian_vector(
    chart: ModuliChart, point: ModuliPoint, f: ScalarField, tol: float = RESIDUAL_TOL
) -> np.ndarray:
    """Solve iota(X) omega = -df with dPhi(X) = 0; returns shape (generators, dim)."""
    omega = omega_at(chart, point)
    _, dphi = boundary_differential(chart, point)
    gradient = f.gradient(chart, point)
    system = np.vstack([omega, dphi])
    rhs = np.concatenate([gradient, np.zeros(dphi.shape[0])])
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    residual = np.linalg.norm(system @ solution - rhs)
    if residual > tol * max(1.0, np.linalg.norm(rhs)):
        raise SolveError(f"Hamiltonian vector system inconsistent, residual {residual:.3e}")
    return solution.reshape(chart.n_generators, chart.model.dim)


def poisson_bracket_numeric(chart: ModuliChart, point: ModuliPoint, f: ScalarField, g: ScalarField) -> float:
    """{f, g} = omega(X_f, X_g)."""
    omega = omega_at(chart, point)
    x_f = hamiltonian_vector(chart, point, f).reshape(-1)
    x_g = hamiltonian_vector(chart, point, g).reshape(-1)
    return float(x_f @ omega @ x_g)


class BracketField:
    """The scalar field {f, g}, with gradient by central differences."""

    def __init__(self, f: ScalarField, g: ScalarField, fd_step: float = 1e-5) -> None:
        self.f = f
        self.g = g
        self.fd_step = fd_step

    def value(self, chart: ModuliChart, point: ModuliPoint) -> float:
        return poisson_bracket_numeric(chart, point, self.f, self.g)

    def derivative_along(self, chart: ModuliChart, point: ModuliPoint, direction: np.ndarray) -> float:
        ahead = move(chart.model, point, direction, self.fd_step)
        behind = move(chart.model, point, direction, -self.fd_step)
        return (self.value(chart, ahead) - self.value(chart, behind)) / (2.0 * self.fd_step)


def jacobi_defect(
    chart: ModuliChart, point: ModuliPoint, f: ScalarField, g: ScalarField, h: ScalarField, step: float = 1e-5
) -> float:
    """|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| with {a, k} = dk(X_a)."""
    total = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        x_a = hamiltonian_vector(chart, point, a)
        total += BracketField(b, c, step).derivative_along(chart, point, x_a)
    return abs(total)
