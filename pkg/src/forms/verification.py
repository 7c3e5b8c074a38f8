"""Numerical checks of the defining properties of the moduli 2-form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import SolveError
from src.forms.omega import omega_at
from src.lie.calculus import eta_at, exterior_derivative
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import boundary_differential, generating_matrix, generating_vector, stabilizer_basis
from src.utils.linalg import kernel, max_principal_angle, min_singular_value, numerical_rank, span

KERNEL_ANGLE_TOL = 1e-7
DEGENERACY_TOL = 1e-9


def verify_d_omega(
    chart: ModuliChart, point: ModuliPoint, x: np.ndarray, y: np.ndarray, z: np.ndarray, step: float = 1e-4
) -> float:
    """|d omega + Phi*eta| on three tangents."""
    model = chart.model

    def form(at: Sequence[np.ndarray], a: np.ndarray, b: np.ndarray) -> float:
        return float(a.reshape(-1) @ omega_at(chart, tuple(at)) @ b.reshape(-1))

    d_omega = exterior_derivative(model, form, point, x, y, z, step)
    _, differential = boundary_differential(chart, point)
    pulled = 0.0
    for e in range(len(chart.boundary_words)):
        rows = differential[e * model.dim:(e + 1) * model.dim]
        pulled += eta_at(model, rows @ x.reshape(-1), rows @ y.reshape(-1), rows @ z.reshape(-1))
    return abs(d_omega + pulled)


def moment_pairing(chart: ModuliChart, point: ModuliPoint, xi: np.ndarray, v: np.ndarray) -> float:
    """1/2 sum over boundary edges of <Ad_Phi u, xi_t> + <u, xi_s>, u = dPhi(v)."""
    model = chart.model
    values, differential = boundary_differential(chart, point)
    total = 0.0
    for e, edge in enumerate(chart.info.boundary_edges):
        u = differential[e * model.dim:(e + 1) * model.dim] @ np.asarray(v).reshape(-1)
        total += model.inner(model.adjoint(values[e], u), xi[edge.target]) + model.inner(u, xi[edge.source])
    return 0.5 * total


def verify_moment(chart: ModuliChart, point: ModuliPoint, xi: np.ndarray, v: np.ndarray) -> float:
    """|omega(xi_M, v) + moment pairing|, xi_M the fundamental field of xi."""
    xi = np.asarray(xi)
    fundamental = generating_vector(chart, point, -xi).reshape(-1)
    lhs = float(fundamental @ omega_at(chart, point) @ np.asarray(v).reshape(-1))
    return abs(lhs + moment_pairing(chart, point, xi, v))


@dataclass(frozen=True)
class OmegaReport:
    omega: np.ndarray
    dphi: np.ndarray
    kernel_basis: np.ndarray
    rank_dphi: int
    stabilizer_dim: int
    min_degeneracy_sigma: float
    kernel_angle: float
    vertex_algebra_dim: int

    @property
    def rank_identity_ok(self) -> bool:
        return self.rank_dphi + self.stabilizer_dim == self.vertex_algebra_dim

    @property
    def passed(self) -> bool:
        return (
            self.rank_identity_ok
            and self.kernel_angle <= KERNEL_ANGLE_TOL
            and self.min_degeneracy_sigma > DEGENERACY_TOL
        )


def edge_constraint_matrix(chart: ModuliChart, values: Sequence[np.ndarray]) -> np.ndarray:
    """Rows xi_t(e) + Ad_Phi_e xi_s(e), one block per boundary edge."""
    model = chart.model
    out = np.zeros((len(values) * model.dim, chart.num_vertices * model.dim))
    for e, (edge, value) in enumerate(zip(chart.info.boundary_edges, values)):
        rows = slice(e * model.dim, (e + 1) * model.dim)
        out[rows, edge.target * model.dim:(edge.target + 1) * model.dim] += np.eye(model.dim)
        out[rows, edge.source * model.dim:(edge.source + 1) * model.dim] += model.adjoint_matrix(value)
    return out


def kernel_report(chart: ModuliChart, point: ModuliPoint) -> OmegaReport:
    omega = omega_at(chart, point)
    values, dphi = boundary_differential(chart, point)
    stabilizer = stabilizer_basis(chart, point)
    kernel_basis = kernel(omega)
    predicted = span(-generating_matrix(chart, point) @ kernel(edge_constraint_matrix(chart, values)))
    return OmegaReport(
        omega=omega,
        dphi=dphi,
        kernel_basis=kernel_basis,
        rank_dphi=numerical_rank(dphi),
        stabilizer_dim=stabilizer.shape[1],
        min_degeneracy_sigma=min_singular_value(np.vstack([omega, dphi])),
        kernel_angle=max_principal_angle(span(kernel_basis), predicted),
        vertex_algebra_dim=chart.num_vertices * chart.model.dim,
    )


@dataclass(frozen=True)
class ReductionReport:
    regular: bool
    passed: bool
    kernel_angle: float
    kernel_dim: int
    orbit_dim: int


def reduction_kernel_check(
    chart: ModuliChart,
    point: ModuliPoint,
    capped: Sequence[int] | None = None,
    level_tol: float = 1e-8,
) -> ReductionReport:
    """On the level set where the capped boundary holonomies are trivial, the
    kernel of the restricted form should be exactly the orbit directions."""
    model = chart.model
    capped = list(range(len(chart.boundary_words))) if capped is None else list(capped)
    values, dphi = boundary_differential(chart, point)
    for e in capped:
        defect = np.linalg.norm(values[e] - model.identity())
        if defect > level_tol:
            raise ValueError(f"Point is off the level set: boundary edge {e} holonomy is {defect:.3e} from 1")
    orbit = span(generating_matrix(chart, point))
    if stabilizer_basis(chart, point).shape[1] > 0:
        return ReductionReport(False, False, float(np.pi / 2), 0, orbit.shape[1])
    rows = np.vstack([dphi[e * model.dim:(e + 1) * model.dim] for e in capped])
    tangent = kernel(rows)
    omega = omega_at(chart, point)
    restricted_kernel = span(tangent @ kernel(tangent.T @ omega @ tangent))
    angle = max_principal_angle(restricted_kernel, orbit)
    return ReductionReport(True, angle <= KERNEL_ANGLE_TOL, angle, restricted_kernel.shape[1], orbit.shape[1])


def project_to_level(
    chart: ModuliChart,
    point: ModuliPoint,
    capped: Sequence[int] | None = None,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> ModuliPoint:
    """Newton steps g -> g exp(v) until the capped boundary holonomies are the identity."""
    model = chart.model
    capped = list(range(len(chart.boundary_words))) if capped is None else list(capped)
    current = tuple(point)
    for _ in range(max_iter):
        values, dphi = boundary_differential(chart, current)
        target = np.concatenate([model.log(model.inverse(values[e])) for e in capped])
        if np.linalg.norm(target) <= tol:
            return current
        rows = np.vstack([dphi[e * model.dim:(e + 1) * model.dim] for e in capped])
        step, *_ = np.linalg.lstsq(rows, target, rcond=None)
        step = step.reshape(chart.n_generators, model.dim)
        current = tuple(model.retract(g @ model.exp(x)) for g, x in zip(current, step))
    raise SolveError(f"Could not reach the level set in {max_iter} Newton steps")
