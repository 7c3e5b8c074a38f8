"""The boundary holonomy map as a Dirac morphism, and the induced quasi-Poisson bivector."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from src.dirac.courant import (
    CourantElement,
    structure_fiber_A,
    trivializing_section,
)
from src.errors import SolveError
from src.forms.omega import omega_at
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import boundary_differential, generating_matrix, generating_vector, stabilizer_basis
from src.utils.linalg import (
    antisymmetry_defect,
    block_metric,
    kernel,
    max_principal_angle,
    min_singular_value,
    span,
)

RESIDUAL_TOL = 1e-9
DEGENERACY_TOL = 1e-9
ANGLE_TOL = 1e-7


@dataclass(frozen=True)
class DiracMorphismReport:
    existence_residual: float
    uniqueness_sigma: float
    comorphism_defect: float
    failed_conditions: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failed_conditions


def _unit_vertex_vectors(num_vertices: int, dim: int):
    for vertex in range(num_vertices):
        for j in range(dim):
            xi = np.zeros((num_vertices, dim))
            xi[vertex, j] = 1.0
            yield xi


def verify_dirac_morphism(
    chart: ModuliChart, point: ModuliPoint, omega: np.ndarray | None = None
) -> DiracMorphismReport:
    """For each sigma(xi), solve dPhi v = anchor, omega v = dPhi^T nu and compare v with xi_M."""
    model = chart.model
    omega = omega_at(chart, point) if omega is None else omega
    values, dphi = boundary_differential(chart, point)
    edges = chart.info.boundary_edges
    metric = block_metric(model.gram, len(values))
    system = np.vstack([dphi, omega])
    uniqueness = min_singular_value(system)
    residual = 0.0
    comorphism = 0.0
    fiber = structure_fiber_A(model, values, edges, chart.num_vertices)
    for xi, element in zip(_unit_vertex_vectors(chart.num_vertices, model.dim), fiber.basis):
        anchor = element.vector.reshape(-1)
        covector = element.covector.reshape(-1)
        rhs = np.concatenate([anchor, dphi.T @ metric @ covector])
        solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        residual = max(residual, float(np.linalg.norm(system @ solution - rhs)))
        expected = generating_vector(chart, point, -xi).reshape(-1)
        comorphism = max(comorphism, float(np.linalg.norm(solution - expected)))
    failed: List[str] = []
    if residual > RESIDUAL_TOL or comorphism > 1e-7:
        failed.append("moment")
    if uniqueness <= DEGENERACY_TOL:
        failed.append("minimal_degeneracy")
    return DiracMorphismReport(residual, uniqueness, comorphism, tuple(failed))


@dataclass(frozen=True)
class RangeKernelReport:
    stabilizer_dim: int
    annihilator_angle: float  # ann(ran dPhi) against covector parts of sigma(stabilizer)
    isomorphism_angle: float  # omega(ker dPhi) against ann(orbit directions)
    isomorphism_condition: float

    @property
    def passed(self) -> bool:
        return self.annihilator_angle <= ANGLE_TOL and self.isomorphism_angle <= ANGLE_TOL


def range_kernel_props(chart: ModuliChart, point: ModuliPoint) -> RangeKernelReport:
    model = chart.model
    values, dphi = boundary_differential(chart, point)
    edges = chart.info.boundary_edges
    metric = block_metric(model.gram, len(values))
    stabilizer = stabilizer_basis(chart, point)
    covectors = [
        np.array(
            [trivializing_section(model, g, xi[e.target], xi[e.source])[1] for e, g in zip(edges, values)]
        ).reshape(-1)
        for xi in (column.reshape(chart.num_vertices, model.dim) for column in stabilizer.T)
    ]
    predicted = span(np.array(covectors).T) if covectors else np.zeros((len(values) * model.dim, 0))
    annihilator = kernel((metric @ dphi).T)

    omega = omega_at(chart, point)
    ker_dphi = kernel(dphi)
    image = omega @ ker_dphi
    sigma = np.linalg.svd(image, compute_uv=False) if image.size else np.array([1.0])
    condition = float(sigma[0] / sigma[-1]) if sigma[-1] > 0 else np.inf
    ann_orbit = kernel(generating_matrix(chart, point).T)
    return RangeKernelReport(
        stabilizer_dim=stabilizer.shape[1],
        annihilator_angle=max_principal_angle(span(annihilator), predicted),
        isomorphism_angle=max_principal_angle(span(image), span(ann_orbit)),
        isomorphism_condition=condition,
    )


def _complement_basis(model, values, edges) -> List[CourantElement]:
    """Basis of B: on a single edge, s(zeta, -zeta)."""
    basis = []
    for e, g in enumerate(values):
        for j in range(model.dim):
            zeta = np.zeros(model.dim)
            zeta[j] = 1.0
            vector = np.zeros((len(values), model.dim))
            covector = np.zeros((len(values), model.dim))
            vector[e], covector[e] = trivializing_section(model, g, zeta, -zeta)
            basis.append(CourantElement(vector, covector))
    return basis


@dataclass(frozen=True)
class QuasiPoissonResult:
    bivector: np.ndarray
    antisymmetry_defect: float
    transversality_sigma: float


def quasi_poisson_bivector(chart: ModuliChart, point: ModuliPoint) -> QuasiPoissonResult:
    """Bivector whose graph is the backward image of the complement B of A."""
    model = chart.model
    values, dphi = boundary_differential(chart, point)
    edges = chart.info.boundary_edges
    fiber = structure_fiber_A(model, values, edges, chart.num_vertices)
    complement = _complement_basis(model, values, edges)
    splitting = np.array([x.flat() for x in (*fiber.basis, *complement)])
    transversality = min_singular_value(splitting.T)
    scale = max(1.0, float(np.linalg.norm(splitting, 2)))
    if transversality <= DEGENERACY_TOL * scale:
        raise SolveError("A and its complement are not transverse at this point")

    vectors = np.array([x.vector.reshape(-1) for x in complement]).T
    covectors = np.array([x.covector.reshape(-1) for x in complement]).T
    metric = block_metric(model.gram, len(values))
    omega = omega_at(chart, point)
    n = chart.dimension
    preimage = kernel(np.hstack([dphi, -vectors]))
    v_part, c_part = preimage[:n], preimage[n:]
    mu_part = dphi.T @ metric @ covectors @ c_part - omega @ v_part
    if min_singular_value(mu_part) <= DEGENERACY_TOL:
        raise SolveError("Backward image is not the graph of a bivector")
    bivector = -v_part @ np.linalg.pinv(mu_part)
    return QuasiPoissonResult(bivector, antisymmetry_defect(bivector), transversality)
