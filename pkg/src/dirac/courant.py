"""Fibres of the twisted Courant algebroid over G^E and the Dirac structure A.

Elements are pairs (vector part, covector part), both stored as Lie algebra
coordinates per edge; covectors are identified with vectors through the metric.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.errors import GroupConstraintError
from src.lie.models import LieGroupModel
from src.surface.topology import BoundaryEdge


@dataclass(frozen=True)
class CourantElement:
    vector: np.ndarray  # (edges, dim), left-trivialized
    covector: np.ndarray  # (edges, dim), metric dual of the left-trivialized covector

    def flat(self) -> np.ndarray:
        return np.concatenate([self.vector.reshape(-1), self.covector.reshape(-1)])

    def __add__(self, other: "CourantElement") -> "CourantElement":
        return CourantElement(self.vector + other.vector, self.covector + other.covector)

    def scaled(self, factor: float) -> "CourantElement":
        return CourantElement(factor * self.vector, factor * self.covector)


def pairing(model: LieGroupModel, x: CourantElement, y: CourantElement) -> float:
    """Symmetric pairing <x, y> = mu_x(v_y) + mu_y(v_x)."""
    total = 0.0
    for e in range(x.vector.shape[0]):
        total += model.inner(x.covector[e], y.vector[e]) + model.inner(y.covector[e], x.vector[e])
    return total


def trivializing_section(
    model: LieGroupModel, g: np.ndarray, xi_prime: np.ndarray, xi: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """s(xi', xi) at g: vector xi - Ad_g^-1 xi', covector 1/2 (xi + Ad_g^-1 xi')."""
    moved = model.adjoint_matrix(model.inverse(g)) @ xi_prime
    return xi - moved, 0.5 * (xi + moved)


def section_pairing_law(
    model: LieGroupModel, xi_prime: np.ndarray, xi: np.ndarray, zeta_prime: np.ndarray, zeta: np.ndarray
) -> float:
    """Value the pairing of two trivializing sections must have: <xi, zeta> - <xi', zeta'>."""
    return model.inner(xi, zeta) - model.inner(xi_prime, zeta_prime)


def dirac_element(
    model: LieGroupModel,
    values: Sequence[np.ndarray],
    edges: Sequence[BoundaryEdge],
    xi: np.ndarray,
) -> CourantElement:
    """sigma(xi): on each edge the section s(xi_t(e), xi_s(e))."""
    xi = np.asarray(xi)
    vectors, covectors = [], []
    for edge, value in zip(edges, values):
        vector, covector = trivializing_section(model, value, xi[edge.target], xi[edge.source])
        vectors.append(vector)
        covectors.append(covector)
    return CourantElement(np.array(vectors).reshape(len(values), model.dim), np.array(covectors).reshape(len(values), model.dim))


@dataclass(frozen=True)
class DiracFiber:
    """The fibre of A at a point of G^E, one element per basis vector of the vertex algebra."""

    model: LieGroupModel
    values: Tuple[np.ndarray, ...]
    basis: Tuple[CourantElement, ...]

    @property
    def ambient_dimension(self) -> int:
        return 2 * len(self.values) * self.model.dim

    def gram(self) -> np.ndarray:
        return np.array([[pairing(self.model, x, y) for y in self.basis] for x in self.basis])

    def isotropy_defect(self) -> float:
        return float(np.max(np.abs(self.gram()), initial=0.0))

    def rank(self, rel_tol: float = 1e-9) -> int:
        stacked = np.array([x.flat() for x in self.basis])
        if stacked.size == 0:
            return 0
        sigma = np.linalg.svd(stacked, compute_uv=False)
        return int(np.sum(sigma > rel_tol * max(sigma[0], 1.0)))

    def is_lagrangian(self, tol: float = 1e-10) -> bool:
        return self.isotropy_defect() <= tol and 2 * self.rank() == self.ambient_dimension


def structure_fiber_A(
    model: LieGroupModel, values: Sequence[np.ndarray], edges: Sequence[BoundaryEdge], num_vertices: int
) -> DiracFiber:
    if len(values) != len(edges):
        raise GroupConstraintError("Need one group element per boundary edge")
    basis = []
    for vertex in range(num_vertices):
        for j in range(model.dim):
            xi = np.zeros((num_vertices, model.dim))
            xi[vertex, j] = 1.0
            basis.append(dirac_element(model, values, edges, xi))
    return DiracFiber(model, tuple(values), tuple(basis))


def anchor_generating_vector(
    model: LieGroupModel, values: Sequence[np.ndarray], edges: Sequence[BoundaryEdge], xi: np.ndarray
) -> np.ndarray:
    """Velocity on G^E of the gauge action of exp(-t xi); equals the anchor of sigma(xi)."""
    return np.array(
        [xi[e.source] - model.adjoint_matrix(model.inverse(g)) @ xi[e.target] for e, g in zip(edges, values)]
    )
