"""Orbits of G^n acting on n-tuples around a circle, and their 2-forms.

Vertices v_1..v_n sit on a circle and the i-th entry a_i is the holonomy of
the edge from v_(i+1) to v_i, so h acts by a_i -> h_i a_i h_(i+1)^-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import GroupConstraintError
from src.lie.models import LieGroupModel

MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class OrbitPoint:
    components: Tuple[np.ndarray, ...]
    representative: np.ndarray  # product of a fixed tuple in the orbit

    @property
    def size(self) -> int:
        return len(self.components)


def product(model: LieGroupModel, components) -> np.ndarray:
    out = model.identity()
    for a in components:
        out = out @ a
    return out


def act(model: LieGroupModel, gauge, point: OrbitPoint) -> OrbitPoint:
    n = point.size
    moved = tuple(gauge[i] @ point.components[i] @ model.inverse(gauge[(i + 1) % n]) for i in range(n))
    return OrbitPoint(moved, point.representative)


def sample_orbit_point(model: LieGroupModel, base: Tuple[np.ndarray, ...], rng: np.random.Generator) -> OrbitPoint:
    start = OrbitPoint(tuple(base), product(model, base))
    return act(model, [model.random_element(rng) for _ in base], start)


def in_orbit_class(model: LieGroupModel, point: OrbitPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    """Necessary condition: the cyclic product stays in the conjugacy class (by trace)."""
    current = np.trace(product(model, point.components))
    return abs(current - np.trace(point.representative)) <= tol


def orbit_vector(model: LieGroupModel, point: OrbitPoint, xi: np.ndarray) -> np.ndarray:
    """Left-trivialized velocity of a -> exp(t xi) . a."""
    n = point.size
    return np.array(
        [
            model.adjoint_matrix(model.inverse(point.components[i])) @ xi[i] - xi[(i + 1) % n]
            for i in range(n)
        ]
    )


def orbit_form(model: LieGroupModel, point: OrbitPoint, xi: np.ndarray, zeta: np.ndarray) -> float:
    """omega(xi_O, zeta_O) = -1/2 sum_i (<Ad_a_i xi_(i+1), zeta_i> - <Ad_a_i zeta_(i+1), xi_i>)."""
    xi, zeta = np.asarray(xi), np.asarray(zeta)
    if xi.shape[0] != point.size or zeta.shape[0] != point.size:
        raise GroupConstraintError(f"Need one algebra element per vertex ({point.size})")
    n = point.size
    total = 0.0
    for i in range(n):
        ad = model.adjoint_matrix(point.components[i])
        nxt = (i + 1) % n
        total += model.inner(ad @ xi[nxt], zeta[i]) - model.inner(ad @ zeta[nxt], xi[i])
    return -0.5 * total


def orbit_moment_pairing(model: LieGroupModel, point: OrbitPoint, xi: np.ndarray, tangent: np.ndarray) -> float:
    """1/2 sum_i <theta^L(a_i), xi_(i+1)> + <theta^R(a_i), xi_i> on a left-trivialized tangent."""
    n = point.size
    total = 0.0
    for i in range(n):
        right = model.adjoint_matrix(point.components[i]) @ tangent[i]
        total += model.inner(tangent[i], xi[(i + 1) % n]) + model.inner(right, xi[i])
    return 0.5 * total


def orbit_moment_defect(model: LieGroupModel, point: OrbitPoint, xi: np.ndarray, zeta: np.ndarray) -> float:
    """|omega(xi_O, zeta_O) + moment pairing of xi on zeta_O|."""
    lhs = orbit_form(model, point, xi, zeta)
    return abs(lhs + orbit_moment_pairing(model, point, xi, orbit_vector(model, point, zeta)))
