"""Cartan 3-form, the 2-form on G x G, and finite-difference exterior calculus.

Tangent vectors are left-trivialized: a tangent at a point of G^k is an array
of shape (k, dim) holding g_i^-1 dg_i in basis coordinates.
"""
from __future__ import annotations

from typing import Callable, Sequence, Tuple

import numpy as np

from src.lie.models import LieGroupModel

Point = Tuple[np.ndarray, ...]
TwoForm = Callable[[Point, np.ndarray, np.ndarray], float]


def eta_at(model: LieGroupModel, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> float:
    """Cartan 3-form on left-trivialized tangents; the same at every point."""
    return 0.5 * model.inner(u, model.bracket(v, w))


def beta_at(model: LieGroupModel, point: Point, u: np.ndarray, w: np.ndarray) -> float:
    """2-form on G x G pairing the left factor with the right factor."""
    _, g2 = point
    ad = model.adjoint_matrix(g2)
    return 0.5 * (model.inner(u[0], ad @ w[1]) - model.inner(w[0], ad @ u[1]))


def move(model: LieGroupModel, point: Sequence[np.ndarray], tangent: np.ndarray, t: float) -> Point:
    return tuple(g @ model.exp(t * x) for g, x in zip(point, tangent))


def _bracket_fields(model: LieGroupModel, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.array([model.bracket(a, b) for a, b in zip(x, y)])


def exterior_derivative(
    model: LieGroupModel,
    form: TwoForm,
    point: Sequence[np.ndarray],
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    step: float = 1e-4,
) -> float:
    """d(form)(X, Y, Z) on left-invariant extensions, by central differences."""
    point = tuple(point)

    def along(direction: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
        ahead = form(move(model, point, direction, step), a, b)
        behind = form(move(model, point, direction, -step), a, b)
        return (ahead - behind) / (2.0 * step)

    return (
        along(x, y, z)
        - along(y, x, z)
        + along(z, x, y)
        - form(point, _bracket_fields(model, x, y), z)
        + form(point, _bracket_fields(model, x, z), y)
        - form(point, _bracket_fields(model, y, z), x)
    )


def multiplication_defect(
    model: LieGroupModel,
    point: Point,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    step: float = 1e-4,
) -> float:
    """|Mult*eta - pr1*eta - pr2*eta + d beta| on three tangents of G x G."""
    ad_inv = model.adjoint_matrix(model.inverse(point[1]))

    def product_tangent(t: np.ndarray) -> np.ndarray:
        return ad_inv @ t[0] + t[1]

    pulled = eta_at(model, product_tangent(x), product_tangent(y), product_tangent(z))
    factors = eta_at(model, x[0], y[0], z[0]) + eta_at(model, x[1], y[1], z[1])
    d_beta = exterior_derivative(model, lambda p, a, b: beta_at(model, p, a, b), point, x, y, z, step)
    return abs(pulled - factors + d_beta)


def inversion_defect(model: LieGroupModel, g: np.ndarray, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> float:
    """|Inv*eta + eta|; the tangent of g^-1 is -Ad_g of the tangent of g."""
    ad = model.adjoint_matrix(g)
    return abs(eta_at(model, -ad @ u, -ad @ v, -ad @ w) + eta_at(model, u, v, w))


def contraction_defect(
    model: LieGroupModel,
    g: np.ndarray,
    xi_left: np.ndarray,
    xi_right: np.ndarray,
    v: np.ndarray,
    w: np.ndarray,
    step: float = 1e-4,
) -> float:
    """Check iota(xi^L - xi'^R) eta = -d(1/2 (theta^R . xi' + theta^L . xi)) at g."""

    def field(h: np.ndarray) -> np.ndarray:
        return xi_left - model.adjoint_matrix(model.inverse(h)) @ xi_right

    def one_form(h: np.ndarray, t: np.ndarray) -> float:
        return 0.5 * (model.inner(model.adjoint_matrix(h) @ t, xi_right) + model.inner(t, xi_left))

    def derivative(direction: np.ndarray, t: np.ndarray) -> float:
        ahead = one_form(g @ model.exp(step * direction), t)
        behind = one_form(g @ model.exp(-step * direction), t)
        return (ahead - behind) / (2.0 * step)

    d_alpha = derivative(v, w) - derivative(w, v) - one_form(g, model.bracket(v, w))
    return abs(eta_at(model, field(g), v, w) + d_alpha)
