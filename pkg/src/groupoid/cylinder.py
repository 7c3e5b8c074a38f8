"""The cylinder groupoid G x G over G and its multiplicative 2-form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from src.errors import GroupConstraintError
from src.lie.calculus import eta_at, exterior_derivative
from src.lie.models import LieGroupModel
from src.utils.linalg import min_singular_value

COMPOSABLE_TOL = 1e-9


@dataclass(frozen=True)
class CylinderPoint:
    """Arrow (a, c) from a to c a c^-1."""

    a: np.ndarray
    c: np.ndarray


def source(model: LieGroupModel, p: CylinderPoint) -> np.ndarray:
    return p.a


def target(model: LieGroupModel, p: CylinderPoint) -> np.ndarray:
    return p.c @ p.a @ model.inverse(p.c)


def unit(model: LieGroupModel, a: np.ndarray) -> CylinderPoint:
    return CylinderPoint(a, model.identity())


def inverse(model: LieGroupModel, p: CylinderPoint) -> CylinderPoint:
    return CylinderPoint(target(model, p), model.inverse(p.c))


def compose(model: LieGroupModel, p: CylinderPoint, q: CylinderPoint, tol: float = COMPOSABLE_TOL) -> CylinderPoint:
    """p after q; needs source(p) = target(q)."""
    gap = np.linalg.norm(p.a - target(model, q))
    if gap > tol:
        raise GroupConstraintError(f"Arrows are not composable (gap {gap:.3e})")
    return CylinderPoint(q.a, p.c @ q.c)


def dehn_twist(model: LieGroupModel, p: CylinderPoint) -> CylinderPoint:
    return CylinderPoint(p.a, p.c @ p.a)


def cylinder_omega_matrix(model: LieGroupModel, p: CylinderPoint) -> np.ndarray:
    """Matrix in (v_a, v_c) coordinates of
    -1/2 theta_c . (1 + Ad_a) theta_a + 1/2 theta_c . Ad_a theta_c."""
    ad_a = model.adjoint_matrix(p.a)
    gram = model.gram
    cross = -0.5 * gram @ (np.eye(model.dim) + ad_a)  # v_c^T cross w_a
    cc = 0.5 * gram @ ad_a
    d = model.dim
    out = np.zeros((2 * d, 2 * d))
    out[d:, :d] = cross
    out[:d, d:] = -cross.T
    out[d:, d:] = cc - cc.T
    return out


def cylinder_omega(model: LieGroupModel, p: CylinderPoint, v: np.ndarray, w: np.ndarray) -> float:
    return float(np.asarray(v).reshape(-1) @ cylinder_omega_matrix(model, p) @ np.asarray(w).reshape(-1))


def target_differential(model: LieGroupModel, p: CylinderPoint) -> np.ndarray:
    """Left-trivialized differential of (a, c) -> c a c^-1."""
    ad_c = model.adjoint_matrix(p.c)
    ad_a_inv = model.adjoint_matrix(model.inverse(p.a))
    return ad_c @ np.hstack([np.eye(model.dim), ad_a_inv - np.eye(model.dim)])


def sample_composable(
    model: LieGroupModel, rng: np.random.Generator
) -> Tuple[CylinderPoint, CylinderPoint, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """A composable pair with two tangents to the space of composable pairs.

    Returns (p, q, v_p, v_q, w_p, w_q); tangents are (v_a, v_c) stacked rows.
    """
    q = CylinderPoint(model.random_element(rng), model.random_element(rng))
    p = CylinderPoint(target(model, q), model.random_element(rng))

    def tangents() -> Tuple[np.ndarray, np.ndarray]:
        u_c1, u_a2, u_c2 = (model.random_algebra(rng) for _ in range(3))
        ad_c2 = model.adjoint_matrix(q.c)
        ad_a2_inv = model.adjoint_matrix(model.inverse(q.a))
        u_a1 = ad_c2 @ (ad_a2_inv @ u_c2 + u_a2 - u_c2)
        return np.array([u_a1, u_c1]), np.array([u_a2, u_c2])

    v_p, v_q = tangents()
    w_p, w_q = tangents()
    return p, q, v_p, v_q, w_p, w_q


def composed_tangent(model: LieGroupModel, q: CylinderPoint, v_p: np.ndarray, v_q: np.ndarray) -> np.ndarray:
    ad_c2_inv = model.adjoint_matrix(model.inverse(q.c))
    return np.array([v_q[0], ad_c2_inv @ v_p[1] + v_q[1]])


def multiplicativity_defect(model: LieGroupModel, rng: np.random.Generator) -> float:
    """|omega(pq) - omega(p) - omega(q)| on tangents to the composable pairs."""
    p, q, v_p, v_q, w_p, w_q = sample_composable(model, rng)
    product = compose(model, p, q)
    lhs = cylinder_omega(model, product, composed_tangent(model, q, v_p, v_q), composed_tangent(model, q, w_p, w_q))
    return abs(lhs - cylinder_omega(model, p, v_p, w_p) - cylinder_omega(model, q, v_q, w_q))


def d_omega_defect(model: LieGroupModel, p: CylinderPoint, x: np.ndarray, y: np.ndarray, z: np.ndarray, step: float = 1e-4) -> float:
    """|d omega - t*eta + s*eta| on three tangents."""

    def form(at, v, w) -> float:
        return cylinder_omega(model, CylinderPoint(*at), v, w)

    d_omega = exterior_derivative(model, form, (p.a, p.c), x, y, z, step)
    dt = target_differential(model, p)
    t_eta = eta_at(model, dt @ x.reshape(-1), dt @ y.reshape(-1), dt @ z.reshape(-1))
    s_eta = eta_at(model, x[0], y[0], z[0])
    return abs(d_omega - t_eta + s_eta)


def nondegeneracy_sigma(model: LieGroupModel, p: CylinderPoint) -> float:
    """Smallest singular value of [omega; Ts; Tt]; positive iff ker omega meets ker Ts and ker Tt trivially."""
    ts = np.hstack([np.eye(model.dim), np.zeros((model.dim, model.dim))])
    return min_singular_value(np.vstack([cylinder_omega_matrix(model, p), ts, target_differential(model, p)]))


def verify_multiplicative(
    model: LieGroupModel, samples: int, rng: np.random.Generator, step: float = 1e-4
) -> pd.DataFrame:
    records: List[Dict[str, float]] = []
    for index in range(samples):
        p = CylinderPoint(model.random_element(rng), model.random_element(rng))
        x, y, z = (np.array([model.random_algebra(rng), model.random_algebra(rng)]) for _ in range(3))
        records.append(
            {
                "sample": index,
                "multiplicative_defect": multiplicativity_defect(model, rng),
                "d_omega_defect": d_omega_defect(model, p, x, y, z, step),
                "nondegeneracy_sigma": nondegeneracy_sigma(model, p),
            }
        )
    return pd.DataFrame(records)
