"""Small linear-algebra helpers shared by the verification checks."""
from __future__ import annotations

import numpy as np
from scipy.linalg import subspace_angles, svd

RANK_TOL = 1e-9
# singular values below this count as zero whatever the scale
ABS_TOL = 1e-9


def _threshold(sigma: np.ndarray, rel_tol: float, abs_tol: float) -> float:
    top = float(sigma[0]) if sigma.size else 0.0
    return max(rel_tol * top, abs_tol)


def numerical_rank(matrix: np.ndarray, rel_tol: float = RANK_TOL, abs_tol: float = ABS_TOL) -> int:
    if matrix.size == 0:
        return 0
    sigma = svd(matrix, compute_uv=False)
    return int(np.sum(sigma > _threshold(sigma, rel_tol, abs_tol)))


def min_singular_value(matrix: np.ndarray) -> float:
    if matrix.shape[1] == 0:
        return np.inf
    sigma = svd(matrix, compute_uv=False)
    if sigma.size < matrix.shape[1]:
        return 0.0
    return float(sigma[-1])


def span(matrix: np.ndarray, rel_tol: float = RANK_TOL, abs_tol: float = ABS_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space."""
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0))
    u, sigma, _ = svd(matrix, full_matrices=False)
    rank = int(np.sum(sigma > _threshold(sigma, rel_tol, abs_tol)))
    return u[:, :rank]


def kernel(matrix: np.ndarray, rel_tol: float = RANK_TOL, abs_tol: float = ABS_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the null space."""
    if matrix.shape[0] == 0 or matrix.size == 0:
        return np.eye(matrix.shape[1])
    _, sigma, vh = svd(matrix, full_matrices=True)
    rank = int(np.sum(sigma > _threshold(sigma, rel_tol, abs_tol)))
    return vh[rank:].conj().T


def max_principal_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between two column spans; pi/2 when dimensions differ."""
    if a.shape[1] != b.shape[1]:
        return float(np.pi / 2)
    if a.shape[1] == 0:
        return 0.0
    return float(np.max(subspace_angles(a, b)))


def block_metric(gram: np.ndarray, blocks: int) -> np.ndarray:
    return np.kron(np.eye(blocks), gram)


def antisymmetry_defect(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix + matrix.T), initial=0.0))
