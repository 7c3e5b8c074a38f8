"""Matrix Lie group models with an invariant metric on the Lie algebra.

Group elements are square numpy matrices and Lie algebra elements are
coordinate vectors in the model's basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Sequence

import numpy as np
from scipy.linalg import expm, logm, polar

from src.errors import GroupConstraintError

CONSTRAINTS = ("special_unitary", "special_linear", "special_orthogonal", "torus", "none")
TRACE_METRICS = {"trace": 1.0, "neg_trace": -1.0, "neg_half_trace": -0.5}


@dataclass
class ModelTolerances:
    structure: float = 1e-10  # closure and ad-invariance of the basis
    membership: float = 1e-8


class LieGroupModel:
    """A matrix group G with basis of its Lie algebra and metric Gram matrix."""

    def __init__(
        self,
        name: str,
        basis: np.ndarray,
        gram: np.ndarray,
        constraint: str = "none",
        tolerances: ModelTolerances | None = None,
    ) -> None:
        self.name = name
        self.basis = np.asarray(basis)
        self.gram = np.asarray(gram, dtype=float)
        self.constraint = constraint
        self.tolerances = tolerances or ModelTolerances()
        if self.basis.ndim != 3 or self.basis.shape[1] != self.basis.shape[2]:
            raise GroupConstraintError(f"{name}: basis must be a stack of square matrices")
        if constraint not in CONSTRAINTS:
            raise GroupConstraintError(f"{name}: unknown constraint {constraint!r}")
        self.dim = self.basis.shape[0]
        self.matrix_size = self.basis.shape[1]
        if self.gram.shape != (self.dim, self.dim) or not np.allclose(self.gram, self.gram.T):
            raise GroupConstraintError(f"{name}: metric Gram matrix must be symmetric {self.dim}x{self.dim}")
        if abs(np.linalg.det(self.gram)) < self.tolerances.structure:
            raise GroupConstraintError(f"{name}: metric is degenerate")
        self.gram_inv = np.linalg.inv(self.gram)
        self.dtype = complex if np.iscomplexobj(self.basis) else float
        self._real_basis = self._realify(self.basis.reshape(self.dim, -1)).T
        self._coord_solver = np.linalg.pinv(self._real_basis)
        self.structure_constants = self._compute_structure_constants()
        self._check_invariance()

    @staticmethod
    def _realify(flat: np.ndarray) -> np.ndarray:
        return np.concatenate([flat.real, flat.imag], axis=-1)

    def _compute_structure_constants(self) -> np.ndarray:
        constants = np.zeros((self.dim, self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                commutator = self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i]
                coords = self.coords(commutator)
                if np.linalg.norm(self.matrix_of(coords) - commutator) > self.tolerances.structure:
                    raise GroupConstraintError(f"{self.name}: basis is not closed under the bracket")
                constants[i, j] = coords
        return constants

    def _check_invariance(self) -> None:
        # <[x,y],z> + <y,[x,z]> = 0 for all basis triples
        for x in range(self.dim):
            ad = self.structure_constants[x].T  # column j is [X_x, X_j]
            defect = ad.T @ self.gram + self.gram @ ad
            if np.max(np.abs(defect), initial=0.0) > self.tolerances.structure:
                raise GroupConstraintError(f"{self.name}: metric is not ad-invariant")

    # -- algebra -------------------------------------------------------
    def matrix_of(self, xi: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(xi, dtype=float), self.basis, axes=1)

    def coords(self, matrix: np.ndarray) -> np.ndarray:
        flat = self._realify(np.asarray(matrix).reshape(-1))
        return self._coord_solver @ flat

    def bracket(self, xi: np.ndarray, zeta: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", xi, zeta, self.structure_constants)

    def ad_matrix(self, xi: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->kj", xi, self.structure_constants)

    def inner(self, xi: np.ndarray, zeta: np.ndarray) -> float:
        return float(np.asarray(xi) @ self.gram @ np.asarray(zeta))

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim)

    # -- group ---------------------------------------------------------
    def identity(self) -> np.ndarray:
        return np.eye(self.matrix_size, dtype=self.dtype)

    def exp(self, xi: np.ndarray) -> np.ndarray:
        return expm(self.matrix_of(xi)).astype(self.dtype)

    def log(self, g: np.ndarray) -> np.ndarray:
        """Principal logarithm; only meaningful near the identity."""
        return self.coords(logm(g))

    def inverse(self, g: np.ndarray) -> np.ndarray:
        if self.constraint in ("special_unitary", "special_orthogonal", "torus"):
            return g.conj().T
        return np.linalg.inv(g)

    def adjoint_matrix(self, g: np.ndarray) -> np.ndarray:
        g_inv = self.inverse(g)
        conjugated = np.einsum("ab,kbc,cd->kad", g, self.basis, g_inv)
        return (self._coord_solver @ self._realify(conjugated.reshape(self.dim, -1)).T)

    def adjoint(self, g: np.ndarray, xi: np.ndarray) -> np.ndarray:
        return self.adjoint_matrix(g) @ xi

    def check_compatible(self, *elements: np.ndarray) -> None:
        for g in elements:
            if np.shape(g) != (self.matrix_size, self.matrix_size):
                raise GroupConstraintError(
                    f"{self.name}: expected {self.matrix_size}x{self.matrix_size} matrix, got shape {np.shape(g)}"
                )

    def constraint_defect(self, g: np.ndarray) -> float:
        self.check_compatible(g)
        eye = np.eye(self.matrix_size)
        det_defect = abs(np.linalg.det(g) - 1.0)
        if self.constraint == "special_unitary":
            return max(np.linalg.norm(g @ g.conj().T - eye), det_defect)
        if self.constraint == "special_linear":
            return max(det_defect, np.linalg.norm(np.imag(g)))
        if self.constraint in ("special_orthogonal", "torus"):
            defect = max(np.linalg.norm(g @ g.T - eye), det_defect, np.linalg.norm(np.imag(g)))
            if self.constraint == "torus":
                commutators = [np.linalg.norm(g @ x - x @ g) for x in self.basis]
                defect = max([defect] + commutators)
            return defect
        return 0.0 if abs(np.linalg.det(g)) > self.tolerances.membership else np.inf

    def is_element(self, g: np.ndarray, tol: float | None = None) -> bool:
        return self.constraint_defect(g) <= (tol if tol is not None else self.tolerances.membership)

    def require_element(self, g: np.ndarray, tol: float | None = None) -> None:
        defect = self.constraint_defect(g)
        if defect > (tol if tol is not None else self.tolerances.membership):
            raise GroupConstraintError(f"{self.name}: matrix violates the group constraint by {defect:.3e}")

    def retract(self, g: np.ndarray) -> np.ndarray:
        """Project a nearly-valid matrix back onto the group."""
        if self.constraint == "special_unitary":
            unitary, _ = polar(g)
            return unitary / np.sqrt(np.linalg.det(unitary))
        if self.constraint == "special_linear":
            g = np.real(g)
            return g / np.sqrt(np.linalg.det(g))
        if self.constraint in ("special_orthogonal", "torus"):
            orthogonal, _ = polar(np.real(g))
            return orthogonal
        return g

    def random_algebra(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return rng.uniform(-scale, scale, self.dim)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.exp(self.random_algebra(rng, scale))

    def __repr__(self) -> str:
        return f"LieGroupModel({self.name!r}, dim={self.dim})"


def _pauli_basis() -> np.ndarray:
    sigma = np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )
    return -0.5j * sigma


def su2() -> LieGroupModel:
    basis = _pauli_basis()
    return LieGroupModel("SU2", basis, trace_gram(basis, "neg_trace"), "special_unitary")


def sl2r() -> LieGroupModel:
    basis = np.array(
        [
            [[1.0, 0.0], [0.0, -1.0]],
            [[0.0, 1.0], [0.0, 0.0]],
            [[0.0, 0.0], [1.0, 0.0]],
        ]
    )
    return LieGroupModel("SL2R", basis, trace_gram(basis, "trace"), "special_linear")


def torus2() -> LieGroupModel:
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    zero = np.zeros((2, 2))
    basis = np.array([np.block([[rotation, zero], [zero, zero]]), np.block([[zero, zero], [zero, rotation]])])
    return LieGroupModel("T2", basis, trace_gram(basis, "neg_half_trace"), "torus")


def trace_gram(basis: np.ndarray, kind: str) -> np.ndarray:
    if kind not in TRACE_METRICS:
        raise GroupConstraintError(f"Unknown trace metric {kind!r}")
    scale = TRACE_METRICS[kind]
    return scale * np.real(np.einsum("iab,jba->ij", basis, basis))


MODEL_REGISTRY: Dict[str, Callable[[], LieGroupModel]] = {"SU2": su2, "SL2R": sl2r, "T2": torus2}


def get_model(name: str) -> LieGroupModel:
    """Return a stock model by name, or load a JSON description from a path."""
    if name in MODEL_REGISTRY:
        return MODEL_REGISTRY[name]()
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        return model_from_description(json.loads(path.read_text()))
    raise GroupConstraintError(f"Unknown group model {name!r}; stock models: {', '.join(MODEL_REGISTRY)}")


def model_from_description(description: Dict) -> LieGroupModel:
    """Build a model from ``basis`` (plus ``basis_imag``), ``metric`` or ``gram``, and ``constraint``."""
    try:
        basis = np.asarray(description["basis"], dtype=float)
    except (KeyError, ValueError) as exc:
        raise GroupConstraintError(f"Group description needs a numeric basis: {exc}") from exc
    if "basis_imag" in description:
        basis = basis + 1j * np.asarray(description["basis_imag"], dtype=float)
    if "gram" in description:
        gram = np.asarray(description["gram"], dtype=float)
    else:
        gram = trace_gram(basis, description.get("metric", "neg_trace"))
    return LieGroupModel(
        description.get("name", "custom"),
        basis,
        gram,
        description.get("constraint", "none"),
    )


def stack_adjoint(model: LieGroupModel, elements: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal matrix of the adjoint actions of several elements."""
    blocks = [model.adjoint_matrix(g) for g in elements]
    size = model.dim * len(blocks)
    out = np.zeros((size, size))
    for k, block in enumerate(blocks):
        out[k * model.dim:(k + 1) * model.dim, k * model.dim:(k + 1) * model.dim] = block
    return out
