"""Conjugation-invariant class functions and their metric gradients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from src.lie.models import LieGroupModel

DEFAULT_FD_STEP = 1e-5
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class InvariantFunction:
    name: str
    evaluate: Callable[[np.ndarray], float]
    # derivative components d/dt phi(g exp(t X_j)) at t=0, when known in closed form
    derivative: Callable[[LieGroupModel, np.ndarray], np.ndarray] | None = None

    def __call__(self, g: np.ndarray) -> float:
        return float(self.evaluate(g))


def _re_trace(g: np.ndarray) -> float:
    return float(np.real(np.trace(g)))


def _re_trace_derivative(model: LieGroupModel, g: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ab,kba->k", g, model.basis))


def _re_trace_squared(g: np.ndarray) -> float:
    return _re_trace(g) ** 2


def _re_trace_squared_derivative(model: LieGroupModel, g: np.ndarray) -> np.ndarray:
    return 2.0 * _re_trace(g) * _re_trace_derivative(model, g)


RE_TRACE = InvariantFunction("re_trace", _re_trace, _re_trace_derivative)
RE_TRACE_SQUARED = InvariantFunction("re_trace_squared", _re_trace_squared, _re_trace_squared_derivative)
FUNCTION_REGISTRY: Dict[str, InvariantFunction] = {f.name: f for f in (RE_TRACE, RE_TRACE_SQUARED)}


def get_function(name: str) -> InvariantFunction:
    if name not in FUNCTION_REGISTRY:
        raise ValueError(f"Unknown class function {name!r}; known: {', '.join(FUNCTION_REGISTRY)}")
    return FUNCTION_REGISTRY[name]


def phi_dot(
    model: LieGroupModel,
    phi: InvariantFunction,
    g: np.ndarray,
    step: float = DEFAULT_FD_STEP,
    use_closed_form: bool = True,
) -> np.ndarray:
    """Lie algebra element with <phi_dot(g), X> = d/dt phi(g exp(tX))."""
    if phi.derivative is not None and use_closed_form:
        derivative = phi.derivative(model, g)
    else:
        derivative = np.empty(model.dim)
        for j in range(model.dim):
            direction = np.zeros(model.dim)
            direction[j] = step
            forward = phi(g @ model.exp(direction))
            backward = phi(g @ model.exp(-direction))
            derivative[j] = (forward - backward) / (2.0 * step)
    return model.gram_inv @ derivative


def invariance_defect(
    model: LieGroupModel, phi: InvariantFunction, rng: np.random.Generator, samples: int = 8
) -> float:
    """Largest |phi(h g h^-1) - phi(g)| over random pairs."""
    worst = 0.0
    for _ in range(samples):
        g = model.random_element(rng)
        h = model.random_element(rng)
        worst = max(worst, abs(phi(h @ g @ model.inverse(h)) - phi(g)))
    return worst


def require_invariant(
    model: LieGroupModel,
    phi: InvariantFunction,
    rng: np.random.Generator | None = None,
    tol: float = INVARIANCE_TOL,
) -> float:
    """Sampled invariance defect of phi on the model; raises when phi is not a class function."""
    defect = invariance_defect(model, phi, rng if rng is not None else np.random.default_rng(0))
    if defect > tol:
        raise ValueError(f"{phi.name} is not conjugation-invariant on {model.name} (defect {defect:.2e})")
    return defect


def register_function(phi: InvariantFunction, model: LieGroupModel) -> InvariantFunction:
    """Add a class function to the registry after checking it on a model."""
    if phi.name in FUNCTION_REGISTRY:
        raise ValueError(f"Class function {phi.name!r} is already registered")
    require_invariant(model, phi)
    FUNCTION_REGISTRY[phi.name] = phi
    return phi
