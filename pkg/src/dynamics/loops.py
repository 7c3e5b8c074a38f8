"""Invariant functions on the moduli space built from loop holonomies."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from src.errors import WordError
from src.lie.functions import InvariantFunction, phi_dot
from src.moduli.chart import ModuliChart, ModuliPoint, word_endpoints
from src.moduli.holonomy import holonomy, word_differential
from src.surface.words import Word, as_word


class ScalarField(Protocol):
    def value(self, chart: ModuliChart, point: ModuliPoint) -> float: ...

    def gradient(self, chart: ModuliChart, point: ModuliPoint) -> np.ndarray: ...


@dataclass(frozen=True)
class LoopFunction:
    """f(kappa) = phi(kappa(loop)) for a closed path and a class function phi."""

    loop: Word
    phi: InvariantFunction
    fd_step: float = 1e-5

    @classmethod
    def of(cls, chart: ModuliChart, loop: "Word | str", phi: InvariantFunction) -> "LoopFunction":
        word = as_word(loop)
        source, target = word_endpoints(chart, word)
        if source != target:
            raise WordError(f"Word {loop!r} runs from vertex {source} to vertex {target}, not a loop")
        return cls(word, phi)

    def value(self, chart: ModuliChart, point: ModuliPoint) -> float:
        return self.phi(holonomy(chart, point, self.loop))

    def gradient(self, chart: ModuliChart, point: ModuliPoint) -> np.ndarray:
        """Coordinate gradient: df(v) = gradient . v for flattened tangents v."""
        value, differential = word_differential(chart, point, self.loop)
        xi = phi_dot(chart.model, self.phi, value, self.fd_step)
        return differential.T @ chart.model.gram @ xi


@dataclass(frozen=True)
class FunctionField:
    """A scalar field given only by its values; gradients by central differences."""

    evaluate: Callable[[ModuliChart, ModuliPoint], float]
    fd_step: float = 1e-5

    def value(self, chart: ModuliChart, point: ModuliPoint) -> float:
        return float(self.evaluate(chart, point))

    def gradient(self, chart: ModuliChart, point: ModuliPoint) -> np.ndarray:
        return fd_gradient(chart, point, self.evaluate, self.fd_step)


def fd_gradient(
    chart: ModuliChart,
    point: ModuliPoint,
    evaluate: Callable[[ModuliChart, ModuliPoint], float],
    step: float = 1e-5,
) -> np.ndarray:
    model = chart.model
    gradient = np.empty(chart.dimension)
    for k in range(chart.n_generators):
        for j in range(model.dim):
            direction = np.zeros(model.dim)
            direction[j] = step
            ahead = list(point)
            behind = list(point)
            ahead[k] = point[k] @ model.exp(direction)
            behind[k] = point[k] @ model.exp(-direction)
            gradient[k * model.dim + j] = (
                evaluate(chart, tuple(ahead)) - evaluate(chart, tuple(behind))
            ) / (2.0 * step)
    return gradient
