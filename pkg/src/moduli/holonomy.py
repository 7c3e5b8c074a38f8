"""Holonomies, their left-trivialized jets, and the gauge action at the vertices."""
from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from src.errors import GroupConstraintError
from src.moduli.chart import ModuliChart, ModuliPoint, check_point
from src.surface.words import Word
from src.utils.linalg import RANK_TOL, kernel


def random_point(chart: ModuliChart, rng: np.random.Generator, scale: float = 1.0) -> ModuliPoint:
    return tuple(chart.model.random_element(rng, scale) for _ in chart.generators)


def identity_point(chart: ModuliChart) -> ModuliPoint:
    return tuple(chart.model.identity() for _ in chart.generators)


def holonomy(chart: ModuliChart, point: Sequence[np.ndarray], word: "Word | str") -> np.ndarray:
    check_point(chart, point)
    value = chart.model.identity()
    for letter in chart.expand(word):
        g = point[chart.generator_index(letter.name)]
        value = value @ (g if letter.exponent > 0 else chart.model.inverse(g))
    return value


def word_differential(
    chart: ModuliChart, point: Sequence[np.ndarray], word: "Word | str"
) -> Tuple[np.ndarray, np.ndarray]:
    """Holonomy of a word and the matrix of its left-trivialized differential."""
    check_point(chart, point)
    model = chart.model
    value = model.identity()
    differential = np.zeros((model.dim, chart.dimension))
    for letter in chart.expand(word):
        k = chart.generator_index(letter.name)
        g = point[k]
        block = np.zeros((model.dim, chart.dimension))
        if letter.exponent > 0:
            h = g
            block[:, k * model.dim:(k + 1) * model.dim] = np.eye(model.dim)
        else:
            h = model.inverse(g)
            block[:, k * model.dim:(k + 1) * model.dim] = -model.adjoint_matrix(g)
        differential = model.adjoint_matrix(model.inverse(h)) @ differential + block
        value = value @ h
    return value, differential


def word_jet(
    chart: ModuliChart, point: Sequence[np.ndarray], word: "Word | str", tangent: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    value, differential = word_differential(chart, point, word)
    return value, differential @ np.asarray(tangent).reshape(-1)


def boundary_holonomy(chart: ModuliChart, point: Sequence[np.ndarray]) -> List[np.ndarray]:
    return [holonomy(chart, point, word) for word in chart.boundary_words]


def boundary_differential(chart: ModuliChart, point: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], np.ndarray]:
    """Boundary holonomies and the stacked differential, one block row per boundary edge."""
    values, rows = [], []
    for word in chart.boundary_words:
        value, differential = word_differential(chart, point, word)
        values.append(value)
        rows.append(differential)
    if not rows:
        return values, np.zeros((0, chart.dimension))
    return values, np.vstack(rows)


def _check_vertex_data(chart: ModuliChart, data: Sequence) -> None:
    if len(data) != chart.num_vertices:
        raise GroupConstraintError(f"Expected one entry per vertex ({chart.num_vertices}), got {len(data)}")


def action_apply(chart: ModuliChart, gauge: Sequence[np.ndarray], point: Sequence[np.ndarray]) -> ModuliPoint:
    """g_s -> h_t(s) g_s h_s(s)^-1 for each generator s."""
    _check_vertex_data(chart, gauge)
    check_point(chart, point)
    chart.model.check_compatible(*gauge)
    moved = []
    for name, g in zip(chart.generators, point):
        source, target = chart.endpoints(name)
        moved.append(gauge[target] @ g @ chart.model.inverse(gauge[source]))
    return tuple(moved)


def generating_vector(chart: ModuliChart, point: Sequence[np.ndarray], xi: np.ndarray) -> np.ndarray:
    """Left-trivialized velocity of the action of exp(t xi) at t = 0."""
    xi = np.asarray(xi)
    _check_vertex_data(chart, xi)
    out = np.empty((chart.n_generators, chart.model.dim))
    for k, (name, g) in enumerate(zip(chart.generators, point)):
        source, target = chart.endpoints(name)
        out[k] = chart.model.adjoint_matrix(chart.model.inverse(g)) @ xi[target] - xi[source]
    return out


def generating_matrix(chart: ModuliChart, point: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of xi -> generating_vector(xi), columns indexed by (vertex, basis)."""
    model = chart.model
    out = np.zeros((chart.dimension, chart.num_vertices * model.dim))
    for k, (name, g) in enumerate(zip(chart.generators, point)):
        source, target = chart.endpoints(name)
        rows = slice(k * model.dim, (k + 1) * model.dim)
        out[rows, target * model.dim:(target + 1) * model.dim] += model.adjoint_matrix(model.inverse(g))
        out[rows, source * model.dim:(source + 1) * model.dim] -= np.eye(model.dim)
    return out


def stabilizer_basis(chart: ModuliChart, point: Sequence[np.ndarray], tol: float = RANK_TOL) -> np.ndarray:
    """Columns span the Lie algebra of the stabilizer of the point in G^V."""
    return kernel(generating_matrix(chart, point), rel_tol=tol)
