"""The 2-form on the moduli space, polygon by polygon."""
from __future__ import annotations

from typing import Mapping, Tuple

import numpy as np

from src.errors import ChartError, GroupConstraintError
from src.forms.severa import SeveraPair, fold
from src.moduli.chart import ModuliChart, ModuliPoint, polygon_rotation
from src.moduli.holonomy import holonomy, random_point, word_differential
from src.surface.words import Word

RELATION_TOL = 1e-8


def polygon_pair(chart: ModuliChart, point: ModuliPoint, index: int, shortcut: bool = True) -> SeveraPair:
    """Bullet product over one polygon.

    With ``shortcut`` the eliminated letter is rotated to the end and left out;
    the full cyclic product differs only by a term that vanishes on (x, x^-1).
    """
    word = polygon_rotation(chart, index)
    return fold(chart, point, word[:-1] if shortcut else word)


def omega_at(
    chart: ModuliChart, point: ModuliPoint, shortcut: bool = True, relation_tol: float = RELATION_TOL
) -> np.ndarray:
    total = np.zeros((chart.dimension, chart.dimension))
    for index in range(len(chart.pattern.polygons)):
        relation = holonomy(chart, point, chart.polygon_word(index))
        defect = np.linalg.norm(relation - chart.model.identity())
        if defect > relation_tol:
            raise GroupConstraintError(f"Polygon {index} relation violated by {defect:.3e}")
        total += polygon_pair(chart, point, index, shortcut).two_form
    return total


def pullback_matrix(
    chart_a: ModuliChart, point: ModuliPoint, generator_map: Mapping[str, "Word | str"], chart_b: ModuliChart
) -> Tuple[ModuliPoint, np.ndarray]:
    """Image point in chart B and the Jacobian of the map from A, both in left-trivialized coordinates."""
    image, rows = [], []
    for name in chart_b.generators:
        if name not in generator_map:
            raise ChartError(f"Generator map misses generator {name}")
        value, differential = word_differential(chart_a, point, generator_map[name])
        image.append(value)
        rows.append(differential)
    return tuple(image), np.vstack(rows)


def compare_patterns(
    chart_a: ModuliChart,
    chart_b: ModuliChart,
    generator_map: Mapping[str, "Word | str"],
    samples: int,
    rng: np.random.Generator,
    inverse_map: Mapping[str, "Word | str"] | None = None,
    tol: float = 1e-9,
) -> float:
    """Largest operator-norm gap between omega_A and the pullback of omega_B.

    ``generator_map`` writes each generator of chart B as a word in the letters
    of A; ``inverse_map`` does the converse and is checked to be a section.
    """
    if inverse_map is not None:
        for _ in range(min(samples, 5)):
            q = random_point(chart_b, rng)
            lifted = tuple(holonomy(chart_b, q, inverse_map.get(name, name)) for name in chart_a.generators)
            back, _ = pullback_matrix(chart_a, lifted, generator_map, chart_b)
            if max(np.linalg.norm(a - b) for a, b in zip(back, q)) > tol:
                raise ChartError("Generator maps are not inverse to each other")
    worst = 0.0
    for _ in range(samples):
        p = random_point(chart_a, rng)
        q, jacobian = pullback_matrix(chart_a, p, generator_map, chart_b)
        gap = omega_at(chart_a, p) - jacobian.T @ omega_at(chart_b, q) @ jacobian
        worst = max(worst, float(np.linalg.norm(gap, 2)))
    return worst


def correspondence_map(chart_b: ModuliChart, correspondence: Mapping[str, Word]) -> dict:
    """Generator map for a pattern move: new letters by their words, old letters by name."""
    return {name: correspondence.get(name, name) for name in chart_b.generators}
