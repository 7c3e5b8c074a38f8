"""Generator automorphisms of a chart (mapping classes fixing the boundary)."""
from __future__ import annotations

import dataclasses
from typing import Dict, List, Mapping, Tuple

import numpy as np

from src.errors import ChartError
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import holonomy, random_point
from src.surface.words import Letter, Word, free_reduce, power

CHECK_POINTS = 5

# Dehn-twist substitutions on the stock charts, each with its inverse.
STOCK_MOVES: Dict[str, Tuple[Dict[str, str], Dict[str, str]]] = {
    "torus_s": ({"b": "b a"}, {"b": "b a^-1"}),
    "torus_t": ({"a": "a b^-1"}, {"a": "a b"}),
    "cylinder_twist": ({"c": "c a"}, {"c": "c a^-1"}),
}


def _substitute(word: Word, substitution: Mapping[str, Word]) -> Word:
    out: List[Letter] = []
    for letter in word:
        out.extend(power(substitution[letter.name], letter.exponent))
    return free_reduce(out)


def apply_substitution(
    chart: ModuliChart, point: ModuliPoint, substitution: Mapping[str, "Word | str"]
) -> ModuliPoint:
    return tuple(holonomy(chart, point, substitution.get(name, name)) for name in chart.generators)


def mcg_substitute(
    chart: ModuliChart,
    substitution: Mapping[str, "Word | str"],
    inverse: Mapping[str, "Word | str"],
    rng: np.random.Generator | None = None,
    tol: float = 1e-9,
) -> ModuliChart:
    """Chart whose letters are read through the substitution; the inverse is checked numerically."""
    forward = {name: chart.expand(substitution.get(name, name)) for name in chart.generators}
    backward = {name: chart.expand(inverse.get(name, name)) for name in chart.generators}
    rng = rng or np.random.default_rng(0)
    for _ in range(CHECK_POINTS):
        point = random_point(chart, rng)
        back = apply_substitution(chart, apply_substitution(chart, point, forward), backward)
        if max(np.linalg.norm(a - b) for a, b in zip(point, back)) > tol:
            raise ChartError("Substitution and its proposed inverse do not compose to the identity")
    return dataclasses.replace(
        chart,
        letter_words={name: _substitute(word, forward) for name, word in chart.letter_words.items()},
        boundary_words=tuple(_substitute(word, forward) for word in chart.boundary_words),
        substitution=forward,
    )


def stock_move(chart: ModuliChart, name: str, rng: np.random.Generator | None = None) -> ModuliChart:
    if name not in STOCK_MOVES:
        raise ChartError(f"Unknown move {name!r}; known: {', '.join(STOCK_MOVES)}")
    forward, backward = STOCK_MOVES[name]
    missing = [letter for letter in (*forward, *backward) if letter not in chart.generators]
    if missing:
        raise ChartError(f"Move {name} needs generators {missing} absent from the chart")
    return mcg_substitute(chart, forward, backward, rng)
