"""Free-generator charts of the moduli space of flat connections.

Each polygon relation is solved for one letter occurring once in it; the
remaining edge letters are free generators and every other letter, and every
boundary holonomy, becomes a reduced word in them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from src.errors import ChartError, GroupConstraintError, WordError
from src.lie.models import LieGroupModel
from src.surface.pattern import GluingPattern
from src.surface.topology import SurfaceInfo, analyze
from src.surface.words import Letter, Word, as_word, free_reduce, invert_word, power, rotate

ModuliPoint = Tuple[np.ndarray, ...]  # one group element per generator, in chart order


@dataclass(frozen=True)
class ModuliChart:
    pattern: GluingPattern
    model: LieGroupModel
    info: SurfaceInfo
    generators: Tuple[str, ...]
    eliminated: Dict[int, Letter]  # polygon -> solved letter (canonical name)
    letter_words: Dict[str, Word]  # canonical letter -> reduced word in generators
    boundary_words: Tuple[Word, ...]
    substitution: Dict[str, Word] | None = None

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def dimension(self) -> int:
        return self.n_generators * self.model.dim

    @property
    def num_vertices(self) -> int:
        return self.info.num_vertices

    def generator_index(self, name: str) -> int:
        return self.generators.index(name)

    def endpoints(self, name: str) -> Tuple[int, int]:
        return self.info.letter_endpoints[self.pattern.canonical(name)]

    def expand(self, word: "Word | str") -> Word:
        """Rewrite a word in pattern letters as a reduced word in the generators."""
        expanded: List[Letter] = []
        for letter in as_word(word):
            try:
                name = self.pattern.canonical(letter.name)
            except WordError:
                raise WordError(f"Letter {letter.name!r} is not in the pattern") from None
            expanded.extend(power(self.letter_words[name], letter.exponent))
        return free_reduce(expanded)

    def polygon_word(self, index: int) -> Word:
        return tuple(self.pattern.canonical_letter(letter) for letter in self.pattern.polygons[index])


def _choose_letter(word: Word, taken: set, hint: str | None) -> Letter:
    once = [
        letter for letter in word
        if sum(1 for other in word if other.name == letter.name) == 1 and letter.name not in taken
    ]
    if hint is not None:
        for letter in once:
            if letter.name == hint:
                return letter
        raise ChartError(f"Letter {hint} cannot be eliminated from its polygon")
    if not once:
        raise ChartError("A polygon has no letter left to eliminate")
    return once[-1]


def _solve_for(word: Word, letter: Letter) -> Word:
    """Solve u x^e v = 1 for x."""
    k = word.index(letter)
    u, v = word[:k], word[k + 1:]
    return power(invert_word(u) + invert_word(v), letter.exponent)


def build_chart(
    pattern: GluingPattern, model: LieGroupModel, elimination_hint: Mapping[int, str] | None = None
) -> ModuliChart:
    info = analyze(pattern)
    if not info.has_free_edge_per_component:
        raise ChartError("Every connected piece of the pattern needs a free edge")
    hint = dict(elimination_hint or {})
    canonical_polygons = [
        tuple(pattern.canonical_letter(letter) for letter in polygon) for polygon in pattern.polygons
    ]
    eliminated: Dict[int, Letter] = {}
    solutions: Dict[str, Word] = {}
    for index, word in enumerate(canonical_polygons):
        letter = _choose_letter(word, set(solutions), hint.get(index))
        eliminated[index] = letter
        solutions[letter.name] = _solve_for(word, letter)

    generators = tuple(name for name in pattern.edge_names if name not in solutions)
    letter_words: Dict[str, Word] = {name: (Letter(name, 1),) for name in generators}
    visiting: set = set()

    def resolve(name: str) -> Word:
        if name in letter_words:
            return letter_words[name]
        if name in visiting:
            raise ChartError(f"Eliminated letters depend on each other cyclically through {name}")
        visiting.add(name)
        expanded: List[Letter] = []
        for letter in solutions[name]:
            expanded.extend(power(resolve(letter.name), letter.exponent))
        visiting.discard(name)
        letter_words[name] = free_reduce(expanded)
        return letter_words[name]

    for name in solutions:
        resolve(name)

    if len(generators) != info.graph_edge_count:
        raise ChartError(f"Chart has {len(generators)} generators, expected {info.graph_edge_count}")

    boundary_words = tuple(
        free_reduce(power(letter_words[pattern.canonical(e.letter.name)], e.letter.exponent))
        for e in info.boundary_edges
    )
    return ModuliChart(pattern, model, info, generators, eliminated, letter_words, boundary_words)


def polygon_rotation(chart: ModuliChart, index: int) -> Word:
    """The polygon word rotated so that its eliminated letter comes last."""
    word = chart.polygon_word(index)
    return rotate(word, word.index(chart.eliminated[index]) + 1)


def word_endpoints(chart: ModuliChart, word: "Word | str") -> Tuple[int, int]:
    """Source and target vertex of a composable path; raises on gaps."""
    letters = as_word(word)
    if not letters:
        raise WordError("Empty word has no endpoints")
    ends: List[Tuple[int, int]] = []
    for letter in letters:
        s, t = chart.endpoints(letter.name)
        ends.append((s, t) if letter.exponent > 0 else (t, s))
    # products read right to left: the rightmost letter is traversed first
    for (s_left, _), (_, t_right) in zip(ends, ends[1:]):
        if s_left != t_right:
            raise WordError(f"Word {letters} is not a composable path")
    return ends[-1][0], ends[0][1]


def check_point(chart: ModuliChart, point: Sequence[np.ndarray]) -> None:
    if len(point) != chart.n_generators:
        raise GroupConstraintError(f"Point has {len(point)} entries, chart has {chart.n_generators} generators")
    chart.model.check_compatible(*point)
