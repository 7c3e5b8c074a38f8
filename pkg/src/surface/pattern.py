"""Gluing patterns: labelled polygons, side pairings and free sides."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from src.errors import PatternError, WordError
from src.surface.words import Letter, Word, format_word, parse_word

PAIR_RE = re.compile(r"\(\s*([^\s()]+)\s+([^\s()]+)\s*\)")


@dataclass(frozen=True)
class Occurrence:
    polygon: int
    side: int  # 0-based position in the polygon word
    letter: Letter


@dataclass(frozen=True)
class GluingPattern:
    """Polygons with cyclic boundary words.

    A letter written twice (once with each exponent) glues the two sides.
    ``pairs`` glues two differently named letters ``(c, d)``; ``d`` is then an
    alias of ``c``. Every other letter labels a free side.
    """

    polygons: Tuple[Word, ...]
    pairs: Tuple[Tuple[str, str], ...] = ()
    group: str | None = None
    _aliases: Dict[str, str] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.polygons:
            raise PatternError("A pattern needs at least one polygon")
        counts: Dict[str, List[Letter]] = {}
        for index, polygon in enumerate(self.polygons):
            if not polygon:
                raise PatternError(f"Polygon {index} has no sides")
            for letter in polygon:
                if letter.exponent not in (1, -1):
                    raise PatternError(f"Letter {letter.name} has exponent {letter.exponent}")
                counts.setdefault(letter.name, []).append(letter)
        for name, seen in counts.items():
            if len(seen) > 2:
                raise PatternError(f"Letter {name} occurs {len(seen)} times")
            if len(seen) == 2 and seen[0].exponent == seen[1].exponent:
                raise PatternError(f"Letter {name} glues two sides with the same orientation")
        aliases: Dict[str, str] = {}
        for first, second in self.pairs:
            for name in (first, second):
                if name not in counts:
                    raise PatternError(f"Paired letter {name} does not occur")
                if len(counts[name]) != 1:
                    raise PatternError(f"Paired letter {name} must occur exactly once")
                if name in aliases or name in aliases.values():
                    raise PatternError(f"Letter {name} is paired twice")
            if first == second:
                raise PatternError(f"Letter {first} is paired with itself")
            if counts[first][0].exponent == counts[second][0].exponent:
                raise PatternError(f"Pair ({first} {second}) needs opposite exponents")
            aliases[second] = first
        self._aliases.update(aliases)

    @property
    def letter_names(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for polygon in self.polygons:
            for letter in polygon:
                seen.setdefault(letter.name, None)
        return tuple(seen)

    @property
    def free_letters(self) -> Tuple[str, ...]:
        paired = {name for pair in self.pairs for name in pair}
        return tuple(
            name for name in self.letter_names if self.multiplicity(name) == 1 and name not in paired
        )

    @property
    def edge_names(self) -> Tuple[str, ...]:
        """One canonical name per edge of the glued surface."""
        return tuple(name for name in self.letter_names if name not in self._aliases)

    def multiplicity(self, name: str) -> int:
        return sum(1 for polygon in self.polygons for letter in polygon if letter.name == name)

    def canonical(self, name: str) -> str:
        if name not in self.letter_names:
            raise WordError(f"Unknown letter {name!r}")
        return self._aliases.get(name, name)

    def canonical_letter(self, letter: Letter) -> Letter:
        return Letter(self.canonical(letter.name), letter.exponent)

    def is_free(self, name: str) -> bool:
        return name in self.free_letters

    def occurrences(self) -> Tuple[Occurrence, ...]:
        return tuple(
            Occurrence(p, k, letter)
            for p, polygon in enumerate(self.polygons)
            for k, letter in enumerate(polygon)
        )

    def glued_occurrences(self) -> List[Tuple[Occurrence, Occurrence]]:
        """Pairs of glued sides; the first occurrence carries the canonical name."""
        by_name: Dict[str, List[Occurrence]] = {}
        for occ in self.occurrences():
            by_name.setdefault(self.canonical(occ.letter.name), []).append(occ)
        return [(occs[0], occs[1]) for occs in by_name.values() if len(occs) == 2]


def parse_pattern(text: str) -> GluingPattern:
    polygons: List[Word] = []
    pairs: List[Tuple[str, str]] = []
    listed_free: List[str] = []
    group: str | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("free:"):
            listed_free.extend(line[len("free:"):].split())
        elif line.startswith("pair:"):
            body = line[len("pair:"):]
            found = PAIR_RE.findall(body)
            if PAIR_RE.sub("", body).strip():
                raise PatternError(f"Malformed pair directive: {raw!r}")
            pairs.extend(found)
        elif line.startswith("group:"):
            group = line[len("group:"):].strip() or None
        else:
            for chunk in line.split("|"):
                if not chunk.strip():
                    raise PatternError(f"Empty polygon in line {raw!r}")
                try:
                    polygons.append(parse_word(chunk))
                except WordError as exc:
                    raise PatternError(str(exc)) from exc
    pattern = GluingPattern(tuple(polygons), tuple(pairs), group)
    for name in listed_free:
        if not pattern.is_free(name):
            raise PatternError(f"Letter {name} is listed as free but labels a glued side")
    return pattern


def format_pattern(pattern: GluingPattern) -> str:
    lines = [format_word(polygon) for polygon in pattern.polygons]
    if pattern.free_letters:
        lines.append("free: " + " ".join(pattern.free_letters))
    if pattern.pairs:
        lines.append("pair: " + " ".join(f"({a} {b})" for a, b in pattern.pairs))
    if pattern.group:
        lines.append(f"group: {pattern.group}")
    return "\n".join(lines) + "\n"
