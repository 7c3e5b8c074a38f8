"""Pattern moves: diagonal cuts, gluing, interior vertices and triangulation."""
from __future__ import annotations

from typing import Dict, Tuple

from src.errors import PatternError
from src.surface.pattern import GluingPattern
from src.surface.words import Letter, Word, free_reduce, invert_word, rotate

Correspondence = Dict[str, Word]  # new letter -> word in the old letters


def fresh_letter(pattern: GluingPattern, stem: str = "d") -> str:
    used = set(pattern.letter_names)
    index = 1
    while f"{stem}{index}" in used:
        index += 1
    return f"{stem}{index}"


def _replace_polygons(pattern: GluingPattern, index: int, new: Tuple[Word, ...]) -> Tuple[Word, ...]:
    return pattern.polygons[:index] + new + pattern.polygons[index + 1:]


def cut_diagonal(
    pattern: GluingPattern, polygon: int, corner_i: int, corner_j: int, name: str | None = None
) -> Tuple[GluingPattern, Correspondence]:
    """Cut a polygon along the diagonal between two non-adjacent corners (1-based)."""
    if not 0 <= polygon < len(pattern.polygons):
        raise PatternError(f"No polygon {polygon}")
    word = pattern.polygons[polygon]
    n = len(word)
    i, j = sorted((corner_i, corner_j))
    if i < 1 or j > n:
        raise PatternError(f"Corners {corner_i}, {corner_j} outside a {n}-gon")
    if j - i < 2 or (i == 1 and j == n):
        raise PatternError(f"Corners {corner_i} and {corner_j} are adjacent")
    name = name or fresh_letter(pattern)
    if name in pattern.letter_names:
        raise PatternError(f"Letter {name} already present")
    first_part = word[i - 1:j - 1]
    second_part = word[j - 1:] + word[:i - 1]
    diagonal = Letter(name, 1)
    pieces = (first_part + (diagonal,), (diagonal.inverse(),) + second_part)
    cut = GluingPattern(_replace_polygons(pattern, polygon, pieces), pattern.pairs, pattern.group)
    return cut, {name: invert_word(first_part)}


def glue_edges(pattern: GluingPattern, e: str, f: str) -> GluingPattern:
    """Merge the two polygons carrying the glued letters ``e`` and ``f``."""
    occurrences = [o for o in pattern.occurrences() if o.letter.name in (e, f)]
    glued = e == f and len(occurrences) == 2
    explicit = e != f and ((e, f) in pattern.pairs or (f, e) in pattern.pairs)
    if not (glued or explicit):
        raise PatternError(f"Letters {e} and {f} do not label a glued pair")
    first, second = occurrences
    if first.polygon == second.polygon:
        raise PatternError("Gluing sides of the same polygon is not a polygon merge")
    head = rotate(pattern.polygons[first.polygon], first.side + 1)[:-1]
    tail = rotate(pattern.polygons[second.polygon], second.side)[1:]
    polygons = list(pattern.polygons)
    polygons[first.polygon] = head + tail
    del polygons[second.polygon]
    pairs = tuple(p for p in pattern.pairs if set(p) != {e, f})
    return GluingPattern(tuple(polygons), pairs, pattern.group)


def add_interior_vertex_cut(
    pattern: GluingPattern, vertex: str, target: Tuple[int, int]
) -> Tuple[GluingPattern, Correspondence]:
    """Insert a slit ``x x^-1`` ending at a new interior vertex.

    ``vertex`` names the slit letter; ``target`` is (polygon, corner) with
    1-based corners, corner k sitting before side k.
    """
    if vertex in pattern.letter_names:
        raise PatternError(f"Vertex {vertex} already present")
    polygon, corner = target
    if not 0 <= polygon < len(pattern.polygons):
        raise PatternError(f"No polygon {polygon}")
    word = pattern.polygons[polygon]
    if not 1 <= corner <= len(word):
        raise PatternError(f"No corner {corner} in polygon {polygon}")
    slit = (Letter(vertex, 1), Letter(vertex, -1))
    new_word = word[:corner - 1] + slit + word[corner - 1:]
    moved = GluingPattern(_replace_polygons(pattern, polygon, (new_word,)), pattern.pairs, pattern.group)
    return moved, {vertex: ()}


def contract_interior_vertex(pattern: GluingPattern, vertex: str) -> GluingPattern:
    for p, word in enumerate(pattern.polygons):
        for k in range(len(word)):
            pair = (word[k], word[(k + 1) % len(word)])
            if pair == (Letter(vertex, 1), Letter(vertex, -1)) and len(word) > 2:
                kept = word[:k] + word[k + 2:] if k + 1 < len(word) else word[1:-1]
                return GluingPattern(_replace_polygons(pattern, p, (kept,)), pattern.pairs, pattern.group)
    raise PatternError(f"No slit {vertex} {vertex}^-1 to contract")


def triangulate(pattern: GluingPattern) -> Tuple[GluingPattern, Correspondence]:
    """Fan every polygon with more than three sides into triangles."""
    correspondence: Correspondence = {}
    current = pattern
    polygon = 0
    while polygon < len(current.polygons):
        if len(current.polygons[polygon]) <= 3:
            polygon += 1
            continue
        current, step = cut_diagonal(current, polygon, 1, 3)
        for name, word in step.items():
            expanded = []
            for letter in word:
                if letter.name in correspondence:
                    sub = correspondence[letter.name]
                    expanded.extend(sub if letter.exponent > 0 else invert_word(sub))
                else:
                    expanded.append(letter)
            correspondence[name] = free_reduce(expanded)
        polygon += 1
    return current, correspondence
