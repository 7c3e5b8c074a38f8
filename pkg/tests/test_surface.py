from __future__ import annotations

import pytest

from src.data.loader import list_stock_patterns, load_pattern
from src.errors import PatternError, WordError
from src.surface.moves import (
    add_interior_vertex_cut,
    contract_interior_vertex,
    cut_diagonal,
    glue_edges,
    triangulate,
)
from src.surface.pattern import format_pattern, parse_pattern
from src.surface.topology import BoundaryEdge, analyze, boundary_circles_close, boundary_vertex_count
from src.surface.words import Letter, format_word, free_reduce, invert_word, parse_word


def test_parse_word_and_format():
    word = parse_word("a b^-1 c'")
    assert word == (Letter("a", 1), Letter("b", -1), Letter("c'", 1))
    assert format_word(word) == "a b^-1 c'"
    assert invert_word(word) == (Letter("c'", -1), Letter("b", 1), Letter("a", -1))
    assert free_reduce(parse_word("a b b^-1 a^-1 c")) == parse_word("c")


def test_malformed_word_rejected():
    with pytest.raises(WordError):
        parse_word("a ^2")


def test_one_holed_torus():
    info = analyze(parse_pattern("a b a^-1 b^-1 c\nfree: c\n"))
    assert info.num_vertices == 1
    assert info.euler_characteristic == -1
    assert len(info.boundary_edges) == 1
    assert info.conditions == {"A1": True, "A2": True, "A3": True}


def test_two_triangles_give_closed_torus():
    info = analyze(parse_pattern("a b c | a^-1 b^-1 c^-1"))
    assert info.num_vertices == 1
    assert info.euler_characteristic == 0
    assert info.is_closed
    assert not info.conditions["A1"]


def test_hexagon_with_opposite_sides_has_two_vertices():
    info = analyze(load_pattern("torus_hexagon"))
    assert info.num_vertices == 2
    assert info.euler_characteristic == 0


def test_square_word_is_closed():
    info = analyze(parse_pattern("a b a^-1 b^-1"))
    assert info.euler_characteristic == 0
    assert info.boundary_edges == ()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ngon(n):
    info = analyze(load_pattern(f"ngon{n}"))
    assert info.euler_characteristic == 1
    assert info.num_vertices == n
    assert len(info.boundary_edges) == n
    for i, edge in enumerate(info.boundary_edges):
        assert edge.source == info.vertex_of_corner[(0, (i + 1) % n)]
        assert edge.target == info.vertex_of_corner[(0, i)]


def test_cylinder():
    info = analyze(load_pattern("cylinder"))
    assert info.num_vertices == 2
    assert info.euler_characteristic == 0
    assert info.num_boundary_components == 2
    assert info.graph_edge_count == 2


def test_interior_vertex_flagged():
    info = analyze(load_pattern("hexagon_boundary"))
    assert "interior" in info.vertex_location
    assert not info.conditions["A3"]


@pytest.mark.parametrize("name", list_stock_patterns())
def test_stock_patterns_round_trip(name):
    pattern = load_pattern(name)
    text = format_pattern(pattern)
    assert format_pattern(parse_pattern(text)) == text
    info = analyze(pattern)
    assert len(pattern.free_letters) == len(info.boundary_edges)
    on_boundary = sum(1 for loc in info.vertex_location if loc == "boundary")
    assert boundary_vertex_count(info) == on_boundary


def test_explicit_pairs():
    pattern = load_pattern("torus1_pairs")
    assert pattern.canonical("p") == "a"
    info = analyze(pattern)
    assert info.num_vertices == 1
    assert info.euler_characteristic == -1


@pytest.mark.parametrize(
    "text",
    [
        "a a b",  # same orientation twice
        "a b a^-1 a",  # three occurrences
        "a b\npair: (a a)",
        "a b |",
    ],
)
def test_invalid_patterns(text):
    with pytest.raises(PatternError):
        parse_pattern(text)


def test_free_directive_checked():
    with pytest.raises(PatternError):
        parse_pattern("a b a^-1 b^-1 c\nfree: a\n")


def _same_surface(p, q):
    a, b = analyze(p), analyze(q)
    return (
        a.euler_characteristic == b.euler_characteristic
        and a.num_vertices == b.num_vertices
        and len(a.boundary_edges) == len(b.boundary_edges)
        and a.num_boundary_components == b.num_boundary_components
    )


@pytest.mark.parametrize("name", ["torus1", "ngon5", "cylinder", "torus2", "hexagon_boundary", "torus_hexagon"])
def test_random_cuts_preserve_surface(name, rng):
    pattern = load_pattern(name)
    for _ in range(50):
        polygon = int(rng.integers(len(pattern.polygons)))
        n = len(pattern.polygons[polygon])
        if n < 4:
            continue
        i = int(rng.integers(1, n - 1))
        choices = [j for j in range(i + 2, n + 1) if not (i == 1 and j == n)]
        if not choices:
            continue
        j = int(rng.choice(choices))
        cut, correspondence = cut_diagonal(pattern, polygon, i, j)
        assert _same_surface(pattern, cut)
        (new,) = correspondence
        assert len(cut.polygons) == len(pattern.polygons) + 1
        assert correspondence[new] == invert_word(pattern.polygons[polygon][i - 1:j - 1])


def test_cut_then_glue_restores_pattern():
    pattern = load_pattern("torus1")
    cut, correspondence = cut_diagonal(pattern, 0, 1, 3)
    (name,) = correspondence
    glued = glue_edges(cut, name, name)
    assert _same_surface(glued, pattern)
    assert len(glued.polygons[0]) == len(pattern.polygons[0])
    word = format_word(glued.polygons[0])
    doubled = format_word(pattern.polygons[0] * 2)
    assert word in doubled


def test_hexagon_cut_gives_pentagon_and_triangle():
    pattern = load_pattern("torus_hexagon")
    cut, _ = cut_diagonal(pattern, 0, 1, 3)
    assert sorted(len(p) for p in cut.polygons) == [3, 5]
    assert _same_surface(pattern, cut)


def test_cut_rejects_adjacent_corners():
    pattern = load_pattern("torus1")
    with pytest.raises(PatternError):
        cut_diagonal(pattern, 0, 1, 2)
    with pytest.raises(PatternError):
        cut_diagonal(pattern, 0, 1, 5)
    with pytest.raises(PatternError):
        cut_diagonal(pattern, 3, 1, 3)


def test_glue_rejects_same_polygon():
    with pytest.raises(PatternError):
        glue_edges(load_pattern("torus1"), "a", "a")


def test_interior_vertex_round_trip():
    pattern = load_pattern("torus1")
    extended, correspondence = add_interior_vertex_cut(pattern, "x", (0, 1))
    assert correspondence == {"x": ()}
    before, after = analyze(pattern), analyze(extended)
    assert after.num_vertices == before.num_vertices + 1
    assert after.euler_characteristic == before.euler_characteristic
    assert "interior" in after.vertex_location
    assert contract_interior_vertex(extended, "x").polygons == pattern.polygons
    with pytest.raises(PatternError):
        add_interior_vertex_cut(pattern, "a", (0, 1))


def test_triangulate():
    pattern = load_pattern("torus2")
    triangulated, correspondence = triangulate(pattern)
    assert all(len(p) == 3 for p in triangulated.polygons)
    assert _same_surface(pattern, triangulated)
    assert len(correspondence) == len(triangulated.polygons) - 1
    letters = {letter.name for word in correspondence.values() for letter in word}
    assert letters <= set(pattern.letter_names)


@pytest.mark.parametrize("name", list_stock_patterns())
def test_boundary_circles_close_on_stock_patterns(name):
    info = analyze(load_pattern(name))
    assert info.conditions["A2"] == boundary_circles_close(info.boundary_edges)
    assert info.conditions["A2"]


def test_open_boundary_chain_detected():
    chain = (
        BoundaryEdge(letter=Letter("c"), polygon=0, side=0, source=0, target=1),
        BoundaryEdge(letter=Letter("d"), polygon=0, side=1, source=1, target=2),
    )
    assert not boundary_circles_close(chain)
    closing = BoundaryEdge(letter=Letter("e"), polygon=0, side=2, source=2, target=0)
    assert boundary_circles_close(chain + (closing,))
