from __future__ import annotations

import numpy as np
import pytest

from src.data.loader import load_pattern
from src.forms.omega import compare_patterns, correspondence_map, omega_at
from src.forms.severa import letter_pair, severa_inverse, severa_mul, severa_unit
from src.forms.verification import (
    kernel_report,
    project_to_level,
    reduction_kernel_check,
    verify_d_omega,
    verify_moment,
)
from src.groupoid.cylinder import CylinderPoint, cylinder_omega_matrix
from src.moduli.chart import build_chart
from src.moduli.holonomy import identity_point, random_point
from src.moduli.mapping_class import stock_move
from src.surface.moves import add_interior_vertex_cut, triangulate


def _tangents(chart, rng, count):
    return [np.array([chart.model.random_algebra(rng) for _ in chart.generators]) for _ in range(count)]


def _same_pair(p, q, atol=1e-12):
    return (
        np.allclose(p.value, q.value, atol=atol)
        and np.allclose(p.differential, q.differential, atol=atol)
        and np.allclose(p.two_form, q.two_form, atol=atol)
    )


def test_bullet_product_is_a_group(chart_factory, model, rng):
    chart = chart_factory("torus1", model)
    point = random_point(chart, rng)
    p, q, r = (letter_pair(chart, point, word) for word in ("a", "b", "a b^-1"))
    left = severa_mul(model, severa_mul(model, p, q), r)
    right = severa_mul(model, p, severa_mul(model, q, r))
    assert _same_pair(left, right, atol=1e-11)
    unit = severa_unit(model, chart.dimension)
    assert _same_pair(severa_mul(model, p, unit), p)
    assert _same_pair(severa_mul(model, unit, p), p)
    assert _same_pair(severa_mul(model, p, severa_inverse(model, p)), unit, atol=1e-11)


def test_two_gon_form_vanishes(chart_factory, model, rng):
    chart = chart_factory("ngon2", model)
    assert np.all(omega_at(chart, random_point(chart, rng)) == 0.0)


def test_cylinder_matches_closed_form(chart_factory, model, rng):
    chart = chart_factory("cylinder", model)
    for _ in range(5):
        point = random_point(chart, rng)
        closed = cylinder_omega_matrix(model, CylinderPoint(*point))
        assert np.allclose(omega_at(chart, point), closed, atol=1e-12)


@pytest.mark.parametrize("name", ["torus1", "cylinder", "ngon3", "torus2", "cylinder2"])
def test_omega_is_antisymmetric_and_shortcut_agrees(name, chart_factory, model, rng):
    chart = chart_factory(name, model)
    point = random_point(chart, rng)
    omega = omega_at(chart, point)
    assert np.allclose(omega, -omega.T, atol=1e-12)
    assert np.allclose(omega_at(chart, point, shortcut=False), omega, atol=1e-11)


@pytest.mark.parametrize("name", ["torus1", "cylinder", "ngon3", "ngon4"])
def test_d_omega_is_minus_pulled_back_eta(name, chart_factory, model, rng):
    chart = chart_factory(name, model)
    for _ in range(3):
        point = random_point(chart, rng)
        x, y, z = _tangents(chart, rng, 3)
        assert verify_d_omega(chart, point, x, y, z) < 1e-5


@pytest.mark.parametrize("name", ["torus1", "cylinder", "ngon3", "cylinder2"])
def test_moment_condition(name, chart_factory, model, rng):
    chart = chart_factory(name, model)
    for _ in range(5):
        point = random_point(chart, rng)
        xi = np.array([model.random_algebra(rng) for _ in range(chart.num_vertices)])
        (v,) = _tangents(chart, rng, 1)
        scale = max(1.0, np.linalg.norm(omega_at(chart, point), 2)) * np.linalg.norm(xi) * np.linalg.norm(v)
        assert verify_moment(chart, point, xi, v) / scale < 1e-12


def test_moment_condition_absolute_on_su2(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    for _ in range(5):
        point = random_point(chart, rng)
        xi = np.array([su2_model.random_algebra(rng)])
        (v,) = _tangents(chart, rng, 1)
        assert verify_moment(chart, point, xi, v) < 1e-12


def test_kernel_report_at_identity(chart_factory, su2_model):
    chart = chart_factory("torus1", su2_model)
    report = kernel_report(chart, identity_point(chart))
    assert report.rank_dphi == 0
    assert report.stabilizer_dim == 3
    assert report.rank_identity_ok


@pytest.mark.parametrize("name", ["torus1", "cylinder", "ngon3"])
def test_kernel_report_at_generic_point(name, chart_factory, su2_model, rng):
    chart = chart_factory(name, su2_model)
    report = kernel_report(chart, random_point(chart, rng))
    assert report.passed
    assert report.min_degeneracy_sigma > 1e-9


def _triangulated_chart(pattern, chart, model):
    triangulated, correspondence = triangulate(pattern)
    hint = {
        index: letter.name
        for index, word in enumerate(triangulated.polygons)
        for letter in chart.eliminated.values()
        if any(other.name == letter.name for other in word)
    }
    return build_chart(triangulated, model, hint), correspondence


@pytest.mark.parametrize("name", ["torus1", "ngon4", "ngon5"])
def test_triangulation_leaves_form_unchanged(name, su2_model, rng):
    pattern = load_pattern(name)
    chart = build_chart(pattern, su2_model)
    chart_tri, correspondence = _triangulated_chart(pattern, chart, su2_model)
    assert chart_tri.generators == chart.generators
    gap = compare_patterns(
        chart_tri,
        chart,
        {name: name for name in chart.generators},
        5,
        rng,
        inverse_map=correspondence_map(chart_tri, correspondence),
    )
    assert gap < 1e-10


def test_interior_vertex_leaves_form_unchanged(su2_model, rng):
    pattern = load_pattern("torus1")
    chart = build_chart(pattern, su2_model)
    extended, _ = add_interior_vertex_cut(pattern, "x", (0, 1))
    chart_vertex = build_chart(extended, su2_model)
    assert chart_vertex.num_vertices == chart.num_vertices + 1
    gap = compare_patterns(chart_vertex, chart, {name: name for name in chart.generators}, 5, rng)
    assert gap < 1e-10


@pytest.mark.parametrize("move", ["torus_s", "torus_t"])
def test_mapping_class_invariance(move, chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    moved = stock_move(chart, move, rng)
    for _ in range(3):
        point = random_point(chart, rng)
        assert np.allclose(omega_at(moved, point), omega_at(chart, point), atol=1e-11)


def test_reduction_on_closed_genus_two(chart_factory, su2_model, rng):
    chart = chart_factory("torus2", su2_model)
    point = project_to_level(chart, random_point(chart, rng, scale=0.3))
    report = reduction_kernel_check(chart, point)
    assert report.regular
    assert report.passed
    assert report.kernel_dim == report.orbit_dim == su2_model.dim


def test_reduction_requires_level_set(chart_factory, su2_model, rng):
    chart = chart_factory("torus2", su2_model)
    with pytest.raises(ValueError):
        reduction_kernel_check(chart, random_point(chart, rng))


def test_reduction_rejects_identity_point(chart_factory, su2_model):
    chart = chart_factory("torus2", su2_model)
    report = reduction_kernel_check(chart, identity_point(chart))
    assert not report.regular
    assert not report.passed
    assert kernel_report(chart, identity_point(chart)).rank_dphi == 0
