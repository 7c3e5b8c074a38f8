from __future__ import annotations

import json

import numpy as np
import pytest

from src.data.loader import load_intersections
from src.dynamics.bracket import BracketData, goldman_bracket
from src.dynamics.flows import (
    IntersectionData,
    boundary_loop_edge,
    boundary_loop_flow,
    boundary_loop_function,
    flow_integrate,
    flow_velocity,
    goldman_flow,
    phi_drift,
)
from src.dynamics.hamiltonian import hamiltonian_vector, jacobi_defect, poisson_bracket_numeric
from src.dynamics.loops import LoopFunction, fd_gradient
from src.errors import ChartError, PatternError, WordError
from src.lie.functions import RE_TRACE, RE_TRACE_SQUARED, phi_dot
from src.moduli.holonomy import holonomy, random_point
from src.surface.words import as_word

def test_loop_gradient_matches_finite_difference(chart_factory, model, rng):
    chart = chart_factory("torus1", model)
    point = random_point(chart, rng)
    f = LoopFunction.of(chart, "a b", RE_TRACE)
    numeric = fd_gradient(chart, point, lambda c, p: f.value(c, p))
    assert np.allclose(f.gradient(chart, point), numeric, atol=1e-7)


def test_open_path_is_not_a_loop(chart_factory, su2_model):
    chart = chart_factory("cylinder", su2_model)
    with pytest.raises(WordError):
        LoopFunction.of(chart, "c", RE_TRACE)


def test_cylinder_hamiltonian_vector(chart_factory, su2_model, rng):
    chart = chart_factory("cylinder", su2_model)
    point = random_point(chart, rng)
    vertex = chart.info.boundary_edges[0].source
    f = boundary_loop_function(chart, vertex, RE_TRACE)
    field = hamiltonian_vector(chart, point, f)
    assert np.allclose(field[0], 0.0, atol=1e-10)
    assert np.allclose(field[1], phi_dot(su2_model, RE_TRACE, point[0]), atol=1e-10)


@pytest.mark.parametrize("name", ["torus1", "cylinder"])
def test_boundary_flow_generates_hamiltonian_vector(name, chart_factory, model, rng):
    chart = chart_factory(name, model)
    point = random_point(chart, rng)
    for vertex in range(chart.num_vertices):
        f = boundary_loop_function(chart, vertex, RE_TRACE)
        numeric = flow_velocity(chart, point, lambda p, t: boundary_loop_flow(chart, p, vertex, RE_TRACE, t))
        assert np.allclose(numeric, hamiltonian_vector(chart, point, f), atol=1e-7)


def test_boundary_flow_needs_lonely_vertex(chart_factory, su2_model):
    chart = chart_factory("ngon3", su2_model)
    with pytest.raises(ChartError):
        boundary_loop_edge(chart, 0)


def test_goldman_flow_on_torus(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    flows = load_intersections("torus1").flows
    point = random_point(chart, rng)
    a, b = point
    xi = phi_dot(su2_model, RE_TRACE, a)
    for t in (0.3, 1.0, 2.5):
        flowed = goldman_flow(chart, point, flows, RE_TRACE, t)
        assert np.allclose(flowed[0], a)
        assert np.allclose(flowed[1], b @ su2_model.exp(-t * xi), atol=1e-12)
        assert phi_drift(chart, point, flowed) < 1e-12

    f = LoopFunction.of(chart, "a", RE_TRACE)
    numeric = flow_velocity(chart, point, lambda p, t: goldman_flow(chart, p, flows, RE_TRACE, t))
    assert np.allclose(numeric, hamiltonian_vector(chart, point, f), atol=1e-7)


def test_intersection_data_validated(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    point = random_point(chart, rng)
    bad = IntersectionData.of("b", ["a", ""], [-1], "a")
    with pytest.raises(WordError):
        goldman_flow(chart, point, [bad], RE_TRACE, 1.0)
    with pytest.raises(WordError):
        goldman_flow(chart, point, [IntersectionData.of("b", ["b", ""], [2], "a")], RE_TRACE, 1.0)


def test_integrator_matches_explicit_flow(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    point = random_point(chart, rng)
    f = boundary_loop_function(chart, 0, RE_TRACE)
    integrated = flow_integrate(chart, point, f, 1.0, 200)
    explicit = boundary_loop_flow(chart, point, 0, RE_TRACE, 1.0)
    assert max(np.linalg.norm(x - y) for x, y in zip(integrated, explicit)) < 1e-6
    assert phi_drift(chart, point, integrated) < 1e-6
    assert f.value(chart, integrated) == pytest.approx(f.value(chart, point), abs=1e-6)


def test_goldman_bracket_matches_numeric(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    data = load_intersections("torus1").brackets[0]
    f_a = LoopFunction.of(chart, "a", RE_TRACE)
    f_b = LoopFunction.of(chart, "b", RE_TRACE)
    for _ in range(5):
        point = random_point(chart, rng)
        numeric = poisson_bracket_numeric(chart, point, f_a, f_b)
        formula = goldman_bracket(chart, point, data, RE_TRACE, RE_TRACE)
        assert numeric == pytest.approx(formula, abs=1e-8 * max(1.0, abs(formula)))


def test_goldman_bracket_with_several_crossings(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    _, segmented, explicit = load_intersections("torus1").brackets
    f_a = LoopFunction.of(chart, "a", RE_TRACE)
    f_beta = LoopFunction.of(chart, "b a b", RE_TRACE)
    for _ in range(5):
        point = random_point(chart, rng)
        numeric = poisson_bracket_numeric(chart, point, f_a, f_beta)
        for data in (segmented, explicit):
            formula = goldman_bracket(chart, point, data, RE_TRACE, RE_TRACE)
            assert numeric == pytest.approx(formula, abs=1e-8 * max(1.0, abs(formula)))


@pytest.mark.parametrize("loop", [None, "a", "b^-1", "a b a^-1 b"])
def test_goldman_bracket_ignores_common_rebasing(loop, chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    point = random_point(chart, rng)
    for data in load_intersections("torus1").brackets:
        value = goldman_bracket(chart, point, data, RE_TRACE, RE_TRACE_SQUARED)
        moved = goldman_bracket(chart, point, data.rebase(loop), RE_TRACE, RE_TRACE_SQUARED)
        assert abs(moved - value) <= 1e-12 * max(1.0, abs(value))


def test_bracket_data_from_segments():
    data = BracketData.from_segments("a", ["b", "a b", ""], [-1, -1])
    assert data.beta == as_word("b a b")
    assert [c.sign for c in data.crossings] == [-1, -1]
    assert [c.beta_path for c in data.crossings] == [as_word("b^-1"), as_word("b^-1 a^-1 b^-1")]
    assert all(c.alpha_path == () for c in data.crossings)
    with pytest.raises(WordError):
        BracketData.from_segments("a", ["b", ""], [1, 1])


def test_malformed_crossing_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"brackets": [{"alpha": "a", "beta": "b", "crossings": [[-1, "b"]]}]}))
    with pytest.raises(PatternError):
        load_intersections(path)


@pytest.mark.parametrize("s, t", [(0.3, 1.1), (1.1, 0.3)])
def test_explicit_flows_are_one_parameter_groups(s, t, chart_factory, su2_model, rng):
    torus = chart_factory("torus1", su2_model)
    flows = load_intersections("torus1").flows
    point = random_point(torus, rng)
    twice = goldman_flow(torus, goldman_flow(torus, point, flows, RE_TRACE, s), flows, RE_TRACE, t)
    once = goldman_flow(torus, point, flows, RE_TRACE, s + t)
    assert max(np.max(np.abs(x - y)) for x, y in zip(twice, once)) < 1e-12
    for name in ("torus1", "cylinder"):
        chart = chart_factory(name, su2_model)
        point = random_point(chart, rng)
        vertex = chart.info.boundary_edges[0].source
        twice = boundary_loop_flow(chart, boundary_loop_flow(chart, point, vertex, RE_TRACE, s), vertex, RE_TRACE, t)
        once = boundary_loop_flow(chart, point, vertex, RE_TRACE, s + t)
        assert max(np.max(np.abs(x - y)) for x, y in zip(twice, once)) < 1e-12


def test_boundary_function_is_casimir(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    point = random_point(chart, rng)
    casimir = boundary_loop_function(chart, 0, RE_TRACE)
    for loop in ("a", "b", "a b"):
        f = LoopFunction.of(chart, loop, RE_TRACE)
        assert abs(poisson_bracket_numeric(chart, point, casimir, f)) < 1e-8


def test_jacobi_identity(chart_factory, su2_model, rng):
    chart = chart_factory("torus1", su2_model)
    point = random_point(chart, rng)
    f, g, h = (LoopFunction.of(chart, loop, RE_TRACE) for loop in ("a", "b", "a b"))
    assert jacobi_defect(chart, point, f, g, h) < 1e-5


def test_bracket_data_rejects_open_loops(chart_factory, su2_model, rng):
    chart = chart_factory("cylinder", su2_model)
    data = BracketData.of("a", "c", [(1, "", "")])
    with pytest.raises(WordError):
        goldman_bracket(chart, random_point(chart, rng), data, RE_TRACE, RE_TRACE)


def test_holonomy_along_flow_keeps_class(chart_factory, su2_model, rng):
    chart = chart_factory("cylinder", su2_model)
    point = random_point(chart, rng)
    flowed = boundary_loop_flow(chart, point, chart.info.boundary_edges[0].source, RE_TRACE, 0.7)
    before = np.trace(holonomy(chart, point, "c a c^-1")).real
    after = np.trace(holonomy(chart, flowed, "c a c^-1")).real
    assert after == pytest.approx(before, abs=1e-12)
