"""Coordinator for the verification suites behind the command-line interface."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np
import pandas as pd

from src.data.loader import load_group, load_intersections, load_pattern
from src.dirac.courant import (
    CourantElement,
    anchor_generating_vector,
    pairing,
    section_pairing_law,
    structure_fiber_A,
    trivializing_section,
)
from src.dirac.morphism import quasi_poisson_bivector, range_kernel_props, verify_dirac_morphism
from src.dynamics.bracket import goldman_bracket
from src.dynamics.flows import (
    boundary_loop_edge,
    boundary_loop_flow,
    boundary_loop_function,
    flow_integrate,
    flow_series,
    flow_velocity,
    goldman_flow,
    phi_drift,
)
from src.dynamics.hamiltonian import hamiltonian_vector, jacobi_defect, poisson_bracket_numeric
from src.dynamics.loops import LoopFunction, ScalarField
from src.errors import ChartError, PatternError, SolveError
from src.forms.omega import compare_patterns, correspondence_map, omega_at
from src.forms.verification import (
    kernel_report,
    project_to_level,
    reduction_kernel_check,
    verify_d_omega,
    verify_moment,
)
from src.groupoid import cylinder
from src.groupoid.descent import descent_defect
from src.groupoid.orbits import orbit_form, orbit_moment_defect, sample_orbit_point
from src.lie.functions import InvariantFunction, get_function, require_invariant
from src.lie.models import LieGroupModel
from src.moduli.chart import ModuliChart, ModuliPoint, build_chart, word_endpoints
from src.moduli.holonomy import boundary_differential, random_point
from src.moduli.mapping_class import STOCK_MOVES, stock_move
from src.suites.config import RunConfig
from src.surface.moves import add_interior_vertex_cut, fresh_letter, triangulate
from src.surface.pattern import GluingPattern, format_pattern, parse_pattern
from src.surface.topology import analyze, boundary_vertex_count
from src.surface.words import format_word
from src.utils.linalg import antisymmetry_defect

NEGATIVE_CONTROL_NOISE = 1e-3


@dataclass(frozen=True)
class Check:
    name: str
    max_defect: float
    tolerance: float
    passed: bool
    kind: str = "upper"  # "lower": the value must stay above the tolerance


def upper_check(name: str, values: Sequence[float], tolerance: float) -> Check:
    worst = float(np.max(values)) if len(values) else 0.0
    return Check(name, worst, tolerance, bool(worst <= tolerance))


def lower_check(name: str, values: Sequence[float], bound: float) -> Check:
    worst = float(np.min(values)) if len(values) else float("inf")
    return Check(name, worst, bound, bool(worst > bound), kind="lower")


@dataclass
class SuiteResult:
    command: str
    checks: List[Check] = field(default_factory=list)
    samples: pd.DataFrame = field(default_factory=pd.DataFrame)
    payload: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _loop_generators(chart: ModuliChart) -> List[str]:
    return [name for name in chart.generators if len(set(word_endpoints(chart, name))) == 1]


class VerificationCoordinator:
    def __init__(
        self,
        config: RunConfig | None = None,
        pattern: GluingPattern | None = None,
        model: LieGroupModel | None = None,
    ) -> None:
        self.config = config or RunConfig()
        self.pattern = pattern if pattern is not None else load_pattern(self.config.pattern_path)
        self.model = model if model is not None else load_group(self.config.group_name)
        self.tol = self.config.tolerances
        self.event_log: List[Dict[str, object]] = []
        self._seeds = np.random.SeedSequence(self.config.seed)

    # -- plumbing ------------------------------------------------------
    def _rngs(self, count: int) -> List[np.random.Generator]:
        """Independent substreams; the k-th call of a run always gets the same streams."""
        return [np.random.default_rng(s) for s in self._seeds.spawn(count)]

    def _chart(self, pattern: GluingPattern | None = None) -> ModuliChart:
        return build_chart(pattern if pattern is not None else self.pattern, self.model)

    def _function(self) -> InvariantFunction:
        phi = get_function(self.config.function_name)
        require_invariant(self.model, phi)
        return phi

    def _tangent(self, chart: ModuliChart, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(size=(chart.n_generators, self.model.dim))

    def _vertex_data(self, chart: ModuliChart, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(size=(chart.num_vertices, self.model.dim))

    @property
    def _abelian(self) -> bool:
        return bool(np.max(np.abs(self.model.structure_constants), initial=0.0) == 0.0)

    def run(self) -> SuiteResult:
        runners: Dict[str, Callable[[], SuiteResult]] = {
            "surface": self.run_surface,
            "verify": self.run_verify,
            "flow": self.run_flow,
            "bracket": self.run_bracket,
            "groupoid": self.run_groupoid,
            "dirac": self.run_dirac,
        }
        result = runners[self.config.command]()
        failed = [check.name for check in result.checks if not check.passed]
        self._log(result.command, f"{len(result.checks) - len(failed)}/{len(result.checks)} checks passed")
        for name in failed:
            self._log(result.command, f"Check {name} failed")
        return result

    # -- surface -------------------------------------------------------
    def run_surface(self) -> SuiteResult:
        info = analyze(self.pattern)
        result = SuiteResult("surface")
        text = format_pattern(self.pattern)
        result.payload["surface"] = {
            "euler_characteristic": info.euler_characteristic,
            "num_vertices": info.num_vertices,
            "num_edges": info.num_edges,
            "num_polygons": info.num_polygons,
            "num_boundary_components": info.num_boundary_components,
            "graph_edge_count": info.graph_edge_count,
            "vertex_location": list(info.vertex_location),
            "conditions": info.conditions,
            "boundary_edges": [
                {"letter": str(e.letter), "source": e.source, "target": e.target} for e in info.boundary_edges
            ],
        }
        self._log("surface", f"chi={info.euler_characteristic} V={info.num_vertices} E={info.num_edges}")
        result.checks.append(
            upper_check(
                "free_letters_match_boundary",
                [abs(len(self.pattern.free_letters) - len(info.boundary_edges))],
                0.0,
            )
        )
        on_boundary = sum(1 for loc in info.vertex_location if loc == "boundary")
        result.checks.append(
            upper_check("boundary_vertex_count", [abs(boundary_vertex_count(info) - on_boundary)], 0.0)
        )
        result.checks.append(
            upper_check("pattern_round_trip", [float(format_pattern(parse_pattern(text)) != text)], 0.0)
        )
        try:
            chart = self._chart()
        except ChartError as exc:
            self._log("surface", f"No chart: {exc}")
            result.payload["chart"] = {"error": str(exc)}
        else:
            result.payload["chart"] = {
                "generators": list(chart.generators),
                "boundary_words": [format_word(w) for w in chart.boundary_words],
                "dimension": chart.dimension,
            }
            result.checks.append(
                upper_check("generator_count", [abs(chart.n_generators - info.graph_edge_count)], 0.0)
            )
        result.samples = pd.DataFrame(
            [
                {"polygon": index, "word": format_word(word), "sides": len(word)}
                for index, word in enumerate(self.pattern.polygons)
            ]
        )
        return result

    # -- forms ---------------------------------------------------------
    def run_verify(self) -> SuiteResult:
        chart = self._chart()
        a3 = chart.info.conditions["A3"]
        result = SuiteResult("verify")
        records: List[Dict[str, float]] = []
        first_report = None
        for index, rng in enumerate(self._rngs(self.config.n_samples)):
            point = random_point(chart, rng)
            x, y, z, v = (self._tangent(chart, rng) for _ in range(4))
            xi = self._vertex_data(chart, rng)
            report = kernel_report(chart, point)
            if first_report is None:
                first_report = report
            scale = max(1.0, float(np.linalg.norm(report.omega, 2)))
            moment_abs = verify_moment(chart, point, xi, v)
            moment = moment_abs / (scale * np.linalg.norm(xi) * np.linalg.norm(v))
            full = omega_at(chart, point, shortcut=False)
            records.append(
                {
                    "sample": index,
                    "d_omega_defect": verify_d_omega(chart, point, x, y, z, self.config.fd_step),
                    "moment_defect": moment,
                    "moment_defect_abs": moment_abs,
                    "cyclic_fold_defect": float(np.max(np.abs(full - report.omega))) / scale,
                    "antisymmetry_defect": antisymmetry_defect(report.omega) / scale,
                    "rank_identity_defect": float(abs(report.rank_dphi + report.stabilizer_dim - report.vertex_algebra_dim)),
                    "kernel_angle": report.kernel_angle,
                    "min_degeneracy_sigma": report.min_degeneracy_sigma,
                    "rank_dphi": report.rank_dphi,
                    "stabilizer_dim": report.stabilizer_dim,
                }
            )
        samples = pd.DataFrame(records)
        d_omega_tol = self.tol.algebraic if self._abelian else self.tol.fd
        result.checks += [
            upper_check("d_omega", samples["d_omega_defect"], d_omega_tol),
            upper_check("moment", samples["moment_defect"], self.tol.algebraic),
            upper_check("cyclic_fold", samples["cyclic_fold_defect"], self.tol.algebraic),
            upper_check("antisymmetry", samples["antisymmetry_defect"], self.tol.algebraic),
            upper_check("rank_identity", samples["rank_identity_defect"], 0.0),
        ]
        if a3:
            result.checks += [
                upper_check("kernel_formula", samples["kernel_angle"], self.tol.angle),
                lower_check("min_degeneracy", samples["min_degeneracy_sigma"], self.tol.linalg),
            ]
        else:
            self._log("verify", "Pattern has interior vertices; kernel formula and minimal degeneracy not asserted")
        result.checks += self._pattern_checks(chart)
        result.checks += self._mapping_class_checks(chart)
        reduction = self._reduction_check(chart)
        if reduction is not None:
            result.checks.append(reduction)
        result.samples = samples
        result.payload["omega"] = first_report.omega
        result.payload["dphi"] = first_report.dphi
        result.payload["generators"] = list(chart.generators)
        result.payload["conditions"] = chart.info.conditions
        return result

    def _pattern_checks(self, chart: ModuliChart) -> List[Check]:
        checks: List[Check] = []
        rng_tri, rng_vertex = self._rngs(2)
        samples = min(self.config.n_samples, 10)
        tolerance = 100 * self.tol.algebraic
        triangulated, correspondence = triangulate(self.pattern)
        if triangulated.polygons != self.pattern.polygons:
            hint = {
                index: letter.name
                for index, word in enumerate(triangulated.polygons)
                for letter in chart.eliminated.values()
                if any(other.name == letter.name for other in word)
            }
            try:
                chart_tri = build_chart(triangulated, self.model, hint)
            except ChartError as exc:
                self._log("verify", f"Triangulation has no compatible chart: {exc}")
            else:
                gap = compare_patterns(
                    chart_tri,
                    chart,
                    {name: name for name in chart.generators},
                    samples,
                    rng_tri,
                    inverse_map=correspondence_map(chart_tri, correspondence),
                )
                checks.append(upper_check("triangulation_invariance", [gap], tolerance))
        slit = fresh_letter(self.pattern, "x")
        extended, _ = add_interior_vertex_cut(self.pattern, slit, (0, 1))
        try:
            chart_vertex = build_chart(extended, self.model)
        except ChartError as exc:
            self._log("verify", f"Interior vertex insertion has no chart: {exc}")
        else:
            gap = compare_patterns(chart_vertex, chart, {name: name for name in chart.generators}, samples, rng_vertex)
            checks.append(upper_check("interior_vertex_invariance", [gap], tolerance))
        return checks

    def _mapping_class_checks(self, chart: ModuliChart) -> List[Check]:
        checks: List[Check] = []
        for name in STOCK_MOVES:
            try:
                moved = stock_move(chart, name, self._rngs(1)[0])
            except ChartError:
                continue
            if moved.boundary_words != chart.boundary_words:
                self._log("verify", f"Move {name} does not fix the boundary holonomy; skipped")
                continue
            gaps = []
            for rng in self._rngs(min(self.config.n_samples, 10)):
                point = random_point(chart, rng)
                before = omega_at(chart, point)
                gaps.append(float(np.linalg.norm(omega_at(moved, point) - before, 2)) / max(1.0, np.linalg.norm(before, 2)))
            checks.append(upper_check(f"mapping_class_{name}", gaps, 100 * self.tol.algebraic))
        return checks

    def _reduction_check(self, chart: ModuliChart) -> Check | None:
        """Closed-surface reduction, on charts with a single boundary loop."""
        if len(chart.boundary_words) != 1 or self._abelian:
            return None
        rng = self._rngs(1)[0]
        try:
            point = project_to_level(chart, random_point(chart, rng, scale=0.3))
        except SolveError as exc:
            self._log("verify", f"Reduction skipped: {exc}")
            return None
        report = reduction_kernel_check(chart, point)
        if not report.regular:
            self._log("verify", "Reduction point is not regular; kernel not asserted")
            return None
        return upper_check("reduction_kernel", [report.kernel_angle], 10 * self.tol.angle)

    # -- dynamics ------------------------------------------------------
    def _flow_checks(
        self,
        label: str,
        chart: ModuliChart,
        f: ScalarField,
        explicit: Callable[[ModuliPoint, float], ModuliPoint],
        rngs: Sequence[np.random.Generator],
    ) -> List[Dict[str, float]]:
        h = self.config.fd_step
        records = []
        for index, rng in enumerate(rngs):
            point = random_point(chart, rng)
            derivative = flow_velocity(chart, point, explicit, h)
            x_f = hamiltonian_vector(chart, point, f, self.tol.residual)
            end = explicit(point, self.config.flow_time)
            s, t = 0.3 * self.config.flow_time, 0.7 * self.config.flow_time
            twice = explicit(explicit(point, s), t)
            integrated = flow_integrate(chart, point, f, self.config.flow_time, self.config.flow_steps)
            records.append(
                {
                    "flow": label,
                    "sample": index,
                    "derivative_defect": float(np.max(np.abs(derivative - x_f))),
                    "integrator_defect": max(float(np.linalg.norm(a - b)) for a, b in zip(end, integrated)),
                    "phi_drift": phi_drift(chart, point, end),
                    "group_law_defect": max(
                        float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(b)))) for a, b in zip(twice, end)
                    ),
                    "value_drift": abs(f.value(chart, end) - f.value(chart, point)),
                }
            )
        return records

    def run_flow(self) -> SuiteResult:
        chart = self._chart()
        phi = self._function()
        result = SuiteResult("flow")
        records: List[Dict[str, float]] = []
        series: Dict[str, pd.DataFrame] = {}
        times = np.linspace(0.0, self.config.flow_time, 5)
        for vertex in range(chart.num_vertices):
            if not self._is_boundary_loop(chart, vertex):
                continue
            f = boundary_loop_function(chart, vertex, phi)

            def explicit(point, t, vertex=vertex):
                return boundary_loop_flow(chart, point, vertex, phi, t)

            label = f"boundary_v{vertex}"
            records += self._flow_checks(label, chart, f, explicit, self._rngs(self.config.n_samples))
            start = random_point(chart, self._rngs(1)[0])
            series[label] = flow_series(chart, start, explicit, f, times)
            self._log("flow", f"Boundary loop flow at vertex {vertex}")
        intersections = self._intersections()
        if intersections is not None and intersections.flows:
            loops = {item.loop for item in intersections.flows}
            if len(loops) != 1:
                raise PatternError("Goldman flow data must share one loop")
            f = LoopFunction.of(chart, next(iter(loops)), phi)

            def twist(point, t):
                return goldman_flow(chart, point, intersections.flows, phi, t)

            records += self._flow_checks("goldman", chart, f, twist, self._rngs(self.config.n_samples))
            start = random_point(chart, self._rngs(1)[0])
            series["goldman"] = flow_series(chart, start, twist, f, times)
            self._log("flow", f"Goldman flow along {format_word(f.loop)}")
        if not records:
            self._log("flow", "No boundary loop vertex and no intersection data; nothing to flow")
            return result
        samples = pd.DataFrame(records)
        result.checks += [
            upper_check("flow_derivative", samples["derivative_defect"], self.tol.derivative),
            upper_check("integrator_endpoint", samples["integrator_defect"], self.tol.flow),
            upper_check("phi_drift", samples["phi_drift"], 100 * self.tol.algebraic),
            upper_check("flow_group_law", samples["group_law_defect"], 100 * self.tol.algebraic),
            upper_check("value_conserved", samples["value_drift"], self.tol.flow),
        ]
        omega_defects = [float(df["omega_defect"].max()) for df in series.values()]
        result.checks.append(upper_check("flow_preserves_omega", omega_defects, self.tol.fd))
        result.samples = samples
        result.payload["series"] = {name: df for name, df in series.items()}
        return result

    def _intersections(self):
        source = self.config.intersections_path or self.config.pattern_path
        try:
            return load_intersections(source)
        except PatternError:
            self._log(self.config.command, f"No intersection data for {source}")
            return None

    def run_bracket(self) -> SuiteResult:
        chart = self._chart()
        phi = self._function()
        result = SuiteResult("bracket")
        intersections = self._intersections()
        if intersections is None or not intersections.brackets:
            return result
        records: List[Dict[str, float]] = []
        jacobi: List[float] = []
        for data in intersections.brackets:
            f = LoopFunction.of(chart, data.alpha, phi)
            g = LoopFunction.of(chart, data.beta, phi)
            h = LoopFunction.of(chart, data.alpha + data.beta, phi)
            casimirs = [
                boundary_loop_function(chart, vertex, phi)
                for vertex in range(chart.num_vertices)
                if self._is_boundary_loop(chart, vertex)
            ]
            for index, rng in enumerate(self._rngs(self.config.n_samples)):
                point = random_point(chart, rng)
                explicit = goldman_bracket(chart, point, data, phi, phi)
                rebased = goldman_bracket(chart, point, data.rebase(), phi, phi)
                numeric = poisson_bracket_numeric(chart, point, f, g)
                casimir = max((abs(poisson_bracket_numeric(chart, point, c, f)) for c in casimirs), default=0.0)
                records.append(
                    {
                        "alpha": format_word(data.alpha),
                        "beta": format_word(data.beta),
                        "sample": index,
                        "goldman": explicit,
                        "numeric": numeric,
                        "bracket_defect": abs(explicit - numeric),
                        "rebasing_defect": abs(rebased - explicit) / max(1.0, abs(explicit)),
                        "casimir_defect": casimir,
                    }
                )
            point = random_point(chart, self._rngs(1)[0])
            jacobi.append(jacobi_defect(chart, point, f, g, h, self.config.fd_step))
        samples = pd.DataFrame(records)
        result.checks += [
            upper_check("goldman_vs_numeric", samples["bracket_defect"], self.tol.relation),
            upper_check("goldman_rebasing", samples["rebasing_defect"], self.tol.algebraic),
            upper_check("boundary_casimir", samples["casimir_defect"], self.tol.relation),
            upper_check("jacobi", jacobi, self.tol.fd),
        ]
        result.samples = samples
        return result

    @staticmethod
    def _is_boundary_loop(chart: ModuliChart, vertex: int) -> bool:
        try:
            boundary_loop_edge(chart, vertex)
        except ChartError:
            return False
        return True

    # -- groupoid ------------------------------------------------------
    def run_groupoid(self) -> SuiteResult:
        model = self.model
        result = SuiteResult("groupoid")
        table = cylinder.verify_multiplicative(model, self.config.n_samples, self._rngs(1)[0], self.config.fd_step)
        extra: List[Dict[str, float]] = []
        cyl_chart = self._chart(load_pattern("cylinder"))
        descent_chart = self._chart(load_pattern("cylinder2"))
        if cyl_chart.generators != ("a", "c"):
            raise ChartError(f"Cylinder chart has generators {cyl_chart.generators}, expected (a, c)")
        for index, rng in enumerate(self._rngs(self.config.n_samples)):
            p = cylinder.CylinderPoint(model.random_element(rng), model.random_element(rng))
            closed_form = cylinder.cylinder_omega_matrix(model, p)
            severa = omega_at(cyl_chart, (p.a, p.c))
            scale = max(1.0, float(np.linalg.norm(closed_form, 2)))
            twisted = cylinder.dehn_twist(model, p)
            twist_jacobian = np.block(
                [[np.eye(model.dim), np.zeros((model.dim, model.dim))], [np.eye(model.dim), model.adjoint_matrix(model.inverse(p.a))]]
            )
            pulled = twist_jacobian.T @ cylinder.cylinder_omega_matrix(model, twisted) @ twist_jacobian
            round_trip = cylinder.compose(model, cylinder.inverse(model, p), p)
            orbit_moment, orbit_skew = 0.0, 0.0
            for n in (1, 2, 3):
                orbit = sample_orbit_point(model, tuple(model.random_element(rng) for _ in range(n)), rng)
                xi, zeta = (rng.normal(size=(n, model.dim)) for _ in range(2))
                scale = max(1.0, max(float(np.abs(model.adjoint_matrix(a)).max()) for a in orbit.components))
                orbit_moment = max(orbit_moment, orbit_moment_defect(model, orbit, xi, zeta) / scale)
                skew = orbit_form(model, orbit, xi, zeta) + orbit_form(model, orbit, zeta, xi)
                orbit_skew = max(orbit_skew, abs(skew) / scale)
            xi2, zeta2 = (rng.normal(size=(2, model.dim)) for _ in range(2))
            extra.append(
                {
                    "sample": index,
                    "closed_form_defect": float(np.max(np.abs(closed_form - severa))) / scale,
                    "twist_phi_defect": float(
                        np.linalg.norm(cylinder.target(model, twisted) - cylinder.target(model, p))
                        + np.linalg.norm(twisted.a - p.a)
                    ),
                    "twist_omega_defect": float(np.linalg.norm(pulled - closed_form, 2)) / scale,
                    "unit_defect": float(
                        np.linalg.norm(round_trip.a - p.a) + np.linalg.norm(round_trip.c - model.identity())
                    ),
                    "orbit_moment_defect": orbit_moment,
                    "orbit_skew_defect": orbit_skew,
                    "descent_defect": descent_defect(descent_chart, random_point(descent_chart, rng), xi2, zeta2),
                }
            )
        samples = table.merge(pd.DataFrame(extra), on="sample")
        result.checks += [
            upper_check("multiplicative", samples["multiplicative_defect"], 100 * self.tol.algebraic),
            upper_check("d_omega", samples["d_omega_defect"], self.tol.fd),
            lower_check("nondegenerate", samples["nondegeneracy_sigma"], self.tol.linalg),
            upper_check("closed_form_vs_severa", samples["closed_form_defect"], self.tol.algebraic),
            upper_check("dehn_twist_phi", samples["twist_phi_defect"], self.tol.algebraic * 100),
            upper_check("dehn_twist_omega", samples["twist_omega_defect"], 100 * self.tol.algebraic),
            upper_check("units_and_inverse", samples["unit_defect"], 100 * self.tol.algebraic),
            upper_check("orbit_moment", samples["orbit_moment_defect"], self.tol.algebraic),
            upper_check("orbit_skew", samples["orbit_skew_defect"], self.tol.algebraic),
            upper_check("orbit_descent_n2", samples["descent_defect"], 100 * self.tol.algebraic),
        ]
        result.samples = samples
        return result

    # -- dirac ---------------------------------------------------------
    def run_dirac(self) -> SuiteResult:
        chart = self._chart()
        model = self.model
        result = SuiteResult("dirac")
        if not chart.info.conditions["A3"]:
            self._log("dirac", "Pattern has interior vertices; morphism checks need every vertex on the boundary")
        loops = _loop_generators(chart)
        records: List[Dict[str, float]] = []
        bivector_records: List[Dict[str, float]] = []
        for index, rng in enumerate(self._rngs(self.config.n_samples)):
            point = random_point(chart, rng)
            values, _ = boundary_differential(chart, point)
            edges = chart.info.boundary_edges
            g = model.random_element(rng)
            data = [model.random_algebra(rng) for _ in range(4)]
            s1 = trivializing_section(model, g, data[0], data[1])
            s2 = trivializing_section(model, g, data[2], data[3])
            paired = pairing(
                model, CourantElement(s1[0][None], s1[1][None]), CourantElement(s2[0][None], s2[1][None])
            )
            fiber = structure_fiber_A(model, values, edges, chart.num_vertices)
            anchor = max(
                (
                    float(np.max(np.abs(element.vector - anchor_generating_vector(model, values, edges, xi))))
                    for element, xi in zip(fiber.basis, _vertex_basis(chart.num_vertices, model.dim))
                ),
                default=0.0,
            )
            record = {
                "sample": index,
                "pairing_law_defect": abs(paired - section_pairing_law(model, *data)),
                "isotropy_defect": fiber.isotropy_defect(),
                "lagrangian_rank_defect": float(abs(2 * fiber.rank() - fiber.ambient_dimension)),
                "anchor_defect": anchor,
            }
            if chart.info.conditions["A3"]:
                morphism = verify_dirac_morphism(chart, point)
                omega = omega_at(chart, point)
                noise = rng.normal(size=omega.shape)
                control = verify_dirac_morphism(chart, point, omega + NEGATIVE_CONTROL_NOISE * (noise - noise.T))
                ranges = range_kernel_props(chart, point)
                record.update(
                    {
                        "existence_residual": morphism.existence_residual,
                        "uniqueness_sigma": morphism.uniqueness_sigma,
                        "comorphism_defect": morphism.comorphism_defect,
                        "negative_control_missed": float(control.passed),
                        "annihilator_angle": ranges.annihilator_angle,
                        "isomorphism_angle": ranges.isomorphism_angle,
                        "isomorphism_condition": ranges.isomorphism_condition,
                    }
                )
                bivector_records += self._bivector_records(chart, point, loops, index)
            records.append(record)
        samples = pd.DataFrame(records)
        result.checks += [
            upper_check("pairing_law", samples["pairing_law_defect"], self.tol.algebraic),
            upper_check("fiber_isotropy", samples["isotropy_defect"], self.tol.algebraic),
            upper_check("fiber_lagrangian", samples["lagrangian_rank_defect"], 0.0),
            upper_check("anchor_is_generating_vector", samples["anchor_defect"], self.tol.algebraic),
        ]
        if "existence_residual" in samples:
            result.checks += [
                upper_check("morphism_existence", samples["existence_residual"], self.tol.residual),
                lower_check("morphism_uniqueness", samples["uniqueness_sigma"], self.tol.linalg),
                upper_check("comorphism", samples["comorphism_defect"], self.tol.angle),
                upper_check("negative_control", samples["negative_control_missed"], 0.0),
                upper_check("annihilator", samples["annihilator_angle"], self.tol.angle),
                upper_check("kernel_isomorphism", samples["isomorphism_angle"], self.tol.angle),
            ]
        if bivector_records:
            bivectors = pd.DataFrame(bivector_records)
            result.checks += [
                upper_check("bivector_antisymmetry", bivectors["antisymmetry_defect"], self.tol.algebraic),
                upper_check("bivector_hamiltonian", bivectors["hamiltonian_defect"], self.tol.relation),
                upper_check("bivector_bracket", bivectors["bracket_defect"], self.tol.relation),
            ]
            result.payload["bivector"] = bivectors
        result.samples = samples
        return result

    def _bivector_records(
        self, chart: ModuliChart, point: ModuliPoint, loops: Sequence[str], index: int
    ) -> List[Dict[str, float]]:
        try:
            qp = quasi_poisson_bivector(chart, point)
        except SolveError as exc:
            self._log("dirac", f"Sample {index}: no bivector ({exc})")
            return []
        phi = self._function()
        functions = [LoopFunction.of(chart, name, phi) for name in loops[:2]]
        if len(functions) < 2:
            return []
        f, g = functions
        grad_f = f.gradient(chart, point)
        grad_g = g.gradient(chart, point)
        x_f = hamiltonian_vector(chart, point, f, self.tol.residual).reshape(-1)
        scale = max(1.0, float(np.linalg.norm(qp.bivector, 2)))
        return [
            {
                "sample": index,
                "antisymmetry_defect": qp.antisymmetry_defect / scale,
                "transversality_sigma": qp.transversality_sigma,
                "hamiltonian_defect": float(np.max(np.abs(qp.bivector @ grad_f - x_f))),
                "bracket_defect": abs(float(grad_g @ qp.bivector @ grad_f) - poisson_bracket_numeric(chart, point, f, g)),
            }
        ]

    # -- event log -----------------------------------------------------
    def _log(self, suite: str, message: str) -> None:
        self.event_log.append({"step": len(self.event_log), "suite": suite, "message": message})

    def get_event_log(self) -> pd.DataFrame:
        if not self.event_log:
            return pd.DataFrame(columns=["step", "suite", "message"])
        df = pd.DataFrame(self.event_log)
        return df.sort_values("step").reset_index(drop=True)


def _vertex_basis(num_vertices: int, dim: int):
    for vertex in range(num_vertices):
        for j in range(dim):
            xi = np.zeros((num_vertices, dim))
            xi[vertex, j] = 1.0
            yield xi
