"""Explicit Hamiltonian flows (boundary loops, Goldman twists) and a Lie group integrator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from src.dynamics.hamiltonian import hamiltonian_vector
from src.dynamics.loops import LoopFunction, ScalarField
from src.errors import ChartError, WordError
from src.forms.omega import omega_at
from src.lie.functions import InvariantFunction, phi_dot
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import action_apply, boundary_holonomy, holonomy
from src.surface.words import Word, as_word, free_reduce, invert_word


def boundary_loop_edge(chart: ModuliChart, vertex: int) -> int:
    """Index of the boundary edge forming a one-vertex boundary circle at ``vertex``."""
    incident = chart.info.edges_at(vertex)
    loops = [e for e in incident if chart.info.boundary_edges[e].source == chart.info.boundary_edges[e].target]
    if len(incident) != 1 or len(loops) != 1:
        raise ChartError(f"Vertex {vertex} is not alone on its boundary circle")
    return loops[0]


def boundary_loop_function(chart: ModuliChart, vertex: int, phi: InvariantFunction) -> LoopFunction:
    return LoopFunction(chart.boundary_words[boundary_loop_edge(chart, vertex)], phi)


def boundary_loop_flow(
    chart: ModuliChart, point: ModuliPoint, vertex: int, phi: InvariantFunction, t: float
) -> ModuliPoint:
    """Time-t flow of phi(boundary holonomy at vertex): gauge by exp(-t phi_dot) there."""
    edge = boundary_loop_edge(chart, vertex)
    value = holonomy(chart, point, chart.boundary_words[edge])
    xi = phi_dot(chart.model, phi, value)
    gauge = [chart.model.identity() for _ in range(chart.num_vertices)]
    gauge[vertex] = chart.model.exp(-t * xi)
    return action_apply(chart, gauge, point)


@dataclass(frozen=True)
class IntersectionData:
    """How a generator ``target`` crosses the loop: target = segments[0] ... segments[l],
    crossing with signs[i-1] between segments[i-1] and segments[i]."""

    target: str
    segments: Tuple[Word, ...]
    signs: Tuple[int, ...]
    loop: Word

    @classmethod
    def of(cls, target: str, segments: Sequence["Word | str"], signs: Sequence[int], loop: "Word | str"):
        return cls(target, tuple(as_word(s) for s in segments), tuple(int(s) for s in signs), as_word(loop))

    def validate(self, chart: ModuliChart) -> None:
        if len(self.segments) != len(self.signs) + 1:
            raise WordError("Need exactly one more segment than crossing signs")
        if any(sign not in (1, -1) for sign in self.signs):
            raise WordError("Crossing signs must be +1 or -1")
        if self.target not in chart.generators:
            raise WordError(f"Flow target {self.target!r} is not a chart generator")
        joined = chart.expand(tuple(letter for segment in self.segments for letter in segment))
        if joined != chart.expand(self.target):
            raise WordError(f"Segments do not multiply out to {self.target}")


def goldman_word_flow(
    chart: ModuliChart, point: ModuliPoint, data: IntersectionData, phi: InvariantFunction, t: float
) -> np.ndarray:
    """kappa_t(b) = prod_i exp(t eps_i phi_dot(kappa(a_i))) kappa(b), a_i the loop moved
    to the i-th crossing along b_0 ... b_(i-1)."""
    data.validate(chart)
    model = chart.model
    result = model.identity()
    prefix: Word = ()
    for segment, sign in zip(data.segments[:-1], data.signs):
        prefix = prefix + segment
        conjugated = free_reduce(prefix + data.loop + invert_word(prefix))
        xi = phi_dot(model, phi, holonomy(chart, point, conjugated))
        result = result @ model.exp(t * sign * xi)
    return result @ holonomy(chart, point, data.target)


def goldman_flow(
    chart: ModuliChart,
    point: ModuliPoint,
    data: Sequence[IntersectionData],
    phi: InvariantFunction,
    t: float,
) -> ModuliPoint:
    """Apply the twist flow to every listed generator, all from the starting point."""
    flowed = list(point)
    for item in data:
        flowed[chart.generator_index(item.target)] = goldman_word_flow(chart, point, item, phi, t)
    return tuple(flowed)


def _dexpinv(model, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # u' for g = g0 exp(u) moving with left-trivialized velocity v
    first = model.bracket(u, v)
    return v + 0.5 * first + model.bracket(u, first) / 12.0


def flow_velocity(
    chart: ModuliChart,
    point: ModuliPoint,
    flow_map: Callable[[ModuliPoint, float], ModuliPoint],
    step: float = 1e-4,
) -> np.ndarray:
    """Left-trivialized d/dt at t = 0 of a flow, central differences with one Richardson step."""
    model = chart.model
    inverses = [model.inverse(g) for g in point]

    def central(h: float) -> np.ndarray:
        ahead, behind = flow_map(point, h), flow_map(point, -h)
        return np.array(
            [(model.log(g_inv @ a) - model.log(g_inv @ b)) / (2.0 * h) for g_inv, a, b in zip(inverses, ahead, behind)]
        )

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def flow_integrate(
    chart: ModuliChart,
    point: ModuliPoint,
    f: ScalarField,
    t_final: float,
    n_steps: int,
    retract: bool = True,
) -> ModuliPoint:
    """Fourth-order Runge-Kutta in exponential coordinates around each step's base point."""
    model = chart.model
    h = t_final / n_steps
    current = tuple(point)

    def moved(base: ModuliPoint, u: np.ndarray) -> ModuliPoint:
        return tuple(g @ model.exp(x) for g, x in zip(base, u))

    def stage(base: ModuliPoint, u: np.ndarray) -> np.ndarray:
        velocity = hamiltonian_vector(chart, moved(base, u), f)
        return np.array([_dexpinv(model, a, b) for a, b in zip(u, velocity)])

    for _ in range(n_steps):
        zero = np.zeros((chart.n_generators, model.dim))
        k1 = stage(current, zero)
        k2 = stage(current, 0.5 * h * k1)
        k3 = stage(current, 0.5 * h * k2)
        k4 = stage(current, h * k3)
        current = moved(current, h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
        if retract:
            current = tuple(model.retract(g) for g in current)
    return current


def phi_drift(chart: ModuliChart, start: ModuliPoint, end: ModuliPoint) -> float:
    """Largest change of any boundary holonomy."""
    before = boundary_holonomy(chart, start)
    after = boundary_holonomy(chart, end)
    return max((float(np.linalg.norm(a - b)) for a, b in zip(before, after)), default=0.0)


def flow_pullback_defect(
    chart: ModuliChart,
    point: ModuliPoint,
    flow_map: Callable[[ModuliPoint], ModuliPoint],
    step: float = 1e-5,
) -> float:
    """||F*omega - omega|| at the point, with the tangent map of F by central differences."""
    model = chart.model
    image = flow_map(point)
    inverses = [model.inverse(g) for g in image]
    jacobian = np.empty((chart.dimension, chart.dimension))
    for k in range(chart.n_generators):
        for j in range(model.dim):
            direction = np.zeros((chart.n_generators, model.dim))
            direction[k, j] = step
            ahead = flow_map(tuple(g @ model.exp(x) for g, x in zip(point, direction)))
            behind = flow_map(tuple(g @ model.exp(-x) for g, x in zip(point, direction)))
            column = [
                (model.log(g_inv @ a) - model.log(g_inv @ b)) / (2.0 * step)
                for g_inv, a, b in zip(inverses, ahead, behind)
            ]
            jacobian[:, k * model.dim + j] = np.concatenate(column)
    pulled = jacobian.T @ omega_at(chart, image) @ jacobian
    return float(np.linalg.norm(pulled - omega_at(chart, point), 2))


def flow_series(
    chart: ModuliChart,
    point: ModuliPoint,
    flow_map: Callable[[ModuliPoint, float], ModuliPoint],
    f: ScalarField,
    times: Sequence[float],
) -> pd.DataFrame:
    """Time series of a flow: f value, boundary drift and pullback defect of omega."""
    records: List[dict] = []
    for t in times:
        flowed = flow_map(point, t)
        records.append(
            {
                "t": float(t),
                "value": f.value(chart, flowed),
                "phi_drift": phi_drift(chart, point, flowed),
                "omega_defect": flow_pullback_defect(chart, point, lambda p, t=t: flow_map(p, t)),
            }
        )
    return pd.DataFrame(records)
