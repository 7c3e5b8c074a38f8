"""Orbit 2-forms recovered from source fibres of the two-vertex cylinder chart."""
from __future__ import annotations

import numpy as np

from src.errors import ChartError
from src.forms.omega import omega_at
from src.groupoid.orbits import OrbitPoint, orbit_form
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import holonomy

# letters of the stock pattern "a1 a2 c^-1 b2 b1 c"
SOURCE_LETTERS = ("a1", "a2")
FIBRE_LETTERS = ("c", "b2")


def _check_chart(chart: ModuliChart) -> None:
    if chart.generators != SOURCE_LETTERS + FIBRE_LETTERS:
        raise ChartError(f"Expected generators {SOURCE_LETTERS + FIBRE_LETTERS}, got {chart.generators}")


def target_orbit_point(chart: ModuliChart, point: ModuliPoint) -> OrbitPoint:
    """Far boundary as a point in the orbit of the near boundary (a1, a2)."""
    _check_chart(chart)
    model = chart.model
    far = (model.inverse(holonomy(chart, point, "b1")), model.inverse(holonomy(chart, point, "b2")))
    return OrbitPoint(far, point[0] @ point[1])


def fibre_tangent(chart: ModuliChart, point: ModuliPoint, xi: np.ndarray) -> np.ndarray:
    """Tangent of the source fibre moving the far boundary by exp(t xi)."""
    _check_chart(chart)
    model = chart.model
    _, _, c, b2 = point
    xi_a, xi_b = xi
    out = np.zeros((4, model.dim))
    out[2] = model.adjoint_matrix(model.inverse(c)) @ xi_a
    out[3] = model.adjoint_matrix(model.inverse(b2)) @ xi_a - xi_b
    return out


def descent_defect(chart: ModuliChart, point: ModuliPoint, xi: np.ndarray, zeta: np.ndarray) -> float:
    """|omega(fibre tangents) - orbit form on the corresponding orbit vectors|."""
    omega = omega_at(chart, point)
    x = fibre_tangent(chart, point, xi).reshape(-1)
    z = fibre_tangent(chart, point, zeta).reshape(-1)
    orbit_point = target_orbit_point(chart, point)
    return abs(float(x @ omega @ z) - orbit_form(chart.model, orbit_point, xi, zeta))
