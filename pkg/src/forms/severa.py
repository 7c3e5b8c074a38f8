"""Pairs (group-valued map, 2-form) under the bullet product, evaluated at one point."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from src.lie.calculus import eta_at, exterior_derivative
from src.lie.models import LieGroupModel
from src.moduli.chart import ModuliChart, ModuliPoint
from src.moduli.holonomy import word_differential
from src.surface.words import Word


@dataclass(frozen=True)
class SeveraPair:
    value: np.ndarray  # group element
    differential: np.ndarray  # dim x N, left-trivialized
    two_form: np.ndarray  # N x N antisymmetric
    base_point: ModuliPoint | None = None


def severa_unit(model: LieGroupModel, size: int) -> SeveraPair:
    return SeveraPair(model.identity(), np.zeros((model.dim, size)), np.zeros((size, size)))


def severa_mul(model: LieGroupModel, p: SeveraPair, q: SeveraPair) -> SeveraPair:
    ad_q = model.adjoint_matrix(q.value)
    cross = p.differential.T @ model.gram @ ad_q @ q.differential
    return SeveraPair(
        value=p.value @ q.value,
        differential=model.adjoint_matrix(model.inverse(q.value)) @ p.differential + q.differential,
        two_form=p.two_form + q.two_form - 0.5 * (cross - cross.T),
        base_point=p.base_point,
    )


def severa_inverse(model: LieGroupModel, p: SeveraPair) -> SeveraPair:
    return SeveraPair(
        value=model.inverse(p.value),
        differential=-model.adjoint_matrix(p.value) @ p.differential,
        two_form=-p.two_form,
        base_point=p.base_point,
    )


def letter_pair(chart: ModuliChart, point: ModuliPoint, word: "Word | str") -> SeveraPair:
    """The pair (holonomy of the word, 0)."""
    value, differential = word_differential(chart, point, word)
    return SeveraPair(value, differential, np.zeros((chart.dimension, chart.dimension)), tuple(point))


def fold(chart: ModuliChart, point: ModuliPoint, word: Word) -> SeveraPair:
    result = severa_unit(chart.model, chart.dimension)
    for letter in word:
        result = severa_mul(chart.model, result, letter_pair(chart, point, (letter,)))
    return SeveraPair(result.value, result.differential, result.two_form, tuple(point))


def homomorphism_defect(
    chart: ModuliChart,
    pair_at: Callable[[ModuliPoint], SeveraPair],
    point: ModuliPoint,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    step: float = 1e-4,
) -> float:
    """d omega - Phi*eta on three tangents, with d omega by finite differences."""
    model = chart.model

    def form(at: Sequence[np.ndarray], a: np.ndarray, b: np.ndarray) -> float:
        return float(a.reshape(-1) @ pair_at(tuple(at)).two_form @ b.reshape(-1))

    d_omega = exterior_derivative(model, form, point, x, y, z, step)
    differential = pair_at(tuple(point)).differential
    pulled = eta_at(model, differential @ x.reshape(-1), differential @ y.reshape(-1), differential @ z.reshape(-1))
    return d_omega - pulled
