from __future__ import annotations

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from src.surface.words import Letter, free_reduce, invert_word
from src.utils.linalg import (
    antisymmetry_defect,
    block_metric,
    kernel,
    max_principal_angle,
    min_singular_value,
    numerical_rank,
    span,
)

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False, allow_subnormal=False)
matrices = st.integers(1, 6).flatmap(
    lambda rows: st.integers(1, 6).flatmap(lambda cols: arrays(np.float64, (rows, cols), elements=entries))
)
letters = st.builds(Letter, st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity(matrix):
    basis = kernel(matrix)
    assert numerical_rank(matrix) + basis.shape[1] == matrix.shape[1]
    assert np.allclose(matrix @ basis, 0.0, atol=1e-7 * max(1.0, np.abs(matrix).max()))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_span_is_orthonormal(matrix):
    basis = span(matrix)
    assert np.allclose(basis.T @ basis, np.eye(basis.shape[1]), atol=1e-10)
    assert basis.shape[1] == numerical_rank(matrix)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_principal_angle_of_a_span_with_itself(matrix):
    basis = span(matrix)
    assert max_principal_angle(basis, basis[:, ::-1]) < 1e-7


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_antisymmetric_part(matrix):
    k = min(matrix.shape)
    square = matrix[:k, :k]
    assert antisymmetry_defect(square - square.T) == 0.0


def test_degenerate_inputs():
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert span(np.zeros((3, 2))).shape == (3, 0)
    assert kernel(np.zeros((0, 4))).shape == (4, 4)
    assert min_singular_value(np.zeros((2, 0))) == np.inf
    assert min_singular_value(np.ones((2, 3))) == 0.0
    assert max_principal_angle(np.eye(3)[:, :1], np.eye(3)[:, :2]) == np.pi / 2
    assert np.allclose(block_metric(0.5 * np.eye(2), 3), 0.5 * np.eye(6))


@given(st.lists(letters, max_size=12))
def test_word_times_inverse_reduces_to_empty(word):
    word = tuple(word)
    assert free_reduce(word + invert_word(word)) == ()
    reduced = free_reduce(word)
    assert free_reduce(reduced) == reduced
    assert all(x != y.inverse() for x, y in zip(reduced, reduced[1:]))


def test_rounding_noise_has_rank_zero():
    noise = 1e-16 * np.random.default_rng(7).standard_normal((6, 3))
    assert numerical_rank(noise) == 0
    assert kernel(noise).shape == (3, 3)
    assert span(noise).shape == (6, 0)
    scaled = np.diag([1.0, 1e-12])
    assert numerical_rank(scaled) == 1
    assert kernel(scaled).shape == (2, 1)
