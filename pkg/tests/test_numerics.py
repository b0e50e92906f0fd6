import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from liecurve.errors import NonMonotoneParameter, NonUniformGrid
from liecurve.numerics import (
    constancy, derivative, interior, second_derivative, true_runs, uniform_step,
)


def test_stencils_exact_on_quartics():
    s = np.linspace(-1.0, 2.0, 31)
    h = s[1] - s[0]
    y = 3 * s**4 - s**3 + 2 * s - 5
    np.testing.assert_allclose(derivative(y, h), 12 * s**3 - 3 * s**2 + 2, atol=1e-10)
    np.testing.assert_allclose(second_derivative(y, h), 36 * s**2 - 6 * s, atol=1e-8)


def test_fourth_order_convergence():
    errs = []
    for n in (41, 81):
        s = np.linspace(0, 1, n)
        errs.append(np.abs(derivative(np.sin(3 * s), s[1] - s[0]) - 3 * np.cos(3 * s)).max())
    assert errs[0] / errs[1] > 12


def test_derivative_acts_on_columns():
    s = np.linspace(0, 1, 21)
    y = np.stack([s**2, s**3], axis=1)
    d = derivative(y, s[1] - s[0])
    np.testing.assert_allclose(d, np.stack([2 * s, 3 * s**2], axis=1), atol=1e-12)


def test_uniform_step_rejects_bad_grids():
    assert uniform_step(np.linspace(0, 1, 11)) == pytest.approx(0.1)
    with pytest.raises(NonMonotoneParameter):
        uniform_step(np.array([0.0, 0.2, 0.1, 0.3]))
    with pytest.raises(NonUniformGrid):
        uniform_step(np.array([0.0, 0.1, 0.3, 0.4]))


def test_constancy_and_masks():
    x = np.ones(20)
    x[0] = 5.0
    assert not constancy(x).constant
    assert constancy(x, interior(20)).constant
    x[10] = np.nan
    assert not constancy(x, interior(20)).constant
    assert true_runs(np.array([0, 1, 1, 0, 1], bool)) == [(1, 2), (4, 4)]


@given(st.floats(-100, 100), st.floats(1e-3, 10))
def test_constancy_scale_invariant(c, noise):
    x = np.full(10, c) + np.linspace(-1, 1, 10) * 1e-6 * (1 + abs(c))
    assert constancy(x, tol=1e-5).constant
