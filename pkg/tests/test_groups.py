import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from liecurve import groups
from liecurve.lie_algebra import PRESETS

small = arrays(np.float64, 3, elements=st.floats(-1.5, 1.5, allow_nan=False))


def test_realizations():
    assert groups.realization(PRESETS["abelian"]) == groups.ABELIAN
    assert groups.position_dim(PRESETS["su2"]) == 4
    np.testing.assert_array_equal(groups.identity(PRESETS["so3"]), [1, 0, 0, 0])


@given(small)
def test_qexp_is_unit(v):
    assert abs(np.linalg.norm(groups.qexp(v)) - 1) < 1e-14


@settings(max_examples=60)
@given(st.sampled_from(["abelian", "su2", "so3"]), small, small)
def test_offset_distance_equals_offset_length(name, p0, X):
    """Offsetting along a one-parameter subgroup moves exactly |X| (below the cut locus)."""
    g = PRESETS[name]
    p = groups.exp(p0, g)
    q = groups.offset(p, X, g)
    assert abs(groups.distance(p, q, g) - np.linalg.norm(X)) < 1e-12


@settings(max_examples=40)
@given(small, small, small)
def test_distance_left_invariant(a, b, c):
    g = PRESETS["su2"]
    p, q, r = (groups.exp(v, g) for v in (a, b, c))
    d1 = groups.distance(q, r, g)
    d2 = groups.distance(groups.compose(p, q, g), groups.compose(p, r, g), g)
    assert abs(d1 - d2) < 1e-12


def test_log_derivative_recovers_subgroup_velocity():
    s = np.linspace(0, 2, 401)
    X = np.array([0.3, -0.2, 0.5])
    for name in ("abelian", "su2", "so3"):
        g = PRESETS[name]
        pos = groups.exp(s[:, None] * X, g)
        np.testing.assert_allclose(groups.log_derivative(pos, s, g), np.broadcast_to(X, (len(s), 3)), atol=1e-9)
