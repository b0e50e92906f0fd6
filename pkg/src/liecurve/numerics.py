"""Finite-difference stencils and the constancy test used by every verdict."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonMonotoneParameter, NonUniformGrid

# samples per end that use one-sided stencils; excluded from verdicts
EDGE = 2
TOL_CONST = 1e-4
UNIFORM_RTOL = 1e-8

# 4th-order first derivative
_D1_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D1_FORWARD = (
    np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
)
# 4th-order second derivative
_D2_CENTRAL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D2_FORWARD = (
    np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0,
    np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0,
)


def uniform_step(s) -> float:
    """Return the step of a uniform, strictly increasing grid."""
    s = np.asarray(s, float)
    d = np.diff(s)
    if np.any(d <= 0):
        raise NonMonotoneParameter("parameter grid must be strictly increasing")
    h = (s[-1] - s[0]) / (len(s) - 1)
    if np.max(np.abs(d - h)) > UNIFORM_RTOL * h:
        raise NonUniformGrid(
            "finite-difference stencils need a uniform grid; reparametrize first"
        )
    return float(h)


def _apply(y, h, central, forward, power):
    y = np.asarray(y, float)
    n = len(y)
    width = len(forward[0])
    if n < width:
        raise ValueError(f"need at least {width} samples, got {n}")
    out = np.empty_like(y)
    # interior: correlate with the 5-point central stencil
    out[2:-2] = sum(w * y[m:n - 4 + m] for m, w in enumerate(central))
    for i, stencil in enumerate(forward):
        out[i] = np.tensordot(stencil, y[:width], axes=1)
        # mirrored stencil at the far end; odd derivatives flip sign
        out[n - 1 - i] = (-1) ** power * np.tensordot(stencil, y[::-1][:width], axes=1)
    return out / h**power


def derivative(y, h: float) -> np.ndarray:
    """Fourth-order derivative along axis 0 of samples on a uniform grid."""
    return _apply(y, h, _D1_CENTRAL, _D1_FORWARD, 1)


def second_derivative(y, h: float) -> np.ndarray:
    """Fourth-order second derivative along axis 0."""
    return _apply(y, h, _D2_CENTRAL, _D2_FORWARD, 2)


def interior(n: int, edge: int = EDGE) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[:edge] = False
    mask[n - edge:] = False
    return mask


@dataclass(frozen=True)
class Constancy:
    constant: bool
    median: float
    deviation: float
    threshold: float


def constancy(x, mask=None, tol: float = TOL_CONST) -> Constancy:
    """Scale-aware uniform-deviation test.

    Passes when ``max |x - median(x)| <= tol * (1 + |median(x)|)`` over the
    masked samples. Non-finite samples fail the test.
    """
    x = np.asarray(x, float)
    if mask is not None:
        x = x[mask]
    if x.size == 0:
        raise ValueError("constancy test on an empty track")
    if not np.all(np.isfinite(x)):
        return Constancy(False, float("nan"), float("inf"), float("nan"))
    med = float(np.median(x))
    dev = float(np.max(np.abs(x - med)))
    threshold = tol * (1.0 + abs(med))
    return Constancy(dev <= threshold, med, dev, threshold)


def true_runs(mask) -> list[tuple[int, int]]:
    """Maximal runs of True as inclusive (start, stop) index pairs."""
    mask = np.asarray(mask, dtype=bool)
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]
