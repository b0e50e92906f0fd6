"""Concrete groups carrying curve positions.

Two realizations are supported:

* ``abelian`` -- R^3 under addition; positions are 3-vectors.
* ``quaternion`` -- unit quaternions ``(w, x, y, z)``. An algebra with
  ``c = k * epsilon`` maps onto imaginary quaternions by ``X -> (k/2) X``,
  which turns the quaternion commutator into the algebra bracket. With the
  metric that makes the algebra basis orthonormal, the geodesic distance
  is ``(2/|k|) * arccos(Re(p^-1 q))``; for su2 (k = 2) that is plain
  ``arccos``.
"""

from __future__ import annotations

import numpy as np

from .errors import AlgebraError
from .lie_algebra import EPSILON, LieAlgebra3
from .numerics import derivative, uniform_step

ABELIAN = "abelian"
QUATERNION = "quaternion"


def realization(g: LieAlgebra3) -> str:
    if g.is_abelian:
        return ABELIAN
    k = g.bracket_scale
    if k != 0.0 and np.allclose(g.c, k * EPSILON, rtol=0.0, atol=1e-12 * abs(k)):
        return QUATERNION
    raise AlgebraError(f"algebra {g.name!r} has no supported group realization")


def position_dim(g: LieAlgebra3) -> int:
    return 3 if realization(g) == ABELIAN else 4


def identity(g: LieAlgebra3) -> np.ndarray:
    if realization(g) == ABELIAN:
        return np.zeros(3)
    return np.array([1.0, 0.0, 0.0, 0.0])


# quaternion arithmetic, scalar first, broadcasting over leading axes

def qmul(p, q) -> np.ndarray:
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    pw, pv = p[..., :1], p[..., 1:]
    qw, qv = q[..., :1], q[..., 1:]
    w = pw * qw - np.sum(pv * qv, axis=-1, keepdims=True)
    v = pw * qv + qw * pv + np.cross(pv, qv)
    return np.concatenate([w, v], axis=-1)


def qconj(q) -> np.ndarray:
    q = np.asarray(q, float)
    return np.concatenate([q[..., :1], -q[..., 1:]], axis=-1)


def qexp(v) -> np.ndarray:
    """Exponential of an imaginary quaternion given by its 3-vector part."""
    v = np.asarray(v, float)
    theta = np.linalg.norm(v, axis=-1, keepdims=True)
    # sin(t)/t without the 0/0 at the identity
    sinc = np.sinc(theta / np.pi)
    return np.concatenate([np.cos(theta), sinc * v], axis=-1)


def qnormalize(q) -> np.ndarray:
    q = np.asarray(q, float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def _half_scale(g: LieAlgebra3) -> float:
    return 0.5 * g.bracket_scale


def exp(X, g: LieAlgebra3) -> np.ndarray:
    """Group exponential of algebra vectors."""
    X = np.asarray(X, float)
    if realization(g) == ABELIAN:
        return X.copy()
    return qexp(_half_scale(g) * X)


def compose(p, q, g: LieAlgebra3) -> np.ndarray:
    if realization(g) == ABELIAN:
        return np.asarray(p, float) + np.asarray(q, float)
    return qmul(p, q)


def offset(p, X, g: LieAlgebra3) -> np.ndarray:
    """Move from ``p`` along the left-invariant geodesic with initial velocity X.

    In R^3 this is ``p + X``; in the quaternion group it is ``p * exp(X)``.
    """
    return compose(p, exp(X, g), g)


def distance(p, q, g: LieAlgebra3) -> np.ndarray:
    """Bi-invariant geodesic distance between positions (row-wise)."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    if realization(g) == ABELIAN:
        return np.linalg.norm(q - p, axis=-1)
    rel = qmul(qconj(p), q)
    # atan2 keeps precision at small angles where arccos does not
    angle = np.arctan2(np.linalg.norm(rel[..., 1:], axis=-1), rel[..., 0])
    return angle / abs(_half_scale(g))


def log_derivative(positions, s, g: LieAlgebra3) -> np.ndarray:
    """Left-translated velocity ``p^-1 dp/ds`` as algebra components.

    Uses the fourth-order stencil on the position samples, so the result
    matches the true velocity to O(h^4) in the interior.
    """
    positions = np.asarray(positions, float)
    h = uniform_step(s)
    dp = derivative(positions, h)
    if realization(g) == ABELIAN:
        return dp
    vel = qmul(qconj(positions), dp)
    return vel[:, 1:] / _half_scale(g)

