"""Frenet apparatus of sampled curves in a Lie group with bi-invariant metric.

Curves are stored through their left-translated velocity, so every frame
vector is an algebra vector. The Levi-Civita connection along a curve acts
on such a field W as ``Wdot + 1/2 [T, W]``; the component-form frame
equations are therefore

    Tdot = kappa N,   Ndot = -kappa T + (tau - tau_G) B,   Bdot = -(tau - tau_G) N

with ``tau_G = 1/2 <[T, N], B>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from . import groups
from .errors import (
    DegenerateFrame, GridMismatch, NonMonotoneParameter, TooFewSamples, ValidationError,
    VanishingCurvature,
)
from .lie_algebra import LieAlgebra3, bracket, cross, inner
from .numerics import EDGE, derivative, interior, uniform_step

TOL_UNIT = 1e-8
MIN_SAMPLES = 8
ORTHO_FAIL = 1e-4
KAPPA_MIN_REL = 1e-6


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """A curve sampled on a parameter grid.

    ``tangent`` holds the left-translated velocity ``alpha^-1 alpha'`` in
    algebra components; after arc-length reparametrization it has unit norm.
    ``position`` is optional: 3-vectors for the abelian realization, unit
    quaternions ``(w, x, y, z)`` for the quaternion one.
    """

    algebra: LieAlgebra3
    s: np.ndarray
    tangent: np.ndarray
    position: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.asarray(self.s, float)
        tangent = np.asarray(self.tangent, float)
        if s.ndim != 1:
            raise GridMismatch("s must be one-dimensional")
        if tangent.shape != (len(s), 3):
            raise GridMismatch(f"tangent has shape {tangent.shape}, expected ({len(s)}, 3)")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "tangent", tangent)
        if self.position is not None:
            pos = np.asarray(self.position, float)
            dim = groups.position_dim(self.algebra)
            if pos.shape != (len(s), dim):
                raise GridMismatch(f"position has shape {pos.shape}, expected ({len(s)}, {dim})")
            object.__setattr__(self, "position", pos)

    def __len__(self):
        return len(self.s)

    @property
    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.tangent, axis=1)

    def is_arclength(self, tol: float = TOL_UNIT) -> bool:
        try:
            uniform_step(self.s)
        except ValidationError:
            return False
        return bool(np.max(np.abs(self.speed - 1.0)) <= tol)


@dataclass(frozen=True, eq=False)
class FrenetData:
    s: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    tau_G: np.ndarray
    H: np.ndarray
    H_prime: np.ndarray
    sigma_N: np.ndarray
    algebra: LieAlgebra3
    # |d(position)/ds| relative to the grid parameter; 1 for arc length
    speed: np.ndarray | None = None
    edge: int = EDGE

    def __len__(self):
        return len(self.s)

    @property
    def interior(self) -> np.ndarray:
        return interior(len(self.s), self.edge)

    def subset(self, index) -> "FrenetData":
        fields_ = {
            name: getattr(self, name)[index]
            for name in ("s", "T", "N", "B", "kappa", "tau", "tau_G", "H", "H_prime", "sigma_N")
        }
        speed = None if self.speed is None else self.speed[index]
        return replace(self, speed=speed, **fields_)

    def tracks(self) -> dict[str, np.ndarray]:
        return {
            "s": self.s, "kappa": self.kappa, "tau": self.tau, "tau_G": self.tau_G,
            "H": self.H, "H_prime": self.H_prime, "sigma_N": self.sigma_N,
        }


def reparametrize_arclength(raw: CurveSamples) -> CurveSamples:
    """Resample a regular curve on a uniform arc-length grid.

    ``raw.s`` is any strictly increasing parameter and ``raw.tangent`` the
    velocity with respect to it. Speed, velocity and positions are carried
    by cubic splines; length is the exact integral of the speed spline and
    the new sample locations are refined by Newton steps on it. The grid
    keeps the sample count and starts at ``raw.s[0]``.
    """
    t = raw.s
    n = len(t)
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {n}")
    if np.any(np.diff(t) <= 0):
        raise NonMonotoneParameter("parameter values must be strictly increasing")

    speed_spl = CubicSpline(t, raw.speed)
    length_spl = speed_spl.antiderivative()
    cum = length_spl(t)
    total = float(cum[-1])
    if not np.all(np.diff(cum) > 0):
        raise NonMonotoneParameter("curve is not regular: speed vanishes")

    target = np.linspace(0.0, total, n)
    t_new = CubicSpline(cum, t)(target)
    for _ in range(3):
        t_new = np.clip(t_new - (length_spl(t_new) - target) / speed_spl(t_new), t[0], t[-1])
    t_new[0], t_new[-1] = t[0], t[-1]

    vel = CubicSpline(t, raw.tangent)(t_new)
    tangent = vel / np.linalg.norm(vel, axis=1, keepdims=True)
    position = None
    if raw.position is not None:
        position = CubicSpline(t, raw.position)(t_new)
        if groups.realization(raw.algebra) == groups.QUATERNION:
            position = groups.qnormalize(position)
    meta = dict(raw.metadata)
    meta["reparametrized"] = True
    return CurveSamples(raw.algebra, t[0] + target, tangent, position, meta)


def covariant_derivative_along(W, curve: CurveSamples) -> np.ndarray:
    """Covariant derivative ``Wdot + 1/2 [alpha', W]`` of a field along the curve."""
    W = np.asarray(W, float)
    if W.shape != curve.tangent.shape:
        raise GridMismatch(f"field has shape {W.shape}, curve grid is {curve.tangent.shape}")
    h = uniform_step(curve.s)
    return derivative(W, h) + 0.5 * bracket(curve.tangent, W, curve.algebra)


def lie_torsion(T, N, B, g: LieAlgebra3) -> np.ndarray:
    """Per-sample ``1/2 <[T, N], B>``."""
    return 0.5 * inner(bracket(T, N, g), B)


@dataclass(frozen=True)
class BracketFrameResidual:
    tn: np.ndarray
    tb: np.ndarray

    @property
    def max(self) -> float:
        return float(max(np.max(self.tn), np.max(self.tb)))


def bracket_frame_identities(T, N, B, tau_G, g: LieAlgebra3) -> BracketFrameResidual:
    """Residuals of ``[T, N] = 2 tau_G B`` and ``[T, B] = -2 tau_G N``."""
    tau_G = np.asarray(tau_G, float)[..., None]
    tn = np.linalg.norm(bracket(T, N, g) - 2 * tau_G * B, axis=-1)
    tb = np.linalg.norm(bracket(T, B, g) + 2 * tau_G * N, axis=-1)
    return BracketFrameResidual(tn, tb)


def orthonormality_residual(T, N, B, orientation: int = 1) -> np.ndarray:
    """Per-sample max deviation of the frame Gram matrix from the identity,
    together with the determinant's deviation from the orientation."""
    F = np.stack([T, N, B], axis=-2)
    gram = F @ np.swapaxes(F, -1, -2)
    dev = np.max(np.abs(gram - np.eye(3)), axis=(-1, -2))
    det = np.linalg.det(F)
    return np.maximum(dev, np.abs(det - orientation))


def default_kappa_min(curve: CurveSamples) -> float:
    length = float(np.sum(np.diff(curve.s) * 0.5 * (curve.speed[1:] + curve.speed[:-1])))
    return KAPPA_MIN_REL / length


def frenet_apparatus(curve: CurveSamples, g: LieAlgebra3 | None = None, kappa_min: float | None = None) -> FrenetData:
    """Frenet frame, curvature, torsion and harmonic curvature of a sampled curve.

    The curve is normally arc-length parametrized. A regular curve on any
    uniform parameter grid is accepted too: derivatives are converted to arc
    length through the speed, so all returned tracks are per unit length.

    Raises VanishingCurvature when the curvature drops below ``kappa_min``
    (default ``1e-6`` per unit of total length) at some sample.
    """
    g = curve.algebra if g is None else g
    h = uniform_step(curve.s)
    speed = curve.speed
    T = curve.tangent / speed[:, None]

    dT = derivative(T, h) / speed[:, None]
    # Tdot is orthogonal to unit T; any parallel part is stencil error
    dT -= inner(dT, T)[:, None] * T
    kappa = np.linalg.norm(dT, axis=1)
    if kappa_min is None:
        kappa_min = default_kappa_min(curve)
    low = np.flatnonzero(kappa < kappa_min)
    if low.size:
        i = int(low[0])
        raise VanishingCurvature(float(curve.s[i]), float(kappa[i]), kappa_min)

    N = dT / kappa[:, None]
    B = cross(T, N, g.orientation)
    resid = orthonormality_residual(T, N, B, g.orientation)
    if np.max(resid) > ORTHO_FAIL:
        raise DegenerateFrame(f"frame orthonormality residual {np.max(resid):.2e} exceeds {ORTHO_FAIL:g}")

    tau_G = lie_torsion(T, N, B, g)
    dN = derivative(N, h) / speed[:, None]
    tau = inner(dN, B) + tau_G
    H = (tau - tau_G) / kappa
    H_prime = derivative(H, h) / speed
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_N = kappa * (1.0 + H**2) ** 1.5 / H_prime
    return FrenetData(
        s=curve.s, T=T, N=N, B=B, kappa=kappa, tau=tau, tau_G=tau_G, H=H,
        H_prime=H_prime, sigma_N=sigma_N, algebra=g, speed=speed,
    )


def binormal_torsion(fd: FrenetData) -> np.ndarray:
    """Torsion from ``tau = <-Bdot, N> + tau_G``, a cross-check on the default route."""
    h = uniform_step(fd.s)
    speed = np.ones_like(fd.s) if fd.speed is None else fd.speed
    dB = derivative(fd.B, h) / speed[:, None]
    return -inner(dB, fd.N) + fd.tau_G
