"""Curves from prescribed curvature and torsion.

The component-form frame equations are integrated with classical RK4 on a
fixed grid, renormalizing the frame after every step (Gram-Schmidt anchored
at T, then B from the oriented cross product). Positions follow
``x' = T`` in R^3 or ``q' = q * T`` for unit quaternions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline

from . import groups
from .errors import ConditionViolated, NonPositiveKappa, RangeContainsHZero, StepTooLarge, ValidationError, ZeroParameter
from .frenet import CurveSamples, FrenetData, lie_torsion
from .lie_algebra import LieAlgebra3, cross, get_algebra
from .numerics import derivative

DRIFT_MAX = 1e-6

Track = Callable[[np.ndarray], np.ndarray] | np.ndarray


@dataclass(frozen=True, eq=False)
class CurvatureSpec:
    """Input data for :func:`integrate_frame`.

    ``kappa`` and ``tau`` are callables of arc length or arrays sampled on
    the output grid (arrays are spline-interpolated at RK4 half steps).
    """

    kappa: Track
    tau: Track
    algebra: LieAlgebra3
    s_range: tuple[float, float]
    h: float
    initial_frame: np.ndarray | None = None
    initial_position: np.ndarray | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def grid(self) -> np.ndarray:
        s0, s1 = self.s_range
        if not s1 > s0:
            raise ValidationError(f"empty range [{s0}, {s1}]")
        if not self.h > 0:
            raise ValidationError(f"step h must be positive, got {self.h}")
        n = int(round((s1 - s0) / self.h)) + 1
        return np.linspace(s0, s1, max(n, 2))

    def frame0(self) -> np.ndarray:
        if self.initial_frame is None:
            F = np.eye(3)
        else:
            F = np.array(self.initial_frame, float)
        F[2] = cross(F[0], F[1], self.algebra.orientation)
        if np.max(np.abs(F @ F.T - np.eye(3))) > 1e-9:
            raise ValidationError("initial frame must be orthonormal")
        return F


class Synthesized(NamedTuple):
    curve: CurveSamples
    frenet: FrenetData


def _as_function(track, grid):
    if callable(track):
        return lambda s: np.asarray(track(s), float) * np.ones_like(s, dtype=float)
    values = np.asarray(track, float)
    if values.shape != grid.shape:
        raise ValidationError(f"sampled track has {values.shape} samples, grid has {grid.shape}")
    return CubicSpline(grid, values)


def _renormalize(F, orientation):
    T = F[0] / np.linalg.norm(F[0])
    N = F[1] - np.dot(F[1], T) * T
    N /= np.linalg.norm(N)
    return np.array([T, N, cross(T, N, orientation)])


def integrate_frame(spec: CurvatureSpec) -> Synthesized:
    """Integrate the frame equations; return samples plus their Frenet data.

    The returned FrenetData carries the integrated frames with the input
    curvature and torsion, so it is exact up to integration error. Running
    :func:`frenet_apparatus` on the returned curve is the round-trip check.
    """
    g = spec.algebra
    s = spec.grid
    h = s[1] - s[0]
    kappa_f = _as_function(spec.kappa, s)
    tau_f = _as_function(spec.tau, s)

    half = s[:-1] + 0.5 * h
    for where in (s, half):
        k = kappa_f(where)
        if np.any(~(k > 0)):
            i = int(np.flatnonzero(~(k > 0))[0])
            raise NonPositiveKappa(f"kappa must be positive; kappa({where[i]:.6g}) = {k[i]:.6g}")

    F = spec.frame0()
    tau_G = float(lie_torsion(F[0], F[1], F[2], g))
    kind = groups.realization(g)
    p = groups.identity(g) if spec.initial_position is None else np.array(spec.initial_position, float)
    quat = kind == groups.QUATERNION
    half_scale = 0.5 * g.bracket_scale

    k_grid, k_half = kappa_f(s), kappa_f(half)
    w_grid, w_half = tau_f(s) - tau_G, tau_f(half) - tau_G

    def rhs(k, w, F, p):
        dF = np.array([k * F[1], -k * F[0] + w * F[2], -w * F[1]])
        if not quat:
            return dF, F[0]
        v = half_scale * F[0]
        # p * (0, v)
        dp = np.array([
            -p[1] * v[0] - p[2] * v[1] - p[3] * v[2],
            p[0] * v[0] + p[2] * v[2] - p[3] * v[1],
            p[0] * v[1] + p[3] * v[0] - p[1] * v[2],
            p[0] * v[2] + p[1] * v[1] - p[2] * v[0],
        ])
        return dF, dp

    eye = np.eye(3)
    frames = np.empty((len(s), 3, 3))
    positions = np.empty((len(s), len(p)))
    frames[0], positions[0] = F, p
    for i in range(len(s) - 1):
        k1F, k1p = rhs(k_grid[i], w_grid[i], F, p)
        k2F, k2p = rhs(k_half[i], w_half[i], F + h / 2 * k1F, p + h / 2 * k1p)
        k3F, k3p = rhs(k_half[i], w_half[i], F + h / 2 * k2F, p + h / 2 * k2p)
        k4F, k4p = rhs(k_grid[i + 1], w_grid[i + 1], F + h * k3F, p + h * k3p)
        F = F + h / 6 * (k1F + 2 * k2F + 2 * k3F + k4F)
        p = p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        drift = np.max(np.abs(F @ F.T - eye))
        if drift > DRIFT_MAX:
            raise StepTooLarge(f"frame drift {drift:.2e} per step at s={s[i]:.6g}; reduce h")
        F = _renormalize(F, g.orientation)
        if quat:
            p = p / np.linalg.norm(p)
        frames[i + 1], positions[i + 1] = F, p

    T, N, B = frames[:, 0], frames[:, 1], frames[:, 2]
    kappa = kappa_f(s)
    tau = tau_f(s)
    tau_G_track = lie_torsion(T, N, B, g)
    H = (tau - tau_G_track) / kappa
    H_prime = derivative(H, h)
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_N = kappa * (1.0 + H**2) ** 1.5 / H_prime

    meta = {"generator": dict(spec.provenance), "realization": kind}
    curve = CurveSamples(g, s, T.copy(), positions, meta)
    fd = FrenetData(
        s=s, T=T, N=N, B=B, kappa=kappa, tau=tau, tau_G=tau_G_track, H=H,
        H_prime=H_prime, sigma_N=sigma_N, algebra=g, speed=np.ones_like(s),
    )
    return Synthesized(curve, fd)


def circular_helix(kappa: float, tau: float, algebra="abelian", s_range=(0.0, 10.0), h=1e-3, **kw) -> CurvatureSpec:
    """Constant curvature and torsion."""
    g = get_algebra(algebra)
    return CurvatureSpec(
        kappa=lambda s: np.full_like(s, kappa, dtype=float),
        tau=lambda s: np.full_like(s, tau, dtype=float),
        algebra=g, s_range=tuple(s_range), h=h,
        provenance={"name": "helix", "kappa": kappa, "tau": tau, "algebra": g.name},
        **kw,
    )


def torsion_power(kappa: float, power: float, algebra="abelian", s_range=(0.5, 2.5), h=1e-3, **kw) -> CurvatureSpec:
    """Constant curvature with ``tau - tau_G = s**power``; used for negative controls."""
    g = get_algebra(algebra)
    tg = g.lie_torsion
    return CurvatureSpec(
        kappa=lambda s: np.full_like(s, kappa, dtype=float),
        tau=lambda s: np.asarray(s, float) ** power + tg,
        algebra=g, s_range=tuple(s_range), h=h,
        provenance={"name": "torsion-power", "kappa": kappa, "power": power, "algebra": g.name},
        **kw,
    )


def generate_mannheim_family(lam: float, kappa: Track, algebra="abelian", s_range=(0.5, 2.5), h=1e-3, **kw) -> CurvatureSpec:
    """Torsion that makes ``lam * kappa * (1 + H^2) = 1`` hold.

    Takes the positive branch ``H = sqrt(1/(lam kappa) - 1)``; requires
    ``0 < lam * kappa < 1`` everywhere (equality would force H = 0).
    """
    g = get_algebra(algebra)
    if not lam > 0:
        raise ConditionViolated(f"lambda must be positive, got {lam}")
    tg = g.lie_torsion
    probe = CurvatureSpec(kappa, kappa, g, tuple(s_range), h)
    grid = probe.grid
    kappa_f = _as_function(kappa, grid)
    check = np.concatenate([grid, grid[:-1] + 0.5 * (grid[1] - grid[0])])
    prod = lam * kappa_f(check)
    if np.any(~(prod > 0)) or np.any(prod >= 1.0):
        i = int(np.argmax(prod))
        raise ConditionViolated(
            f"need 0 < lambda*kappa < 1; lambda*kappa = {prod[i]:.6g} at s = {check[i]:.6g}"
        )

    def harmonic(s):
        return np.sqrt(1.0 / (lam * kappa_f(s)) - 1.0)

    if callable(kappa):
        tau = lambda s: kappa_f(s) * harmonic(s) + tg  # noqa: E731
    else:
        tau = kappa_f(grid) * harmonic(grid) + tg
    prov = {"name": "mannheim-family", "lambda": lam, "algebra": g.name}
    prov.update(kw.pop("provenance", {}))
    return CurvatureSpec(kappa, tau, g, tuple(s_range), h, provenance=prov, **kw)


def slant_mannheim_H(a: float, b: float, s) -> np.ndarray:
    """Harmonic curvature ``(a e^{bs} - e^{-bs}/a) / 2`` of a slant Mannheim curve."""
    if a == 0 or b == 0:
        raise ZeroParameter(f"a and b must be nonzero (a={a}, b={b})")
    s = np.asarray(s, float)
    return 0.5 * (a * np.exp(b * s) - np.exp(-b * s) / a)


def slant_mannheim_zero(a: float, b: float) -> float:
    """Arc length at which the harmonic curvature above crosses zero."""
    return float(-np.log(abs(a)) / b) + 0.0  # no signed zero in messages


def generate_slant_mannheim(a: float, b: float, lam: float, algebra="abelian", s_range=(0.5, 2.5), h=1e-3, **kw) -> CurvatureSpec:
    """Mannheim curve whose harmonic curvature is the hyperbolic family.

    Curvature comes from the Mannheim condition, ``kappa = 1/(lam (1 + H^2))``,
    and torsion from ``tau = kappa H + tau_G``. The result is a slant helix
    with ``sigma_N = sign(a) / (lam b)``.
    """
    g = get_algebra(algebra)
    if not lam > 0:
        raise ConditionViolated(f"lambda must be positive, got {lam}")
    slant_mannheim_H(a, b, 0.0)
    s0, s1 = s_range
    z = slant_mannheim_zero(a, b)
    if s0 <= z <= s1:
        raise RangeContainsHZero(
            f"H vanishes at s = {z:.6g}, inside the range [{s0}, {s1}]; choose a range avoiding it"
        )
    tg = g.lie_torsion

    def kappa(s):
        return 1.0 / (lam * (1.0 + slant_mannheim_H(a, b, s) ** 2))

    def tau(s):
        return kappa(s) * slant_mannheim_H(a, b, s) + tg

    prov = {"name": "slant-mannheim", "a": a, "b": b, "lambda": lam, "algebra": g.name}
    return CurvatureSpec(kappa, tau, g, (s0, s1), h, provenance=prov, **kw)


def random_harmonic(rng: np.random.Generator, s_range, n_modes: int = 3):
    """A smooth, strictly positive random function on the range."""
    s0, s1 = s_range
    width = s1 - s0
    base = rng.uniform(0.5, 1.5)
    amps = rng.uniform(-1.0, 1.0, n_modes) * base / (2 * n_modes)
    freqs = rng.uniform(0.5, 2.0, n_modes) * 2 * np.pi / width
    phases = rng.uniform(0, 2 * np.pi, n_modes)
    slope = rng.uniform(-0.2, 0.2) * base / width

    def H(s):
        s = np.asarray(s, float)
        out = base + slope * (s - s0)
        for A, w, ph in zip(amps, freqs, phases):
            out = out + A * np.sin(w * (s - s0) + ph)
        return out

    return H


def random_mannheim(lam: float, seed: int, algebra="abelian", s_range=(0.5, 2.5), h=1e-3, **kw) -> CurvatureSpec:
    """Mannheim curve with a seeded random positive harmonic curvature."""
    rng = np.random.default_rng(seed)
    H = random_harmonic(rng, s_range)

    def kappa(s):
        return 1.0 / (lam * (1.0 + H(s) ** 2))

    return generate_mannheim_family(
        lam, kappa, algebra, s_range, h,
        provenance={"name": "random-mannheim", "seed": seed}, **kw,
    )
