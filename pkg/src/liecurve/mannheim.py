"""Mannheim pairs: detection, partner construction and residual checks.

A curve is Mannheim exactly when ``lambda * kappa * (1 + H^2) = 1`` for a
constant lambda, and its partner is ``beta = alpha + lambda N``. The partner
frame is expressed in alpha's frame:

    T_beta = (H T + B) / sqrt(1 + H^2)
    N_beta = (T - H B) / sqrt(1 + H^2)
    B_beta = N

which is realization independent. Partner positions need a group: in R^3
the offset is literal addition; in the quaternion group it is the geodesic
offset ``alpha * exp(lambda N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import minimize_scalar

from . import groups
from .errors import GridMismatch, HVanishes, MissingPositions, MuZero, NotMannheim, ValidationError
from .frenet import CurveSamples, FrenetData, lie_torsion
from .numerics import TOL_CONST, constancy, derivative, interior, true_runs, uniform_step

H_MIN = 1e-4
REALIZATION_NOTE = "geometric realization"


@dataclass(frozen=True, eq=False)
class MannheimReport:
    s: np.ndarray
    lambda_track: np.ndarray
    lambda_hat: float
    residual: np.ndarray
    is_mannheim: bool
    deviation: float
    tolerance: float
    mask: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residual[self.mask]))

    def to_json(self) -> dict:
        return {
            "lambda_hat": self.lambda_hat,
            "is_mannheim": self.is_mannheim,
            "max_residual": self.max_residual,
            "lambda_deviation": self.deviation,
            "tolerance": self.tolerance,
            "interval": [float(self.s[self.mask][0]), float(self.s[self.mask][-1])],
        }


def mannheim_check(fd: FrenetData, tol: float = TOL_CONST) -> MannheimReport:
    """Test ``lambda * kappa * (1 + H^2) = 1`` with lambda estimated as the
    interior median of ``1 / (kappa (1 + H^2))``."""
    lam_track = 1.0 / (fd.kappa * (1.0 + fd.H**2))
    mask = fd.interior
    c = constancy(lam_track, mask, tol)
    lam = c.median
    residual = np.abs(lam * fd.kappa * (1.0 + fd.H**2) - 1.0)
    ok = c.constant and float(np.max(residual[mask])) <= tol
    return MannheimReport(fd.s, lam_track, lam, residual, bool(ok), c.deviation, tol, mask)


@dataclass(frozen=True, eq=False)
class PartnerData:
    s: np.ndarray
    T_beta: np.ndarray
    N_beta: np.ndarray
    B_beta: np.ndarray
    arc_rate: np.ndarray
    s_bar: np.ndarray
    lam: float
    kappa_beta: np.ndarray | None = None
    tau_beta: np.ndarray | None = None
    H_beta: np.ndarray | None = None
    tau_G_beta: np.ndarray | None = None
    position_beta: np.ndarray | None = None
    # index range of alpha's samples used, and the dropped pieces (in s)
    index: slice = slice(None)
    trimmed_intervals: list = field(default_factory=list)
    edge: int = 2

    @property
    def interior(self) -> np.ndarray:
        return interior(len(self.s), self.edge)

    def to_json(self) -> dict:
        tracks = {
            "s": self.s, "s_bar": self.s_bar, "arc_rate": self.arc_rate,
            "kappa_beta": self.kappa_beta, "tau_beta": self.tau_beta,
            "H_beta": self.H_beta, "tau_G_beta": self.tau_G_beta,
        }
        return {
            "lambda": self.lam,
            "trimmed_intervals": [list(iv) for iv in self.trimmed_intervals],
            "tracks": {k: v.tolist() for k, v in tracks.items() if v is not None},
            "frames": {
                "T_beta": self.T_beta.tolist(),
                "N_beta": self.N_beta.tolist(),
                "B_beta": self.B_beta.tolist(),
            },
        }


def usable_intervals(fd: FrenetData, h_min: float = H_MIN) -> list[tuple[int, int]]:
    """Maximal index runs where ``|H| >= h_min``."""
    return true_runs(np.abs(fd.H) >= h_min)


def partner_frame(fd: FrenetData, report: MannheimReport | None = None, lam: float | None = None,
                  h_min: float = H_MIN, trim: bool = False) -> PartnerData:
    """Frame of the Mannheim partner and the arc-length rate ``ds_bar/ds``.

    Without ``trim`` any sample with ``|H| < h_min`` raises HVanishes, whose
    message lists the usable intervals. With ``trim`` the longest usable
    interval is kept and the dropped pieces are recorded.
    """
    if report is None:
        report = mannheim_check(fd)
    if not report.is_mannheim:
        raise NotMannheim(
            f"lambda*kappa*(1+H^2) is not constant (deviation {report.deviation:.3e}); "
            "the curve has no Mannheim partner"
        )
    if lam is None:
        lam = report.lambda_hat
    if not lam > 0:
        raise ValidationError(
            f"lambda must be positive (got {lam}); for the mirrored pair use the opposite normal"
        )

    runs = usable_intervals(fd, h_min)
    index = slice(None)
    trimmed = []
    if not (len(runs) == 1 and runs[0] == (0, len(fd) - 1)):
        spans = [(float(fd.s[a]), float(fd.s[b])) for a, b in runs]
        if not trim or not runs:
            raise HVanishes(spans, h_min)
        a, b = max(runs, key=lambda r: r[1] - r[0])
        if b - a + 1 < 8:
            raise HVanishes(spans, h_min)
        index = slice(a, b + 1)
        if a > 0:
            trimmed.append((float(fd.s[0]), float(fd.s[a - 1])))
        if b < len(fd) - 1:
            trimmed.append((float(fd.s[b + 1]), float(fd.s[-1])))
        fd = fd.subset(index)

    H = fd.H[:, None]
    root = np.sqrt(1.0 + H**2)
    T_beta = (H * fd.T + fd.B) / root
    N_beta = (fd.T - H * fd.B) / root
    B_beta = fd.N.copy()
    arc_rate = lam * fd.kappa * fd.H * np.sqrt(1.0 + fd.H**2)
    s_bar = cumulative_trapezoid(arc_rate, fd.s, initial=0.0)
    return PartnerData(
        s=fd.s, T_beta=T_beta, N_beta=N_beta, B_beta=B_beta, arc_rate=arc_rate,
        s_bar=s_bar, lam=float(lam), index=index, trimmed_intervals=trimmed, edge=fd.edge,
    )


def partner_curvatures(fd: FrenetData, lam: float, tau_G_beta=None):
    """Curvature, torsion and harmonic curvature of the partner.

    ``kappa_beta = H' / (lam kappa H (1 + H^2)^(3/2))`` and
    ``tau_beta = 1 / (lam H) + tau_G_beta``; ``tau_G_beta`` defaults to
    alpha's Lie torsion, which the partner shares. Returns the three tracks;
    the two samples at each end inherit one-sided stencil error from H'.
    """
    if np.any(np.abs(fd.H) < H_MIN):
        spans = [(float(fd.s[a]), float(fd.s[b])) for a, b in usable_intervals(fd)]
        raise HVanishes(spans, H_MIN)
    tg = fd.tau_G if tau_G_beta is None else np.broadcast_to(tau_G_beta, fd.H.shape)
    kappa_beta = fd.H_prime / (lam * fd.kappa * fd.H * (1.0 + fd.H**2) ** 1.5)
    tau_beta = 1.0 / (lam * fd.H) + tg
    with np.errstate(divide="ignore", invalid="ignore"):
        H_beta = (tau_beta - tg) / kappa_beta
    return kappa_beta, tau_beta, H_beta


def build_partner(fd: FrenetData, report: MannheimReport | None = None, lam: float | None = None,
                  trim: bool = False, h_min: float = H_MIN) -> PartnerData:
    """Partner frame plus curvature tracks in one call."""
    pd = partner_frame(fd, report, lam=lam, h_min=h_min, trim=trim)
    sub = fd.subset(pd.index)
    kb, tb, Hb = partner_curvatures(sub, pd.lam)
    tgb = lie_torsion(pd.T_beta, pd.N_beta, pd.B_beta, fd.algebra)
    return replace(pd, kappa_beta=kb, tau_beta=tb, H_beta=Hb, tau_G_beta=tgb)


def tau_G_invariance_check(fd: FrenetData, pd: PartnerData, g=None) -> float:
    """Largest gap between the partner's and the curve's Lie torsion."""
    g = fd.algebra if g is None else g
    tau_G = fd.tau_G[pd.index]
    tgb = lie_torsion(pd.T_beta, pd.N_beta, pd.B_beta, g)
    return float(np.max(np.abs(tgb - tau_G)))


def _offset_curve(curve: CurveSamples, direction, length, note: str) -> CurveSamples:
    if curve.position is None:
        raise MissingPositions("the curve carries no positions; synthesize it or add a 'position' array")
    g = curve.algebra
    length = np.broadcast_to(np.asarray(length, float), curve.s.shape)[:, None]
    pos = groups.offset(curve.position, length * direction, g)
    tangent = groups.log_derivative(pos, curve.s, g)
    kind = groups.realization(g)
    meta = {"realization": kind, "construction": note}
    if kind != groups.ABELIAN:
        meta["note"] = REALIZATION_NOTE
    return CurveSamples(g, curve.s, tangent, pos, meta)


def construct_partner_positions(curve: CurveSamples, fd: FrenetData, lam) -> CurveSamples:
    """Positions of ``beta = alpha + lam N`` on alpha's grid.

    ``lam`` may be a scalar or a per-sample array. The returned samples are
    parametrized by alpha's arc length, not beta's; their tangent is the
    numerical left-translated velocity of the new positions.
    """
    if len(fd) != len(curve) or not np.array_equal(fd.s, curve.s):
        raise GridMismatch("Frenet data and curve samples are on different grids")
    return _offset_curve(curve, fd.N, lam, "alpha + lambda N")


def construct_inverse_partner(beta: CurveSamples, fd_beta: FrenetData, mu) -> CurveSamples:
    """Positions of ``alpha = beta + mu B_beta`` on beta's grid."""
    if len(fd_beta) != len(beta) or not np.array_equal(fd_beta.s, beta.s):
        raise GridMismatch("Frenet data and curve samples are on different grids")
    return _offset_curve(beta, fd_beta.B, mu, "beta + mu B_beta")


def point_distances(alpha: CurveSamples, beta: CurveSamples) -> np.ndarray:
    if alpha.position is None or beta.position is None:
        raise MissingPositions("both curves need positions")
    if len(alpha) != len(beta) or not np.allclose(alpha.s, beta.s, rtol=0, atol=1e-12):
        raise GridMismatch("curves are sampled on different grids")
    return groups.distance(alpha.position, beta.position, alpha.algebra)


def constant_distance_check(alpha: CurveSamples, beta: CurveSamples) -> float:
    """Max deviation of the corresponding-point distance from its median."""
    d = point_distances(alpha, beta)
    return float(np.max(np.abs(d - np.median(d))))


@dataclass(frozen=True, eq=False)
class BetaSideReport:
    residual: np.ndarray
    mu: float
    mu_track: np.ndarray | None
    mu_deviation: float
    scale: float
    max_residual: float
    passes: bool
    tolerance: float
    mask: np.ndarray
    fitted: bool
    # the relation in the closing step of the converse is taken as "= 0"
    assumption: str = "kappa_b - mu d(kappa_b H_b)/ds_bar + mu^2 kappa_b^3 H_b^2 = 0"


def _beta_terms(kappa_beta, H_beta, s_bar, s, arc_rate):
    kappa_beta = np.asarray(kappa_beta, float)
    H_beta = np.asarray(H_beta, float)
    # kappa*H stays finite on a geodesic where H alone blows up
    with np.errstate(invalid="ignore"):
        K = np.where(kappa_beta == 0.0, 0.0, kappa_beta * H_beta)
    if s is not None:
        h = uniform_step(s)
        if arc_rate is None:
            arc_rate = derivative(np.asarray(s_bar, float), h)
        D = derivative(K, h) / np.asarray(arc_rate, float)
    else:
        D = derivative(K, uniform_step(s_bar))
    return kappa_beta, K, D


def beta_side_check(kappa_beta, H_beta, s_bar, mu: float | None = None, *, s=None, arc_rate=None,
                    tol: float = TOL_CONST, edge: int = 2) -> BetaSideReport:
    """Residual of ``d(kappa_b H_b)/ds_bar = (kappa_b / mu)(1 + mu^2 kappa_b^2 H_b^2)``.

    The tracks may live on a nonuniform ``s_bar`` grid if the uniform
    parameter ``s`` they were sampled on is given; derivatives then go
    through ``ds_bar/ds`` (``arc_rate``, or the numerical derivative of
    ``s_bar``). When ``mu`` is omitted it is fitted by least squares, then
    re-solved per sample (the root nearest the fit) and tested for constancy.
    """
    if mu is not None and mu == 0:
        raise MuZero("mu must be nonzero")
    kb, K, D = _beta_terms(kappa_beta, H_beta, s_bar, s, arc_rate)
    mask = interior(len(kb), edge)
    kbm, Km, Dm = kb[mask], K[mask], D[mask]

    mu_track = None
    mu_dev = 0.0
    fitted = mu is None
    if fitted:
        if np.max(np.abs(kbm)) == 0.0:
            # geodesic partner: every mu satisfies the relation
            mu = float("nan")
        else:
            mu, mu_track = _fit_mu(kbm, Km, Dm)
            full = np.full(len(kb), np.nan)
            full[mask] = mu_track
            mu_track = full
            mu_dev = constancy(mu_track, mask, tol).deviation

    if np.isnan(mu):
        residual = D.copy()
    else:
        residual = D - kb / mu * (1.0 + mu**2 * K**2)
    scale = max(1.0, float(np.max(np.abs(Dm))))
    max_res = float(np.max(np.abs(residual[mask])))
    ok = max_res <= tol * scale
    if fitted and mu_track is not None:
        ok = ok and constancy(mu_track, mask, tol).constant
    return BetaSideReport(residual, float(mu), mu_track, mu_dev, scale, max_res, bool(ok), tol, mask, fitted)


def _fit_mu(kb, K, D):
    """Least-squares mu, then the per-sample root of the quadratic nearest it."""
    def cost(m):
        return float(np.sum((D - kb / m - m * kb * K**2) ** 2))

    # per sample: kb K^2 mu^2 - D mu + kb = 0
    a = kb * K**2
    disc = np.maximum(D**2 - 4 * a * kb, 0.0)
    sq = np.sqrt(disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = -0.5 * (-D + np.copysign(sq, -D))
        r1 = q / a
        r2 = kb / q
    candidates = [np.nanmedian(r) for r in (r1, r2) if np.any(np.isfinite(r))]
    candidates = [c for c in candidates if np.isfinite(c) and c != 0]
    best = min(candidates, key=cost)
    lo, hi = sorted((best * 0.5, best * 1.5))
    mu = float(minimize_scalar(cost, bounds=(lo, hi), method="bounded",
                               options={"xatol": 1e-14 * abs(best)}).x)
    track = np.where(np.abs(r1 - mu) <= np.abs(r2 - mu), r1, r2)
    return mu, track
