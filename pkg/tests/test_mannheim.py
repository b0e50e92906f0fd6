from dataclasses import replace

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy.interpolate import CubicSpline

from liecurve import mannheim
from liecurve.errors import HVanishes, MissingPositions, MuZero, NotMannheim, ValidationError
from liecurve.frenet import CurveSamples, frenet_apparatus, orthonormality_residual
from liecurve.lie_algebra import PRESETS
from liecurve.synthesis import circular_helix, generate_mannheim_family, integrate_frame

from conftest import build

# cosh family a = b = 1, lambda = 1/2, at s = 1, 1.5, 2:
# (kappa, kappa_beta, tau_beta - tau_G, ds_bar/ds)
COSH_ORACLE = {
    1.0: (0.83994868322805214, 0.85091812823932155, 1.7018362564786431, 0.76159415595576489),
    1.5: (0.36141327784729715, 0.46964244059522464, 0.93928488119044928, 0.90514825364486640),
    2.0: (0.14130164970632893, 0.27572056477178321, 0.55144112954356642, 0.96402758007581688),
}
S_BAR_AT_2 = 1.2048882403995869  # partner arc length from s = 0.5 to 2


def test_oracle_is_reproduced_symbolically():
    s = sp.symbols("s", positive=True)
    lam = sp.Rational(1, 2)
    H = sp.sinh(s)
    kappa = 1 / (lam * (1 + H**2))
    kb = sp.diff(H, s) / (lam * kappa * H * (1 + H**2) ** sp.Rational(3, 2))
    rate = lam * kappa * H * sp.sqrt(1 + H**2)
    x = sp.symbols("x", positive=True)

    def vanishes(expr):
        # in x = e^s the radicands are perfect squares that factor() exposes
        return sp.simplify(sp.factor(expr.rewrite(sp.exp).subs(sp.exp(s), x), deep=True)) == 0

    assert vanishes(kb - 1 / sp.sinh(s))
    assert vanishes(rate - sp.tanh(s))
    for v, (k, kbv, tbv, r) in COSH_ORACLE.items():
        assert float(kappa.subs(s, v)) == pytest.approx(k, rel=1e-15)
        assert float(kb.subs(s, v)) == pytest.approx(kbv, rel=1e-15)
        assert float((1 / (lam * H)).subs(s, v)) == pytest.approx(tbv, rel=1e-15)
        assert float(rate.subs(s, v)) == pytest.approx(r, rel=1e-15)


def _at(fd_or_s, v):
    s = getattr(fd_or_s, "s", fd_or_s)
    return int(np.argmin(np.abs(s - v)))


def test_helix_lambda_hat():
    rep = mannheim.mannheim_check(build("helix", "abelian").fd)
    assert rep.is_mannheim
    assert rep.lambda_hat == pytest.approx(3.0, rel=1e-4)
    assert set(rep.to_json()) >= {"lambda_hat", "is_mannheim", "max_residual"}


def test_negative_control_rejected(preset):
    rep = mannheim.mannheim_check(build("tau=s", preset).fd)
    assert not rep.is_mannheim
    with pytest.raises(NotMannheim):
        mannheim.partner_frame(build("tau=s", preset).fd)


def test_cosh_partner_curvatures(preset):
    b = build("cosh", preset)
    pd = mannheim.build_partner(b.fd)
    tg = PRESETS[preset].lie_torsion
    assert pd.lam == pytest.approx(0.5, rel=1e-8)
    for v, (_, kb, tb, rate) in COSH_ORACLE.items():
        i = _at(pd, v)
        assert pd.kappa_beta[i] == pytest.approx(kb, rel=1e-4)
        assert pd.tau_beta[i] - tg == pytest.approx(tb, rel=1e-4)
        assert pd.arc_rate[i] == pytest.approx(rate, rel=1e-6)
    assert pd.s_bar[_at(pd, 2.0)] == pytest.approx(S_BAR_AT_2, rel=1e-6)
    np.testing.assert_allclose(pd.H_beta[pd.interior], 2.0, atol=1e-3)


def test_partner_frame_is_oriented_orthonormal(preset):
    fd = build("random", preset).fd
    pd = mannheim.partner_frame(fd)
    g = PRESETS[preset]
    assert orthonormality_residual(pd.T_beta, pd.N_beta, pd.B_beta, g.orientation).max() < 1e-12
    np.testing.assert_array_equal(pd.B_beta, fd.N)


def test_tau_G_invariant(preset):
    for kind in ("helix", "cosh", "random"):
        b = build(kind, preset)
        pd = mannheim.partner_frame(b.fd)
        assert mannheim.tau_G_invariance_check(b.fd, pd) < 1e-12


def test_positional_partner_distance(preset):
    b = build("cosh", preset)
    beta = mannheim.construct_partner_positions(b.curve, b.fd, 0.5)
    d = mannheim.point_distances(b.curve, beta)
    tol = 1e-10 if preset == "abelian" else 1e-8
    assert mannheim.constant_distance_check(b.curve, beta) <= tol
    np.testing.assert_allclose(d, 0.5, atol=tol)
    if preset != "abelian":
        assert beta.metadata["note"] == mannheim.REALIZATION_NOTE


def test_abelian_positional_partner_recovers_theory():
    b = build("cosh", "abelian")
    pd = mannheim.build_partner(b.fd)
    beta = mannheim.construct_partner_positions(b.curve, b.fd, 0.5)
    fdb = frenet_apparatus(beta)
    m = fdb.interior
    align = np.einsum("ij,ij->i", fdb.B, b.fd.N) ** 2
    assert np.max(np.abs(align - 1)[m]) < 1e-4
    np.testing.assert_allclose(fdb.kappa[m], pd.kappa_beta[m], rtol=1e-4)
    np.testing.assert_allclose(fdb.tau[m], pd.tau_beta[m], rtol=1e-4)


def test_inverse_partner_returns_to_curve():
    b = build("cosh", "abelian")
    beta = mannheim.construct_partner_positions(b.curve, b.fd, 0.5)
    fdb = frenet_apparatus(beta)
    alpha = mannheim.construct_inverse_partner(beta, fdb, -0.5)
    assert np.max(np.abs(alpha.position - b.curve.position)[2:-2]) < 1e-8


def test_negative_offset_is_not_a_partner():
    """Offsetting a non-Mannheim curve along N does not give B_beta parallel to N."""
    b = build("tau=s", "abelian")
    beta = mannheim.construct_partner_positions(b.curve, b.fd, 0.5)
    fdb = frenet_apparatus(beta)
    align = np.einsum("ij,ij->i", fdb.B, b.fd.N) ** 2
    assert np.min(align[fdb.interior]) < 1 - 1e-3


def test_beta_side_relation(preset):
    b = build("cosh", preset)
    pd = mannheim.build_partner(b.fd)
    rep = mannheim.beta_side_check(pd.kappa_beta, pd.H_beta, pd.s_bar, s=pd.s, arc_rate=pd.arc_rate)
    assert rep.passes
    assert rep.mu == pytest.approx(-0.5, rel=1e-4)
    assert rep.mu_deviation <= 1e-4
    assert "= 0" in rep.assumption
    fixed = mannheim.beta_side_check(pd.kappa_beta, pd.H_beta, pd.s_bar, -0.5, s=pd.s, arc_rate=pd.arc_rate)
    assert fixed.passes and fixed.max_residual <= 1e-4 * fixed.scale
    wrong = mannheim.beta_side_check(pd.kappa_beta, pd.H_beta, pd.s_bar, 0.5, s=pd.s, arc_rate=pd.arc_rate)
    assert not wrong.passes


def test_beta_side_on_resampled_partner_arclength():
    """Same relation with the partner tracks moved onto a uniform s_bar grid."""
    b = build("random", "abelian")
    pd = mannheim.build_partner(b.fd)
    grid = np.linspace(pd.s_bar[0], pd.s_bar[-1], len(pd.s_bar))
    # kappa_beta changes sign on this curve, so H_beta has poles; interpolate
    # the smooth product kappa_beta H_beta = tau_beta - tau_G instead
    kb = CubicSpline(pd.s_bar, pd.kappa_beta)(grid)
    K = CubicSpline(pd.s_bar, pd.tau_beta - pd.tau_G_beta)(grid)
    rep = mannheim.beta_side_check(kb, K / kb, grid, edge=6)
    assert rep.passes
    assert rep.mu == pytest.approx(-0.5, rel=1e-4)


def test_mu_zero_rejected():
    with pytest.raises(MuZero):
        mannheim.beta_side_check(np.ones(10), np.ones(10), np.arange(10.0), 0.0)


def test_circle_h_vanishes_everywhere():
    c = integrate_frame(circular_helix(0.5, 0.0, "abelian", (0, 6), 1e-2))
    fd = frenet_apparatus(c.curve)
    with pytest.raises(HVanishes) as err:
        mannheim.partner_frame(fd)
    assert err.value.exit_code == 4
    assert "--trim" in str(err.value)


def test_trim_keeps_longest_usable_interval():
    b = build("random", "abelian")
    fd = b.fd
    H = fd.H.copy()
    H[:300] = 0.0
    # keep the Mannheim condition by moving the change into kappa
    kappa = 1 / (0.5 * (1 + H**2))
    fd2 = replace(fd, H=H, kappa=kappa, tau=kappa * H + fd.tau_G)
    with pytest.raises(HVanishes, match=r"\[0\.8"):
        mannheim.partner_frame(fd2)
    pd = mannheim.partner_frame(fd2, trim=True)
    assert pd.s[0] == pytest.approx(fd.s[300])
    assert pd.trimmed_intervals == [(fd.s[0], fd.s[299])]


def test_lambda_must_be_positive():
    with pytest.raises(ValidationError, match="positive"):
        mannheim.partner_frame(build("cosh", "abelian").fd, lam=-0.5)


def test_positions_required():
    b = build("cosh", "abelian")
    bare = CurveSamples(b.curve.algebra, b.curve.s, b.curve.tangent)
    with pytest.raises(MissingPositions):
        mannheim.construct_partner_positions(bare, b.fd, 0.5)


@settings(max_examples=8, deadline=None)
@given(lam=st.floats(0.2, 2.0), c=st.floats(0.3, 0.8), d=st.floats(0.0, 0.15), preset=st.sampled_from(sorted(PRESETS)))
def test_lambda_is_recovered_for_any_family(lam, c, d, preset):
    # lambda kappa stays inside (0, 1) so the torsion branch exists
    spec = generate_mannheim_family(lam, lambda s: (c + d * np.sin(s)) / lam, preset, s_range=(0, 3), h=1e-2)
    rep = mannheim.mannheim_check(frenet_apparatus(integrate_frame(spec).curve))
    assert rep.is_mannheim
    assert rep.lambda_hat == pytest.approx(lam, rel=1e-4)
