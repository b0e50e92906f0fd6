"""Command-line interface.

Exit codes: 0 success, 1 verification report with failing entries,
2 invalid input, 3 vanishing curvature, 4 vanishing harmonic curvature,
5 degenerate frame, 6 curve is not Mannheim, 7 integration step too large.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import __version__, helix, io, mannheim, synthesis, verify
from .errors import LieCurveError, ValidationError
from .frenet import (
    CurveSamples, frenet_apparatus, orthonormality_residual, reparametrize_arclength,
)
from .lie_algebra import PRESETS, check_bi_invariance, get_algebra, jacobi_residual

CONFIG_ENV = "LIECURVE_CONFIG"
# samples dropped at each end when fitting mu from positions: the stencils
# compose there and the end error dominates the fit
INVERSE_FIT_EDGE = 8

# defaults applied after the config file; flags left unset fall through
DEFAULTS = {
    "algebra": "abelian",
    "h": None,
    "kappa_min": None,
    "tol": verify.TOL_CONST,
    "h_min": mannheim.H_MIN,
    "seed": verify.Config.seed,
    "range": None,
    "realization": "geodesic",
}


def load_config(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    data = io.read_json(path)
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Flags override the config file, which overrides built-in defaults."""
    config = load_config(args.config)
    for key, value in vars(args).copy().items():
        if value is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])
    return args


def _emit(obj, out: str | None) -> None:
    if out:
        io.write_json(out, obj)
    else:
        sys.stdout.write(io.dumps(obj))


def _arclength(curve: CurveSamples) -> CurveSamples:
    return curve if curve.is_arclength() else reparametrize_arclength(curve)


def _load_fd(args):
    curve = _arclength(io.read_curve(args.curve))
    return curve, frenet_apparatus(curve, kappa_min=args.kappa_min)


def cmd_analyze(args) -> int:
    curve, fd = _load_fd(args)
    if args.out:
        io.write_frenet_csv(args.out, fd, frames=args.frames)
    m = fd.interior
    summary = {
        "samples": len(fd),
        "interval": [float(fd.s[0]), float(fd.s[-1])],
        "algebra": fd.algebra.name,
        "reparametrized": bool(curve.metadata.get("reparametrized", False)),
        "kappa": {"min": float(fd.kappa.min()), "max": float(fd.kappa.max())},
        "tau": {"min": float(fd.tau.min()), "max": float(fd.tau.max())},
        "tau_G": float(np.median(fd.tau_G)),
        "H": {"min": float(fd.H[m].min()), "max": float(fd.H[m].max())},
        "orthonormality_residual": float(orthonormality_residual(fd.T, fd.N, fd.B, fd.algebra.orientation).max()),
        "classification": helix.classify(fd, args.tol).to_json(),
    }
    if args.out:
        summary["csv"] = args.out
    _emit(summary, args.summary)
    return 0


def cmd_classify(args) -> int:
    _, fd = _load_fd(args)
    _emit(helix.classify(fd, args.tol).to_json(), args.out)
    return 0


def cmd_mannheim_check(args) -> int:
    _, fd = _load_fd(args)
    _emit(mannheim.mannheim_check(fd, args.tol).to_json(), args.out)
    return 0


def cmd_mannheim_partner(args) -> int:
    curve, fd = _load_fd(args)
    report = mannheim.mannheim_check(fd, args.tol)
    pd = mannheim.build_partner(fd, report, lam=args.lam, trim=args.trim, h_min=args.h_min)
    sub = fd.subset(pd.index)
    out = {"lambda_hat": report.lambda_hat, "is_mannheim": report.is_mannheim,
           "max_residual": report.max_residual, **pd.to_json()}
    out["partner_classification"] = helix.classify_partner(pd.kappa_beta, pd.H_beta, pd.s, args.tol, pd.edge).to_json()
    if args.partner_curve:
        piece = CurveSamples(curve.algebra, curve.s[pd.index], curve.tangent[pd.index],
                             None if curve.position is None else curve.position[pd.index])
        beta = mannheim.construct_partner_positions(piece, sub, pd.lam)
        io.write_curve(args.partner_curve, beta, {
            "name": "mannheim-partner", "lambda": pd.lam, "source": str(args.curve),
            "realization": args.realization, **beta.metadata,
        })
        out["partner_curve"] = args.partner_curve
    _emit(out, args.out)
    return 0


def cmd_mannheim_inverse(args) -> int:
    beta = io.read_curve(args.curve)
    if beta.position is None:
        raise ValidationError(f"{args.curve}: key 'position' is required to rebuild the curve")
    fd_b = frenet_apparatus(beta, kappa_min=args.kappa_min)
    mu = args.mu
    fitted = None
    if mu is None:
        s_bar = cumulative_trapezoid(fd_b.speed, fd_b.s, initial=0.0)
        fitted = mannheim.beta_side_check(fd_b.kappa, fd_b.H, s_bar, s=fd_b.s, arc_rate=fd_b.speed,
                                          tol=args.tol, edge=INVERSE_FIT_EDGE)
        if not np.isfinite(fitted.mu):
            raise ValidationError("mu cannot be fitted on a curve with vanishing curvature; pass --mu")
        mu = fitted.mu
    alpha = mannheim.construct_inverse_partner(beta, fd_b, mu)
    if args.out_curve:
        io.write_curve(args.out_curve, alpha, {"name": "mannheim-inverse", "mu": mu, "source": str(args.curve),
                                               **alpha.metadata})
    report = {"mu": mu, "fitted": fitted is not None}
    if fitted is not None:
        # positions carry the partner's H through four numerical derivatives,
        # so the per-sample relation is reported rather than enforced here
        report.update(mu_deviation=fitted.mu_deviation, max_residual=fitted.max_residual,
                      relation_holds=fitted.passes)
    if args.out_curve:
        report["curve"] = args.out_curve
    _emit(report, args.out)
    return 0


GENERATORS = ("helix", "slant-mannheim", "random-mannheim", "torsion-power")


def cmd_synthesize(args) -> int:
    h = args.h if args.h is not None else 1e-3
    kw = {"algebra": args.algebra, "h": h}
    if args.range is not None:
        kw["s_range"] = tuple(args.range)
    gen = args.generator

    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            flags = ", ".join("--" + ("lambda" if n == "lam" else n) for n in missing)
            raise ValidationError(f"generator {gen!r} needs {flags}")

    if gen == "helix":
        need("kappa", "tau")
        spec = synthesis.circular_helix(args.kappa, args.tau, **kw)
    elif gen == "slant-mannheim":
        need("a", "b", "lam")
        spec = synthesis.generate_slant_mannheim(args.a, args.b, args.lam, **kw)
    elif gen == "random-mannheim":
        need("lam")
        spec = synthesis.random_mannheim(args.lam, int(args.seed), **kw)
    else:
        need("kappa", "power")
        spec = synthesis.torsion_power(args.kappa, args.power, **kw)
    curve = synthesis.integrate_frame(spec).curve
    prov = {**spec.provenance, "h": h, "s_range": list(spec.s_range)}
    if args.out:
        io.write_curve(args.out, curve, prov)
    else:
        sys.stdout.write(io.dumps(io.curve_to_json(curve, prov)))
    return 0


def cmd_verify(args) -> int:
    hs = args.h if isinstance(args.h, list) else ([args.h] if args.h is not None else [])
    cfg = verify.Config(seed=int(args.seed))
    if len(hs) == 1:
        cfg.h = float(hs[0])
    elif len(hs) > 1:
        cfg.convergence_h = tuple(float(x) for x in hs)
    if args.only:
        cfg.only = tuple(args.only)
    if args.presets:
        for p in args.presets:
            get_algebra(p)
        cfg.presets = tuple(args.presets)
    report = verify.run(cfg)
    _emit(report.to_json(), args.out)
    return 0 if report.passed else 1


def cmd_groups_list(args) -> int:
    rows = [{"name": g.name, "description": g.description, "lie_torsion": g.lie_torsion} for g in PRESETS.values()]
    _emit(rows, None)
    return 0


def cmd_groups_show(args) -> int:
    g = get_algebra(args.name)
    bi = check_bi_invariance(g)
    out = g.to_json()
    out.update(lie_torsion=g.lie_torsion, bi_invariant=bi.ok, jacobi_residual=jacobi_residual(g))
    _emit(out, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liecurve", description=__doc__.splitlines()[0],
                                epilog=__doc__.split("\n", 2)[2], formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help=f"JSON config file with flag names as keys (default: ${CONFIG_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_cmd(parser):
        parser.add_argument("curve", help="curve JSON file")
        parser.add_argument("--kappa-min", type=float, help="curvature floor (default 1e-6 per unit length)")
        parser.add_argument("--tol", type=float, help="relative constancy tolerance (default 1e-4)")
        parser.add_argument("--out", help="write the JSON result here instead of stdout")
        parser.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    a = sub.add_parser("analyze", help="Frenet apparatus of a curve file")
    curve_cmd(a)
    a.set_defaults(func=cmd_analyze)
    a.add_argument("--summary", help="write the JSON summary here instead of stdout")
    a.add_argument("--frames", action="store_true", help="add T, N, B columns to the CSV")

    c = sub.add_parser("classify", help="general helix, slant helix or neither")
    curve_cmd(c)
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("mannheim", help="Mannheim condition and partner construction")
    msub = m.add_subparsers(dest="action", required=True)
    mc = msub.add_parser("check", help="test the Mannheim condition")
    curve_cmd(mc)
    mc.set_defaults(func=cmd_mannheim_check)
    mp = msub.add_parser("partner", help="partner frame, curvatures and optional positions")
    curve_cmd(mp)
    mp.add_argument("--lambda", dest="lam", type=float, help="offset distance (default: estimated)")
    mp.add_argument("--trim", action="store_true", help="keep the longest interval where |H| >= h_min")
    mp.add_argument("--h-min", type=float, help="harmonic curvature floor (default 1e-4)")
    mp.add_argument("--partner-curve", help="write the partner's positions as a curve file")
    mp.add_argument("--realization", choices=["geodesic"],
                    help="offset along the geodesic alpha exp(lambda N); a translation when abelian")
    mp.set_defaults(func=cmd_mannheim_partner)
    mi = msub.add_parser("inverse", help="rebuild the curve from its partner (beta + mu B_beta)")
    curve_cmd(mi)
    mi.add_argument("--mu", type=float, help="offset (default: fitted from the partner-side relation)")
    mi.add_argument("--out-curve", help="write the rebuilt curve here")
    mi.set_defaults(func=cmd_mannheim_inverse)

    s = sub.add_parser("synthesize", help="generate a curve file from curvature and torsion")
    s.add_argument("generator", choices=GENERATORS)
    s.add_argument("--algebra", help=f"preset ({', '.join(PRESETS)}); default abelian")
    s.add_argument("--h", type=float, help="arc-length step (default 1e-3)")
    s.add_argument("--range", nargs=2, type=float, metavar=("S0", "S1"))
    s.add_argument("--kappa", type=float)
    s.add_argument("--tau", type=float)
    s.add_argument("--power", type=float)
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="curve file to write (default stdout)")
    s.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_synthesize)

    v = sub.add_parser("verify-theorems", help="run the self-contained verification suite")
    v.add_argument("--h", type=float, action="append",
                   help="step; give twice or more for convergence mode")
    v.add_argument("--seed", type=int)
    v.add_argument("--only", action="append", metavar="ID", help=f"one of {', '.join(verify.THEOREM_IDS)}")
    v.add_argument("--presets", nargs="+")
    v.add_argument("--out", help="report file (default stdout)")
    v.add_argument("--config", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("groups", help="algebra presets")
    gsub = g.add_subparsers(dest="action", required=True)
    gsub.add_parser("list").set_defaults(func=cmd_groups_list)
    gs = gsub.add_parser("show")
    gs.add_argument("name")
    gs.set_defaults(func=cmd_groups_show)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _resolve(args)
        return args.func(args)
    except LieCurveError as exc:
        print(f"liecurve: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(f"liecurve: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
