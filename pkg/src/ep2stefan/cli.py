"""Command-line front end.

Every command validates its configuration, computes, and only then writes its
files into ``--out``. Output is deterministic: CSV floats use ``%.17g``, JSON
keeps a fixed key order and carries ``schema_version``. Errors are reported as
a JSON object on stderr with exit status 2; a ``verify`` run with failing
checks exits with status 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import airy, ermakov, gardner, mkdv, reciprocal, stefan, suites
from .errors import Ep2Error

COMMANDS = ("solve", "verify", "stefan", "reciprocal", "modulate", "gardner", "zeros")
TOL_ENV = "EP2_TOL"


class ConfigError(Ep2Error, ValueError):
    """Invalid command-line configuration."""


def _parser():
    p = argparse.ArgumentParser(prog="ep2stefan", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--seed-a", type=float, default=1.0, help="Ai coefficient of the seed")
    p.add_argument("--seed-b", type=float, default=0.0, help="Bi coefficient of the seed")
    p.add_argument("--gamma", type=float, default=1.0, help="front constant, S = gamma (t+a)^(1/3)")
    p.add_argument("--shift-a", type=float, default=1.0, help="time shift a > 0")
    p.add_argument("--alpha", type=float, default=0.5, help="Painleve II parameter")
    p.add_argument("--nx", type=int, default=50)
    p.add_argument("--nt", type=int, default=20)
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=None,
                   help=f"quadrature/ODE tolerance (overrides ${TOL_ENV})")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--lm-override", type=float, default=None,
                   help="L_m used for the reciprocal front (breaks the flux condition)")
    p.add_argument("--interpretation", choices=ermakov.INTERPRETATIONS, default="t-of-tstar")
    p.add_argument("--sign-flip", action="store_true", help="take the negative delta branch")
    return p


def _config(args) -> suites.Config:
    tol = args.tol
    if tol is None and os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise ConfigError(f"{TOL_ENV} is not a number: {os.environ[TOL_ENV]!r}")
    tol = suites.DEFAULT_MAP_TOL if tol is None else tol
    if not tol > 0:
        raise ConfigError("tolerance must be positive")
    if args.nx < 5 or args.nt < 5:
        raise ConfigError("nx and nt must be at least 5")
    if not args.shift_a > 0:
        raise ConfigError("shift-a must be positive")
    if not args.t_max > 0:
        raise ConfigError("t-max must be positive")
    return suites.Config(args.seed_a, args.seed_b, args.gamma, args.shift_a, args.alpha,
                         -1 if args.sign_flip else 1, args.nx, args.nt, args.t_max, tol)


# ---------------------------------------------------------------------------
# writers

def _csv(path: Path, header, columns):
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=",".join(header), comments="")


def _json_text(obj) -> str:
    return json.dumps(suites._jsonable(obj), indent=2) + "\n"


def _manifest(cfg, sol, problem=None):
    sc = sol.profile.scales
    z0 = airy.first_zero(sol.profile.seed, 10.0)
    m = {
        "schema_version": suites.SCHEMA_VERSION,
        "seed": {"a": cfg.seed_a, "b": cfg.seed_b},
        "alpha": sc.alpha, "c2": sc.c2, "c3": sc.c3, "sigma": sc.sigma,
        "epsilon": sc.epsilon, "delta": sc.delta, "lambda": sc.lam, "zeta": sc.zeta,
        "shift_a": sol.a, "mu": sol.params.mu,
        "z_first_zero": z0,
        "xi_max": sol.profile.xi_max, "xi_max_limited_by": sol.profile.limited_by,
        "tol": cfg.tol,
    }
    if problem is not None:
        m.update({"gamma": problem.gamma, "L_m": problem.L_m, "P_m": problem.P_m,
                  "H0": problem.H0, "S0": problem.S0,
                  "i": problem.i, "j": problem.j, "k": problem.k})
    return m


# ---------------------------------------------------------------------------
# commands; each returns (files, stdout summary, exit status)

def cmd_solve(cfg, args):
    sol = suites.build_solution(cfg)
    prob = suites.build_problem(cfg, sol)
    g = suites.standard_grid(cfg, sol)
    X, T = g.mesh()
    f = mkdv.eval_u(sol, X, T)
    return ({"solution.csv": (("t", "x", "u", "u_x", "u_xx", "u_xxx", "u_t"),
                              (T, X, f.u, f.u_x, f.u_xx, f.u_xxx, f.u_t)),
             "manifest.json": _manifest(cfg, sol, prob)},
            {"points": int(X.size)}, 0)


def cmd_verify(cfg, args):
    rep = suites.run_all(cfg)
    status = 0 if rep["passed"] else 1
    summary = {s["name"]: s["passed"] for s in rep["suites"]}
    summary["passed"] = rep["passed"]
    return {"verify_report.json": rep}, summary, status


def cmd_stefan(cfg, args):
    prob = suites.build_problem(cfg)
    t = stefan.default_time_grid(prob.a, cfg.t_max, max(cfg.nt, 5))
    S, Sdot = stefan.front_position(prob, t)
    rep = stefan.verify_boundary_conditions(prob, t).max_abs()
    out = {"schema_version": suites.SCHEMA_VERSION, "constants": _manifest(cfg, prob.sol, prob),
           "boundary_residuals": rep}
    return ({"front.csv": (("t", "S", "S_dot"), (t, S, Sdot)), "stefan_report.json": out},
            rep, 0)


def cmd_reciprocal(cfg, args):
    prob = suites.build_problem(cfg)
    sol = prob.sol
    g = suites.standard_grid(cfg, sol)
    grid = suites.GridSpec(0.0, g.x_max, g.t_min, g.t_max, g.nx, g.nt)
    field = reciprocal.build_map(sol, grid, tol=cfg.map_tol)
    X, T = grid.mesh()
    study = suites.casimir_study(sol, t_max=min(suites.CASIMIR_DOMAIN[1], cfg.t_max), tol=cfg.map_tol)
    t_star = grid.t
    front = reciprocal.reciprocal_front(prob, t_star, args.lm_override)
    checks = reciprocal.verify_reciprocal_problem(prob, tol=cfg.map_tol)
    rep = {
        "schema_version": suites.SCHEMA_VERSION,
        "casimir": {f"{r.u_star.shape[1]}x{r.u_star.shape[0]}": {
            "max_abs": r.max_abs, "h_xstar": float(r.x_star[1] - r.x_star[0]),
            "h_t": float(r.t[1] - r.t[0])} for r in study},
        "casimir_order": suites._order(study[0].max_abs, study[1].max_abs),
        "boundary": checks,
        "front": {"L_m": prob.L_m if args.lm_override is None else args.lm_override,
                  "L_m_is_override": args.lm_override is not None,
                  "coefficient": front.coefficient, "S_star_0": front.s_star_0},
    }
    return ({"reciprocal.csv": (("x", "t", "x_star", "u_star"), (X, T, field.x_star, field.u_star)),
             "reciprocal_front.csv": (("t_star", "S_star"), (t_star, front.s_star)),
             "reciprocal_report.json": rep},
            {"casimir_max_abs": study[-1].max_abs, "s_star_coefficient": front.coefficient}, 0)


def cmd_modulate(cfg, args):
    sol = suites.build_solution(cfg)
    mod = ermakov.Modulation.from_basis(ermakov.ErmakovBasis.free(), (0.0, cfg.t_max), cfg.map_tol)
    field = ermakov.apply_T(sol, mod)
    x = suites.standard_grid(cfg, sol).x
    lo, hi = mod.t_star_span
    ts = np.linspace(lo, hi, cfg.nt)
    X, TS = np.meshgrid(x, ts)
    us = field(X, TS).u
    res, _ = ermakov.modulated_residual(field, sol.lam, sol.a, args.interpretation, x)
    rep = {
        "schema_version": suites.SCHEMA_VERSION,
        "modulation": "free: rho = sqrt(1 + t^2)",
        "interpretation": args.interpretation,
        "residual_max_abs": float(np.max(np.abs(res))),
        "discrimination": ermakov.discrimination_experiment(sol, mod, x),
    }
    tt = np.broadcast_to(mod.t_of(ts)[:, None], X.shape)
    return ({"modulated.csv": (("x", "t_star", "t", "u_star"), (X, TS, tt, us)),
             "modulate_report.json": rep},
            {"residual_max_abs": rep["residual_max_abs"],
             "consistent": rep["discrimination"]["consistent"]}, 0)


def cmd_gardner(cfg, args):
    sol = suites.build_solution(cfg)
    f = gardner.GardnerField(sol)
    Y, TA = gardner.shifted_grid(f, cfg.nx, cfg.nt, cfg.t_max)
    v = gardner.eval_v(f, Y, TA).v
    res = gardner.gardner_residual(f, Y, TA)
    diff = res - mkdv.mkdv_residual(sol, *f.to_source(Y, TA))
    rep = {"schema_version": suites.SCHEMA_VERSION,
           "residual_max_abs": float(np.max(np.abs(res))),
           "identity_max_abs": float(np.max(np.abs(diff)))}
    return ({"gardner.csv": (("y", "tau", "v"), (Y, TA, v)), "gardner_report.json": rep},
            rep, 0)


def cmd_zeros(cfg, args):
    prof = suites.build_profile(cfg)
    z0 = airy.first_zero(prof.seed, 10.0)
    eps = prof.scales.epsilon
    rep = {
        "schema_version": suites.SCHEMA_VERSION,
        "z_first_zero": z0,
        "epsilon": eps,
        "gamma_bound": None if z0 is None else eps * z0,
        "profile_xi_max": prof.xi_max,
        "profile_limited_by": prof.limited_by,
    }
    return {"zeros.json": rep}, rep, 0


HANDLERS = {
    "solve": cmd_solve, "verify": cmd_verify, "stefan": cmd_stefan,
    "reciprocal": cmd_reciprocal, "modulate": cmd_modulate, "gardner": cmd_gardner,
    "zeros": cmd_zeros,
}


def _write(out: Path, files: dict):
    out.mkdir(parents=True, exist_ok=True)
    for name, payload in files.items():
        path = out / name
        if name.endswith(".csv"):
            _csv(path, *payload)
        else:
            path.write_text(_json_text(payload))


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _config(args)
        files, summary, status = HANDLERS[args.command](cfg, args)
    except (Ep2Error, ValueError, ArithmeticError) as exc:
        err = {"schema_version": suites.SCHEMA_VERSION, "error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return 2
    _write(Path(args.out), files)
    sys.stdout.write(_json_text(summary))
    return status


if __name__ == "__main__":
    sys.exit(main())
