"""Reciprocal transformation of the extended mKdV equation.

The conservation form ``u_t = d/dx[-u_xx + 2u^3 + (lam/3)(t+a)^-2 u^-3]`` makes

    dx* = u dx + F dt,   F = -u_xx + 2u^3 + (lam/3)(t+a)^-2 u^-3,   t* = t,   u* = 1/u

an exact 1-form. In the new variables ``u*`` obeys the extended Casimir equation

    u*_t* = d/dx* [ d/dx*( (1/u*) d/dx*(1/u*) ) - 2/u*^2 - (lam/3) u*^4 (t*+a)^-2 ].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .mkdv import MkdvSolution, eval_u
from .numerics import (
    KRONROD_NODES, KRONROD_WEIGHTS, GridSpec, Tolerance, cumulative_quadrature,
    fd_derivative, find_root, find_roots, quadrature,
)
from .stefan import StefanProblem, boundary_flux, default_time_grid, front_position
from .painleve import psi_chain

MAP_TOL = Tolerance(1e-13, 1e-13)


def flux(u, u_xx, lam, T):
    """``F = -u_xx + 2u^3 + (lam/3) T^-2 u^-3``, the dt-coefficient of ``dx*``."""
    return -boundary_flux(u, u_xx, lam, T)


def closedness_from_fields(u, u_x, u_xxx, u_t, lam, T):
    """``u_t - dF/dx`` given the field and its derivatives."""
    dF = -u_xxx + 6.0 * u * u * u_x - lam * T**-2 * u_x / u**4
    return u_t - dF


def closedness_residual(sol: MkdvSolution, x, t):
    """Exactness defect of the 1-form ``u dx + F dt`` at ``(x, t)``."""
    f = eval_u(sol, x, t)
    T = np.asarray(t, dtype=float) + sol.a
    return closedness_from_fields(f.u, f.u_x, f.u_xxx, f.u_t, sol.lam, T)


def _u_of_x(sol, t):
    return lambda x: eval_u(sol, x, np.full_like(np.asarray(x, dtype=float), t)).u


def _F_of_t(sol, x):
    def F(t):
        t = np.asarray(t, dtype=float)
        f = eval_u(sol, np.full_like(t, x), t)
        return flux(f.u, f.u_xx, sol.lam, t + sol.a)
    return F


def origin_drift(sol: MkdvSolution, t, tol: Tolerance = MAP_TOL):
    """``x*(0, t) - x*(0, 0) = int_0^t F(0, s) ds``; zero for the exact solution."""
    return quadrature(_F_of_t(sol, 0.0), 0.0, t, tol)


def x_star(sol: MkdvSolution, x, t, origin=0.0, tol: Tolerance = MAP_TOL):
    """``x*(x, t) = origin + int_0^x u(s, t) ds``.

    The ``t``-dependence of the constant of integration is dropped: the flux
    through ``x = 0`` vanishes for the exact solution (see :func:`origin_drift`).
    """
    return origin + quadrature(_u_of_x(sol, t), 0.0, x, tol)


def two_path_difference(sol: MkdvSolution, x, t1, t2, tol: Tolerance = MAP_TOL):
    """x-quadrature at ``t2`` minus (x-quadrature at ``t1`` + t-quadrature of ``F`` along ``x``)."""
    direct = quadrature(_u_of_x(sol, t2), 0.0, x, tol)
    around = quadrature(_u_of_x(sol, t1), 0.0, x, tol) + quadrature(_F_of_t(sol, x), t1, t2, tol)
    return direct - around


@dataclass(frozen=True)
class ReciprocalField:
    """Image of an mKdV solution on a grid: ``x*`` and ``u* = 1/u`` as ``[t][x]`` lattices."""

    source: MkdvSolution
    grid: GridSpec
    x_star_origin: float
    x_star: np.ndarray
    u_star: np.ndarray
    tol: Tolerance = MAP_TOL

    def x_star_range(self):
        """Interval of ``x*`` covered by every time slice."""
        lo = np.minimum(self.x_star[:, 0], self.x_star[:, -1])
        hi = np.maximum(self.x_star[:, 0], self.x_star[:, -1])
        return float(np.max(lo)), float(np.min(hi))


def build_map(sol: MkdvSolution, grid: GridSpec, origin=0.0, tol: Tolerance = MAP_TOL) -> ReciprocalField:
    """Sample ``x*(x, t)`` and ``u*`` on ``grid`` by cumulative quadrature from ``x = 0``."""
    if grid.x_min < 0 or np.any(grid.x_max >= sol.x_pole(grid.t)):
        raise DomainError("grid leaves the validity region of the solution")
    xs = np.empty((grid.nt, grid.nx))
    nodes = np.concatenate([[0.0], grid.x]) if grid.x_min > 0 else grid.x
    for n, t in enumerate(grid.t):
        cum = cumulative_quadrature(_u_of_x(sol, t), nodes, tol)
        xs[n] = origin + (cum[1:] if grid.x_min > 0 else cum)
    X, T = grid.mesh()
    u = eval_u(sol, X, T).u
    if not (np.all(np.diff(xs, axis=1) > 0) or np.all(np.diff(xs, axis=1) < 0)):
        raise DomainError("x* is not monotone in x; u changes sign on the grid")
    return ReciprocalField(sol, grid, origin, xs, 1.0 / u, tol)


def _panel_integral(f, a, b):
    """One 15-point Kronrod panel of ``f`` over each ``[a_m, b_m]``; for short panels only."""
    c = 0.5 * (a + b)
    r = 0.5 * (b - a)
    x = c[:, None] + r[:, None] * KRONROD_NODES[None, :]
    return r * (f(x.ravel()).reshape(x.shape) @ KRONROD_WEIGHTS)


def invert_slice(field: ReciprocalField, n: int, targets):
    """Preimages ``x`` of ``targets`` under ``x*(., t_n)``.

    Each target is bracketed by neighbouring grid nodes. Inside the bracket
    ``x*`` is the node value plus a Kronrod panel of ``u`` from that node, and
    the root is polished by Newton steps with the exact slope ``u``. No
    interpolation of ``u`` or ``u*`` enters.
    """
    sol, grid = field.source, field.grid
    t = float(grid.t[n])
    row = field.x_star[n]
    xg = grid.x
    u_t = _u_of_x(sol, t)
    targets = np.asarray(targets, dtype=float)
    sign = 1.0 if row[-1] > row[0] else -1.0
    j = np.searchsorted(sign * row, sign * targets) - 1
    j = np.where(np.abs(targets - row[0]) <= 1e-14, 0, j)
    j = np.where(np.abs(targets - row[-1]) <= 1e-14, grid.nx - 2, j)
    if np.any(j < 0) or np.any(j > grid.nx - 2):
        raise DomainError(f"x* targets outside the image of time slice {n}")
    x0 = xg[j]
    base = row[j] - targets
    g = lambda x: base + _panel_integral(u_t, x0, x)
    return find_roots(g, u_t, xg[j], xg[j + 1], f_tol=1e-14 * max(1.0, abs(row[-1])))


class CasimirResult(NamedTuple):
    residual: np.ndarray
    max_abs: float
    x_star: np.ndarray
    t: np.ndarray
    u_star: np.ndarray


def casimir_operator(u_star, h_xs, h_t, lam, T, accuracy=4):
    """FD residual of the extended Casimir equation on a uniform ``[t][x*]`` lattice.

    With ``v = 1/u*`` the right-hand side expands to
    ``3 v' v'' + v v''' - 4 v v' + (4 lam/3) T^-2 v^-5 v'``. Each derivative is
    then a single stencil, so the edge columns keep full order; nesting first
    derivatives would differentiate the one-sided stencil error.
    """
    v = 1.0 / u_star
    d1 = fd_derivative(v, h_xs, 1, accuracy, axis=1)
    d2 = fd_derivative(v, h_xs, 2, accuracy, axis=1)
    d3 = fd_derivative(v, h_xs, 3, accuracy, axis=1)
    rhs = 3 * d1 * d2 + v * d3 - 4 * v * d1 + 4 * lam / 3 * T**-2 * d1 / v**5
    return fd_derivative(u_star, h_t, 1, accuracy, axis=0) - rhs


def casimir_residual(field: ReciprocalField, nx_star=None, accuracy=4) -> CasimirResult:
    """Casimir residual after resampling ``u*`` onto a uniform ``x*`` lattice.

    The lattice spans the ``x*`` interval common to all time slices, with
    ``nx_star`` points (default: the source grid's ``nx``).
    """
    grid = field.grid
    if grid.nx < 33 or grid.nt < 33:
        raise DomainError("casimir_residual needs nx, nt >= 33")
    lo, hi = field.x_star_range()
    if not lo < hi:
        raise DomainError("time slices share no common x* interval")
    nxs = grid.nx if nx_star is None else nx_star
    xs = np.linspace(lo, hi, nxs)
    pre = np.array([invert_slice(field, n, xs) for n in range(grid.nt)])
    T = grid.t[:, None] + field.source.a
    us = 1.0 / eval_u(field.source, pre, np.broadcast_to(grid.t[:, None], pre.shape)).u
    res = casimir_operator(us, xs[1] - xs[0], grid.ht, field.source.lam, T, accuracy)
    return CasimirResult(res, float(np.max(np.abs(res))), xs, grid.t, us)


def casimir_bracket_pullback(u, u_xx, lam, T):
    """The Casimir boundary bracket written in ``(x, t)``: ``(1/u) (u_xx - 2u^3 - (lam/3) T^-2 u^-3)``."""
    return boundary_flux(u, u_xx, lam, T) / u


class ReciprocalFront(NamedTuple):
    s_star: np.ndarray
    s_star_0: float
    coefficient: float


def reciprocal_front(problem: StefanProblem, t_star, L_m_override=None) -> ReciprocalFront:
    """``S*(t*) = (gamma/3) [Psi(gamma) - L_m / gamma] ln|t* + a|`` (up to a constant).

    With the derived ``L_m = gamma Psi(gamma)`` the coefficient vanishes and the
    reciprocal front is stationary. An override gives the general logarithmic
    front, at the price of violating the flux condition on ``x = S(t)``.
    """
    t_star = np.asarray(t_star, dtype=float)
    if np.any(t_star < 0):
        raise DomainError("t* must be non-negative")
    g = problem.gamma
    L_m = problem.L_m if L_m_override is None else L_m_override
    psi_g = float(psi_chain(problem.sol.profile, g).psi)
    coef = g / 3.0 * (psi_g - L_m / g)
    return ReciprocalFront(coef * np.log(np.abs(t_star + problem.a)), coef * np.log(abs(problem.a)), coef)


def verify_reciprocal_problem(problem: StefanProblem, t_grid=None, origin=0.0,
                              tol: Tolerance = MAP_TOL) -> dict:
    """Boundary relations of the reciprocal moving-boundary problem.

    The reciprocal bracket equals ``(1/u)`` times the primal flux, so the
    image of the front flux condition is ``bracket = u* L_m S^i S'``;
    ``front_flux_as_printed`` compares against ``L_m S^i S'`` without the
    ``u*`` factor and is reported, not required to vanish.
    """
    sol = problem.sol
    t = default_time_grid(problem.a, n=16) if t_grid is None else np.asarray(t_grid, dtype=float)
    T = t + problem.a
    S, Sdot = front_position(problem, t)
    f = eval_u(sol, S, t)
    g = eval_u(sol, np.zeros_like(t), t)
    br_front = casimir_bracket_pullback(f.u, f.u_xx, sol.lam, T)
    br_origin = casimir_bracket_pullback(g.u, g.u_xx, sol.lam, T)
    u_star_front = 1.0 / f.u
    rhs = problem.L_m * S**problem.i * Sdot
    xs0 = np.array([origin + origin_drift(sol, ti, tol) for ti in t])
    xsS = np.array([x0 + quadrature(_u_of_x(sol, ti), 0.0, Si, tol) for x0, ti, Si in zip(xs0, t, S)])
    front = reciprocal_front(problem, t)
    strip = (xsS - front.s_star) - (xsS[0] - front.s_star[0])
    return {
        "front_flux_image": np.max(np.abs(br_front - u_star_front * rhs)),
        "front_flux_as_printed": np.max(np.abs(br_front - rhs)),
        "front_value": np.max(np.abs(1.0 / u_star_front - problem.P_m * S**problem.j)),
        "origin_flux": np.max(np.abs(br_origin - problem.H0 * T**problem.k)),
        "origin_constancy": np.max(np.abs(xs0 - xs0[0])),
        "front_strip_vs_log_law": np.max(np.abs(strip)),
    }


def involution_defect(sol: MkdvSolution, t, x1, x2, tol: Tolerance = MAP_TOL):
    """``int u* dx*`` between the images of ``x1`` and ``x2`` minus ``(x2 - x1)``.

    ``u*`` is evaluated as a function of ``x*`` through numerical inversion of
    the map, so this exercises the inverse 1-form ``dx = u* dx* + ...``.
    """
    u_t = _u_of_x(sol, t)
    xs1 = x_star(sol, x1, t, tol=tol)
    xs2 = x_star(sol, x2, t, tol=tol)
    x_hi = float(sol.x_pole(t)) * 0.999

    def preimage(target):
        return find_root(lambda x: quadrature(u_t, 0.0, x, tol) - target, (0.0, x_hi),
                         Tolerance(1e-15, 4e-16))

    def u_star(xs):
        xs = np.atleast_1d(xs)
        x = np.array([preimage(v) for v in xs])
        return 1.0 / u_t(x)

    return quadrature(u_star, xs1, xs2, tol) - (x2 - x1)
