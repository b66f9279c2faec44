"""Moving-boundary (Stefan-type) problem solved by the similarity solution.

On ``0 < x < S(t) = gamma (t + a)^(1/3)`` the field satisfies the extended
mKdV equation together with

* (A) ``u_xx - 2u^3 - (lam/3)(t+a)^-2 u^-3 = L_m S' S^i`` on ``x = S(t)``,
* (B) ``u = P_m S^j`` on ``x = S(t)``,
* (C) ``u_xx - 2u^3 - (lam/3)(t+a)^-2 u^-3 = H0 (t+a)^k`` on ``x = 0``,
* (D) ``S(0) = S0``.

The exact solution fixes ``i = j = k = -1``, ``L_m = P_m = gamma Psi(gamma)``,
``S0 = gamma a^(1/3)`` and ``H0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .mkdv import MkdvSolution, eval_u
from .painleve import PsiProfile, psi_chain

DEFAULT_T_MAX = 2.0
DEFAULT_NT = 64


class StefanConstants(NamedTuple):
    L_m: float
    P_m: float
    H0: float
    i: int
    j: int
    k: int


def derive_constants(gamma: float, profile: PsiProfile) -> StefanConstants:
    """Boundary constants implied by the profile.

    ``H0`` is evaluated from the profile at the origin rather than set to zero.
    """
    if not 0 < gamma < profile.xi_max:
        raise DomainError(f"gamma={gamma} must lie in (0, {profile.xi_max:.6g})")
    lam = profile.scales.lam
    p_g = psi_chain(profile, gamma)
    p_0 = psi_chain(profile, 0.0)
    L_m = gamma * float(p_g.psi)
    H0 = float(p_0.psi_2 - 2 * p_0.psi**3 - lam / 3 * p_0.psi**-3)
    return StefanConstants(L_m, L_m, H0, -1, -1, -1)


def boundary_flux(u, u_xx, lam, T):
    """``u_xx - 2u^3 - (lam/3) T^-2 u^-3``."""
    return u_xx - 2.0 * u**3 - lam / 3.0 * T**-2 * u**-3


@dataclass(frozen=True)
class StefanProblem:
    gamma: float
    sol: MkdvSolution
    L_m: float = field(default=None)
    P_m: float = field(default=None)
    H0: float = field(default=None)
    i: int = -1
    j: int = -1
    k: int = -1
    S0: float = field(default=None)

    def __post_init__(self):
        c = derive_constants(self.gamma, self.sol.profile)
        for name in ("L_m", "P_m", "H0"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, getattr(c, name))
        if self.S0 is None:
            object.__setattr__(self, "S0", self.gamma * self.a ** (1.0 / 3.0))

    @property
    def a(self):
        return self.sol.a

    @property
    def lam(self):
        return self.sol.lam


def front_position(problem: StefanProblem, t):
    """``(S, S')`` with ``S = gamma (t + a)^(1/3)``."""
    T = np.asarray(t, dtype=float) + problem.a
    if np.any(T - problem.a < 0):
        raise DomainError("t must be non-negative")
    S = problem.gamma * T ** (1.0 / 3.0)
    return S, problem.gamma / 3.0 * T ** (-2.0 / 3.0)


def default_time_grid(a, t_max=DEFAULT_T_MAX, n=DEFAULT_NT):
    """``n`` times in ``[0, t_max]`` spaced geometrically in ``t + a``."""
    return np.geomspace(a, t_max + a, n) - a


@dataclass
class BoundaryReport:
    t: np.ndarray
    front_flux: np.ndarray  # (A)
    front_value: np.ndarray  # (B)
    origin_flux: np.ndarray  # (C)
    initial_front: float  # (D)

    def max_abs(self) -> dict:
        return {
            "front_flux": float(np.max(np.abs(self.front_flux))),
            "front_value": float(np.max(np.abs(self.front_value))),
            "origin_flux": float(np.max(np.abs(self.origin_flux))),
            "initial_front": abs(self.initial_front),
        }


def verify_boundary_conditions(problem: StefanProblem, t_grid=None) -> BoundaryReport:
    """Residuals of (A)-(D) along the exact front."""
    t = default_time_grid(problem.a) if t_grid is None else np.asarray(t_grid, dtype=float)
    T = t + problem.a
    S, Sdot = front_position(problem, t)
    lam = problem.lam
    # evaluate on the front itself; x_pole > S whenever gamma < xi_max
    f = eval_u(problem.sol, S, t)
    g = eval_u(problem.sol, np.zeros_like(t), t)
    res_a = boundary_flux(f.u, f.u_xx, lam, T) - problem.L_m * Sdot * S**problem.i
    res_b = f.u - problem.P_m * S**problem.j
    res_c = boundary_flux(g.u, g.u_xx, lam, T) - problem.H0 * T**problem.k
    S_init, _ = front_position(problem, 0.0)
    return BoundaryReport(t, res_a, res_b, res_c, float(S_init - problem.S0))


def reduced_flux_at_front(problem: StefanProblem, t):
    """``(t + a) * flux`` at ``x = S(t)``; constant ``L_m / 3`` for the exact problem."""
    t = np.asarray(t, dtype=float)
    S, _ = front_position(problem, t)
    T = t + problem.a
    f = eval_u(problem.sol, S, t)
    return T * boundary_flux(f.u, f.u_xx, problem.lam, T)


def front_value_product(problem: StefanProblem, t):
    """``u(S(t), t) * S(t)``; constant ``gamma Psi(gamma)``."""
    t = np.asarray(t, dtype=float)
    S, _ = front_position(problem, t)
    return eval_u(problem.sol, S, t).u * S


def _log_slope(t, values, a):
    y = np.log(np.abs(values))
    x = np.log(np.asarray(t) + a)
    return float(np.polyfit(x, y, 1)[0])


def exponent_slopes(problem: StefanProblem, exponents=(-2, -1, 0, 1), t_grid=None) -> dict:
    """Log-log slopes of boundary data over the trial power of ``S`` or ``t + a``.

    For each trial exponent ``e`` the ratio of the boundary expression to its
    right-hand side (with ``e`` in place of ``i``, ``j`` or ``k``) is fitted
    against ``log(t + a)``. Only ``e = -1`` yields a time-independent ratio.
    Because ``H0 = 0`` the full condition (C) carries no exponent
    information, so (C) is probed term-wise through ``u_xx(0, t) (t+a)^-k``.
    """
    t = default_time_grid(problem.a) if t_grid is None else np.asarray(t_grid, dtype=float)
    T = t + problem.a
    S, Sdot = front_position(problem, t)
    f = eval_u(problem.sol, S, t)
    g = eval_u(problem.sol, np.zeros_like(t), t)
    flux_front = boundary_flux(f.u, f.u_xx, problem.lam, T)
    out = {"i": {}, "j": {}, "k": {}}
    for e in exponents:
        out["i"][e] = _log_slope(t, flux_front / (problem.L_m * Sdot * S**e), problem.a)
        out["j"][e] = _log_slope(t, f.u / (problem.P_m * S**e), problem.a)
        out["k"][e] = _log_slope(t, g.u_xx / T**e, problem.a)
    return out
