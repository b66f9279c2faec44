"""Similarity solution of the extended mKdV equation

    u_t - 6 u^2 u_x + u_xxx + lam (t + a)^mu u^-4 u_x = 0

built from ``u = (t + a)^(-1/3) Psi(x / (t + a)^(1/3))`` with ``mu = -2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .numerics import GridSpec, fd_derivative
from .painleve import PsiProfile, psi_chain

EXACT_MU = -2.0
EXACT_M = -1.0 / 3.0
EXACT_N = 1.0 / 3.0
VALIDITY_MARGIN = 0.9


@dataclass(frozen=True)
class MkdvParams:
    lam: float
    a: float = 1.0
    mu: float = EXACT_MU
    m: float = EXACT_M
    n: float = EXACT_N

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"time shift a must be positive (got {self.a})")

    @property
    def is_exact_class(self) -> bool:
        return (self.mu, self.m, self.n) == (EXACT_MU, EXACT_M, EXACT_N)


@dataclass(frozen=True)
class MkdvSolution:
    """``u(x, t)`` on ``0 <= x < x_pole(t)``, ``t >= 0``.

    With ``strict=False`` the profile's ``lam`` may differ from ``params.lam``;
    this is only useful for sensitivity experiments.
    """

    params: MkdvParams
    profile: PsiProfile
    strict: bool = True

    def __post_init__(self):
        if not self.params.is_exact_class:
            raise DomainError("the similarity solution needs mu=-2, m=-1/3, n=1/3")
        if self.strict and abs(self.params.lam - self.profile.scales.lam) > 1e-14:
            raise DomainError(
                f"profile lam={self.profile.scales.lam} differs from params lam={self.params.lam}"
            )

    @classmethod
    def from_profile(cls, profile: PsiProfile, a=1.0):
        return cls(MkdvParams(profile.scales.lam, a), profile)

    @property
    def lam(self):
        return self.params.lam

    @property
    def a(self):
        return self.params.a

    def x_pole(self, t):
        return self.profile.xi_max * (np.asarray(t, dtype=float) + self.a) ** (1.0 / 3.0)

    def standard_grid(self, nx=50, nt=20, t_max=2.0, margin=VALIDITY_MARGIN) -> GridSpec:
        """Grid on ``(0, margin * min_t x_pole(t)) x [0, t_max]``, excluding ``x = 0``."""
        x_hi = margin * float(self.x_pole(0.0))
        return GridSpec(x_hi / nx, x_hi, 0.0, t_max, nx, nt)


class UFields(NamedTuple):
    u: np.ndarray
    u_x: np.ndarray
    u_xx: np.ndarray
    u_xxx: np.ndarray
    u_t: np.ndarray


def _check(sol, x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be non-negative")
    xp = sol.x_pole(t)
    if np.any(x < 0) or np.any(x >= xp):
        raise DomainError(f"(x, t) outside validity region 0 <= x < x_pole(t) = {np.min(xp):.6g}...")
    return x, t


def eval_u(sol: MkdvSolution, x, t) -> UFields:
    """``u`` with its x-derivatives up to third order and ``u_t``."""
    x, t = _check(sol, x, t)
    T = t + sol.a
    c = T ** (1.0 / 3.0)
    xi = x / c
    p, p1, p2, p3 = psi_chain(sol.profile, xi)
    u = p / c
    u_t = -(p + xi * p1) / (3.0 * T * c)
    return UFields(u, p1 / c**2, p2 / T, p3 / (T * c), u_t)


def mkdv_operator(u, u_x, u_xxx, u_t, lam, T, mu=EXACT_MU):
    """``u_t - 6 u^2 u_x + u_xxx + lam T^mu u^-4 u_x`` for given field values."""
    return u_t - 6.0 * u * u * u_x + u_xxx + lam * T**mu * u_x / u**4


def mkdv_residual(sol: MkdvSolution, x, t):
    """Pointwise residual of the extended mKdV equation from the analytic derivatives."""
    f = eval_u(sol, x, t)
    T = np.asarray(t, dtype=float) + sol.a
    return mkdv_operator(f.u, f.u_x, f.u_xxx, f.u_t, sol.lam, T, sol.params.mu)


def sample(sol: MkdvSolution, grid: GridSpec):
    """``u`` on the ``[t][x]`` lattice of ``grid``."""
    X, T = grid.mesh()
    return eval_u(sol, X, T).u


def mkdv_residual_fd(source, grid: GridSpec, lam=None, a=None, mu=EXACT_MU, accuracy=4):
    """Residual lattice with every derivative taken by finite differences.

    ``source`` is either an :class:`MkdvSolution` (sampled on ``grid``) or a
    ready ``[t][x]`` lattice, in which case ``lam`` and ``a`` are required.

    Returns
    -------
    residual : ndarray, shape (nt, nx)
    max_abs : float
    """
    if isinstance(source, MkdvSolution):
        if np.any(grid.x_max >= source.x_pole(grid.t)):
            raise DomainError("grid reaches the pole of the profile")
        u = sample(source, grid)
        lam = source.lam if lam is None else lam
        a = source.a if a is None else a
    else:
        u = np.asarray(source, dtype=float)
        if u.shape != (grid.nt, grid.nx):
            raise DomainError(f"lattice shape {u.shape} does not match grid ({grid.nt}, {grid.nx})")
        if lam is None or a is None:
            raise DomainError("raw lattices need explicit lam and a")
    u_x = fd_derivative(u, grid.hx, 1, accuracy, axis=1)
    u_xxx = fd_derivative(u, grid.hx, 3, accuracy, axis=1)
    u_t = fd_derivative(u, grid.ht, 1, accuracy, axis=0)
    T = grid.t[:, None] + a
    res = mkdv_operator(u, u_x, u_xxx, u_t, lam, T, mu)
    return res, float(np.max(np.abs(res)))
