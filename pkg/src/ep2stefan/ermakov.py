"""Ermakov modulation of the extended mKdV equation.

The transformation

    dt* = rho^-2 dt,   u* = rho^-1 u,   rho* = rho^-1   (x unchanged)

is an involution. Applied to a solution of the extended mKdV equation it gives
a field obeying

    d/dt*(u*/rho*) - 6 rho*^-5 u*^2 u*_x + rho*^-3 u*_xxx
        + lam (t + a)^mu rho* u*^-4 u*_x = 0.

``rho`` is built from two solutions of ``Omega'' + w(t) Omega = 0`` through
the nonlinear superposition

    rho^2 = c1 Omega1^2 + 2 c2 Omega1 Omega2 + c3 Omega2^2,   c1 c3 - c2^2 = k / W^2,

which solves the Ermakov equation ``rho'' + w rho = k / rho^3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .mkdv import MkdvSolution, eval_u
from .numerics import Tolerance, fd_derivative, integrate_ode

WRONSKIAN_RTOL = 1e-10
CONSTRAINT_TOL = 1e-12
MAP_TOL = Tolerance(1e-13, 1e-13)
INTERPRETATIONS = ("t-of-tstar", "tstar-literal", "rho4-variant")


# ---------------------------------------------------------------------------
# superposition

@dataclass(frozen=True)
class ErmakovBasis:
    """Two solutions of ``Omega'' + w Omega = 0`` and the superposition constants.

    ``omega1`` and ``omega2`` map ``t`` to ``(Omega, Omega')``. ``k`` defaults
    to ``W^2 (c1 c3 - c2m^2)``; a supplied ``k`` must agree with it.
    """

    omega1: Callable
    omega2: Callable
    w: Callable
    c1: float
    c2m: float
    c3: float
    k: Optional[float] = None
    t_check: tuple = (0.0, 2.0)
    W: float = field(init=False)

    def __post_init__(self):
        ts = np.linspace(*self.t_check, 41)
        o1, d1 = self.omega1(ts)
        o2, d2 = self.omega2(ts)
        wr = np.asarray(o1 * d2 - d1 * o2, dtype=float)
        W = float(wr[0])
        if W == 0:
            raise DomainError("basis solutions are linearly dependent (W = 0)")
        if np.ptp(wr) > WRONSKIAN_RTOL * abs(W):
            raise DomainError(f"Wronskian not constant: spread {np.ptp(wr):.3e}")
        object.__setattr__(self, "W", W)
        k_implied = W * W * (self.c1 * self.c3 - self.c2m**2)
        if self.k is None:
            object.__setattr__(self, "k", k_implied)
        elif abs(self.constraint_residual()) > CONSTRAINT_TOL * max(1.0, abs(self.k)):
            raise DomainError(
                f"c1 c3 - c2^2 = {self.c1 * self.c3 - self.c2m**2} differs from k/W^2 = {self.k / W**2}"
            )

    def constraint_residual(self) -> float:
        """``c1 c3 - c2m^2 - k / W^2``."""
        return self.c1 * self.c3 - self.c2m**2 - self.k / self.W**2

    @classmethod
    def free(cls, c=(1.0, 0.0, 1.0), k=None, t_check=(0.0, 2.0)):
        """``w = 0``: ``Omega1 = 1``, ``Omega2 = t``, ``W = 1``."""
        one = lambda t: (np.ones_like(np.asarray(t, dtype=float)), np.zeros_like(np.asarray(t, dtype=float)))
        lin = lambda t: (np.asarray(t, dtype=float), np.ones_like(np.asarray(t, dtype=float)))
        zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))
        return cls(one, lin, zero, *c, k=k, t_check=t_check)

    @classmethod
    def harmonic(cls, omega=1.0, c=(1.0, 0.0, 1.0), k=None, t_check=(0.0, 10.0)):
        """``w = omega^2``: ``Omega1 = cos(omega t)``, ``Omega2 = sin(omega t)``, ``W = omega``."""
        if omega <= 0:
            raise DomainError("omega must be positive")
        cs = lambda t: (np.cos(omega * np.asarray(t, dtype=float)),
                        -omega * np.sin(omega * np.asarray(t, dtype=float)))
        sn = lambda t: (np.sin(omega * np.asarray(t, dtype=float)),
                        omega * np.cos(omega * np.asarray(t, dtype=float)))
        w = lambda t: np.full_like(np.asarray(t, dtype=float), omega * omega)
        return cls(cs, sn, w, *c, k=k, t_check=t_check)

    @classmethod
    def from_ode(cls, w, t_span, c=(1.0, 0.0, 1.0), k=None, tol: Tolerance = Tolerance(1e-13, 1e-13)):
        """Basis from numerical solutions with data ``(1, 0)`` and ``(0, 1)`` at ``t_span[0]``."""
        rhs = lambda t, y: [y[1], -w(t) * y[0]]
        tr1 = integrate_ode(rhs, [1.0, 0.0], t_span, tol)
        tr2 = integrate_ode(rhs, [0.0, 1.0], t_span, tol)

        def wrap(tr):
            def f(t):
                y = tr(t)
                return y[0], y[1]
            return f

        return cls(wrap(tr1), wrap(tr2), w, *c, k=k, t_check=tuple(t_span))


class RhoValues(NamedTuple):
    rho: np.ndarray
    rho_t: np.ndarray
    rho_tt: np.ndarray


def superpose(basis: ErmakovBasis, t) -> RhoValues:
    """``rho`` and its first two derivatives from the quadratic form.

    ``Omega''`` is replaced by ``-w Omega`` so no numerical differentiation
    is involved.
    """
    t = np.asarray(t, dtype=float)
    o1, d1 = basis.omega1(t)
    o2, d2 = basis.omega2(t)
    c1, c2, c3 = basis.c1, basis.c2m, basis.c3
    w = basis.w(t)
    Q = c1 * o1 * o1 + 2 * c2 * o1 * o2 + c3 * o2 * o2
    if np.any(Q <= 0):
        raise DomainError("superposition quadratic form is not positive")
    Q1 = 2 * (c1 * o1 * d1 + c2 * (d1 * o2 + o1 * d2) + c3 * o2 * d2)
    Q2 = 2 * (c1 * (d1 * d1 - w * o1 * o1) + 2 * c2 * (d1 * d2 - w * o1 * o2)
              + c3 * (d2 * d2 - w * o2 * o2))
    rho = np.sqrt(Q)
    rho_t = Q1 / (2 * rho)
    rho_tt = (Q2 - 2 * rho_t * rho_t) / (2 * rho)
    return RhoValues(rho, rho_t, rho_tt)


def ermakov_residual(basis: ErmakovBasis, t_grid, w=None):
    """``rho'' + w rho - k / rho^3`` on ``t_grid``; ``w`` defaults to the basis potential."""
    t = np.asarray(t_grid, dtype=float)
    r, _, r2 = superpose(basis, t)
    w = basis.w if w is None else w
    return r2 + w(t) * r - basis.k / r**3


# ---------------------------------------------------------------------------
# the time map

@dataclass(frozen=True)
class Modulation:
    """``rho(t)`` with the map ``t* = int_{t0}^t rho^-2`` and its dense inverse.

    Both directions come from the ODE integrator: ``dt*/dt = rho^-2`` forward
    and ``dt/dt* = rho^2`` for the inverse, so neither is an interpolant of
    the other.
    """

    rho: Callable
    t_span: tuple = (0.0, 2.0)
    tol: Tolerance = MAP_TOL
    _forward: object = field(init=False, repr=False, compare=False)
    _inverse: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t0, t1 = map(float, self.t_span)
        if not t1 > t0:
            raise DomainError("t_span must be increasing")
        r = np.asarray(self.rho(np.linspace(t0, t1, 201)), dtype=float)
        if np.any(~np.isfinite(r)) or np.any(r <= 0):
            raise DomainError("rho must be positive and finite on t_span")
        fwd = integrate_ode(lambda t, y: [float(self.rho(t)) ** -2], [0.0], (t0, t1), self.tol)
        ts1 = float(fwd(t1)[0])
        # the state may overshoot t1 by the local error; keep rho inside its domain
        inv = integrate_ode(lambda s, y: [float(self.rho(min(max(y[0], t0), t1))) ** 2], [t0],
                            (0.0, ts1), self.tol)
        object.__setattr__(self, "_forward", fwd)
        object.__setattr__(self, "_inverse", inv)

    @classmethod
    def from_basis(cls, basis: ErmakovBasis, t_span=(0.0, 2.0), tol: Tolerance = MAP_TOL):
        return cls(lambda t: superpose(basis, t).rho, t_span, tol)

    @property
    def t_star_span(self):
        return (0.0, float(self._forward(self.t_span[1])[0]))

    def t_star(self, t):
        t = np.asarray(t, dtype=float)
        return self._forward(t)[0]

    def t_of(self, t_star):
        s = np.asarray(t_star, dtype=float)
        return np.clip(self._inverse(s)[0], *map(float, self.t_span))

    def rho_star(self, t_star):
        """``rho* = 1 / rho`` as a function of ``t*``."""
        return 1.0 / np.asarray(self.rho(self.t_of(t_star)), dtype=float)

    def inverse(self) -> "Modulation":
        """The modulation by ``rho*`` on the ``t*`` axis; applying both is the identity."""
        return Modulation(self.rho_star, self.t_star_span, self.tol)


# ---------------------------------------------------------------------------
# transformed fields

class FieldValues(NamedTuple):
    u: np.ndarray
    u_x: np.ndarray
    u_xxx: np.ndarray


def solution_fields(sol: MkdvSolution):
    """Adapter turning a solution into a ``(x, t) -> FieldValues`` callable."""
    def f(x, t):
        v = eval_u(sol, x, t)
        return FieldValues(v.u, v.u_x, v.u_xxx)
    return f


@dataclass(frozen=True)
class ModulatedField:
    """``u*(x, t*) = rho(t)^power u(x, t)`` with ``t = t(t*)``.

    ``power = -1`` is the transformation itself; ``power = 0`` keeps the
    unscaled field on the new clock and serves as a negative control.
    """

    source: Callable
    modulation: Modulation
    power: float = -1.0

    def __call__(self, x, t_star) -> FieldValues:
        lo, hi = self.modulation.t_star_span
        ts = np.asarray(t_star, dtype=float)
        if np.any(ts < lo - 1e-12) or np.any(ts > hi + 1e-12):
            raise DomainError(f"t* outside the map range [{lo}, {hi:.6g}]")
        t = self.modulation.t_of(ts)
        s = np.asarray(self.modulation.rho(t), dtype=float) ** self.power
        f = self.source(x, t)
        return FieldValues(s * f.u, s * f.u_x, s * f.u_xxx)


def apply_T(source, modulation: Modulation) -> ModulatedField:
    """Apply ``dt* = rho^-2 dt``, ``u* = u / rho`` to a solution or field callable."""
    if isinstance(source, MkdvSolution):
        source = solution_fields(source)
    return ModulatedField(source, modulation)


def involution_defect(sol: MkdvSolution, modulation: Modulation, x, t):
    """Errors in ``t`` and ``u`` after applying the transformation twice.

    The second application uses ``rho* = 1/rho`` on the ``t*`` axis.
    Returns ``(max |t** - t|, max |u** - u|)``.
    """
    t = np.asarray(t, dtype=float)
    back = modulation.inverse()
    twice = apply_T(apply_T(sol, modulation), back)
    t_ss = back.t_star(modulation.t_star(t))
    X, Tss = np.meshgrid(np.asarray(x, dtype=float), t_ss)
    _, Tt = np.meshgrid(np.asarray(x, dtype=float), t)
    u2 = twice(X, Tss).u
    u = eval_u(sol, X, Tt).u
    return float(np.max(np.abs(t_ss - t))), float(np.max(np.abs(u2 - u)))


# ---------------------------------------------------------------------------
# the modulated equation

def modulated_residual(field: ModulatedField, lam, a, interpretation="t-of-tstar", x=None,
                       nt=65, mu=-2.0, accuracy=4):
    """Residual of the modulated equation on ``x`` times a uniform ``t*`` lattice.

    ``interpretation`` selects how the printed equation is read:

    * ``t-of-tstar``: modulation factor ``(t(t*) + a)^mu``, nonlinear power ``rho*^-5``;
    * ``tstar-literal``: factor ``(t* + a)^mu``, power ``rho*^-5``;
    * ``rho4-variant``: factor ``(t(t*) + a)^mu``, power ``rho*^-4``.

    x-derivatives are analytic; ``d/dt*(u*/rho*)`` is a finite difference on
    the ``t*`` lattice.

    Returns
    -------
    residual : ndarray, shape (nt, len(x))
    t_star : ndarray
    """
    if interpretation not in INTERPRETATIONS:
        raise DomainError(f"interpretation must be one of {INTERPRETATIONS}")
    mod = field.modulation
    lo, hi = mod.t_star_span
    ts = np.linspace(lo, hi, nt)
    x = np.asarray(x, dtype=float)
    X, TS = np.meshgrid(x, ts)
    f = field(X, TS)
    t = mod.t_of(ts)
    rs = 1.0 / np.asarray(mod.rho(t), dtype=float)[:, None]
    d_t = fd_derivative(f.u / rs, ts[1] - ts[0], 1, accuracy, axis=0)
    T = (ts if interpretation == "tstar-literal" else t)[:, None] + a
    p = 4 if interpretation == "rho4-variant" else 5
    res = (d_t - 6.0 * rs**-p * f.u**2 * f.u_x + rs**-3 * f.u_xxx
           + lam * T**mu * rs * f.u_x / f.u**4)
    return res, ts


def discrimination_experiment(sol: MkdvSolution, modulation: Modulation, x=None,
                              nts=(65, 129), fd_limit=1e-6):
    """Run every interpretation at two resolutions and flag the consistent ones.

    A variant counts as consistent when its residual at the finer resolution
    is below ``fd_limit`` and falls under refinement at an observed order of
    at least 3. The report lists max residuals, observed orders and the
    consistent variants; it does not presume which one wins.
    """
    if x is None:
        x = sol.standard_grid().x
    field = apply_T(sol, modulation)
    out = {}
    for interp in INTERPRETATIONS:
        m = [float(np.max(np.abs(modulated_residual(field, sol.lam, sol.a, interp, x, nt)[0])))
             for nt in nts]
        order = float(np.log2(m[0] / m[1]) / np.log2((nts[1] - 1) / (nts[0] - 1))) if m[1] > 0 else float("inf")
        out[interp] = {
            "max_abs": dict(zip(map(str, nts), m)),
            "order": order,
            "consistent": bool(m[1] <= fd_limit and order >= 3.0),
        }
    consistent = [k for k, v in out.items() if v["consistent"]]
    return {"variants": out, "consistent": consistent, "fd_limit": fd_limit}
