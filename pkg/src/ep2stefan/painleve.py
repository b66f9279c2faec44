"""Painleve II / XXXIV / Ermakov-Painleve II layer built on the Airy seed.

For ``alpha = 1/2`` the Painleve II equation ``w'' = 2 w^3 + z w + alpha`` has
the one-parameter family ``w = -Phi'/Phi`` with ``Phi'' + (z/2) Phi = 0``.
Then ``w' = z/2 + w^2`` and every higher derivative is a polynomial in
``(z, w)``, which is how all cascades below are evaluated.

``p(s) = w_s + w^2 + s/2`` (which simplifies to ``2 w^2 + s``) solves the
XXXIV-type equation

    p'' = p'^2 / (2 p) + 2 p^2 - s p - 1 / (2 p),

i.e. the general form ``rho'' = rho'^2/(2 rho) - 2 c3 rho^2 - 2 c2 z rho + 2 sigma / rho``
with ``c3 = -1``, ``c2 = +1/2``, ``sigma = -1/4``. The sign of the linear term
flips under ``z -> -z``, so for ``c2 = -1/2`` the solution is ``rho(z) = p(-z)``.
In general ``rho(z) = p(2 c2 z)``; :class:`PsiProfile` applies this
orientation, and the Ermakov-Painleve II profile is
``Psi(xi) = delta * sqrt(rho(xi / epsilon))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .airy import AirySeed, phi
from .errors import DomainError, PoleError
from .numerics import DEFAULT_TOL, Tolerance, find_root

POLE_THRESHOLD = 1e-12
DEFAULT_XI_HORIZON = 6.0


# ---------------------------------------------------------------------------
# scaling constants

@dataclass(frozen=True)
class ScalingConstants:
    """Constants linking ``Psi(xi)`` to ``w*(z)`` via ``Psi = delta w*``, ``xi = epsilon z``.

    ``ep2_param`` is the coefficient of ``w*^-3`` after scaling, namely
    ``lam * epsilon**2 / (3 delta**4)``. It equals ``sigma`` whenever the
    relations between the constants hold and is stored separately because
    the canonical scaling writes it with the same letter as ``delta``.
    """

    c2: float
    c3: float
    alpha: Optional[float]
    sigma: float
    epsilon: float
    delta: float
    lam: float
    ep2_param: float
    zeta: float = 0.0

    def __post_init__(self):
        if self.zeta != 0.0:
            raise DomainError("only the zeta = 0 reduction is supported")

    def relation_residuals(self) -> dict:
        """Residuals of ``eps^3 = -3 c2``, ``delta^2 = -c3/(2 eps^2)`` and ``sigma = (lam/3) eps^2 delta^-4``."""
        e, d = self.epsilon, self.delta
        return {
            "epsilon_cubed": e**3 + 3 * self.c2,
            "delta_squared": d**2 + self.c3 / (2 * e**2),
            "sigma": self.sigma - self.lam / 3 * e**2 / d**4,
        }

    def check(self, rtol=1e-12):
        for name, r in self.relation_residuals().items():
            if abs(r) > rtol * (1 + abs(self.lam) + abs(self.c2) + abs(self.c3)):
                raise DomainError(f"scaling relation '{name}' violated by {r:.3e}")
        return self


def derive_scalings(c2=-0.5, c3=-1.0, alpha=0.5, sign=1) -> ScalingConstants:
    """Scaling constants for given ``(c2, c3, alpha)``.

    ``epsilon`` is the real cube root of ``-3 c2``; ``delta`` takes the sign
    ``sign`` (positive by default); ``sigma = -(alpha + 1/2)^2 / 4`` and
    ``lam = 3 sigma delta^4 / epsilon^2``.
    """
    if c3 >= 0:
        raise DomainError(f"c3 must be negative (got {c3}); delta^2 would be non-positive")
    if c2 == 0:
        raise DomainError("c2 must be non-zero")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    eps = float(np.cbrt(-3.0 * c2))
    delta = sign * float(np.sqrt(-c3 / (2.0 * eps**2)))
    sigma = -((alpha + 0.5) ** 2) / 4.0
    lam = 3.0 * sigma * delta**4 / eps**2
    ep2 = lam * eps**2 / (3.0 * delta**4)
    return ScalingConstants(c2, c3, alpha, sigma, eps, delta, lam, ep2).check()


def canonical_scalings(lam, sign=1) -> ScalingConstants:
    """Scalings ``delta^2 epsilon^2 = 1``, ``epsilon^3 = 3`` for a given ``lam``.

    The scaled equation reads ``w*'' = 2 w*^3 + z w* + ep2_param / w*^3`` with
    ``ep2_param = 3 lam``.
    """
    eps = 3.0 ** (1.0 / 3.0)
    delta = sign / eps
    c2 = -(eps**3) / 3.0
    c3 = -2.0 * delta**2 * eps**2
    ep2 = lam * eps**2 / (3.0 * delta**4)
    return ScalingConstants(c2, c3, None, ep2, eps, delta, lam, ep2).check()


# ---------------------------------------------------------------------------
# Painleve II cascade in the Airy variable

def _w(seed, z):
    z = np.asarray(z, dtype=float)
    ph, dph, _ = phi(seed, z)
    ph = np.asarray(ph)
    small = np.abs(ph) < POLE_THRESHOLD
    if np.any(small):
        zz = np.atleast_1d(z)[np.atleast_1d(small)][0] if z.ndim else float(z)
        raise PoleError(float(zz), float(np.atleast_1d(ph)[np.atleast_1d(small)][0]))
    return -np.asarray(dph) / ph


def _w_cascade(seed, z):
    """w and its first four z-derivatives."""
    z = np.asarray(z, dtype=float)
    w = _w(seed, z)
    w1 = 0.5 * z + w * w
    w2 = 0.5 + 2.0 * w * w1
    w3 = 2.0 * w1 * w1 + 2.0 * w * w2
    w4 = 6.0 * w1 * w2 + 2.0 * w * w3
    return w, w1, w2, w3, w4


class WValues(NamedTuple):
    w: np.ndarray
    w_z: np.ndarray
    w_zz: np.ndarray


class RhoValues(NamedTuple):
    rho: np.ndarray
    rho_z: np.ndarray
    rho_zz: np.ndarray


class PsiValues(NamedTuple):
    psi: np.ndarray
    psi_1: np.ndarray
    psi_2: np.ndarray
    psi_3: np.ndarray


def w_chain(seed: AirySeed, z) -> WValues:
    """``w = -Phi'/Phi`` with ``w_z = z/2 + w^2`` and ``w_zz = 1/2 + 2 w w_z``."""
    w, w1, w2, _, _ = _w_cascade(seed, z)
    return WValues(w, w1, w2)


def _p_cascade(seed, s):
    """``p = w_s + w^2 + s/2`` and three derivatives."""
    w, w1, w2, w3, w4 = _w_cascade(seed, s)
    p = w1 + w * w + 0.5 * s
    p1 = w2 + 2.0 * w * w1 + 0.5
    p2 = w3 + 2.0 * w1 * w1 + 2.0 * w * w2
    p3 = w4 + 6.0 * w1 * w2 + 2.0 * w * w3
    return p, p1, p2, p3


def rho_chain(seed: AirySeed, z) -> RhoValues:
    """``rho = w_z + w^2 + z/2`` and its first two derivatives, in the Airy variable."""
    p, p1, p2, _ = _p_cascade(seed, z)
    return RhoValues(p, p1, p2)


def displayed_rho(seed: AirySeed, z):
    """``2 (Phi'/Phi)^2 + z/2``: the radicand obtained when ``z`` enters with weight 1/2.

    Substituting ``w = -Phi'/Phi`` into ``w_z + w^2 + z/2`` gives ``2 w^2 + z``
    instead; this variant is kept only to measure how badly it fails.
    """
    w = _w(seed, z)
    return 2.0 * w * w + 0.5 * np.asarray(z, dtype=float)


def pii_residual(w, w_zz, z, alpha=0.5):
    """``w_zz - 2 w^3 - z w - alpha``."""
    return w_zz - 2.0 * w**3 - z * w - alpha


def p34_residual(rho, rho_z, rho_zz, z, c2, c3, sigma):
    """``rho_zz - rho_z^2/(2 rho) + 2 c3 rho^2 + 2 c2 z rho - 2 sigma / rho``."""
    return rho_zz - rho_z**2 / (2.0 * rho) + 2.0 * c3 * rho**2 + 2.0 * c2 * z * rho - 2.0 * sigma / rho


# ---------------------------------------------------------------------------
# the Ermakov-Painleve II profile

@dataclass(frozen=True)
class PsiProfile:
    """``Psi(xi) = delta * sqrt(rho(xi / epsilon))`` on ``0 <= xi < xi_max``.

    ``xi_max`` is the first point where the seed has a pole or ``rho`` stops
    being positive, capped at ``xi_horizon``.
    """

    seed: AirySeed
    scales: ScalingConstants
    xi_horizon: float = DEFAULT_XI_HORIZON
    xi_max: float = field(init=False)
    limited_by: str = field(init=False)

    def __post_init__(self):
        sc = self.scales
        if sc.c3 != -1.0 or abs(sc.c2) != 0.5 or abs(sc.sigma + 0.25) > 1e-15:
            raise DomainError(
                "the Airy-seeded profile needs c3 = -1, |c2| = 1/2 and sigma = -1/4 (alpha = 1/2)"
            )
        if self.xi_horizon <= 0:
            raise DomainError("xi_horizon must be positive")
        xi_max, why = self._scan()
        object.__setattr__(self, "xi_max", xi_max)
        object.__setattr__(self, "limited_by", why)

    # s = orientation * z is the argument of the Airy-seeded cascade
    @property
    def orientation(self) -> float:
        return 2.0 * self.scales.c2

    @property
    def z_max(self) -> float:
        return self.xi_max / self.scales.epsilon

    @property
    def domain(self):
        return (0.0, self.xi_max)

    def _s_of_xi(self, xi):
        return self.orientation * np.asarray(xi, dtype=float) / self.scales.epsilon

    def _scan(self, step=0.01):
        n = int(np.ceil(self.xi_horizon / step)) + 1
        xi = np.linspace(0.0, self.xi_horizon, n)
        s = self._s_of_xi(xi)
        ph = np.asarray(phi(self.seed, s).phi)
        bad_phi = np.abs(ph) < POLE_THRESHOLD
        bad_phi[1:] |= np.sign(ph[1:]) != np.sign(ph[:-1])
        if bad_phi[0]:
            raise DomainError("Airy seed vanishes at the origin")
        first_pole = int(np.argmax(bad_phi)) if bad_phi.any() else n
        w = -np.asarray(phi(self.seed, s[:first_pole]).dphi) / ph[:first_pole]
        rho = 2.0 * w * w + s[:first_pole]
        if rho[0] <= 0:
            raise DomainError("rho(0) <= 0: the profile is not real at the origin")
        bad_rho = rho <= 0
        first_neg = int(np.argmax(bad_rho)) if bad_rho.any() else n
        if first_neg == n and first_pole == n:
            return float(self.xi_horizon), "horizon"
        tol = Tolerance(1e-14, 1e-14)
        if first_neg < first_pole:
            i = first_neg
            f = lambda x: float(self.rho(x / self.scales.epsilon).rho)
            return find_root(f, (xi[i - 1], xi[i]), tol), "rho_zero"
        i = first_pole
        f = lambda x: float(phi(self.seed, float(self._s_of_xi(x))).phi)
        return find_root(f, (xi[i - 1], xi[i]), tol), "pole"

    def rho(self, z) -> RhoValues:
        """Oriented XXXIV solution ``rho(z) = p(2 c2 z)`` and its z-derivatives."""
        o = self.orientation
        p, p1, p2, _ = _p_cascade(self.seed, o * np.asarray(z, dtype=float))
        return RhoValues(p, o * p1, p2)

    def _rho3(self, z):
        o = self.orientation
        p, p1, p2, p3 = _p_cascade(self.seed, o * np.asarray(z, dtype=float))
        return p, o * p1, p2, o * p3

    def check_xi(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(xi < 0) or np.any(xi >= self.xi_max):
            raise DomainError(f"xi outside profile domain [0, {self.xi_max:.6g})")
        return xi


def psi_chain(profile: PsiProfile, xi) -> PsiValues:
    """``(Psi, Psi', Psi'', Psi''')`` at ``xi`` by the chain rule through ``rho``."""
    xi = profile.check_xi(xi)
    eps, delta = profile.scales.epsilon, profile.scales.delta
    r, r1, r2, r3 = profile._rho3(xi / eps)
    q = np.sqrt(r)
    q1 = r1 / (2 * q)
    q2 = r2 / (2 * q) - r1 * r1 / (4 * q**3)
    q3 = r3 / (2 * q) - 3 * r1 * r2 / (4 * q**3) + 3 * r1**3 / (8 * q**5)
    return PsiValues(delta * q, delta * q1 / eps, delta * q2 / eps**2, delta * q3 / eps**3)


def ep2_residual(profile: PsiProfile, xi_grid, lam=None):
    """``Psi'' - 2 Psi^3 - xi Psi / 3 - (lam/3) Psi^-3 - zeta`` on ``xi_grid``."""
    xi = np.asarray(xi_grid, dtype=float)
    lam = profile.scales.lam if lam is None else lam
    p, _, p2, _ = psi_chain(profile, xi)
    return p2 - 2 * p**3 - xi * p / 3.0 - lam / 3.0 * p**-3 - profile.scales.zeta


def scaled_residual(profile: PsiProfile, z):
    """Residual of ``w*'' + c3 w*^3 + c2 z w* - sigma / w*^3`` with ``w* = Psi / delta``."""
    z = np.asarray(z, dtype=float)
    sc = profile.scales
    p, _, p2, _ = psi_chain(profile, sc.epsilon * z)
    ws = p / sc.delta
    ws2 = p2 * sc.epsilon**2 / sc.delta
    return ws2 + sc.c3 * ws**3 + sc.c2 * z * ws - sc.sigma / ws**3


def canonical_residual(profile: PsiProfile, z_c, ep2_param=None):
    """Residual of ``w'' - 2 w^3 - z w - ep2 / w^3`` for ``w(z_c) = Psi(eps_c z_c) / delta_c``.

    Uses the canonical scalings for the profile's ``lam``; ``ep2_param``
    defaults to the value they imply (``3 lam``).
    """
    cs = canonical_scalings(profile.scales.lam, sign=int(np.sign(profile.scales.delta)))
    ep2 = cs.ep2_param if ep2_param is None else ep2_param
    z_c = np.asarray(z_c, dtype=float)
    p, _, p2, _ = psi_chain(profile, cs.epsilon * z_c)
    w = p / cs.delta
    w2 = p2 * cs.epsilon**2 / cs.delta
    return w2 - 2 * w**3 - z_c * w - ep2 / w**3


def default_profile(a=1.0, b=0.0, sign=1, xi_horizon=DEFAULT_XI_HORIZON) -> PsiProfile:
    """Profile for seed ``(a, b)`` under ``c2 = -1/2``, ``c3 = -1``, ``alpha = 1/2``."""
    return PsiProfile(AirySeed(a, b), derive_scalings(-0.5, -1.0, 0.5, sign=sign), xi_horizon)
