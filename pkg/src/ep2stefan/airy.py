"""Airy functions of real argument and the seed ``Phi(z) = a Ai(-2^(-1/3) z) + b Bi(-2^(-1/3) z)``.

Evaluation strategy (all vectorised):

* ``|x| >= X_ASYMPTOTIC``: Poincare asymptotic expansions, exponential form
  for ``x > 0`` and the oscillatory trigonometric form for ``x < 0``.
* ``|x| <= X_MACLAURIN``: the Maclaurin series, so that the region used by
  finite-difference checks is covered by one smooth expansion.
* ``X_MACLAURIN < |x| < X_ASYMPTOTIC``: Taylor expansion of the Airy ODE about the nearest
  node of a table with spacing ``NODE_SPACING``. The node at 0 is the
  Maclaurin series (closed-form constants); the remaining nodes are filled
  once by Taylor stepping in the numerically stable direction: outward for
  Bi and for both functions on the oscillatory side, inward from the
  asymptotic region for the recessive Ai on ``x > 0``.

The asymptotic series at ``|x| = 5`` is only good to a few parts in 1e8, so
the hand-over sits at ``|x| = 8`` where its smallest term is below 1e-14.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_TOL, Tolerance, find_root

# Gamma(1/3), Gamma(2/3); their product is 2*pi/sqrt(3).
GAMMA_ONE_THIRD = 2.6789385347077476337
GAMMA_TWO_THIRDS = 1.3541179394264004169

AI0 = 3.0 ** (-2.0 / 3.0) / GAMMA_TWO_THIRDS
AIP0 = -(3.0 ** (-1.0 / 3.0)) / GAMMA_ONE_THIRD
BI0 = 3.0 ** (-1.0 / 6.0) / GAMMA_TWO_THIRDS
BIP0 = 3.0 ** (1.0 / 6.0) / GAMMA_ONE_THIRD

X_ASYMPTOTIC = 8.0
X_MACLAURIN = 1.5
NODE_SPACING = 0.25
BI_OVERFLOW_X = 25.0
ARG_SCALE = -(2.0 ** (-1.0 / 3.0))

_N_ASYM = 31
_N_TAYLOR = 28
_N_MACLAURIN = 48


def _asymptotic_coefficients(n):
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    v = np.empty(n)
    v[0] = 1.0
    for k in range(1, n):
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


_U, _V = _asymptotic_coefficients(_N_ASYM)


def _taylor(x0, y0, yp0, dx, n_terms=_N_TAYLOR):
    """Value and slope at ``x0 + dx`` of the solution of ``y'' = x y`` through ``(y0, yp0)``."""
    x0, y0, yp0, dx = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x0, y0, yp0, dx)))
    a_prev = np.zeros_like(y0)  # a_{n-1}
    a0, a1 = y0, yp0
    val = a0 + a1 * dx
    der = a1.copy()
    p = dx.copy()  # dx**(n-1) for the derivative term, n starting at 2
    coeffs = [a0, a1]
    for n in range(2, n_terms):
        # a_n = (x0 a_{n-2} + a_{n-3}) / (n (n-1))
        a_nm3 = coeffs[n - 3] if n >= 3 else a_prev
        an = (x0 * coeffs[n - 2] + a_nm3) / (n * (n - 1))
        coeffs.append(an)
        der = der + n * an * p
        p = p * dx
        val = val + an * p
    return val, der


def _asym_positive(x):
    """(Ai, Ai', Bi, Bi') for x >= X_ASYMPTOTIC by the exponential expansions."""
    x = np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * x ** 1.5
    inv = 1.0 / zeta
    pw = inv[..., None] ** np.arange(_N_ASYM)
    alt = (-1.0) ** np.arange(_N_ASYM)
    su_alt = pw @ (alt * _U)
    sv_alt = pw @ (alt * _V)
    su = pw @ _U
    sv = pw @ _V
    q = x ** 0.25
    sp = np.sqrt(np.pi)
    em = np.exp(-zeta)
    ai = em / (2 * sp * q) * su_alt
    aip = -q * em / (2 * sp) * sv_alt
    with np.errstate(over="ignore"):
        ep = np.exp(np.where(x > BI_OVERFLOW_X, 0.0, zeta))
    bi = ep / (sp * q) * su
    bip = q * ep / sp * sv
    big = x > BI_OVERFLOW_X
    bi = np.where(big, np.inf, bi)
    bip = np.where(big, np.inf, bip)
    return ai, aip, bi, bip


def _asym_negative(x):
    """(Ai, Ai', Bi, Bi') for x <= -X_ASYMPTOTIC by the oscillatory expansions."""
    r = -np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * r ** 1.5
    inv = 1.0 / zeta
    half = _N_ASYM // 2
    k = np.arange(half)
    sgn = (-1.0) ** k
    pe = inv[..., None] ** (2 * k)
    po = inv[..., None] ** (2 * k + 1)
    ue = pe @ (sgn * _U[2 * k])
    uo = po @ (sgn * _U[2 * k + 1])
    ve = pe @ (sgn * _V[2 * k])
    vo = po @ (sgn * _V[2 * k + 1])
    th = zeta - np.pi / 4
    c, s = np.cos(th), np.sin(th)
    q = r ** 0.25
    sp = np.sqrt(np.pi)
    ai = (c * ue + s * uo) / (sp * q)
    bi = (-s * ue + c * uo) / (sp * q)
    aip = q * (s * ve - c * vo) / sp
    bip = q * (c * ve + s * vo) / sp
    return ai, aip, bi, bip


@lru_cache(maxsize=1)
def _node_table():
    """Nodes and (Ai, Ai', Bi, Bi') on them, for |x| <= X_ASYMPTOTIC."""
    m = int(round(X_ASYMPTOTIC / NODE_SPACING))
    nodes = NODE_SPACING * np.arange(-m, m + 1)
    tab = np.empty((4, nodes.size))
    h = NODE_SPACING
    i0 = m
    tab[:, i0] = (AI0, AIP0, BI0, BIP0)
    # oscillatory side and Bi on x > 0: march outward from the origin
    for i in range(i0, 0, -1):
        x = nodes[i]
        tab[0, i - 1], tab[1, i - 1] = _taylor(x, tab[0, i], tab[1, i], -h)
        tab[2, i - 1], tab[3, i - 1] = _taylor(x, tab[2, i], tab[3, i], -h)
    for i in range(i0, nodes.size - 1):
        x = nodes[i]
        tab[2, i + 1], tab[3, i + 1] = _taylor(x, tab[2, i], tab[3, i], h)
    # recessive Ai on x > 0: march inward from the asymptotic region
    ai, aip, _, _ = _asym_positive(np.array([nodes[-1]]))
    tab[0, -1], tab[1, -1] = ai[0], aip[0]
    for i in range(nodes.size - 1, i0 + 1, -1):
        x = nodes[i]
        tab[0, i - 1], tab[1, i - 1] = _taylor(x, tab[0, i], tab[1, i], -h)
    return nodes, tab


def airy_all(x):
    """Return ``(Ai, Ai', Bi, Bi')`` at real ``x`` (scalar or array).

    ``Bi`` and ``Bi'`` are reported as ``+inf`` beyond ``x = 25``.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise DomainError("Airy functions need finite arguments")
    flat = np.atleast_1d(xa).ravel()
    out = np.empty((4, flat.size))
    pos = flat >= X_ASYMPTOTIC
    neg = flat <= -X_ASYMPTOTIC
    near = np.abs(flat) <= X_MACLAURIN
    mid = ~(pos | neg | near)
    if near.any():
        out[:, near] = maclaurin(flat[near], _N_MACLAURIN)
    if pos.any():
        out[:, pos] = _asym_positive(flat[pos])
    if neg.any():
        out[:, neg] = _asym_negative(flat[neg])
    if mid.any():
        nodes, tab = _node_table()
        xm = flat[mid]
        idx = np.rint((xm - nodes[0]) / NODE_SPACING).astype(int)
        x0 = nodes[idx]
        dx = xm - x0
        out[0, mid], out[1, mid] = _taylor(x0, tab[0, idx], tab[1, idx], dx)
        out[2, mid], out[3, mid] = _taylor(x0, tab[2, idx], tab[3, idx], dx)
    if xa.ndim == 0:
        return tuple(float(v[0]) for v in out)
    return tuple(v.reshape(xa.shape) for v in out)


def ai_with_derivative(x):
    """``(Ai(x), Ai'(x))``."""
    ai, aip, _, _ = airy_all(x)
    return ai, aip


def bi_with_derivative(x):
    """``(Bi(x), Bi'(x))``; infinite beyond ``x = 25``."""
    _, _, bi, bip = airy_all(x)
    return bi, bip


def maclaurin(x, n_terms=150):
    """Direct Maclaurin series for ``(Ai, Ai', Bi, Bi')``.

    Only accurate for moderate ``|x|`` (cancellation grows like
    ``exp(2/3 |x|^1.5)``); kept as an independent reference for the tests.
    """
    x = np.asarray(x, dtype=float)
    zero = np.zeros_like(x)
    ai, aip = _taylor(zero, AI0, AIP0, x, n_terms)
    bi, bip = _taylor(zero, BI0, BIP0, x, n_terms)
    return ai, aip, bi, bip


# ---------------------------------------------------------------------------
# the seed function

@dataclass(frozen=True)
class AirySeed:
    """Coefficients of ``Phi(z) = a Ai(-2^(-1/3) z) + b Bi(-2^(-1/3) z)``.

    ``Phi`` solves ``Phi'' + (z/2) Phi = 0``. ``validity``, when given, is an
    interval ``(0, z_end)`` on which ``Phi`` has no zero.
    """

    a: float = 1.0
    b: float = 0.0
    validity: Optional[tuple] = None

    arg_scale = ARG_SCALE

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DomainError("Airy seed needs (a, b) != (0, 0)")
        if self.validity is not None:
            lo, hi = self.validity
            z = np.linspace(lo, hi, max(3, int(np.ceil((hi - lo) / 0.01)) + 1))[1:-1]
            vals = phi(self, z).phi
            if np.any(vals == 0) or np.any(np.sign(vals[1:]) != np.sign(vals[:-1])):
                raise DomainError(f"Phi changes sign inside validity interval {self.validity}")

    @classmethod
    def up_to_first_zero(cls, a=1.0, b=0.0, z_max=10.0):
        """Seed with ``validity=(0, first zero)`` (or ``(0, z_max)`` if none)."""
        z0 = first_zero(cls(a, b), z_max)
        return cls(a, b, (0.0, z_max if z0 is None else z0))


class PhiValues(NamedTuple):
    phi: np.ndarray
    dphi: np.ndarray
    d2phi: np.ndarray


def phi(seed: AirySeed, z) -> PhiValues:
    """``(Phi, Phi', Phi'')`` at ``z``; ``Phi''`` is returned as ``-(z/2) Phi``."""
    z = np.asarray(z, dtype=float)
    ai, aip, bi, bip = airy_all(ARG_SCALE * z)
    if seed.b == 0:
        val = seed.a * np.asarray(ai)
        der = ARG_SCALE * seed.a * np.asarray(aip)
    else:
        val = seed.a * np.asarray(ai) + seed.b * np.asarray(bi)
        der = ARG_SCALE * (seed.a * np.asarray(aip) + seed.b * np.asarray(bip))
    d2 = -0.5 * z * val
    if z.ndim == 0:
        return PhiValues(float(val), float(der), float(d2))
    return PhiValues(val, der, d2)


def first_zero(seed: AirySeed, z_max: float, step: float = 0.01,
               tol: Tolerance = DEFAULT_TOL) -> Optional[float]:
    """Smallest ``z`` in ``(0, z_max]`` with ``Phi(z) = 0``, or ``None``."""
    if z_max <= 0:
        raise DomainError("z_max must be positive")
    n = max(2, int(np.ceil(z_max / step)) + 1)
    z = np.linspace(0.0, z_max, n)
    v = phi(seed, z).phi
    for i in range(1, n):
        if v[i] == 0.0:
            return float(z[i])
        if np.sign(v[i]) != np.sign(v[i - 1]) and v[i - 1] != 0.0:
            return find_root(lambda s: phi(seed, s).phi, (z[i - 1], z[i]), tol)
    return None
