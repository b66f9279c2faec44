"""Numerical kernel: stencils, ODE integration, quadrature and root finding.

Nothing in this module knows about Airy functions or the mKdV equation; the
rest of the package builds on these four primitives.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import AccuracyError, BracketError, DomainError, IntegrationError, LengthError

__all__ = [
    "GridSpec",
    "Tolerance",
    "DEFAULT_TOL",
    "fd_weights",
    "fd_derivative",
    "Trajectory",
    "integrate_ode",
    "quadrature",
    "cumulative_quadrature",
    "find_root",
    "find_roots",
]


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise DomainError("abs_tol and rel_tol cannot both be zero")

    def bound(self, scale: float) -> float:
        """Allowed absolute error for a quantity of magnitude ``scale``."""
        return max(self.abs_tol, self.rel_tol * abs(scale))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid over ``[x_min, x_max] x [t_min, t_max]``.

    Lattices sampled on a grid are stored row-major as ``[t][x]``.
    """

    x_min: float
    x_max: float
    t_min: float
    t_max: float
    nx: int
    nt: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.t_min < self.t_max):
            raise DomainError(f"degenerate grid bounds in {self!r}")
        if int(self.nx) != self.nx or int(self.nt) != self.nt:
            raise DomainError("nx and nt must be integers")
        if self.nx < 5 or self.nt < 5:
            raise DomainError(f"nx and nt must be >= 5 (got nx={self.nx}, nt={self.nt})")

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def ht(self) -> float:
        return (self.t_max - self.t_min) / (self.nt - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    def mesh(self):
        """Return ``(X, T)`` arrays of shape ``(nt, nx)``."""
        return np.meshgrid(self.x, self.t)

    @classmethod
    def with_spacing(cls, x_min, x_max, t_min, t_max, hx, ht):
        """Grid whose spacings are as close as possible to (and not above) ``hx``, ``ht``."""
        nx = max(5, int(np.ceil((x_max - x_min) / hx - 1e-9)) + 1)
        nt = max(5, int(np.ceil((t_max - t_min) / ht - 1e-9)) + 1)
        return cls(x_min, x_max, t_min, t_max, nx, nt)


# ---------------------------------------------------------------------------
# finite differences

@lru_cache(maxsize=None)
def fd_weights(offsets: tuple, order: int) -> tuple:
    """Finite-difference weights at 0 for integer ``offsets`` (Fornberg's recursion).

    Computed in exact rational arithmetic and rounded once to float.
    """
    nodes = [Fraction(o) for o in offsets]
    n = len(nodes)
    c = [[Fraction(0)] * (order + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = nodes[0]
    for i in range(1, n):
        mn = min(i, order)
        c2 = Fraction(1)
        c5 = c4
        c4 = nodes[i]
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(float(c[j][order]) for j in range(n))


def _central_size(order, accuracy):
    return 2 * ((order + 1) // 2) - 1 + accuracy


def fd_derivative(samples, h, order=1, accuracy=2, axis=-1):
    """Derivative of equally spaced samples along ``axis``.

    Central stencils are used wherever they fit; the first and last few points
    use one-sided stencils with ``order + accuracy`` nodes so the result has the
    same shape as the input and error ``O(h**accuracy)`` everywhere.

    Parameters
    ----------
    samples : array_like
        Function values on a uniform grid.
    h : float
        Grid spacing.
    order : {1, 2, 3}
        Derivative order.
    accuracy : {2, 4}
        Formal accuracy of every stencil.
    """
    if order not in (1, 2, 3):
        raise DomainError(f"derivative order must be 1, 2 or 3 (got {order})")
    if accuracy not in (2, 4):
        raise DomainError(f"accuracy must be 2 or 4 (got {accuracy})")
    s = np.moveaxis(np.asarray(samples, dtype=float), axis, -1)
    n = s.shape[-1]
    if n < order + accuracy + 1:
        raise LengthError(
            f"need at least {order + accuracy + 1} samples for order={order}, "
            f"accuracy={accuracy}; got {n}"
        )
    n_c = _central_size(order, accuracy)
    half = (n_c - 1) // 2
    scale = 1.0 / h**order
    out = np.empty_like(s)

    w = fd_weights(tuple(range(-half, half + 1)), order)
    m = n - 2 * half
    acc = np.zeros(s.shape[:-1] + (m,))
    for k, wk in enumerate(w):
        if wk != 0.0:
            acc += wk * s[..., k:k + m]
    out[..., half:n - half] = acc * scale

    n_b = order + accuracy
    for i in range(half):
        wl = fd_weights(tuple(k - i for k in range(n_b)), order)
        out[..., i] = np.tensordot(s[..., :n_b], wl, axes=([-1], [0])) * scale
        j = n - 1 - i
        wr = fd_weights(tuple(k - j for k in range(n - n_b, n)), order)
        out[..., j] = np.tensordot(s[..., n - n_b:], wr, axes=([-1], [0])) * scale
    return np.moveaxis(out, -1, axis)


# ---------------------------------------------------------------------------
# ODE integration

@dataclass(frozen=True)
class Trajectory:
    """Dense solution of an initial-value problem on ``[t0, t1]``.

    Calling the trajectory evaluates the integrator's own continuous
    extension; no re-stepping happens after construction.
    """

    t0: float
    t1: float
    _sol: object = field(repr=False, compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = min(self.t0, self.t1), max(self.t0, self.t1)
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(t < lo - slack) or np.any(t > hi + slack):
            raise DomainError(f"query outside trajectory span [{lo}, {hi}]")
        y = self._sol(np.clip(t, lo, hi).ravel())
        return y.reshape(y.shape[:1] + t.shape)

    @property
    def span(self):
        return (self.t0, self.t1)


def integrate_ode(rhs, y0, span, tol: Tolerance = DEFAULT_TOL, max_step=np.inf) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` over ``span`` with an adaptive embedded RK pair.

    Uses the Dormand-Prince 8(5,3) pair with its 7th-order continuous
    extension. Either direction of integration is allowed.

    Raises
    ------
    IntegrationError
        If the step size collapses before the end of the span.
    """
    t0, t1 = float(span[0]), float(span[1])
    if t0 == t1:
        raise DomainError("integration span has zero length")
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    res = solve_ivp(
        rhs, (t0, t1), y0, method="DOP853", dense_output=True,
        rtol=max(tol.rel_tol, 2.3e-14), atol=tol.abs_tol, max_step=max_step,
    )
    if res.status != 0:
        raise IntegrationError(res.message, float(res.t[-1]))
    return Trajectory(t0, t1, res.sol)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
# 15 abscissae on [-1, 1]: -x_0..-x_6, 0, x_6..x_0
KRONROD_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[13, 11, 9]] = _WG[:3]


def _eval_panels(f, lo, hi):
    """Kronrod estimate and |K - G| for each panel ``[lo_i, hi_i]`` in one call."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    c = 0.5 * (lo + hi)
    r = 0.5 * (hi - lo)
    x = c[:, None] + r[:, None] * KRONROD_NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float)
    if fx.shape != (x.size,):
        fx = np.array([f(xi) for xi in x.ravel()], dtype=float)
    fx = fx.reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand is not finite on the integration interval")
    k = r * (fx @ KRONROD_WEIGHTS)
    g = r * (fx @ _GW)
    return k, np.abs(k - g)


def _adaptive(f, a, b, tol, max_subdivisions):
    k, e = _eval_panels(f, [a], [b])
    heap = [(-e[0], a, b, k[0])]
    total, err = k[0], e[0]
    n = 1
    while err > tol.bound(total):
        if n >= max_subdivisions:
            raise AccuracyError(float(total), float(err))
        neg_e, lo, hi, kv = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise AccuracyError(float(total), float(err))
        k2, e2 = _eval_panels(f, [lo, mid], [mid, hi])
        total += k2.sum() - kv
        err += e2.sum() + neg_e
        heapq.heappush(heap, (-e2[0], lo, mid, k2[0]))
        heapq.heappush(heap, (-e2[1], mid, hi, k2[1]))
        n += 1
    # re-sum to shed accumulated cancellation from the running updates
    total = sum(item[3] for item in heap)
    err = sum(-item[0] for item in heap)
    return float(total), float(err)


def quadrature(f, a, b, tol: Tolerance = DEFAULT_TOL, max_subdivisions=500,
               full_output=False):
    """Adaptive 7/15-point Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``f`` should accept a 1-D array of abscissae; scalar-only callables are
    evaluated point by point. ``quadrature(f, b, a) == -quadrature(f, a, b)``.

    Raises
    ------
    AccuracyError
        When ``max_subdivisions`` panels do not meet ``tol``.
    """
    a, b = float(a), float(b)
    if a == b:
        return (0.0, 0.0) if full_output else 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    val, err = _adaptive(f, a, b, tol, max_subdivisions)
    return (sign * val, err) if full_output else sign * val


def cumulative_quadrature(f, nodes, tol: Tolerance = DEFAULT_TOL, max_subdivisions=500):
    """Integrals of ``f`` from ``nodes[0]`` to every node (first entry 0).

    All node-to-node panels are evaluated in one vectorised pass; only panels
    whose Kronrod-Gauss difference misses ``tol`` go through the adaptive path.
    """
    nodes = np.asarray(nodes, dtype=float)
    k, e = _eval_panels(f, nodes[:-1], nodes[1:])
    for m in np.flatnonzero(e > np.maximum(tol.abs_tol, tol.rel_tol * np.abs(k))):
        k[m] = quadrature(f, nodes[m], nodes[m + 1], tol, max_subdivisions)
    return np.concatenate([[0.0], np.cumsum(k)])


# ---------------------------------------------------------------------------
# root finding

def find_root(f, bracket, tol: Tolerance = DEFAULT_TOL) -> float:
    """Root of a scalar function inside a sign-changing bracket (Brent's method)."""
    lo, hi = float(bracket[0]), float(bracket[1])
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")
    xtol = max(tol.abs_tol, 1e-300)
    rtol = max(tol.rel_tol, 4 * np.finfo(float).eps)
    root, info = brentq(lambda x: float(f(x)), lo, hi, xtol=xtol, rtol=rtol,
                        maxiter=500, full_output=True, disp=False)
    width = 2 * (xtol + rtol * abs(root))
    assert info.converged and (abs(float(f(root))) <= tol.bound(0.0) or width <= tol.bound(root) * 4), \
        "find_root postcondition violated"
    return float(root)


def find_roots(f, fprime, lo, hi, tol: Tolerance = Tolerance(1e-15, 4e-16), max_iter=100,
               f_tol=0.0):
    """Many bracketed roots at once by safeguarded Newton iteration.

    ``f`` and ``fprime`` act elementwise on arrays; root ``m`` lies in
    ``[lo[m], hi[m]]`` where ``f`` changes sign. Newton steps that leave the
    current bracket fall back to bisection. An endpoint with ``|f| <= f_tol``
    is accepted as the root, which absorbs rounding at shared bracket ends.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    at_lo = np.abs(flo) <= f_tol
    at_hi = np.abs(fhi) <= f_tol
    if np.any((np.sign(flo) * np.sign(fhi) > 0) & ~at_lo & ~at_hi):
        raise BracketError("some brackets do not enclose a sign change")
    rising = fhi > flo
    x = np.where(at_lo, lo, np.where(at_hi, hi, 0.5 * (lo + hi)))
    done = at_lo | at_hi
    for _ in range(max_iter):
        fx = np.asarray(f(x), dtype=float)
        left = (fx < 0) == rising
        lo = np.where(left, x, lo)
        hi = np.where(left, hi, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - fx / np.asarray(fprime(x), dtype=float)
        bad = ~np.isfinite(xn) | (xn < lo) | (xn > hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        conv = (np.abs(xn - x) <= tol.abs_tol + tol.rel_tol * np.abs(x)) | (fx == 0)
        x = np.where(done, x, xn)
        done = done | conv
        if np.all(done):
            return x
    raise BracketError("find_roots did not converge")
