"""Extended Gardner equation obtained from the extended mKdV equation.

With ``u = v - 1/2`` and the moving frame ``x = y - (3/2) tau``, ``t = tau``,

    v_tau + 6 v (1 - v) v_y + v_yyy + lam (tau + a)^-2 (v - 1/2)^-4 v_y = 0.

Since ``6 (u + 1/2)(1/2 - u) u_x - (3/2) u_x = -6 u^2 u_x``, the Gardner residual
at ``(y, tau)`` equals the mKdV residual at ``(y - 3 tau / 2, tau)`` term for term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SingularityError
from .mkdv import EXACT_MU, MkdvSolution, eval_u

FRAME_SPEED = 1.5
OFFSET = 0.5
SINGULARITY_GUARD = 1e-8


@dataclass(frozen=True)
class GardnerField:
    source: MkdvSolution

    def to_source(self, y, tau):
        """``(x, t)`` for a frame point ``(y, tau)``."""
        tau = np.asarray(tau, dtype=float)
        return np.asarray(y, dtype=float) - FRAME_SPEED * tau, tau


class VValues(NamedTuple):
    v: np.ndarray
    v_y: np.ndarray
    v_yyy: np.ndarray
    v_tau: np.ndarray


def eval_v(field: GardnerField, y, tau) -> VValues:
    """``v`` with ``v_y = u_x``, ``v_yyy = u_xxx`` and ``v_tau = u_t - (3/2) u_x``."""
    x, t = field.to_source(y, tau)
    f = eval_u(field.source, x, t)
    return VValues(f.u + OFFSET, f.u_x, f.u_xxx, f.u_t - FRAME_SPEED * f.u_x)


def gardner_operator(v, v_y, v_yyy, v_tau, lam, T, mu=EXACT_MU):
    """``v_tau + 6 v (1 - v) v_y + v_yyy + lam T^mu (v - 1/2)^-4 v_y``."""
    s = v - OFFSET
    if lam != 0 and np.any(np.abs(s) < SINGULARITY_GUARD):
        raise SingularityError("v = 1/2 (u = 0) makes the modulated term singular")
    tail = lam * T**mu * v_y / s**4 if lam != 0 else 0.0
    return v_tau + 6.0 * v * (1.0 - v) * v_y + v_yyy + tail


def gardner_residual(field: GardnerField, y, tau):
    """Pointwise residual of the extended Gardner equation on the transformed solution."""
    v = eval_v(field, y, tau)
    T = np.asarray(tau, dtype=float) + field.source.a
    return gardner_operator(v.v, v.v_y, v.v_yyy, v.v_tau, field.source.lam, T, field.source.params.mu)


def shifted_grid(field: GardnerField, nx=30, nt=10, t_max=2.0, margin=0.9):
    """Frame points ``(Y, TAU)`` whose pre-images fill the standard validity grid."""
    g = field.source.standard_grid(nx, nt, t_max, margin)
    X, T = g.mesh()
    return X + FRAME_SPEED * T, T
