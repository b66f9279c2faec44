"""Exact Airy-type solutions of an extended mKdV equation and the moving-boundary
problems, reciprocal, Ermakov and Gardner images built from them."""

from .airy import AirySeed, airy_all, first_zero, phi
from .errors import (
    AccuracyError, BracketError, DomainError, Ep2Error, IntegrationError, LengthError,
    PoleError, SingularityError,
)
from .mkdv import MkdvParams, MkdvSolution, eval_u, mkdv_residual, mkdv_residual_fd
from .numerics import GridSpec, Tolerance
from .painleve import PsiProfile, ScalingConstants, default_profile, derive_scalings, psi_chain
from .stefan import StefanProblem, verify_boundary_conditions

__version__ = "0.1.0"

__all__ = [
    "AirySeed", "airy_all", "first_zero", "phi",
    "AccuracyError", "BracketError", "DomainError", "Ep2Error", "IntegrationError",
    "LengthError", "PoleError", "SingularityError",
    "MkdvParams", "MkdvSolution", "eval_u", "mkdv_residual", "mkdv_residual_fd",
    "GridSpec", "Tolerance",
    "PsiProfile", "ScalingConstants", "default_profile", "derive_scalings", "psi_chain",
    "StefanProblem", "verify_boundary_conditions",
]
