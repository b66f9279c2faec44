"""Exception types shared across the package."""


class Ep2Error(Exception):
    """Base class for every error raised by :mod:`ep2stefan`."""


class DomainError(Ep2Error, ValueError):
    """An argument lies outside the region where an operation is defined."""


class LengthError(Ep2Error, ValueError):
    """Too few samples for the requested stencil."""


class PoleError(DomainError):
    """The Airy seed vanishes (to within the pole threshold) at ``z``."""

    def __init__(self, z, phi):
        self.z = z
        self.phi = phi
        super().__init__(f"Airy seed nearly vanishes at z={z!r} (|phi|={abs(phi):.3e})")


class SingularityError(DomainError):
    """A negative power of a vanishing field was requested."""


class IntegrationError(Ep2Error, RuntimeError):
    """The ODE integrator could not reach the end of the requested span."""

    def __init__(self, message, t_reached):
        self.t_reached = t_reached
        super().__init__(f"{message} (last t reached: {t_reached!r})")


class AccuracyError(Ep2Error, RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget."""

    def __init__(self, estimate, error_bound):
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(
            f"quadrature did not converge: estimate={estimate!r}, error bound={error_bound:.3e}"
        )


class BracketError(Ep2Error, ValueError):
    """The supplied bracket does not enclose a sign change."""
