"""Exception hierarchy shared by all modules."""


class TunnelBoundError(Exception):
    """Base class for every error raised by the package."""


class InvalidEnergy(TunnelBoundError):
    """Energy does not exceed both asymptotic potential values."""


class NonConvergent(TunnelBoundError):
    """Grid refinement in the scattering solver did not converge."""


class NoOracle(TunnelBoundError):
    """No closed-form transmission is known for this potential family."""


class NonPositive(TunnelBoundError):
    """A trial function that must be positive is not."""


class DivergentAsymptotics(TunnelBoundError):
    """A coordinate map or field fails to flatten at spatial infinity."""


class DivergentBound(TunnelBoundError):
    """The bound integral diverges, so only the trivial bound T >= 0 remains."""


class PreconditionFailed(TunnelBoundError):
    """A structural assumption of a bound family does not hold for this slice."""


class ForbiddenRegionPresent(PreconditionFailed):
    pass


class AsymmetricAsymptotics(PreconditionFailed):
    pass


class InvalidDelta(PreconditionFailed):
    pass


class ToleranceNotMet(TunnelBoundError):
    """Adaptive quadrature exhausted its depth budget.

    The best available estimate is kept on ``self.estimate``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NoConvergence(TunnelBoundError):
    """Domain truncation exceeded its hard cap."""


class RegionResolutionError(TunnelBoundError):
    """Scan grid could not resolve a classically forbidden region."""
