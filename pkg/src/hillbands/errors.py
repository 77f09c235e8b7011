"""Exception types shared across the package."""


class HillbandsError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(HillbandsError):
    """Malformed configuration input (JSON schema violations, bad CLI args)."""


class DomainError(HillbandsError):
    """Energy argument outside the analyticity domain of a potential family."""


class IntegrationError(HillbandsError):
    """Adaptive integrator gave up before reaching the endpoint.

    Carries the last accepted abscissa so callers can report how far the
    integration got.
    """

    def __init__(self, message, last_x=None):
        super().__init__(message)
        self.last_x = last_x


class BoundaryZeroError(HillbandsError):
    """A zero sits on (or hugs) the contour after all dilation retries."""


class WindingPrecisionError(HillbandsError):
    """Argument-principle integral did not settle near an integer."""


class SubdivisionDepthError(HillbandsError):
    """Quadtree isolation hit the depth cap without separating zeros."""


class BandStructureError(HillbandsError):
    """Counting windows disagree with the located 2-periodic eigenvalues."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class SpectralPointError(HillbandsError):
    """Resolvent requested at (or numerically at) a spectral point."""


class WeylSingularityError(HillbandsError):
    """Floquet m-functions undefined: phi(1, lam) vanishes at a regular point."""


class NearRamificationError(HillbandsError):
    """Floquet multiplier extraction attempted too close to a ramification."""


class UnsupportedRegionError(HillbandsError):
    """No analytic tail bound available for this family/region combination."""
