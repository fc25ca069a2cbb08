"""Exception types shared across the package."""


class NugsError(Exception):
    """Base class for errors raised by this package."""


class UnstableReconstructionError(NugsError):
    """The scaled design matrix is (near-)rank-deficient: the lower frame
    constant is numerically zero and the least-squares problem has no
    stable solution.  Increase the bandwidth or shrink the space."""


class BandwidthTooSmallError(NugsError):
    """No space dimension satisfies the stability threshold at this
    bandwidth."""


class QuadratureError(NugsError):
    """A quadrature did not converge to the requested tolerance."""
