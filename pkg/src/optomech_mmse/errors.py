"""Exception types shared across the package."""


class OptomechError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(OptomechError):
    """Invalid run configuration (bad key, bad value, inconsistent grid)."""


class NonHermitianInput(OptomechError):
    """Coefficient matrices violate their conjugate-symmetry requirement."""


class DegenerateSqueezing(OptomechError):
    """A denominator in the squeezed-state series coefficients underflowed."""


class BranchFailure(OptomechError):
    """Re(sigma'^2) <= 0: the prior-weighted Gaussian integral diverges."""


class SingularPair(OptomechError):
    """An eigenvalue pair of Gamma_0 vanishes while the corresponding
    Gamma_1 entry does not; the operator equation has no bounded solution
    in that sector."""


class DegenerateDerivative(OptomechError):
    """Tr{rho (drho)^2} vanishes: the error lower bound is undefined
    (no information about the coupling at this configuration)."""


class TruncationOverflow(OptomechError):
    """Too much population in the top mechanical levels after evolution;
    the caller must enlarge the mechanical basis."""


class QuadratureNonConvergence(OptomechError):
    """Adaptive quadrature failed to reach the requested accuracy."""


class NumericalConsistencyError(OptomechError):
    """A trace that is mathematically real acquired a non-negligible
    imaginary part."""


class WindowEdgeWarning(UserWarning):
    """The cost minimum sits at the edge of the search window."""
