class DomainError(ValueError):
    """Input lies outside the domain of a transformation (e.g. a forbidden momentum)."""


class CoverageError(ValueError):
    """A quadrature grid does not cover the support of its integrand."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (singular system, unbracketed search, ...)."""


class EmptyBranchError(NumericalError):
    """The requested branch or window carries (almost) no probability."""


class ResolutionError(NumericalError):
    """A feature of the integrand is narrower than the quadrature grid can resolve."""
