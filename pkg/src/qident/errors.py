"""Exception types shared across the engine."""


class QIdentError(Exception):
    """Base class for all engine errors."""


class ModeMismatch(QIdentError):
    """Exact and approximate scalars were mixed in one operation."""


class DomainError(QIdentError):
    """An input lies outside the operation's domain (|q| >= 1, n < 0, ...)."""


class ZeroFactor(QIdentError):
    """An infinite product contains an exactly vanishing factor."""


class PoleError(QIdentError):
    """A denominator q-Pochhammer factor vanishes before the termination index."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class DivergenceError(QIdentError):
    """A nonterminating series was requested outside its convergence region."""


class NoConvergence(QIdentError):
    """An adaptive computation failed to reach the requested accuracy."""


class PoleOnContour(QIdentError):
    """A quadrature node evaluation blew up on the integration contour."""


class ZeroArgument(QIdentError):
    """The theta function was called with x = 0."""


class HypothesisViolation(QIdentError):
    """An integral representation's modulus hypothesis fails on the contour."""

    def __init__(self, message: str, factor: str | None = None):
        super().__init__(message)
        self.factor = factor


class UnknownIdentity(QIdentError):
    """The requested identity ID is not registered."""


class ConstraintViolation(QIdentError):
    """Parameters violate an identity's validity predicate."""

    def __init__(self, message: str, predicate: str | None = None):
        super().__init__(message)
        self.predicate = predicate


class SamplerExhausted(QIdentError):
    """The parameter sampler rejected too many consecutive draws."""
