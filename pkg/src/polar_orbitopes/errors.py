"""Exception hierarchy shared across the package."""


class OrbitopeError(Exception):
    """Base class for all domain errors raised by this package."""


class ShapeError(OrbitopeError):
    """Input matrix violates the defining linear constraints of the algebra."""


class ChamberError(OrbitopeError):
    """Vector violates the closed-Weyl-chamber inequalities."""


class SizeError(OrbitopeError):
    """Requested object exceeds a configured dimension or enumeration cap."""


class RangeError(OrbitopeError):
    """Index argument outside its legal range."""


class ComputationError(OrbitopeError):
    """A numerical kernel (eigensolver, SVD, expm) failed."""


class ConsistencyError(OrbitopeError):
    """Two supposedly equivalent computation paths disagreed."""


class FamilyMismatch(OrbitopeError):
    """Operands belong to different algebra families."""


class SolveError(OrbitopeError):
    """No positive-definite invariant Gram matrix was found."""


class ZeroFunctional(OrbitopeError):
    """The zero functional does not expose a face."""


class NotAFace(OrbitopeError):
    """Claimed face fails its support invariants against the polytope."""


class NumericalError(OrbitopeError):
    """A linear program failed to terminate cleanly."""
