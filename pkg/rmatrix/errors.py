"""Error types for rmatrix.

Every failure the library reports is an RMatrixError. The CLI maps them to
exit codes; callers can catch the base class or a specific subclass.
"""


class RMatrixError(ValueError):
    """Base class for all rmatrix errors."""


class InputFormatError(RMatrixError):
    """A JSON input file does not match the expected layout."""


# liealg

class NotClosed(RMatrixError):
    """Commutator of two basis elements leaves the span of the basis."""


class DependentBasis(RMatrixError):
    """Basis matrices are linearly dependent."""


class AlgebraMismatch(RMatrixError):
    """Operands belong to different algebras."""


class ProjectionLoss(RMatrixError):
    """A matrix power left the basis span by more than the tolerance."""


# dialgebra

class NotSubalgebra(RMatrixError):
    """A split component is not closed under the bracket."""


class NotComplementary(RMatrixError):
    """Split index sets do not partition the basis."""


class NotMCYBE(RMatrixError):
    """R fails the modified classical Yang-Baxter equation."""


# bialgebra

class DimensionMismatch(RMatrixError):
    """Array shapes do not match the algebra."""


class SymPartNotInvariant(RMatrixError):
    """Symmetric part of r is not ad-invariant."""


class NotAntisymmetric(RMatrixError):
    """Tensor expected to be skew is not."""


class SingularSymmetricPart(RMatrixError):
    """Symmetric part of r is not invertible."""


class DualJacobiFails(RMatrixError):
    """The dual bracket [.,.]_r violates the Jacobi identity."""


# factorization

class Singular(RMatrixError):
    """Matrix is not invertible."""


class OutsideFactorisationDomain(RMatrixError):
    """Triangular factorisation hit a non-positive pivot."""


class ExpmOverflow(RMatrixError):
    """Norm of tX exceeds the configured exponential bound."""


# lax_flows

class StepUnderflow(RMatrixError):
    """Integrator step is below the smallest accepted value."""


class EmptyTrajectory(RMatrixError):
    """Trajectory has no recorded states."""


# toda

class BadSize(RMatrixError):
    """Requested chain size is out of range."""


class LengthMismatch(RMatrixError):
    """Flaschka variables have inconsistent lengths."""


class NonPositiveEta(RMatrixError):
    """Cartan coordinates need strictly positive eta."""


class BadPeriod(RMatrixError):
    """Periodic lattice needs at least two sites."""


# Malformed inputs rather than failed computations; the CLI exits 2 on these.
INPUT_ERRORS: tuple[type[RMatrixError], ...] = (
    InputFormatError,
    NotClosed,
    DependentBasis,
    AlgebraMismatch,
    NotSubalgebra,
    NotComplementary,
    DimensionMismatch,
    StepUnderflow,
    BadSize,
    LengthMismatch,
    NonPositiveEta,
    BadPeriod,
)
