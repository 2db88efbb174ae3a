"""Exception types shared across the package."""


class ChebsumError(Exception):
    """Base class for all package-specific errors."""


class MissingAssignment(ChebsumError):
    """A polynomial was evaluated without a value for a variable it uses."""


class OverlapError(ChebsumError):
    """Sine and cosine index lists passed to a product-to-sum expansion overlap."""


class ArityError(ChebsumError):
    """Parallel argument lists have inconsistent lengths."""


class DomainError(ChebsumError):
    """A numeric argument lies outside the region where the formula converges."""


class ScaleError(ChebsumError):
    """The requested size exceeds the supported desk-scale limits."""


class SingularAngle(ChebsumError):
    """An angle with vanishing sine was passed where division by sin is required."""


class UnknownId(ChebsumError):
    """A registry lookup used an id that is not present."""


class ConvergenceError(ChebsumError):
    """A truncated infinite sum or product cannot meet its error budget."""


class DegeneratePivot(ChebsumError):
    """A linear condition that should determine a constant has a zero pivot."""
