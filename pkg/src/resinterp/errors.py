"""Exception types shared across the package."""


class ResInterpError(Exception):
    """Base class for all errors raised by this package."""


# input / plumbing errors
class ParseError(ResInterpError):
    """Malformed scalar text, problem document, or CLI argument."""


class ArityError(ResInterpError):
    """Dimension mismatch: variable counts, point lengths, matrix shapes."""


class BackendMismatch(ResInterpError):
    """Exact and float values mixed in one expression."""


class CenterError(ResInterpError):
    """Truncated series combined around different expansion centers."""


class DataShapeError(ResInterpError):
    """Node derivative data does not cover exactly its index box."""


class DuplicateNode(ResInterpError):
    """Two interpolation nodes coincide."""


# mathematical precondition failures
class DivisionByZero(ResInterpError):
    """Inversion or division of a zero field element."""


class SingularSeries(ResInterpError):
    """Series inversion requested for a series with zero constant term."""


class OrderViolation(ResInterpError):
    """Claimed vanishing orders do not hold at the node."""


class DegenerateLeadingMatrix(ResInterpError):
    """The decomposition determinant vanishes at the node."""


class DegenerateRoot(ResInterpError):
    """Jacobian vanishes at a node that was claimed simple."""


class NotSeparable(ResInterpError):
    """System is not of the one-variable-per-equation form."""


class OracleUnsolvable(ResInterpError):
    """Brute-force interpolation system is inconsistent or rank-deficient."""
