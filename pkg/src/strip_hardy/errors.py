"""Exception hierarchy shared by all modules."""


class StripHardyError(Exception):
    """Base class for library errors."""


class InvalidParameterError(StripHardyError, ValueError):
    """A constructor or operation received an out-of-range argument."""


class GridMismatchError(StripHardyError, ValueError):
    """Two vectors live on different grids or different lines."""


class MembershipError(StripHardyError):
    """A vector required to lie in H² failed the membership test."""


class PoleProximityError(StripHardyError, ValueError):
    """An evaluation point lies too close to a pole or singular atom."""


class QuadratureError(StripHardyError, ArithmeticError):
    """Quadrature refinement did not converge within the node budget."""


class InadmissibleOuterError(StripHardyError):
    """The outer factor is not declared admissible."""


class SymmetryAuditError(StripHardyError):
    """A symbol failed the boundary symmetry audit."""


class SpecParseError(StripHardyError):
    """A spec file is malformed or violates a data invariant.

    Parameters
    ----------
    message : str
        Human-readable description.
    line, column : int, optional
        1-based location in the source text.
    offset : int, optional
        0-based byte offset in the source text.
    """

    def __init__(self, message, line=None, column=None, offset=None):
        self.line = line
        self.column = column
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if offset is not None:
            where.append(f"byte offset {offset}")
        text = message if not where else f"{message} ({', '.join(where)})"
        super().__init__(text)
