"""
Error Types Module.

Every failure raised by the services derives from `PgetError`. The concrete
classes also inherit from the matching builtin (ValueError, OSError,
RuntimeError) so callers can keep catching the builtin family, the way the
HTTP controllers map ValueError to 400.
"""


class PgetError(Exception):
    """Base class of all domain errors."""


class ConfigurationError(PgetError, ValueError):
    """Invalid parameters, arguments or configuration files."""


class GeometryError(PgetError, ValueError):
    """A geometric quantity is undefined (e.g. a voxel on the detector face)."""


class DomainCoverageError(GeometryError):
    """The investigation grid does not contain the rotated assembly."""


class ShapeError(PgetError, ValueError):
    """Two arrays that must agree in shape do not."""


class ArtifactIOError(PgetError, OSError):
    """Reading or writing a persisted artifact failed."""


class ArtifactParseError(ArtifactIOError):
    """
    A text table could not be parsed.

    Attributes:
        line (int): 1-based line number of the offending cell.
        column (int): 1-based column number of the offending cell.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column


class NumericalError(PgetError, RuntimeError):
    """A numerical stage produced an undefined result."""


class EmptyMaskError(NumericalError):
    """The error mask selects no pixel, so no metric is defined."""


class RankDeficiencyWarning(UserWarning):
    """The snapshot database has fewer independent columns than requested modes."""
