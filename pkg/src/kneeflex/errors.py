"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: schema / data problems exit 2,
empty or too-short series exit 3, usage problems exit 1.
"""


class KneeflexError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(KneeflexError):
    """A CSV header or column does not match the expected schema."""


class EmptySeriesError(KneeflexError):
    """No frames survive preprocessing; downstream stages need at least one."""


class InsufficientDataError(KneeflexError):
    """Fewer samples than the operation needs (centering needs two or more)."""


class MissingLandmarkError(KneeflexError):
    """A required landmark slot is missing from a frame."""

    def __init__(self, slot: str, frame_index: int | None = None):
        self.slot = slot
        self.frame_index = frame_index
        where = f" in frame {frame_index}" if frame_index is not None else ""
        super().__init__(f"missing landmark '{slot}'{where}")


class DegenerateGeometryError(KneeflexError):
    """A segment used in an angle computation has (near-)zero length."""


class ConstructionError(KneeflexError):
    """Points violate the right-angle construction of the decomposition formula."""
