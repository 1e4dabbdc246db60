"""Exception types shared across the package."""


class DynevalError(Exception):
    """Base class for all library-specific failures."""


class ValidationError(DynevalError):
    """Malformed dataset, manifest, or configuration input."""


class GridMismatchError(ValidationError):
    """Signal or corridor data does not fit the declared sampling grid."""


class DegenerateCorridorError(DynevalError):
    """Reference and permissible bands coincide, so no deviation is tolerable.

    Scoring such a corridor would divide by zero; callers must widen the
    permissible band or drop the criterion.
    """


class AggregationError(DynevalError):
    """Internal inconsistency between the element-first and mode-first rollups."""


class SchemaVersionError(DynevalError):
    """Serialized document carries an unsupported major schema version."""
