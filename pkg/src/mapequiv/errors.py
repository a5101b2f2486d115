"""Exception hierarchy shared by all mapequiv modules.

Everything user-facing derives from MapequivError so the service and CLI
can map the whole family to one error channel (HTTP 400 / exit code 2).
"""


class MapequivError(ValueError):
    """Base class for all data and usage errors raised by mapequiv."""


class InvalidFieldError(MapequivError):
    """Field description is malformed (e.g. non-prime modulus, negative epsilon)."""


class ScalarParseError(MapequivError):
    """Scalar text does not conform to the field's grammar or is undefined in it."""


class ZeroInverseError(MapequivError):
    """Inversion of a scalar that is (effectively) zero."""


class SingularMatrixError(MapequivError):
    """Matrix inversion or a solve against dependent basis columns."""


class DatasetError(MapequivError):
    """Dataset file violates the JSON/CSV schema."""


class DuplicateKeyError(DatasetError):
    """Two samples share the same (s, t) key."""


class UnknownKeyError(MapequivError):
    """A key named on the command line does not occur in the dataset."""


class BaseSelectionError(MapequivError):
    """User-supplied base keys are dependent or do not span the map."""


class NotInSpanError(MapequivError):
    """A sample vector lies outside the span of the base points."""


class DimensionMismatchError(MapequivError):
    """Two maps have different ambient dimensions."""


class FieldMismatchError(MapequivError):
    """Two maps or signatures live over different fields."""


class KeySetMismatchError(MapequivError):
    """Two maps are indexed by different sample key sets."""


class CustomGroupNeedsFullRankError(MapequivError):
    """Custom subgroup decisions are only defined at full rank k = n."""


class ClassFunctionMismatchError(MapequivError):
    """Declared class functions disagree with the membership predicate."""


class UnsupportedGroupError(MapequivError):
    """The requested operation is not defined for this group."""


class TooLargeError(MapequivError):
    """Brute-force enumeration would exceed the feasibility guard."""


class RetriesExhaustedError(MapequivError):
    """No generic point with the required nonzero minors was found."""
