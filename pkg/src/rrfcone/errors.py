"""Exception hierarchy shared by all rrfcone modules."""


class RrfError(Exception):
    """Base class for all rrfcone errors."""


class DimensionMismatch(RrfError):
    """Array shapes or cone dimensions do not agree."""


class NonFiniteEntry(RrfError):
    """Input contains NaN or infinity."""


class PsdDimInvalid(RrfError):
    """PSD cone ambient dimension is not q(q+1)/2."""


class NotSymmetric(RrfError):
    """Matrix argument is not symmetric within tolerance."""


class NoConvergence(RrfError):
    """An iterative routine exhausted its iteration budget."""


class DykstraNoConvergence(NoConvergence):
    """Dykstra alternation hit its sweep cap without settling."""


class WrongCone(RrfError):
    """Operation requires a different cone kind."""


class BadLabels(RrfError):
    """Training labels are not in {-1, +1}."""


class RaggedRows(RrfError):
    """CSV rows have inconsistent column counts."""


class SchemaError(RrfError):
    """Problem document violates the JSON schema."""


class UnsupportedBase(RrfError):
    """Requested base kind is not supported by this operation."""


class DimensionTooLarge(RrfError):
    """Brute-force oracle guard: decision dimension exceeds the desk-scale cap."""
