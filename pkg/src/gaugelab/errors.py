"""Exception types shared across the package."""


class GaugeLabError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatch(GaugeLabError):
    """Vectors of different dimensions were combined, or an index is out of range."""


class DepthExceeded(GaugeLabError):
    """Bisection passed its depth budget; the gauge is too small to resolve."""


class NotCauchyOnPrefix(GaugeLabError):
    """No admissible subsequence index exists within the tested prefix."""

    def __init__(self, message, seminorm_index=None):
        super().__init__(message)
        self.seminorm_index = seminorm_index


class UnsupportedFunction(GaugeLabError):
    """The operation needs structure (step profile, level set) this function lacks."""


class InvariantError(GaugeLabError):
    """An internal consistency check failed; results would be untrustworthy."""


class SchemaError(GaugeLabError):
    """A scenario config does not match the expected schema."""
