"""Gauge integration, variational measures, and U^p seminorm experiments."""

__version__ = "0.1.0"

from .errors import (
    DepthExceeded,
    DimensionMismatch,
    GaugeLabError,
    InvariantError,
    NotCauchyOnPrefix,
    SchemaError,
    UnsupportedFunction,
)
from .spaces import (
    KernelReport,
    SeminormSpec,
    SpaceSpec,
    VectorValue,
    abs_coordinate,
    class_equal,
    euclidean_full,
    in_kernel,
    scalar_space,
    seminorm_eval,
    sup_over_subset,
    weighted_sum,
)
from .partitions import (
    Gauge,
    TaggedPartition,
    anchor_gauge,
    affine_floor_gauge,
    constant_gauge,
    cousin_partition,
    is_fine,
    shrink_schedule,
    table_gauge,
)
from .funcspace import (
    DerivativePair,
    FunctionSpec,
    IntervalPointFn,
    PrimitiveSpec,
    SubsetSpec,
    delta_of,
    discontinuities,
    evaluate,
    hk_derivative_pair,
    indicator_restrict,
    length_fn,
    level_set,
    step_primitive,
    step_profile,
    theta,
    theta_minus_delta,
    theta_p,
)
