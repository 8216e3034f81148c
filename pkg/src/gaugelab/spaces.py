"""Finite-dimensional semi-normed spaces and truncated Frechet seminorm families.

A space is a real coordinate space of fixed dimension together with an
ordered, nonempty list of seminorms.  A single seminorm models (X, rho);
several model a finite prefix of a countable family.  Seminorms may have
nontrivial kernels, so equality of integrals is equality of classes mod
the kernel, tested per seminorm with an explicit tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DimensionMismatch

__all__ = [
    "VectorValue",
    "SeminormSpec",
    "SpaceSpec",
    "KernelReport",
    "abs_coordinate",
    "weighted_sum",
    "sup_over_subset",
    "euclidean_full",
    "seminorm_eval",
    "in_kernel",
    "class_equal",
    "scalar_space",
]


@dataclass(frozen=True, slots=True)
class VectorValue:
    """An element of a coordinate space; immutable, all coordinates finite."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) == 0:
            raise DimensionMismatch("vector must have dimension >= 1")
        for c in coords:
            if not math.isfinite(c):
                raise ValueError(f"non-finite coordinate {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, dimension: int) -> "VectorValue":
        return cls((0.0,) * dimension)

    def _check(self, other: "VectorValue"):
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"dimension {self.dimension} vs {other.dimension}"
            )

    def __add__(self, other: "VectorValue") -> "VectorValue":
        self._check(other)
        return VectorValue(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "VectorValue") -> "VectorValue":
        self._check(other)
        return VectorValue(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "VectorValue":
        return VectorValue(tuple(-a for a in self.coords))

    def scaled(self, c: float) -> "VectorValue":
        return VectorValue(tuple(c * a for a in self.coords))


@dataclass(frozen=True, slots=True)
class SeminormSpec:
    """One seminorm rule.  Kinds:

    - ``abs-coordinate``: rho(x) = |x_j| for a fixed index j
    - ``weighted-sum``:   rho(x) = sum_i w_i |x_i| with w_i >= 0
    - ``sup-over-subset``: rho(x) = max_{i in S} |x_i|
    - ``euclidean-full``: rho(x) = sqrt(sum x_i^2)
    """

    kind: str
    index: int | None = None
    weights: tuple[float, ...] | None = None
    indices: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "abs-coordinate":
            if self.index is None or self.index < 0:
                raise ValueError("abs-coordinate needs a nonnegative index")
        elif self.kind == "weighted-sum":
            if not self.weights:
                raise ValueError("weighted-sum needs weights")
            ws = tuple(float(w) for w in self.weights)
            if any(w < 0 for w in ws):
                raise ValueError("weights must be >= 0")
            object.__setattr__(self, "weights", ws)
        elif self.kind == "sup-over-subset":
            if not self.indices:
                raise ValueError("sup-over-subset needs a nonempty index set")
            object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))
        elif self.kind != "euclidean-full":
            raise ValueError(f"unknown seminorm kind {self.kind!r}")

    def evaluate(self, coords: tuple[float, ...]) -> float:
        if self.kind == "abs-coordinate":
            return abs(coords[self.index])
        if self.kind == "weighted-sum":
            if len(self.weights) != len(coords):
                raise DimensionMismatch("weight vector does not match dimension")
            return sum(w * abs(c) for w, c in zip(self.weights, coords))
        if self.kind == "sup-over-subset":
            return max(abs(coords[i]) for i in self.indices)
        return math.sqrt(sum(c * c for c in coords))

    def max_index(self) -> int:
        """Largest coordinate index this rule touches (for dimension checks)."""
        if self.kind == "abs-coordinate":
            return self.index
        if self.kind == "weighted-sum":
            return len(self.weights) - 1
        if self.kind == "sup-over-subset":
            return max(self.indices)
        return 0

    def to_json(self) -> dict:
        params: dict = {}
        if self.kind == "abs-coordinate":
            params["index"] = self.index
        elif self.kind == "weighted-sum":
            params["weights"] = list(self.weights)
        elif self.kind == "sup-over-subset":
            params["indices"] = list(self.indices)
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_json(cls, data: dict) -> "SeminormSpec":
        kind = data["kind"]
        params = data.get("params", {})
        if kind == "abs-coordinate":
            return cls(kind, index=int(params["index"]))
        if kind == "weighted-sum":
            return cls(kind, weights=tuple(params["weights"]))
        if kind == "sup-over-subset":
            return cls(kind, indices=tuple(params["indices"]))
        return cls(kind)


def abs_coordinate(index: int) -> SeminormSpec:
    return SeminormSpec("abs-coordinate", index=index)


def weighted_sum(weights) -> SeminormSpec:
    return SeminormSpec("weighted-sum", weights=tuple(weights))


def sup_over_subset(indices) -> SeminormSpec:
    return SeminormSpec("sup-over-subset", indices=tuple(indices))


def euclidean_full() -> SeminormSpec:
    return SeminormSpec("euclidean-full")


@dataclass(frozen=True, slots=True)
class SpaceSpec:
    """A coordinate space with an ordered seminorm family.

    The list order is stable: index i names rho_i throughout the package.
    """

    dimension: int
    seminorms: tuple[SeminormSpec, ...]
    label: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        sns = tuple(self.seminorms)
        if not sns:
            raise ValueError("at least one seminorm is required")
        for sn in sns:
            if sn.max_index() >= self.dimension:
                raise DimensionMismatch(
                    f"seminorm {sn.kind} touches index {sn.max_index()} "
                    f"outside dimension {self.dimension}"
                )
        object.__setattr__(self, "seminorms", sns)

    @property
    def n_seminorms(self) -> int:
        return len(self.seminorms)

    def check_vector(self, x: VectorValue):
        if x.dimension != self.dimension:
            raise DimensionMismatch(
                f"vector dimension {x.dimension} vs space {self.dimension}"
            )

    def rho(self, i: int, coords: tuple[float, ...]) -> float:
        return self.seminorms[i].evaluate(coords)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "seminorms": [sn.to_json() for sn in self.seminorms],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpaceSpec":
        return cls(
            dimension=int(data["dimension"]),
            seminorms=tuple(SeminormSpec.from_json(s) for s in data["seminorms"]),
            label=str(data.get("label", "")),
        )


@dataclass(frozen=True, slots=True)
class KernelReport:
    """Per-seminorm kernel membership plus the conjunction over the family."""

    per_seminorm: tuple[bool, ...]
    overall: bool


def seminorm_eval(space: SpaceSpec, i: int, x: VectorValue) -> float:
    """rho_i(x); raises on index or dimension mismatch."""
    space.check_vector(x)
    if not 0 <= i < space.n_seminorms:
        raise DimensionMismatch(f"seminorm index {i} out of range")
    return space.rho(i, x.coords)


def in_kernel(space: SpaceSpec, x: VectorValue, tol: float) -> KernelReport:
    """True for seminorm i iff rho_i(x) <= tol; overall iff true for all i."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    space.check_vector(x)
    flags = tuple(space.rho(i, x.coords) <= tol for i in range(space.n_seminorms))
    return KernelReport(flags, all(flags))


def class_equal(space: SpaceSpec, x: VectorValue, y: VectorValue, tol: float) -> bool:
    """Equality of classes mod ker rho: x - y in the kernel of every seminorm."""
    return in_kernel(space, x - y, tol).overall


def scalar_space(label: str = "R") -> SpaceSpec:
    """The real line with absolute value; the default codomain for scalar work."""
    return SpaceSpec(1, (abs_coordinate(0),), label)
