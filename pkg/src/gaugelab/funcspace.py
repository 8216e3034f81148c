"""Functions [a,b] -> X as constructor trees, plus structured subsets of [a,b].

Functions are declarative trees (constants, polynomials, trig waves, an
oscillatory-singular form, steps, indicators, sums, scalings, pointwise
products, seminorm powers) rather than arbitrary callables, so scenarios
serialize and step-built functions admit exact piecewise-constant
profiles for oracle work.  Subsets are finite unions of closed intervals
plus finitely many isolated points; their measure arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, UnsupportedFunction
from .spaces import SpaceSpec, VectorValue, scalar_space

__all__ = [
    "SubsetSpec",
    "FunctionSpec",
    "PrimitiveSpec",
    "Constant",
    "Polynomial",
    "Trig",
    "OscSingular",
    "Step",
    "Indicator",
    "Sum",
    "Scaled",
    "Restricted",
    "Product",
    "RhoPower",
    "PiecewiseLinear",
    "evaluate",
    "indicator_restrict",
    "hk_derivative_pair",
    "DerivativePair",
    "step_profile",
    "discontinuities",
    "level_set",
    "IntervalPointFn",
    "theta",
    "delta_of",
    "theta_minus_delta",
    "theta_p",
    "length_fn",
]


# ---------------------------------------------------------------------------
# Subsets of [a, b]


@dataclass(frozen=True, slots=True)
class SubsetSpec:
    """A finite union of closed intervals plus a finite point set.

    Canonical form: intervals sorted, pairwise disjoint, overlapping or
    touching ones merged; points sorted, deduplicated, and not inside any
    interval.  The Lebesgue measure is the sum of interval lengths.
    """

    intervals: tuple[tuple[float, float], ...] = ()
    points: tuple[float, ...] = ()

    def __post_init__(self):
        ivs = sorted((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] reversed")
        merged: list[list[float]] = []
        for lo, hi in ivs:
            if lo == hi:
                continue  # degenerate interval is a point
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        extra_pts = [lo for lo, hi in ivs if lo == hi]
        canon = tuple((lo, hi) for lo, hi in merged)
        pts = sorted(set(float(p) for p in self.points) | set(extra_pts))
        pts = tuple(p for p in pts if not any(lo <= p <= hi for lo, hi in canon))
        object.__setattr__(self, "intervals", canon)
        object.__setattr__(self, "points", pts)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "SubsetSpec":
        return cls(intervals=((lo, hi),))

    @classmethod
    def of_points(cls, pts) -> "SubsetSpec":
        return cls(points=tuple(pts))

    @classmethod
    def empty(cls) -> "SubsetSpec":
        return cls()

    @property
    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals and not self.points

    def contains(self, t: float) -> bool:
        return any(lo <= t <= hi for lo, hi in self.intervals) or t in self.points

    def boundary_points(self) -> tuple[float, ...]:
        out = set(self.points)
        for lo, hi in self.intervals:
            out.add(lo)
            out.add(hi)
        return tuple(sorted(out))

    def intersect(self, other: "SubsetSpec") -> "SubsetSpec":
        ivs = []
        for lo1, hi1 in self.intervals:
            for lo2, hi2 in other.intervals:
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if lo < hi:
                    ivs.append((lo, hi))
                elif lo == hi:
                    ivs.append((lo, lo))
        pts = [p for p in self.points if other.contains(p)]
        pts += [p for p in other.points if self.contains(p)]
        return SubsetSpec(tuple(ivs), tuple(pts))

    def union(self, other: "SubsetSpec") -> "SubsetSpec":
        return SubsetSpec(
            self.intervals + other.intervals, self.points + other.points
        )

    def contains_subset(self, other: "SubsetSpec") -> bool:
        """Whether ``other`` is contained in this set."""
        for lo, hi in other.intervals:
            if not any(a <= lo and hi <= b for a, b in self.intervals):
                return False
        return all(self.contains(p) for p in other.points)

    def within(self, a: float, b: float) -> bool:
        for lo, hi in self.intervals:
            if lo < a or hi > b:
                return False
        return all(a <= p <= b for p in self.points)

    def to_json(self) -> dict:
        return {
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "points": list(self.points),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SubsetSpec":
        return cls(
            intervals=tuple((float(a), float(b)) for a, b in data.get("intervals", ())),
            points=tuple(float(p) for p in data.get("points", ())),
        )


# ---------------------------------------------------------------------------
# Constructor-tree nodes

_NODE_KINDS: dict[str, type] = {}


def _register(kind):
    def wrap(cls):
        cls.kind = kind
        _NODE_KINDS[kind] = cls
        return cls

    return wrap


class FnNode:
    """Base node; subclasses are frozen dataclasses with a fixed ``kind``."""

    kind = "?"

    def value(self, t: float, space: SpaceSpec) -> tuple[float, ...]:
        raise NotImplementedError

    def compile(self, space: SpaceSpec):
        """A closure t -> coords tuple; default falls back to ``value``."""
        return lambda t: self.value(t, space)

    def profile(self, a, b, space):
        """Exact right-continuous piecewise-constant form, or None."""
        return None

    def breakpoints(self, a, b) -> tuple[float, ...]:
        """Points where the node (or a derivative used as primitive) jumps."""
        return ()

    def to_json(self) -> dict:
        raise NotImplementedError


def _zeros(n):
    return (0.0,) * n


@_register("constant")
@dataclass(frozen=True, slots=True)
class Constant(FnNode):
    vector: tuple[float, ...]

    def value(self, t, space):
        return self.vector

    def compile(self, space):
        v = self.vector
        return lambda t: v

    def profile(self, a, b, space):
        return ((a, b, self.vector),)

    def to_json(self):
        return {"kind": self.kind, "vector": list(self.vector)}


@_register("polynomial")
@dataclass(frozen=True, slots=True)
class Polynomial(FnNode):
    """Per-coordinate coefficient tuples, ascending powers."""

    coeffs: tuple[tuple[float, ...], ...]

    def value(self, t, space):
        out = []
        for cs in self.coeffs:
            acc = 0.0
            for c in reversed(cs):
                acc = acc * t + c
            out.append(acc)
        return tuple(out)

    def compile(self, space):
        coeffs = self.coeffs
        if len(coeffs) == 1:
            cs = tuple(reversed(coeffs[0]))

            def scalar(t):
                acc = 0.0
                for c in cs:
                    acc = acc * t + c
                return (acc,)

            return scalar
        return lambda t: self.value(t, None)

    def profile(self, a, b, space):
        if all(len(cs) <= 1 for cs in self.coeffs):
            vec = tuple(cs[0] if cs else 0.0 for cs in self.coeffs)
            return ((a, b, vec),)
        return None

    def to_json(self):
        return {"kind": self.kind, "coeffs": [list(cs) for cs in self.coeffs]}


@_register("trig")
@dataclass(frozen=True, slots=True)
class Trig(FnNode):
    """Per-coordinate amplitude * sin(frequency * t + phase)."""

    params: tuple[tuple[float, float, float], ...]

    def value(self, t, space):
        return tuple(a * math.sin(w * t + ph) for a, w, ph in self.params)

    def to_json(self):
        return {"kind": self.kind, "params": [list(p) for p in self.params]}


@_register("osc-singular")
@dataclass(frozen=True, slots=True)
class OscSingular(FnNode):
    """t^alpha * sin(t^(-beta) + phase) on one coordinate for t > 0; 0 at t <= 0."""

    alpha: float
    beta: float
    phase: float = 0.0
    coord: int = 0
    dimension: int = 1

    def value(self, t, space):
        out = [0.0] * self.dimension
        if t > 0.0:
            out[self.coord] = t**self.alpha * math.sin(t**-self.beta + self.phase)
        return tuple(out)

    def compile(self, space):
        if self.dimension == 1 and self.coord == 0:
            al, be, ph = self.alpha, self.beta, self.phase
            sin = math.sin

            def scalar(t):
                if t <= 0.0:
                    return (0.0,)
                return (t**al * sin(t**-be + ph),)

            return scalar
        return lambda t: self.value(t, space)

    def breakpoints(self, a, b):
        return (0.0,) if a <= 0.0 <= b else ()

    def to_json(self):
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "beta": self.beta,
            "phase": self.phase,
            "coord": self.coord,
            "dimension": self.dimension,
        }


@_register("step")
@dataclass(frozen=True, slots=True)
class Step(FnNode):
    """Piecewise constant on [b_j, b_{j+1}); the final breakpoint joins the
    last piece.  Breakpoints must be strictly increasing and span the domain."""

    breaks: tuple[float, ...]
    pieces: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        breaks = tuple(float(x) for x in self.breaks)
        if len(breaks) != len(self.pieces) + 1:
            raise ValueError("need len(breaks) == len(pieces) + 1")
        if any(x >= y for x, y in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(
            self, "pieces", tuple(tuple(float(c) for c in p) for p in self.pieces)
        )

    def _piece_index(self, t):
        breaks = self.breaks
        if t >= breaks[-1]:
            return len(self.pieces) - 1
        if t <= breaks[0]:
            return 0
        lo, hi = 0, len(breaks) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if breaks[mid] <= t:
                lo = mid
            else:
                hi = mid
        return lo

    def value(self, t, space):
        return self.pieces[self._piece_index(t)]

    def profile(self, a, b, space):
        out = []
        for j, piece in enumerate(self.pieces):
            lo, hi = self.breaks[j], self.breaks[j + 1]
            lo, hi = max(lo, a), min(hi, b)
            if lo < hi:
                out.append((lo, hi, piece))
        return tuple(out)

    def breakpoints(self, a, b):
        return tuple(x for x in self.breaks[1:-1] if a <= x <= b)

    def to_json(self):
        return {
            "kind": self.kind,
            "breaks": list(self.breaks),
            "pieces": [list(p) for p in self.pieces],
        }


@_register("indicator")
@dataclass(frozen=True, slots=True)
class Indicator(FnNode):
    """1_A(t) * vector for a SubsetSpec A."""

    subset: SubsetSpec
    vector: tuple[float, ...]

    def value(self, t, space):
        if self.subset.contains(t):
            return self.vector
        return _zeros(len(self.vector))

    def profile(self, a, b, space):
        # isolated points have measure zero and are dropped from profiles
        zero = _zeros(len(self.vector))
        cuts = sorted({a, b, *(x for x in self.subset.boundary_points() if a < x < b)})
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            inside = any(l <= mid <= h for l, h in self.subset.intervals)
            out.append((lo, hi, self.vector if inside else zero))
        return tuple(out)

    def breakpoints(self, a, b):
        return tuple(x for x in self.subset.boundary_points() if a <= x <= b)

    def to_json(self):
        return {
            "kind": self.kind,
            "subset": self.subset.to_json(),
            "vector": list(self.vector),
        }


@_register("sum")
@dataclass(frozen=True, slots=True)
class Sum(FnNode):
    children: tuple[FnNode, ...]

    def value(self, t, space):
        acc = list(self.children[0].value(t, space))
        for child in self.children[1:]:
            for k, c in enumerate(child.value(t, space)):
                acc[k] += c
        return tuple(acc)

    def compile(self, space):
        fns = [c.compile(space) for c in self.children]
        if len(fns) == 2:
            f1, f2 = fns
            return lambda t: tuple(a + b for a, b in zip(f1(t), f2(t)))

        def many(t):
            acc = list(fns[0](t))
            for fn in fns[1:]:
                for k, c in enumerate(fn(t)):
                    acc[k] += c
            return tuple(acc)

        return many

    def profile(self, a, b, space):
        profs = [c.profile(a, b, space) for c in self.children]
        if any(p is None for p in profs):
            return None
        return _merge_profiles(profs, lambda vecs: tuple(map(sum, zip(*vecs))))

    def breakpoints(self, a, b):
        out = set()
        for c in self.children:
            out.update(c.breakpoints(a, b))
        return tuple(sorted(out))

    def to_json(self):
        return {"kind": self.kind, "children": [c.to_json() for c in self.children]}


@_register("scaled")
@dataclass(frozen=True, slots=True)
class Scaled(FnNode):
    factor: float
    child: FnNode

    def value(self, t, space):
        return tuple(self.factor * c for c in self.child.value(t, space))

    def compile(self, space):
        fn = self.child.compile(space)
        k = self.factor
        return lambda t: tuple(k * c for c in fn(t))

    def profile(self, a, b, space):
        prof = self.child.profile(a, b, space)
        if prof is None:
            return None
        return tuple((lo, hi, tuple(self.factor * c for c in vec)) for lo, hi, vec in prof)

    def breakpoints(self, a, b):
        return self.child.breakpoints(a, b)

    def to_json(self):
        return {"kind": self.kind, "factor": self.factor, "child": self.child.to_json()}


@_register("restricted")
@dataclass(frozen=True, slots=True)
class Restricted(FnNode):
    """1_A(t) * child(t); the indicator applied to a whole subtree."""

    subset: SubsetSpec
    child: FnNode

    def value(self, t, space):
        vals = self.child.value(t, space)
        if self.subset.contains(t):
            return vals
        return _zeros(len(vals))

    def compile(self, space):
        fn = self.child.compile(space)
        contains = self.subset.contains

        def masked(t):
            vals = fn(t)
            return vals if contains(t) else _zeros(len(vals))

        return masked

    def profile(self, a, b, space):
        prof = self.child.profile(a, b, space)
        if prof is None:
            return None
        cuts = sorted(
            {a, b}
            | {x for x in self.subset.boundary_points() if a < x < b}
            | {lo for lo, _, _ in prof if a < lo < b}
            | {hi for _, hi, _ in prof if a < hi < b}
        )
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = 0.5 * (lo + hi)
            vec = _profile_value(prof, mid)
            inside = any(l <= mid <= h for l, h in self.subset.intervals)
            out.append((lo, hi, vec if inside else _zeros(len(vec))))
        return tuple(out)

    def breakpoints(self, a, b):
        out = set(self.child.breakpoints(a, b))
        out.update(x for x in self.subset.boundary_points() if a <= x <= b)
        return tuple(sorted(out))

    def to_json(self):
        return {
            "kind": self.kind,
            "subset": self.subset.to_json(),
            "child": self.child.to_json(),
        }


@_register("product")
@dataclass(frozen=True, slots=True)
class Product(FnNode):
    """scalar(t) * vector(t); the scalar child must be one-dimensional."""

    scalar: FnNode
    child: FnNode

    def value(self, t, space):
        s = self.scalar.value(t, scalar_space())
        if len(s) != 1:
            raise DimensionMismatch("product scalar factor must have dimension 1")
        k = s[0]
        return tuple(k * c for c in self.child.value(t, space))

    def compile(self, space):
        sfn = self.scalar.compile(scalar_space())
        fn = self.child.compile(space)

        def prod(t):
            k = sfn(t)[0]
            return tuple(k * c for c in fn(t))

        return prod

    def profile(self, a, b, space):
        sprof = self.scalar.profile(a, b, scalar_space())
        prof = self.child.profile(a, b, space)
        if sprof is None or prof is None:
            return None
        return _merge_profiles(
            [sprof, prof], lambda vecs: tuple(vecs[0][0] * c for c in vecs[1])
        )

    def breakpoints(self, a, b):
        out = set(self.scalar.breakpoints(a, b))
        out.update(self.child.breakpoints(a, b))
        return tuple(sorted(out))

    def to_json(self):
        return {
            "kind": self.kind,
            "scalar": self.scalar.to_json(),
            "child": self.child.to_json(),
        }


@_register("rho-power")
@dataclass(frozen=True, slots=True)
class RhoPower(FnNode):
    """scale * rho_i(child(t)) ** exponent, a one-dimensional value.

    ``space`` here is the codomain of the child; the node itself is scalar.
    """

    child: FnNode
    child_space: SpaceSpec
    seminorm_index: int
    exponent: float
    scale: float = 1.0

    def value(self, t, space):
        r = self.child_space.rho(self.seminorm_index, self.child.value(t, self.child_space))
        if r == 0.0 and self.exponent <= 0.0:
            return (0.0,)
        return (self.scale * r**self.exponent,)

    def compile(self, space):
        fn = self.child.compile(self.child_space)
        sn = self.child_space.seminorms[self.seminorm_index]
        q, k = self.exponent, self.scale

        def powered(t):
            r = sn.evaluate(fn(t))
            if r == 0.0 and q <= 0.0:
                return (0.0,)
            return (k * r**q,)

        return powered

    def profile(self, a, b, space):
        prof = self.child.profile(a, b, self.child_space)
        if prof is None:
            return None
        sn = self.child_space.seminorms[self.seminorm_index]
        out = []
        for lo, hi, vec in prof:
            r = sn.evaluate(vec)
            val = 0.0 if (r == 0.0 and self.exponent <= 0.0) else self.scale * r**self.exponent
            out.append((lo, hi, (val,)))
        return tuple(out)

    def breakpoints(self, a, b):
        return self.child.breakpoints(a, b)

    def to_json(self):
        return {
            "kind": self.kind,
            "child": self.child.to_json(),
            "child_space": self.child_space.to_json(),
            "seminorm_index": self.seminorm_index,
            "exponent": self.exponent,
            "scale": self.scale,
        }


@_register("piecewise-linear")
@dataclass(frozen=True, slots=True)
class PiecewiseLinear(FnNode):
    """Linear interpolation through node values; the exact primitive of a step."""

    breaks: tuple[float, ...]
    nodes: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        breaks = tuple(float(x) for x in self.breaks)
        if len(breaks) != len(self.nodes):
            raise ValueError("need one node value per breakpoint")
        if len(breaks) < 2:
            raise ValueError("need at least two breakpoints")
        if any(x >= y for x, y in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(
            self, "nodes", tuple(tuple(float(c) for c in n) for n in self.nodes)
        )

    def value(self, t, space):
        breaks = self.breaks
        if t <= breaks[0]:
            j = 0
        elif t >= breaks[-1]:
            j = len(breaks) - 2
        else:
            lo, hi = 0, len(breaks) - 1
            while lo + 1 < hi:
                mid = (lo + hi) // 2
                if breaks[mid] <= t:
                    lo = mid
                else:
                    hi = mid
            j = lo
        x0, x1 = breaks[j], breaks[j + 1]
        w = (t - x0) / (x1 - x0)
        n0, n1 = self.nodes[j], self.nodes[j + 1]
        return tuple(a + w * (b - a) for a, b in zip(n0, n1))

    def breakpoints(self, a, b):
        return tuple(x for x in self.breaks[1:-1] if a <= x <= b)

    def to_json(self):
        return {
            "kind": self.kind,
            "breaks": list(self.breaks),
            "nodes": [list(n) for n in self.nodes],
        }


def _profile_value(prof, t):
    for lo, hi, vec in prof:
        if lo <= t < hi:
            return vec
    return prof[-1][2]


def _merge_profiles(profs, combine):
    cuts = sorted({lo for p in profs for lo, _, _ in p} | {p[-1][1] for p in profs})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        vec = combine([_profile_value(p, mid) for p in profs])
        if out and out[-1][2] == vec and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi, vec)
        else:
            out.append((lo, hi, vec))
    return tuple(out)


def _node_from_json(data: dict) -> FnNode:
    kind = data["kind"]
    if kind not in _NODE_KINDS:
        raise ValueError(f"unknown function node kind {kind!r}")
    if kind == "constant":
        return Constant(tuple(data["vector"]))
    if kind == "polynomial":
        return Polynomial(tuple(tuple(cs) for cs in data["coeffs"]))
    if kind == "trig":
        return Trig(tuple(tuple(p) for p in data["params"]))
    if kind == "osc-singular":
        return OscSingular(
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            phase=float(data.get("phase", 0.0)),
            coord=int(data.get("coord", 0)),
            dimension=int(data.get("dimension", 1)),
        )
    if kind == "step":
        return Step(tuple(data["breaks"]), tuple(tuple(p) for p in data["pieces"]))
    if kind == "indicator":
        return Indicator(SubsetSpec.from_json(data["subset"]), tuple(data["vector"]))
    if kind == "sum":
        return Sum(tuple(_node_from_json(c) for c in data["children"]))
    if kind == "scaled":
        return Scaled(float(data["factor"]), _node_from_json(data["child"]))
    if kind == "restricted":
        return Restricted(SubsetSpec.from_json(data["subset"]), _node_from_json(data["child"]))
    if kind == "product":
        return Product(_node_from_json(data["scalar"]), _node_from_json(data["child"]))
    if kind == "rho-power":
        return RhoPower(
            child=_node_from_json(data["child"]),
            child_space=SpaceSpec.from_json(data["child_space"]),
            seminorm_index=int(data["seminorm_index"]),
            exponent=float(data["exponent"]),
            scale=float(data.get("scale", 1.0)),
        )
    return PiecewiseLinear(tuple(data["breaks"]), tuple(tuple(n) for n in data["nodes"]))


# ---------------------------------------------------------------------------
# FunctionSpec


@dataclass(frozen=True, slots=True)
class FunctionSpec:
    """A function on a closed domain with an explicit codomain space."""

    domain: tuple[float, float]
    space: SpaceSpec
    root: FnNode

    def __post_init__(self):
        a, b = self.domain
        if not (a < b):
            raise ValueError("domain must satisfy a < b")

    def value(self, t: float) -> tuple[float, ...]:
        coords = self.root.value(t, self.space)
        if len(coords) != self.space.dimension:
            raise DimensionMismatch(
                f"node produced dimension {len(coords)}, space has {self.space.dimension}"
            )
        return coords

    def vector(self, t: float) -> VectorValue:
        return VectorValue(self.value(t))

    def as_callable(self):
        return self.root.compile(self.space)

    def restricted(self, subset: SubsetSpec) -> "FunctionSpec":
        return FunctionSpec(self.domain, self.space, Restricted(subset, self.root))

    def plus(self, other: "FunctionSpec") -> "FunctionSpec":
        if other.space.dimension != self.space.dimension:
            raise DimensionMismatch("cannot add functions with different codomains")
        return FunctionSpec(self.domain, self.space, Sum((self.root, other.root)))

    def scaled(self, c: float) -> "FunctionSpec":
        return FunctionSpec(self.domain, self.space, Scaled(float(c), self.root))

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain),
            "space": self.space.to_json(),
            "root": self.root.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FunctionSpec":
        return cls(
            domain=tuple(float(x) for x in data["domain"]),
            space=SpaceSpec.from_json(data["space"]),
            root=_node_from_json(data["root"]),
        )


PrimitiveSpec = FunctionSpec


def evaluate(f: FunctionSpec, t: float) -> VectorValue:
    """f(t) with a domain check; deterministic tree walk."""
    a, b = f.domain
    if not (a <= t <= b):
        raise ValueError(f"t={t} outside domain [{a}, {b}]")
    return f.vector(t)


def indicator_restrict(f: FunctionSpec, subset: SubsetSpec) -> FunctionSpec:
    """t -> 1_A(t) * f(t)."""
    return f.restricted(subset)


def step_profile(f: FunctionSpec):
    """Exact piecewise-constant profile ((lo, hi, coords), ...) or None.

    Pieces are right-continuous and cover the domain; isolated points of
    indicator subsets are dropped (measure zero).
    """
    a, b = f.domain
    return f.root.profile(a, b, f.space)


def discontinuities(f: FunctionSpec) -> tuple[float, ...]:
    """Breakpoints, subset boundaries and singular points inside the domain."""
    a, b = f.domain
    return f.root.breakpoints(a, b)


def step_primitive(f: FunctionSpec) -> FunctionSpec:
    """The exact primitive of a step-profile function, as piecewise-linear."""
    prof = step_profile(f)
    if prof is None:
        raise UnsupportedFunction("function has no step profile")
    dim = f.space.dimension
    breaks = [prof[0][0]]
    nodes = [(0.0,) * dim]
    for lo, hi, vec in prof:
        breaks.append(hi)
        nodes.append(tuple(n + c * (hi - lo) for n, c in zip(nodes[-1], vec)))
    return FunctionSpec(f.domain, f.space, PiecewiseLinear(tuple(breaks), tuple(nodes)))


def _seminorm_as_single_coordinate(space: SpaceSpec, i: int):
    """(weight, coordinate) if rho_i(x) == weight * |x_j|, else None."""
    sn = space.seminorms[i]
    if sn.kind == "abs-coordinate":
        return 1.0, sn.index
    if space.dimension == 1:
        if sn.kind == "euclidean-full":
            return 1.0, 0
        if sn.kind == "weighted-sum":
            return sn.weights[0], 0
        if sn.kind == "sup-over-subset":
            return 1.0, 0
    if sn.kind == "weighted-sum":
        nz = [(w, j) for j, w in enumerate(sn.weights) if w != 0.0]
        if len(nz) == 1:
            return nz[0]
    if sn.kind == "sup-over-subset" and len(sn.indices) == 1:
        return 1.0, sn.indices[0]
    return None


def level_set(f: FunctionSpec, i: int, a_level: float) -> SubsetSpec:
    """{t in [a,b] : rho_i(f(t)) >= a_level}, exact for step profiles and
    for polynomial coordinates under single-coordinate seminorms.

    Step profiles yield closed-interval closures of the half-open pieces
    (a measure-zero distinction).  Raises UnsupportedFunction otherwise.
    """
    if a_level <= 0:
        raise ValueError("a_level must be > 0")
    a, b = f.domain
    prof = step_profile(f)
    if prof is not None:
        sn = f.space.seminorms[i]
        ivs = [(lo, hi) for lo, hi, vec in prof if sn.evaluate(vec) >= a_level]
        return SubsetSpec(tuple(ivs))

    reduced = _seminorm_as_single_coordinate(f.space, i)
    if reduced is None or not isinstance(f.root, Polynomial):
        raise UnsupportedFunction(
            "level sets need a step profile or a polynomial coordinate"
        )
    weight, j = reduced
    coeffs = list(f.root.coeffs[j]) if j < len(f.root.coeffs) else [0.0]
    c = a_level / weight
    cuts = {a, b}
    for shift in (-c, c):
        poly = list(coeffs)
        poly[0] = poly[0] - shift if poly else -shift
        roots = np.polynomial.polynomial.polyroots(poly) if len(poly) > 1 else []
        for r in roots:
            if abs(r.imag) < 1e-12 and a < r.real < b:
                cuts.add(float(r.real))
    cuts = sorted(cuts)
    gfun = f.as_callable()
    ivs = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        if weight * abs(gfun(mid)[j]) >= a_level:
            ivs.append((lo, hi))
    return SubsetSpec(tuple(ivs))


# ---------------------------------------------------------------------------
# Built-in derivative/primitive corpus


@dataclass(frozen=True, slots=True)
class DerivativePair:
    """A known pair with F' = f off a null set; ``shifted`` is an alternative
    primitive differing from F by a kernel-valued function (when present)."""

    name: str
    space: SpaceSpec
    f: FunctionSpec
    F: FunctionSpec
    shifted: FunctionSpec | None = None


CORPUS_NAMES = ("smooth-poly", "osc-sing", "finite-support-null", "kernel-shifted")


def hk_derivative_pair(name: str) -> DerivativePair:
    """Golden pairs on [0, 1] exercising differentiation-based integration."""
    dom = (0.0, 1.0)
    if name == "smooth-poly":
        sp = scalar_space()
        f = FunctionSpec(dom, sp, Polynomial(((0.0, 2.0),)))
        F = FunctionSpec(dom, sp, Polynomial(((0.0, 0.0, 1.0),)))
        return DerivativePair(name, sp, f, F)
    if name == "osc-sing":
        # F(x) = x^2 sin(x^-2), F(0) = 0; f = F' off 0 with f(0) = 0:
        # f(x) = 2x sin(x^-2) - 2 x^-1 cos(x^-2)
        sp = scalar_space()
        F = FunctionSpec(dom, sp, OscSingular(alpha=2.0, beta=2.0))
        f = FunctionSpec(
            dom,
            sp,
            Sum(
                (
                    Scaled(2.0, OscSingular(alpha=1.0, beta=2.0)),
                    Scaled(-2.0, OscSingular(alpha=-1.0, beta=2.0, phase=0.5 * math.pi)),
                )
            ),
        )
        return DerivativePair(name, sp, f, F)
    if name == "finite-support-null":
        from .spaces import euclidean_full

        sp = SpaceSpec(2, (euclidean_full(),), "R2-euclidean")
        support = SubsetSpec.of_points((0.1, 0.2, 0.3))
        f = FunctionSpec(dom, sp, Indicator(support, (7.0, 7.0)))
        F = FunctionSpec(dom, sp, Constant((0.0, 0.0)))
        return DerivativePair(name, sp, f, F)
    if name == "kernel-shifted":
        from .spaces import abs_coordinate

        sp = SpaceSpec(2, (abs_coordinate(0),), "R2-first-coordinate")
        f = FunctionSpec(dom, sp, Polynomial(((0.0, 2.0), (0.5,))))
        F = FunctionSpec(dom, sp, Polynomial(((0.0, 0.0, 1.0), (0.0, 0.5))))
        shift = Trig(((0.0, 0.0, 0.0), (1.0, 1.0, 0.0)))  # (0, sin t)
        G = FunctionSpec(dom, sp, Sum((F.root, shift)))
        return DerivativePair(name, sp, f, F, shifted=G)
    raise ValueError(f"unknown corpus pair {name!r}; options: {CORPUS_NAMES}")


# ---------------------------------------------------------------------------
# Interval-point functions


@dataclass(frozen=True, slots=True)
class IntervalPointFn:
    """h([u, v], t).  Kinds:

    - ``theta``:    f(t) * (v - u)                    (vector-valued)
    - ``delta``:    F(v) - F(u)                       (vector-valued)
    - ``theta-minus-delta``: f(t)(v-u) - (F(v)-F(u))  (vector-valued)
    - ``theta-p``:  rho_i(f(t))^p * (v - u)           (real-valued)
    - ``length``:   v - u                             (real-valued)
    """

    kind: str
    domain: tuple[float, float]
    f: FunctionSpec | None = None
    F: FunctionSpec | None = None
    p: float | None = None
    seminorm_index: int | None = None

    @property
    def is_vector_valued(self) -> bool:
        return self.kind in ("theta", "delta", "theta-minus-delta")

    @property
    def space(self) -> SpaceSpec | None:
        if self.kind in ("theta", "theta-p", "theta-minus-delta"):
            return self.f.space
        if self.kind == "delta":
            return self.F.space
        return None

    def value(self, u: float, v: float, t: float):
        if self.kind == "theta":
            return self.f.vector(t).scaled(v - u)
        if self.kind == "delta":
            return self.F.vector(v) - self.F.vector(u)
        if self.kind == "theta-minus-delta":
            return self.f.vector(t).scaled(v - u) - (self.F.vector(v) - self.F.vector(u))
        if self.kind == "theta-p":
            r = self.f.space.rho(self.seminorm_index, self.f.value(t))
            return r**self.p * (v - u)
        return v - u

    def rho_compiled(self, i: int):
        """A closure (u, v, t) -> rho_i(h([u,v],t)); |.| for real-valued kinds."""
        if self.kind == "length":
            return lambda u, v, t: v - u
        if self.kind == "theta-p":
            fn = self.f.as_callable()
            sn = self.f.space.seminorms[self.seminorm_index]
            p = self.p
            return lambda u, v, t: sn.evaluate(fn(t)) ** p * (v - u)
        if self.kind == "theta":
            fn = self.f.as_callable()
            sn = self.f.space.seminorms[i]
            return lambda u, v, t: sn.evaluate(fn(t)) * (v - u)
        if self.kind == "delta":
            Ffn = self.F.as_callable()
            sn = self.F.space.seminorms[i]
            return lambda u, v, t: sn.evaluate(
                tuple(x - y for x, y in zip(Ffn(v), Ffn(u)))
            )
        fn = self.f.as_callable()
        Ffn = self.F.as_callable()
        sn = self.f.space.seminorms[i]

        def residual(u, v, t):
            ell = v - u
            fv = fn(t)
            Fv, Fu = Ffn(v), Ffn(u)
            return sn.evaluate(tuple(c * ell - (x - y) for c, x, y in zip(fv, Fv, Fu)))

        return residual

    def anchors(self) -> tuple[float, ...]:
        """Discontinuity points worth pinning in partition meshes."""
        out = set()
        if self.f is not None:
            out.update(discontinuities(self.f))
        if self.F is not None:
            out.update(discontinuities(self.F))
        return tuple(sorted(out))


def theta(f: FunctionSpec) -> IntervalPointFn:
    return IntervalPointFn("theta", f.domain, f=f)


def delta_of(F: FunctionSpec) -> IntervalPointFn:
    return IntervalPointFn("delta", F.domain, F=F)


def theta_minus_delta(f: FunctionSpec, F: FunctionSpec) -> IntervalPointFn:
    return IntervalPointFn("theta-minus-delta", f.domain, f=f, F=F)


def theta_p(f: FunctionSpec, p: float, seminorm_index: int = 0) -> IntervalPointFn:
    if p < 1:
        raise ValueError("p must be >= 1")
    return IntervalPointFn("theta-p", f.domain, f=f, p=float(p), seminorm_index=seminorm_index)


def length_fn(domain: tuple[float, float]) -> IntervalPointFn:
    return IntervalPointFn("length", tuple(domain))
