"""Gauges, tagged partitions, fineness checking, and Cousin bisection.

A gauge is a strictly positive closed-form rule t -> delta(t) on [a, b].
A tagged partition is an ordered list of non-overlapping tagged cells
([u, v], t) with t in [u, v]; it is delta-fine when every cell satisfies
[u, v] subset (t - delta(t), t + delta(t)) with strict inequalities.

``cousin_partition`` produces a fine full partition constructively: a
candidate interval is accepted with the first tag among {u, mid, v} that
works, otherwise it is bisected at the midpoint.  For point-anchored
gauges the anchor points are pre-split into the mesh: dyadic bisection
cannot land on an arbitrary anchor, and any cell covering an anchor in
its interior is untaggable, so without the pre-split the recursion
cannot terminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DepthExceeded

__all__ = [
    "Gauge",
    "TaggedPartition",
    "constant_gauge",
    "affine_floor_gauge",
    "anchor_gauge",
    "table_gauge",
    "is_fine",
    "cousin_partition",
    "shrink_schedule",
    "partition_csv_rows",
]

DEFAULT_DEPTH_LIMIT = 60


@dataclass(frozen=True, slots=True)
class Gauge:
    """A positive rule delta on a fixed domain, scaled by a factor in (0, 1].

    Rules:

    - ``constant``: delta(t) = value
    - ``affine-floor``: delta(t) = max(slope * |t - anchor|, floor_width)
    - ``point-anchored``: delta(p) = narrow at each anchor p; elsewhere
      delta(t) = base * min(1, (dist(t, P) / base) ** falloff).  The
      off-anchor value never exceeds the distance to the anchor set, so a
      fine cell covering an anchor must be tagged at it (the trap that
      forces tags); ``falloff`` steepens the approach for integrands that
      oscillate faster than linearly near the anchors.  Empty anchor sets
      degenerate to the constant ``base``.
    - ``table``: piecewise constant over a mesh spanning the domain
      (right-continuous; the last mesh point belongs to the last piece)

    The evaluated gauge is ``scale`` times the rule; shrink schedules
    reuse the rule and only decrease the scale, keeping every member
    serializable.
    """

    rule: str
    domain: tuple[float, float]
    scale: float = 1.0
    value: float | None = None
    slope: float | None = None
    floor_width: float | None = None
    anchor: float | None = None
    points: tuple[float, ...] | None = None
    narrow: float | None = None
    base: float | None = None
    falloff: float = 1.0
    mesh: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        a, b = self.domain
        if not (a < b):
            raise ValueError("domain must satisfy a < b")
        if not (0.0 < self.scale <= 1.0):
            raise ValueError("scale must lie in (0, 1]")
        if self.rule == "constant":
            if self.value is None or self.value <= 0:
                raise ValueError("constant gauge needs value > 0")
        elif self.rule == "affine-floor":
            if self.slope is None or self.slope < 0:
                raise ValueError("affine-floor needs slope >= 0")
            if self.floor_width is None or self.floor_width <= 0:
                raise ValueError("affine-floor needs floor_width > 0")
            if self.anchor is None:
                raise ValueError("affine-floor needs an anchor point")
        elif self.rule == "point-anchored":
            if self.narrow is None or self.narrow <= 0:
                raise ValueError("point-anchored needs narrow > 0")
            if self.base is None or self.base <= 0:
                raise ValueError("point-anchored needs base > 0")
            if self.narrow > self.base:
                raise ValueError("narrow must not exceed base")
            if self.falloff < 1.0:
                raise ValueError("falloff must be >= 1")
            pts = tuple(sorted(set(float(p) for p in (self.points or ()))))
            object.__setattr__(self, "points", pts)
        elif self.rule == "table":
            if not self.mesh or not self.values:
                raise ValueError("table gauge needs mesh and values")
            mesh = tuple(float(m) for m in self.mesh)
            vals = tuple(float(v) for v in self.values)
            if len(mesh) != len(vals) + 1:
                raise ValueError("table gauge needs len(mesh) == len(values) + 1")
            if any(x >= y for x, y in zip(mesh, mesh[1:])):
                raise ValueError("table mesh must be strictly increasing")
            if any(v <= 0 for v in vals):
                raise ValueError("table values must be > 0")
            object.__setattr__(self, "mesh", mesh)
            object.__setattr__(self, "values", vals)
        else:
            raise ValueError(f"unknown gauge rule {self.rule!r}")

    def evaluate(self, t: float) -> float:
        return self.scale * self._rule_value(t)

    def _rule_value(self, t: float) -> float:
        if self.rule == "constant":
            return self.value
        if self.rule == "affine-floor":
            return max(self.slope * abs(t - self.anchor), self.floor_width)
        if self.rule == "point-anchored":
            if not self.points:
                return self.base
            dist = min(abs(t - p) for p in self.points)
            if dist == 0.0:
                return self.narrow
            if dist >= self.base:
                return self.base
            return self.base * (dist / self.base) ** self.falloff
        # table: right-continuous lookup; clamp to the spanned range
        mesh = self.mesh
        if t <= mesh[0]:
            return self.values[0]
        if t >= mesh[-1]:
            return self.values[-1]
        lo, hi = 0, len(mesh) - 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if mesh[mid] <= t:
                lo = mid
            else:
                hi = mid
        return self.values[lo]

    def as_callable(self):
        """A closure specialized to the rule; avoids per-call dispatch in hot loops."""
        s = self.scale
        if self.rule == "constant":
            v = s * self.value
            return lambda t: v
        if self.rule == "affine-floor":
            slope, floor, anchor = s * self.slope, s * self.floor_width, self.anchor
            return lambda t: max(slope * abs(t - anchor), floor)
        if self.rule == "point-anchored":
            if not self.points:
                v = s * self.base
                return lambda t: v
            pts, narrow, base, fo = self.points, s * self.narrow, self.base, self.falloff
            sbase = s * self.base

            if fo == 1.0:

                def linear(t):
                    d = min(abs(t - p) for p in pts)
                    if d == 0.0:
                        return narrow
                    return sbase if d >= base else s * d

                return linear

            def powered(t):
                d = min(abs(t - p) for p in pts)
                if d == 0.0:
                    return narrow
                if d >= base:
                    return sbase
                return sbase * (d / base) ** fo

            return powered
        return lambda t: s * self._rule_value(t)

    def scaled(self, factor: float) -> "Gauge":
        """The pointwise multiple factor * delta; factor must lie in (0, 1]."""
        if not (0.0 < factor <= 1.0):
            raise ValueError("factor must lie in (0, 1]")
        return replace(self, scale=self.scale * factor)

    def anchor_points(self) -> tuple[float, ...]:
        if self.rule == "point-anchored":
            return self.points
        return ()

    def to_json(self) -> dict:
        out: dict = {"rule": self.rule, "domain": list(self.domain), "scale": self.scale}
        if self.rule == "constant":
            out["params"] = {"value": self.value}
        elif self.rule == "affine-floor":
            out["params"] = {
                "slope": self.slope,
                "floor_width": self.floor_width,
                "anchor": self.anchor,
            }
        elif self.rule == "point-anchored":
            out["params"] = {
                "points": list(self.points),
                "narrow": self.narrow,
                "base": self.base,
                "falloff": self.falloff,
            }
        else:
            out["params"] = {"mesh": list(self.mesh), "values": list(self.values)}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Gauge":
        rule = data["rule"]
        domain = tuple(float(x) for x in data["domain"])
        scale = float(data.get("scale", 1.0))
        p = data.get("params", {})
        if rule == "constant":
            return cls(rule, domain, scale, value=float(p["value"]))
        if rule == "affine-floor":
            return cls(
                rule,
                domain,
                scale,
                slope=float(p["slope"]),
                floor_width=float(p["floor_width"]),
                anchor=float(p["anchor"]),
            )
        if rule == "point-anchored":
            return cls(
                rule,
                domain,
                scale,
                points=tuple(p.get("points", ())),
                narrow=float(p["narrow"]),
                base=float(p["base"]),
                falloff=float(p.get("falloff", 1.0)),
            )
        return cls(
            rule,
            domain,
            scale,
            mesh=tuple(p["mesh"]),
            values=tuple(p["values"]),
        )

    def describe(self) -> str:
        if self.rule == "constant":
            core = f"constant({self.value:g})"
        elif self.rule == "affine-floor":
            core = f"affine-floor(s={self.slope:g},m={self.floor_width:g},t0={self.anchor:g})"
        elif self.rule == "point-anchored":
            core = (
                f"anchored(n={len(self.points)},w={self.narrow:g},"
                f"B={self.base:g},q={self.falloff:g})"
            )
        else:
            core = f"table({len(self.values)} pieces)"
        return f"{core}@{self.scale:.6g}"


def constant_gauge(value: float, domain: tuple[float, float]) -> Gauge:
    return Gauge("constant", tuple(domain), value=float(value))


def affine_floor_gauge(
    slope: float, floor_width: float, anchor: float, domain: tuple[float, float]
) -> Gauge:
    return Gauge(
        "affine-floor",
        tuple(domain),
        slope=float(slope),
        floor_width=float(floor_width),
        anchor=float(anchor),
    )


def anchor_gauge(
    points,
    narrow: float,
    base: float,
    domain: tuple[float, float],
    falloff: float = 1.0,
) -> Gauge:
    """A gauge that forces fine partitions to tag each anchor point.

    delta equals ``narrow`` exactly at the anchors and stays below the
    distance to the anchor set elsewhere, so every fine cell covering an
    anchor is tagged at it and has length < 2 * narrow.
    """
    if narrow <= 0 or base <= 0:
        raise ValueError("narrow and base must be > 0")
    if narrow > base:
        raise ValueError("narrow must not exceed base")
    return Gauge(
        "point-anchored",
        tuple(domain),
        points=tuple(points),
        narrow=float(narrow),
        base=float(base),
        falloff=float(falloff),
    )


def table_gauge(mesh, values, domain: tuple[float, float] | None = None) -> Gauge:
    mesh = tuple(float(m) for m in mesh)
    if domain is None:
        domain = (mesh[0], mesh[-1])
    return Gauge("table", tuple(domain), mesh=mesh, values=tuple(values))


@dataclass(frozen=True, slots=True)
class TaggedPartition:
    """Ordered tagged cells (u, v, t); ``kind`` is ``full`` or ``partial``.

    Full partitions tile the domain exactly (shared endpoints compare
    equal as floats; bisection midpoints make that exact in practice).
    """

    cells: tuple[tuple[float, float, float], ...]
    kind: str
    domain: tuple[float, float]

    def __post_init__(self):
        a, b = self.domain
        if self.kind not in ("full", "partial"):
            raise ValueError("kind must be 'full' or 'partial'")
        if not self.cells and self.kind == "full":
            raise ValueError("a full partition needs at least one cell")
        prev_v = None
        for (u, v, t) in self.cells:
            if not (u < v):
                raise ValueError(f"degenerate cell [{u}, {v}]")
            if not (u <= t <= v):
                raise ValueError(f"tag {t} outside its cell [{u}, {v}]")
            if u < a or v > b:
                raise ValueError(f"cell [{u}, {v}] outside domain [{a}, {b}]")
            if prev_v is not None and u < prev_v:
                raise ValueError("cells overlap or are out of order")
            prev_v = v
        if self.kind == "full":
            if self.cells[0][0] != a or self.cells[-1][1] != b:
                raise ValueError("full partition must span the domain")
            for (_, v, _), (u2, _, _) in zip(self.cells, self.cells[1:]):
                if v != u2:
                    raise ValueError("full partition has a gap")

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def total_length(self) -> float:
        return sum(v - u for u, v, _ in self.cells)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "domain": list(self.domain),
            "cells": [[u, v, t] for (u, v, t) in self.cells],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TaggedPartition":
        return cls(
            cells=tuple((float(u), float(v), float(t)) for u, v, t in data["cells"]),
            kind=data["kind"],
            domain=tuple(float(x) for x in data["domain"]),
        )


def partition_csv_rows(partition: TaggedPartition):
    """Rows (u, v, t) for CSV export."""
    return [(u, v, t) for (u, v, t) in partition.cells]


def is_fine(partition: TaggedPartition, gauge: Gauge) -> bool:
    """Whether every cell satisfies [u, v] subset (t - delta(t), t + delta(t))."""
    a, b = gauge.domain
    delta = gauge.as_callable()
    for (u, v, t) in partition.cells:
        if u < a or v > b:
            raise ValueError(f"cell [{u}, {v}] outside gauge domain [{a}, {b}]")
        d = delta(t)
        if not (t - d < u and v < t + d):
            return False
    return True


def _bisect_segment(lo, hi, delta, depth_limit, out):
    """Greedy bisection of one segment; cells appended to ``out`` left-to-right."""
    stack = [(lo, hi, 0)]
    while stack:
        u, v, depth = stack.pop()
        accepted = False
        for t in (u, 0.5 * (u + v), v):
            d = delta(t)
            if t - d < u and v < t + d:
                out.append((u, v, t))
                accepted = True
                break
        if accepted:
            continue
        if depth >= depth_limit:
            raise DepthExceeded(
                f"gauge unresolved at depth {depth_limit} on [{u}, {v}]"
            )
        m = 0.5 * (u + v)
        if not (u < m < v):
            raise DepthExceeded(
                f"cell [{u}, {v}] below float resolution before acceptance"
            )
        # LIFO: push right first so the left half is processed next
        stack.append((m, v, depth + 1))
        stack.append((u, m, depth + 1))
    return out


def cousin_partition(
    gauge: Gauge,
    interval: tuple[float, float] | None = None,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    split_at=(),
) -> TaggedPartition:
    """A fine full partition of ``interval`` (default: the gauge domain).

    Candidate tags are tried in the order {u, mid, v}; the first tag with
    [u, v] strictly inside (t - delta(t), t + delta(t)) wins, otherwise
    the interval is bisected at its midpoint.  The mesh is pre-split at
    ``split_at`` points and at the gauge's anchor points; each segment is
    bisected independently and the cells concatenate left-to-right.

    Raises DepthExceeded when a segment cannot be resolved within
    ``depth_limit`` bisections.
    """
    if depth_limit < 1:
        raise ValueError("depth_limit must be >= 1")
    a, b = interval if interval is not None else gauge.domain
    if not (a < b):
        raise ValueError("interval must satisfy a < b")
    ga, gb = gauge.domain
    if a < ga or b > gb:
        raise ValueError("interval outside gauge domain")

    cuts = set()
    for p in tuple(split_at) + gauge.anchor_points():
        if a < p < b:
            cuts.add(float(p))
    mesh = [a] + sorted(cuts) + [b]

    delta = gauge.as_callable()
    cells: list[tuple[float, float, float]] = []
    for lo, hi in zip(mesh, mesh[1:]):
        _bisect_segment(lo, hi, delta, depth_limit, cells)
    return TaggedPartition(tuple(cells), "full", (a, b))


def shrink_schedule(initial: Gauge, factor: float, steps: int) -> list[Gauge]:
    """Gauges factor^k * delta_0 for k = 1..steps; pointwise strictly decreasing."""
    if not (0.0 < factor < 1.0):
        raise ValueError("factor must lie in (0, 1)")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return [initial.scaled(factor**k) for k in range(1, steps + 1)]


def check_pointwise_decreasing(schedule, n_samples: int = 65) -> bool:
    """Sample-grid check that each gauge dominates the next pointwise."""
    if not schedule:
        return True
    a, b = schedule[0].domain
    pts = [a + (b - a) * i / (n_samples - 1) for i in range(n_samples)]
    for g in schedule:
        pts.extend(g.anchor_points())
    for g1, g2 in zip(schedule, schedule[1:]):
        d1, d2 = g1.as_callable(), g2.as_callable()
        for t in pts:
            if a <= t <= b and d2(t) > d1(t) + 1e-15:
                return False
    return True
