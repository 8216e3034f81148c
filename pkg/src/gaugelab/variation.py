"""Variation estimation: Var(h, E, delta) at a fixed gauge and its
gauge-limit, the variational outer measure.

``var_fixed_gauge`` lower-bounds the supremum over delta-fine partial
partitions by local search: start from a Cousin partition whose mesh is
aligned to the endpoints of E and to the discontinuities of h, then
repeatedly (a) re-tag each cell with the best fineness-preserving tag
among {u, mid, v}, (b) bisect the cell with the largest estimated gain,
(c) drop cells whose tags fall outside E.  On step-profile functions the
aligned start is already optimal and the search leaves it exact.

``variational_measure`` runs the search along a pointwise-decreasing
schedule and reports the last estimate: an anytime proxy for the inf
over all gauges, bracketed rather than certified.  Pinched schedules
(``pinch_schedule``) put anchor points at discontinuities so that
boundary cells shrink to the pinch width and estimates on step corpora
are exact to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .funcspace import FunctionSpec, IntervalPointFn, SubsetSpec, discontinuities, theta, theta_p
from .partitions import (
    DEFAULT_DEPTH_LIMIT,
    Gauge,
    anchor_gauge,
    constant_gauge,
    cousin_partition,
)

__all__ = [
    "VariationBracket",
    "var_fixed_gauge",
    "variational_measure",
    "additivity_check",
    "VariationAdditivityReport",
    "ascending_limit_check",
    "AscendingReport",
    "pinch_schedule",
    "uniform_schedule",
    "auto_schedule",
]

MONOTONE_SLACK = 1e-9


@dataclass(frozen=True, slots=True)
class VariationBracket:
    """Per-step estimates along a shrinking schedule; ``reported`` is the
    last value.  ``monotone_ok`` records whether the sequence was observed
    non-increasing up to search noise."""

    steps: tuple[tuple[str, float], ...]
    reported: float
    monotone_ok: bool
    search_budget: int

    def estimates(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.steps)

    def converged(self, stall_tol: float) -> bool:
        """Whether the last two estimates agree within stall_tol (absolute,
        plus the same amount relatively)."""
        if len(self.steps) < 2:
            return False
        a, b = self.steps[-2][1], self.steps[-1][1]
        return abs(a - b) <= stall_tol * max(1.0, abs(b))

    def csv_rows(self):
        return [(k + 1, gid, est) for k, (gid, est) in enumerate(self.steps)]

    def to_json(self) -> dict:
        return {
            "steps": [[gid, est] for gid, est in self.steps],
            "reported": self.reported,
            "monotone_ok": self.monotone_ok,
            "search_budget": self.search_budget,
        }


def _search_span(h: IntervalPointFn, E: SubsetSpec):
    a, b = h.domain
    bounds = E.boundary_points()
    if not bounds:
        return None
    lo = max(a, min(bounds))
    hi = min(b, max(bounds))
    if lo >= hi:
        return a, b  # point-only sets: partition the whole domain
    return lo, hi


def var_fixed_gauge(
    h: IntervalPointFn,
    E: SubsetSpec,
    gauge: Gauge,
    budget: int = 3,
    seed: int = 0,
    seminorm_index: int = 0,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> float:
    """A lower-bound estimate of sup over delta-fine partial partitions of
    (D) sum 1_E(t) rho(h([u,v],t)).

    Deterministic: candidate order is fixed and ties go to the earliest
    candidate; ``seed`` is accepted for provenance and does not perturb
    the search.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    del seed  # deterministic search; parameter kept for run provenance
    span = _search_span(h, E)
    if span is None:
        return 0.0
    rho = h.rho_compiled(seminorm_index)
    contains = E.contains
    delta = gauge.as_callable()

    anchors = set(h.anchors())
    anchors.update(E.boundary_points())
    D = cousin_partition(gauge, span, depth_limit, split_at=sorted(anchors))

    def contribution(u, v, t):
        return rho(u, v, t) if contains(t) else 0.0

    def best_tag(u, v, t_now):
        """Best fineness-preserving tag among the current one and {u, mid, v}."""
        best_t, best_val = t_now, contribution(u, v, t_now)
        for cand in (u, 0.5 * (u + v), v):
            if cand == t_now:
                continue
            d = delta(cand)
            if cand - d < u and v < cand + d:
                val = contribution(u, v, cand)
                if val > best_val:
                    best_t, best_val = cand, val
        return best_t, best_val

    cells = [(u, v, t) for (u, v, t) in D.cells]
    values = []
    for round_idx in range(budget):
        # (a) re-tag
        retagged = []
        values = []
        for (u, v, t) in cells:
            t2, val = best_tag(u, v, t)
            retagged.append((u, v, t2))
            values.append(val)
        cells = retagged

        # (b) bisect the single cell with the largest estimated gain
        best_gain, best_idx, best_split = 0.0, -1, None
        for idx, (u, v, t) in enumerate(cells):
            m = 0.5 * (u + v)
            if not (u < m < v):
                continue
            left_t, left_val = best_tag(u, m, min(t, m) if u <= t <= m else u)
            right_t, right_val = best_tag(m, v, max(t, m) if m <= t <= v else v)
            d = delta(left_t)
            if not (left_t - d < u and m < left_t + d):
                continue
            d = delta(right_t)
            if not (right_t - d < m and v < right_t + d):
                continue
            gain = left_val + right_val - values[idx]
            if gain > best_gain + MONOTONE_SLACK:
                best_gain = gain
                best_idx = idx
                best_split = ((u, m, left_t), (m, v, right_t))
        if best_idx >= 0:
            cells[best_idx : best_idx + 1] = list(best_split)
            values[best_idx : best_idx + 1] = [
                contribution(*best_split[0]),
                contribution(*best_split[1]),
            ]

        # (c) drop cells tagged outside E
        kept = [(cell, val) for cell, val in zip(cells, values) if contains(cell[2])]
        cells = [cell for cell, _ in kept]
        values = [val for _, val in kept]
        if best_idx < 0 and round_idx > 0:
            break  # search is stationary

    return sum(values)


def variational_measure(
    h: IntervalPointFn,
    E: SubsetSpec,
    schedule: list[Gauge],
    budget: int = 3,
    seed: int = 0,
    seminorm_index: int = 0,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> VariationBracket:
    """Var estimates along the schedule; ``reported`` is the value at the
    finest gauge, an empirical proxy for the inf over all gauges."""
    if not schedule:
        raise ValueError("schedule must be nonempty")
    steps = []
    prev = None
    monotone = True
    for k, gauge in enumerate(schedule):
        est = var_fixed_gauge(h, E, gauge, budget, seed, seminorm_index, depth_limit)
        if prev is not None and est > prev + MONOTONE_SLACK * max(1.0, abs(prev)):
            monotone = False
        prev = est
        steps.append((f"{k + 1}:{gauge.describe()}", est))
    return VariationBracket(tuple(steps), steps[-1][1], monotone, budget)


@dataclass(frozen=True, slots=True)
class VariationAdditivityReport:
    whole: float
    piece_values: tuple[float, ...]
    piece_sum: float
    gap: float
    passed: bool
    non_covering_values: tuple[float, ...] | None
    non_covering_ok: bool | None

    def to_json(self) -> dict:
        return {
            "whole": self.whole,
            "piece_values": list(self.piece_values),
            "piece_sum": self.piece_sum,
            "gap": self.gap,
            "passed": self.passed,
            "non_covering_values": (
                None if self.non_covering_values is None else list(self.non_covering_values)
            ),
            "non_covering_ok": self.non_covering_ok,
        }


def additivity_check(
    f: FunctionSpec,
    points,
    schedule: list[Gauge],
    tol: float,
    budget: int = 3,
    seminorm_index: int = 0,
    non_covering=None,
) -> VariationAdditivityReport:
    """Additivity of the variational measure of theta(f) over a split
    a = x_0 < ... < x_n = b, plus the sub-additivity inequality for an
    optional non-covering family of disjoint closed intervals."""
    points = tuple(float(x) for x in points)
    a, b = f.domain
    if len(points) < 2 or points[0] != a or points[-1] != b:
        raise ValueError("points must run from a to b")
    if any(x >= y for x, y in zip(points, points[1:])):
        raise ValueError("points must be strictly increasing")

    h = theta(f)
    whole = variational_measure(
        h, SubsetSpec.interval(a, b), schedule, budget, seminorm_index=seminorm_index
    ).reported
    piece_values = tuple(
        variational_measure(
            h, SubsetSpec.interval(lo, hi), schedule, budget, seminorm_index=seminorm_index
        ).reported
        for lo, hi in zip(points, points[1:])
    )
    piece_sum = sum(piece_values)
    gap = abs(whole - piece_sum)

    nc_values = None
    nc_ok = None
    if non_covering is not None:
        ivs = sorted((float(lo), float(hi)) for lo, hi in non_covering)
        for (l1, h1), (l2, h2) in zip(ivs, ivs[1:]):
            if h1 > l2:
                raise ValueError("non-covering family must be non-overlapping")
        nc_values = tuple(
            variational_measure(
                h, SubsetSpec.interval(lo, hi), schedule, budget, seminorm_index=seminorm_index
            ).reported
            for lo, hi in ivs
        )
        nc_ok = sum(nc_values) <= whole + tol
    return VariationAdditivityReport(
        whole=whole,
        piece_values=piece_values,
        piece_sum=piece_sum,
        gap=gap,
        passed=gap <= tol,
        non_covering_values=nc_values,
        non_covering_ok=nc_ok,
    )


@dataclass(frozen=True, slots=True)
class AscendingReport:
    values: tuple[float, ...]
    union_value: float
    monotone_ok: bool
    limit_ok: bool
    passed: bool

    def to_json(self) -> dict:
        return {
            "values": list(self.values),
            "union_value": self.union_value,
            "monotone_ok": self.monotone_ok,
            "limit_ok": self.limit_ok,
            "passed": self.passed,
        }


def ascending_limit_check(
    f: FunctionSpec,
    p: float,
    sets,
    schedule: list[Gauge],
    tol: float,
    budget: int = 3,
    seminorm_index: int = 0,
) -> AscendingReport:
    """Measures of theta-p(f) along an ascending chain of sets: the
    sequence must be non-decreasing within tol and end within tol of the
    union's value."""
    sets = list(sets)
    if len(sets) < 2:
        raise ValueError("need at least two sets")
    for smaller, larger in zip(sets, sets[1:]):
        if not larger.contains_subset(smaller):
            raise ValueError("sets must be ascending")
    h = theta_p(f, p, seminorm_index)
    values = tuple(
        variational_measure(h, A, schedule, budget, seminorm_index=seminorm_index).reported
        for A in sets
    )
    union = sets[0]
    for A in sets[1:]:
        union = union.union(A)
    union_value = variational_measure(
        h, union, schedule, budget, seminorm_index=seminorm_index
    ).reported
    monotone_ok = all(y >= x - tol for x, y in zip(values, values[1:]))
    limit_ok = abs(values[-1] - union_value) <= tol
    return AscendingReport(values, union_value, monotone_ok, limit_ok, monotone_ok and limit_ok)


def pinch_schedule(
    anchors,
    domain: tuple[float, float],
    narrow: float = 1e-12,
    base: float = 0.05,
    factor: float = 0.5,
    steps: int = 3,
) -> list[Gauge]:
    """Anchored gauges with a fixed pinch width and shrinking base.

    Cells at the anchors collapse to the pinch width from the first step,
    so discontinuity and set-boundary cells contribute O(narrow); away
    from anchors the base width shrinks by ``factor`` per step.
    """
    anchors = tuple(sorted(set(float(x) for x in anchors)))
    if not (0.0 < factor < 1.0):
        raise ValueError("factor must lie in (0, 1)")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = []
    for k in range(steps):
        b = base * factor**k
        out.append(anchor_gauge(anchors, min(narrow, b), b, domain))
    return out


def uniform_schedule(
    domain: tuple[float, float],
    base: float = 0.05,
    factor: float = 0.5,
    steps: int = 3,
) -> list[Gauge]:
    """Constant gauges base * factor^k, k = 0..steps-1."""
    if not (0.0 < factor < 1.0):
        raise ValueError("factor must lie in (0, 1)")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return [constant_gauge(base * factor**k, domain) for k in range(steps)]


def auto_schedule(
    f: FunctionSpec,
    E: SubsetSpec | None = None,
    narrow: float = 1e-12,
    base: float = 0.05,
    factor: float = 0.5,
    steps: int = 3,
) -> list[Gauge]:
    """A pinch schedule anchored at f's discontinuities and E's endpoints."""
    anchors = set(discontinuities(f))
    if E is not None:
        anchors.update(E.boundary_points())
    return pinch_schedule(sorted(anchors), f.domain, narrow, base, factor, steps)
