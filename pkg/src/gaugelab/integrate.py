"""Riemann sums over tagged partitions and gauge-limit integral estimation.

``hk_integrate`` runs Riemann sums over Cousin partitions of a shrinking
gauge schedule and declares convergence by a successive-difference Cauchy
criterion in every seminorm.  The result is an estimate with per-seminorm
brackets, never a certificate: a stall is reported as inconclusive, not
as non-integrability.  Summation is left-to-right in cell order so runs
are reproducible bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DepthExceeded, DimensionMismatch
from .funcspace import FunctionSpec, IntervalPointFn, SubsetSpec, discontinuities
from .partitions import Gauge, TaggedPartition, cousin_partition, DEFAULT_DEPTH_LIMIT
from .spaces import SpaceSpec, VectorValue, class_equal

__all__ = [
    "IntegralClass",
    "ConvergenceReport",
    "riemann_sum",
    "rho_partial_sum",
    "hk_integrate",
    "skh_residual",
    "interval_additivity_check",
    "AdditivityReport",
]


@dataclass(frozen=True, slots=True)
class IntegralClass:
    """A representative of the integral class z + ker rho, with per-seminorm
    error brackets.  Two values are interchangeable when their representatives
    are class-equal within the summed brackets."""

    representative: VectorValue
    space: SpaceSpec
    bracket: tuple[float, ...]

    def same_class(self, other: "IntegralClass", tol: float = 0.0) -> bool:
        budget = tol + sum(self.bracket) + sum(other.bracket)
        return class_equal(self.space, self.representative, other.representative, budget)

    def to_json(self) -> dict:
        return {
            "representative": list(self.representative.coords),
            "brackets": list(self.bracket),
        }


@dataclass(frozen=True, slots=True)
class StepRecord:
    step: int
    gauge_id: str
    value: VectorValue
    diffs: tuple[float, ...] | None  # None on the first step


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    steps: tuple[StepRecord, ...]
    verdict: str  # converged | stalled | depth-exceeded
    tol: float

    def csv_rows(self):
        rows = []
        for rec in self.steps:
            diffs = rec.diffs if rec.diffs is not None else ()
            rows.append((rec.step, rec.gauge_id) + tuple(diffs))
        return rows


def riemann_sum(f: FunctionSpec, partition: TaggedPartition) -> VectorValue:
    """(D) sum f(t)(v - u) over cells, left to right; full partitions only."""
    if partition.kind != "full":
        raise ValueError("riemann_sum needs a full partition")
    fn = f.as_callable()
    dim = f.space.dimension
    acc = [0.0] * dim
    for (u, v, t) in partition.cells:
        ell = v - u
        vals = fn(t)
        for k in range(dim):
            acc[k] += vals[k] * ell
    return VectorValue(tuple(acc))


def rho_partial_sum(
    h: IntervalPointFn,
    partition: TaggedPartition,
    E: SubsetSpec,
    i: int = 0,
) -> float:
    """(D) sum 1_E(t) * rho_i(h([u,v],t)); partial partitions allowed.

    For real-valued kinds (theta-p, length) the seminorm on the reals is
    absolute value and ``i`` is ignored.
    """
    rho = h.rho_compiled(i)
    contains = E.contains
    acc = 0.0
    for (u, v, t) in partition.cells:
        if contains(t):
            acc += rho(u, v, t)
    return acc


def _schedule_ids(schedule):
    return [f"{k + 1}:{g.describe()}" for k, g in enumerate(schedule)]


def hk_integrate(
    f: FunctionSpec,
    schedule: list[Gauge],
    tol: float,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    interval: tuple[float, float] | None = None,
    stop_early: bool = True,
) -> tuple[IntegralClass, ConvergenceReport]:
    """Riemann sums along a pointwise-decreasing gauge schedule.

    Converged means two successive sums differ by <= tol in every
    seminorm; the representative is the last sum computed and the bracket
    is that last difference.  A schedule exhausted without meeting the
    criterion yields verdict ``stalled`` (inconclusive, not a proof of
    non-integrability).  DepthExceeded from the partitioner propagates.
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    space = f.space
    interval = interval if interval is not None else f.domain
    splits = tuple(x for x in discontinuities(f) if interval[0] < x < interval[1])
    ids = _schedule_ids(schedule)

    records: list[StepRecord] = []
    prev: VectorValue | None = None
    diffs: tuple[float, ...] | None = None
    converged = False
    for k, gauge in enumerate(schedule):
        D = cousin_partition(gauge, interval, depth_limit, split_at=splits)
        value = riemann_sum(f, D)
        if prev is not None:
            gap = value - prev
            diffs = tuple(space.rho(i, gap.coords) for i in range(space.n_seminorms))
        records.append(StepRecord(k + 1, ids[k], value, diffs))
        prev = value
        if diffs is not None and all(d <= tol for d in diffs):
            converged = True
            if stop_early:
                break

    verdict = "converged" if converged else "stalled"
    bracket = diffs if diffs is not None else (float("inf"),) * space.n_seminorms
    integral = IntegralClass(prev, space, bracket)
    return integral, ConvergenceReport(tuple(records), verdict, tol)


def _randomized_refinement(partition, gauge, depth_limit, rng):
    """Split about half the cells at a random interior point and re-bisect
    the halves under the same gauge; the result remains fine."""
    cells = []
    a, b = partition.domain
    for (u, v, t) in partition.cells:
        if rng.random() < 0.5:
            x = u + (v - u) * (0.25 + 0.5 * rng.random())
            if u < x < v:
                for lo, hi in ((u, x), (x, v)):
                    sub = cousin_partition(gauge, (lo, hi), depth_limit)
                    cells.extend(sub.cells)
                continue
        cells.append((u, v, t))
    return TaggedPartition(tuple(cells), "full", (a, b))


def skh_residual(
    f: FunctionSpec,
    F: FunctionSpec,
    gauge: Gauge,
    samples: int = 1,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    seed: int = 0,
    interval: tuple[float, float] | None = None,
) -> tuple[float, ...]:
    """Max over sampled fine partitions of (D) sum rho(F(v)-F(u)-f(t)(v-u)),
    per seminorm: an empirical stand-in for the gauge-limited variation of
    the residual interval-point function.

    Partitions: the Cousin partition of the gauge and of slightly shrunk
    copies, plus seeded randomized refinements.  The sample set depends
    only on (gauge, samples, seed), never on f or F, so primitives
    differing by a kernel-valued shift see identical partitions.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if f.space.dimension != F.space.dimension:
        raise DimensionMismatch("f and F must share a codomain dimension")
    space = f.space
    interval = interval if interval is not None else f.domain
    splits = tuple(
        x
        for x in sorted(set(discontinuities(f)) | set(discontinuities(F)))
        if interval[0] < x < interval[1]
    )
    rng = random.Random(seed)

    partitions = []
    base = cousin_partition(gauge, interval, depth_limit, split_at=splits)
    partitions.append(base)
    shrink = 1.0
    while len(partitions) < samples:
        shrink *= 0.8 + 0.15 * rng.random()
        g = gauge.scaled(shrink)
        D = cousin_partition(g, interval, depth_limit, split_at=splits)
        partitions.append(_randomized_refinement(D, g, depth_limit, rng))

    ffn = f.as_callable()
    Ffn = F.as_callable()
    dim = space.dimension
    best = [0.0] * space.n_seminorms
    for D in partitions:
        acc = [0.0] * space.n_seminorms
        for (u, v, t) in D.cells:
            ell = v - u
            fv = ffn(t)
            Fv = Ffn(v)
            Fu = Ffn(u)
            resid = tuple(Fv[k] - Fu[k] - fv[k] * ell for k in range(dim))
            for i in range(space.n_seminorms):
                acc[i] += space.rho(i, resid)
        for i in range(space.n_seminorms):
            if acc[i] > best[i]:
                best[i] = acc[i]
    return tuple(best)


@dataclass(frozen=True, slots=True)
class AdditivityReport:
    points: tuple[float, ...]
    whole: IntegralClass
    pieces: tuple[IntegralClass, ...]
    piece_sum: VectorValue
    gap: tuple[float, ...]  # per-seminorm rho(whole - sum of pieces)
    tol_budget: float
    passed: bool
    verdict: str  # ok | inconclusive

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "whole": self.whole.to_json(),
            "pieces": [p.to_json() for p in self.pieces],
            "piece_sum": list(self.piece_sum.coords),
            "gap": list(self.gap),
            "tol_budget": self.tol_budget,
            "passed": self.passed,
            "verdict": self.verdict,
        }


def interval_additivity_check(
    f: FunctionSpec,
    schedule: list[Gauge],
    points,
    tol: float,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> AdditivityReport:
    """Whether the integral over [a, b] equals, as a class, the sum of the
    integrals over consecutive pieces a = x_0 < ... < x_n = b."""
    points = tuple(float(x) for x in points)
    a, b = f.domain
    if len(points) < 2 or points[0] != a or points[-1] != b:
        raise ValueError("points must run from a to b")
    if any(x >= y for x, y in zip(points, points[1:])):
        raise ValueError("points must be strictly increasing")

    whole, rep_whole = hk_integrate(f, schedule, tol, depth_limit)
    pieces = []
    stalled = rep_whole.verdict != "converged"
    for lo, hi in zip(points, points[1:]):
        piece, rep = hk_integrate(f, schedule, tol, depth_limit, interval=(lo, hi))
        stalled = stalled or rep.verdict != "converged"
        pieces.append(piece)

    total = pieces[0].representative
    for piece in pieces[1:]:
        total = total + piece.representative
    budget = tol + sum(whole.bracket) + sum(sum(p.bracket) for p in pieces)
    space = f.space
    gapvec = whole.representative - total
    gap = tuple(space.rho(i, gapvec.coords) for i in range(space.n_seminorms))
    passed = all(g <= budget for g in gap)
    return AdditivityReport(
        points=points,
        whole=whole,
        pieces=tuple(pieces),
        piece_sum=total,
        gap=gap,
        tol_budget=budget,
        passed=passed and not stalled,
        verdict="inconclusive" if stalled else "ok",
    )
