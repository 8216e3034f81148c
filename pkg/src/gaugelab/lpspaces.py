"""U^p seminorms, dual witnesses, and the inequality suite.

The U^p seminorm of f over A is the p-th root of the variational measure
of the interval-point function rho(f(t))^p (v - u) on A.  Membership in
L^p additionally requires a small residual against a candidate
primitive.  All inequality checks report (lhs, rhs, margin, pass) and
lean on the variation estimator; on step-profile corpora the estimates
are exact to rounding, so equality contracts hold at 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnsupportedFunction
from .funcspace import (
    FunctionSpec,
    Product,
    RhoPower,
    Step,
    SubsetSpec,
    discontinuities,
    indicator_restrict,
    level_set,
    step_profile,
    theta,
    theta_p,
)
from .integrate import skh_residual
from .partitions import Gauge
from .spaces import scalar_space
from .variation import VariationBracket, auto_schedule, variational_measure

__all__ = [
    "LpReport",
    "MarginReport",
    "ChebyshevReport",
    "FatouReport",
    "up_seminorm",
    "dual_witness",
    "holder_margin",
    "minkowski_margin",
    "embedding_margin",
    "chebyshev_check",
    "fatou_check",
    "lp_membership",
]

DEFAULT_STALL_TOL = 1e-3


@dataclass(frozen=True, slots=True)
class LpReport:
    """U^p seminorm value with membership flags.

    ``lp_member`` is the conjunction of upper integrability (the estimate
    stabilized) and a small primitive residual; it is None when no
    primitive was checked.
    """

    p: float
    seminorm_index: int
    value: float
    bracket: VariationBracket
    upper_integrable: bool
    skh_ok: bool | None = None
    residual: float | None = None

    @property
    def lp_member(self) -> bool | None:
        if self.skh_ok is None:
            return None
        return self.upper_integrable and self.skh_ok

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "seminorm_index": self.seminorm_index,
            "value": self.value,
            "bracket": self.bracket.to_json(),
            "upper_integrable": self.upper_integrable,
            "skh_ok": self.skh_ok,
            "lp_member": self.lp_member,
            "residual": self.residual,
        }


@dataclass(frozen=True, slots=True)
class MarginReport:
    check: str
    lhs: float
    rhs: float
    tol: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_row(self):
        return (self.check, self.lhs, self.rhs, self.margin, self.passed)


def _schedule_for(f: FunctionSpec, A: SubsetSpec, schedule):
    return schedule if schedule is not None else auto_schedule(f, A)


def up_seminorm(
    f: FunctionSpec,
    A: SubsetSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
    stall_tol: float = DEFAULT_STALL_TOL,
) -> LpReport:
    """||f|| in U^p over A: the 1/p-th root of the reported variational
    measure of theta-p(f).  ``upper_integrable`` records whether the
    schedule stabilized within ``stall_tol``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    schedule = _schedule_for(f, A, schedule)
    bracket = variational_measure(theta_p(f, p, i), A, schedule, budget, seminorm_index=i)
    value = bracket.reported ** (1.0 / p)
    return LpReport(p, i, value, bracket, bracket.converged(stall_tol))


def _profile_norm_exact(prof, A: SubsetSpec, p: float, sn) -> float:
    total = 0.0
    for lo, hi, vec in prof:
        length = SubsetSpec.interval(lo, hi).intersect(A).measure
        if length > 0.0:
            total += sn.evaluate(vec) ** p * length
    return total ** (1.0 / p)


def dual_witness(
    f: FunctionSpec,
    A: SubsetSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
) -> FunctionSpec:
    """The normalized conjugate witness ||f||^(1-p) * rho(f)^(p-1), a
    real-valued function whose U^(p/(p-1)) seminorm is 1 and whose pairing
    with f recovers ||f||.

    Step-profile inputs produce an exact step witness; other inputs fall
    back to a seminorm-power node with a search-estimated scale.
    """
    if p <= 1:
        raise ValueError("dual witness needs p > 1")
    sn = f.space.seminorms[i]
    prof = step_profile(f)
    if prof is not None:
        norm = _profile_norm_exact(prof, A, p, sn)
        if norm == 0.0:
            raise ValueError("dual witness needs a nonzero seminorm")
        scale = norm ** (1.0 - p)
        breaks = [prof[0][0]] + [hi for _, hi, _ in prof]
        pieces = [(scale * sn.evaluate(vec) ** (p - 1.0),) for _, _, vec in prof]
        root = Step(tuple(breaks), tuple(pieces))
        return FunctionSpec(f.domain, scalar_space(), root)
    report = up_seminorm(f, A, p, i, schedule, budget)
    if report.value == 0.0:
        raise ValueError("dual witness needs a nonzero seminorm")
    root = RhoPower(
        child=f.root,
        child_space=f.space,
        seminorm_index=i,
        exponent=p - 1.0,
        scale=report.value ** (1.0 - p),
    )
    return FunctionSpec(f.domain, scalar_space(), root)


def _pointwise_product(g: FunctionSpec, f: FunctionSpec) -> FunctionSpec:
    if g.space.dimension != 1:
        raise ValueError("the first factor must be real-valued")
    return FunctionSpec(f.domain, f.space, Product(g.root, f.root))


def holder_margin(
    f: FunctionSpec,
    g: FunctionSpec,
    A: SubsetSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
    tol: float = 1e-9,
) -> MarginReport:
    """mu(theta(g f), A) <= ||g||_{p*} ||f||_p with 1/p + 1/p* = 1."""
    if p <= 1:
        raise ValueError("holder check needs p > 1")
    pstar = p / (p - 1.0)
    gf = _pointwise_product(g, f)
    sched = schedule if schedule is not None else auto_schedule(gf, A)
    lhs = variational_measure(theta(gf), A, sched, budget, seminorm_index=i).reported
    rhs_g = up_seminorm(g, A, pstar, 0, schedule if schedule is not None else None, budget)
    rhs_f = up_seminorm(f, A, p, i, schedule, budget)
    rhs = rhs_g.value * rhs_f.value
    return MarginReport("holder", lhs, rhs, tol, lhs <= rhs + tol)


def minkowski_margin(
    f: FunctionSpec,
    g: FunctionSpec,
    A: SubsetSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
    tol: float = 1e-9,
) -> MarginReport:
    """||f + g||_p <= ||f||_p + ||g||_p."""
    if p < 1:
        raise ValueError("p must be >= 1")
    fg = f.plus(g)
    lhs = up_seminorm(fg, A, p, i, schedule if schedule is not None else None, budget).value
    rhs = (
        up_seminorm(f, A, p, i, schedule, budget).value
        + up_seminorm(g, A, p, i, schedule, budget).value
    )
    return MarginReport("minkowski", lhs, rhs, tol, lhs <= rhs + tol)


def embedding_margin(
    f: FunctionSpec,
    A: SubsetSpec,
    p: float,
    q: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
    tol: float = 1e-9,
) -> MarginReport:
    """||f||_p <= mu(A)^(1/p - 1/q) ||f||_q for 1 <= p < q."""
    if not (1 <= p < q):
        raise ValueError("need 1 <= p < q")
    lhs = up_seminorm(f, A, p, i, schedule, budget).value
    norm_q = up_seminorm(f, A, q, i, schedule, budget).value
    rhs = A.measure ** (1.0 / p - 1.0 / q) * norm_q
    return MarginReport("embedding", lhs, rhs, tol, lhs <= rhs + tol)


@dataclass(frozen=True, slots=True)
class ChebyshevReport:
    a_level: float
    p: float
    level_set_measure: float
    bound: float
    passed: bool

    def to_row(self):
        return ("chebyshev", self.level_set_measure, self.bound,
                self.bound - self.level_set_measure, self.passed)


def chebyshev_check(
    f: FunctionSpec,
    p: float,
    a_level: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    budget: int = 3,
    tol: float = 1e-9,
) -> ChebyshevReport:
    """m({rho(f) >= a}) <= a^-p * mu(theta-p(f), [a,b]).

    The level set is computed exactly (step profiles or polynomial
    coordinates); other functions are rejected.
    """
    if a_level <= 0:
        raise ValueError("a_level must be > 0")
    level = level_set(f, i, a_level)  # raises UnsupportedFunction otherwise
    A = SubsetSpec.interval(*f.domain)
    sched = schedule if schedule is not None else auto_schedule(f, A)
    mu_p = variational_measure(theta_p(f, p, i), A, sched, budget, seminorm_index=i).reported
    bound = a_level**-p * mu_p
    measure = level.measure
    return ChebyshevReport(a_level, p, measure, bound, measure <= bound + tol)


@dataclass(frozen=True, slots=True)
class FatouReport:
    seminorms: tuple[float, ...]
    limit_value: float
    prefix_liminf: float
    liminf_cutoff: int
    passed: bool
    unsettled_points: tuple[float, ...]
    unsettled_fraction: float

    def to_json(self) -> dict:
        return {
            "seminorms": list(self.seminorms),
            "limit_value": self.limit_value,
            "prefix_liminf": self.prefix_liminf,
            "liminf_cutoff": self.liminf_cutoff,
            "passed": self.passed,
            "unsettled_points": list(self.unsettled_points),
            "unsettled_fraction": self.unsettled_fraction,
        }


def _grid(domain, n):
    a, b = domain
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def fatou_check(
    sequence,
    f: FunctionSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    grid=256,
    tol: float = 1e-6,
    exceptional: SubsetSpec | None = None,
    pointwise_tol: float = 1e-9,
    decay_factor: float = 0.8,
    unsettled_budget: float = 0.25,
) -> FatouReport:
    """||f||_p <= liminf ||f_n||_p over the supplied finite prefix.

    Pointwise convergence is audited on the grid off the declared
    measure-zero exceptional set: a point is settled when the last gap is
    below ``pointwise_tol`` or below ``decay_factor`` times the
    mid-prefix gap.  A finite prefix cannot settle every point of an
    a.e.-convergent sequence, so unsettled points are tolerated up to a
    grid fraction of ``unsettled_budget`` and reported; beyond the budget
    the check is rejected with the offending points.
    """
    sequence = list(sequence)
    if len(sequence) < 2:
        raise ValueError("need at least two sequence members")
    exceptional = exceptional if exceptional is not None else SubsetSpec.empty()
    if exceptional.measure != 0.0:
        raise ValueError("exceptional set must have measure zero")
    pts = _grid(f.domain, grid) if isinstance(grid, int) else list(grid)
    sn = f.space.seminorms[i]
    flast = sequence[-1].as_callable()
    fmid = sequence[len(sequence) // 2].as_callable()
    ffn = f.as_callable()
    offending = []
    audited = 0
    for t in pts:
        if exceptional.contains(t):
            continue
        audited += 1
        gap_last = sn.evaluate(tuple(x - y for x, y in zip(flast(t), ffn(t))))
        gap_mid = sn.evaluate(tuple(x - y for x, y in zip(fmid(t), ffn(t))))
        if gap_last > pointwise_tol and gap_last > decay_factor * gap_mid:
            offending.append(t)
    fraction = len(offending) / max(1, audited)
    if fraction > unsettled_budget:
        raise ValueError(
            f"pointwise convergence fails at {len(offending)}/{audited} grid "
            f"points (fraction {fraction:.3f}), first few: {offending[:5]}"
        )

    A = SubsetSpec.interval(*f.domain)
    if schedule is None:
        anchors = set(discontinuities(f))
        for fn in sequence:
            anchors.update(discontinuities(fn))
        from .variation import pinch_schedule

        schedule = pinch_schedule(sorted(anchors), f.domain)
    norms = tuple(
        up_seminorm(fn, A, p, i, schedule).value for fn in sequence
    )
    cutoff = len(norms) // 2
    liminf = min(norms[cutoff:])
    limit_value = up_seminorm(f, A, p, i, schedule).value
    return FatouReport(
        seminorms=norms,
        limit_value=limit_value,
        prefix_liminf=liminf,
        liminf_cutoff=cutoff,
        passed=limit_value <= liminf + tol,
        unsettled_points=tuple(offending),
        unsettled_fraction=fraction,
    )


def lp_membership(
    f: FunctionSpec,
    F: FunctionSpec,
    A: SubsetSpec,
    p: float,
    i: int = 0,
    schedule: list[Gauge] | None = None,
    tol: float = 1e-4,
    budget: int = 3,
    stall_tol: float = DEFAULT_STALL_TOL,
    residual_samples: int = 3,
    seed: int = 0,
) -> LpReport:
    """Upper integrability plus a primitive residual check at the finest
    schedule gauge; membership is their conjunction."""
    schedule = _schedule_for(f, A, schedule)
    up = up_seminorm(f, A, p, i, schedule, budget, stall_tol)
    fA = indicator_restrict(f, A) if A.to_json() != SubsetSpec.interval(*f.domain).to_json() else f
    residuals = skh_residual(fA, F, schedule[-1], samples=residual_samples, seed=seed)
    residual = residuals[i]
    skh_ok = residual <= tol
    return LpReport(
        p=up.p,
        seminorm_index=up.seminorm_index,
        value=up.value,
        bracket=up.bracket,
        upper_integrable=up.upper_integrable,
        skh_ok=skh_ok,
        residual=residual,
    )
