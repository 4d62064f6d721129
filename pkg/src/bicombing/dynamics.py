"""Orbits of isometries, density estimation, and the fixed-point solver.

The solver averages an orbit prefix into an empirical measure, takes its
barycenter, and inspects the displacement of the result under the
isometry. Convergence is only claimed when three independent signals
agree: small displacement residual, Cauchy behavior of the candidate
points across horizons, and a positive visit-density estimate for the
target set — vanishing residuals alone can be a mirage (the shift on the
renormed sequence space produces them without any fixed point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .barycenter import BaryConfig, DEFAULT_CONFIG, banach_mean, beta
from .spaces import EuclideanSpace, Space, StarSeqSpace
from .wasserstein import AtomicMeasure, pushforward, w1_atomic

__all__ = [
    "OrbitTrace",
    "TargetSet",
    "orbit",
    "banach_density_estimate",
    "empirical_measure",
    "invariance_residual",
    "fixed_point_solve",
    "FixedPointReport",
    "orbit_bound_certificate",
    "BoundCertificate",
]


@dataclass(frozen=True)
class TargetSet:
    """A closed ball or an explicit finite point set, with a membership slack.

    The slack absorbs floating-point drift of orbit points that lie
    exactly on the boundary (e.g. a periodic orbit on the unit circle).
    """

    kind: str  # "ball" | "points"
    center: object = None
    radius: float = 0.0
    points: tuple = ()
    tol: float = 1e-9

    @classmethod
    def ball(cls, center, radius: float, tol: float = 1e-9) -> "TargetSet":
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        return cls(kind="ball", center=center, radius=radius, tol=tol)

    @classmethod
    def finite(cls, points, tol: float = 1e-9) -> "TargetSet":
        return cls(kind="points", points=tuple(points), tol=tol)

    def contains(self, space: Space, p) -> bool:
        if self.kind == "ball":
            return space.dist(p, self.center) <= self.radius + self.tol
        if self.kind == "points":
            return any(space.dist(p, q) <= self.tol for q in self.points)
        raise ValueError(f"unknown target kind {self.kind!r}")

    def diameter(self, space: Space) -> float:
        if self.kind == "ball":
            return 2.0 * self.radius
        pts = self.points
        return max(
            (space.dist(a, b) for i, a in enumerate(pts) for b in pts[i + 1 :]),
            default=0.0,
        )


@dataclass(frozen=True)
class OrbitTrace:
    """The first N points of an orbit x0, f(x0), f^2(x0), ..."""

    space: Space
    iso: object
    x0: object
    points: tuple

    @property
    def horizon(self) -> int:
        return len(self.points)

    def visit_set(self, target: TargetSet) -> list:
        """Sorted indices k with f^k(x0) inside the target set."""
        return [k for k, p in enumerate(self.points) if target.contains(self.space, p)]


def orbit(space: Space, iso, x0, n: int) -> OrbitTrace:
    """Generate the first ``n`` orbit points."""
    if n < 1:
        raise ValueError("need at least one orbit point")
    iso.validate(space)
    space.check_point(x0)
    pts = [x0]
    for _ in range(n - 1):
        pts.append(iso.apply(space, pts[-1]))
    return OrbitTrace(space=space, iso=iso, x0=x0, points=tuple(pts))


def banach_density_estimate(visits: Sequence[int], horizon: int, K: int, L: int, base: int = 0):
    """Best window-aligned visit frequency: a finite-horizon lower estimate
    of the upper Banach density of the visit set.

    Maximizes |visits intersected with [l, l+K)| / K over window starts
    l in [base, base+L]. Returns an exact Fraction.
    """
    if K < 1 or L < 0 or base < 0:
        raise ValueError("window length must be >= 1 and horizons nonnegative")
    if base + L + K > horizon:
        raise ValueError(
            f"windows reach index {base + L + K - 1} but the trace has horizon {horizon}"
        )
    inside = [False] * horizon
    for v in visits:
        if 0 <= v < horizon:
            inside[v] = True
    count = sum(inside[base : base + K])
    best = count
    for l in range(base + 1, base + L + 1):
        count += (1 if inside[l + K - 1] else 0) - (1 if inside[l - 1] else 0)
        if count > best:
            best = count
    return Fraction(best, K)


def empirical_measure(trace: OrbitTrace, start: int, length: int) -> AtomicMeasure:
    """Uniform measure on a window of the orbit (colliding atoms merge)."""
    if length < 1:
        raise ValueError("window must contain at least one point")
    if start < 0 or start + length > trace.horizon:
        raise ValueError("window outside the trace horizon")
    window = trace.points[start : start + length]
    return AtomicMeasure(trace.space, list(window), [Fraction(1, length)] * length)


def invariance_residual(space: Space, iso, mu: AtomicMeasure) -> float:
    """Transport distance between a measure and its image under the isometry."""
    return w1_atomic(space, pushforward(space, iso, mu), mu)


@dataclass
class FixedPointReport:
    status: str  # "converged" | "inconclusive"
    point: object
    residuals: list = field(default_factory=list)
    horizons: list = field(default_factory=list)
    cauchy_gaps: list = field(default_factory=list)
    density: Fraction = Fraction(0)
    notes: str = ""


def _barycenter_point(space: Space, mu: AtomicMeasure, cfg: BaryConfig):
    # on the normed kinds the construction's unique limit is the weighted
    # mean; using it directly keeps the residual series exact
    if isinstance(space, (EuclideanSpace, StarSeqSpace)):
        return banach_mean(space, mu)
    return beta(space, mu, cfg).point


def fixed_point_solve(
    space: Space,
    iso,
    x0,
    target: TargetSet,
    schedule: Sequence[int],
    tol: float = 1e-6,
    cfg: BaryConfig = DEFAULT_CONFIG,
) -> FixedPointReport:
    """Average orbit prefixes, take barycenters, and test for a fixed point.

    For each horizon N in the schedule the candidate is the barycenter of
    the uniform measure on the first N orbit points, and the residual is
    its displacement under the isometry. The verdict is "converged" only
    if the final residual is below ``tol``, consecutive candidates are
    Cauchy within ``tol``, and the target set shows a positive visit
    density along the orbit.
    """
    schedule = sorted(set(int(n) for n in schedule))
    if not schedule or schedule[0] < 1:
        raise ValueError("the horizon schedule must contain positive integers")
    n_max = schedule[-1]
    trace = orbit(space, iso, x0, 2 * n_max)
    residuals, gaps, candidates = [], [], []
    for n in schedule:
        mu = empirical_measure(trace, 0, n)
        x = _barycenter_point(space, mu, cfg)
        residuals.append(space.dist(iso.apply(space, x), x))
        if candidates:
            gaps.append(space.dist(candidates[-1], x))
        candidates.append(x)
    density = banach_density_estimate(trace.visit_set(target), trace.horizon, n_max, n_max)
    cauchy = not gaps or gaps[-1] <= tol
    converged = residuals[-1] <= tol and cauchy and density > 0
    notes = []
    if residuals[-1] > tol:
        notes.append("final displacement residual above tolerance")
    if not cauchy:
        notes.append("candidate points are not Cauchy across horizons")
    if density == 0:
        notes.append("no positive visit density observed for the target set")
    return FixedPointReport(
        status="converged" if converged else "inconclusive",
        point=candidates[-1],
        residuals=residuals,
        horizons=list(schedule),
        cauchy_gaps=gaps,
        density=density,
        notes="; ".join(notes),
    )


@dataclass
class BoundCertificate:
    ok: bool
    k0: int = 0
    C: float = 0.0
    bound: float = 0.0
    max_orbit_distance: float = 0.0
    reason: str = ""


def orbit_bound_certificate(
    trace: OrbitTrace, target: TargetSet, search_horizon: int = None
) -> BoundCertificate:
    """Bounded-orbit certificate from recurrence into a bounded target set.

    If the visit-time set D has positive upper Banach density, its
    difference set D - D is syndetic: some k0 bounds the gaps between
    consecutive return-time differences. Every orbit index then splits
    over a difference plus at most k0 steps, giving

        d(x0, f^k(x0)) <= diam(target) + C,
        C = max { d(x0, f^k(x0)) : 0 <= k <= k0 }.

    The certificate scans the finite trace: k0 is the largest gap between
    consecutive elements of D - D, and it fails when the gap structure
    does not persist to the end of the scanned range (as for a escaping
    orbit whose visits die out).
    """
    space = trace.space
    horizon = trace.horizon if search_horizon is None else min(search_horizon, trace.horizon)
    visits = [v for v in trace.visit_set(target) if v < horizon]
    if not visits:
        return BoundCertificate(ok=False, reason="the orbit never visits the target set")
    diffs = sorted({d - e for d in visits for e in visits if d >= e})
    k0 = max(
        max(b - a for a, b in zip(diffs, diffs[1:])) if len(diffs) > 1 else 0,
        diffs[0],
    )
    tail_gap = (horizon - 1) - diffs[-1]
    if k0 == 0:
        k0 = 1 if tail_gap else 0
    if tail_gap > k0:
        return BoundCertificate(
            ok=False,
            k0=k0,
            reason=(
                f"return-time differences stop {tail_gap} steps before the scan "
                f"horizon; no syndeticity constant is supported by the data"
            ),
        )
    C = max(space.dist(trace.x0, trace.points[k]) for k in range(min(k0, horizon - 1) + 1))
    bound = target.diameter(space) + C
    worst = max(space.dist(trace.x0, p) for p in trace.points)
    if worst > bound + 1e-9:
        return BoundCertificate(
            ok=False,
            k0=k0,
            C=C,
            bound=bound,
            max_orbit_distance=worst,
            reason="an orbit point violates the certified bound",
        )
    return BoundCertificate(ok=True, k0=k0, C=C, bound=bound, max_orbit_distance=worst)
