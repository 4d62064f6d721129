"""Sampled verification of the geodesic and isometry axioms.

Every check draws seeded random samples, measures the worst violation
margin of one inequality/identity, and returns a :class:`PropertyReport`
that records the seed for replay and a witness when the check fails.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .spaces import Space, star_norm

__all__ = [
    "PropertyReport",
    "check_conical",
    "check_midpoint_property",
    "check_busemann",
    "check_geodesic_speed",
    "check_isometry_distance",
    "check_isometry_equivariance",
    "convex_hull_sample",
    "strict_convexity_check",
]

DEFAULT_TOL = 1e-9

# geodesic parameters are drawn from a rational grid so that star-seq
# arithmetic stays exact and cheap
_T_GRID = 256


@dataclass
class PropertyReport:
    """Outcome of one sampled property check."""

    name: str
    samples: int
    margin: float
    tolerance: float
    seed: int
    witness: Any = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.margin <= self.tolerance

    def __str__(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return (
            f"[{state}] {self.name}: margin={self.margin:.3e} "
            f"tol={self.tolerance:.1e} samples={self.samples} seed={self.seed}"
        )


def _rand_t(rng) -> Fraction:
    return Fraction(rng.randint(0, _T_GRID), _T_GRID)


def _report(name, samples, worst, witness, tol, seed, **extra) -> PropertyReport:
    margin = max(0.0, worst)
    return PropertyReport(
        name=name,
        samples=samples,
        margin=margin,
        tolerance=tol,
        seed=seed,
        witness=witness if margin > tol else None,
        extra=dict(extra),
    )


def check_conical(space: Space, n: int, tol: float = DEFAULT_TOL, seed: int = 0) -> PropertyReport:
    """Worst violation of d(g_xy(t), g_x'y'(t)) <= (1-t) d(x,x') + t d(y,y')."""
    if n < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, x2, y, y2 = (space.random_point(rng) for _ in range(4))
        t = _rand_t(rng)
        lhs = space.dist(space.geodesic(x, y, t), space.geodesic(x2, y2, t))
        rhs = float(1 - t) * space.dist(x, x2) + float(t) * space.dist(y, y2)
        if lhs - rhs > worst:
            worst = lhs - rhs
            witness = (x, x2, y, y2, t)
    return _report("conical", n, worst, witness, tol, seed)


def check_midpoint_property(
    space: Space, n: int, tol: float = DEFAULT_TOL, seed: int = 0
) -> PropertyReport:
    """Worst distance between the two orientations of a midpoint."""
    if n < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, y = space.random_point(rng), space.random_point(rng)
        gap = space.dist(space.midpoint(x, y), space.midpoint(y, x))
        if gap > worst:
            worst = gap
            witness = (x, y)
    return _report("midpoint", n, worst, witness, tol, seed)


def check_busemann(space: Space, n: int, tol: float = DEFAULT_TOL, seed: int = 0) -> PropertyReport:
    """Worst violation of convexity of t -> d(g_xy(t), g_uv(t)) at three parameters."""
    if n < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, y, u, v = (space.random_point(rng) for _ in range(4))
        ts = sorted({_rand_t(rng) for _ in range(3)})
        if len(ts) < 3:
            continue
        t1, t2, t3 = ts
        f = [space.dist(space.geodesic(x, y, t), space.geodesic(u, v, t)) for t in (t1, t2, t3)]
        # chord value at t2 between (t1, f1) and (t3, f3)
        lam = float((t2 - t1) / (t3 - t1))
        chord = (1 - lam) * f[0] + lam * f[2]
        if f[1] - chord > worst:
            worst = f[1] - chord
            witness = (x, y, u, v, t1, t2, t3)
    return _report("busemann", n, worst, witness, tol, seed)


def check_geodesic_speed(
    space: Space, n: int, tol: float = DEFAULT_TOL, seed: int = 0
) -> PropertyReport:
    """Worst violation of |d(g(s), g(t)) - |s-t| d(x,y)| = 0 (constant speed)."""
    if n < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, y = space.random_point(rng), space.random_point(rng)
        s, t = _rand_t(rng), _rand_t(rng)
        gap = abs(
            space.dist(space.geodesic(x, y, s), space.geodesic(x, y, t))
            - float(abs(s - t)) * space.dist(x, y)
        )
        if gap > worst:
            worst = gap
            witness = (x, y, s, t)
    return _report("geodesic-speed", n, worst, witness, tol, seed)


def check_isometry_distance(
    space: Space, iso, n: int, tol: float = DEFAULT_TOL, seed: int = 0
) -> PropertyReport:
    """Worst violation of |d(fx, fy) - d(x, y)| = 0 for a registered isometry."""
    if n < 1:
        raise ValueError("need at least one sample")
    iso.validate(space)
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, y = space.random_point(rng), space.random_point(rng)
        gap = abs(space.dist(iso.apply(space, x), iso.apply(space, y)) - space.dist(x, y))
        if gap > worst:
            worst = gap
            witness = (x, y)
    return _report("isometry-distance", n, worst, witness, tol, seed)


def check_isometry_equivariance(
    space: Space, iso, n: int, tol: float = DEFAULT_TOL, seed: int = 0
) -> PropertyReport:
    """Worst distance between f(g_xy(t)) and g_{fx,fy}(t)."""
    if n < 1:
        raise ValueError("need at least one sample")
    iso.validate(space)
    rng = random.Random(seed)
    worst = float("-inf")
    witness = None
    for _ in range(n):
        x, y = space.random_point(rng), space.random_point(rng)
        t = _rand_t(rng)
        gap = space.dist(
            iso.apply(space, space.geodesic(x, y, t)),
            space.geodesic(iso.apply(space, x), iso.apply(space, y), t),
        )
        if gap > worst:
            worst = gap
            witness = (x, y, t)
    return _report("isometry-equivariance", n, worst, witness, tol, seed)


def convex_hull_sample(space: Space, points, depth: int, count: int, seed: int = 0) -> list:
    """Sample ``count`` points from the depth-``depth`` geodesic hull iterate.

    The hull iterates are A_0 = points and A_{k+1} = {g_xy(t) : x, y in A_k}.
    One sample from A_k is produced by recursively sampling its two
    geodesic endpoints from A_{k-1}, so every returned point lies in the
    geodesic convex hull of the input by construction.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    if depth < 1 or count < 1:
        raise ValueError("depth and count must be >= 1")
    for p in points:
        space.check_point(p)
    rng = random.Random(seed)

    def sample(k):
        if k == 0:
            return rng.choice(points)
        return space.geodesic(sample(k - 1), sample(k - 1), _rand_t(rng))

    return [sample(depth) for _ in range(count)]


def _parallel(x, y) -> bool:
    """True iff y is a positive rational multiple of x (both nonzero)."""
    if x.support() != y.support():
        return False
    k0 = x.support()[0]
    c = y[k0] / x[k0]
    return c > 0 and y == x.scale(c)


def strict_convexity_check(n: int, tol: float = 0.0, seed: int = 0) -> PropertyReport:
    """Strict convexity of the star norm, decided in exact arithmetic.

    Strict convexity of a norm is equivalent to the triangle inequality
    being strict off rays: |(1-lam) x + lam y| < (1-lam)|x| + lam|y|
    whenever y is not a positive multiple of x. For the star norm both
    sides are square roots of rationals, so the strict comparison can be
    settled exactly by squaring twice; each sample is a yes/no answer
    with no tolerance. On unit vectors the right side is 1, recovering
    the unit-ball formulation; the smallest normalized float gap over
    the samples is recorded in the report for inspection.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    from .spaces import StarSeqSpace, star_norm_sq

    space = StarSeqSpace()
    rng = random.Random(seed)
    failures = 0
    min_gap = float("inf")
    witness = None
    tested = 0
    while tested < n:
        x = space.random_point(rng)
        y = space.random_point(rng)
        if not x or not y or _parallel(x, y):
            continue
        lam = Fraction(rng.randint(13, 243), 256)  # inside (0.05, 0.95)
        a = star_norm_sq(x.scale(1 - lam) + y.scale(lam))
        b = (1 - lam) ** 2 * star_norm_sq(x)
        c = lam**2 * star_norm_sq(y)
        # a < b + c + 2 sqrt(bc), settled exactly: either a <= b + c, or
        # (a - b - c)^2 < 4bc after squaring the remaining root
        strict = a <= b + c or (a - b - c) ** 2 < 4 * b * c
        if not strict:
            failures += 1
            if witness is None:
                witness = (x, y, lam)
        rhs = math.sqrt(b) + math.sqrt(c)
        min_gap = min(min_gap, (rhs - math.sqrt(a)) / rhs)
        tested += 1
    return _report("strict-convexity", n, float(failures), witness, tol, seed, min_gap=min_gap)
