"""Certified tour of the renormed sequence space without fixed points.

The space is the convex hull of the shift orbit A = {T^k(e_0)} inside
l1(Z) under the strictly convex star norm. Every point of the hull is a
simplex combination x = sum a_i T^{l_i}(e_0) and has

    ||x||* = sqrt(1 + sum a_i^2)   (exactly, as rationals under the root)

hence 1 < ||x||* <= sqrt(2). The shift T maps the hull onto itself and
displaces every sampled point by a positive amount, with displacement
infimum 0 along the uniform combinations — so no sampled point is fixed
and no fixed point can exist in the closure (it would have to be the
zero sequence, which the norm lower bound excludes).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .checks import PropertyReport, strict_convexity_check
from .spaces import SparseSeq, StarSeqSpace, l1_norm, star_norm, star_norm_sq

__all__ = [
    "HullSample",
    "hull_point",
    "random_hull_sample",
    "displacement_decay",
    "verify_counterexample",
]


@dataclass(frozen=True)
class HullSample:
    """A simplex combination of shift-orbit points and its exact norm data."""

    coeffs: tuple
    offsets: tuple
    point: SparseSeq

    @property
    def star_norm_sq(self) -> Fraction:
        return Fraction(1) + sum(a * a for a in self.coeffs)

    @property
    def star_norm(self) -> float:
        return math.sqrt(self.star_norm_sq)

    def shifted(self, power: int = 1) -> "HullSample":
        return HullSample(
            coeffs=self.coeffs,
            offsets=tuple(l + power for l in self.offsets),
            point=self.point.shift(power),
        )


def hull_point(coeffs, offsets) -> HullSample:
    """Exact simplex combination sum a_i T^{l_i}(e_0) of shift-orbit points."""
    coeffs = tuple(Fraction(a) for a in coeffs)
    offsets = tuple(int(l) for l in offsets)
    if len(coeffs) != len(offsets):
        raise ValueError("need one coefficient per offset")
    if len(set(offsets)) != len(offsets):
        raise ValueError("offsets must be distinct")
    if any(a < 0 for a in coeffs) or sum(coeffs) != 1:
        raise ValueError("coefficients must be a point of the simplex")
    point = SparseSeq({l: a for l, a in zip(offsets, coeffs) if a})
    return HullSample(coeffs=coeffs, offsets=offsets, point=point)


def random_hull_sample(rng: random.Random, max_support: int = 20, span: int = 50) -> HullSample:
    """A random simplex combination with support size up to ``max_support``."""
    n = rng.randint(1, max_support)
    offsets = rng.sample(range(-span, span + 1), n)
    raw = [rng.randint(1, 100) for _ in range(n)]
    total = sum(raw)
    coeffs = [Fraction(a, total) for a in raw]
    return hull_point(coeffs, offsets)


def displacement_decay(n: int) -> dict:
    """Displacement of the uniform hull point on offsets 0..n-1 under the shift.

    T(x_n) - x_n has entries -1/n at index 0 and +1/n at index n, so the
    l1 displacement is 2/n and the star displacement is sqrt(6)/n; both
    are returned together with the exact squared star value 6/n^2.
    """
    if n < 1:
        raise ValueError("need at least one offset")
    x = hull_point([Fraction(1, n)] * n, range(n))
    delta = x.shifted().point - x.point
    ell1 = l1_norm(delta)
    star_sq = star_norm_sq(delta)
    assert ell1 == Fraction(2, n) and star_sq == Fraction(6, n * n)
    return {"ell1": ell1, "star": math.sqrt(star_sq), "star_sq": star_sq}


def verify_counterexample(
    samples: int = 10_000, max_support: int = 20, seed: int = 7
) -> list[PropertyReport]:
    """Run the seven certification checks and return their reports.

    (i) strict convexity of the norm, (ii) equivalence with the l1 norm,
    (iii) the exact hull bound 1 <= ||x||* <= sqrt(2), (iv) shift
    invariance of the hull, (v) exclusion of the zero sequence,
    (vi) positive displacement with vanishing infimum, and (vii) Busemann
    convexity along geodesics between hull points.
    """
    if samples < 1 or max_support < 1:
        raise ValueError("need at least one sample and one offset")
    rng = random.Random(seed)
    space = StarSeqSpace()
    reports = [strict_convexity_check(min(samples, 2000), seed=seed)]

    pool = [random_hull_sample(rng, max_support) for _ in range(samples)]

    # (ii) norm equivalence, exact on the squares: ||x||1^2 <= ||x||*^2 <= 2 ||x||1^2
    worst = 0.0
    for h in pool:
        one_sq = l1_norm(h.point) ** 2
        star_sq = star_norm_sq(h.point)
        if not one_sq <= star_sq <= 2 * one_sq:
            worst = max(worst, float(abs(star_sq - one_sq)))
    reports.append(
        PropertyReport("norm-equivalence", samples, worst, tolerance=0.0, seed=seed)
    )

    # (iii) hull bound, exact: 1 <= ||x||*^2 = 1 + sum a_i^2 <= 2
    worst = 0.0
    for h in pool:
        sq = h.star_norm_sq
        if not (1 <= sq <= 2) or sq != star_norm_sq(h.point):
            worst = max(worst, 1.0)
    reports.append(PropertyReport("hull-norm-bound", samples, worst, tolerance=0.0, seed=seed))

    # (iv) the shift maps hull points to hull points, exactly
    worst = 0.0
    for h in pool:
        img = h.shifted()
        rebuilt = hull_point(img.coeffs, img.offsets)
        if img.point != rebuilt.point or star_norm_sq(img.point) != h.star_norm_sq:
            worst = max(worst, 1.0)
    reports.append(PropertyReport("shift-invariance", samples, worst, tolerance=0.0, seed=seed))

    # (v) the zero sequence is excluded: every sample has norm >= 1 > 0
    worst = 0.0
    for h in pool:
        if not (h.point and h.star_norm_sq >= 1):
            worst = max(worst, 1.0)
    reports.append(PropertyReport("zero-excluded", samples, worst, tolerance=0.0, seed=seed))

    # (vi) displacement positive everywhere, infimum 0: the sampled minimum
    # over supports of size <= m is exactly sqrt(6)/m (uniform coefficients
    # minimize sum a_i^2 at fixed support size)
    worst = 0.0
    for h in pool:
        disp_sq = star_norm_sq(h.shifted().point - h.point)
        if disp_sq <= 0:
            worst = max(worst, 1.0)
    for n in range(1, max_support + 1):
        if displacement_decay(n)["star_sq"] * n * n != 6:
            worst = max(worst, 1.0)
    reports.append(
        PropertyReport("displacement-positive", samples, worst, tolerance=0.0, seed=seed)
    )

    # (vii) Busemann convexity along geodesics between hull points
    worst = 0.0
    grid = [Fraction(k, 8) for k in range(9)]
    for _ in range(min(samples, 2000)):
        x, y = rng.choice(pool).point, rng.choice(pool).point
        u, v = rng.choice(pool).point, rng.choice(pool).point
        t1, t2, t3 = sorted(rng.sample(grid, 3))
        f = [space.dist(space.geodesic(x, y, t), space.geodesic(u, v, t)) for t in (t1, t2, t3)]
        lam = float((t2 - t1) / (t3 - t1))
        worst = max(worst, f[1] - ((1 - lam) * f[0] + lam * f[2]))
    reports.append(
        PropertyReport(
            "busemann-on-hull", min(samples, 2000), max(0.0, worst), tolerance=1e-9, seed=seed
        )
    )
    return reports
