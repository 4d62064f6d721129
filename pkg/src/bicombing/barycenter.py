"""Recursive barycenters and the contracting barycenter map.

The n-point barycenter b_n is defined by b_1 = id, b_2 = midpoint, and
for n >= 3 by iterating the deletion-tuple map

    x_i  <-  b_{n-1}(x with entry i removed)

until the tuple collapses. The barycenter of a rational-mass measure is
the limit over k of b_{n^k} applied to the k-fold duplicated support
(n = least common denominator); successive k values are probed with a
doubling schedule and a Cauchy stopping rule.

On the normed kinds (euclidean, star-seq) geodesics are linear, so the
deletion iteration is run once per *multiplicity structure* in
barycentric-coordinate space (see ``_kernels``) and the resulting
coefficient profile is cached and reused for any points and any space
with linear geodesics. On the star tree the iteration runs directly on
(leg, t) encodings. Without this structure caching the recursion is
super-exponential and infeasible beyond a handful of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._kernels import bary_coeff, bary_tree
from .spaces import EuclideanSpace, Space, SpaceError, SparseSeq, StarSeqSpace, StarTreeSpace
from .wasserstein import AtomicMeasure

__all__ = [
    "BaryConfig",
    "BarycenterError",
    "BetaResult",
    "b_n",
    "b_n_reference",
    "beta",
    "banach_mean",
    "locality_certificate",
]


class BarycenterError(RuntimeError):
    """Non-convergence or an unsupported expansion size."""


@dataclass(frozen=True)
class BaryConfig:
    """Stopping rules for the barycenter iteration.

    tuple_tol: diameter below which a deletion tuple counts as collapsed.
    limit_tol: Cauchy gap below which the doubling schedule stops.
    max_expanded: largest duplicated-tuple size the schedule may build.
    """

    tuple_tol: float = 1e-12
    limit_tol: float = 1e-8
    max_expanded: int = 9

    def __post_init__(self):
        if self.tuple_tol <= 0 or self.limit_tol <= 0 or self.max_expanded < 1:
            raise ValueError("tolerances must be positive and the cap at least 1")


DEFAULT_CONFIG = BaryConfig()


@dataclass(frozen=True)
class BetaResult:
    """Barycenter of a measure plus how the limit was reached.

    method is "limit" when the doubling schedule converged and
    "mean-fallback" when the schedule would exceed the expansion cap on
    a normed kind and the exact weighted mean (the construction's unique
    limit there) is returned instead.
    """

    point: object
    k_used: int
    residual: float
    method: str = "limit"


def _is_normed(space: Space) -> bool:
    return isinstance(space, (EuclideanSpace, StarSeqSpace))


@lru_cache(maxsize=None)
def _coeff_profile(structure: tuple, tol: float) -> tuple:
    """Barycentric coefficients of the deletion limit, one per multiplicity.

    ``structure`` is the sorted tuple of input multiplicities. Returns
    (mults, coeffs) aligned pairwise; entries with equal multiplicity
    share a coefficient (the construction is permutation-invariant), and
    the coefficients are normalized to sum to 1 against the structure.
    """
    n = sum(structure)
    r = len(structure)
    rows = np.zeros((n, r))
    k = 0
    for col, mult in enumerate(structure):
        for _ in range(mult):
            rows[k, col] = 1.0
            k += 1
    raw = bary_coeff(rows, tol)
    by_mult: dict = {}
    for col, mult in enumerate(structure):
        by_mult.setdefault(mult, []).append(float(raw[col]))
    avg = {m: sum(v) / len(v) for m, v in by_mult.items()}
    # each column already carries the whole coefficient of one distinct
    # point, so the normalizer is the plain column sum
    total = sum(avg[m] for m in structure)
    mults = tuple(sorted(avg))
    coeffs = tuple(avg[m] / total for m in mults)
    return mults, coeffs


def _group_points(space: Space, points) -> list:
    """Distinct points with multiplicities, in canonical key order."""
    groups: dict = {}
    for p in points:
        space.check_point(p)
        key = space.point_key(p)
        if key in groups:
            groups[key][1] += 1
        else:
            groups[key] = [p, 0]
            groups[key][1] = 1
    return [tuple(groups[k]) for k in sorted(groups)]


def _combine_normed(space: Space, grouped, tol: float):
    """Apply the cached coefficient profile to distinct points."""
    structure = tuple(sorted(m for _, m in grouped))
    mults, coeffs = _coeff_profile(structure, tol)
    coeff_of = dict(zip(mults, coeffs))
    if isinstance(space, StarSeqSpace):
        out = SparseSeq()
        for p, m in grouped:
            out = out + p.scale(Fraction(coeff_of[m]))
        return out
    dim = space.dim
    acc = [0.0] * dim
    for p, m in grouped:
        c = coeff_of[m]
        for d in range(dim):
            acc[d] += c * p[d]
    return tuple(acc)


def _tree_rows(grouped) -> np.ndarray:
    rows = []
    for (leg, t), m in grouped:
        rows.extend([(float(leg), float(t))] * m)
    return np.array(rows, dtype=np.float64)


def _combine_tree(space: StarTreeSpace, grouped, tol: float):
    res = bary_tree(_tree_rows(grouped), tol)
    return space.canonical((int(res[0]), float(res[1])))


def b_n(space: Space, points, cfg: BaryConfig = DEFAULT_CONFIG):
    """Barycenter of an n-tuple of points (order-independent)."""
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    if len(points) == 1:
        space.check_point(points[0])
        return points[0]
    if len(points) == 2:
        return space.midpoint(points[0], points[1])
    grouped = _group_points(space, points)
    if len(grouped) == 1:
        return grouped[0][0]
    if _is_normed(space):
        return _combine_normed(space, grouped, cfg.tuple_tol)
    if isinstance(space, StarTreeSpace):
        return _combine_tree(space, grouped, cfg.tuple_tol)
    raise SpaceError(f"no barycenter backend for space kind {space.kind!r}")


def b_n_reference(space: Space, points, tol: float = 1e-12):
    """Direct deletion-tuple recursion, usable on any space (small n only).

    Slow but backend-free; used to cross-check the compiled kernels.
    """
    memo: dict = {}

    def key_of(tup):
        return tuple(sorted(space.point_key(p) for p in tup))

    def rec(tup):
        n = len(tup)
        if n == 1:
            return tup[0]
        if n == 2:
            return space.midpoint(tup[0], tup[1])
        key = key_of(tup)
        hit = memo.get(key)
        if hit is not None:
            return hit
        cur = tup
        prev_diam = None
        while True:
            diam = max(
                space.dist(cur[i], cur[j]) for i in range(n) for j in range(i + 1, n)
            )
            # the deletion map contracts the diameter by at least 1/2, so a
            # shrink factor above 0.9 means the float noise floor is reached
            if diam < tol or (prev_diam is not None and diam > 0.9 * prev_diam):
                break
            prev_diam = diam
            cur = tuple(rec(cur[:i] + cur[i + 1 :]) for i in range(n))
        memo[key] = cur[0]
        return cur[0]

    points = tuple(points)
    if not points:
        raise ValueError("need at least one point")
    for p in points:
        space.check_point(p)
    return rec(points)


def beta(space: Space, mu: AtomicMeasure, cfg: BaryConfig = DEFAULT_CONFIG) -> BetaResult:
    """Barycenter of a rational-mass measure via the doubling schedule."""
    n = mu.lcd()
    if n == 1:
        return BetaResult(point=mu.points[0], k_used=1, residual=0.0)
    grouped = [(p, int(m * n)) for p, m in mu.atoms()]
    normed = _is_normed(space)
    if not normed and not isinstance(space, StarTreeSpace):
        raise SpaceError(f"no barycenter backend for space kind {space.kind!r}")

    def value(k):
        scale = n ** (k - 1)
        blown = [(p, m * scale) for p, m in grouped]
        if normed:
            return _combine_normed(space, blown, cfg.tuple_tol)
        return _combine_tree(space, blown, cfg.tuple_tol)

    prev = None
    gap = math.inf
    k = 1
    while n**k <= cfg.max_expanded:
        cur = value(k)
        if prev is not None:
            gap = space.dist(prev, cur)
            if gap < cfg.limit_tol:
                return BetaResult(point=cur, k_used=k, residual=gap)
        prev = cur
        k *= 2
    if normed:
        # the duplicated tuples outgrow the cap; on a normed kind the
        # construction has a unique limit, the mass-weighted mean
        return BetaResult(
            point=banach_mean(space, mu),
            k_used=k // 2,
            residual=0.0 if math.isinf(gap) else gap,
            method="mean-fallback",
        )
    raise BarycenterError(
        f"doubling schedule not Cauchy within expansion cap {cfg.max_expanded} "
        f"(lcd {n}, last gap {gap})"
    )


def banach_mean(space: Space, mu: AtomicMeasure):
    """Mass-weighted mean of the support (normed kinds only)."""
    if isinstance(space, StarSeqSpace):
        out = SparseSeq()
        for p, m in mu.atoms():
            out = out + p.scale(m)
        return out
    if isinstance(space, EuclideanSpace):
        acc = [0.0] * space.dim
        for p, m in mu.atoms():
            w = float(m)
            for d in range(space.dim):
                acc[d] += w * p[d]
        return tuple(acc)
    raise SpaceError("the weighted mean needs a linear structure (euclidean or star-seq)")


def _dense_embedding(space: Space, points, candidate):
    """Represent points as dense float vectors plus the matching norm."""
    if isinstance(space, EuclideanSpace):
        vecs = [np.array(p, dtype=float) for p in points]
        cand = np.array(candidate, dtype=float)
        return vecs, cand, lambda v: float(np.linalg.norm(v))
    if isinstance(space, StarSeqSpace):
        support = sorted({k for p in list(points) + [candidate] for k, _ in p.entries})
        index = {k: i for i, k in enumerate(support)}

        def dense(p):
            v = np.zeros(max(len(support), 1))
            for k, val in p.entries:
                v[index[k]] = float(val)
            return v

        def norm(v):
            a = np.abs(v)
            return float(math.sqrt(a.sum() ** 2 + (a * a).sum()))

        return [dense(p) for p in points], dense(candidate), norm
    raise SpaceError(f"no dense embedding for space kind {space.kind!r}")


def locality_certificate(space: Space, mu: AtomicMeasure, candidate, tol: float = 1e-7):
    """Distance from a candidate point to the convex hull of the support.

    On the normed kinds this solves the convex-combination feasibility
    problem numerically; on the star tree it checks membership in the
    subtree spanned by the support. Returns a report that passes iff the
    distance is within ``tol``.
    """
    from scipy.optimize import minimize

    from .checks import PropertyReport

    space.check_point(candidate)
    if isinstance(space, StarTreeSpace):
        legs_max: dict = {}
        for p, _ in mu.atoms():
            leg, t = p
            legs_max[leg] = max(legs_max.get(leg, 0.0), t)
        leg, t = candidate
        if len(legs_max) == 1:
            ((only_leg, t_max),) = legs_max.items()
            t_min = min(p[1] for p, _ in mu.atoms())
            if leg == only_leg or t == 0.0 and t_min == 0.0:
                distance = max(0.0, t - t_max, t_min - t)
            else:
                distance = t + t_min  # path through the center to the segment
        else:
            # several legs occupied: the hull contains the center, so it is
            # the union of the segments [0, max t] on each touched leg
            distance = max(0.0, t - legs_max.get(leg, 0.0))
    else:
        vecs, cand, norm = _dense_embedding(space, mu.points, candidate)
        mat = np.stack(vecs)

        def objective(lam):
            return norm(lam @ mat - cand)

        m = len(vecs)
        starts = [np.array([float(w) for w in mu.masses])]
        starts.append(np.full(m, 1.0 / m))
        starts.extend(np.eye(m))
        best = math.inf
        for s in starts:
            res = minimize(
                objective,
                s,
                method="SLSQP",
                bounds=[(0.0, 1.0)] * m,
                constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1.0}],
                options={"maxiter": 200, "ftol": 1e-14},
            )
            best = min(best, float(res.fun))
            if best <= 1e-15:
                break
        distance = best
    return PropertyReport(
        name="hull-membership",
        samples=1,
        margin=max(0.0, distance),
        tolerance=tol,
        seed=0,
    )
