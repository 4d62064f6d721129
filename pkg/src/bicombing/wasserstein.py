"""Exact Wasserstein-1 distance on finitely supported measures.

Masses are exact rationals throughout; distances (transport costs) are
floats because the underlying metrics are irrational in general. The
uniform case is solved as an assignment problem, the general case by a
successive-shortest-path minimum-cost flow whose combinatorics run on
exact rational masses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .spaces import Space, SpaceError

__all__ = [
    "AtomicMeasure",
    "w1_uniform",
    "w1_uniform_bruteforce",
    "w1_atomic",
    "pushforward",
    "quantize",
    "EXPANSION_CAP",
]

# common-denominator expansion of rational measures into uniform ones is
# only attempted below this many expanded atoms
EXPANSION_CAP = 10_000


def _as_mass(v) -> Fraction:
    m = Fraction(v)
    if m <= 0:
        raise ValueError(f"masses must be positive, got {m}")
    return m


@dataclass(frozen=True)
class AtomicMeasure:
    """A finitely supported probability measure with rational masses."""

    space: Space
    points: tuple
    masses: tuple

    def __init__(self, space: Space, points: Sequence, masses: Sequence = None):
        points = list(points)
        if not points:
            raise ValueError("a measure needs at least one atom")
        if masses is None:
            masses = [Fraction(1, len(points))] * len(points)
        masses = [_as_mass(m) for m in masses]
        if len(masses) != len(points):
            raise ValueError("need one mass per point")
        merged: dict = {}
        reps: dict = {}
        for p, m in zip(points, masses):
            space.check_point(p)
            key = space.point_key(p)
            merged[key] = merged.get(key, Fraction(0)) + m
            reps.setdefault(key, p)
        if sum(merged.values()) != 1:
            raise ValueError(f"masses must sum to 1, got {sum(merged.values())}")
        keys = sorted(merged)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "points", tuple(reps[k] for k in keys))
        object.__setattr__(self, "masses", tuple(merged[k] for k in keys))

    def __len__(self) -> int:
        return len(self.points)

    def atoms(self):
        return zip(self.points, self.masses)

    @classmethod
    def dirac(cls, space: Space, point) -> "AtomicMeasure":
        return cls(space, [point], [Fraction(1)])

    def lcd(self) -> int:
        """Least common denominator of the masses."""
        return math.lcm(*(m.denominator for m in self.masses))

    def expand_uniform(self, cap: int = EXPANSION_CAP) -> list:
        """The measure as a list of n equally weighted points (n = lcd)."""
        n = self.lcd()
        if n > cap:
            raise ValueError(f"common-denominator expansion to {n} atoms exceeds cap {cap}")
        out = []
        for p, m in self.atoms():
            out.extend([p] * int(m * n))
        return out


# exact integer assignment is used up to this size; beyond it the float
# solver takes over (its result can be off by rounding in the last ulp)
_EXACT_ASSIGNMENT_CAP = 256


def _dyadic_int_matrix(cost):
    """Rescale a float matrix to exact integers (floats are dyadic rationals)."""
    ratios = [[c.as_integer_ratio() for c in row] for row in cost]
    max_den = max(q for row in ratios for _, q in row)
    return [[p * (max_den // q) for p, q in row] for row in ratios]


def _exact_assignment(a):
    """Minimum-cost perfect matching on an exact integer matrix.

    Hungarian algorithm with potentials; arbitrary-precision integer
    arithmetic makes ties exact. Returns the column assigned to each row.
    """
    n = len(a)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row (1-based) assigned to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = None
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = a[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    cols = [0] * n
    for j in range(1, n + 1):
        cols[match[j] - 1] = j - 1
    return cols


def w1_uniform(space: Space, xs: Sequence, ys: Sequence) -> float:
    """W1 between uniform measures on two equal-size point lists.

    This is (1/n) times the optimal assignment cost on the pairwise
    distance matrix. Up to a few hundred points the assignment is solved
    in exact integer arithmetic (floats are dyadic rationals), so exact
    cost ties never flip the optimum; larger instances fall back to the
    float solver.
    """
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ValueError("uniform W1 needs equally many points on both sides")
    if not xs:
        raise ValueError("need at least one point")
    n = len(xs)
    cost = [[space.dist(x, y) for y in ys] for x in xs]
    if n <= _EXACT_ASSIGNMENT_CAP:
        cols = _exact_assignment(_dyadic_int_matrix(cost))
    else:
        _, cols = linear_sum_assignment(np.array(cost))
    # correctly rounded sum: assignments with equal exact cost report the
    # same float total regardless of which one the solver picked
    return math.fsum(cost[i][j] for i, j in enumerate(cols)) / n


def w1_uniform_bruteforce(space: Space, xs: Sequence, ys: Sequence) -> float:
    """Exhaustive-permutation reference for :func:`w1_uniform` (small n only)."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise ValueError("uniform W1 needs equally many points on both sides")
    n = len(xs)
    if n > 8:
        raise ValueError("brute force is limited to n <= 8")
    cost = [[space.dist(x, y) for y in ys] for x in xs]
    best = min(
        math.fsum(cost[i][p[i]] for i in range(n))
        for p in itertools.permutations(range(n))
    )
    return best / n


def _min_cost_transport(cost, supply, demand):
    """Successive-shortest-path transport plan.

    ``cost[i][j]`` are float arc costs, ``supply``/``demand`` exact
    rationals with equal totals. Returns the optimal flow as a dict
    (i, j) -> Fraction.
    """
    m, k = len(supply), len(demand)
    a = list(supply)
    b = list(demand)
    flow: dict = {}
    INF = float("inf")
    while True:
        sources = [i for i in range(m) if a[i] > 0]
        if not sources:
            break
        # Bellman-Ford over the residual graph: nodes 0..m-1 (left),
        # m..m+k-1 (right); forward arcs always available, backward arcs
        # where flow is positive
        dist = [INF] * (m + k)
        prev = [None] * (m + k)
        for i in sources:
            dist[i] = 0.0
        for _ in range(m + k):
            changed = False
            for i in range(m):
                if dist[i] == INF:
                    continue
                ci = cost[i]
                for j in range(k):
                    nd = dist[i] + ci[j]
                    if nd < dist[m + j] - 1e-15:
                        dist[m + j] = nd
                        prev[m + j] = i
                        changed = True
            for (i, j), f in flow.items():
                if f > 0 and dist[m + j] != INF:
                    nd = dist[m + j] - cost[i][j]
                    if nd < dist[i] - 1e-15:
                        dist[i] = nd
                        prev[i] = m + j
                        changed = True
            if not changed:
                break
        j_best = min(
            (j for j in range(k) if b[j] > 0 and dist[m + j] < INF),
            key=lambda j: dist[m + j],
            default=None,
        )
        if j_best is None:
            raise RuntimeError("transport network disconnected; masses inconsistent")
        # walk the path back to a source, finding the bottleneck
        path = []
        node = m + j_best
        while prev[node] is not None:
            path.append((prev[node], node))
            node = prev[node]
        amount = min(a[node], b[j_best])
        for u, v in path:
            if u < m:  # forward arc u -> v
                pass
            else:  # backward arc: undoing flow (v -> u-m)
                amount = min(amount, flow[(v, u - m)])
        for u, v in path:
            if u < m:
                flow[(u, v - m)] = flow.get((u, v - m), Fraction(0)) + amount
            else:
                flow[(v, u - m)] -= amount
        a[node] -= amount
        b[j_best] -= amount
    return flow


def w1_atomic(space: Space, mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    """Exact optimal transport cost between two rational-mass measures."""
    if mu.space is not nu.space and mu.space.kind != nu.space.kind:
        raise SpaceError("measures live on different spaces")
    cost = [[space.dist(x, y) for y in nu.points] for x in mu.points]
    flow = _min_cost_transport(cost, mu.masses, nu.masses)
    return float(sum(float(f) * cost[i][j] for (i, j), f in flow.items()))


def pushforward(space: Space, iso, mu: AtomicMeasure) -> AtomicMeasure:
    """Image measure under an isometry; colliding atoms are merged."""
    iso.validate(space)
    return AtomicMeasure(space, [iso.apply(space, p) for p in mu.points], mu.masses)


def quantize(space: Space, points: Sequence, weights: Sequence, q: int) -> AtomicMeasure:
    """Round a weighted sample to masses that are multiples of 1/q.

    Uses largest-remainder rounding, so the transport distance to the
    input weighting is at most diam(support) * len(points) / (2q).
    Zero-mass atoms are dropped.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    if q < 1:
        raise ValueError("denominator must be >= 1")
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(points):
        raise ValueError("need one weight per point")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    total = sum(weights)
    if total <= 0:
        raise ValueError("total weight must be positive")
    scaled = [w / total * q for w in weights]
    floors = [int(s) for s in scaled]
    short = q - sum(floors)
    # hand out the missing units to the largest remainders (ties: lowest index)
    order = sorted(range(len(points)), key=lambda i: (-(scaled[i] - floors[i]), i))
    for i in order[:short]:
        floors[i] += 1
    kept = [(p, Fraction(f, q)) for p, f in zip(points, floors) if f > 0]
    return AtomicMeasure(space, [p for p, _ in kept], [m for _, m in kept])
