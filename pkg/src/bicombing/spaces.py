"""Concrete metric spaces carrying a conical geodesic bicombing.

Three space kinds are shipped:

* ``euclidean`` -- R^d with the usual metric and linear geodesics.
* ``star-seq``  -- finitely supported sequences in l1(Z) under the
  strictly convex renorming  ||x||* = sqrt((sum |x_k|)^2 + sum |x_k|^2),
  with exact rational coordinates.
* ``tree``      -- a metric star: k legs of given lengths glued at a
  center, with the unique geodesics.

Points are plain hashable values: coordinate tuples of floats, a
:class:`SparseSeq`, or a ``(leg, t)`` pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "SparseSeq",
    "Space",
    "EuclideanSpace",
    "StarSeqSpace",
    "StarTreeSpace",
    "SpaceError",
    "star_norm",
    "star_norm_sq",
    "l1_norm",
    "space_from_descriptor",
]


class SpaceError(ValueError):
    """Point/space kind mismatch or malformed space parameters."""


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        # floats convert exactly (binary rationals); keeps arithmetic exact
        return Fraction(v)
    raise TypeError(f"cannot interpret {v!r} as a rational")


class SparseSeq:
    """Finitely supported element of l1(Z) with exact rational values.

    Immutable and hashable. Zero entries are dropped; two sequences are
    equal iff their nonzero entries agree.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data = {}
        for k, v in items:
            f = _as_fraction(v)
            if f:
                data[int(k)] = data.get(int(k), Fraction(0)) + f
                if not data[int(k)]:
                    del data[int(k)]
        self._entries = tuple(sorted(data.items()))
        self._hash = hash(self._entries)

    @classmethod
    def unit(cls, index: int) -> "SparseSeq":
        return cls({index: Fraction(1)})

    @property
    def entries(self) -> tuple[tuple[int, Fraction], ...]:
        return self._entries

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self._entries)

    def __getitem__(self, k: int) -> Fraction:
        for i, v in self._entries:
            if i == k:
                return v
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseSeq) and self._entries == other._entries

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "SparseSeq") -> "SparseSeq":
        data = dict(self._entries)
        for k, v in other._entries:
            data[k] = data.get(k, Fraction(0)) + v
        return SparseSeq(data)

    def __sub__(self, other: "SparseSeq") -> "SparseSeq":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "SparseSeq":
        c = _as_fraction(c)
        return SparseSeq({k: c * v for k, v in self._entries})

    def shift(self, power: int = 1) -> "SparseSeq":
        """The shift isometry T^power: mass at index k moves to k + power."""
        return SparseSeq({k + power: v for k, v in self._entries})

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self._entries)
        return f"SparseSeq({{{body}}})"


def l1_norm(x: SparseSeq) -> Fraction:
    return sum((abs(v) for _, v in x.entries), Fraction(0))


def star_norm_sq(x: SparseSeq) -> Fraction:
    """Exact rational value of ||x||*^2 = (sum|x_k|)^2 + sum x_k^2."""
    s1 = l1_norm(x)
    s2 = sum((v * v for _, v in x.entries), Fraction(0))
    return s1 * s1 + s2


def star_norm(x: SparseSeq) -> float:
    return math.sqrt(star_norm_sq(x))


@dataclass
class Space:
    """A metric space with a conical geodesic bicombing and an isometry registry."""

    kind: str = field(init=False, default="")
    isometries: dict = field(init=False, default_factory=dict)

    def register_isometry(self, name: str, iso) -> None:
        iso.validate(self)
        self.isometries[name] = iso

    # subclasses implement: dist, geodesic, random_point, contains, point_key
    def dist(self, x, y) -> float:
        raise NotImplementedError

    def geodesic(self, x, y, t):
        """sigma_xy(t); constant speed, sigma(0)=x, sigma(1)=y."""
        raise NotImplementedError

    def midpoint(self, x, y):
        return self.geodesic(x, y, 0.5)

    def contains(self, p) -> bool:
        raise NotImplementedError

    def random_point(self, rng):
        raise NotImplementedError

    def point_key(self, p):
        """Hashable canonical key used for atom merging and memoization."""
        raise NotImplementedError

    def check_point(self, p) -> None:
        if not self.contains(p):
            raise SpaceError(f"point {p!r} does not belong to a {self.kind} space")

    def _check_t(self, t) -> None:
        if not 0 <= t <= 1:
            raise ValueError(f"geodesic parameter {t} outside [0, 1]")


class EuclideanSpace(Space):
    """R^dim with the Euclidean metric and linear geodesics."""

    def __init__(self, dim: int):
        super().__init__()
        if dim < 1:
            raise SpaceError("euclidean dimension must be >= 1")
        self.kind = "euclidean"
        self.dim = int(dim)

    def dist(self, x, y) -> float:
        self.check_point(x)
        self.check_point(y)
        return math.dist(x, y)

    def geodesic(self, x, y, t):
        self.check_point(x)
        self.check_point(y)
        self._check_t(t)
        return tuple((1 - t) * a + t * b for a, b in zip(x, y))

    def contains(self, p) -> bool:
        return (
            isinstance(p, tuple)
            and len(p) == self.dim
            and all(isinstance(c, (int, float)) for c in p)
        )

    def random_point(self, rng, scale: float = 2.0):
        return tuple(rng.uniform(-scale, scale) for _ in range(self.dim))

    def point_key(self, p):
        return tuple(round(c, 12) for c in p)


class StarSeqSpace(Space):
    """Finitely supported sequences under the strictly convex star norm.

    The ``window`` only bounds the index range used by random sampling;
    arithmetic never truncates supports.
    """

    def __init__(self, window: tuple[int, int] = (-8, 8)):
        super().__init__()
        lo, hi = int(window[0]), int(window[1])
        if lo > hi:
            raise SpaceError("star-seq window must satisfy lo <= hi")
        self.kind = "star-seq"
        self.window = (lo, hi)

    def dist(self, x, y) -> float:
        self.check_point(x)
        self.check_point(y)
        return star_norm(x - y)

    def dist_sq(self, x, y) -> Fraction:
        return star_norm_sq(x - y)

    def geodesic(self, x, y, t):
        self.check_point(x)
        self.check_point(y)
        self._check_t(t)
        tf = _as_fraction(t)
        return x.scale(1 - tf) + y.scale(tf)

    def contains(self, p) -> bool:
        return isinstance(p, SparseSeq)

    def random_point(self, rng, max_support: int = 4, denominator: int = 16):
        lo, hi = self.window
        n = rng.randint(1, max_support)
        idxs = rng.sample(range(lo, hi + 1), min(n, hi - lo + 1))
        return SparseSeq(
            {k: Fraction(rng.randint(-denominator, denominator), denominator) for k in idxs}
        )

    def point_key(self, p):
        return p.entries


class StarTreeSpace(Space):
    """A star-shaped metric tree: ``legs`` segments glued at a center.

    A point is ``(leg, t)`` with 0 <= t <= length of that leg. The center
    is canonically ``(0, 0.0)``.
    """

    CENTER = (0, 0.0)

    def __init__(self, legs: int, lengths=None):
        super().__init__()
        if legs < 2:
            raise SpaceError("a star tree needs at least 2 legs")
        self.kind = "tree"
        self.legs = int(legs)
        if lengths is None:
            lengths = [1.0] * legs
        if len(lengths) != legs or any(l <= 0 for l in lengths):
            raise SpaceError("need one positive length per leg")
        self.lengths = tuple(float(l) for l in lengths)

    def canonical(self, p):
        leg, t = p
        if t == 0:
            return self.CENTER
        return (int(leg), float(t))

    def dist(self, x, y) -> float:
        self.check_point(x)
        self.check_point(y)
        (a, s), (b, t) = x, y
        if a == b:
            return abs(s - t)
        return s + t

    def geodesic(self, x, y, t):
        self.check_point(x)
        self.check_point(y)
        self._check_t(t)
        (a, s), (b, u) = x, y
        # same leg (or one endpoint at the center): no center detour
        if a == b:
            return self.canonical((a, (1 - t) * s + t * u))
        if s == 0.0:
            return self.canonical((b, t * u))
        if u == 0.0:
            return self.canonical((a, (1 - t) * s))
        total = s + u
        travelled = t * total
        if travelled < s:
            return self.canonical((a, s - travelled))
        return self.canonical((b, travelled - s))

    def contains(self, p) -> bool:
        if not (isinstance(p, tuple) and len(p) == 2):
            return False
        leg, t = p
        if not (isinstance(leg, int) and 0 <= leg < self.legs):
            return False
        if not 0 <= t <= self.lengths[leg]:
            return False
        # center must use the canonical representation
        return not (t == 0 and leg != 0)

    def random_point(self, rng):
        leg = rng.randrange(self.legs)
        return self.canonical((leg, rng.uniform(0.0, self.lengths[leg])))

    def point_key(self, p):
        leg, t = p
        return (leg, round(t, 12))


def space_from_descriptor(doc: dict) -> Space:
    """Build a space from its JSON descriptor."""
    kind = doc.get("kind")
    if kind == "euclidean":
        return EuclideanSpace(doc["dim"])
    if kind == "star-seq":
        window = doc.get("window", [-8, 8])
        return StarSeqSpace((window[0], window[1]))
    if kind == "tree":
        return StarTreeSpace(doc["legs"], doc.get("lengths"))
    raise SpaceError(f"unknown space kind {kind!r}")
