"""Isometry descriptors for the shipped spaces.

Supported kinds: integer powers of the shift on star-seq, rotations
(dim 2) and translations on Euclidean space, leg permutations on the
star tree, and compositions thereof.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .spaces import EuclideanSpace, Space, SpaceError, SparseSeq, StarSeqSpace, StarTreeSpace

__all__ = [
    "Isometry",
    "Shift",
    "Rotation",
    "Translation",
    "LegPermutation",
    "Composition",
    "identity_for",
    "isometry_from_descriptor",
]


class Isometry:
    kind = ""

    def validate(self, space: Space) -> None:
        raise NotImplementedError

    def apply(self, space: Space, p):
        raise NotImplementedError

    def __call__(self, space: Space, p):
        self.validate(space)
        space.check_point(p)
        return self.apply(space, p)

    def descriptor(self) -> dict:
        raise NotImplementedError


class Shift(Isometry):
    """T^power on star-seq: the value at index k moves to index k + power."""

    kind = "shift"

    def __init__(self, power: int = 1):
        self.power = int(power)

    def validate(self, space: Space) -> None:
        if not isinstance(space, StarSeqSpace):
            raise SpaceError("shift applies only to star-seq spaces")

    def apply(self, space, p: SparseSeq) -> SparseSeq:
        return p.shift(self.power)

    def descriptor(self) -> dict:
        return {"kind": "shift", "power": self.power}


class Rotation(Isometry):
    """Rotation of the plane about the origin.

    The angle can be given as an exact rational multiple of pi so that
    special angles (pi, pi/2, 2pi/3, ...) use closed-form matrix entries
    and cycle tests stay clean.
    """

    kind = "rotation"

    _EXACT_COS = {
        Fraction(0): 1.0,
        Fraction(1, 3): 0.5,
        Fraction(1, 2): 0.0,
        Fraction(2, 3): -0.5,
        Fraction(1): -1.0,
        Fraction(4, 3): -0.5,
        Fraction(3, 2): 0.0,
        Fraction(5, 3): 0.5,
    }

    def __init__(self, angle: float | None = None, pi_multiple=None):
        if (angle is None) == (pi_multiple is None):
            raise ValueError("give exactly one of angle (radians) or pi_multiple")
        self.pi_multiple = Fraction(pi_multiple) % 2 if pi_multiple is not None else None
        if self.pi_multiple is not None:
            angle = float(self.pi_multiple) * math.pi
        self.angle = float(angle)
        self._cos = math.cos(self.angle)
        self._sin = math.sin(self.angle)
        if self.pi_multiple is not None:
            if self.pi_multiple in self._EXACT_COS:
                self._cos = self._EXACT_COS[self.pi_multiple]
            sin_as_cos = (self.pi_multiple - Fraction(1, 2)) % 2
            if sin_as_cos in self._EXACT_COS:
                self._sin = self._EXACT_COS[sin_as_cos]

    def validate(self, space: Space) -> None:
        if not (isinstance(space, EuclideanSpace) and space.dim == 2):
            raise SpaceError("rotation applies only to euclidean spaces of dimension 2")

    def apply(self, space, p):
        x, y = p
        return (self._cos * x - self._sin * y, self._sin * x + self._cos * y)

    def descriptor(self) -> dict:
        if self.pi_multiple is not None:
            return {"kind": "rotation", "angle_pi": str(self.pi_multiple)}
        return {"kind": "rotation", "angle": self.angle}


class Translation(Isometry):
    kind = "translation"

    def __init__(self, vector):
        self.vector = tuple(float(v) for v in vector)

    def validate(self, space: Space) -> None:
        if not (isinstance(space, EuclideanSpace) and space.dim == len(self.vector)):
            raise SpaceError("translation vector dimension must match the euclidean space")

    def apply(self, space, p):
        return tuple(a + v for a, v in zip(p, self.vector))

    def descriptor(self) -> dict:
        return {"kind": "translation", "vector": list(self.vector)}


class LegPermutation(Isometry):
    """Permutation of the legs of a star tree; permuted legs must have equal lengths."""

    kind = "leg-permutation"

    def __init__(self, perm):
        self.perm = tuple(int(i) for i in perm)
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{perm!r} is not a permutation")

    def validate(self, space: Space) -> None:
        if not isinstance(space, StarTreeSpace):
            raise SpaceError("leg permutations apply only to tree spaces")
        if len(self.perm) != space.legs:
            raise SpaceError("permutation size must equal the number of legs")
        for i, j in enumerate(self.perm):
            if space.lengths[i] != space.lengths[j]:
                raise SpaceError("permuted legs must have equal lengths")

    def apply(self, space: StarTreeSpace, p):
        leg, t = p
        if t == 0.0:
            return space.CENTER
        return (self.perm[leg], t)

    def descriptor(self) -> dict:
        return {"kind": "leg-permutation", "perm": list(self.perm)}


class Composition(Isometry):
    """Apply ``parts`` left to right."""

    kind = "composition"

    def __init__(self, parts):
        self.parts = list(parts)

    def validate(self, space: Space) -> None:
        for part in self.parts:
            part.validate(space)

    def apply(self, space, p):
        for part in self.parts:
            p = part.apply(space, p)
        return p

    def descriptor(self) -> dict:
        return {"kind": "composition", "parts": [p.descriptor() for p in self.parts]}


def identity_for(space: Space) -> Isometry:
    if isinstance(space, StarSeqSpace):
        return Shift(0)
    if isinstance(space, EuclideanSpace):
        return Translation((0.0,) * space.dim)
    if isinstance(space, StarTreeSpace):
        return LegPermutation(range(space.legs))
    raise SpaceError(f"no identity isometry for {space.kind}")


def isometry_from_descriptor(doc: dict) -> Isometry:
    kind = doc.get("kind")
    if kind == "shift":
        return Shift(doc.get("power", 1))
    if kind == "rotation":
        if "angle_pi" in doc:
            return Rotation(pi_multiple=Fraction(doc["angle_pi"]))
        return Rotation(angle=doc["angle"])
    if kind == "translation":
        return Translation(doc["vector"])
    if kind == "leg-permutation":
        return LegPermutation(doc["perm"])
    if kind == "composition":
        return Composition(isometry_from_descriptor(d) for d in doc["parts"])
    raise SpaceError(f"unknown isometry kind {kind!r}")
