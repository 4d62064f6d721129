"""JSON encoding of spaces, points, isometries, measures, and targets.

Rational numbers travel as "p/q" strings so that values survive the trip
exactly. The documented schemas live in docs/schemas.md.
"""

from __future__ import annotations

from fractions import Fraction

from .dynamics import TargetSet
from .isometries import Isometry, isometry_from_descriptor
from .spaces import (
    EuclideanSpace,
    Space,
    SpaceError,
    SparseSeq,
    StarSeqSpace,
    StarTreeSpace,
    space_from_descriptor,
)
from .wasserstein import AtomicMeasure

__all__ = [
    "space_to_doc",
    "space_from_doc",
    "point_to_doc",
    "point_from_doc",
    "iso_to_doc",
    "iso_from_doc",
    "measure_to_doc",
    "measure_from_doc",
    "target_to_doc",
    "target_from_doc",
]


def _frac_str(f: Fraction) -> str:
    return str(Fraction(f))


def space_to_doc(space: Space) -> dict:
    if isinstance(space, EuclideanSpace):
        return {"kind": "euclidean", "dim": space.dim}
    if isinstance(space, StarSeqSpace):
        return {"kind": "star-seq", "window": list(space.window)}
    if isinstance(space, StarTreeSpace):
        return {"kind": "tree", "legs": space.legs, "lengths": list(space.lengths)}
    raise SpaceError(f"cannot serialize space kind {space.kind!r}")


def space_from_doc(doc: dict) -> Space:
    return space_from_descriptor(doc)


def point_to_doc(space: Space, p) -> object:
    space.check_point(p)
    if isinstance(space, EuclideanSpace):
        return [float(c) for c in p]
    if isinstance(space, StarSeqSpace):
        return {"entries": [[k, _frac_str(v)] for k, v in p.entries]}
    if isinstance(space, StarTreeSpace):
        return {"leg": p[0], "t": float(p[1])}
    raise SpaceError(f"cannot serialize a point of kind {space.kind!r}")


def point_from_doc(space: Space, doc) -> object:
    if isinstance(space, EuclideanSpace):
        p = tuple(float(c) for c in doc)
    elif isinstance(space, StarSeqSpace):
        p = SparseSeq({int(k): Fraction(v) for k, v in doc["entries"]})
    elif isinstance(space, StarTreeSpace):
        p = space.canonical((int(doc["leg"]), float(doc["t"])))
    else:
        raise SpaceError(f"cannot parse a point of kind {space.kind!r}")
    space.check_point(p)
    return p


def iso_to_doc(iso: Isometry) -> dict:
    return iso.descriptor()


def iso_from_doc(doc: dict) -> Isometry:
    return isometry_from_descriptor(doc)


def measure_to_doc(mu: AtomicMeasure) -> dict:
    return {
        "space": space_to_doc(mu.space),
        "atoms": [
            {"point": point_to_doc(mu.space, p), "mass": _frac_str(m)} for p, m in mu.atoms()
        ],
    }


def measure_from_doc(doc: dict, space: Space = None) -> AtomicMeasure:
    if space is None:
        space = space_from_doc(doc["space"])
    atoms = doc["atoms"]
    return AtomicMeasure(
        space,
        [point_from_doc(space, a["point"]) for a in atoms],
        [Fraction(a["mass"]) for a in atoms],
    )


def target_to_doc(space: Space, target: TargetSet) -> dict:
    if target.kind == "ball":
        return {
            "kind": "ball",
            "center": point_to_doc(space, target.center),
            "radius": target.radius,
            "tol": target.tol,
        }
    return {
        "kind": "points",
        "points": [point_to_doc(space, p) for p in target.points],
        "tol": target.tol,
    }


def target_from_doc(space: Space, doc: dict) -> TargetSet:
    kind = doc.get("kind")
    if kind == "ball":
        return TargetSet.ball(
            point_from_doc(space, doc["center"]),
            float(doc["radius"]),
            float(doc.get("tol", 1e-9)),
        )
    if kind == "points":
        return TargetSet.finite(
            [point_from_doc(space, p) for p in doc["points"]],
            float(doc.get("tol", 1e-9)),
        )
    raise ValueError(f"unknown target kind {kind!r}")
