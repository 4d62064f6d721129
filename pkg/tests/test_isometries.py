import math
from fractions import Fraction

import pytest

from bicombing import (
    Composition,
    EuclideanSpace,
    LegPermutation,
    Rotation,
    Shift,
    SparseSeq,
    StarSeqSpace,
    StarTreeSpace,
    Translation,
    identity_for,
    isometry_from_descriptor,
)

E2 = EuclideanSpace(2)
SEQ = StarSeqSpace()
TREE = StarTreeSpace(3)


class TestShift:
    def test_moves_support_exactly(self):
        x = SparseSeq({0: 1, 2: Fraction(1, 2)})
        assert Shift(3).apply(SEQ, x) == x.shift(3)

    def test_inverse_composition(self):
        comp = Composition([Shift(2), Shift(-2)])
        x = SparseSeq.unit(1)
        assert comp.apply(SEQ, x) == x

    def test_wrong_space(self):
        with pytest.raises(Exception):
            Shift(1).validate(E2)


class TestRotation:
    def test_exact_period_three(self):
        rot = Rotation(pi_multiple=Fraction(2, 3))
        p = (1.0, 0.0)
        for _ in range(3):
            p = rot.apply(E2, p)
        assert E2.dist(p, (1.0, 0.0)) <= 1e-14

    def test_half_turn_is_exact(self):
        rot = Rotation(pi_multiple=Fraction(1))
        assert rot.apply(E2, (1.0, 2.0)) == (-1.0, -2.0)

    def test_quarter_turn_is_exact(self):
        rot = Rotation(pi_multiple=Fraction(1, 2))
        assert rot.apply(E2, (1.0, 0.0)) == (0.0, 1.0)

    def test_angle_matches_pi_multiple(self):
        a = Rotation(angle=2 * math.pi / 5).apply(E2, (1.0, 0.0))
        b = Rotation(pi_multiple=Fraction(2, 5)).apply(E2, (1.0, 0.0))
        assert E2.dist(a, b) <= 1e-12

    def test_needs_dimension_two(self):
        with pytest.raises(Exception):
            Rotation(angle=1.0).validate(EuclideanSpace(3))


class TestTranslation:
    def test_apply(self):
        assert Translation((1.0, -2.0)).apply(E2, (0.5, 0.5)) == (1.5, -1.5)

    def test_dimension_mismatch(self):
        with pytest.raises(Exception):
            Translation((1.0,)).validate(E2)


class TestLegPermutation:
    def test_permutes_legs(self):
        perm = LegPermutation([1, 2, 0])
        assert perm.apply(TREE, (0, 0.5)) == (1, 0.5)
        assert perm.apply(TREE, (2, 0.25)) == (0, 0.25)

    def test_center_fixed(self):
        perm = LegPermutation([2, 0, 1])
        assert perm.apply(TREE, TREE.CENTER) == TREE.CENTER

    def test_unequal_lengths_rejected(self):
        tree = StarTreeSpace(3, [1.0, 2.0, 3.0])
        with pytest.raises(Exception):
            LegPermutation([1, 2, 0]).validate(tree)
        # swapping the two equal legs of another tree is fine
        tree2 = StarTreeSpace(3, [1.0, 1.0, 2.0])
        LegPermutation([1, 0, 2]).validate(tree2)

    def test_invalid_permutation(self):
        with pytest.raises(Exception):
            LegPermutation([0, 0, 1]).validate(TREE)


class TestDescriptors:
    def test_roundtrip(self):
        for iso, space, x in [
            (Shift(2), SEQ, SparseSeq.unit(0)),
            (Rotation(pi_multiple=Fraction(2, 3)), E2, (1.0, 0.5)),
            (Translation((1.0, 2.0)), E2, (0.0, 0.0)),
            (LegPermutation([1, 2, 0]), TREE, (1, 0.5)),
            (Composition([Shift(1), Shift(1)]), SEQ, SparseSeq.unit(0)),
        ]:
            clone = isometry_from_descriptor(iso.descriptor())
            assert space.dist(clone.apply(space, x), iso.apply(space, x)) <= 1e-15

    def test_identity_for(self):
        for space, x in [(E2, (1.0, 2.0)), (SEQ, SparseSeq.unit(0)), (TREE, (1, 0.5))]:
            ident = identity_for(space)
            assert space.dist(ident.apply(space, x), x) == 0

    def test_unknown_kind(self):
        with pytest.raises(Exception):
            isometry_from_descriptor({"kind": "reflection"})
