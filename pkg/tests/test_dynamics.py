import math
from fractions import Fraction

import pytest

from bicombing import (
    AtomicMeasure,
    BoundCertificate,
    EuclideanSpace,
    Rotation,
    Shift,
    SparseSeq,
    StarSeqSpace,
    TargetSet,
    Translation,
    banach_density_estimate,
    empirical_measure,
    fixed_point_solve,
    invariance_residual,
    orbit,
    orbit_bound_certificate,
)

E2 = EuclideanSpace(2)
ROT3 = Rotation(pi_multiple=Fraction(2, 3))


class TestOrbit:
    def test_rotation_orbit_is_periodic(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 7)
        assert tr.horizon == 7
        assert E2.dist(tr.points[0], tr.points[3]) <= 1e-12
        assert E2.dist(tr.points[0], tr.points[1]) > 1.0

    def test_visit_set(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 9)
        target = TargetSet.ball((1.0, 0.0), 0.1)
        assert tr.visit_set(target) == [0, 3, 6]

    def test_needs_positive_length(self):
        with pytest.raises(ValueError):
            orbit(E2, ROT3, (1.0, 0.0), 0)


class TestDensity:
    def test_exact_third(self):
        visits = [k for k in range(900) if k % 3 == 0]
        assert banach_density_estimate(visits, 900, 300, 300) == Fraction(1, 3)

    def test_window_alignment_maximizes(self):
        # visits 0..9 then nothing: a window of length 10 starting at 0 sees all
        visits = list(range(10))
        assert banach_density_estimate(visits, 100, 10, 90) == 1
        assert banach_density_estimate(visits, 100, 50, 50) == Fraction(10, 50)

    def test_empty_visits(self):
        assert banach_density_estimate([], 100, 10, 90) == 0

    def test_base_offset(self):
        visits = list(range(50, 60))
        assert banach_density_estimate(visits, 100, 10, 0, base=50) == 1
        assert banach_density_estimate(visits, 100, 10, 0, base=0) == 0

    def test_horizon_validation(self):
        with pytest.raises(ValueError):
            banach_density_estimate([], 100, 50, 60)
        with pytest.raises(ValueError):
            banach_density_estimate([], 100, 0, 10)


class TestEmpiricalMeasure:
    def test_merges_periodic_orbit(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 9)
        mu = empirical_measure(tr, 0, 9)
        assert len(mu) == 3 and set(mu.masses) == {Fraction(1, 3)}

    def test_window_validation(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 5)
        with pytest.raises(ValueError):
            empirical_measure(tr, 0, 6)
        with pytest.raises(ValueError):
            empirical_measure(tr, -1, 2)


class TestInvarianceResidual:
    def test_invariant_measure_has_zero_residual(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 3)
        mu = empirical_measure(tr, 0, 3)
        assert invariance_residual(E2, ROT3, mu) <= 1e-12

    def test_moving_dirac_residual_is_displacement(self):
        mu = AtomicMeasure.dirac(E2, (1.0, 0.0))
        r = invariance_residual(E2, ROT3, mu)
        assert r == pytest.approx(math.sqrt(3), abs=1e-12)


class TestFixedPointSolve:
    def test_rotation_converges_to_origin(self):
        # the orbit lives on the unit circle, so this ball is visited always
        target = TargetSet.ball((0.0, 0.0), 1.0)
        rep = fixed_point_solve(E2, ROT3, (1.0, 0.0), target, [3, 30, 300], tol=1e-10)
        assert rep.status == "converged"
        assert E2.dist(rep.point, (0.0, 0.0)) <= 1e-10
        assert rep.density == 1 and rep.notes == ""

    def test_rotation_periodic_return_density(self):
        target = TargetSet.ball((1.0, 0.0), 0.1)
        rep = fixed_point_solve(E2, ROT3, (1.0, 0.0), target, [3, 30, 300], tol=1e-10)
        assert rep.status == "converged"
        assert rep.density == Fraction(1, 3)

    def test_shift_negative_control(self):
        space = StarSeqSpace()
        target = TargetSet.ball(SparseSeq(), 0.9)
        rep = fixed_point_solve(
            space, Shift(1), SparseSeq.unit(0), target, [3, 30], tol=1e-6
        )
        assert rep.status == "inconclusive"
        # residuals shrink like sqrt(6)/N but density stays zero
        assert rep.residuals[-1] == pytest.approx(math.sqrt(6) / 30, abs=1e-12)
        assert rep.density == 0
        assert "density" in rep.notes

    def test_translation_diverges(self):
        target = TargetSet.ball((0.0, 0.0), 1.0)
        rep = fixed_point_solve(
            E2, Translation((1.0, 0.0)), (0.0, 0.0), target, [2, 8, 32], tol=1e-6
        )
        assert rep.status == "inconclusive"
        assert "residual" in rep.notes

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            fixed_point_solve(E2, ROT3, (1.0, 0.0), TargetSet.ball((0.0, 0.0), 1.0), [])


class TestBoundCertificate:
    def test_periodic_orbit_certified(self):
        tr = orbit(E2, Rotation(pi_multiple=Fraction(2, 5)), (1.0, 0.0), 200)
        target = TargetSet.ball((1.0, 0.0), 1e-6)
        cert = orbit_bound_certificate(tr, target)
        assert cert.ok and cert.k0 == 5
        assert cert.max_orbit_distance <= cert.bound + 1e-9

    def test_fixed_point_orbit(self):
        tr = orbit(E2, ROT3, (0.0, 0.0), 50)
        cert = orbit_bound_certificate(tr, TargetSet.ball((0.0, 0.0), 1e-9))
        assert cert.ok and cert.bound <= 1e-6

    def test_translation_fails(self):
        tr = orbit(E2, Translation((1.0, 0.0)), (0.0, 0.0), 100)
        target = TargetSet.ball((0.0, 0.0), 0.5)
        cert = orbit_bound_certificate(tr, target)
        assert not cert.ok and cert.reason

    def test_no_visits_fails(self):
        tr = orbit(E2, ROT3, (1.0, 0.0), 20)
        cert = orbit_bound_certificate(tr, TargetSet.ball((9.0, 9.0), 0.1))
        assert not cert.ok and "never visits" in cert.reason

    def test_finite_point_target(self):
        pts = orbit(E2, ROT3, (1.0, 0.0), 3).points
        target = TargetSet.finite(pts, tol=1e-9)
        tr = orbit(E2, ROT3, (1.0, 0.0), 120)
        cert = orbit_bound_certificate(tr, target)
        assert cert.ok
        assert target.diameter(E2) == pytest.approx(math.sqrt(3), abs=1e-12)


class TestTargetSet:
    def test_ball_membership_with_slack(self):
        t = TargetSet.ball((0.0, 0.0), 1.0, tol=1e-9)
        assert t.contains(E2, (1.0, 0.0))
        assert not t.contains(E2, (1.1, 0.0))

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            TargetSet.ball((0.0, 0.0), -1.0)
