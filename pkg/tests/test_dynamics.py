import math

import numpy as np
import pytest

from twocenters.bifurcation import classify
from twocenters.coords import CartesianState, ChargeConfig, EllipticState, involution, jacobian_F
from twocenters.dynamics import (
    Boundedness,
    EventKind,
    SectionKind,
    SectionSpec,
    Trajectory,
    choose_section,
    detect_boundedness,
    initial_state,
    integrate,
    inter_focal_orbit,
    outer_axis_orbit,
    physical_time,
    poincare_hits,
    solver_tolerances,
)
from twocenters.errors import NoSectionRule, NonPositiveEnergy, OnBifurcationCurve
from twocenters.separation import EnergyMomentum, separated_energy

UNIT = ChargeConfig(1, 1)
OPPOSITE = ChargeConfig(-1, 1)
WITNESS = ChargeConfig(-1, 0.5)
WITNESS_EM = EnergyMomentum(0.1, 0.5)
X3 = 2.5 - math.sqrt(1.25)


def start_at_energy(q1, q2, angle, e, charges):
    r1, r2 = math.hypot(q1 - 1, q2), math.hypot(q1 + 1, q2)
    speed = math.sqrt(2 * (e + charges.z1 / r1 + charges.z2 / r2))
    return CartesianState(q1, q2, speed * math.cos(angle), speed * math.sin(angle))


@pytest.fixture(scope="module")
def bounded_run():
    region = classify(WITNESS_EM, WITNESS)
    y_lo, y_hi = region.y_intervals[0]
    start = initial_state(WITNESS_EM, WITNESS, 1.2, 0.5 * (y_lo + y_hi))
    return integrate(start, WITNESS, 400.0)


@pytest.fixture(scope="module")
def scattering_run():
    return integrate(start_at_energy(-2.0, 1.5, -0.4, 1.5, ChargeConfig(2, 1)), ChargeConfig(2, 1), 100.0)


def test_solver_tolerances():
    rtol, atol = solver_tolerances(1e-10)
    assert rtol == pytest.approx(1e-12) and atol == pytest.approx(1e-14)
    assert solver_tolerances(1e-16)[0] >= 2e-14
    with pytest.raises(ValueError):
        solver_tolerances(0.0)


class TestIntegrate:
    @pytest.mark.parametrize("q2,sign", [(1.3, 1), (0.4, -1)])
    def test_vertical_orbit_stays_on_axis(self, q2, sign):
        e = 3.0
        p2 = sign * math.sqrt(2 * (e + UNIT.z_plus / math.hypot(1, q2)))
        traj = integrate(CartesianState(0.0, q2, 0.0, p2), UNIT, 100.0)
        assert traj.em.k == pytest.approx(0.0, abs=1e-12)
        assert np.max(np.abs(traj.y)) < 1e-9
        assert np.max(np.abs(traj.q[0])) < 1e-9

    def test_bounded_containment(self, bounded_run):
        assert bounded_run.status == "s_max"
        assert np.all(bounded_run.x >= 1.0)
        assert np.max(bounded_run.x) <= X3 + 1e-6
        assert np.max(bounded_run.x) > X3 - 1e-3

    def test_drift_of_scattering_run(self, scattering_run):
        de, dk = scattering_run.drift()
        assert max(de.max(), dk.max()) < 1e-8

    def test_s_increasing_and_t_increasing(self, scattering_run, bounded_run):
        for traj in (scattering_run, bounded_run):
            assert np.all(np.diff(traj.s) > 0)
            f = jacobian_F(traj.xi, traj.eta)
            dt = np.diff(traj.t)
            assert np.all(dt >= 0)
            assert np.all(dt[(f[1:] > 0) & (f[:-1] > 0)] > 0)

    def test_confinement(self):
        # Z- < 0 here, so intervals are checked in the caller's frame
        charges = ChargeConfig(2, 1)
        rng = np.random.default_rng(3)
        for _ in range(5):
            state = start_at_energy(*rng.uniform(-3, 3, 2), rng.uniform(0, 2 * math.pi), rng.uniform(0.1, 4), charges)
            traj = integrate(state, charges, 50.0)
            region = classify(traj.em, charges)
            x_ok = np.zeros(len(traj), bool)
            for lo, hi in region.x_intervals:
                x_ok |= (traj.x >= lo - 1e-8) & (traj.x <= hi + 1e-8)
            (y_lo, y_hi), = region.y_intervals
            assert x_ok.all()
            assert np.all((traj.y >= y_lo - 1e-8) & (traj.y <= y_hi + 1e-8))

    def test_turning_events_are_recorded(self, bounded_run):
        kinds = {ev.kind for ev in bounded_run.events}
        assert EventKind.X_TURNING in kinds
        x_turns = [ev.s for ev in bounded_run.events if ev.kind is EventKind.X_TURNING]
        xi = np.array([bounded_run.state_at(s).xi for s in x_turns[:20]])
        # turning points of x are the movable root or the fixed root x = 1
        x = np.cosh(xi)
        assert np.all((np.abs(x - X3) < 1e-6) | (np.abs(x - 1) < 1e-6))

    def test_reversibility(self):
        start = EllipticState(0.7, 2.1, 1.4, -1.9)
        assert separated_energy(*start.as_array(), OPPOSITE) > 0
        fwd = integrate(start, OPPOSITE, 30.0)
        end = fwd.elliptic(-1)
        back = integrate(EllipticState(end.xi, end.eta, -end.p_xi, -end.p_eta), OPPOSITE, float(fwd.s[-1]))
        last = back.elliptic(-1)
        diff = np.array([last.xi, last.eta, -last.p_xi, -last.p_eta]) - start.as_array()
        assert np.max(np.abs(diff)) < 1e-6

    def test_involution_equivariance(self):
        start = EllipticState(0.9, -1.2, -0.3, 2.8)
        assert separated_energy(*start.as_array(), ChargeConfig(1, 2)) > 0
        a = integrate(start, ChargeConfig(1, 2), 20.0)
        b = integrate(involution(start), ChargeConfig(1, 2), 20.0)
        assert len(a) == len(b)
        assert np.max(np.abs(a.s - b.s)) < 1e-9
        for u, v in ((a.xi, b.xi), (a.eta, b.eta), (a.p_xi, b.p_xi), (a.p_eta, b.p_eta)):
            assert np.max(np.abs(u + v)) < 1e-9
        np.testing.assert_allclose(a.q, b.q, atol=1e-9)

    def test_negative_energy_rejected(self):
        with pytest.raises(NonPositiveEnergy):
            integrate(CartesianState(2, 0, 0.1, 0.0), UNIT, 10.0)

    def test_collision_stop(self):
        traj = integrate(CartesianState(2, 0, -2, 0), UNIT, 50.0)
        assert traj.status == "collision"
        assert traj.events[-1].kind is EventKind.COLLISION_STOP
        assert traj.events[-1].s == traj.s[-1]
        assert traj.q[0][-1] == pytest.approx(1.0, abs=1e-6)

    def test_escape(self, scattering_run):
        assert scattering_run.status == "escape"
        assert np.hypot(*scattering_run.q)[-1] > 900

    def test_samples_view(self, bounded_run):
        sample = bounded_run.samples[5]
        assert sample.s == bounded_run.s[5]
        assert sample.cartesian.q1 == pytest.approx(bounded_run.q[0][5])


class TestPhysicalTime:
    def test_single_sample(self):
        one = np.array([0.3])
        traj = Trajectory(UNIT, EnergyMomentum(1, 0), np.array([0.0]), np.array([7.0]), one, one, one, one)
        assert physical_time(traj).t.tolist() == [0.0]

    def test_constant_f(self):
        n = 5
        s = np.linspace(0, 2, n)
        xi, eta = np.full(n, 0.8), np.full(n, 1.1)
        traj = Trajectory(UNIT, EnergyMomentum(1, 0), s, np.zeros(n), xi, eta, np.zeros(n), np.zeros(n))
        t = physical_time(traj).t
        assert t[-1] == pytest.approx(jacobian_F(0.8, 1.1) * 2.0, rel=1e-14)

    def test_rules_agree_on_smooth_run(self, bounded_run):
        a = physical_time(bounded_run, "trapezoid").t
        b = physical_time(bounded_run, "midpoint").t
        ref = bounded_run.t[-1]
        assert abs(a[-1] - b[-1]) <= 1e-6 * ref
        assert abs(b[-1] - ref) <= 1e-6 * ref
        assert np.all(np.diff(a) >= 0) and a[0] == 0.0

    def test_unknown_rule(self, scattering_run):
        with pytest.raises(ValueError):
            physical_time(scattering_run, "simpson")


class TestSections:
    def test_region_iv_uses_inter_focal_segment(self):
        em = EnergyMomentum(3.0, -0.5)
        assert classify(em, OPPOSITE).label == "IV_0"
        assert choose_section(em, OPPOSITE).kind is SectionKind.INTER_FOCAL

    def test_between_lp2_and_lm1_uses_outer_axis(self):
        em = EnergyMomentum(3.0, -2.0)
        section = choose_section(em, OPPOSITE)
        assert section.kind is SectionKind.OUTER_AXIS and section.clip[1] <= -1

    def test_on_curve(self):
        with pytest.raises(OnBifurcationCurve):
            choose_section(EnergyMomentum(3.0, -3.0), OPPOSITE)

    def test_no_rule(self):
        with pytest.raises(NoSectionRule):
            choose_section(EnergyMomentum(3.0, -4.0), UNIT)

    def test_hits_grow_for_bounded_orbit(self, bounded_run):
        y_hi = classify(WITNESS_EM, WITNESS).y_intervals[0][1]
        for section in (choose_section(WITNESS_EM, WITNESS), SectionSpec(SectionKind.INTER_FOCAL, (-1.0, y_hi))):
            early = [h for h in poincare_hits(bounded_run, section) if h.s <= 100]
            late = poincare_hits(bounded_run, section)
            assert len(early) >= 5 and len(late) >= 3 * len(early)
            assert min(abs(h.p_normal) for h in late) > 1e-8
            for h in late:
                assert section.clip[0] <= h.q1 <= section.clip[1]
                assert abs(h.q2) < 1e-9

    def test_scattering_hits_finite(self, scattering_run):
        section = SectionSpec(SectionKind.OUTER_AXIS, (-math.inf, -1.0), -1)
        hits = poincare_hits(scattering_run, section)
        assert len(hits) < 10
        assert all(abs(h.p_normal) > 1e-8 for h in hits)

    def test_empty_when_section_is_not_reached(self):
        em = EnergyMomentum(3.0, -1.0)  # III_> for equal charges, y stays in a band
        region = classify(em, UNIT)
        y_lo, y_hi = region.y_intervals[0]
        traj = integrate(initial_state(em, UNIT, 2.0, 0.5 * (y_lo + y_hi)), UNIT, 30.0)
        assert poincare_hits(traj, SectionSpec(SectionKind.OUTER_AXIS, (-math.inf, -1.0), -1)) == []


class TestBoundedness:
    def test_inner_component_is_bounded(self):
        region = classify(WITNESS_EM, WITNESS)
        assert detect_boundedness(WITNESS_EM, WITNESS, region.x_intervals[0], s_check=200) is Boundedness.BOUNDED

    def test_outer_component_scatters(self):
        region = classify(WITNESS_EM, WITNESS)
        assert detect_boundedness(WITNESS_EM, WITNESS, region.x_intervals[1]) is Boundedness.SCATTERING

    def test_region_ii_scatters(self):
        assert detect_boundedness(EnergyMomentum(3, -4), UNIT, (1.0, math.inf)) is Boundedness.SCATTERING

    def test_unknown_component(self):
        with pytest.raises(ValueError):
            detect_boundedness(WITNESS_EM, WITNESS, (1.0, 2.0))


class TestSpecialOrbits:
    def test_inter_focal_orbit(self):
        orbit = inter_focal_orbit(1.0, UNIT)
        assert orbit.status == "periodic"
        assert orbit.em.k == -3.0
        assert np.all(orbit.q[1] == 0.0)
        assert np.all(np.abs(orbit.q[0]) <= 1.0)
        assert orbit.info["period_s"] > 0 and orbit.info["period_t"] > 0
        assert np.all(np.diff(orbit.t) >= 0)

    def test_outer_axis_orbit_bounces(self):
        orbit = outer_axis_orbit(1.0, UNIT, side=-1)
        assert orbit.em.k == pytest.approx(UNIT.z_minus - 1.0)
        assert np.max(np.abs(orbit.q[1])) < 1e-12
        assert np.all(orbit.q[0] <= -1.0 + 1e-12)
        assert orbit.status == "escape"
        away = np.abs(orbit.q[0] + 1) > 0.1
        e, _ = orbit.recomputed_constants()
        assert np.max(np.abs(e[away] - 1.0)) < 1e-8

    def test_outer_axis_orbit_repelling_turns(self):
        orbit = outer_axis_orbit(1.0, ChargeConfig(-1, -1), side=-1)
        assert np.max(orbit.q[0]) < -1.5
