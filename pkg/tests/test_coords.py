import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twocenters.coords import (
    CartesianState,
    ChargeConfig,
    EllipticState,
    SeparatedState,
    Sheet,
    cartesian_state_to_elliptic,
    cartesian_to_elliptic,
    elliptic_state_to_cartesian,
    elliptic_to_cartesian,
    elliptic_to_separated,
    involution,
    jacobian_F,
    jacobian_matrix,
    lift_momenta_to_elliptic,
    lower_momenta_to_cartesian,
    separated_to_elliptic,
    wrap_angle,
)
from twocenters.errors import DegenerateChart, FocusCollision
from twocenters.separation import h_eta, h_x, h_xi, h_y

finite = st.floats(-5, 5, allow_nan=False)


class TestChargeConfig:
    def test_derived_fields(self):
        c = ChargeConfig(0.3, 1.7)
        assert c.z_plus + c.z_minus == pytest.approx(2 * c.z2)
        assert c.z_plus - c.z_minus == pytest.approx(2 * c.z1)

    @pytest.mark.parametrize("z1,z2", [(0, 1), (1, 0), (math.nan, 1), (1, math.inf)])
    def test_rejects_zero_or_nonfinite(self, z1, z2):
        with pytest.raises(ValueError):
            ChargeConfig(z1, z2)

    def test_canonical_swaps_when_z_minus_negative(self):
        c, swapped = ChargeConfig(2, -1).canonical()
        assert swapped and c == ChargeConfig(-1, 2) and c.z_minus >= 0
        c, swapped = ChargeConfig(-1, 2).canonical()
        assert not swapped


class TestEllipticToCartesian:
    def test_foci(self):
        assert elliptic_to_cartesian(0.0, 0.0) == (1.0, 0.0)
        q1, q2 = elliptic_to_cartesian(0.0, math.pi)
        assert q1 == -1.0 and abs(q2) == 0.0

    def test_unit_point_on_q2_axis(self):
        q1, q2 = elliptic_to_cartesian(math.asinh(1.0), math.pi / 2)
        assert q1 == pytest.approx(0.0, abs=1e-15)
        assert q2 == pytest.approx(1.0, rel=1e-15)


class TestCartesianToElliptic:
    def test_q2_axis_point(self):
        xi, eta = cartesian_to_elliptic(0.0, 1.0)
        assert xi == pytest.approx(math.asinh(1.0), rel=1e-15)
        assert eta == pytest.approx(math.pi / 2, rel=1e-15)

    def test_positive_outer_axis(self):
        xi, eta = cartesian_to_elliptic(math.cosh(2.0), 0.0)
        assert xi == pytest.approx(2.0, rel=1e-14)
        assert eta == 0.0

    def test_negative_outer_axis_uses_plus_pi(self):
        xi, eta = cartesian_to_elliptic(-3.0, 0.0)
        assert eta == pytest.approx(math.pi)
        assert xi == pytest.approx(math.acosh(3.0))

    def test_inter_focal_segment(self):
        xi, eta = cartesian_to_elliptic(0.5, 0.0)
        assert xi == 0.0
        assert eta == pytest.approx(math.acos(0.5), rel=1e-15)
        q1, _ = elliptic_to_cartesian(xi, eta)
        assert q1 == pytest.approx(0.5, rel=1e-15)

    @pytest.mark.parametrize("q", [(1.0, 0.0), (-1.0, 0.0), (1.0 + 1e-11, 0.0), (-1.0, 5e-11)])
    def test_focus_collision(self, q):
        with pytest.raises(FocusCollision):
            cartesian_to_elliptic(*q)

    def test_round_trip_random(self, rng):
        q1, q2 = rng.uniform(-10, 10, 10_000), rng.uniform(-10, 10, 10_000)
        r = np.minimum(np.hypot(q1 - 1, q2), np.hypot(q1 + 1, q2))
        q1, q2 = q1[r >= 1e-6], q2[r >= 1e-6]
        err = 0.0
        for a, b in zip(q1, q2):
            xi, eta = cartesian_to_elliptic(float(a), float(b))
            c, d = elliptic_to_cartesian(xi, eta)
            err = max(err, abs(c - a), abs(d - b))
        assert err < 1e-12

    @given(st.floats(-1, 1), st.sampled_from([0.0, -0.0]))
    def test_round_trip_on_segment_and_near_foci(self, q1, q2):
        if abs(abs(q1) - 1) < 1e-6:
            return
        xi, eta = cartesian_to_elliptic(q1, q2)
        c, d = elliptic_to_cartesian(xi, eta)
        assert abs(c - q1) < 1e-12 and abs(d - q2) < 1e-12


class TestJacobian:
    def test_examples(self):
        assert jacobian_F(0.0, 0.0) == 0.0
        assert jacobian_F(1.0, math.pi / 2) == pytest.approx(math.sinh(1) ** 2 + 1, rel=1e-15)
        assert jacobian_F(1.0, math.pi / 2) == pytest.approx(2.3811, abs=1e-4)
        assert jacobian_F(2.0, 0.0) == pytest.approx(math.sinh(2.0) ** 2, rel=1e-15)

    def test_agrees_with_cosh_cos_form(self, rng):
        # cosh^2 - cos^2 loses digits in double precision near F = 0, so the
        # second closed form is evaluated at high precision as the oracle
        xi, eta = rng.uniform(-3, 3, 10_000), rng.uniform(-math.pi, math.pi, 10_000)
        f = jacobian_F(xi, eta)
        mpmath.mp.dps = 40
        worst = 0.0
        for a, b, v in zip(xi, eta, f):
            ref = mpmath.cosh(mpmath.mpf(float(a))) ** 2 - mpmath.cos(mpmath.mpf(float(b))) ** 2
            worst = max(worst, float(abs((v - ref) / ref)))
        assert worst < 1e-14


class TestMomentumLift:
    def test_examples(self):
        p_xi, p_eta = lift_momenta_to_elliptic(math.asinh(1.0), math.pi / 2, 2.0, 0.0)
        assert p_xi == pytest.approx(0.0, abs=1e-15)
        assert p_eta == pytest.approx(-2 * math.sqrt(2), rel=1e-15)
        dg = jacobian_matrix(math.asinh(1.0), math.pi / 2)
        np.testing.assert_allclose(dg, [[0, -math.sqrt(2)], [math.sqrt(2), 0]], atol=1e-15)
        assert lift_momenta_to_elliptic(0.7, 0.3, 0.0, 0.0) == (0.0, 0.0)
        p_xi, p_eta = lift_momenta_to_elliptic(1.0, 0.0, 1.0, 0.0)
        assert p_xi == pytest.approx(math.sinh(1.0)) and p_eta == 0.0

    def test_degenerate_at_focus(self):
        with pytest.raises(DegenerateChart):
            lift_momenta_to_elliptic(0.0, 0.0, 1.0, 0.0)

    @given(st.floats(-3, 3), st.floats(-math.pi, math.pi), finite, finite)
    def test_round_trip_and_kinetic_energy(self, xi, eta, p1, p2):
        f = jacobian_F(xi, eta)
        if f <= 1e-6:
            return
        p_xi, p_eta = lift_momenta_to_elliptic(xi, eta, p1, p2)
        b1, b2 = lower_momenta_to_cartesian(xi, eta, p_xi, p_eta)
        scale = max(1.0, math.hypot(p1, p2))
        assert abs(b1 - p1) <= 1e-9 * scale / min(1.0, f) and abs(b2 - p2) <= 1e-9 * scale / min(1.0, f)
        kin = 0.5 * (p1 * p1 + p2 * p2)
        kin_ell = (p_xi**2 + p_eta**2) / (2 * f)
        assert kin_ell == pytest.approx(kin, rel=1e-12, abs=1e-300)


class TestSeparated:
    def test_example_on_q2_axis(self):
        sep = elliptic_to_separated(EllipticState(math.asinh(1.0), math.pi / 2, 0.0, -2 * math.sqrt(2)))
        assert sep.p_x == 0.0
        assert sep.p_y == pytest.approx(-2 * math.sqrt(2))
        assert sep.x == pytest.approx(math.sqrt(2))
        assert sep.y == pytest.approx(0.0, abs=1e-15)
        assert sep.sheet is Sheet.UPPER

    def test_zero_momentum(self):
        sep = elliptic_to_separated(EllipticState(0.8, math.pi / 2, 0.0, 0.0))
        assert (sep.p_x, sep.p_y, sep.x) == (0.0, 0.0, math.cosh(0.8))
        assert abs(sep.y) < 1e-15

    @pytest.mark.parametrize("xi,eta", [(0.0, 1.0), (1.0, 0.0), (1.0, math.pi), (1e-12, 1.0)])
    def test_degenerate(self, xi, eta):
        with pytest.raises(DegenerateChart):
            elliptic_to_separated(EllipticState(xi, eta, 0.1, 0.1))

    def test_domain(self):
        with pytest.raises(ValueError):
            SeparatedState(0.5, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            SeparatedState(2.0, 1.5, 0.0, 0.0)

    @given(st.floats(0.01, 4), st.floats(-math.pi + 0.01, math.pi - 0.01), finite, finite)
    def test_round_trip(self, xi, eta, p_xi, p_eta):
        if abs(math.sin(eta)) < 0.01:
            return
        state = EllipticState(xi, eta, p_xi, p_eta)
        sep = elliptic_to_separated(state)
        back = separated_to_elliptic(sep)
        np.testing.assert_allclose(back.as_array(), state.as_array(), rtol=1e-12, atol=1e-12)

    @given(st.floats(-4, 4), st.floats(-math.pi, math.pi), finite, finite, st.floats(0, 5))
    def test_hamiltonians_preserved(self, xi, eta, p_xi, p_eta, e):
        if abs(math.sinh(xi)) < 0.05 or abs(math.sin(eta)) < 0.05:
            return
        charges = ChargeConfig(-0.7, 1.9)
        sep = elliptic_to_separated(EllipticState(xi, eta, p_xi, p_eta))
        a, b = h_xi(p_xi, xi, e, charges), h_x(sep.p_x, sep.x, e, charges)
        assert b == pytest.approx(a, rel=1e-12, abs=1e-12 * (1 + abs(p_xi) ** 2 + e * math.cosh(xi) ** 2))
        a, b = h_eta(p_eta, eta, e, charges), h_y(sep.p_y, sep.y, e, charges)
        assert b == pytest.approx(a, rel=1e-12, abs=1e-12 * (1 + p_eta**2 + e))

    def test_lower_sheet(self):
        sep = elliptic_to_separated(EllipticState(0.5, -1.0, 0.2, 0.3))
        assert sep.sheet is Sheet.LOWER
        back = separated_to_elliptic(sep)
        assert back.eta == pytest.approx(-1.0)

    def test_negative_xi_goes_through_involution(self):
        a = elliptic_to_separated(EllipticState(-0.5, -1.0, -0.2, -0.3))
        b = elliptic_to_separated(EllipticState(0.5, 1.0, 0.2, 0.3))
        assert a == b


class TestInvolution:
    def test_examples(self):
        assert involution(EllipticState(0.5, 0.3, 1.0, 2.0)) == EllipticState(-0.5, -0.3, -1.0, -2.0)
        assert involution(EllipticState(0.0, 0.0, 0.0, 0.0)) == EllipticState(0.0, 0.0, 0.0, 0.0)

    @given(finite, st.floats(-math.pi, math.pi), finite, finite)
    def test_involutive_and_projection_invariant(self, xi, eta, p_xi, p_eta):
        s = EllipticState(xi, eta, p_xi, p_eta)
        assert involution(involution(s)) == s
        i = involution(s)
        assert elliptic_to_cartesian(i.xi, i.eta) == elliptic_to_cartesian(xi, eta)
        if jacobian_F(xi, eta) > 1e-6:
            a, b = lower_momenta_to_cartesian(xi, eta, p_xi, p_eta), lower_momenta_to_cartesian(i.xi, i.eta, i.p_xi, i.p_eta)
            assert a == b

    def test_state_round_trip(self, rng):
        for _ in range(100):
            q = CartesianState(*rng.uniform(-3, 3, 2), *rng.normal(size=2))
            ell = cartesian_state_to_elliptic(q)
            for s in (ell, involution(ell)):
                back = elliptic_state_to_cartesian(s)
                np.testing.assert_allclose(back.as_array(), q.as_array(), rtol=1e-9, atol=1e-9)


def test_wrap_angle():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(0.5) == 0.5
