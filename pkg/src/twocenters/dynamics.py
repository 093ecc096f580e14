"""Trajectories of the separated flow in fictitious time ``s``.

With ``dt/ds = F(xi, eta)`` the motion splits into two one-degree-of-freedom
systems generated by ``H_xi`` and ``H_eta`` (equivalently ``H_x`` and
``H_y``).  They are integrated on the extended strip, where ``xi`` may
change sign: a crossing of the inter-focal segment moves the state to the
other sheet of the two-sheeted cover, and a crossing of the outer axis is a
passage of ``eta`` through ``0`` or ``pi``.  Both are regular points of the
flow in these variables, and so are the turning points ``p_xi = 0`` and
``p_eta = 0``.

Far out on the ``x`` axis, beyond every turning point, ``p_xi`` is
eliminated through ``p_xi = +-sqrt(2 q(cosh xi))`` with
``q(x) = E x**2 + Z+ x + K``.  This keeps ``K`` accurate while ``x`` runs to
the escape radius, where ``p_xi**2`` and ``E x**2`` are both of order
``E * x_escape**2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from twocenters import bifurcation
from twocenters.coords import (
    CartesianState,
    ChargeConfig,
    EllipticState,
    SeparatedState,
    Sheet,
    cartesian_state_to_elliptic,
    elliptic_to_cartesian,
    jacobian_F,
    lower_momenta_to_cartesian,
    wrap_angle,
)
from twocenters.errors import (
    IntegratorDefect,
    NonPositiveEnergy,
    NoSectionRule,
    OnBifurcationCurve,
)
from twocenters.separation import (
    EnergyMomentum,
    energy_momentum_arrays,
    hamiltonian,
    separated_energy,
)

X_ESCAPE = 1e3
COLLISION_EPS = 1e-8
SAMPLE_DS = 1e-2
HIT_S_TOL = 1e-12
# Solver rtol per unit of step_tol.  Drift of E near a close approach is the
# separated error divided by F, so the local error target sits well below it.
RTOL_PER_STEP_TOL = 1e-2
MIN_RTOL = 2.3e-14


def solver_tolerances(step_tol: float) -> tuple[float, float]:
    """``(rtol, atol)`` handed to the Runge-Kutta pair for a given ``step_tol``."""
    if not step_tol > 0:
        raise ValueError(f"step_tol must be positive, got {step_tol}")
    rtol = max(step_tol * RTOL_PER_STEP_TOL, MIN_RTOL)
    return rtol, rtol * 1e-2


class EventKind(str, enum.Enum):
    X_TURNING = "x_turning"
    Y_TURNING = "y_turning"
    AXIS_CROSSING = "axis_crossing"
    SECTION_HIT = "section_hit"
    COLLISION_STOP = "collision_stop"


class Event(NamedTuple):
    s: float
    kind: EventKind


class TrajectorySample(NamedTuple):
    s: float
    t: float
    state: SeparatedState | None
    cartesian: CartesianState


@dataclass
class _Segment:
    s0: float
    s1: float
    evaluate: Callable  # s array -> (xi, eta, p_xi, p_eta, t)
    step_points: np.ndarray


@dataclass
class Trajectory:
    """Sampled solution on the extended strip.

    ``xi, eta, p_xi, p_eta`` are the extended-strip coordinates at the
    fictitious times ``s``; ``t`` is the physical time.  ``status`` tells why
    the integration ended: ``"s_max"``, ``"escape"``, ``"collision"`` or
    ``"periodic"``.
    """

    charges: ChargeConfig
    em: EnergyMomentum
    s: np.ndarray
    t: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    p_xi: np.ndarray
    p_eta: np.ndarray
    events: list = field(default_factory=list)
    status: str = "s_max"
    info: dict = field(default_factory=dict)
    _segments: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.s)

    @property
    def x(self):
        return np.cosh(self.xi)

    @property
    def y(self):
        return np.cos(self.eta)

    @property
    def q(self):
        return elliptic_to_cartesian(self.xi, self.eta)

    @property
    def p(self):
        return lower_momenta_to_cartesian(self.xi, self.eta, self.p_xi, self.p_eta)

    @property
    def sheet(self) -> np.ndarray:
        """Half plane of each sample (``True`` for the upper one)."""
        eta = wrap_angle(np.where(self.xi < 0, -self.eta, self.eta))
        return np.asarray(eta) >= 0

    def elliptic(self, i: int) -> EllipticState:
        return EllipticState(float(self.xi[i]), float(self.eta[i]), float(self.p_xi[i]), float(self.p_eta[i]))

    def cartesian(self, i: int) -> CartesianState:
        q1, q2 = self.q
        p1, p2 = self.p
        return CartesianState(float(q1[i]), float(q2[i]), float(p1[i]), float(p2[i]))

    def separated(self, i: int) -> SeparatedState | None:
        """Separated-chart state of sample ``i`` (``None`` on the axis)."""
        xi, eta, p_xi, p_eta = self.xi[i], self.eta[i], self.p_xi[i], self.p_eta[i]
        if xi < 0:
            xi, eta, p_xi, p_eta = -xi, -eta, -p_xi, -p_eta
        eta = wrap_angle(eta)
        sh, s = math.sinh(xi), math.sin(eta)
        if sh == 0 or s == 0:
            return None
        sheet = Sheet.UPPER if eta > 0 else Sheet.LOWER
        y = min(max(math.cos(eta), -1.0), 1.0)
        return SeparatedState(max(math.cosh(xi), 1.0), y, p_xi / sh, p_eta / s, sheet)

    @property
    def samples(self) -> list[TrajectorySample]:
        (q1, q2), (p1, p2) = self.q, self.p
        return [
            TrajectorySample(
                float(self.s[i]), float(self.t[i]), self.separated(i),
                CartesianState(float(q1[i]), float(q2[i]), float(p1[i]), float(p2[i])),
            )
            for i in range(len(self.s))
        ]

    def recomputed_constants(self):
        """``(E, K)`` recomputed from the Cartesian samples."""
        q1, q2 = self.q
        p1, p2 = self.p
        return energy_momentum_arrays(q1, q2, p1, p2, self.charges)

    def drift(self):
        """Relative drift of ``E`` and ``K`` at every sample.

        Deviations are divided by ``max(1, |E0|)`` and ``max(1, |K0|)``.
        """
        e, k = self.recomputed_constants()
        de = np.abs(e - self.em.e) / max(1.0, abs(self.em.e))
        dk = np.abs(k - self.em.k) / max(1.0, abs(self.em.k))
        return de, dk

    def state_at(self, s: float) -> EllipticState:
        """Dense-output extended-strip state at fictitious time ``s``."""
        seg = self._segment_for(s)
        xi, eta, p_xi, p_eta, _ = seg.evaluate(np.atleast_1d(float(s)))
        return EllipticState(float(xi[0]), float(eta[0]), float(p_xi[0]), float(p_eta[0]))

    def _segment_for(self, s):
        if not self._segments:
            raise ValueError("trajectory carries no dense output")
        for seg in self._segments:
            if seg.s0 <= s <= seg.s1:
                return seg
        raise ValueError(f"s={s} outside the integrated range")


def _cosh_sinh(xi):
    # an overshooting trial step returns inf, which makes the solver reject it
    if abs(xi) > 700:
        return math.inf, math.copysign(math.inf, xi)
    return math.cosh(xi), math.sinh(xi)


def _rhs_canonical(e, zp, zm):
    def rhs(s, y):
        xi, eta, p_xi, p_eta, _ = y
        ch, sh = _cosh_sinh(xi)
        s_eta = math.sin(eta)
        return [
            p_xi,
            p_eta,
            sh * (zp + 2 * e * ch),
            s_eta * (zm + 2 * e * math.cos(eta)),
            sh * sh + s_eta * s_eta,
        ]

    return rhs


def _reduced_p_xi(xi, e, zp, k, sigma):
    x = np.cosh(xi)
    return sigma * np.sqrt(np.maximum(2 * (e * x * x + zp * x + k), 0.0))


def _rhs_reduced(e, zp, zm, k, sigma):
    def rhs(s, y):
        xi, eta, p_eta, _ = y
        x, sh = _cosh_sinh(xi)
        s_eta = math.sin(eta)
        p_xi = sigma * math.sqrt(max(2 * (e * x * x + zp * x + k), 0.0))
        return [p_xi, p_eta, s_eta * (zm + 2 * e * math.cos(eta)), sh * sh + s_eta * s_eta]

    return rhs


def _event(fun, terminal=False, direction=0):
    fun.terminal = terminal
    fun.direction = direction
    return fun


def _outer_x_turning_point(e, zp, k) -> float:
    """Largest ``x >= 1`` where ``p_x`` can vanish; ``inf`` if ``x`` is bounded."""
    if e > 0:
        roots = bifurcation._quadratic_roots(e, zp, k)
        return max([1.0, *roots.values])
    if zp > 0:
        return max(1.0, -k / zp)
    if zp == 0 and k > 0:
        return 1.0
    return math.inf


def _far_zone(e, zp, k) -> float:
    x_out = _outer_x_turning_point(e, zp, k)
    return 2 * x_out + 1 if math.isfinite(x_out) else math.inf


def _focus_events(eps):
    # r1 = cosh(xi) - cos(eta), r2 = cosh(xi) + cos(eta) in cancellation-free form
    def near_plus(s, y):
        return 2 * math.sinh(y[0] / 2) ** 2 + 2 * math.sin(y[1] / 2) ** 2 - eps

    def near_minus(s, y):
        return 2 * math.sinh(y[0] / 2) ** 2 + 2 * math.cos(y[1] / 2) ** 2 - eps

    return [_event(near_plus, True, -1), _event(near_minus, True, -1)]


def _approach_events():
    # minima of r1 and r2; a path through a center dips below eps within a
    # single step, which the threshold events above cannot see
    def closest_plus(s, y):
        return math.sinh(y[0]) * y[2] + math.sin(y[1]) * y[3]

    def closest_minus(s, y):
        return math.sinh(y[0]) * y[2] - math.sin(y[1]) * y[3]

    return [_event(closest_plus, False, 1), _event(closest_minus, False, 1)]


def _focus_distance(xi, eta):
    a, b = 2 * math.sinh(xi / 2) ** 2, 2 * math.sin(eta / 2) ** 2
    return min(a + b, a + 2 - b)


def _segment_from_solution(sol, evaluate_full):
    return _Segment(float(sol.t[0]), float(sol.t[-1]), evaluate_full, np.asarray(sol.t))


def _initial_elliptic(initial, charges):
    if isinstance(initial, CartesianState):
        e = hamiltonian(initial, charges)
        ell = cartesian_state_to_elliptic(initial)
    elif isinstance(initial, EllipticState):
        ell = initial
        e = float(separated_energy(ell.xi, ell.eta, ell.p_xi, ell.p_eta, charges))
    else:
        raise TypeError(f"unsupported initial state {initial!r}")
    return ell, e


def _k_of(xi, p_xi, e, zp):
    ch = math.cosh(xi)
    return 0.5 * p_xi * p_xi - zp * ch - e * ch * ch


def integrate(
    initial: CartesianState | EllipticState,
    charges: ChargeConfig,
    s_max: float,
    step_tol: float = 1e-10,
    *,
    sample_ds: float = SAMPLE_DS,
    x_escape: float = X_ESCAPE,
    collision_eps: float = COLLISION_EPS,
    max_segments: int = 10_000,
) -> Trajectory:
    """Integrate the separated flow from ``initial`` up to ``s = s_max``.

    ``step_tol`` is the relative tolerance of the embedded 8(5,3)
    Dormand-Prince pair.  The run ends early when ``x`` exceeds
    ``x_escape`` on an outgoing branch, or when the particle comes within
    ``collision_eps`` of a center (recorded as a ``collision_stop`` event).
    """
    ell, e = _initial_elliptic(initial, charges)
    if e < 0:
        raise NonPositiveEnergy(f"integration needs E >= 0, got E={e}")
    zp, zm = charges.z_plus, charges.z_minus
    k0 = _k_of(ell.xi, ell.p_xi, e, zp)
    rtol, atol = solver_tolerances(step_tol)
    log_escape = math.acosh(x_escape)

    turning = [
        _event(lambda s, y: y[2]),
        _event(lambda s, y: y[3]),
        _event(lambda s, y: y[0]),
        _event(lambda s, y: math.sin(y[1])),
    ]
    turning_kinds = [EventKind.X_TURNING, EventKind.Y_TURNING, EventKind.AXIS_CROSSING, EventKind.AXIS_CROSSING]
    focus = _focus_events(collision_eps)

    segments, events = [], []
    status = "s_max"
    s = 0.0
    state = [ell.xi, ell.eta, ell.p_xi, ell.p_eta, 0.0]
    k = k0
    for _ in range(max_segments):
        if s >= s_max:
            break
        xi_far = math.acosh(_far_zone(e, zp, k)) if math.isfinite(_far_zone(e, zp, k)) else math.inf
        xi0, p_xi0 = state[0], state[2]
        outgoing = xi0 * p_xi0 > 0 or (xi0 == 0 and p_xi0 != 0)
        if abs(xi0) >= xi_far * (1 - 1e-9) and p_xi0 != 0:
            sigma = math.copysign(1.0, p_xi0)
            k = _k_of(xi0, p_xi0, e, zp)
            evs = [
                _event(lambda s, y: y[2]),
                _event(lambda s, y: math.sin(y[1])),
            ]
            kinds = [EventKind.Y_TURNING, EventKind.AXIS_CROSSING]
            if outgoing:
                evs.append(_event(lambda s, y: abs(y[0]) - log_escape, True, 1))
                kinds.append("escape")
            else:
                evs.append(_event(lambda s, y, xf=xi_far: abs(y[0]) - 0.999 * xf, True, -1))
                kinds.append("leave_far")
            sol = solve_ivp(
                _rhs_reduced(e, zp, zm, k, sigma), (s, s_max), [state[0], state[1], state[3], state[4]],
                method="DOP853", rtol=rtol, atol=atol, events=evs, dense_output=True,
            )

            def full(ss, sol=sol, sigma=sigma, k=k):
                xi, eta, p_eta, t = sol.sol(ss)
                return xi, eta, _reduced_p_xi(xi, e, zp, k, sigma), p_eta, t

            y_end = sol.y[:, -1]
            p_end = float(_reduced_p_xi(y_end[0], e, zp, k, sigma))
            next_state = [y_end[0], y_end[1], p_end, y_end[2], y_end[3]]
        else:
            evs = list(turning) + list(focus) + _approach_events()
            kinds = list(turning_kinds) + [EventKind.COLLISION_STOP] * 2 + ["approach"] * 2
            if math.isfinite(xi_far):
                evs.append(_event(lambda s, y, xf=xi_far: abs(y[0]) - xf, True, 1))
                kinds.append("enter_far")
            evs.append(_event(lambda s, y: abs(y[0]) - log_escape, True, 1))
            kinds.append("escape")
            sol = solve_ivp(
                _rhs_canonical(e, zp, zm), (s, s_max), state,
                method="DOP853", rtol=rtol, atol=atol, events=evs, dense_output=True,
            )
            full = lambda ss, sol=sol: tuple(sol.sol(ss))  # noqa: E731
            next_state = list(sol.y[:, -1])
        if sol.status == -1:
            raise RuntimeError(f"integration failed at s={s}: {sol.message}")
        cut = min(
            (float(ts) for kind, times in zip(kinds, sol.t_events) if kind == "approach" for ts in times
             if _focus_distance(*sol.sol(ts)[:2]) < collision_eps),
            default=None,
        )
        if cut is not None:
            steps = np.append(sol.t[sol.t < cut], cut)
            segments.append(_Segment(float(sol.t[0]), cut, full, steps))
            events.extend(
                Event(float(ts), kind) for kind, times in zip(kinds, sol.t_events)
                if isinstance(kind, EventKind) for ts in times if ts < cut
            )
            events.append(Event(cut, EventKind.COLLISION_STOP))
            s = cut
            status = "collision"
            break
        segments.append(_segment_from_solution(sol, full))
        terminal_kind = None
        for kind, times in zip(kinds, sol.t_events):
            for ts in times:
                if isinstance(kind, EventKind):
                    events.append(Event(float(ts), kind))
                if sol.status == 1 and ts == sol.t[-1]:
                    terminal_kind = kind
        s = float(sol.t[-1])
        state = next_state
        if terminal_kind is EventKind.COLLISION_STOP:
            status = "collision"
            break
        if terminal_kind == "escape":
            status = "escape"
            break
    else:
        raise RuntimeError("too many integration segments")

    events.sort(key=lambda ev: ev.s)
    traj = _sample(charges, EnergyMomentum(e, k0), segments, events, sample_ds)
    traj.status = status
    return traj


def _sample(charges, em, segments, events, sample_ds):
    cols = [[] for _ in range(6)]
    event_times = np.array([ev.s for ev in events])
    for seg in segments:
        n0 = math.ceil(seg.s0 / sample_ds)
        grid = np.arange(n0, math.floor(seg.s1 / sample_ds) + 1) * sample_ds
        extra = event_times[(event_times >= seg.s0) & (event_times <= seg.s1)]
        ss = np.unique(np.concatenate([[seg.s0, seg.s1], grid[(grid >= seg.s0) & (grid <= seg.s1)], extra]))
        values = seg.evaluate(ss)
        cols[0].append(ss)
        for j in range(5):
            cols[j + 1].append(np.asarray(values[j], dtype=float))
    s, xi, eta, p_xi, p_eta, t = (np.concatenate(c) for c in cols)
    keep = np.concatenate([[True], np.diff(s) > 0])
    return Trajectory(
        charges, em, s[keep], t[keep], xi[keep], eta[keep], p_xi[keep], p_eta[keep],
        events=list(events), _segments=segments,
    )


def physical_time(trajectory: Trajectory, rule: str = "trapezoid") -> Trajectory:
    """Return a copy whose ``t`` is the quadrature of ``F`` along the samples.

    ``rule`` is ``"trapezoid"`` (sample values only) or ``"midpoint"``
    (``F`` evaluated from the dense output at interval midpoints).  Both are
    only as good as the sampling: on escaping runs ``F`` grows like
    ``cosh(xi)**2`` and the ``t`` carried by :func:`integrate` is the one to use.
    """
    s = trajectory.s
    if len(s) == 0:
        raise ValueError("empty trajectory")
    if rule == "trapezoid":
        f = jacobian_F(trajectory.xi, trajectory.eta)
        dt = 0.5 * (f[1:] + f[:-1]) * np.diff(s)
    elif rule == "midpoint":
        mids = 0.5 * (s[1:] + s[:-1])
        f = np.array([_f_at(trajectory, m) for m in mids])
        dt = f * np.diff(s)
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    t = np.concatenate([[0.0], np.cumsum(dt)])
    return replace(trajectory, t=t)


def _f_at(trajectory, s):
    st = trajectory.state_at(s)
    return float(jacobian_F(st.xi, st.eta))


def initial_state(
    em: EnergyMomentum,
    charges: ChargeConfig,
    x: float,
    y: float,
    sign_x: int = 1,
    sign_y: int = 1,
    sheet: Sheet = Sheet.UPPER,
) -> EllipticState:
    """Extended-strip state with constants ``em`` at the separated point ``(x, y)``.

    The momenta follow from ``p_xi**2 = 2 (E x**2 + Z+ x + K)`` and
    ``p_eta**2 = -2 (E y**2 + Z- y + K)``.
    """
    e, k = em.e, em.k
    qx = e * x * x + charges.z_plus * x + k
    qy = e * y * y + charges.z_minus * y + k
    slack = 1e-12 * (1 + abs(e) * x * x + abs(k))
    if x < 1 or abs(y) > 1 or qx < -slack or qy > slack:
        raise ValueError(f"(x, y) = ({x}, {y}) is not allowed for {em}")
    xi = math.acosh(x)
    eta = math.acos(y)
    if Sheet(sheet) is Sheet.LOWER:
        eta = -eta
    p_xi = math.copysign(math.sqrt(max(2 * qx, 0.0)), sign_x)
    p_eta = math.copysign(math.sqrt(max(-2 * qy, 0.0)), sign_y)
    return EllipticState(xi, eta, p_xi, p_eta)


class SectionKind(str, enum.Enum):
    INTER_FOCAL = "inter_focal_segment"
    OUTER_AXIS = "outer_axis_segment"


@dataclass(frozen=True)
class SectionSpec:
    """Segment of the ``q1`` axis used as a Poincare section.

    ``clip`` is the ``q1`` range of the segment.  For ``OUTER_AXIS``,
    ``side`` is ``-1`` for ``q1 < -1`` and ``+1`` for ``q1 > 1``.
    """

    kind: SectionKind
    clip: tuple[float, float]
    side: int = -1


class SectionHit(NamedTuple):
    s: float
    q1: float
    q2: float
    p1: float
    p2: float

    @property
    def p_normal(self) -> float:
        return self.p2


def choose_section(em: EnergyMomentum, charges: ChargeConfig) -> SectionSpec:
    """Transversal section crossed by the trajectories with constants ``em``."""
    if bifurcation.in_bifurcation_set(em, charges) is not None:
        raise OnBifurcationCurve(f"{em} lies on the bifurcation set")
    region = bifurcation.classify(em, charges)
    if not region.in_hill_region:
        raise NoSectionRule(f"{em} is outside the Hill region")
    xp, yp = (part.split("=")[1] for part in region.pattern.split(";"))
    (y_lo, y_hi), = region.y_intervals
    x_lo = region.x_intervals[0][0]
    if yp == "band" and x_lo == 1:
        return SectionSpec(SectionKind.INTER_FOCAL, (y_lo, y_hi))
    if yp == "lower":
        return SectionSpec(SectionKind.OUTER_AXIS, (-math.inf, -x_lo), side=-1)
    if yp == "upper":
        return SectionSpec(SectionKind.OUTER_AXIS, (x_lo, math.inf), side=1)
    raise NoSectionRule(f"no section rule for pattern {region.pattern} ({region.label})")


def _section_distance(section: SectionSpec):
    if section.kind is SectionKind.INTER_FOCAL:
        return lambda xi, eta: xi
    return lambda xi, eta: np.sin(eta)


def _section_accepts(section: SectionSpec, xi, eta) -> bool:
    q1, _ = elliptic_to_cartesian(xi, eta)
    lo, hi = section.clip
    if section.kind is SectionKind.OUTER_AXIS and math.copysign(1.0, math.cos(eta)) != section.side:
        return False
    return lo <= q1 <= hi


def poincare_hits(trajectory: Trajectory, section: SectionSpec) -> list[SectionHit]:
    """Transversal crossings of ``section``, located by bisection in ``s``."""
    dist = _section_distance(section)
    hits = []
    for seg in trajectory._segments:
        inner = trajectory.s[(trajectory.s >= seg.s0) & (trajectory.s <= seg.s1)]
        grid = np.unique(np.concatenate([seg.step_points, inner]))
        xi, eta, *_ = seg.evaluate(grid)
        g = dist(xi, eta)
        for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]:
            a, b, ga = grid[i], grid[i + 1], g[i]
            while b - a > HIT_S_TOL * max(1.0, abs(a)):
                m = 0.5 * (a + b)
                xm, em_, *_ = seg.evaluate(np.array([m]))
                gm = dist(xm[0], em_[0])
                if np.sign(gm) == np.sign(ga):
                    a, ga = m, gm
                else:
                    b = m
            sh = 0.5 * (a + b)
            x1, e1, px, pe, _ = (float(v[0]) for v in seg.evaluate(np.array([sh])))
            if not _section_accepts(section, x1, e1):
                continue
            q1, q2 = elliptic_to_cartesian(x1, e1)
            p1, p2 = lower_momenta_to_cartesian(x1, e1, px, pe)
            hits.append(SectionHit(sh, float(q1), float(q2), float(p1), float(p2)))
    return hits


class Boundedness(str, enum.Enum):
    BOUNDED = "bounded"
    SCATTERING = "scattering"


def detect_boundedness(
    em: EnergyMomentum,
    charges: ChargeConfig,
    component: tuple[float, float],
    s_check: float = 1e3,
    step_tol: float = 1e-10,
) -> Boundedness:
    """Bounded/scattering verdict for one ``x`` component of the Hill region.

    The verdict comes from the classification and is cross-checked by
    integrating from inside the component; a contradiction raises
    :class:`IntegratorDefect`.
    """
    region = bifurcation.classify(em, charges)
    lo, hi = component
    match = [iv for iv in region.x_intervals if abs(iv[0] - lo) <= 1e-9 and (iv[1] == hi or abs(iv[1] - hi) <= 1e-9)]
    if not match or not region.y_intervals:
        raise ValueError(f"{component} is not an x component of {region.x_intervals}")
    lo, hi = match[0]
    verdict = Boundedness.BOUNDED if math.isfinite(hi) else Boundedness.SCATTERING
    y_lo, y_hi = region.y_intervals[0]
    x0 = 0.5 * (lo + hi) if math.isfinite(hi) else lo + max(1.0, lo)
    for frac in (0.5, 0.25, 0.75):
        y0 = y_lo + frac * (y_hi - y_lo)
        traj = integrate(initial_state(em, charges, x0, y0), charges, s_check, step_tol)
        if traj.status == "collision":
            continue
        contained = bool(np.all(traj.x <= hi + 1e-6)) and traj.status != "escape"
        if contained != (verdict is Boundedness.BOUNDED):
            raise IntegratorDefect(
                f"classification says {verdict.value} but integration from x={x0} "
                f"ended with status {traj.status!r}, max x={traj.x.max()}"
            )
        return verdict
    return verdict


def _frozen_run(charges, em, y0, rhs, s_max, step_tol, unpack, events=()):
    rtol, atol = solver_tolerances(step_tol)
    sol = solve_ivp(rhs, (0.0, s_max), y0, method="DOP853", rtol=rtol, atol=atol,
                    events=list(events) or None, dense_output=True)
    seg = _segment_from_solution(sol, lambda ss: unpack(sol.sol(ss)))
    return sol, seg


def inter_focal_orbit(e: float, charges: ChargeConfig, step_tol: float = 1e-12, sample_ds: float = SAMPLE_DS) -> Trajectory:
    """The orbit with ``x = 1`` on the curve ``K = -Z+ - E``, over one period.

    The particle moves on the segment joining the centers; passages through
    a center are continued as reflections (the ``eta`` motion is regular
    there).  ``info["period_s"]`` and ``info["period_t"]`` hold the periods.
    """
    zp, zm = charges.z_plus, charges.z_minus
    k = -zp - e
    em = EnergyMomentum(e, k)
    region = bifurcation.classify(em, charges)
    if not region.y_intervals:
        raise ValueError(f"{em} is outside the Hill region")
    y_lo, y_hi = region.y_intervals[0]
    eta0 = math.acos(0.5 * (y_lo + y_hi))
    p0 = math.sqrt(max(-2 * (e * math.cos(eta0) ** 2 + zm * math.cos(eta0) + k), 0.0))

    def rhs(s, y):
        eta, p_eta, _ = y
        return [p_eta, math.sin(eta) * (zm + 2 * e * math.cos(eta)), math.sin(eta) ** 2]

    circulating = y_lo == -1 and y_hi == 1

    def back(s, y):
        # returns to the start: eta advanced by 2 pi, or p_eta back to its start sign after a libration
        return (y[0] - eta0 - 2 * math.pi) if circulating else (y[0] - eta0)

    back.terminal = True
    back.direction = 1 if circulating else 0

    def unpack(v):
        eta, p_eta, t = v
        zeros = np.zeros_like(eta)
        return zeros, eta, zeros, p_eta, t

    s_guess = 1e3
    rtol, atol = solver_tolerances(step_tol)
    sol = solve_ivp(rhs, (0.0, s_guess), [eta0, p0, 0.0], method="DOP853", rtol=rtol,
                    atol=atol, events=[back], dense_output=True)
    if not circulating:
        # a libration returns to eta0 twice per period; take the second return with p_eta > 0
        ts = [t for t, yv in zip(sol.t_events[0], sol.y_events[0]) if t > 0 and yv[1] > 0]
        period = ts[0] if ts else sol.t[-1]
        sol = solve_ivp(rhs, (0.0, period), [eta0, p0, 0.0], method="DOP853", rtol=rtol,
                        atol=atol, dense_output=True)
    seg = _segment_from_solution(sol, lambda ss: unpack(sol.sol(ss)))
    traj = _sample(charges, em, [seg], [], sample_ds)
    traj.status = "periodic"
    traj.info.update(period_s=float(traj.s[-1]), period_t=float(traj.t[-1]))
    return traj


def outer_axis_orbit(
    e: float,
    charges: ChargeConfig,
    side: int = -1,
    x0: float = 10.0,
    s_max: float = 100.0,
    step_tol: float = 1e-12,
    sample_ds: float = SAMPLE_DS,
    x_escape: float = X_ESCAPE,
) -> Trajectory:
    """Motion on the outer ``q1`` axis (``y`` frozen at ``side``).

    The particle starts at ``|q1| = x0`` moving towards the centers.  On
    ``side = -1`` the constants lie on ``K = Z- - E``, on ``side = +1`` on
    ``K = -Z- - E``.  A passage of ``xi`` through zero is a bounce on the
    center.
    """
    zp, zm = charges.z_plus, charges.z_minus
    eta0 = math.pi if side < 0 else 0.0
    k = -(zm * math.cos(eta0) + e)
    em = EnergyMomentum(e, k)
    qx = e * x0 * x0 + zp * x0 + k
    if qx < 0:
        raise ValueError(f"x0={x0} is forbidden for {em}")
    p0 = -math.sqrt(2 * qx)

    def rhs(s, y):
        xi, p_xi, _ = y
        ch, sh = _cosh_sinh(xi)
        return [p_xi, sh * (zp + 2 * e * ch), sh * sh]

    log_escape = math.acosh(x_escape)
    escape = _event(lambda s, y: abs(y[0]) - log_escape - 1e-9, True, 1)

    def unpack(v):
        xi, p_xi, t = v
        return xi, np.full_like(xi, eta0), p_xi, np.zeros_like(xi), t

    sol, seg = _frozen_run(charges, em, [math.acosh(x0), p0, 0.0], rhs, s_max, step_tol, unpack, [escape])
    traj = _sample(charges, em, [seg], [], sample_ds)
    traj.status = "escape" if sol.status == 1 else "s_max"
    return traj
