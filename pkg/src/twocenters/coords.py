"""Coordinate charts for the planar two-center problem.

The centers sit at ``(+1, 0)`` (strength ``z1``) and ``(-1, 0)`` (strength
``z2``).  Three charts are used:

* Cartesian ``(q1, q2, p1, p2)``;
* elliptic ``(xi, eta, p_xi, p_eta)`` with ``q1 = cosh(xi) cos(eta)`` and
  ``q2 = sinh(xi) sin(eta)``.  On the extended strip ``xi`` may be negative;
  ``(xi, eta)`` and ``(-xi, -eta)`` are the two sheets over the same point;
* separated ``(x, y, p_x, p_y)`` with ``x = cosh(xi)``, ``y = cos(eta)``,
  ``p_xi = sinh(xi) p_x`` and ``p_eta = sin(eta) p_y``.

All scalar functions also accept numpy arrays unless noted otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from twocenters.errors import DegenerateChart, FocusCollision

#: Guard for focus collisions and degenerate chart points.
EPS_CHART = 1e-10


@dataclass(frozen=True)
class ChargeConfig:
    """Strengths of the center at ``+a`` (``z1``) and at ``-a`` (``z2``)."""

    z1: float
    z2: float

    def __post_init__(self):
        for name in ("z1", "z2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value == 0:
                raise ValueError(f"{name} must be finite and nonzero, got {value!r}")
        object.__setattr__(self, "z1", float(self.z1))
        object.__setattr__(self, "z2", float(self.z2))

    @property
    def z_plus(self) -> float:
        return self.z2 + self.z1

    @property
    def z_minus(self) -> float:
        return self.z2 - self.z1

    def canonical(self) -> tuple["ChargeConfig", bool]:
        """Relabel the centers so that ``z_minus >= 0``.

        Returns the (possibly swapped) configuration and whether the swap,
        which corresponds to the reflection ``q1 -> -q1``, was applied.
        """
        if self.z_minus < 0:
            return ChargeConfig(self.z2, self.z1), True
        return self, False


class Sheet(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class CartesianState:
    q1: float
    q2: float
    p1: float
    p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.p1, self.p2])


@dataclass(frozen=True)
class EllipticState:
    """Point of the cotangent bundle of the extended strip ``R x [-pi, pi]``."""

    xi: float
    eta: float
    p_xi: float
    p_eta: float

    @property
    def sheet(self) -> Sheet:
        """Half plane containing the Cartesian projection."""
        xi, eta = self.xi, self.eta
        if xi < 0:
            eta = -eta
        eta = wrap_angle(eta)
        return Sheet.UPPER if eta >= 0 else Sheet.LOWER

    def as_array(self) -> np.ndarray:
        return np.array([self.xi, self.eta, self.p_xi, self.p_eta])


@dataclass(frozen=True)
class SeparatedState:
    x: float
    y: float
    p_x: float
    p_y: float
    sheet: Sheet = Sheet.UPPER

    def __post_init__(self):
        if self.x < 1 or abs(self.y) > 1:
            raise ValueError(f"separated state needs x >= 1 and |y| <= 1, got x={self.x}, y={self.y}")
        object.__setattr__(self, "sheet", Sheet(self.sheet))


def wrap_angle(eta):
    """Map an angle to ``(-pi, pi]``."""
    wrapped = np.mod(np.asarray(eta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped == -np.pi, np.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def elliptic_to_cartesian(xi, eta):
    """Return ``(q1, q2)`` for elliptic coordinates ``(xi, eta)``."""
    return np.cosh(xi) * np.cos(eta), np.sinh(xi) * np.sin(eta)


def focus_distances(q1, q2):
    """Distances ``(r1, r2)`` to the centers at ``+a`` and ``-a``."""
    return np.hypot(q1 - 1.0, q2), np.hypot(q1 + 1.0, q2)


def cartesian_to_elliptic(q1: float, q2: float, eps: float = EPS_CHART) -> tuple[float, float]:
    """Inverse of :func:`elliptic_to_cartesian` on ``xi >= 0``.

    Uses the principal branch of the complex inverse hyperbolic cosine,
    since ``q1 + i q2 = cosh(xi + i eta)``.  Points of the inter-focal
    segment get ``xi = 0``; the negative ``q1``-axis gets ``eta = +pi``.
    """
    r1, r2 = focus_distances(q1, q2)
    if min(r1, r2) < eps:
        raise FocusCollision(f"point ({q1}, {q2}) is within {eps} of a center")
    xi, eta = _complex_arccosh(np.asarray(q1, dtype=float), np.asarray(q2, dtype=float))
    return float(xi), float(eta)


def _complex_arccosh(q1, q2):
    w = np.arccosh(q1 + 1j * q2)
    eta = np.where(w.imag == -np.pi, np.pi, w.imag)
    return w.real, eta


def cartesian_to_elliptic_array(q1, q2):
    """Vectorized :func:`cartesian_to_elliptic` without the focus guard."""
    return _complex_arccosh(np.asarray(q1, dtype=float), np.asarray(q2, dtype=float))


def jacobian_F(xi, eta):
    """Jacobian determinant ``sinh(xi)**2 + sin(eta)**2`` of the elliptic map."""
    return np.sinh(xi) ** 2 + np.sin(eta) ** 2


def jacobian_matrix(xi: float, eta: float) -> np.ndarray:
    """The matrix ``DG`` of partial derivatives of ``(q1, q2)``."""
    ch, sh = math.cosh(xi), math.sinh(xi)
    c, s = math.cos(eta), math.sin(eta)
    return np.array([[sh * c, -ch * s], [ch * s, sh * c]])


def lift_momenta_to_elliptic(xi, eta, p1, p2, eps: float = EPS_CHART):
    """Cotangent lift ``(p_xi, p_eta) = DG^T (p1, p2)``.

    Raises :class:`DegenerateChart` where the lift cannot be inverted
    (``F < eps``, i.e. at the centers).
    """
    if np.any(jacobian_F(xi, eta) < eps):
        raise DegenerateChart(f"momentum lift is singular at xi={xi}, eta={eta}")
    return _lift(xi, eta, p1, p2)


def _lift(xi, eta, p1, p2):
    ch, sh = np.cosh(xi), np.sinh(xi)
    c, s = np.cos(eta), np.sin(eta)
    p_xi = sh * c * p1 + ch * s * p2
    p_eta = -ch * s * p1 + sh * c * p2
    return p_xi, p_eta


def lower_momenta_to_cartesian(xi, eta, p_xi, p_eta):
    """Inverse lift ``(p1, p2) = DG (p_xi, p_eta) / F``; unguarded."""
    ch, sh = np.cosh(xi), np.sinh(xi)
    c, s = np.cos(eta), np.sin(eta)
    f = sh * sh + s * s
    with np.errstate(divide="ignore", invalid="ignore"):
        p1 = (sh * c * p_xi - ch * s * p_eta) / f
        p2 = (ch * s * p_xi + sh * c * p_eta) / f
    return p1, p2


def cartesian_state_to_elliptic(state: CartesianState, eps: float = EPS_CHART) -> EllipticState:
    xi, eta = cartesian_to_elliptic(state.q1, state.q2, eps)
    p_xi, p_eta = lift_momenta_to_elliptic(xi, eta, state.p1, state.p2, eps)
    return EllipticState(xi, eta, float(p_xi), float(p_eta))


def elliptic_state_to_cartesian(state: EllipticState, eps: float = EPS_CHART) -> CartesianState:
    if jacobian_F(state.xi, state.eta) < eps:
        raise FocusCollision(f"elliptic state {state} projects onto a center")
    q1, q2 = elliptic_to_cartesian(state.xi, state.eta)
    p1, p2 = lower_momenta_to_cartesian(state.xi, state.eta, state.p_xi, state.p_eta)
    return CartesianState(float(q1), float(q2), float(p1), float(p2))


def involution(state: EllipticState) -> EllipticState:
    """Deck transformation ``(p_xi, p_eta, xi, eta) -> -(p_xi, p_eta, xi, eta)``."""
    return EllipticState(-state.xi, -state.eta, -state.p_xi, -state.p_eta)


def elliptic_to_separated(state: EllipticState, eps: float = EPS_CHART) -> SeparatedState:
    """Map an elliptic state to the separated chart of its half plane.

    A state on the ``xi < 0`` sheet is first moved to ``xi > 0`` by the
    involution.  Both half planes use the same formulas; the sign of
    ``sin(eta)`` is carried by ``p_y`` and recorded in ``sheet``.
    """
    if state.xi < 0:
        state = involution(state)
    eta = wrap_angle(state.eta)
    sh, s = math.sinh(state.xi), math.sin(eta)
    if abs(sh) < eps or abs(s) < eps:
        raise DegenerateChart(f"separated chart is degenerate at xi={state.xi}, eta={eta}")
    sheet = Sheet.UPPER if eta > 0 else Sheet.LOWER
    x = max(math.cosh(state.xi), 1.0)
    y = min(max(math.cos(eta), -1.0), 1.0)
    return SeparatedState(x, y, state.p_xi / sh, state.p_eta / s, sheet)


def separated_to_elliptic(state: SeparatedState) -> EllipticState:
    xi = math.acosh(state.x)
    eta = math.acos(state.y)
    if state.sheet is Sheet.LOWER:
        eta = -eta
    return EllipticState(xi, eta, math.sinh(xi) * state.p_x, math.sin(eta) * state.p_y)
