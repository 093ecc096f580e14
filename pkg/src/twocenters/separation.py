"""Hamiltonians of the separated problem and the energy-momentum map.

In elliptic coordinates the Hamiltonian reads ``(H1 + H2) / F`` with

    H1 = p_xi**2 / 2 - Z+ cosh(xi),    H2 = p_eta**2 / 2 + Z- cos(eta).

Fixing the energy ``E`` and passing to the fictitious time ``s``
(``dt/ds = F``) gives the decoupled sum ``H_xi + H_eta = F (H - E)`` with

    H_xi  = p_xi**2 / 2 + V_xi(xi),    V_xi  = -Z+ cosh(xi) - E cosh(xi)**2,
    H_eta = p_eta**2 / 2 + V_eta(eta), V_eta =  Z- cos(eta) + E cos(eta)**2,

and the second constant of motion is ``K = H_xi = -H_eta``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from twocenters.coords import (
    EPS_CHART,
    CartesianState,
    ChargeConfig,
    cartesian_state_to_elliptic,
    cartesian_to_elliptic_array,
    focus_distances,
    jacobian_F,
    _lift,
)
from twocenters.errors import ConsistencyWarning, DomainError, FocusCollision

#: Relative tolerance of the internal two-way evaluation of K.
DUAL_K_RTOL = 1e-10


@dataclass(frozen=True)
class EnergyMomentum:
    """Values ``(E, K)`` of the two constants of motion.

    ``k`` is the value of ``H_xi``; it is the same quantity that is
    sometimes written ``L``.
    """

    e: float
    k: float


class Branch(str, enum.Enum):
    """``PLUS`` is the ``x`` (``Z+``) branch, ``MINUS`` the ``y`` (``Z-``) branch."""

    PLUS = "plus"
    MINUS = "minus"


def hamiltonian(state: CartesianState, charges: ChargeConfig, eps: float = EPS_CHART) -> float:
    r1, r2 = focus_distances(state.q1, state.q2)
    if min(r1, r2) < eps:
        raise FocusCollision(f"state {state} is within {eps} of a center")
    return float(0.5 * (state.p1**2 + state.p2**2) - charges.z1 / r1 - charges.z2 / r2)


def hamiltonian_array(q1, q2, p1, p2, charges: ChargeConfig):
    """Vectorized Cartesian Hamiltonian (no focus guard)."""
    r1, r2 = focus_distances(np.asarray(q1), np.asarray(q2))
    with np.errstate(divide="ignore"):
        return 0.5 * (np.square(p1) + np.square(p2)) - charges.z1 / r1 - charges.z2 / r2


def potential_v_xi(xi, e: float, charges: ChargeConfig):
    ch = np.cosh(xi)
    return -charges.z_plus * ch - e * ch * ch


def potential_v_eta(eta, e: float, charges: ChargeConfig):
    c = np.cos(eta)
    return charges.z_minus * c + e * c * c


def potential_v_x(x, e: float, charges: ChargeConfig):
    if np.any(np.asarray(x) < 1):
        raise DomainError(f"V_x needs x >= 1, got {x}")
    return -charges.z_plus * x - e * x * x


def potential_v_y(y, e: float, charges: ChargeConfig):
    if np.any(np.abs(np.asarray(y)) > 1):
        raise DomainError(f"V_y needs |y| <= 1, got {y}")
    return charges.z_minus * y + e * y * y


def h_xi(p_xi, xi, e: float, charges: ChargeConfig):
    return 0.5 * p_xi * p_xi + potential_v_xi(xi, e, charges)


def h_eta(p_eta, eta, e: float, charges: ChargeConfig):
    return 0.5 * p_eta * p_eta + potential_v_eta(eta, e, charges)


def h_x(p_x, x, e: float, charges: ChargeConfig):
    return 0.5 * (x * x - 1) * p_x * p_x + potential_v_x(x, e, charges)


def h_y(p_y, y, e: float, charges: ChargeConfig):
    return 0.5 * (1 - y * y) * p_y * p_y + potential_v_y(y, e, charges)


def _k_pair(xi, eta, p_xi, p_eta, e, charges):
    ch, c = np.cosh(xi), np.cos(eta)
    k_from_xi = 0.5 * p_xi * p_xi - charges.z_plus * ch - ch * ch * e
    k_from_eta = -(0.5 * p_eta * p_eta + charges.z_minus * c + c * c * e)
    return k_from_xi, k_from_eta


def k_values(state: CartesianState, charges: ChargeConfig) -> tuple[float, float, float]:
    """Return ``(E, K_xi, K_eta)``: the energy and both expressions of K."""
    e = hamiltonian(state, charges)
    ell = cartesian_state_to_elliptic(state)
    k1, k2 = _k_pair(ell.xi, ell.eta, ell.p_xi, ell.p_eta, e, charges)
    return e, float(k1), float(k2)


def energy_momentum_map(state: CartesianState, charges: ChargeConfig) -> EnergyMomentum:
    """The map ``(H, H_xi)`` evaluated on a Cartesian phase-space point.

    ``K`` is evaluated both as ``H1 - cosh(xi)**2 E`` and as
    ``-(H2 + cos(eta)**2 E)``; a disagreement beyond ``DUAL_K_RTOL`` emits a
    :class:`ConsistencyWarning`.
    """
    e, k1, k2 = k_values(state, charges)
    scale = max(1.0, abs(k1), abs(k2))
    if abs(k1 - k2) > DUAL_K_RTOL * scale:
        warnings.warn(
            f"K evaluations disagree: {k1!r} vs {k2!r} at {state}",
            ConsistencyWarning,
            stacklevel=2,
        )
    return EnergyMomentum(e, k1)


def energy_momentum_arrays(q1, q2, p1, p2, charges: ChargeConfig):
    """Vectorized ``(E, K)`` from Cartesian arrays (unguarded)."""
    e = hamiltonian_array(q1, q2, p1, p2, charges)
    xi, eta = cartesian_to_elliptic_array(q1, q2)
    p_xi, p_eta = _lift(xi, eta, np.asarray(p1), np.asarray(p2))
    k, _ = _k_pair(xi, eta, p_xi, p_eta, e, charges)
    return e, k


def separated_energy(xi, eta, p_xi, p_eta, charges: ChargeConfig):
    """Energy ``(H1 + H2) / F`` computed directly in elliptic variables."""
    h1 = 0.5 * p_xi * p_xi - charges.z_plus * np.cosh(xi)
    h2 = 0.5 * p_eta * p_eta + charges.z_minus * np.cos(eta)
    return (h1 + h2) / jacobian_F(xi, eta)


def _branch_z(branch: Branch, charges: ChargeConfig) -> float:
    return charges.z_plus if Branch(branch) is Branch.PLUS else charges.z_minus


@dataclass(frozen=True)
class MotionPolynomial:
    """``P(s) = 2 (s**2 - 1) (E s**2 + Z s + K)`` for one branch."""

    branch: Branch
    e: float
    z: float
    k: float

    @property
    def coefficients(self) -> np.ndarray:
        """Coefficients in descending powers of ``s``."""
        e, z, k = self.e, self.z, self.k
        return np.array([2 * e, 2 * z, 2 * (k - e), -2 * z, -2 * k])

    def quadratic(self, s):
        return self.e * s * s + self.z * s + self.k

    def evaluate(self, s):
        return 2 * (s * s - 1) * self.quadratic(s)

    __call__ = evaluate


def motion_polynomial(branch: Branch, em: EnergyMomentum, charges: ChargeConfig) -> MotionPolynomial:
    branch = Branch(branch)
    return MotionPolynomial(branch, em.e, _branch_z(branch, charges), em.k)


def momentum_squared(s: float, branch: Branch, em: EnergyMomentum, charges: ChargeConfig) -> float:
    """Squared separated momentum ``p_x**2`` or ``p_y**2`` at ``s``.

    A negative value marks a classically forbidden point.  At the fixed
    roots ``s = +-1`` the quotient is 0/0; the finite one-sided limit is
    returned when the quadratic factor vanishes there as well, otherwise a
    signed infinity (positive on the allowed side).
    """
    branch = Branch(branch)
    poly = motion_polynomial(branch, em, charges)
    q = poly.quadratic(s)
    e, z = poly.e, poly.z
    vanishing = abs(q) <= 8 * np.finfo(float).eps * (abs(e) + abs(z) + abs(poly.k))
    if branch is Branch.PLUS:
        if s < 1:
            raise DomainError(f"x-branch needs s >= 1, got {s}")
        if s == 1:
            return 2 * e + z if vanishing else math.copysign(math.inf, q)
        return float(2 * q / (s * s - 1))
    if abs(s) > 1:
        raise DomainError(f"y-branch needs |s| <= 1, got {s}")
    if s == 1:
        return 2 * e + z if vanishing else math.copysign(math.inf, -q)
    if s == -1:
        return 2 * e - z if vanishing else math.copysign(math.inf, -q)
    return float(-2 * q / (1 - s * s))
