"""Bifurcation set of the energy-momentum map for ``E >= 0``.

The set is a union of the threshold ``E = 0`` and of pieces of the lines and
hyperbolas below, restricted to the Hill region ``K+(E) <= K <= K-(E)``::

    L0   : E = 0                 Lp1 : K =  Z+ - E  (never part of the set)
    Lm1  : K =  Z- - E           Lp2 : K = -Z+ - E
    Lm2  : K = -Z- - E           Lp3 : 4 E K = Z+**2
    Lm3  : 4 E K = Z-**2

Motion types are read off the sign pattern of the motion polynomials on
``x >= 1`` and ``|y| <= 1``.  Bounds, curves and labels are computed in the
relabeled frame with ``Z- >= 0``; intervals are reported in the caller's
frame.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from twocenters.coords import ChargeConfig
from twocenters.errors import OutOfScope
from twocenters.separation import Branch, EnergyMomentum

#: Default curve-membership tolerance (absolute, in K; in E for L0).
CURVE_TOL = 1e-9

_EPS = np.finfo(float).eps


class CurveId(str, enum.Enum):
    L0 = "L0"
    Lm1 = "Lm1"
    Lm2 = "Lm2"
    Lm3 = "Lm3"
    Lp1 = "Lp1"
    Lp2 = "Lp2"
    Lp3 = "Lp3"


class ChargeCase(str, enum.Enum):
    ZminusZero = "ZminusZero"
    ZplusZero = "ZplusZero"
    SameSign = "SameSign"
    OppositeSignPlusPositive = "OppositeSignPlusPositive"
    OppositeSignPlusNegative = "OppositeSignPlusNegative"


Interval = tuple[float, float]


@dataclass(frozen=True)
class RootSet:
    """Real movable roots in ascending order; ``double`` marks a repeated root."""

    values: tuple[float, ...]
    double: bool = False

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class RegionClassification:
    label: str
    pattern: str
    x_intervals: tuple[Interval, ...]
    y_intervals: tuple[Interval, ...]
    bounded_component: bool
    on_curves: frozenset = field(default_factory=frozenset)

    @property
    def in_hill_region(self) -> bool:
        return bool(self.x_intervals) and bool(self.y_intervals)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "pattern": self.pattern,
            "x_intervals": [list(iv) for iv in self.x_intervals],
            "y_intervals": [list(iv) for iv in self.y_intervals],
            "bounded": self.bounded_component,
            "on_curves": sorted(c.value for c in self.on_curves),
        }


def k_plus(e: float, charges: ChargeConfig) -> float:
    """Lower bound of K at energy ``e`` (``-inf`` for ``e > 0``)."""
    zp = charges.z_plus
    if e > 0:
        return -math.inf
    if e <= min(-zp / 2, 0.0):
        return -(zp + e)
    if e == 0:
        # zp > 0 here; the limit of zp**2 / (4 e) as e -> 0-
        return -math.inf
    return zp * zp / (4 * e)


def k_minus(e: float, charges: ChargeConfig) -> float:
    """Upper bound of K at energy ``e``."""
    zm = abs(charges.z_minus)
    if e <= zm / 2:
        return zm - e
    return zm * zm / (4 * e)


def curve_k(curve: CurveId, e: float, charges: ChargeConfig) -> float | None:
    """K on ``curve`` at energy ``e``; ``None`` for L0 and hyperbolas at ``e = 0``."""
    zp, zm = charges.z_plus, abs(charges.z_minus)
    curve = CurveId(curve)
    if curve is CurveId.L0:
        return None
    if curve is CurveId.Lm1:
        return zm - e
    if curve is CurveId.Lm2:
        return -zm - e
    if curve is CurveId.Lp1:
        return zp - e
    if curve is CurveId.Lp2:
        return -zp - e
    if e == 0:
        return None
    if curve is CurveId.Lp3:
        return zp * zp / (4 * e)
    return zm * zm / (4 * e)


def curve_effective(curve: CurveId, e: float, charges: ChargeConfig) -> bool:
    """Whether the double root on ``curve`` at ``e`` lies in the coordinate range.

    Only ``Lp3`` can fail: its double root ``-Z+/(2E)`` is below 1 for
    ``E > |Z+|/2`` and then leaves the ``x`` intervals unchanged.
    """
    if CurveId(curve) is CurveId.Lp3:
        return e > 0 and -charges.z_plus / (2 * e) >= 1
    return True


def discriminant(em: EnergyMomentum, branch: Branch, charges: ChargeConfig) -> float:
    """Discriminant of the motion polynomial, up to a positive factor."""
    z = charges.z_plus if Branch(branch) is Branch.PLUS else charges.z_minus
    e, k = em.e, em.k
    return (z * z - 4 * e * k) * (e + k - z) ** 2 * (e + k + z) ** 2


def _quadratic_roots(e: float, z: float, k: float) -> RootSet:
    if e == 0:
        if z == 0:
            return RootSet(())
        return RootSet((-k / z,))
    disc = z * z - 4 * e * k
    if abs(disc) <= 8 * _EPS * (z * z + 4 * abs(e * k)):
        return RootSet((-z / (2 * e),), double=True)
    if disc < 0:
        return RootSet(())
    # Cancellation-free form of -z/2e +- sqrt(z**2/4e**2 - k/e)
    q = -0.5 * (z + math.copysign(math.sqrt(disc), z))
    r1 = q / e
    r2 = k / q if q != 0 else -r1
    return RootSet(tuple(sorted((r1, r2))))


def movable_roots(em: EnergyMomentum, branch: Branch, charges: ChargeConfig) -> RootSet:
    """Real roots of ``E s**2 + Z s + K`` for the chosen branch."""
    z = charges.z_plus if Branch(branch) is Branch.PLUS else charges.z_minus
    return _quadratic_roots(em.e, z, em.k)


def charge_case(charges: ChargeConfig) -> ChargeCase:
    canon, _ = charges.canonical()
    zp, zm = canon.z_plus, canon.z_minus
    if zm == 0:
        return ChargeCase.ZminusZero
    if zp == 0:
        return ChargeCase.ZplusZero
    if abs(zp) > zm:
        return ChargeCase.SameSign
    if zp > 0:
        return ChargeCase.OppositeSignPlusPositive
    return ChargeCase.OppositeSignPlusNegative


_CURVE_SETS = {
    ChargeCase.ZminusZero: (CurveId.L0, CurveId.Lm1, CurveId.Lp2),
    ChargeCase.ZplusZero: (CurveId.L0, CurveId.Lm1, CurveId.Lm2, CurveId.Lm3, CurveId.Lp2),
    ChargeCase.SameSign: (CurveId.L0, CurveId.Lm1, CurveId.Lm2, CurveId.Lm3, CurveId.Lp2),
    ChargeCase.OppositeSignPlusPositive: (CurveId.L0, CurveId.Lm1, CurveId.Lm2, CurveId.Lm3, CurveId.Lp2),
    ChargeCase.OppositeSignPlusNegative: (
        CurveId.L0, CurveId.Lm1, CurveId.Lm2, CurveId.Lm3, CurveId.Lp2, CurveId.Lp3,
    ),
}


def bifurcation_curve_set(charges: ChargeConfig) -> frozenset:
    return frozenset(_CURVE_SETS[charge_case(charges)])


def in_hill_region(em: EnergyMomentum, charges: ChargeConfig, tol: float = 0.0) -> bool:
    return k_plus(em.e, charges) - tol <= em.k <= k_minus(em.e, charges) + tol


def in_bifurcation_set(
    em: EnergyMomentum, charges: ChargeConfig, tol: float = CURVE_TOL
) -> frozenset | None:
    """Curves of the bifurcation set passing within ``tol`` of ``em``.

    Returns ``None`` for regular points and for points outside the Hill
    region.
    """
    if em.e < 0:
        raise OutOfScope("bifurcation set is only described for E >= 0")
    if not in_hill_region(em, charges, tol):
        return None
    hits = set()
    for curve in bifurcation_curve_set(charges):
        if curve is CurveId.L0:
            if abs(em.e) <= tol:
                hits.add(curve)
            continue
        k = curve_k(curve, em.e, charges)
        if k is not None and abs(em.k - k) <= tol and curve_effective(curve, em.e, charges):
            hits.add(curve)
    return frozenset(hits) or None


def _x_intervals(e: float, zp: float, k: float) -> tuple[Interval, ...]:
    q_at_one = e + zp + k
    if e == 0:
        if zp > 0:
            return ((max(1.0, -k / zp), math.inf),)
        if zp < 0:
            return ((1.0, max(1.0, -k / zp)),) if q_at_one >= 0 else ()
        return ((1.0, math.inf),) if k >= 0 else ()
    roots = _quadratic_roots(e, zp, k)
    if q_at_one < 0:
        return ((max(roots[-1], 1.0), math.inf),)
    if len(roots) == 2 and -zp / (2 * e) > 1:
        r3 = 1.0 if q_at_one == 0 else max(roots[0], 1.0)
        return ((1.0, r3), (roots[1], math.inf))
    return ((1.0, math.inf),)


def _y_intervals(e: float, zm: float, k: float) -> tuple[Interval, ...]:
    q_lo, q_hi = e - zm + k, e + zm + k
    if e == 0:
        if zm > 0:
            return ((-1.0, min(1.0, -k / zm)),) if q_lo <= 0 else ()
        if zm < 0:
            return ((max(-1.0, -k / zm), 1.0),) if q_hi <= 0 else ()
        return ((-1.0, 1.0),) if k <= 0 else ()
    roots = _quadratic_roots(e, zm, k)
    if not roots:
        return ()
    lo = -1.0 if q_lo <= 0 else roots[0]
    hi = 1.0 if q_hi <= 0 else roots[-1]
    lo, hi = max(lo, -1.0), min(hi, 1.0)
    if lo > hi:
        return ()
    return ((lo, hi),)


def _x_pattern(ivs) -> str:
    if not ivs:
        return "empty"
    if len(ivs) == 2:
        return "split"
    lo, hi = ivs[0]
    if math.isinf(hi):
        return "full" if lo == 1 else "outer"
    return "inner"


def _y_pattern(ivs) -> str:
    if not ivs:
        return "empty"
    lo, hi = ivs[0]
    if lo == -1 and hi == 1:
        return "full"
    if lo == -1:
        return "lower"
    if hi == 1:
        return "upper"
    return "band"


# Region labels for E > 0 keyed by (case, sign of Z+) and (x pattern, y pattern),
# numbered in the order met when K increases at fixed large E.
_LABELS = {
    (ChargeCase.ZminusZero, ">"): {
        ("outer", "full"): "I", ("full", "full"): "II", ("full", "band"): "III",
    },
    (ChargeCase.ZminusZero, "<"): {
        ("outer", "full"): "I", ("outer", "band"): "II", ("full", "band"): "III",
    },
    (ChargeCase.ZplusZero, "0"): {
        ("outer", "full"): "I", ("outer", "lower"): "II",
        ("full", "lower"): "III", ("full", "band"): "IV",
    },
    (ChargeCase.SameSign, ">"): {
        ("outer", "full"): "I", ("full", "full"): "II",
        ("full", "lower"): "III", ("full", "band"): "IV",
    },
    (ChargeCase.SameSign, "<"): {
        ("outer", "full"): "I", ("outer", "lower"): "II",
        ("outer", "band"): "III", ("full", "band"): "IV",
    },
    (ChargeCase.OppositeSignPlusPositive, ">"): {
        ("outer", "full"): "I", ("outer", "lower"): "II",
        ("full", "lower"): "III", ("full", "band"): "IV",
    },
    (ChargeCase.OppositeSignPlusNegative, "<"): {
        ("outer", "full"): "I", ("outer", "lower"): "II",
        ("full", "lower"): "III", ("full", "band"): "IV",
        ("split", "lower"): "I^a",
    },
}


def _label(case: ChargeCase, zp: float, e: float, k: float, xp: str, yp: str) -> str:
    if xp == "empty" or yp == "empty":
        return "forbidden"
    sub = ">" if zp > 0 else "<" if zp < 0 else "0"
    numeral = _LABELS[(case, sub)].get((xp, yp))
    if numeral is None or e == 0:
        return "threshold" if e == 0 else "unlabeled"
    if numeral.endswith("^a"):
        return f"{numeral[:-2]}_{sub}^a"
    label = f"{numeral}_{sub}"
    if case is ChargeCase.ZplusZero and numeral in ("III", "IV") and k > 0:
        label += "^*"
    return label


def classify(em: EnergyMomentum, charges: ChargeConfig, tol: float = CURVE_TOL) -> RegionClassification:
    """Allowed ``x``/``y`` intervals and region label for ``(E, K)``.

    The interval pattern (``x=<...>;y=<...>``) is the ground truth; the
    label follows the roman-numeral naming of the bifurcation diagrams.
    """
    if em.e < 0:
        raise OutOfScope("motion types are only classified for E >= 0")
    canon, reflected = charges.canonical()
    e, k = em.e, em.k
    x_ivs = _x_intervals(e, canon.z_plus, k)
    y_ivs = _y_intervals(e, canon.z_minus, k)
    case = charge_case(canon)
    label = _label(case, canon.z_plus, e, k, _x_pattern(x_ivs), _y_pattern(y_ivs))
    if reflected:
        y_ivs = tuple((-hi, -lo) for lo, hi in reversed(y_ivs))
    pattern = f"x={_x_pattern(x_ivs)};y={_y_pattern(y_ivs)}"
    bounded = any(math.isfinite(hi) for _, hi in x_ivs)
    on_curves = in_bifurcation_set(em, charges, tol) if x_ivs and y_ivs else None
    return RegionClassification(label, pattern, x_ivs, y_ivs, bounded, on_curves or frozenset())


@dataclass
class Diagram:
    """Rasterized bifurcation diagram.

    ``cells[j][i]`` classifies ``(e_values[i], k_values[j])``; ``curves`` maps
    each curve of the bifurcation set to polylines of ``(E, K)`` points
    clipped to the Hill region and to the sampled window.
    """

    charges: ChargeConfig
    e_values: np.ndarray
    k_values: np.ndarray
    cells: list
    curves: dict


def _curve_polylines(curve, charges, e_range, k_range, n):
    (e_lo, e_hi), (k_lo, k_hi) = e_range, k_range
    if curve is CurveId.L0:
        if e_lo > 0:
            return []
        lo = max(k_plus(0.0, charges), k_lo)
        hi = min(k_minus(0.0, charges), k_hi)
        return [[(0.0, lo), (0.0, hi)]] if lo <= hi else []
    pieces, current = [], []
    for e in np.linspace(e_lo, e_hi, n):
        k = curve_k(curve, float(e), charges)
        ok = (
            k is not None
            and curve_effective(curve, float(e), charges)
            and k_lo <= k <= k_hi
            and in_hill_region(EnergyMomentum(float(e), k), charges, 1e-12 * max(1.0, abs(k)))
        )
        if ok:
            current.append((float(e), float(k)))
        elif current:
            pieces.append(current)
            current = []
    if current:
        pieces.append(current)
    return pieces


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TWOCENTERS_THREADS", "1")))
    except ValueError:
        return 1


def sample_diagram(
    e_range: tuple[float, float],
    k_range: tuple[float, float],
    nx: int,
    ny: int,
    charges: ChargeConfig,
    curve_points: int = 400,
    workers: int | None = None,
) -> Diagram:
    """Classify every node of an ``nx`` by ``ny`` grid and trace the curves."""
    e_lo, e_hi = map(float, e_range)
    k_lo, k_hi = map(float, k_range)
    if nx < 2 or ny < 2:
        raise ValueError("diagram resolution must be at least 2 x 2")
    if not (0 <= e_lo < e_hi) or not (k_lo < k_hi):
        raise ValueError(f"invalid window E={e_range}, K={k_range}")
    e_values = np.linspace(e_lo, e_hi, nx)
    k_values = np.linspace(k_lo, k_hi, ny)

    def row(k):
        return [classify(EnergyMomentum(float(e), float(k)), charges) for e in e_values]

    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(row, k_values))
    else:
        cells = [row(k) for k in k_values]
    curves = {}
    for curve in sorted(bifurcation_curve_set(charges), key=lambda c: c.value):
        curves[curve] = _curve_polylines(curve, charges, (e_lo, e_hi), (k_lo, k_hi), curve_points)
    return Diagram(charges, e_values, k_values, cells, curves)
