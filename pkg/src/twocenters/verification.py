"""Acceptance checks with measured values, tolerances and runtimes.

Each check returns a :class:`CheckResult`.  ``run_checks`` runs a selection,
optionally with reduced sample counts (``quick``) or with an overridden
integrator tolerance, which is how the negative control is produced.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from twocenters import bifurcation as bif
from twocenters.bifurcation import Branch, CurveId
from twocenters.coords import (
    CartesianState,
    ChargeConfig,
    EllipticState,
    cartesian_state_to_elliptic,
    cartesian_to_elliptic_array,
    focus_distances,
    involution,
    _lift,
)
from twocenters.dynamics import initial_state, integrate
from twocenters.separation import (
    EnergyMomentum,
    _k_pair,
    energy_momentum_arrays,
    hamiltonian_array,
)

#: Charge presets given as ``(Z+, Z-)``.
ZPM_PRESETS = ((2.0, 0.0), (-2.0, 0.0), (0.0, 2.0), (3.0, 1.0), (-0.5, 1.5), (1.0, 3.0), (4.0, 2.0))
DEFAULT_STEP_TOL = 1e-10


def charges_from_zpm(zp: float, zm: float) -> ChargeConfig:
    return ChargeConfig((zp - zm) / 2, (zp + zm) / 2)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    runtime: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e} "
            f"time={self.runtime:.2f}s {self.detail}".rstrip()
        )

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Settings:
    quick: bool = False
    step_tol: float = DEFAULT_STEP_TOL
    seed: int = 20240611

    def count(self, full: int, quick: int) -> int:
        return quick if self.quick else full


def _random_states(rng, charges, n, *, r_min=1e-2, box=4.0, e_max=None):
    """``n`` Cartesian states with ``E >= 0`` (and ``E <= e_max``), away from the centers."""
    out = []
    while sum(len(o[0]) for o in out) < n:
        m = 4 * n
        q1, q2 = rng.uniform(-box, box, m), rng.uniform(-box, box, m)
        p1, p2 = rng.normal(0, 2, m), rng.normal(0, 2, m)
        r1, r2 = focus_distances(q1, q2)
        e = hamiltonian_array(q1, q2, p1, p2, charges)
        keep = (np.minimum(r1, r2) > r_min) & (e >= 0)
        if e_max is not None:
            keep &= e <= e_max
        out.append((q1[keep], q2[keep], p1[keep], p2[keep]))
    return tuple(np.concatenate([o[j] for o in out])[:n] for j in range(4))


def _expected_curve_set(zp: float, zm: float) -> set:
    """Expected curve list, keyed directly on the charge inequalities."""
    zm = abs(zm)
    if zm == 0:
        return {CurveId.L0, CurveId.Lm1, CurveId.Lp2}
    curves = {CurveId.L0, CurveId.Lm1, CurveId.Lm2, CurveId.Lm3, CurveId.Lp2}
    if zp < 0 and abs(zp) < zm:
        curves.add(CurveId.Lp3)
    return curves


def check_curve_sets(settings: Settings) -> CheckResult:
    mismatches = []
    for zp, zm in ZPM_PRESETS:
        got = set(bif.bifurcation_curve_set(charges_from_zpm(zp, zm)))
        want = _expected_curve_set(zp, zm)
        if got != want:
            mismatches.append(f"({zp},{zm}): {sorted(c.value for c in got)} != {sorted(c.value for c in want)}")
    return CheckResult("curve_sets", not mismatches, float(len(mismatches)), 0.0, 0.0, "; ".join(mismatches))


def check_discriminant(settings: Settings) -> CheckResult:
    n = settings.count(1000, 200)
    worst, detail = 0.0, ""
    for zp, zm in ZPM_PRESETS:
        charges = charges_from_zpm(zp, zm)
        for curve in bif.bifurcation_curve_set(charges):
            if curve is CurveId.L0:
                continue
            branch = Branch.PLUS if curve.value.startswith("Lp") else Branch.MINUS
            z = zp if branch is Branch.PLUS else zm
            bound = 1e-9 * (1 + abs(z) ** 6)
            used = 0
            for e in np.linspace(0, 5, n + 1)[1:]:
                k = bif.curve_k(curve, float(e), charges)
                em = EnergyMomentum(float(e), k)
                if k is None or not bif.in_hill_region(em, charges, tol=1e-12):
                    continue
                ratio = abs(bif.discriminant(em, branch, charges)) / bound
                used += 1
                if ratio > worst:
                    worst, detail = ratio, f"worst at ({zp},{zm}) {curve.value} E={e:.4g}"
    return CheckResult("discriminant", worst <= 1.0, worst, 1.0, 0.0, f"|discr| / (1e-9 (1+|Z|^6)); {detail}")


def check_hill_bounds(settings: Settings) -> CheckResult:
    n = settings.count(10_000, 1_000)
    rng = np.random.default_rng(settings.seed)
    slack = 1e-10
    worst = -math.inf
    for zp, zm in ZPM_PRESETS:
        charges = charges_from_zpm(zp, zm)
        e, k = energy_momentum_arrays(*_random_states(rng, charges, n), charges)
        lo = np.array([bif.k_plus(float(v), charges) for v in e])
        hi = np.array([bif.k_minus(float(v), charges) for v in e])
        with np.errstate(invalid="ignore"):
            excess = np.maximum(np.where(np.isfinite(lo), lo - k, -np.inf), k - hi)
        worst = max(worst, float(excess.max()))
    return CheckResult("hill_bounds", worst <= slack, worst, slack, 0.0, "max violation of K+(E) <= K <= K-(E)")


def check_dual_k(settings: Settings) -> CheckResult:
    n = settings.count(10_000, 1_000)
    rng = np.random.default_rng(settings.seed + 1)
    worst = 0.0
    for zp, zm in ZPM_PRESETS:
        charges = charges_from_zpm(zp, zm)
        q1, q2, p1, p2 = _random_states(rng, charges, n, r_min=0.05)
        e = hamiltonian_array(q1, q2, p1, p2, charges)
        xi, eta = cartesian_to_elliptic_array(q1, q2)
        p_xi, p_eta = _lift(xi, eta, p1, p2)
        k1, k2 = _k_pair(xi, eta, p_xi, p_eta, e, charges)
        scale = np.maximum(1.0, np.maximum(np.abs(k1), np.abs(k2)))
        worst = max(worst, float(np.max(np.abs(k1 - k2) / scale)))
    return CheckResult("dual_k", worst <= 1e-10, worst, 1e-10, 0.0, "relative gap between the two K expressions")


def _pattern_walk(charges, e, n_inner):
    """Curve crossings along fixed ``e`` and the patterns between them."""
    k_hi = bif.k_minus(e, charges)
    crossings = sorted(
        {
            k
            for c in bif.bifurcation_curve_set(charges)
            if (k := bif.curve_k(c, e, charges)) is not None
            and bif.curve_effective(c, e, charges)
            and k < k_hi - 1e-12
        }
    )
    edges = [crossings[0] - 5.0, *crossings, k_hi]
    patterns = []
    for a, b in zip(edges[:-1], edges[1:]):
        ks = a + (b - a) * (np.arange(1, n_inner + 1) / (n_inner + 1))
        seen = {bif.classify(EnergyMomentum(e, float(k)), charges).pattern for k in ks}
        patterns.append(seen)
    return crossings, patterns


def check_region_walk(settings: Settings) -> CheckResult:
    n_inner = settings.count(50, 10)
    problems = []
    # closed-form crossings for (Z+, Z-) = (2, 0) at E = 3
    charges = charges_from_zpm(2.0, 0.0)
    err = max(
        abs(bif.curve_k(CurveId.Lp2, 3.0, charges) - (-5.0)),
        abs(bif.curve_k(CurveId.Lm1, 3.0, charges) - (-3.0)),
    )
    if err > 1e-12:
        problems.append(f"crossing values off by {err:.2e}")
    for zp, zm in ZPM_PRESETS:
        charges = charges_from_zpm(zp, zm)
        crossings, patterns = _pattern_walk(charges, 3.0, n_inner)
        for seen in patterns:
            if len(seen) != 1:
                problems.append(f"({zp},{zm}): pattern not constant between crossings: {sorted(seen)}")
        flat = [next(iter(s)) for s in patterns]
        for k, left, right in zip(crossings, flat[:-1], flat[1:]):
            if left == right:
                problems.append(f"({zp},{zm}): pattern {left} unchanged across K={k}")
    charges = charges_from_zpm(2.0, 0.0)
    below, above = (bif.classify(EnergyMomentum(3.0, k), charges).pattern for k in (-5.5, -4.5))
    if not (below.startswith("x=outer") and above.startswith("x=full")):
        problems.append(f"x pattern does not flip on Lp2: {below} -> {above}")
    below, above = (bif.classify(EnergyMomentum(3.0, k), charges).pattern for k in (-3.5, -2.5))
    if not (below.endswith("y=full") and above.endswith("y=band")):
        problems.append(f"y pattern does not flip on Lm1: {below} -> {above}")
    return CheckResult("region_walk", not problems, err, 1e-12, 0.0, "; ".join(problems))


def check_bounded_orbit(settings: Settings) -> CheckResult:
    charges = ChargeConfig(-1.0, 0.5)
    em = EnergyMomentum(0.1, 0.5)
    x3 = 2.5 - math.sqrt(1.25)
    region = bif.classify(em, charges)
    problems = []
    if len(region.x_intervals) != 2 or not region.bounded_component:
        problems.append(f"expected two x intervals, got {region.x_intervals}")
        return CheckResult("bounded_orbit", False, math.inf, 1e-6, 0.0, "; ".join(problems))
    root_err = abs(region.x_intervals[0][1] - x3)
    if root_err > 1e-10:
        problems.append(f"x3 off by {root_err:.2e}")
    s_max = settings.count(1000, 200)
    y_lo, y_hi = region.y_intervals[0]
    excess = -math.inf
    for fx, fy in ((0.5, 0.5), (0.2, 0.8), (0.9, 0.3)):
        start = initial_state(em, charges, 1 + fx * (x3 - 1), y_lo + fy * (y_hi - y_lo))
        traj = integrate(start, charges, float(s_max), settings.step_tol)
        if traj.status != "s_max":
            problems.append(f"run ended with status {traj.status} at s={traj.s[-1]:.3g}")
        excess = max(excess, float(traj.x.max() - x3), float(1 - traj.x.min()))
    ok = not problems and excess <= 1e-6
    return CheckResult("bounded_orbit", ok, excess, 1e-6, 0.0, "; ".join([f"max excursion beyond [1, x3] up to s={s_max}", f"x3 err={root_err:.1e}", *problems]))


def _scattering_start(rng, charges):
    while True:
        q1, q2, p1, p2 = (float(v[0]) for v in _random_states(rng, charges, 1, r_min=0.1, box=3.0, e_max=5.0))
        e, k = (float(v) for v in energy_momentum_arrays(q1, q2, p1, p2, charges))
        if e <= 0:
            continue
        region = bif.classify(EnergyMomentum(e, k), charges)
        x = float(np.cosh(cartesian_to_elliptic_array(q1, q2)[0]))
        comp = [iv for iv in region.x_intervals if iv[0] - 1e-9 <= x <= iv[1] + 1e-9]
        if comp and math.isinf(comp[0][1]):
            return CartesianState(q1, q2, p1, p2)


def check_conservation(settings: Settings) -> CheckResult:
    n = settings.count(100, 10)
    rng = np.random.default_rng(settings.seed + 2)
    worst, detail = 0.0, ""
    for zp, zm in ZPM_PRESETS[:5]:
        charges = charges_from_zpm(zp, zm)
        for _ in range(n):
            start = _scattering_start(rng, charges)
            traj = integrate(start, charges, 100.0, settings.step_tol)
            de, dk = traj.drift()
            drift = max(float(de.max()), float(dk.max()))
            if drift > worst:
                worst, detail = drift, f"worst at ({zp},{zm}) E={traj.em.e:.4g} K={traj.em.k:.4g}"
    return CheckResult("conservation", worst < 1e-8, worst, 1e-8, 0.0, f"relative E/K drift over s<=100; {detail}")


def check_symmetry(settings: Settings) -> CheckResult:
    n = settings.count(20, 4)
    rng = np.random.default_rng(settings.seed + 3)
    inv_err, rev_err = 0.0, 0.0
    done = 0
    while done < n:
        zp, zm = ZPM_PRESETS[done % 5]
        charges = charges_from_zpm(zp, zm)
        start = _random_states(rng, charges, 1, r_min=0.2, box=3.0, e_max=5.0)
        state = CartesianState(*(float(v[0]) for v in start))
        ell0 = cartesian_state_to_elliptic(state)
        fwd = integrate(ell0, charges, 20.0, settings.step_tol)
        if fwd.status == "collision":
            continue
        mirror = integrate(involution(ell0), charges, 20.0, settings.step_tol)
        if len(fwd) != len(mirror):
            inv_err = math.inf
        else:
            # event roots may differ in the last bits, so s is compared as well
            inv_err = max(inv_err, float(np.max(np.abs(fwd.s - mirror.s))))
            for a, b in ((fwd.xi, mirror.xi), (fwd.eta, mirror.eta), (fwd.p_xi, mirror.p_xi), (fwd.p_eta, mirror.p_eta)):
                inv_err = max(inv_err, float(np.max(np.abs(a + b))))
        end = fwd.elliptic(-1)
        back = integrate(EllipticState(end.xi, end.eta, -end.p_xi, -end.p_eta), charges, float(fwd.s[-1]), settings.step_tol)
        last = back.elliptic(-1)
        diff = np.array([last.xi, last.eta, -last.p_xi, -last.p_eta]) - ell0.as_array()
        rev_err = max(rev_err, float(np.max(np.abs(diff))))
        done += 1
    ok = inv_err <= 1e-9 and rev_err <= 1e-6
    return CheckResult(
        "symmetry", ok, max(inv_err / 1e-9, rev_err / 1e-6), 1.0, 0.0,
        f"involution err={inv_err:.2e} (tol 1e-9), reversal err={rev_err:.2e} (tol 1e-6), measured is the worst ratio",
    )


def check_vertical_orbit(settings: Settings) -> CheckResult:
    worst = 0.0
    for charges, q2, e in ((ChargeConfig(1, 1), 1.3, 3.0), (ChargeConfig(1, 1), 0.4, 0.5), (ChargeConfig(-1, -1), 2.0, 3.0)):
        r = math.hypot(1.0, q2)
        p2 = math.sqrt(2 * (e + charges.z_plus / r))
        for sign in (1, -1):
            traj = integrate(CartesianState(0.0, q2, 0.0, sign * p2), charges, 100.0, settings.step_tol)
            worst = max(worst, float(np.max(np.abs(traj.y))))
    return CheckResult("vertical_orbit", worst < 1e-9, worst, 1e-9, 0.0, "max |y(s)| on the K=0 orbit, Z-=0")


def _brute_roots(e, z, k, grid, buf):
    np.multiply(grid, e, out=buf)
    buf += z
    buf *= grid
    buf += k
    sb = np.signbit(buf)
    roots = []
    for i in np.flatnonzero(sb[1:] != sb[:-1]):
        a, b = grid[i], grid[i + 1]
        fa = (e * a + z) * a + k
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = (e * m + z) * m + k
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return roots


def check_root_oracle(settings: Settings) -> CheckResult:
    n = settings.count(1000, 100)
    rng = np.random.default_rng(settings.seed + 4)
    grid = np.linspace(-10.0, 10.0, 1_000_001)
    buf = np.empty_like(grid)
    worst, problems = 0.0, []
    for _ in range(n):
        e, z, k = rng.uniform(0, 5), rng.uniform(-5, 5), rng.uniform(-10, 10)
        if z == 0:
            continue
        charges = ChargeConfig(z / 2, z / 2)
        roots = [r for r in bif.movable_roots(EnergyMomentum(e, k), Branch.PLUS, charges) if -10 <= r <= 10]
        oracle = _brute_roots(e, z, k, grid, buf)
        if len(roots) != len(oracle):
            problems.append(f"E={e:.4g} Z={z:.4g} K={k:.4g}: {roots} vs {oracle}")
            continue
        for a, b in zip(roots, oracle):
            worst = max(worst, abs(a - b))
    ok = not problems and worst <= 1e-6
    return CheckResult("root_oracle", ok, worst, 1e-6, 0.0, "; ".join(problems[:3]))


CHECKS: dict[str, Callable[[Settings], CheckResult]] = {
    "curve_sets": check_curve_sets,
    "discriminant": check_discriminant,
    "hill_bounds": check_hill_bounds,
    "dual_k": check_dual_k,
    "region_walk": check_region_walk,
    "bounded_orbit": check_bounded_orbit,
    "conservation": check_conservation,
    "root_oracle": check_root_oracle,
    "symmetry": check_symmetry,
    "vertical_orbit": check_vertical_orbit,
}


def _timed(fn, settings):
    t0 = time.perf_counter()
    result = fn(settings)
    result.runtime = time.perf_counter() - t0
    return result


def run_checks(names=None, settings: Settings | None = None, workers: int = 1) -> list[CheckResult]:
    settings = settings or Settings()
    names = list(names or CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda n: _timed(CHECKS[n], settings), names))
    return [_timed(CHECKS[n], settings) for n in names]
