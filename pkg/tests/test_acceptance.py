"""The ten acceptance criteria, each at its stated tolerance.

One PASS/FAIL line per criterion is printed in the terminal summary (and to
stdout when run with ``-s``).  Expected runtimes are reported alongside but
not enforced.
"""

import time

import pytest

from twocenters.verification import CHECKS, Settings

from conftest import record_acceptance

CRITERIA = [
    (1, "curve_sets", "curve-set reproduction (exact set equality)", 1),
    (2, "discriminant", "discriminant vanishing on curves (<= 1e-9 (1+|Z|^6))", 1),
    (3, "hill_bounds", "Hill-bound oracle (slack 1e-10)", 5),
    (4, "dual_k", "dual-K identity (1e-10 relative)", 5),
    (5, "region_walk", "region walk at E=3 (crossings exact to 1e-12)", 1),
    (6, "bounded_orbit", "bounded orbit (x3 to 1e-10, containment 1e-6 to s=1e3)", 30),
    (7, "conservation", "conservation (drift < 1e-8 over s<=100, step_tol 1e-10)", 60),
    (8, "root_oracle", "root oracle (1e-6 vs brute-force scan)", 5),
    (9, "symmetry", "symmetry suite (involution 1e-9, reversal 1e-6)", 30),
    (10, "vertical_orbit", "K=0 vertical orbit (|y| < 1e-9 to s=100)", 5),
]


@pytest.mark.parametrize("number,check,title,budget", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, check, title, budget):
    t0 = time.perf_counter()
    result = CHECKS[check](Settings())
    elapsed = time.perf_counter() - t0
    line = (
        f"{'PASS' if result.passed else 'FAIL'} AC{number:<2d} {title}: "
        f"measured={result.measured:.3e} tol={result.tolerance:.1e} "
        f"time={elapsed:.2f}s (expected < {budget}s)"
    )
    if result.detail:
        line += f" | {result.detail}"
    record_acceptance(line)
    print(line)
    assert result.passed, line
