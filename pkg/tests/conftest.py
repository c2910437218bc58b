"""Shared oracles and randomized feasible-scenario generators.

The quadrature oracle is deliberately primitive (recursive adaptive
Simpson) so it shares nothing with the closed forms it checks.
"""

import math

import numpy as np
import pytest

from goalreach import (
    CoverageWindow,
    DetLifeScenario,
    EndowScenario,
    ForceParams,
    StochScenario,
)
from goalreach.errors import BracketError, InfeasibleScenarioError


def adaptive_simpson(f, a, b, tol=1e-13):
    """Adaptive Simpson quadrature with absolute tolerance."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        mid = 0.5 * (a + b)
        lm, rm = 0.5 * (a + mid), 0.5 * (mid + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, mid)
        right = simpson(fm, frm, fb, mid, b)
        err = left + right - whole
        if depth <= 0 or abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return (rec(a, mid, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(mid, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)


def simpson_to_inf(f, a, rate, tol=1e-13):
    """Quadrature of an exponentially decaying integrand over [a, inf)."""
    return adaptive_simpson(f, a, a + 45.0 / rate, tol)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rand_det_life(rng, mode, allow_inf_n=False, want_lam_gt_r=None):
    """A random feasible life scenario; retries infeasible draws."""
    for _ in range(500):
        r = rng.uniform(0.01, 0.08)
        if want_lam_gt_r is True:
            lam = r * rng.uniform(1.05, 2.5)
        elif want_lam_gt_r is False:
            lam = r * rng.uniform(0.2, 1.0)
        else:
            lam = rng.uniform(0.005, 0.15)
        theta = rng.uniform(0.0, 0.4)
        m = rng.choice([0.0, rng.uniform(0.5, 15.0)])
        n = math.inf if (allow_inf_n and rng.random() < 0.25) else rng.uniform(1.0, 30.0)
        f = rng.uniform(10.0, 500.0)
        d = rng.uniform(0.0, 0.7 * f) if (mode == "single" and rng.random() < 0.5) else 0.0
        try:
            return DetLifeScenario(ForceParams(r, lam, theta), CoverageWindow(m, n),
                                   f=f, d=d, mode=mode)
        except (InfeasibleScenarioError, BracketError):
            continue
    raise RuntimeError("could not draw a feasible life scenario")


def rand_endow(rng, mode, want_lam_gt_r=None):
    """Random feasible endowment scenario.

    The literal continuous-premium rate (annuity over annuity) violates
    the feasibility bound for most coverage windows, so the continuous
    mode draws a user-supplied rate inside the bound instead; the literal
    formula is exercised by the actuarial tests.
    """
    for _ in range(500):
        r = rng.uniform(0.01, 0.08)
        theta = rng.uniform(0.0, 0.4)
        m = rng.uniform(0.5, 10.0) if mode == "continuous" else rng.choice([0.0, rng.uniform(0.5, 10.0)])
        n = rng.uniform(1.0, 25.0)
        f = rng.uniform(10.0, 500.0)
        d = rng.uniform(0.0, 0.7 * f) if (mode == "single" and rng.random() < 0.5) else 0.0
        override = None
        if mode == "continuous":
            bound = r * math.exp(-r * m) / ((1.0 + r) * (1.0 - math.exp(-r * m)))
            override = bound * rng.uniform(0.1, 0.9)
            if want_lam_gt_r is True:
                lam = r + override * rng.uniform(0.05, 0.9)
            elif want_lam_gt_r is False:
                lam = r * rng.uniform(0.2, 1.0)
            else:
                lam = rng.uniform(0.005, min(0.15, r + 0.9 * override))
        elif want_lam_gt_r is True:
            lam = r * rng.uniform(1.05, 2.5)
        elif want_lam_gt_r is False:
            lam = r * rng.uniform(0.2, 1.0)
        else:
            lam = rng.uniform(0.005, 0.15)
        try:
            return EndowScenario(ForceParams(r, lam, theta), CoverageWindow(m, n),
                                 f=f, d=d, mode=mode, premium_override=override)
        except (InfeasibleScenarioError, BracketError):
            continue
    raise RuntimeError("could not draw a feasible endowment scenario")


def rand_stoch(rng, model="I", allow_inf_n=False):
    """A random stochastic scenario whose solution exists (ordering holds)."""
    from goalreach import solve

    for _ in range(500):
        r = rng.uniform(0.01, 0.06)
        lam = rng.uniform(0.01, 0.12)
        mu = r + rng.uniform(0.01, 0.08)
        sigma = rng.uniform(0.1, 0.4)
        f = rng.uniform(10.0, 500.0)
        n = math.inf if (allow_inf_n and rng.random() < 0.2) else rng.uniform(2.0, 40.0)
        H = rng.uniform(0.005, 0.1)
        a = rng.uniform(0.0, 0.05)
        if model == "I":
            c = rng.uniform(0.0, 0.9) * (r + a)
        else:
            kind = rng.integers(0, 3)
            if kind == 0:
                c = a
            elif kind == 1:
                c = a * rng.uniform(0.1, 0.9)   # a - c > 0
            else:
                c = a + rng.uniform(0.001, 0.02)  # a - c < 0
        l = rng.choice([0.0, rng.uniform(0.0, 2.0)])
        try:
            scn = StochScenario(r=r, lam=lam, mu=mu, sigma=sigma, a=a, l=l, c=c,
                                premium_rate=H, f=f, n=n, model=model)
            solve(scn)
            return scn
        except InfeasibleScenarioError:
            continue
    raise RuntimeError("could not draw a feasible stochastic scenario")


def rand_stoch_buy_everywhere(rng):
    """Model II, l = 0, high consumption: the buy-everywhere regime."""
    from goalreach import solve
    from goalreach.stoch import BUY_EVERYWHERE, criticals

    for _ in range(500):
        r = rng.uniform(0.01, 0.06)
        lam = rng.uniform(0.02, 0.12)
        mu = r + rng.uniform(0.01, 0.08)
        sigma = rng.uniform(0.1, 0.4)
        f = rng.uniform(10.0, 200.0)
        n = rng.uniform(2.0, 40.0)
        H = rng.uniform(0.002, 0.02)
        a = rng.uniform(0.0, 0.03)
        probe = StochScenario(r=r, lam=lam, mu=mu, sigma=sigma, a=a, l=0.0,
                              c=a + 1e-9, premium_rate=H, f=f, n=n, model="II")
        crit = criticals(probe)
        lo, hi = crit.c1 + a, crit.c0
        if not lo < hi:
            continue
        c = rng.uniform(lo, min(hi, lo + 0.5 * (hi - lo)))
        if c <= a:
            continue
        try:
            scn = StochScenario(r=r, lam=lam, mu=mu, sigma=sigma, a=a, l=0.0, c=c,
                                premium_rate=H, f=f, n=n, model="II")
            if solve(scn).family == BUY_EVERYWHERE:
                return scn
        except InfeasibleScenarioError:
            continue
    raise RuntimeError("could not draw a buy-everywhere scenario")
