"""Scenario-level verification: every closed form is checked against its
defining equation, its boundary values, continuity, and monotonicity.

The checks stand in for analytic verification arguments: the
ODE/HJB residual pins each branch's exponent and offset, the boundary
values pin the scales, and continuity ties adjacent branches together.
A corrupted coefficient anywhere fails at least one check.
"""

from __future__ import annotations

import numpy as np

from . import det_endow, det_life, stoch
from .det_kernel import free_boundary_gap
from .numerics import CheckEntry, continuity_check, residual_det, residual_hjb

TOL_ODE_DET = 1e-10
TOL_HJB = 1e-8
TOL_BOUNDARY = 1e-12
TOL_CONTINUITY = 1e-12
TOL_ROOT = 1e-12
TOL_FOC = 1e-10
TOL_POLY = 1e-10
TOL_CRITICAL = 1e-10


def _entry(name, observed, tol, detail=None):
    return CheckEntry(name, float(observed), tol, abs(observed) < tol, detail or {})


def _flag(name, passed, detail=None):
    return CheckEntry(name, 0.0 if passed else 1.0, 1.0, passed, detail or {})


def _not_applicable(name, why):
    return CheckEntry(name, 0.0, 1.0, True, {"status": "not-applicable", "reason": why})


def _monotone(pv, n=512):
    ws = np.linspace(pv.lo, pv.hi, n)
    drops = np.diff(pv.value(ws))
    return float(max(0.0, -drops.min()))


def verify_det(scn) -> list:
    """Checks for a deterministic scenario (life or endowment, either
    premium mode)."""
    endow = isinstance(scn, det_endow.EndowScenario)
    mod = det_endow if endow else det_life
    th, pv = mod.build_value(scn)
    lam, r = scn.fp.lam, scn.fp.r
    w_in, w_out = scn.window_weight, scn.growth_weight

    checks = []
    rep = residual_det(pv, lam, tol=TOL_ODE_DET)
    checks.extend(rep.entries)
    checks.append(continuity_check(pv, tol=TOL_CONTINUITY))
    checks.append(_entry("boundary[value(0)=0]", pv.value(0.0), TOL_BOUNDARY))
    checks.append(_entry("boundary[value(quasi)=w_in]",
                         pv.value(th.quasi_ideal) - w_in, TOL_BOUNDARY))
    mid_seg = next(s for s in pv.segments if s.branch_id == "quasi_to_mid")
    checks.append(_entry("boundary[mid-branch(ideal)=w_in+w_out]",
                         float(mid_seg.value(th.ideal)) - (w_in + w_out), TOL_BOUNDARY))
    checks.append(_entry("boundary[value(ideal)=1]", pv.value(th.ideal) - 1.0, TOL_BOUNDARY))
    checks.append(_entry("monotone", _monotone(pv), TOL_BOUNDARY))

    if th.mode == "continuous":
        if lam > r:
            w0 = th.free_boundary
            gap = free_boundary_gap(w0, r, lam, scn.premium.value, th.quasi_ideal)
            checks.append(_entry("free_boundary[residual]", gap, TOL_ROOT,
                                 {"w0": w0, "quasi": th.quasi_ideal}))
            checks.append(_flag("free_boundary[interior]",
                                0.0 < w0 < th.quasi_ideal, {"w0": w0}))
        else:
            checks.append(_not_applicable("free_boundary[residual]", "lam <= r: no root"))
    checks.append(_flag("premium[feasible]", scn.premium.feasible,
                        {"basis": scn.premium.basis, "value": scn.premium.value}))
    return checks


def verify_stoch(scn: stoch.StochScenario) -> list:
    sol = stoch.solve(scn)
    pv = stoch.build_value(scn, sol)
    lam = scn.lam
    m = scn.sharpe_half
    E = scn.window_mass
    b = sol.bps

    checks = []
    rep = residual_hjb(pv, lam, m, tol=TOL_HJB)
    checks.extend(rep.entries)
    checks.append(continuity_check(pv, tol=TOL_CONTINUITY))

    def char_poly(x, A):
        return m * x * x + (lam - A - m) * x - lam

    checks.append(_entry("roots[x1]", char_poly(sol.exps.x1, sol.A), TOL_POLY))
    checks.append(_entry("roots[x2]", char_poly(sol.exps.x2, sol.A), TOL_POLY))
    checks.append(_entry("roots[k_pos]", char_poly(sol.exps.k_pos, sol.A1), TOL_POLY))
    checks.append(_flag("exponents[p in (0,1)]", 0.0 < sol.exps.p < 1.0, {"p": sol.exps.p}))
    checks.append(_flag("exponents[q > 1]", sol.exps.q > 1.0, {"q": sol.exps.q}))

    ordered = (0.0 <= b.lower <= b.buy < b.mid_low <= b.mid_high < b.ideal
               if sol.family == stoch.FIVE_BRANCH
               else 0.0 < b.quasi < b.ideal)
    checks.append(_flag("breakpoints[ordered]", ordered, {"breakpoints": vars(b)}))
    if sol.family == stoch.FIVE_BRANCH:
        checks.append(_flag("coefficients[D1 > 0]", sol.d1 > 0.0, {"D1": sol.d1}))
    checks.append(_flag("coefficients[D2 < 0]", sol.d2 < 0.0, {"D2": sol.d2}))
    d3_ok = sol.d3 > 0.0 or (sol.limit_case and sol.d3 == 0.0)
    checks.append(_flag("coefficients[D3 > 0]", d3_ok, {"D3": sol.d3}))

    checks.append(_entry("boundary[value(0)=0]", pv.value(0.0), TOL_BOUNDARY))
    if sol.family == stoch.FIVE_BRANCH:
        checks.append(_entry("boundary[value(lower)=0]", pv.value(b.lower), TOL_BOUNDARY))
        checks.append(_entry("boundary[value(mid_low)=E]",
                             pv.value(b.mid_low) - E, TOL_BOUNDARY))
        checks.append(_entry("boundary[value(mid_high)=E]",
                             pv.value(b.mid_high) - E, TOL_BOUNDARY))
    else:
        left = pv.segments[0]
        checks.append(_entry("boundary[value(quasi-)=E]",
                             float(left.value(b.quasi)) - E, TOL_BOUNDARY))
    checks.append(_entry("boundary[value(ideal)=1]", pv.value(b.ideal) - 1.0, TOL_BOUNDARY))
    checks.append(_entry("monotone", _monotone(pv), TOL_BOUNDARY))

    # investment matches the first-order condition wherever it is defined
    # (flat segments have no curvature to trade against; the n = inf limit
    # case flattens the top branch too)
    worst = 0.0
    for seg in pv.segments:
        if seg.scale == 0.0:
            continue
        span = seg.hi - seg.lo
        for w in np.linspace(seg.lo + 0.05 * span, seg.hi - 0.05 * span, 10):
            worst = max(worst, stoch.foc_check(scn, float(w), sol, pv))
    checks.append(_entry("investment[foc]", worst, TOL_FOC))

    if sol.family == stoch.FIVE_BRANCH:
        # purchase onset: lam E - H (f-w) F_w changes sign at the buy level
        eps = 1e-7 * (b.mid_low - b.lower)
        below = lam * E - scn.premium_rate * (scn.f - (b.buy - eps)) * pv.deriv(b.buy - eps)
        above = lam * E - scn.premium_rate * (scn.f - (b.buy + eps)) * pv.deriv(b.buy + eps)
        checks.append(_flag("buy_level[sign-change]", below < 0.0 <= above,
                            {"below": float(below), "above": float(above)}))

    if scn.model == stoch.MODEL_II:
        crit = sol.criticals
        checks.append(_flag("criticals[c <= C0]",
                            scn.a - scn.c >= 0 or scn.c <= crit.c0,
                            {"C0": crit.c0, "c": scn.c}))
        if crit.h_tilde is not None and crit.h_tilde < crit.h_max:
            def gap(h):
                s2 = stoch.StochScenario(scn.r, scn.lam, scn.mu, scn.sigma, scn.a,
                                         scn.l, scn.c, h, scn.f, scn.n, scn.model)
                cr = stoch.criticals(s2)
                return cr.c1 - (cr.c0 - scn.a)
            checks.append(_entry("criticals[H-tilde equality]", gap(crit.h_tilde),
                                 TOL_CRITICAL, {"h_tilde": crit.h_tilde}))
        else:
            checks.append(_not_applicable("criticals[H-tilde equality]",
                                          "no interior solution in (0, h_max]"))
        if sol.family == stoch.BUY_EVERYWHERE:
            gating = (scn.l == 0.0 and crit.c1 + scn.a <= scn.c <= crit.c0
                      and crit.h_tilde is not None and scn.premium_rate <= crit.h_tilde)
            checks.append(_flag("buy_everywhere[gating]", gating,
                                {"C1+a": crit.c1 + scn.a, "C0": crit.c0}))
    return checks


def verify_scenario(scn) -> list:
    if isinstance(scn, stoch.StochScenario):
        return verify_stoch(scn)
    return verify_det(scn)
