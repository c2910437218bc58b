"""Deferred term life insurance under the deterministic framework.

Hedges death risk: a benefit is paid if death falls inside the coverage
window [m, m+n) measured from purchase.  The window weight is therefore

    w_in  = e^{-lam m} - e^{-lam (m+n)}     (death inside the window)
    w_out = e^{-lam (m+n)}                  (growth term weight)

Single premium: the policyholder may already hold other products paying
D at death (D < f); the goal gap is f - D.  Continuous premium: coverage
is adjustable and the pre-existing benefit plays no role.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import actuarial, det_kernel
from .actuarial import CoverageWindow, ForceParams, Premium
from .det_kernel import Thresholds
from .errors import InfeasibleScenarioError
from .numerics import PiecewiseValue

SINGLE = "single"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class PurchaseAction:
    """What to buy now: a face amount plus a tag naming the rule."""

    buy_amount: float
    kind: str  # none | buy_all_goal_gap | buy_goal_minus_wealth | buy_goal_minus_quasi_ideal

    def __post_init__(self):
        if (self.buy_amount == 0.0) != (self.kind == "none"):
            raise ValueError("buy_amount must be 0 exactly when kind is 'none'")


NO_PURCHASE = PurchaseAction(0.0, "none")


class LifeThresholds(Thresholds):
    """Thresholds for the life problem.

    single mode:  quasi_ideal = K (f-D), mid = (e^{-rm}+K)(f-D),
                  ideal = (K+1)(f-D)
    continuous:   quasi_ideal = H f/(r+H), mid = e^{-rm}(ideal-quasi)+quasi,
                  ideal = (r+H+rH) f / ((r+H)(r+1)),
                  free_boundary set when lam > r
    """


@dataclass(frozen=True)
class DetLifeScenario:
    fp: ForceParams
    cw: CoverageWindow
    f: float
    d: float = 0.0
    mode: str = SINGLE
    premium_override: float | None = None
    premium: Premium = field(init=False)

    def __post_init__(self):
        if not self.f > 0:
            raise ValueError("financial goal must be positive")
        if not 0 <= self.d < self.f:
            raise InfeasibleScenarioError("D < f", f"pre-existing benefit {self.d} >= goal {self.f}")
        if self.mode not in (SINGLE, CONTINUOUS):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == CONTINUOUS and self.d != 0.0:
            raise ValueError("pre-existing benefit applies to the single-premium variant only")
        if self.premium_override is not None:
            if not self.premium_override > 0:
                raise ValueError("premium override must be positive")
            prem = Premium(self.premium_override, feasible=True, basis="override")
        elif self.mode == SINGLE:
            prem = actuarial.premium_single_term(self.fp, self.cw)
        else:
            prem = actuarial.premium_rate_term(self.fp, self.cw)
        object.__setattr__(self, "premium", prem)
        # surfaces infeasible premiums (and, for lam > r, a missing free
        # boundary) at construction time
        if self.mode == SINGLE:
            det_kernel.thresholds_single(prem.value, self.f, self.d, self.fp.r, self.cw.m)
        else:
            det_kernel.thresholds_continuous(prem.value, self.f, self.fp.r, self.cw.m,
                                             lam=self.fp.lam)

    @property
    def goal_gap(self) -> float:
        return self.f - self.d

    @property
    def window_weight(self) -> float:
        lam, m, n = self.fp.lam, self.cw.m, self.cw.n
        return math.exp(-lam * m) - math.exp(-lam * (m + n))

    @property
    def growth_weight(self) -> float:
        return math.exp(-self.fp.lam * (self.cw.m + self.cw.n))


def thresholds_single(scn: DetLifeScenario) -> LifeThresholds:
    _require(scn, SINGLE)
    th = det_kernel.thresholds_single(scn.premium.value, scn.f, scn.d, scn.fp.r, scn.cw.m)
    return LifeThresholds(th.quasi_ideal, th.mid, th.ideal, None, th.mode)


def thresholds_continuous(scn: DetLifeScenario) -> LifeThresholds:
    _require(scn, CONTINUOUS)
    th = det_kernel.thresholds_continuous(scn.premium.value, scn.f, scn.fp.r, scn.cw.m,
                                          lam=scn.fp.lam)
    return LifeThresholds(th.quasi_ideal, th.mid, th.ideal, th.free_boundary, th.mode)


def solve_w0_life(scn: DetLifeScenario) -> float | None:
    """Free boundary of the continuous-premium problem; None when lam <= r."""
    _require(scn, CONTINUOUS)
    quasi = scn.premium.value * scn.f / (scn.fp.r + scn.premium.value)
    return det_kernel.solve_free_boundary(scn.fp.r, scn.fp.lam, scn.premium.value, quasi)


def build_value(scn: DetLifeScenario) -> tuple[LifeThresholds, PiecewiseValue]:
    th = thresholds_single(scn) if scn.mode == SINGLE else thresholds_continuous(scn)
    pv = det_kernel.build_value(scn.fp.r, scn.fp.lam, scn.premium.value, th,
                                scn.window_weight, scn.growth_weight)
    return th, pv


def value_single(scn: DetLifeScenario, w):
    """Maximum probability of reaching the goal, single premium."""
    _require(scn, SINGLE)
    th, pv = build_value(scn)
    return det_kernel.kernel_value(pv, th.ideal, w)


def value_continuous(scn: DetLifeScenario, w):
    """Maximum probability of reaching the goal, continuous premium."""
    _require(scn, CONTINUOUS)
    th, pv = build_value(scn)
    return det_kernel.kernel_value(pv, th.ideal, w)


def action_single(scn: DetLifeScenario, w: float) -> PurchaseAction:
    """Wait below the ideal value; there, buy the whole goal gap f - D."""
    _require(scn, SINGLE)
    if w < 0:
        raise ValueError("wealth must be non-negative")
    th = thresholds_single(scn)
    if w < th.ideal:
        return NO_PURCHASE
    return PurchaseAction(scn.goal_gap, "buy_all_goal_gap")


def action_continuous(scn: DetLifeScenario, w: float) -> PurchaseAction:
    """lam <= r: wait until the ideal value, then buy f - quasi = rf/(r+H).
    lam > r: below the free boundary insure the whole gap f - w now."""
    _require(scn, CONTINUOUS)
    if w < 0:
        raise ValueError("wealth must be non-negative")
    th = thresholds_continuous(scn)
    if th.free_boundary is not None and w < th.free_boundary:
        return PurchaseAction(scn.f - w, "buy_goal_minus_wealth")
    if w < th.ideal:
        return NO_PURCHASE
    return PurchaseAction(scn.f - th.quasi_ideal, "buy_goal_minus_quasi_ideal")


def _require(scn: DetLifeScenario, mode: str):
    if scn.mode != mode:
        raise ValueError(f"operation requires a {mode}-premium scenario, got {scn.mode}")
