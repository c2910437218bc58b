"""Deferred term pure endowment under the deterministic framework.

Hedges longevity risk: the benefit is paid only if the retirement time
(exponential with the same rate lam) falls past m+n.  Structurally this
is the mirror image of the life problem with the survival weights
swapped:

    w_in  = e^{-lam (m+n)}                  (retire after the window ends)
    w_out = e^{-lam m} - e^{-lam (m+n)}     (growth term weight)

and premium R (single) or M (continuous rate) in place of K or H.  Both
modules share one piecewise kernel; n must be finite here (an endowment
with infinite n never pays).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import actuarial, det_kernel
from .actuarial import CoverageWindow, ForceParams, Premium
from .det_kernel import Thresholds
from .det_life import CONTINUOUS, NO_PURCHASE, SINGLE, PurchaseAction
from .errors import InfeasibleScenarioError
from .numerics import PiecewiseValue


class EndowThresholds(Thresholds):
    """Thresholds for the endowment problem (R or M in place of K or H)."""


@dataclass(frozen=True)
class EndowScenario:
    fp: ForceParams
    cw: CoverageWindow
    f: float
    d: float = 0.0
    mode: str = SINGLE
    premium_override: float | None = None
    premium: Premium = field(init=False)

    def __post_init__(self):
        if math.isinf(self.cw.n):
            raise InfeasibleScenarioError("n finite", "pure endowment never pays with infinite n")
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
            prem = actuarial.premium_single_pure_endow(self.fp, self.cw)
        else:
            prem = actuarial.premium_rate_pure_endow(self.fp, self.cw)
        object.__setattr__(self, "premium", prem)
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
        return math.exp(-self.fp.lam * (self.cw.m + self.cw.n))

    @property
    def growth_weight(self) -> float:
        lam, m, n = self.fp.lam, self.cw.m, self.cw.n
        return math.exp(-lam * m) - math.exp(-lam * (m + n))


def thresholds_single_endow(scn: EndowScenario) -> EndowThresholds:
    _require(scn, SINGLE)
    th = det_kernel.thresholds_single(scn.premium.value, scn.f, scn.d, scn.fp.r, scn.cw.m)
    return EndowThresholds(th.quasi_ideal, th.mid, th.ideal, None, th.mode)


def thresholds_continuous_endow(scn: EndowScenario) -> EndowThresholds:
    _require(scn, CONTINUOUS)
    th = det_kernel.thresholds_continuous(scn.premium.value, scn.f, scn.fp.r, scn.cw.m,
                                          lam=scn.fp.lam)
    return EndowThresholds(th.quasi_ideal, th.mid, th.ideal, th.free_boundary, th.mode)


def solve_w0_endow(scn: EndowScenario) -> float | None:
    _require(scn, CONTINUOUS)
    quasi = scn.premium.value * scn.f / (scn.fp.r + scn.premium.value)
    return det_kernel.solve_free_boundary(scn.fp.r, scn.fp.lam, scn.premium.value, quasi)


def build_value(scn: EndowScenario) -> tuple[EndowThresholds, PiecewiseValue]:
    th = thresholds_single_endow(scn) if scn.mode == SINGLE else thresholds_continuous_endow(scn)
    pv = det_kernel.build_value(scn.fp.r, scn.fp.lam, scn.premium.value, th,
                                scn.window_weight, scn.growth_weight)
    return th, pv


def value_single_endow(scn: EndowScenario, w):
    _require(scn, SINGLE)
    th, pv = build_value(scn)
    return det_kernel.kernel_value(pv, th.ideal, w)


def value_continuous_endow(scn: EndowScenario, w):
    _require(scn, CONTINUOUS)
    th, pv = build_value(scn)
    return det_kernel.kernel_value(pv, th.ideal, w)


def action_single_endow(scn: EndowScenario, w: float) -> PurchaseAction:
    _require(scn, SINGLE)
    if w < 0:
        raise ValueError("wealth must be non-negative")
    th = thresholds_single_endow(scn)
    if w < th.ideal:
        return NO_PURCHASE
    return PurchaseAction(scn.goal_gap, "buy_all_goal_gap")


def action_continuous_endow(scn: EndowScenario, w: float) -> PurchaseAction:
    _require(scn, CONTINUOUS)
    if w < 0:
        raise ValueError("wealth must be non-negative")
    th = thresholds_continuous_endow(scn)
    if th.free_boundary is not None and w < th.free_boundary:
        return PurchaseAction(scn.f - w, "buy_goal_minus_wealth")
    if w < th.ideal:
        return NO_PURCHASE
    return PurchaseAction(scn.f - th.quasi_ideal, "buy_goal_minus_quasi_ideal")


def _require(scn: EndowScenario, mode: str):
    if scn.mode != mode:
        raise ValueError(f"operation requires a {mode}-premium scenario, got {scn.mode}")
