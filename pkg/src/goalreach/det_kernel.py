"""Shared piecewise kernel for the deterministic value functions.

The death-benefit problem and the pure-endowment problem have the same
three-branch structure; they differ only in the premium quantity and in
which survival weight multiplies which term.  With

    quasi  = wealth at which buying the whole goal gap is affordable
    ideal  = wealth at which the goal is certain regardless of timing
    mid    = e^{-rm} (ideal - quasi) + quasi
    w_in   = probability weight of the benefit window
    w_out  = complementary weight on the growth term

the maximum probability of reaching the goal is

    [0, quasi):    w_in * (w / quasi)^(lam/r)
    [quasi, mid):  w_in + w_out * ((w - quasi)/(ideal - quasi))^(lam/r)
    [mid, ideal):  (1 + w_out) * ((w - quasi)/(ideal - quasi))^(lam/r) - w_out

and 1 from ``ideal`` on.  Under continuous premiums with lam > r there is
additionally a free boundary w0 in (0, quasi) below which it is optimal
to insure the whole gap immediately, with value

    [0, w0):  w_in * (1 - (1 - w/quasi)^(lam/(r+P)))

where w0 is the unique level at which this expression meets the
no-purchase branch w_in * (w/quasi)^(lam/r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, InfeasibleScenarioError
from .numerics import PiecewiseValue, Segment, bisect


@dataclass(frozen=True)
class Thresholds:
    """Wealth thresholds of a deterministic scenario.

    ``free_boundary`` is populated only for continuous premiums with
    lam > r; ``mid`` equals ``ideal`` when m = 0 (the last branch is
    empty then).
    """

    quasi_ideal: float
    mid: float
    ideal: float
    free_boundary: float | None
    mode: str

    @property
    def span(self):
        return self.ideal - self.quasi_ideal


def thresholds_single(premium: float, f: float, d: float, r: float, m: float) -> Thresholds:
    if not premium < math.exp(-r * m):
        raise InfeasibleScenarioError(
            "premium < e^{-rm}", f"single premium {premium} >= e^(-rm) {math.exp(-r * m)}")
    gap = f - d
    quasi = premium * gap
    ideal = (premium + 1.0) * gap
    mid = ideal if m == 0 else math.exp(-r * m) * (ideal - quasi) + quasi
    return Thresholds(quasi, mid, ideal, None, "single")


def thresholds_continuous(premium: float, f: float, r: float, m: float,
                          lam: float | None = None) -> Thresholds:
    load = premium + r * premium
    if not load / (r + load) < math.exp(-r * m):
        raise InfeasibleScenarioError(
            "(P+rP)/(r+P+rP) < e^{-rm}",
            f"continuous premium rate {premium} too high for deferral {m}")
    quasi = premium * f / (r + premium)
    ideal = (r + load) * f / ((r + premium) * (r + 1.0))
    mid = ideal if m == 0 else math.exp(-r * m) * (ideal - quasi) + quasi
    w0 = None
    if lam is not None and lam > r:
        w0 = solve_free_boundary(r, lam, premium, quasi)
    return Thresholds(quasi, mid, ideal, w0, "continuous")


def free_boundary_gap(w: float, r: float, lam: float, premium: float, quasi: float) -> float:
    """LHS - RHS of the boundary equation
    1 - (1 - w/quasi)^(lam/(r+P)) = (w/quasi)^(lam/r)."""
    x = w / quasi
    return (1.0 - (1.0 - x) ** (lam / (r + premium))) - x ** (lam / r)


def solve_free_boundary(r: float, lam: float, premium: float, quasi: float) -> float | None:
    """Unique interior zero of the buy/no-buy crossing, or None when lam <= r.

    The crossing exists only when lam < r + P: with exponent
    lam/(r+P) >= 1 the buy branch dominates everywhere on (0, quasi) and
    the equation has no interior zero, which surfaces here as a bracket
    error rather than a silent wrong root.
    """
    if lam <= r:
        return None
    eps = 1e-12
    try:
        res = bisect(lambda w: free_boundary_gap(w, r, lam, premium, quasi),
                     eps * quasi, (1.0 - eps) * quasi, tol=1e-12, max_iter=200)
    except BracketError as exc:
        raise BracketError(
            "free-boundary equation has no interior zero "
            f"(lam={lam} >= r+premium={r + premium}); the lam > r closed form "
            "requires lam < r + premium") from exc
    return res.root


def build_value(r: float, lam: float, premium: float, th: Thresholds,
                w_in: float, w_out: float) -> PiecewiseValue:
    """Assemble the piecewise value function for either premium mode."""
    e = lam / r
    quasi, mid, ideal = th.quasi_ideal, th.mid, th.ideal
    span = th.span
    segs = []
    if th.free_boundary is not None:
        w0 = th.free_boundary
        gamma = lam / (r + premium)
        segs.append(Segment(0.0, w0, base=quasi, side=-1, exponent=gamma,
                            scale=-w_in / quasi ** gamma, offset=w_in,
                            alpha=r + premium, branch_id="buy_all_zone"))
        lo1 = w0
    else:
        lo1 = 0.0
    segs.append(Segment(lo1, quasi, base=0.0, side=1, exponent=e,
                        scale=w_in / quasi ** e, offset=0.0,
                        alpha=r, branch_id="below_quasi"))
    segs.append(Segment(quasi, mid, base=quasi, side=1, exponent=e,
                        scale=w_out / span ** e, offset=w_in,
                        alpha=r, branch_id="quasi_to_mid"))
    if mid < ideal:
        segs.append(Segment(mid, ideal, base=quasi, side=1, exponent=e,
                            scale=(1.0 + w_out) / span ** e, offset=-w_out,
                            alpha=r, branch_id="mid_to_ideal"))
    else:
        # m = 0 collapses the last branch; extend the middle one to ideal
        segs[-1] = Segment(quasi, ideal, base=quasi, side=1, exponent=e,
                           scale=w_out / span ** e, offset=w_in,
                           alpha=r, branch_id="quasi_to_mid")
    return PiecewiseValue(segs)


def kernel_value(pv: PiecewiseValue, ideal: float, w):
    """Evaluate with the ideal-and-beyond convention (probability 1)."""
    scalar = np.isscalar(w)
    ws = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(ws < 0):
        raise ValueError("wealth must be non-negative")
    out = np.ones(ws.shape)
    inside = ws < ideal
    if np.any(inside):
        out[inside] = np.atleast_1d(pv.value(ws[inside]))
    return float(out[0]) if scalar else out
