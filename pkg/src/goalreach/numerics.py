"""Shared numerical machinery: root bracketing, piecewise value functions,
and the residual checkers used to verify every closed form.

All value functions in this package are piecewise combinations of one
segment shape,

    v(w) = offset + scale * (side * (w - base))**exponent,

with ``side`` +1 for powers of (w - base) and -1 for powers of (base - w)
("one-minus-power" branches), and ``scale = 0`` for constant plateaus.
Each segment also carries the drift coefficient ``alpha`` of its defining
ordinary differential equation, so that a single residual routine can
verify

    deterministic:  alpha*(w-base)*v' - lam*(v - offset)            = 0
    stochastic:     alpha*(w-base)*v' - m*v'^2/v'' - lam*(v-offset) = 0

on every branch, where m is half the squared Sharpe ratio of the risky
asset.  Residuals are evaluated on grids that stay a small offset away
from the breakpoints, where power branches are singular in curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, ConvergenceError

GRID_POINTS = 1000
GRID_EDGE_OFFSET = 1e-6  # fraction of segment span kept clear of breakpoints


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def bisect(g, lo, hi, tol=1e-12, max_iter=200):
    """Bisection on a bracketing interval [lo, hi] with g(lo)*g(hi) < 0.

    Subdivides past ``tol`` down to floating-point resolution (the extra
    iterations are cheap and buy residuals near machine precision), but
    raises ConvergenceError if the cap is hit before |hi-lo| <= tol.
    Deterministic: identical inputs give identical roots.
    """
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return RootResult(lo, 0.0, 0)
    if ghi == 0.0:
        return RootResult(hi, 0.0, 0)
    if math.copysign(1.0, glo) == math.copysign(1.0, ghi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: g(lo)={glo}, g(hi)={ghi}")

    it = 0
    while it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval at float resolution
            break
        gm = g(mid)
        it += 1
        if gm == 0.0:
            lo = hi = mid
            break
        if math.copysign(1.0, gm) == math.copysign(1.0, glo):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    if hi - lo > tol:
        raise ConvergenceError(f"bisection stalled at width {hi - lo} > tol {tol}")
    root = 0.5 * (lo + hi)
    return RootResult(root, g(root), it)


# ---------------------------------------------------------------------------
# Piecewise value functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """One analytic branch of a piecewise value function on [lo, hi).

    ``alpha`` is the drift coefficient of the branch's defining ODE; it is
    carried here so residual checks need no knowledge of which closed
    form the segment came from.
    """

    lo: float
    hi: float
    base: float
    side: int          # +1: (w-base)**e, -1: (base-w)**e
    exponent: float
    scale: float       # 0.0 for constant plateaus
    offset: float
    alpha: float
    branch_id: str

    def value(self, w):
        w = np.asarray(w, dtype=float)
        if self.scale == 0.0:
            return np.full(w.shape, self.offset)
        # clamp guards round-off just past the segment's own endpoint
        u = np.maximum(self.side * (w - self.base), 0.0)
        return self.offset + self.scale * u ** self.exponent

    def deriv(self, w):
        w = np.asarray(w, dtype=float)
        if self.scale == 0.0:
            return np.zeros(w.shape)
        u = self.side * (w - self.base)
        return self.scale * self.exponent * self.side * u ** (self.exponent - 1.0)

    def deriv2(self, w):
        w = np.asarray(w, dtype=float)
        if self.scale == 0.0:
            return np.zeros(w.shape)
        u = self.side * (w - self.base)
        e = self.exponent
        return self.scale * e * (e - 1.0) * u ** (e - 2.0)

    def grid(self, n=GRID_POINTS, edge=GRID_EDGE_OFFSET):
        span = self.hi - self.lo
        return np.linspace(self.lo + edge * span, self.hi - edge * span, n)


class PiecewiseValue:
    """Ordered analytic segments over strictly increasing breakpoints.

    Branch membership at a shared endpoint follows the half-open
    convention of the source displays: the right segment applies.

    Empty intervals (collapsed breakpoints, e.g. the mid region when the
    income noise vanishes) must be dropped by the builder before
    construction.
    """

    def __init__(self, segments):
        if not segments:
            raise ValueError("need at least one segment")
        segs = list(segments)
        for a, b in zip(segs, segs[1:]):
            if a.hi != b.lo:
                raise ValueError(f"segments not contiguous: {a.hi} != {b.lo}")
        bps = [s.lo for s in segs] + [segs[-1].hi]
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints not strictly increasing")
        self.segments = tuple(segs)
        self.breakpoints = np.array(bps)

    @property
    def lo(self):
        return float(self.breakpoints[0])

    @property
    def hi(self):
        return float(self.breakpoints[-1])

    def _index(self, w):
        w = np.asarray(w, dtype=float)
        idx = np.searchsorted(self.breakpoints, w, side="right") - 1
        return np.clip(idx, 0, len(self.segments) - 1)

    def _apply(self, w, fn):
        w = np.asarray(w, dtype=float)
        if np.any(w < self.lo - 1e-12) or np.any(w > self.hi + 1e-12):
            raise ValueError(f"evaluation outside domain [{self.lo}, {self.hi}]")
        idx = self._index(w)
        out = np.empty(w.shape)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if np.any(mask):
                out[mask] = fn(seg, w[mask])
        return out

    def value(self, w):
        scalar = np.isscalar(w)
        out = self._apply(np.atleast_1d(w), lambda s, x: s.value(x))
        return float(out[0]) if scalar else out

    def deriv(self, w):
        scalar = np.isscalar(w)
        out = self._apply(np.atleast_1d(w), lambda s, x: s.deriv(x))
        return float(out[0]) if scalar else out

    def deriv2(self, w):
        scalar = np.isscalar(w)
        out = self._apply(np.atleast_1d(w), lambda s, x: s.deriv2(x))
        return float(out[0]) if scalar else out

    def branch(self, w):
        """Branch id of the segment containing w (right branch at breakpoints)."""
        idx = self._index(np.atleast_1d(w))
        ids = [self.segments[i].branch_id for i in idx]
        return ids[0] if np.isscalar(w) else ids

    def segment_at(self, w):
        return self.segments[int(self._index(np.atleast_1d(w))[0])]


# ---------------------------------------------------------------------------
# Verification checks
# ---------------------------------------------------------------------------

@dataclass
class CheckEntry:
    name: str
    observed: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "check": self.name,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ResidualReport:
    kind: str
    tolerance: float
    grid_size: int
    edge_offset: float
    entries: list

    @property
    def max_residual(self):
        vals = [e.observed for e in self.entries]
        return max(vals) if vals else 0.0

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    def to_json(self):
        return {
            "kind": self.kind,
            "tolerance": self.tolerance,
            "grid_size": self.grid_size,
            "edge_offset": self.edge_offset,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "segments": [e.to_json() for e in self.entries],
        }


def _normalized(raw, lam, values):
    return np.abs(raw) / np.maximum(1.0, lam * np.abs(values))


def residual_det(pv, lam, tol=1e-10, n=GRID_POINTS):
    """Per-segment residual of alpha*(w-b)*v' - lam*(v - offset) = 0.

    Constant segments satisfy this identically; power segments fail it the
    moment an exponent or offset is corrupted, which is what makes this a
    useful verification (scales are pinned separately by the continuity
    and boundary checks).
    """
    entries = []
    for seg in pv.segments:
        ws = seg.grid(n)
        v = seg.value(ws)
        raw = seg.alpha * (ws - seg.base) * seg.deriv(ws) - lam * (v - seg.offset)
        res = float(_normalized(raw, lam, v).max())
        entries.append(CheckEntry(f"ode[{seg.branch_id}]", res, tol, res < tol))
    return ResidualReport("ode", tol, n, GRID_EDGE_OFFSET, entries)


def residual_hjb(pv, lam, sharpe_half, tol=1e-8, n=GRID_POINTS):
    """Per-segment residual of the reduced HJB
    alpha*(w-b)*v' - m*v'^2/v'' - lam*(v - offset) = 0,
    where m is half the squared Sharpe ratio.

    Plateau segments have v' = v'' = 0 and the investment term is taken as
    0 (nothing to invest against).  A power segment with exponent 1 has
    v'' = 0 and is skipped with a flag.
    """
    entries = []
    for seg in pv.segments:
        if seg.scale != 0.0 and seg.exponent == 1.0:
            entries.append(CheckEntry(f"hjb[{seg.branch_id}]", 0.0, tol, True,
                                      {"skipped": "linear segment, v''=0"}))
            continue
        ws = seg.grid(n)
        v = seg.value(ws)
        d1 = seg.deriv(ws)
        if seg.scale == 0.0:
            invest = np.zeros_like(ws)
        else:
            invest = sharpe_half * d1 ** 2 / seg.deriv2(ws)
        raw = seg.alpha * (ws - seg.base) * d1 - invest - lam * (v - seg.offset)
        res = float(_normalized(raw, lam, v).max())
        entries.append(CheckEntry(f"hjb[{seg.branch_id}]", res, tol, res < tol))
    return ResidualReport("hjb", tol, n, GRID_EDGE_OFFSET, entries)


def investment_foc(pv, mu, r, sigma, l, w):
    """First-order-condition maximizer -[(mu-r)v' + sigma*l*v'']/(sigma^2 v'').

    Returns 0 on plateau segments by the clamping convention (no curvature,
    nothing to trade against).
    """
    seg = pv.segment_at(w)
    if seg.scale == 0.0 or seg.exponent == 1.0:
        return 0.0
    d1 = pv.deriv(w)
    d2 = pv.deriv2(w)
    return -((mu - r) * d1 + sigma * l * d2) / (sigma ** 2 * d2)


def continuity_check(pv, tol=1e-12):
    """Max |left - right| gap over interior breakpoints."""
    gaps = []
    for left, right in zip(pv.segments, pv.segments[1:]):
        b = right.lo
        gaps.append(abs(float(left.value(b)) - float(right.value(b))))
    gap = max(gaps) if gaps else 0.0
    return CheckEntry("continuity", gap, tol, gap < tol,
                      {"interior_breakpoints": len(gaps)})
