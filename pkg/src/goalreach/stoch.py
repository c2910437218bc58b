"""Goal-reaching with term insurance, income, consumption and risky
investment (stochastic framework).

Two wealth models, one solution machinery.  Writing

    m  = (1/2) ((mu - r)/sigma)^2          half squared Sharpe ratio
    A  = r + (a - c)   (model I)  |  r     (model II)
    A1 = A + H
    shift = 0          (model I)  |  c - a (model II)

the value function is a five-branch piecewise form built from two
power exponents,

    p = x1/(x1 - 1) in (0,1),  x1 < 0 the negative root of
            m x^2 + (lam - A  - m) x - lam = 0
    q = k/(k - 1)  > 1,        k  > 1 the positive root of
            m x^2 + (lam - A1 - m) x - lam = 0

over breakpoints (all shifted by the income floor base = (mu-r) l / sigma)

    lower    = (base + shift)/A                  value 0 below here
    quasi    = (H f + shift)/A1                  quasi-ideal value
    mid_low  = quasi + base/A1
    mid_high = quasi + base/A
    ideal    = ((A1 + A H) f - shift H)/(A1 (A + 1))
    buy      = ((1-p) mid_low - (1-q) lower)/(q - p)

With E = 1 - e^{-lam n}:

    [0, lower):          0
    [lower, buy):        E q(1-p)/(q-p) ((w-lower)/(buy-lower))^p
    [buy, mid_low):      E (1 - p(q-1)/(q-p) ((mid_low-w)/(mid_low-buy))^q)
    [mid_low, mid_high): E
    [mid_high, ideal]:   E + e^{-lam n} ((w-mid_high)/(ideal-mid_high))^p

Model II with a - c < 0 admits, when the income noise l vanishes and
consumption is high (C1 + a <= c <= C0, H <= Htilde), a buy-everywhere
regime in which the first three branches collapse into a single
one-minus-power branch based at the quasi-ideal value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleScenarioError
from .numerics import PiecewiseValue, Segment, bisect, investment_foc

MODEL_I = "I"
MODEL_II = "II"

# solution families, by branch structure
FIVE_BRANCH = "five-branch"      # models I and II with a buy level > 0
BUY_EVERYWHERE = "buy-everywhere"  # model II, l = 0, high consumption


@dataclass(frozen=True)
class StochScenario:
    r: float
    lam: float
    mu: float
    sigma: float
    a: float
    l: float
    c: float
    premium_rate: float   # H, per $1 of coverage per year
    f: float
    n: float              # coverage years, may be math.inf (limit case)
    model: str = MODEL_I

    def __post_init__(self):
        if self.model not in (MODEL_I, MODEL_II):
            raise ValueError(f"unknown model {self.model!r}")
        if not self.r > 0 or not self.lam > 0:
            raise ValueError("forces r and lam must be positive")
        if not self.sigma > 0:
            raise ValueError("volatility must be positive")
        if not self.mu > self.r:
            raise InfeasibleScenarioError("mu > r", f"risky drift {self.mu} <= r {self.r}")
        if self.l < 0:
            raise ValueError("income diffusion must be non-negative")
        if not self.premium_rate > 0:
            raise ValueError("premium rate must be positive")
        if not self.f > 0:
            raise ValueError("financial goal must be positive")
        if not self.n > 0:
            raise ValueError("coverage length must be positive")
        if self.model == MODEL_I and not self.c < self.r + self.a:
            raise InfeasibleScenarioError(
                "c < r + a", f"consumption coefficient {self.c} >= r + a")

    @property
    def sharpe_half(self) -> float:
        return 0.5 * ((self.mu - self.r) / self.sigma) ** 2

    @property
    def drift_rate(self) -> float:
        """A: effective exponential rate of uninsured wealth."""
        return self.r + (self.a - self.c) if self.model == MODEL_I else self.r

    @property
    def drift_shift(self) -> float:
        """Constant wealth drain (model II's c - a); zero for model I."""
        return 0.0 if self.model == MODEL_I else self.c - self.a

    @property
    def window_mass(self) -> float:
        """E = 1 - e^{-lam n}, the chance of dying within coverage."""
        return 1.0 - math.exp(-self.lam * self.n)


@dataclass(frozen=True)
class Exponents:
    x1: float
    x2: float
    k_pos: float
    p: float
    q: float


@dataclass(frozen=True)
class Breakpoints:
    lower: float
    buy: float
    mid_low: float
    mid_high: float
    quasi: float
    ideal: float


@dataclass(frozen=True)
class Criticals:
    c0: float
    c1: float
    h_tilde: float | None   # None: empty feasible set in (0, h_max]
    h_max: float


@dataclass(frozen=True)
class StochSolution:
    family: str
    sharpe_half: float
    A: float
    A1: float
    exps: Exponents
    bps: Breakpoints
    d1: float | None
    d2: float
    d3: float
    criticals: Criticals | None   # model II only
    limit_case: bool              # n = inf


def _quad_roots(A: float, lam: float, m: float) -> tuple[float, float]:
    """Roots of m x^2 + (lam - A - m) x - lam = 0, as (negative, positive).

    Computed cancellation-free: the positive root from the stable branch
    of the quadratic formula, the negative one from the root product
    x1 x2 = -lam/m.
    """
    disc = math.sqrt((A - lam + m) ** 2 + 4.0 * lam * m)
    x2 = ((A - lam + m) + disc) / (2.0 * m)
    x1 = (-lam / m) / x2
    return x1, x2


def exponents(scn: StochScenario) -> Exponents:
    m = scn.sharpe_half
    if m == 0.0:
        raise InfeasibleScenarioError("mu > r", "degenerate market (mu = r)")
    A = scn.drift_rate
    x1, x2 = _quad_roots(A, scn.lam, m)
    _, k_pos = _quad_roots(A + scn.premium_rate, scn.lam, m)
    p = x1 / (x1 - 1.0)
    q = k_pos / (k_pos - 1.0)
    return Exponents(x1, x2, k_pos, p, q)


def breakpoints(scn: StochScenario, exps: Exponents | None = None) -> Breakpoints:
    exps = exps or exponents(scn)
    A = scn.drift_rate
    A1 = A + scn.premium_rate
    shift = scn.drift_shift
    base = (scn.mu - scn.r) * scn.l / scn.sigma
    H, f = scn.premium_rate, scn.f
    lower = (base + shift) / A
    quasi = (H * f + shift) / A1
    mid_low = quasi + base / A1
    mid_high = quasi + base / A
    ideal = ((A1 + A * H) * f - shift * H) / (A1 * (A + 1.0))
    p, q = exps.p, exps.q
    buy = ((1.0 - p) * mid_low - (1.0 - q) * lower) / (q - p)
    bps = Breakpoints(lower, buy, mid_low, mid_high, quasi, ideal)
    _check_ordering(bps)
    return bps


def _check_ordering(bps: Breakpoints):
    pairs = [
        ("0 <= lower", 0.0, bps.lower, True),
        ("lower < buy", bps.lower, bps.buy, False),
        ("buy < mid_low", bps.buy, bps.mid_low, False),
        ("mid_low <= mid_high", bps.mid_low, bps.mid_high, True),
        ("mid_high < ideal", bps.mid_high, bps.ideal, False),
    ]
    for name, lo, hi, allow_eq in pairs:
        ok = lo <= hi if allow_eq else lo < hi
        if not ok:
            raise InfeasibleScenarioError(name, f"breakpoint ordering violated: {name} "
                                                f"({lo} vs {hi})")


def criticals(scn: StochScenario, h_max: float = 10.0) -> Criticals:
    """Consumption ceiling C0, buy-everywhere floor C1, and the largest
    premium rate Htilde with C1(H) <= C0(H) - a on (0, h_max]."""
    if scn.model != MODEL_II:
        raise ValueError("critical values are defined for model II only")
    r, lam, f, H = scn.r, scn.lam, scn.f, scn.premium_rate
    m = scn.sharpe_half

    def c0_of(h):
        return (r + h + r * h) * r * f / ((r + h) * (r + 1.0) + r * h) + scn.a

    def c1_of(h):
        _, k = _quad_roots(r + h, lam, m)
        qh = k / (k - 1.0)
        return h * f * ((r + h) * qh / lam - 1.0)

    def gap(h):
        return c1_of(h) - (c0_of(h) - scn.a)

    eps = 1e-9
    if gap(eps) > 0.0:
        h_tilde = None
    elif gap(h_max) <= 0.0:
        h_tilde = h_max
    else:
        h_tilde = bisect(gap, eps, h_max, tol=1e-13).root
    return Criticals(c0_of(H), c1_of(H), h_tilde, h_max)


def _family(scn: StochScenario) -> str:
    if scn.model == MODEL_I:
        return FIVE_BRANCH
    diff = scn.a - scn.c
    if diff >= 0.0:
        return FIVE_BRANCH
    crit = criticals(scn)
    if scn.c > crit.c0:
        raise InfeasibleScenarioError(
            "c <= C0", f"consumption {scn.c} above the critical value {crit.c0}")
    if (scn.l == 0.0 and scn.c >= crit.c1 + scn.a
            and (crit.h_tilde is not None and scn.premium_rate <= crit.h_tilde)):
        return BUY_EVERYWHERE
    return FIVE_BRANCH


def coefficients(scn: StochScenario, exps: Exponents, bps: Breakpoints,
                 family: str = FIVE_BRANCH):
    """Branch coefficients (D1, D2, D3).

    D2 scales a power of (mid_low - w), so it is reported negative; the
    branch is evaluated in its real-valued ratio form
    E (1 - p(q-1)/(q-p) ((mid_low-w)/(mid_low-buy))^q).
    """
    E = scn.window_mass
    out_mass = 1.0 - E
    p, q = exps.p, exps.q
    if family == BUY_EVERYWHERE:
        d1 = None
        d2 = -E / bps.quasi ** q
        d3 = out_mass / (bps.ideal - bps.quasi) ** p
        return d1, d2, d3
    if bps.buy == bps.lower or bps.buy == bps.mid_low:
        raise InfeasibleScenarioError("degenerate geometry",
                                      "buy level coincides with a breakpoint")
    d1 = E * q * (1.0 - p) / (q - p) / (bps.buy - bps.lower) ** p
    d2 = -E * p * (q - 1.0) / (q - p) / (bps.mid_low - bps.buy) ** q
    d3 = out_mass / (bps.ideal - bps.mid_high) ** p
    return d1, d2, d3


def solve(scn: StochScenario) -> StochSolution:
    exps = exponents(scn)
    if not 0.0 < exps.p < 1.0:
        raise InfeasibleScenarioError("p in (0,1)", f"exponent p = {exps.p}")
    if not exps.q > 1.0:
        raise InfeasibleScenarioError("q > 1", f"exponent q = {exps.q}")
    family = _family(scn)
    A = scn.drift_rate
    A1 = A + scn.premium_rate
    if family == BUY_EVERYWHERE:
        # first three branches collapse; breakpoints reduce to quasi/ideal
        H, f, shift = scn.premium_rate, scn.f, scn.drift_shift
        quasi = (H * f + shift) / A1
        ideal = ((A1 + A * H) * f - shift * H) / (A1 * (A + 1.0))
        bps = Breakpoints(0.0, 0.0, quasi, quasi, quasi, ideal)
    else:
        bps = breakpoints(scn, exps)
    d1, d2, d3 = coefficients(scn, exps, bps, family)
    crit = criticals(scn) if scn.model == MODEL_II else None
    return StochSolution(family, scn.sharpe_half, A, A1, exps, bps, d1, d2, d3,
                         crit, limit_case=math.isinf(scn.n))


def build_value(scn: StochScenario, sol: StochSolution | None = None) -> PiecewiseValue:
    sol = sol or solve(scn)
    E = scn.window_mass
    p, q = sol.exps.p, sol.exps.q
    A, A1 = sol.A, sol.A1
    b = sol.bps
    segs = []
    if sol.family == BUY_EVERYWHERE:
        segs.append(Segment(0.0, b.quasi, base=b.quasi, side=-1, exponent=q,
                            scale=sol.d2, offset=E, alpha=A1, branch_id="insure_gap"))
        segs.append(Segment(b.quasi, b.ideal, base=b.quasi, side=1, exponent=p,
                            scale=sol.d3, offset=E, alpha=A, branch_id="ideal_approach"))
        return PiecewiseValue(segs)
    if b.lower > 0.0:
        segs.append(Segment(0.0, b.lower, base=0.0, side=1, exponent=1.0,
                            scale=0.0, offset=0.0, alpha=A, branch_id="ruin_zone"))
    segs.append(Segment(b.lower, b.buy, base=b.lower, side=1, exponent=p,
                        scale=sol.d1, offset=0.0, alpha=A, branch_id="invest_only"))
    segs.append(Segment(b.buy, b.mid_low, base=b.mid_low, side=-1, exponent=q,
                        scale=sol.d2, offset=E, alpha=A1, branch_id="insure_gap"))
    if b.mid_high > b.mid_low:
        segs.append(Segment(b.mid_low, b.mid_high, base=b.mid_low, side=1, exponent=1.0,
                            scale=0.0, offset=E, alpha=A, branch_id="plateau"))
    segs.append(Segment(b.mid_high, b.ideal, base=b.mid_high, side=1, exponent=p,
                        scale=sol.d3, offset=E, alpha=A, branch_id="ideal_approach"))
    return PiecewiseValue(segs)


def value_stoch(scn: StochScenario, w, sol: StochSolution | None = None):
    """Maximum probability of reaching the goal before ruin.

    Wealth at or above the ideal value is a sure win; evaluation clamps
    there (branch id "above_ideal" via value_stoch_detail).
    """
    sol = sol or solve(scn)
    pv = build_value(scn, sol)
    scalar = np.isscalar(w)
    ws = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(ws < 0):
        raise ValueError("wealth must be non-negative")
    out = np.ones(ws.shape)
    inside = ws < sol.bps.ideal
    if np.any(inside):
        out[inside] = np.atleast_1d(pv.value(ws[inside]))
    return float(out[0]) if scalar else out


def value_stoch_detail(scn: StochScenario, w: float, sol: StochSolution | None = None):
    sol = sol or solve(scn)
    if w >= sol.bps.ideal:
        return 1.0, "above_ideal" if w > sol.bps.ideal else "ideal"
    pv = build_value(scn, sol)
    return float(pv.value(w)), pv.branch(w)


def purchase_amount(scn: StochScenario, w, sol: StochSolution | None = None):
    """Optimal coverage D*: the literal indicator form of the verification
    operator (full goal f on the plateau, where the value is flat)."""
    sol = sol or solve(scn)
    b = sol.bps
    scalar = np.isscalar(w)
    ws = np.clip(np.atleast_1d(np.asarray(w, dtype=float)), 0.0, b.ideal)
    f = scn.f
    if sol.family == BUY_EVERYWHERE:
        out = np.where(ws < b.quasi, f - ws, f - b.quasi)
    else:
        out = np.select(
            [ws < b.buy, ws < b.mid_low, ws < b.mid_high],
            [0.0, f - ws, f],
            default=f - b.quasi,
        )
    return float(out[0]) if scalar else out


def invest_amount(scn: StochScenario, w, sol: StochSolution | None = None):
    """Optimal risky investment, clamped non-negative on each branch
    (the clamp realizes the no-trade zones around the plateau)."""
    sol = sol or solve(scn)
    b = sol.bps
    p, q = sol.exps.p, sol.exps.q
    mu_r = scn.mu - scn.r
    sig, l = scn.sigma, scn.l
    scalar = np.isscalar(w)
    ws = np.clip(np.atleast_1d(np.asarray(w, dtype=float)), 0.0, b.ideal)
    if sol.family == BUY_EVERYWHERE:
        out = np.where(ws < b.quasi,
                       mu_r * (ws - b.quasi) / (sig ** 2 * (1.0 - q)),
                       mu_r * (ws - b.quasi) / (sig ** 2 * (1.0 - p)))
    else:
        pi_a = (mu_r * (ws - b.lower) + sig * l * (p - 1.0)) / (sig ** 2 * (1.0 - p))
        pi_b = (mu_r * (ws - b.mid_low) + sig * l * (q - 1.0)) / (sig ** 2 * (1.0 - q))
        pi_c = (mu_r * (ws - b.mid_high) + sig * l * (p - 1.0)) / (sig ** 2 * (1.0 - p))
        out = np.select(
            [ws < b.buy, ws < b.mid_low, ws < b.mid_high],
            [pi_a, pi_b, 0.0],
            default=pi_c,
        )
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class StochAction:
    purchase: float
    invest: float


def action_stoch(scn: StochScenario, w: float, sol: StochSolution | None = None) -> StochAction:
    sol = sol or solve(scn)
    return StochAction(purchase_amount(scn, w, sol), invest_amount(scn, w, sol))


def foc_check(scn: StochScenario, w: float, sol: StochSolution | None = None,
              pv: PiecewiseValue | None = None) -> float:
    """|closed-form investment - first-order-condition maximizer| at w."""
    sol = sol or solve(scn)
    pv = pv or build_value(scn, sol)
    pi_foc = investment_foc(pv, scn.mu, scn.r, scn.sigma, scn.l, w)
    return abs(invest_amount(scn, w, sol) - max(pi_foc, 0.0))
