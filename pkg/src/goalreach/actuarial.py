"""Actuarial present values and premiums under constant forces.

Everything here assumes a constant force of interest r and a constant
force of mortality lam (exponential future lifetime), which makes every
present value elementary:

    term insurance, deferred m years, covering n years (per $1 benefit):
        A = int_m^{m+n} lam e^{-(r+lam)t} dt
          = lam/(r+lam) * (e^{-(r+lam)m} - e^{-(r+lam)(m+n)})

    pure endowment paying at m:
        E = e^{-(r+lam)m}

    temporary life annuity paid continuously over [0, m]:
        a = (1 - e^{-(r+lam)m}) / (r+lam)

Premiums add a proportional risk loading theta on top of the actuarial
value.  Four premium quantities are produced:

    K  single premium for deferred term insurance
    H  continuous premium rate for deferred term insurance  (A / a, loaded)
    R  single premium for a deferred pure endowment
    M  continuous premium rate for a deferred pure endowment

The coverage length n may be infinite (whole-life limits); the math.inf
sentinel flows through exp(-x) to an exact 0, never via overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateAnnuityError, InfeasibleScenarioError

INFINITE = math.inf


@dataclass(frozen=True)
class ForceParams:
    """Market and mortality forces plus the proportional risk loading."""

    r: float
    lam: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"force of interest must be positive, got {self.r}")
        if not self.lam > 0:
            raise ValueError(f"force of mortality must be positive, got {self.lam}")
        if self.theta < 0:
            raise ValueError(f"risk loading must be non-negative, got {self.theta}")


@dataclass(frozen=True)
class CoverageWindow:
    """Deferral period m and coverage length n (n may be math.inf)."""

    m: float
    n: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"deferral period must be non-negative, got {self.m}")
        if not self.n > 0:
            raise ValueError(f"coverage length must be positive, got {self.n}")


@dataclass(frozen=True)
class Premium:
    """A premium value with its feasibility flag and provenance.

    ``feasible`` reports the restriction under which the closed-form value
    functions are valid (single premiums: value < e^{-rm}; continuous
    rates: (P+rP)/(r+P+rP) < e^{-rm}).  Infeasibility is a flag here, not
    an error; scenario constructors turn it into one.

    ``basis`` records how the value was computed:  "deferral-annuity" for
    the literal formula, "term-fallback" when m = 0 forces premiums to be
    paid over the coverage period instead, "override" for user-supplied
    rates.
    """

    value: float
    feasible: bool
    basis: str = "deferral-annuity"


def apv_deferred_term(fp: ForceParams, cw: CoverageWindow) -> float:
    """Present value per $1 of death benefit inside [m, m+n)."""
    k = fp.r + fp.lam
    return fp.lam / k * (math.exp(-k * cw.m) - math.exp(-k * (cw.m + cw.n)))


def apv_pure_endowment(fp: ForceParams, m: float) -> float:
    """Present value per $1 paid on survival past m."""
    if m < 0:
        raise ValueError("deferral must be non-negative")
    return math.exp(-(fp.r + fp.lam) * m)


def annuity_endowment(fp: ForceParams, m: float) -> float:
    """Continuous annuity of $1/yr over [0, m], stopping at death.

    Equals (1 - term(0,m) - pure_endowment(m)) / r, which simplifies to
    (1 - e^{-(r+lam)m}) / (r+lam).
    """
    if m <= 0:
        raise DegenerateAnnuityError("annuity over an empty period (m = 0)")
    k = fp.r + fp.lam
    return (1.0 - math.exp(-k * m)) / k


def annuity_deferred_endowment(fp: ForceParams, cw: CoverageWindow) -> float:
    """Deferred temporary annuity int_m^{m+n} e^{-(r+lam)t} dt.

    This is the numerator of the continuous pure-endowment premium rate
    under its literal annuity-symbol reading.
    """
    k = fp.r + fp.lam
    return (math.exp(-k * cw.m) - math.exp(-k * (cw.m + cw.n))) / k


def premium_single_term(fp: ForceParams, cw: CoverageWindow) -> Premium:
    """Single premium K per $1 of deferred term death benefit."""
    k = (1.0 + fp.theta) * apv_deferred_term(fp, cw)
    return Premium(k, feasible=k < math.exp(-fp.r * cw.m))


def premium_rate_term(fp: ForceParams, cw: CoverageWindow) -> Premium:
    """Continuous premium rate H per $1 of deferred term death benefit.

    The literal rate pays premiums over the deferral period [0, m]; its
    denominator is empty when m = 0, so the m = 0 case falls back to
    paying over the coverage period [0, n] instead (the whole-life /
    term-insurance corollaries assume a finite positive rate).
    """
    apv = apv_deferred_term(fp, cw)
    if cw.m > 0:
        h = (1.0 + fp.theta) * apv / annuity_endowment(fp, cw.m)
        basis = "deferral-annuity"
    else:
        k = fp.r + fp.lam
        pay = (1.0 - math.exp(-k * cw.n)) / k
        h = (1.0 + fp.theta) * apv / pay
        basis = "term-fallback"
    return Premium(h, feasible=_rate_feasible(fp.r, h, cw.m), basis=basis)


def premium_single_pure_endow(fp: ForceParams, cw: CoverageWindow) -> Premium:
    """Single premium R per $1 paid on survival past m+n."""
    if math.isinf(cw.n):
        raise InfeasibleScenarioError("n finite", "a pure endowment with infinite n never pays")
    r_prem = (1.0 + fp.theta) * math.exp(-(cw.m + cw.n) * (fp.r + fp.lam))
    return Premium(r_prem, feasible=r_prem < math.exp(-fp.r * cw.m))


def premium_rate_pure_endow(fp: ForceParams, cw: CoverageWindow) -> Premium:
    """Continuous premium rate M per $1 paid on survival past m+n.

    Literal reading: the numerator is the deferred temporary annuity over
    [m, m+n], not the benefit present value.  Callers wanting a different
    convention supply the rate directly to the scenario constructor.
    """
    if math.isinf(cw.n):
        raise InfeasibleScenarioError("n finite", "a pure endowment with infinite n never pays")
    if cw.m <= 0:
        raise DegenerateAnnuityError("continuous pure-endowment premium needs m > 0")
    m_prem = (1.0 + fp.theta) * annuity_deferred_endowment(fp, cw) / annuity_endowment(fp, cw.m)
    return Premium(m_prem, feasible=_rate_feasible(fp.r, m_prem, cw.m))


def _rate_feasible(r: float, rate: float, m: float) -> bool:
    """Restriction (P + rP)/(r + P + rP) < e^{-rm} for continuous rates."""
    return (rate + r * rate) / (r + rate + r * rate) < math.exp(-r * m)
