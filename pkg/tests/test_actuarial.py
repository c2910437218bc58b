"""Present values and premiums against an independent quadrature oracle.

Frozen constants were computed with the adaptive Simpson oracle in
conftest (tolerance 1e-13) over the defining integrands.
"""

import math

import numpy as np
import pytest

from conftest import adaptive_simpson, simpson_to_inf
from goalreach import (
    CoverageWindow,
    ForceParams,
    annuity_deferred_endowment,
    annuity_endowment,
    apv_deferred_term,
    apv_pure_endowment,
    premium_rate_pure_endow,
    premium_rate_term,
    premium_single_pure_endow,
    premium_single_term,
)
from goalreach.errors import DegenerateAnnuityError, InfeasibleScenarioError

INF = math.inf


class TestApvDeferredTerm:
    def test_whole_life_equal_forces(self):
        # lam/(lam+r) with lam = r
        fp = ForceParams(0.05, 0.05)
        assert apv_deferred_term(fp, CoverageWindow(0.0, INF)) == pytest.approx(0.5, abs=1e-15)

    def test_infinite_deferral_vanishes(self):
        fp = ForceParams(0.03, 0.04)
        assert apv_deferred_term(fp, CoverageWindow(INF, 10.0)) == 0.0

    def test_oracle_value_frozen(self):
        fp = ForceParams(0.04, 0.02)
        got = apv_deferred_term(fp, CoverageWindow(5.0, 10.0))
        assert got == pytest.approx(0.11141618698037292, abs=1e-12)

    def test_matches_quadrature_on_random_parameters(self, rng):
        for _ in range(20):
            r, lam = rng.uniform(0.01, 0.1, 2)
            m, n = rng.uniform(0.0, 10.0), rng.uniform(0.5, 30.0)
            got = apv_deferred_term(ForceParams(r, lam), CoverageWindow(m, n))
            want = adaptive_simpson(lambda t: lam * math.exp(-(r + lam) * t), m, m + n)
            assert got == pytest.approx(want, rel=1e-10)

    def test_monotone_in_window(self, rng):
        fp = ForceParams(0.04, 0.03)
        ms = np.sort(rng.uniform(0.0, 20.0, 10))
        vals = [apv_deferred_term(fp, CoverageWindow(m, 10.0)) for m in ms]
        assert all(a > b for a, b in zip(vals, vals[1:]))  # decreasing in m
        ns = np.sort(rng.uniform(0.5, 40.0, 10))
        vals = [apv_deferred_term(fp, CoverageWindow(3.0, n)) for n in ns]
        assert all(a < b for a, b in zip(vals, vals[1:]))  # increasing in n

    def test_interval_additivity(self, rng):
        for _ in range(20):
            r, lam = rng.uniform(0.01, 0.1, 2)
            m, n = rng.uniform(0.5, 10.0), rng.uniform(0.5, 20.0)
            fp = ForceParams(r, lam)
            left = apv_deferred_term(fp, CoverageWindow(0.0, m))
            right = apv_deferred_term(fp, CoverageWindow(m, n))
            whole = apv_deferred_term(fp, CoverageWindow(0.0, m + n))
            assert left + right == pytest.approx(whole, abs=1e-12)


class TestApvPureEndowment:
    def test_immediate_payment(self):
        assert apv_pure_endowment(ForceParams(0.03, 0.02), 0.0) == 1.0

    def test_equal_forces_ten_years(self):
        assert apv_pure_endowment(ForceParams(0.05, 0.05), 10.0) == pytest.approx(
            math.exp(-1.0), abs=1e-15)

    def test_oracle_value_frozen(self):
        got = apv_pure_endowment(ForceParams(0.03, 0.01), 7.0)
        assert got == pytest.approx(0.7557837414557291, abs=1e-12)

    def test_matches_quadrature(self, rng):
        for _ in range(10):
            r, lam = rng.uniform(0.01, 0.1, 2)
            m = rng.uniform(0.5, 15.0)
            got = apv_pure_endowment(ForceParams(r, lam), m)
            want = simpson_to_inf(lambda t: lam * math.exp(-r * m) * math.exp(-lam * t), m, lam)
            assert got == pytest.approx(want, rel=1e-10)


class TestAnnuityEndowment:
    def test_whole_life_limit(self):
        assert annuity_endowment(ForceParams(0.05, 0.05), INF) == pytest.approx(10.0, abs=1e-12)

    def test_empty_period_rejected(self):
        with pytest.raises(DegenerateAnnuityError):
            annuity_endowment(ForceParams(0.05, 0.05), 0.0)

    def test_oracle_value_frozen(self):
        got = annuity_endowment(ForceParams(0.04, 0.02), 5.0)
        assert got == pytest.approx(4.319696321971369, abs=1e-12)
        assert got == pytest.approx((1.0 - math.exp(-0.3)) / 0.06, abs=1e-12)


class TestPremiumSingleTerm:
    def test_whole_life_equal_forces(self):
        prem = premium_single_term(ForceParams(0.05, 0.05, 0.0), CoverageWindow(0.0, INF))
        assert prem.value == pytest.approx(0.5, abs=1e-15)
        assert prem.feasible

    def test_linear_in_loading(self):
        cw = CoverageWindow(2.0, 10.0)
        base = premium_single_term(ForceParams(0.04, 0.03, 0.0), cw).value
        loaded = premium_single_term(ForceParams(0.04, 0.03, 0.2), cw).value
        assert loaded == 1.2 * base

    def test_oracle_value_frozen(self):
        prem = premium_single_term(ForceParams(0.04, 0.02, 0.1), CoverageWindow(5.0, 10.0))
        assert prem.value == pytest.approx(0.12255780567841022, abs=1e-12)

    def test_infeasibility_is_flag_not_error(self):
        # enormous loading pushes K past e^{-rm}
        prem = premium_single_term(ForceParams(0.005, 1.0, 9.0), CoverageWindow(1.0, 50.0))
        assert not prem.feasible


class TestPremiumRateTerm:
    def test_whole_life_net_rate_is_mortality_force(self):
        prem = premium_rate_term(ForceParams(0.05, 0.05, 0.0), CoverageWindow(0.0, INF))
        assert prem.value == pytest.approx(0.05, rel=1e-14)
        assert prem.basis == "term-fallback"

    def test_linear_in_loading(self):
        cw = CoverageWindow(5.0, 10.0)
        base = premium_rate_term(ForceParams(0.04, 0.02, 0.0), cw).value
        loaded = premium_rate_term(ForceParams(0.04, 0.02, 0.5), cw).value
        assert loaded == 1.5 * base

    def test_oracle_value_frozen(self):
        prem = premium_rate_term(ForceParams(0.04, 0.02, 0.0), CoverageWindow(5.0, 10.0))
        assert prem.value == pytest.approx(0.025792597135514884, abs=1e-12)

    def test_composition_of_verified_parts(self):
        fp, cw = ForceParams(0.04, 0.02, 0.0), CoverageWindow(5.0, 10.0)
        want = apv_deferred_term(fp, cw) / annuity_endowment(fp, cw.m)
        assert premium_rate_term(fp, cw).value == pytest.approx(want, abs=1e-15)


class TestPremiumPureEndowment:
    def test_zero_horizon_limit(self):
        prem = premium_single_pure_endow(ForceParams(0.03, 0.02, 0.0), CoverageWindow(0.0, 1e-14))
        assert prem.value == pytest.approx(1.0, rel=1e-12)

    def test_equal_forces(self):
        prem = premium_single_pure_endow(ForceParams(0.05, 0.05, 0.0), CoverageWindow(5.0, 5.0))
        assert prem.value == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_oracle_value_frozen(self):
        prem = premium_single_pure_endow(ForceParams(0.03, 0.02, 0.1), CoverageWindow(2.0, 8.0))
        assert prem.value == pytest.approx(1.1 * math.exp(-0.5), abs=1e-15)
        want = 1.1 * apv_pure_endowment(ForceParams(0.03, 0.02), 10.0)
        assert prem.value == pytest.approx(want, abs=1e-15)

    def test_infinite_horizon_rejected(self):
        with pytest.raises(InfeasibleScenarioError):
            premium_single_pure_endow(ForceParams(0.03, 0.02), CoverageWindow(2.0, INF))

    def test_rate_numerator_frozen(self):
        got = annuity_deferred_endowment(ForceParams(0.05, 0.05), CoverageWindow(5.0, 5.0))
        assert got == pytest.approx(2.3865121854119113, abs=1e-12)
        assert got == pytest.approx((math.exp(-0.5) - math.exp(-1.0)) / 0.1, abs=1e-12)

    def test_rate_linear_in_loading(self):
        cw = CoverageWindow(5.0, 5.0)
        base = premium_rate_pure_endow(ForceParams(0.04, 0.03, 0.0), cw).value
        loaded = premium_rate_pure_endow(ForceParams(0.04, 0.03, 0.3), cw).value
        assert loaded == pytest.approx(1.3 * base, rel=1e-15)

    def test_rate_needs_deferral(self):
        with pytest.raises(DegenerateAnnuityError):
            premium_rate_pure_endow(ForceParams(0.04, 0.03), CoverageWindow(0.0, 5.0))


def test_all_premiums_scale_with_loading(rng):
    for _ in range(10):
        r, lam = rng.uniform(0.01, 0.1, 2)
        m, n = rng.uniform(0.5, 8.0), rng.uniform(1.0, 20.0)
        theta = rng.uniform(0.0, 1.0)
        cw = CoverageWindow(m, n)
        for fn in (premium_single_term, premium_rate_term,
                   premium_single_pure_endow, premium_rate_pure_endow):
            v0 = fn(ForceParams(r, lam, 0.0), cw).value
            v1 = fn(ForceParams(r, lam, theta), cw).value
            assert v1 == pytest.approx((1.0 + theta) * v0, rel=1e-14)
