"""Independent Monte Carlo oracle for the closed-form value functions.

Deterministic-framework simulators never discretize time: every event
(threshold crossing, purchase, ruin, goal attainment) has a closed-form
time under exponential growth or decay, so a path is just a draw of the
death/retirement time checked against those times.

The stochastic simulator is an Euler-Maruyama scheme with the death time
sampled exactly and paths absorbed at ruin (failure) and at the ideal
value (success).

Reproducibility contract: all randomness is counter-based.  The variate
for (seed, path, stream) is produced by hashing those three words with
the splitmix64 finalizer, so results are independent of chunking, thread
schedule, or evaluation order; two runs with the same seed and different
chunk counts are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from . import det_endow, det_life, stoch
from .det_endow import EndowScenario
from .det_life import CONTINUOUS, SINGLE

STRATEGIES = ("paper_optimal", "buy_all_at_quasi_ideal", "wait_to_ideal", "buy_gap_now")

_PHI = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def unit_uniforms(seed: int, paths, stream: int):
    """Uniform variates in (0, 1), one per path id, for a given stream.

    Pure function of (seed, path, stream): evaluation order never matters.
    """
    paths = np.asarray(paths, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix(np.uint64(seed % (1 << 64)) + _PHI)
        z = _mix(z + _PHI * (paths + np.uint64(1)))
        z = _mix(z + _PHI * np.uint64(stream + 1))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def exponential_times(seed: int, paths, rate: float, stream: int = 0):
    return -np.log(unit_uniforms(seed, paths, stream)) / rate


def standard_normals(seed: int, paths, stream: int):
    return ndtri(unit_uniforms(seed, paths, stream))


@dataclass(frozen=True)
class SimConfig:
    n_paths: int
    seed: int
    w0: float
    strategy: str = "paper_optimal"
    dt: float = 1e-3          # stochastic runs only
    chunks: int = 1           # path blocks; result is chunk-count invariant
    horizon: float | None = None  # stochastic runs: censor cap (default 50/lam)

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("need at least one path")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.chunks < 1:
            raise ValueError("chunks must be >= 1")
        if self.w0 < 0:
            raise ValueError("initial wealth must be non-negative")


@dataclass(frozen=True)
class MCEstimate:
    p_hat: float
    stderr: float
    n_paths: int
    seed: int
    successes: int
    branch_counts: dict
    notes: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "p_hat": self.p_hat,
            "stderr": self.stderr,
            "n_paths": self.n_paths,
            "seed": self.seed,
            "successes": self.successes,
            "branch_counts": dict(self.branch_counts),
            "notes": dict(self.notes),
        }


def _estimate(counts: dict, n_paths: int, seed: int, notes=None) -> MCEstimate:
    successes = sum(counts.values())
    p = successes / n_paths
    stderr = math.sqrt(p * (1.0 - p) / n_paths)
    return MCEstimate(p, stderr, n_paths, seed, successes, counts, notes or {})


def _chunks(n_paths: int, chunks: int):
    edges = np.linspace(0, n_paths, chunks + 1).astype(np.int64)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            yield np.arange(lo, hi, dtype=np.uint64)


def _merge(total: dict, add: dict):
    for k, v in add.items():
        total[k] = total.get(k, 0) + int(v)


def _is_endow(scn) -> bool:
    return isinstance(scn, EndowScenario)


def _in_window(T, start, m, n, endow: bool):
    """Benefit-window membership with the policy clock starting at coverage
    purchase: life pays on death in (start+m, start+m+n], an endowment on
    retirement after start+m+n."""
    if endow:
        return T > start + m + n
    return (T > start + m) & (T <= start + m + n)


class _Trace:
    """Optional per-path event log (path_id, event_time, event_kind, wealth)."""

    def __init__(self, path):
        self.path = path
        self.rows = []

    def add(self, ids, times, kind, wealth):
        times = np.broadcast_to(times, np.shape(ids))
        wealth = np.broadcast_to(wealth, np.shape(ids))
        for i, t, w in zip(ids, times, wealth):
            self.rows.append((int(i), float(t), kind, float(w)))

    def write(self):
        from .scenario_io import write_csv

        self.rows.sort(key=lambda r: (r[0], r[1]))
        write_csv(self.path, ["path_id", "event_time", "event_kind", "wealth"], self.rows)


# ---------------------------------------------------------------------------
# Deterministic framework, single premium
# ---------------------------------------------------------------------------

def simulate_det_single(scn, cfg: SimConfig, trace_path: str | None = None) -> MCEstimate:
    """Exact event-time simulation of the single-premium problem."""
    if scn.mode != SINGLE:
        raise ValueError("single-premium simulator needs a single-premium scenario")
    endow = _is_endow(scn)
    r, lam = scn.fp.r, scn.fp.lam
    m, n = scn.cw.m, scn.cw.n
    P = scn.premium.value
    gap = scn.goal_gap
    th, _ = (det_endow.build_value(scn) if endow else det_life.build_value(scn))
    quasi, ideal = th.quasi_ideal, th.ideal
    w = cfg.w0
    trace = _Trace(trace_path) if trace_path else None

    counts: dict = {}
    for ids in _chunks(cfg.n_paths, cfg.chunks):
        T = exponential_times(cfg.seed, ids, lam)
        window = np.zeros(T.shape, bool)
        growth = np.zeros(T.shape, bool)
        wealth_at_death = np.zeros(T.shape)
        buy_time = None   # (time, wealth after purchase) for paths with T past it

        if cfg.strategy == "buy_all_at_quasi_ideal":
            if w > 0:
                if w < quasi:
                    start = math.log(quasi / w) / r
                    window = _in_window(T, start, m, n, endow)
                    wealth_at_death = np.where(T < start, w * np.exp(r * T), 0.0)
                    buy_time = (start, 0.0)
                else:
                    leftover = w - quasi
                    window = _in_window(T, 0.0, m, n, endow)
                    wealth_at_death = leftover * np.exp(r * T)
                    if leftover > 0:
                        growth = ~window & (wealth_at_death >= gap)
                    buy_time = (0.0, leftover)
        elif cfg.strategy in ("wait_to_ideal", "paper_optimal"):
            # success iff wealth alone covers the gap by the death time;
            # from the ideal value on, the purchase keeps that true forever
            if w >= gap:
                growth = np.ones(T.shape, bool)
            elif w > 0:
                growth = T >= math.log(gap / w) / r
            if w > 0:
                start = max(0.0, math.log(ideal / w) / r) if w < ideal else 0.0
                wealth_at_death = np.where(T < start, w * np.exp(r * T),
                                           gap * np.exp(r * np.maximum(T - start, 0.0)))
                buy_time = (start, gap)
        elif cfg.strategy == "buy_gap_now":
            face = min(gap, w / P)
            leftover = w - P * face
            in_win = _in_window(T, 0.0, m, n, endow)
            wealth_at_death = leftover * np.exp(r * T)
            window = in_win & (wealth_at_death + face >= gap)
            growth = ~in_win & (wealth_at_death >= gap)
            buy_time = (0.0, leftover)

        _merge(counts, {"window": window.sum(), "growth": growth.sum()})
        if trace:
            if buy_time is not None:
                bought = T >= buy_time[0]
                trace.add(ids[bought], buy_time[0], "purchase", buy_time[1])
            trace.add(ids[window], T[window], "death_window", wealth_at_death[window])
            trace.add(ids[growth], T[growth], "death_growth", wealth_at_death[growth])
            fail = ~(window | growth)
            trace.add(ids[fail], T[fail], "death_fail", wealth_at_death[fail])
    if trace:
        trace.write()
    return _estimate(counts, cfg.n_paths, cfg.seed)


# ---------------------------------------------------------------------------
# Deterministic framework, continuous premium
# ---------------------------------------------------------------------------

def simulate_det_continuous(scn, cfg: SimConfig, trace_path: str | None = None) -> MCEstimate:
    """Exact event-time simulation of the continuous-premium problem.

    While the full goal gap f - W is insured, (quasi - W) grows at rate
    r + P: wealth below the quasi-ideal value decays to ruin in closed
    form, wealth above it grows.  Reaching the ideal value while waiting
    is absorbed as success, matching the closed form's boundary value.
    """
    if scn.mode != CONTINUOUS:
        raise ValueError("continuous-premium simulator needs a continuous-premium scenario")
    endow = _is_endow(scn)
    r, lam = scn.fp.r, scn.fp.lam
    m, n = scn.cw.m, scn.cw.n
    P = scn.premium.value
    f = scn.f
    th, _ = (det_endow.build_value(scn) if endow else det_life.build_value(scn))
    quasi, ideal = th.quasi_ideal, th.ideal
    w = cfg.w0

    strategy = cfg.strategy
    notes = {}
    if strategy == "paper_optimal":
        w0_free = th.free_boundary
        if w0_free is not None and w < w0_free:
            strategy = "buy_gap_now"
        else:
            strategy = "wait_to_ideal"
        notes["resolved_strategy"] = strategy
    trace = _Trace(trace_path) if trace_path else None

    counts: dict = {}
    for ids in _chunks(cfg.n_paths, cfg.chunks):
        T = exponential_times(cfg.seed, ids, lam)
        window = np.zeros(T.shape, bool)
        growth = np.zeros(T.shape, bool)
        wealth_at_death = np.zeros(T.shape)
        events = []  # extra (mask, time, kind, wealth) trace rows

        if strategy == "wait_to_ideal":
            if w >= ideal:
                growth = np.ones(T.shape, bool)
                events.append((growth, 0.0, "ideal", float(w)))
            elif w > 0:
                start = math.log(ideal / w) / r
                growth = T >= start
                wealth_at_death = w * np.exp(r * np.minimum(T, start))
                events.append((growth, start, "ideal", ideal))
        elif strategy == "buy_all_at_quasi_ideal":
            if w > 0:
                if w < quasi:
                    start = math.log(quasi / w) / r
                    window = _in_window(T, start, m, n, endow)
                    wealth_at_death = np.where(T < start, w * np.exp(r * T), quasi)
                else:
                    start = 0.0
                    window = _in_window(T, 0.0, m, n, endow)
                    wealth_at_death = quasi + (w - quasi) * np.exp(r * T)
                    if w > quasi:
                        t_goal = math.log((f - quasi) / (w - quasi)) / r
                        growth = ~window & (T >= t_goal)
                events.append((T >= start, start, "purchase", max(w, quasi)))
        elif strategy == "buy_gap_now":
            in_win = _in_window(T, 0.0, m, n, endow)
            events.append((np.ones(T.shape, bool), 0.0, "purchase", float(w)))
            if w < quasi:
                if w > 0:
                    t_ruin = math.log(quasi / (quasi - w)) / (r + P)
                    window = in_win & (T < t_ruin)
                    wealth_at_death = np.maximum(
                        quasi - (quasi - w) * np.exp((r + P) * T), 0.0)
                    events.append((T >= t_ruin, t_ruin, "ruin", 0.0))
            elif w == quasi:
                window = in_win
                wealth_at_death = np.full(T.shape, float(w))
            else:
                t_goal = math.log((f - quasi) / (w - quasi)) / (r + P)
                window = in_win
                growth = ~in_win & (T >= t_goal)
                wealth_at_death = quasi + (w - quasi) * np.exp((r + P) * T)

        _merge(counts, {"window": window.sum(), "growth": growth.sum()})
        if trace:
            for mask, t_ev, kind, w_ev in events:
                trace.add(ids[mask], t_ev, kind, w_ev)
            dead = (~growth if strategy == "wait_to_ideal"
                    else np.ones(T.shape, bool))
            if strategy == "buy_gap_now" and w < quasi and w > 0:
                dead &= T < t_ruin
            trace.add(ids[dead & window], T[dead & window], "death_window",
                      wealth_at_death[dead & window])
            g = dead & growth
            trace.add(ids[g], T[g], "death_growth", wealth_at_death[g])
            fail = dead & ~(window | growth)
            trace.add(ids[fail], T[fail], "death_fail", wealth_at_death[fail])
    if trace:
        trace.write()
    return _estimate(counts, cfg.n_paths, cfg.seed, notes)


# ---------------------------------------------------------------------------
# Stochastic framework
# ---------------------------------------------------------------------------

def simulate_stoch(scn: stoch.StochScenario, cfg: SimConfig,
                   trace_path: str | None = None) -> MCEstimate:
    """Euler-Maruyama simulation of the controlled wealth SDE."""
    if cfg.dt > 1e-2:
        raise ValueError(f"dt {cfg.dt} too large for stochastic runs (max 1e-2)")
    trace = _Trace(trace_path) if trace_path else None
    sol = stoch.solve(scn)
    ideal = sol.bps.ideal
    lam = scn.lam
    horizon = cfg.horizon if cfg.horizon is not None else 50.0 / lam
    A = scn.drift_rate
    shift = scn.drift_shift
    mu_r = scn.mu - scn.r
    sig, l, H, f, n = scn.sigma, scn.l, scn.premium_rate, scn.f, scn.n

    def controls(wv):
        if cfg.strategy == "paper_optimal":
            return stoch.purchase_amount(scn, wv, sol), stoch.invest_amount(scn, wv, sol)
        if cfg.strategy == "buy_all_at_quasi_ideal":
            cover = np.where(wv >= sol.bps.quasi, f - sol.bps.quasi, 0.0)
            return cover, np.zeros_like(wv)
        if cfg.strategy == "wait_to_ideal":
            return np.zeros_like(wv), np.zeros_like(wv)
        return np.maximum(f - wv, 0.0), np.zeros_like(wv)  # buy_gap_now

    counts: dict = {}
    censored_total = 0
    for ids in _chunks(cfg.n_paths, cfg.chunks):
        T = exponential_times(cfg.seed, ids, lam)
        W = np.full(ids.shape, float(cfg.w0))
        chunk = {"window": 0, "growth": 0, "ideal_absorbed": 0}

        # immediate absorption
        if cfg.w0 >= ideal:
            chunk["ideal_absorbed"] += len(ids)
            if trace:
                trace.add(ids, 0.0, "ideal", float(cfg.w0))
            act = np.arange(0)
        elif cfg.w0 <= 0.0:
            if trace:
                trace.add(ids, 0.0, "ruin", 0.0)
            act = np.arange(0)
        else:
            act = np.arange(len(ids))

        t = 0.0
        step = 0
        while act.size and t < horizon:
            wv = W[act]
            cover, pi = controls(wv)
            paying = H * cover if t <= n else 0.0
            drift = A * wv - shift + mu_r * pi - paying
            dt_i = np.minimum(cfg.dt, T[act] - t)
            z = standard_normals(cfg.seed, ids[act], step + 1)
            w_new = wv + drift * dt_i + (sig * pi + l) * np.sqrt(dt_i) * z

            dying = T[act] <= t + cfg.dt
            if np.any(dying):
                wd = w_new[dying]
                during = T[act][dying] <= n
                total = np.where(during, wd + cover[dying], wd)
                ok = total >= f
                chunk["window"] += int(np.sum(ok & during))
                chunk["growth"] += int(np.sum(ok & ~during))
                if trace:
                    kinds = np.where(~ok, "death_fail",
                                     np.where(during, "death_window", "death_growth"))
                    for kind in ("death_fail", "death_window", "death_growth"):
                        sel = kinds == kind
                        trace.add(ids[act[dying]][sel], T[act][dying][sel], kind, wd[sel])

            surv = act[~dying]
            ws = w_new[~dying]
            ruined = ws <= 0.0
            won = ws >= ideal
            chunk["ideal_absorbed"] += int(won.sum())
            if trace:
                trace.add(ids[surv[ruined]], t + cfg.dt, "ruin", 0.0)
                trace.add(ids[surv[won]], t + cfg.dt, "ideal", ws[won])
            W[surv] = ws
            act = surv[~(ruined | won)]
            t += cfg.dt
            step += 1

        censored_total += int(act.size)  # horizon reached: counted as failure
        if trace and act.size:
            trace.add(ids[act], t, "censored", W[act])
        _merge(counts, chunk)
    if trace:
        trace.write()
    notes = {"censored": censored_total, "dt": cfg.dt, "horizon": horizon}
    return _estimate(counts, cfg.n_paths, cfg.seed, notes)


# ---------------------------------------------------------------------------
# Comparison records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRecord:
    p_hat: float
    closed_form: float
    stderr: float
    z: float
    status: str        # pass | fail | flagged
    exact: bool
    strategy: str
    n_paths: int
    seed: int
    branch_counts: dict
    notes: dict

    def to_json(self):
        return {
            "p_hat": self.p_hat,
            "closed_form": self.closed_form,
            "stderr": self.stderr,
            "z": self.z,
            "status": self.status,
            "exact_branch": self.exact,
            "strategy": self.strategy,
            "n_paths": self.n_paths,
            "seed": self.seed,
            "branch_counts": dict(self.branch_counts),
            "notes": dict(self.notes),
        }


def is_exact_branch(cfg: SimConfig, quasi: float, ideal: float) -> bool:
    """Branches where memorylessness makes the closed form the literal
    success probability of the simulated strategy."""
    if cfg.w0 == 0.0 or cfg.w0 >= ideal:
        return True
    return cfg.strategy == "buy_all_at_quasi_ideal" and cfg.w0 < quasi


def compare_report(est: MCEstimate, closed_form: float, exact: bool,
                   strategy: str, sigma_limit: float = 3.5) -> ComparisonRecord:
    """Match an estimate against a closed-form value.

    Exact branches pass/fail a z-test at sigma_limit and require at least
    10^4 paths; everything else is flagged with its z-score logged.
    """
    diff = est.p_hat - closed_form
    if est.stderr > 0:
        z = diff / est.stderr
    else:
        z = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
    if exact:
        if est.n_paths < 10_000:
            raise ValueError("exact-branch comparisons need at least 1e4 paths")
        status = "pass" if abs(z) <= sigma_limit else "fail"
    else:
        status = "flagged"
    return ComparisonRecord(est.p_hat, closed_form, est.stderr, z, status, exact,
                            strategy, est.n_paths, est.seed,
                            est.branch_counts, est.notes)
