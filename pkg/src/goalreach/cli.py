"""Command-line front end.

    goalreach value    CONFIG --grid A:B:STEPS --out curve.csv
    goalreach verify   CONFIG --out report.json
    goalreach simulate CONFIG --wealth W --paths N --seed S --out rec.json

Exit codes: 0 success, 1 verification/comparison failure, 2 usage or
schema error, 3 infeasible scenario.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import det_endow, det_life, mc, stoch
from .det_endow import EndowScenario
from .errors import GoalreachError, InfeasibleScenarioError, SchemaError
from .scenario_io import load_scenario, write_csv, write_json
from .verify import verify_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


def _scenario_meta(path, scn):
    return {"config": path, "scenario": repr(scn)}


def _parse_grid(spec: str, ideal: float):
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be A:B:STEPS, got {spec!r}")
    try:
        a = float(parts[0])
        b = ideal if parts[1] == "ideal" else float(parts[1])
        steps = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}: {exc}") from exc
    if steps < 2:
        raise UsageError("grid needs at least 2 steps")
    if not a < b:
        raise UsageError("grid needs A < B")
    return np.linspace(a, b, steps)


def _det_rows(scn, ws):
    endow = isinstance(scn, EndowScenario)
    mod = det_endow if endow else det_life
    th, pv = mod.build_value(scn)
    if endow:
        act = (mod.action_single_endow if scn.mode == "single"
               else mod.action_continuous_endow)
    else:
        act = mod.action_single if scn.mode == "single" else mod.action_continuous
    rows = []
    for w in ws:
        w = float(w)
        if w >= th.ideal:
            value, branch = 1.0, "ideal_or_above"
        else:
            value, branch = float(pv.value(w)), pv.branch(w)
        rows.append((w, value, branch, act(scn, w).buy_amount, 0.0))
    return rows, th.ideal


def _stoch_rows(scn, ws):
    sol = stoch.solve(scn)
    rows = []
    for w in ws:
        w = float(w)
        value, branch = stoch.value_stoch_detail(scn, w, sol)
        a = stoch.action_stoch(scn, w, sol)
        rows.append((w, value, branch, a.purchase, a.invest))
    return rows, sol.bps.ideal


def cmd_value(args) -> int:
    scn = load_scenario(args.config)
    if isinstance(scn, stoch.StochScenario):
        ideal = stoch.solve(scn).bps.ideal
    else:
        ideal = (det_endow if isinstance(scn, EndowScenario) else det_life).build_value(scn)[0].ideal
    ws = _parse_grid(args.grid, ideal)
    if isinstance(scn, stoch.StochScenario):
        rows, _ = _stoch_rows(scn, ws)
    else:
        rows, _ = _det_rows(scn, ws)
    write_csv(args.out, ["wealth", "value", "branch_id", "purchase", "invest"], rows)
    write_json(args.out + ".meta.json", _scenario_meta(args.config, scn))
    return EXIT_OK


def cmd_verify(args) -> int:
    scn = load_scenario(args.config)
    checks = verify_scenario(scn)
    report = {
        "config": args.config,
        "scenario": repr(scn),
        "all_passed": all(c.passed for c in checks),
        "checks": [c.to_json() for c in checks],
    }
    write_json(args.out, report)
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


def cmd_simulate(args) -> int:
    scn = load_scenario(args.config)
    try:
        cfg = mc.SimConfig(n_paths=args.paths, seed=args.seed, w0=args.wealth,
                           strategy=args.strategy, dt=args.dt, chunks=args.chunks)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    if isinstance(scn, stoch.StochScenario):
        sol = stoch.solve(scn)
        quasi, ideal = sol.bps.quasi, sol.bps.ideal
        closed = stoch.value_stoch(scn, min(args.wealth, ideal), sol)
        try:
            est = mc.simulate_stoch(scn, cfg, trace_path=args.trace)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        endow = isinstance(scn, EndowScenario)
        mod = det_endow if endow else det_life
        th, pv = mod.build_value(scn)
        quasi, ideal = th.quasi_ideal, th.ideal
        closed = 1.0 if args.wealth >= ideal else float(pv.value(args.wealth))
        sim = mc.simulate_det_single if scn.mode == "single" else mc.simulate_det_continuous
        est = sim(scn, cfg, trace_path=args.trace)

    exact = mc.is_exact_branch(cfg, quasi, ideal)
    try:
        record = mc.compare_report(est, closed, exact, cfg.strategy)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = record.to_json()
    payload["config"] = args.config
    payload["wealth"] = args.wealth
    write_json(args.out, payload)
    return EXIT_FAIL if record.status == "fail" else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="goalreach",
        description="Maximum-probability insurance purchasing: value curves, "
                    "closed-form verification, Monte Carlo comparison.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="evaluate a value curve to CSV")
    p.add_argument("config")
    p.add_argument("--grid", required=True, metavar="A:B:STEPS",
                   help="wealth grid; B may be the word 'ideal'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("verify", help="run all closed-form checks to JSON")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo comparison record to JSON")
    p.add_argument("config")
    p.add_argument("--wealth", type=float, required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--strategy", default="paper_optimal", choices=mc.STRATEGIES)
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--trace", default=None, metavar="CSV",
                   help="stream per-path events (path_id,event_time,event_kind,wealth)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SchemaError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleScenarioError as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GoalreachError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
