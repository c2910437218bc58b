"""Scenario files and deterministic text output.

A scenario file is a small JSON document selecting one of six modes and
supplying per-year rates and currency amounts:

    {"mode": "det-single", "r": 0.04, "lambda": 0.02, "theta": 0.1,
     "m": 5, "n": 10, "f": 100, "D": 20}

Modes: det-single, det-cont, endow-single, endow-cont, stoch1, stoch2.
Unknown keys are rejected.  The coverage length "n" accepts the string
"inf" where an infinite horizon is meaningful (det modes and, as a
flagged limit case, the stochastic ones).

All floats in emitted CSV/JSON are printed with 17 significant digits so
values round-trip exactly; data files carry no timestamps (run metadata
goes in a sidecar).
"""

from __future__ import annotations

import json
import math

from .actuarial import CoverageWindow, ForceParams
from .det_endow import EndowScenario
from .det_life import DetLifeScenario
from .errors import SchemaError
from .stoch import MODEL_I, MODEL_II, StochScenario

DET_MODES = ("det-single", "det-cont", "endow-single", "endow-cont")
STOCH_MODES = ("stoch1", "stoch2")
MODES = DET_MODES + STOCH_MODES

_DET_REQUIRED = ("r", "lambda", "m", "n", "f")
_DET_OPTIONAL_SINGLE = ("theta", "D", "premium_override")
_DET_OPTIONAL_CONT = ("theta", "premium_override")
_STOCH_REQUIRED = ("r", "lambda", "mu", "sigma", "a", "l", "c", "H", "f", "n")


def _number(doc, key, allow_inf=False):
    v = doc[key]
    if allow_inf and isinstance(v, str) and v.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"field {key!r} must be a number, got {v!r}")
    return float(v)


def _check_keys(doc, required, optional):
    missing = [k for k in required if k not in doc]
    if missing:
        raise SchemaError(f"missing required fields: {missing}")
    unknown = [k for k in doc if k not in required and k not in optional and k != "mode"]
    if unknown:
        raise SchemaError(f"unknown fields: {unknown}")


def parse_scenario(doc: dict):
    """Validate a scenario document and build the scenario object."""
    if not isinstance(doc, dict):
        raise SchemaError("scenario file must hold a JSON object")
    mode = doc.get("mode")
    if mode not in MODES:
        raise SchemaError(f"mode must be one of {MODES}, got {mode!r}")

    if mode in DET_MODES:
        single = mode.endswith("single")
        optional = _DET_OPTIONAL_SINGLE if single else _DET_OPTIONAL_CONT
        _check_keys(doc, _DET_REQUIRED, optional)
        allow_inf = mode.startswith("det")
        fp = ForceParams(_number(doc, "r"), _number(doc, "lambda"),
                         _number(doc, "theta") if "theta" in doc else 0.0)
        cw = CoverageWindow(_number(doc, "m"), _number(doc, "n", allow_inf=allow_inf))
        kwargs = dict(
            fp=fp, cw=cw, f=_number(doc, "f"),
            mode="single" if single else "continuous",
        )
        if "D" in doc:
            kwargs["d"] = _number(doc, "D")
        if "premium_override" in doc:
            kwargs["premium_override"] = _number(doc, "premium_override")
        cls = DetLifeScenario if mode.startswith("det") else EndowScenario
        try:
            return cls(**kwargs)
        except (ValueError, TypeError) as exc:
            raise SchemaError(str(exc)) from exc

    _check_keys(doc, _STOCH_REQUIRED, ())
    try:
        return StochScenario(
            r=_number(doc, "r"), lam=_number(doc, "lambda"),
            mu=_number(doc, "mu"), sigma=_number(doc, "sigma"),
            a=_number(doc, "a"), l=_number(doc, "l"), c=_number(doc, "c"),
            premium_rate=_number(doc, "H"), f=_number(doc, "f"),
            n=_number(doc, "n", allow_inf=True),
            model=MODEL_I if mode == "stoch1" else MODEL_II,
        )
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from exc


def load_scenario(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# Deterministic text rendering
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def render_json(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits, keys in given order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {render_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    raise TypeError(f"cannot render {type(obj)!r}")


def write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        fh.write(render_json(obj))
        fh.write("\n")


def write_csv(path: str, header: list, rows: list) -> None:
    """Byte-stable CSV: LF line endings, 17-significant-digit floats."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [format(v, ".17g") if isinstance(v, float) else str(v) for v in row]
            fh.write(",".join(cells) + "\n")
