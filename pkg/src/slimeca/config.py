"""Flat ``key = value`` configuration documents.

Example::

    # P2, single input y, food at p
    max_steps = 1200
    wave_enabled = true
    reward_wave = 0.1
    food = p@100; 12,30@5

``food`` is a ``;``-separated list of ``target[@strength]`` items where the
target is an output region label (``p``/``q``) or a ``row,col`` cell; a missing
strength means ``source_strength``.
"""

import math
from dataclasses import fields
from importlib import resources

from .errors import ConfigParseError, ConfigurationError
from .harness import FoodSpec, SimConfig
from .reinforcement import ReinforcementParams

_TOP = {f.name for f in fields(SimConfig)} - {"reinforcement", "food_placement"}
_REINF = {f.name for f in fields(ReinforcementParams)}

# serialization order
KEYS = (
    "width", "height", "initial_mass", "source_strength", "transfer_fraction",
    "reward_smell", "penalty_smell", "reward_wave", "penalty_wave",
    "pv_cap", "pv_rest_floor", "mass_threshold", "smell_threshold",
    "max_steps", "trials", "master_seed", "wave_enabled", "food",
)

_INT = {"width", "height", "max_steps", "trials", "master_seed"}
_BOOL = {"wave_enabled"}

# key -> (low, high, low_open, high_open)
_RANGES = {
    "width": (1, math.inf, False, True),
    "height": (1, math.inf, False, True),
    "initial_mass": (0.0, math.inf, False, True),
    "source_strength": (0.0, math.inf, False, True),
    "transfer_fraction": (0.0, 1.0, True, False),
    "reward_smell": (0.0, 1.0, True, True),
    "penalty_smell": (0.0, 1.0, True, True),
    "reward_wave": (0.0, 1.0, True, True),
    "penalty_wave": (0.0, 1.0, True, True),
    "pv_cap": (0.125, 1.0, False, False),
    "pv_rest_floor": (0.0, 0.875, False, False),
    "mass_threshold": (0.0, math.inf, False, True),
    "smell_threshold": (0.0, math.inf, False, True),
    "max_steps": (1, math.inf, False, True),
    "trials": (1, math.inf, False, True),
    "master_seed": (0, 2**64 - 1, False, False),
}


def _bound_text(lo, hi, lo_open, hi_open):
    return f"{'(' if lo_open else '['}{lo}, {hi}{')' if hi_open else ']'}"


def _check_range(key, value, line):
    lo, hi, lo_open, hi_open = _RANGES[key]
    ok_lo = value > lo if lo_open else value >= lo
    ok_hi = value < hi if hi_open else value <= hi
    if not (ok_lo and ok_hi):
        raise ConfigParseError(
            f"{key} = {value} out of range {_bound_text(lo, hi, lo_open, hi_open)}", line)


def parse_food(text, line=None):
    items = []
    for raw in text.split(";"):
        raw = raw.strip()
        if not raw:
            continue
        target, _, strength = raw.partition("@")
        target = target.strip()
        s = None
        if strength.strip():
            try:
                s = float(strength)
            except ValueError:
                raise ConfigParseError(f"bad food strength {strength.strip()!r}", line) from None
            if not math.isfinite(s) or s < 0.0:
                raise ConfigParseError(f"food strength {s} must be finite and >= 0", line)
        if target in ("p", "q"):
            items.append(FoodSpec(target, s))
            continue
        try:
            r, c = (int(v) for v in target.split(","))
        except ValueError:
            raise ConfigParseError(f"bad food target {target!r}", line) from None
        items.append(FoodSpec((r, c), s))
    return tuple(items)


def _parse_value(key, raw, line):
    if key == "food":
        return parse_food(raw, line)
    if key in _BOOL:
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ConfigParseError(f"{key} expects a boolean, got {raw!r}", line)
    try:
        value = int(raw) if key in _INT else float(raw)
    except ValueError:
        kind = "an integer" if key in _INT else "a number"
        raise ConfigParseError(f"{key} expects {kind}, got {raw!r}", line) from None
    if key not in _INT and not math.isfinite(value):
        raise ConfigParseError(f"{key} must be finite", line)
    _check_range(key, value, line)
    return value


def parse_config(text, base=None):
    """Parse a config document; missing keys come from ``base`` (defaults)."""
    values = {}
    lines = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigParseError(f"expected 'key = value', got {body!r}", n)
        key, _, val = body.partition("=")
        key, val = key.strip(), val.strip()
        if key not in KEYS:
            raise ConfigParseError(f"unknown key {key!r}", n)
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r} (first on line {lines[key]})", n)
        values[key] = _parse_value(key, val, n)
        lines[key] = n

    if "pv_cap" in values and "pv_rest_floor" not in values:
        values["pv_rest_floor"] = 1.0 - values["pv_cap"]
    elif "pv_rest_floor" in values and "pv_cap" not in values:
        values["pv_cap"] = 1.0 - values["pv_rest_floor"]

    base = base or SimConfig()
    top = {k: v for k, v in values.items() if k in _TOP}
    reinf = {k: v for k, v in values.items() if k in _REINF}
    if "food" in values:
        top["food_placement"] = values["food"]
    try:
        return base.with_params(**top, **reinf)
    except ConfigurationError as exc:
        line = max((lines[k] for k in values if k in lines), default=None)
        raise ConfigParseError(str(exc), line) from None


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_food(food):
    parts = []
    for f in food:
        t = f.target if isinstance(f.target, str) else f"{f.target[0]},{f.target[1]}"
        parts.append(t if f.strength is None else f"{t}@{f.strength!r}")
    return "; ".join(parts)


def config_items(config):
    """``(key, text)`` pairs in serialization order."""
    r = config.reinforcement
    out = []
    for key in KEYS:
        if key == "food":
            out.append((key, format_food(config.food_placement)))
        elif key in _REINF:
            out.append((key, _format(getattr(r, key))))
        else:
            out.append((key, _format(getattr(config, key))))
    return out


def config_dict(config):
    """JSON-friendly echo of every parameter."""
    r = config.reinforcement
    out = {}
    for key in KEYS:
        if key == "food":
            out[key] = format_food(config.food_placement)
        elif key in _REINF:
            out[key] = getattr(r, key)
        else:
            out[key] = getattr(config, key)
    return out


def serialize_config(config):
    return "".join(f"{k} = {v}".rstrip() + "\n" for k, v in config_items(config))


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base=base)


def bundled_config_text(name):
    return resources.files("slimeca").joinpath(f"data/configs/{name}.cfg").read_text("utf-8")


def bundled_config(name):
    """Load a shipped config such as ``"p2_y"``."""
    try:
        text = bundled_config_text(name)
    except FileNotFoundError:
        raise ConfigurationError(f"no bundled config named {name!r}") from None
    return parse_config(text)


# input pair -> shipped scenario config for each bundled gate
TUNED_SCENARIOS = {
    "P2": {(False, True): "p2_y", (True, False): "p2_x", (True, True): "p2_xy"},
    "P1": {(False, True): "p1_y", (True, False): "p1_x", (True, True): "p1_xy"},
}


def tuned_overrides(gate):
    """Per-input configs reproducing a bundled gate's truth table."""
    if gate not in TUNED_SCENARIOS:
        raise ConfigurationError(f"no tuned scenarios for gate {gate!r}")
    return {inputs: bundled_config(name) for inputs, name in TUNED_SCENARIOS[gate].items()}
