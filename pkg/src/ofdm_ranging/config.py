"""Flat key-value experiment configuration.

Format: one ``key = value`` per line, ``#`` starts a comment, blank lines
ignored.  ``alpha_db`` accepts a number or the literal ``-inf``.
``sweep_values`` is a comma-separated list typed according to ``sweep_axis``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

_INT_KEYS = {"N", "L", "M", "seed", "trials", "workers"}
_FLOAT_KEYS = {"alpha_db", "eta", "sigma_band"}
_STR_KEYS = {"modulation", "scheme1", "scheme2", "sweep_axis", "out_prefix"}
_LIST_KEYS = {"sweep_values", "schemes"}

VALID_SCHEMES = ("ofdm-identity", "ofdm-guardband", "pdpss")
SWEEP_AXES = ("alpha_db", "M", "L", "eta", "modulation")

DEFAULTS = {
    "N": 128,
    "L": 32,
    "M": 1,
    "alpha_db": -math.inf,
    "modulation": "QPSK",
    "scheme1": "ofdm-identity",
    "scheme2": "ofdm-identity",
    "eta": 1.0,
    "seed": 0,
    "trials": 10_000,
    "workers": 1,
    "sigma_band": 4.0,
    "out_prefix": "out",
}


def _parse_number(key: str, text: str) -> float:
    if text == "-inf":
        return -math.inf
    try:
        return float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got '{text}'") from None


def parse_config(path: str) -> dict:
    """Parse a config file into a typed dict over the defaults."""
    params = dict(DEFAULTS)
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("file", f"cannot read '{path}': {exc}") from None
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError("file", f"line {lineno} is not 'key = value': '{text}'")
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _INT_KEYS:
            try:
                params[key] = int(value)
            except ValueError:
                raise ConfigError(key, f"expected an integer, got '{value}'") from None
        elif key in _FLOAT_KEYS:
            params[key] = _parse_number(key, value)
        elif key in _STR_KEYS:
            params[key] = value
        elif key in _LIST_KEYS:
            params[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            raise ConfigError(key, "unknown key")
    return params


def typed_sweep_values(axis: str, raw_values: list[str]) -> list:
    if axis == "modulation":
        return list(raw_values)
    if axis in ("M", "L"):
        out = []
        for v in raw_values:
            try:
                out.append(int(v))
            except ValueError:
                raise ConfigError("sweep_values", f"axis {axis} needs integers, got '{v}'") from None
        return out
    return [_parse_number("sweep_values", v) for v in raw_values]


@dataclass
class SweepSpec:
    """A validated sweep: base parameters, the swept axis, and scheme families."""

    base: dict
    axis: str
    values: list
    schemes: list[str]
    trials: int
    out_prefix: str
    workers: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError("sweep_axis", f"must be one of {SWEEP_AXES}")
        if not self.values:
            raise ConfigError("sweep_values", "must be non-empty")
        for scheme in self.schemes:
            if scheme not in VALID_SCHEMES:
                raise ConfigError("schemes", f"unknown scheme '{scheme}'")
        if self.axis == "L":
            for v in self.values:
                if not 0 < v < self.base["N"]:
                    raise ConfigError("sweep_values", f"L={v} not in (0, N={self.base['N']})")
        if self.axis == "M":
            for v in self.values:
                if v < 1:
                    raise ConfigError("sweep_values", f"M={v} must be >= 1")
        if self.axis == "eta":
            for v in self.values:
                if not 0 < v <= 1:
                    raise ConfigError("sweep_values", f"eta={v} not in (0, 1]")


def make_sweep_spec(params: dict) -> SweepSpec:
    axis = params.get("sweep_axis")
    if not axis:
        raise ConfigError("sweep_axis", "required for a sweep")
    raw = params.get("sweep_values")
    if not raw:
        raise ConfigError("sweep_values", "required for a sweep")
    values = typed_sweep_values(axis, raw)
    schemes = params.get("schemes") or [params["scheme1"]]
    return SweepSpec(
        base=params,
        axis=axis,
        values=values,
        schemes=list(schemes),
        trials=params["trials"],
        out_prefix=params["out_prefix"],
        workers=params["workers"],
    )
