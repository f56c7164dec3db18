"""Lossless number formatting for reports: ``"a/b"`` in rational mode, 17 digits in float mode."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Literal

from .economy import parse_number
from .errors import ConfigError

Mode = Literal["rational", "float"]


def check_mode(mode: str) -> Mode:
    if mode not in ("rational", "float"):
        raise ConfigError(f"mode must be 'rational' or 'float', got {mode!r}")
    return mode  # type: ignore[return-value]


def fmt(x, mode: Mode) -> str:
    if mode == "rational":
        if isinstance(x, float):
            raise ValueError("float value in a rational-mode report")
        return str(Fraction(x))
    return format(float(x), ".17g")


def parse(s: str, mode: Mode):
    if not isinstance(s, str):
        raise ConfigError(f"report numbers are strings, got {s!r}")
    if mode == "rational":
        return parse_number(s)
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse decimal {s!r}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"
