"""Unit conversions. Internally everything is rad/s and seconds."""
from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi


def khz_to_rad_s(f_khz: float) -> float:
    return TWO_PI * 1e3 * f_khz


def rad_s_to_khz(w: float) -> float:
    return w / (TWO_PI * 1e3)


def ns_to_s(t_ns: float) -> float:
    return t_ns * 1e-9


def us_to_s(t_us: float) -> float:
    return t_us * 1e-6
