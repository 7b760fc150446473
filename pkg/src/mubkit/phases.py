"""Integer phase bookkeeping and half-integer parsing.

Phases that appear throughout the package are powers of q = exp(2 pi i / d)
with half-integer exponents, i.e. powers of the 2d-th root exp(i pi / d).
They are carried as integer exponents and only turned into floats at the
last moment.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InvalidHalfInteger


def half_root(e: int, d: int) -> complex:
    """exp(i pi e / d), with e reduced mod 2d before evaluation."""
    e %= 2 * d
    if e == 0:
        return 1.0 + 0.0j
    if e == d:
        return -1.0 + 0.0j
    return cmath.exp(1j * math.pi * e / d)


def half_roots(e: np.ndarray, d: int) -> np.ndarray:
    table = np.array([half_root(k, d) for k in range(2 * d)])
    return table[np.mod(np.asarray(e, dtype=np.int64), 2 * d)]


def q_power(x, d: int) -> complex:
    """q**x for q = exp(2 pi i / d) and any real exponent x.

    Exponents that are exact half-integers (ints, Fractions) go through the
    integer path; everything else is evaluated directly.
    """
    if isinstance(x, Rational):
        two_x = 2 * Fraction(x)
        if two_x.denominator == 1:
            return half_root(int(two_x), d)
    return cmath.exp(2j * math.pi * float(x) / d)


def twice(x) -> int:
    """Return 2x as an int, raising if x is not a half-integer."""
    if isinstance(x, Rational):
        two_x = 2 * Fraction(x)
        if two_x.denominator != 1:
            raise InvalidHalfInteger(f"{x} is not a half-integer")
        return int(two_x)
    y = 2 * float(x)
    n = round(y)
    if abs(y - n) > 1e-9:
        raise InvalidHalfInteger(f"{x} is not a half-integer")
    return int(n)


def as_half(two_x: int) -> Fraction:
    return Fraction(two_x, 2)
