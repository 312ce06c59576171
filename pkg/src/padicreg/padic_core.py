"""Exact rationals and the p-adic valuation, absolute value and metric."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .kernels import int_valuation

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")

# Deterministic Miller-Rabin: the first 13 primes as witnesses are exact
# for every n below this bound (Sorenson & Webster, 2015).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BOUND = 3317044064679887385961981


class RationalParseError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``-a/b``, ``a`` or ``a/b`` into a canonical Fraction."""
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise RationalParseError(f"malformed rational: {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise RationalParseError(f"zero denominator: {text!r}")
    value = Fraction(int(num), int(den) if den is not None else 1)
    return -value if sign else value


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or string")
    return Fraction(x)


@total_ordering
class _Infinity:
    """Valuation of zero. Compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("padicreg.INF")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = _Infinity()
Valuation = Union[int, _Infinity]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    if n >= _MR_BOUND:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An int that has passed a deterministic primality check."""

    def __new__(cls, value: int):
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"prime must be an int, got {type(value).__name__}")
        if not is_prime(value):
            raise ValueError(f"{value} is not prime")
        return super().__new__(cls, value)


def next_prime(n: int) -> Prime:
    """Smallest prime strictly greater than ``n``."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return Prime(c)


def vp(x: RationalLike, p: int) -> Valuation:
    """p-adic valuation of ``x``; ``INF`` for zero."""
    p = Prime(p)
    x = as_rational(x)
    if x == 0:
        return INF
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def abs_p(x: RationalLike, p: int) -> Fraction:
    """|x|_p = p**(-vp(x)) as an exact Fraction, 0 for x = 0."""
    v = vp(x, p)
    if v is INF:
        return Fraction(0)
    return Fraction(p) ** -v


def dist_p(x: RationalLike, y: RationalLike, p: int) -> Fraction:
    return abs_p(as_rational(x) - as_rational(y), p)
