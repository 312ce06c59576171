from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicreg.padic_core import (
    INF,
    Prime,
    RationalParseError,
    abs_p,
    dist_p,
    format_rational,
    is_prime,
    next_prime,
    parse_rational,
    vp,
)

from oracles import naive_vp

primes = st.sampled_from([2, 3, 5, 7, 409, 1009])
bigints = st.integers(min_value=-(10**40), max_value=10**40)
rationals = st.builds(
    Fraction, bigints, st.integers(min_value=1, max_value=10**30)
)
nonzero = rationals.filter(lambda x: x != 0)


@pytest.mark.parametrize(
    "x, p, expected",
    [(9, 3, 2), (0, 5, INF), (27, 3, 3), (Fraction(1, 59049), 3, -10), (5, 3, 0)],
)
def test_vp_examples(x, p, expected):
    assert vp(x, p) == expected


@pytest.mark.parametrize(
    "x, p, expected",
    [(9, 3, Fraction(1, 9)), (5, 3, Fraction(1)), (Fraction(1, 59049), 3, Fraction(59049)), (0, 7, 0)],
)
def test_abs_p_examples(x, p, expected):
    assert abs_p(x, p) == expected


def test_dist_examples():
    assert dist_p(1, 28, 3) == Fraction(1, 27)
    assert dist_p(1, 10, 3) == Fraction(1, 9)
    assert dist_p(1, 4, 3) == Fraction(1, 3)
    assert dist_p(Fraction(3, 2), 1, 2) == 2
    assert dist_p(Fraction(3, 2), 2, 2) == 2
    assert dist_p(1, 2, 2) == 1
    # 2/3**10 and 1/3**10 are far apart 3-adically
    assert dist_p(Fraction(2, 3**10), Fraction(1, 3**10), 3) == 3**10


def test_huge_valuation_is_exact():
    x = 3**1_000_000 * 7
    assert vp(x, 3) == 1_000_000
    assert abs_p(Fraction(1, 3**1_000_000), 3) == 3**1_000_000


def test_infinity_ordering():
    assert INF > 10**100
    assert not INF < 5
    assert min(INF, 3) == 3
    assert max(-4, INF) is INF
    assert str(INF) == "inf"


@given(nonzero, primes)
def test_vp_matches_repeated_division(x, p):
    assert vp(x, p) == naive_vp(x, p)


@given(nonzero, nonzero, primes)
def test_vp_additive(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)


@given(rationals, rationals, primes)
def test_multiplicative(x, y, p):
    assert abs_p(x * y, p) == abs_p(x, p) * abs_p(y, p)


@given(rationals, rationals, primes)
def test_strong_triangle(x, y, p):
    s = abs_p(x + y, p)
    ax, ay = abs_p(x, p), abs_p(y, p)
    assert s <= max(ax, ay)
    if ax != ay:
        assert s == max(ax, ay)


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), primes)
def test_strong_triangle_equal_branch(a, b, c, p):
    # Same absolute value on both sides: the sum may shrink but never grow.
    x = Fraction(a, b) * p**3
    y = Fraction(c, 1) * p**3
    if x and y and abs_p(x, p) == abs_p(y, p):
        assert abs_p(x + y, p) <= abs_p(x, p)


@given(rationals, primes)
def test_abs_zero_iff_zero(x, p):
    assert (abs_p(x, p) == 0) == (x == 0)


@given(rationals, rationals, rationals, primes)
def test_ultrametric_distance(x, y, z, p):
    assert dist_p(x, y, p) == dist_p(y, x, p)
    assert (dist_p(x, y, p) == 0) == (x == y)
    assert dist_p(x, z, p) <= max(dist_p(x, y, p), dist_p(y, z, p))


@given(rationals, rationals)
def test_rational_round_trip(a, c):
    assert (a + c) - c == a
    assert parse_rational(format_rational(a)) == a


@pytest.mark.parametrize(
    "text, expected",
    [("-3/4", Fraction(-3, 4)), ("27", Fraction(27)), ("0", Fraction(0)), ("4/6", Fraction(2, 3)),
     ("-0", Fraction(0)), (" 5/10 ", Fraction(1, 2))],
)
def test_parse_rational(text, expected):
    value = parse_rational(text)
    assert value == expected
    assert value.denominator > 0


@pytest.mark.parametrize("text", ["1/0", "", "1.5", "+3", "3/-4", "a", "1/2/3", "--1"])
def test_parse_rational_rejects(text):
    with pytest.raises(RationalParseError):
        parse_rational(text)


def test_format_canonical():
    assert format_rational(Fraction(0)) == "0"
    assert format_rational(Fraction(-6, 8)) == "-3/4"


@pytest.mark.parametrize("n", [2, 3, 5, 409, 419, 1009, 2**61 - 1, 3317044064679887385961813])
def test_primes_accepted(n):
    assert is_prime(n)
    assert Prime(n) == n


@pytest.mark.parametrize("n", [0, 1, 4, 9, 403, 3215031751, 2**61 + 1, 341550071728321, 3825123056546413051, 318665857834031151167461])
def test_composites_rejected(n):
    assert not is_prime(n)
    with pytest.raises(ValueError):
        Prime(n)


def test_primality_against_sieve():
    N = 20000
    sieve = [True] * N
    sieve[0] = sieve[1] = False
    for i in range(2, int(N**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    assert [n for n in range(N) if is_prime(n)] == [n for n in range(N) if sieve[n]]


def test_primality_bound_is_explicit():
    with pytest.raises(ValueError, match="deterministic"):
        is_prime(2**89 - 1)


def test_prime_type_checks():
    with pytest.raises(TypeError):
        Prime(3.0)
    with pytest.raises(TypeError):
        Prime(True)


def test_next_prime():
    assert next_prime(402) == 409
    assert next_prime(2) == 3
    assert next_prime(1) == 2
    assert next_prime(0) == 2


def test_floats_rejected():
    with pytest.raises(TypeError):
        vp(0.5, 2)
