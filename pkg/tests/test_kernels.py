from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import naive_vp

small_primes = st.sampled_from([2, 3, 5, 7, 409])
# the backend fixture is a module object, safe to share across examples
shared = settings(suppress_health_check=[HealthCheck.function_scoped_fixture])


@shared
@given(st.integers(-(10**60), 10**60).filter(bool), small_primes)
def test_int_valuation(backend, a, p):
    assert backend.int_valuation(a, p) == naive_vp(a, p)


@pytest.mark.parametrize("v", [0, 1, 2, 3, 7, 8, 63, 64, 65, 1000, 4097])
@pytest.mark.parametrize("p", [2, 3, 409])
def test_int_valuation_exact_powers(backend, v, p):
    assert backend.int_valuation(p**v * (p + 1), p) == v
    assert backend.int_valuation(-(p**v), p) == v


def test_int_valuation_zero(backend):
    with pytest.raises(ValueError):
        backend.int_valuation(0, 3)


int_matrices = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n),
        st.lists(st.integers(-30, 30), min_size=n, max_size=n),
    )
)


@settings(max_examples=300, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(int_matrices)
def test_bareiss_solves_or_detects_singular(backend, system):
    A, b = system
    out = backend.bareiss_solve(A, b)
    M = sympy.Matrix(A)
    if M.det() == 0:
        assert out is None
        return
    num, den = out
    assert den > 0
    x = [Fraction(v, den) for v in num]
    for row, bi in zip(A, b):
        assert sum(a * xi for a, xi in zip(row, x)) == bi


def test_bareiss_needs_pivoting(backend):
    A = [[0, 1], [1, 0]]
    num, den = backend.bareiss_solve(A, [3, 5])
    assert [Fraction(v, den) for v in num] == [5, 3]


def test_bareiss_big_entries(backend):
    big = 409**11
    A = [[big, 1], [1, big]]
    num, den = backend.bareiss_solve(A, [big + 1, big + 1])
    assert [Fraction(v, den) for v in num] == [1, 1]


def test_residual_valuations(backend):
    # model y = 2x + 1/3 written as num/den = (6, 1)/3 over integer data
    rows = [[0], [1], [3], [9]]
    targets = [0, 3, 7, 1]
    fitted, vals = backend.residual_valuations([6, 1], 3, rows, targets, 3)
    # scaled residuals: 1, 6+1-9=-2, 18+1-21=-2, 54+1-3=52
    assert fitted == []
    assert vals == [0, 0, 0, 0]
    fitted, vals = backend.residual_valuations([2, 0], 1, rows, [0, 2, 6, 17], 2)
    assert fitted == [0, 1, 2]
    assert vals == [0]


def test_backends_agree_on_random_scans():
    from padicreg import _kernels_py

    try:
        from padicreg import _kernels as ck
    except ImportError:
        pytest.skip("extension not built")
    import random

    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 3)
        rows = [[rng.randint(-10**20, 10**20) for _ in range(n)] for _ in range(8)]
        targets = [rng.randint(-10**20, 10**20) for _ in range(8)]
        num = [rng.randint(-50, 50) for _ in range(n + 1)]
        den = rng.randint(1, 50)
        p = rng.choice([2, 3, 5, 409])
        assert ck.residual_valuations(num, den, rows, targets, p) == _kernels_py.residual_valuations(
            num, den, rows, targets, p
        )
        A = [r + [1] for r in rows[: n + 1]]
        assert ck.bareiss_solve(A, targets[: n + 1]) == _kernels_py.bareiss_solve(A, targets[: n + 1])
