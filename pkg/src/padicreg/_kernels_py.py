"""Pure-Python reference versions of the hot integer kernels.

Every function here has an identically named, identically behaving
counterpart in ``_kernels.pyx``.
"""


def int_valuation(a, p):
    """Exponent of ``p`` in the nonzero integer ``a``."""
    if a == 0:
        raise ValueError("valuation of zero is infinite")
    if a < 0:
        a = -a
    # Divide by p, p**2, p**4, ... while possible, then peel back down, so
    # huge valuations (p**10**6) cost O(log v) big divisions.
    v = 0
    powers = [p]
    while a % powers[-1] == 0:
        a //= powers[-1]
        v += 1 << (len(powers) - 1)
        powers.append(powers[-1] * powers[-1])
    for i in range(len(powers) - 2, -1, -1):
        if a % powers[i] == 0:
            a //= powers[i]
            v += 1 << i
    return v


def bareiss_solve(A, b):
    """Solve the square integer system ``A x = b`` without fractions.

    Returns ``(num, den)`` with ``den > 0`` and ``x[i] = num[i] / den``
    (not reduced), or ``None`` when ``A`` is singular.
    """
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    break
            else:
                return None
        pivot = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            f = ri[k]
            for j in range(k + 1, n + 1):
                ri[j] = (pivot * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    det = M[n - 1][n - 1]
    if det == 0:
        return None
    # det * x is integral by Cramer's rule, so every division below is exact.
    x = [0] * n
    for i in range(n - 1, -1, -1):
        row = M[i]
        acc = det * row[n]
        for j in range(i + 1, n):
            acc -= row[j] * x[j]
        x[i] = acc // row[i]
    if det < 0:
        det = -det
        x = [-xi for xi in x]
    return x, det


def residual_valuations(num, den, rows, targets, p):
    """Scan a candidate hyperplane ``num / den`` over an integer dataset.

    ``rows[i]`` is an integer feature vector, ``targets[i]`` its integer
    target, ``num`` has one more entry than each row (the intercept).
    Returns ``(fitted, vals)`` where ``fitted`` lists the indices whose
    scaled residual ``num . (X_i, 1) - den * y_i`` is zero and ``vals``
    holds ``vp`` of every nonzero scaled residual, in row order.
    """
    n = len(num) - 1
    c = num[n]
    fitted = []
    vals = []
    for i in range(len(rows)):
        x = rows[i]
        s = c - den * targets[i]
        for j in range(n):
            s += num[j] * x[j]
        if s == 0:
            fitted.append(i)
        else:
            vals.append(int_valuation(s, p))
    return fitted, vals
