# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the integer kernels in ``_kernels_py``.

Integers stay Python objects (they are unbounded); the gain comes from
typed loop indices, list access without bounds checks and removing the
interpreter dispatch around each big-int operation.
"""


cpdef Py_ssize_t int_valuation(object a, object p) except -1:
    cdef Py_ssize_t v = 0
    cdef Py_ssize_t i
    cdef list powers
    cdef object top
    if a == 0:
        raise ValueError("valuation of zero is infinite")
    if a < 0:
        a = -a
    if a % p:
        return 0
    powers = [p]
    top = p
    while a % top == 0:
        a //= top
        v += (<Py_ssize_t>1) << (len(powers) - 1)
        top = top * top
        powers.append(top)
    for i in range(len(powers) - 2, -1, -1):
        if a % powers[i] == 0:
            a //= powers[i]
            v += (<Py_ssize_t>1) << i
    return v


def bareiss_solve(A, b):
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t i, j, k
    cdef list M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    cdef list rk, ri, row, x
    cdef object prev = 1
    cdef object pivot, f, det, acc
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    break
            else:
                return None
        rk = <list>M[k]
        pivot = rk[k]
        for i in range(k + 1, n):
            ri = <list>M[i]
            f = ri[k]
            if f == 0:
                for j in range(k + 1, n + 1):
                    ri[j] = (pivot * ri[j]) // prev
            else:
                for j in range(k + 1, n + 1):
                    ri[j] = (pivot * ri[j] - f * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    det = M[n - 1][n - 1]
    if det == 0:
        return None
    x = [0] * n
    for i in range(n - 1, -1, -1):
        row = <list>M[i]
        acc = det * row[n]
        for j in range(i + 1, n):
            acc -= row[j] * x[j]
        x[i] = acc // row[i]
    if det < 0:
        det = -det
        x = [-xi for xi in x]
    return x, det


def residual_valuations(list num, object den, list rows, list targets, object p):
    cdef Py_ssize_t n = len(num) - 1
    cdef Py_ssize_t i, j
    cdef Py_ssize_t k = len(rows)
    cdef object c = num[n]
    cdef object s
    cdef list x
    cdef list fitted = []
    cdef list vals = []
    for i in range(k):
        x = <list>rows[i]
        s = c - den * targets[i]
        for j in range(n):
            s += num[j] * x[j]
        if s == 0:
            fitted.append(i)
        else:
            vals.append(int_valuation(s, p))
    return fitted, vals
