"""p-adic polynomial approximation through the affine solver."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import InconsistentDataError, InsufficientDataError, PreconditionError
from .padic_core import Prime, abs_p, as_rational, format_rational, parse_rational
from .solver import Dataset, fit


@dataclass(frozen=True)
class Polynomial:
    """Dense little-endian rational coefficients, trailing zeros trimmed."""

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [as_rational(v) for v in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "Polynomial":
        out = cls((lead,))
        for r in roots:
            out = out * cls((-as_rational(r), 1))
        return out

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Comma-separated little-endian coefficients, e.g. ``-2,3,0,1``."""
        text = text.strip()
        if not text:
            return cls()
        return cls(tuple(parse_rational(t) for t in text.split(",")))

    @property
    def degree(self) -> int | None:
        return len(self.coefficients) - 1 if self.coefficients else None

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = a + (Fraction(0),) * (n - len(a))
        b = b + (Fraction(0),) * (n - len(b))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(tuple(out))

    def to_text(self) -> str:
        return ",".join(format_rational(c) for c in self.coefficients)

    def __str__(self) -> str:
        terms = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            if not mono:
                body = format_rational(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{format_rational(abs(c))}*{mono}"
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms) if terms else "0"


@dataclass(frozen=True)
class EvaluationSet:
    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        xs = tuple(as_rational(x) for x in self.xs)
        if len(set(xs)) != len(xs):
            raise ValueError("evaluation points must be pairwise distinct")
        object.__setattr__(self, "xs", xs)
        if self.ys is not None:
            ys = tuple(as_rational(y) for y in self.ys)
            if len(ys) != len(xs):
                raise ValueError(f"{len(xs)} points but {len(ys)} values")
            object.__setattr__(self, "ys", ys)


@dataclass(frozen=True)
class PolyFit:
    polynomials: tuple[Polynomial, ...]
    loss: Fraction


def vandermonde_features(x, n: int) -> tuple[Fraction, ...]:
    """``(x, x**2, ..., x**n)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    x = as_rational(x)
    out = [x]
    for _ in range(n - 1):
        out.append(out[-1] * x)
    return tuple(out)


def _poly_loss(q: Polynomial, xs, ys, p: int) -> Fraction:
    return sum((abs_p(q(x) - y, p) for x, y in zip(xs, ys)), Fraction(0))


def fit_poly(xs: Sequence, ys: Sequence, n: int, p: int, mode: str = "auto") -> PolyFit:
    """All degree-``<= n`` polynomials minimising ``sum |Q(x_i) - y_i|_p``."""
    p = Prime(p)
    xs = [as_rational(x) for x in xs]
    ys = [as_rational(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError(f"{len(xs)} x-values but {len(ys)} y-values")
    seen: dict[Fraction, tuple[int, Fraction]] = {}
    for i, (x, y) in enumerate(zip(xs, ys)):
        if x in seen and seen[x][1] != y:
            raise InconsistentDataError(seen[x][0], i)
        seen.setdefault(x, (i, y))
    if len(seen) < n + 1:
        raise InsufficientDataError(f"need {n + 1} distinct x-values, got {len(seen)}")
    if n == 0:
        # Constant fits: the optimum passes through at least one point.
        cands = {Polynomial((y,)) for y in ys}
        losses = {q: _poly_loss(q, xs, ys, p) for q in cands}
        best = min(losses.values())
        polys = sorted((q for q, v in losses.items() if v == best), key=lambda q: q.coefficients)
        return PolyFit(tuple(polys), best)
    data = Dataset.from_rows((vandermonde_features(x, n), y) for x, y in zip(xs, ys))
    report = fit(data, p, mode)
    polys = tuple(Polynomial((m.intercept,) + m.weights) for m in report.optimal_models)
    return PolyFit(polys, report.loss)


def interpolate(S: EvaluationSet) -> Polynomial:
    """Unique polynomial of degree ``< len(S.xs)`` through the points of ``S``."""
    if S.ys is None:
        raise ValueError("interpolation needs values")
    m = len(S.xs)
    if m == 0:
        return Polynomial()
    A = [[x**j for j in range(m)] for x in S.xs]
    sol = linalg.solve(A, list(S.ys))
    if sol is None:  # pragma: no cover - distinct nodes give a nonsingular system
        raise ValueError("singular Vandermonde system")
    return Polynomial(tuple(sol))


def residual_roots_in_S(P: Polynomial, Q: Polynomial, S: EvaluationSet) -> set[Fraction]:
    """Points of ``S`` where ``P`` and ``Q`` agree."""
    R = P - Q
    return {x for x in S.xs if R(x) == 0}


def is_widespread(S: EvaluationSet, p: int) -> bool:
    """True iff every pair of points in ``S`` is at the same p-adic distance."""
    p = Prime(p)
    if len(S.xs) < 2:
        raise ValueError("need at least two points")
    dists = {abs_p(a - b, p) for a, b in itertools.combinations(S.xs, 2)}
    return len(dists) == 1


def leave_one_out_approximants(S: EvaluationSet, p: int) -> list[tuple[Polynomial, Polynomial, Fraction]]:
    """The ``n + 1`` equally good degree-``< n`` approximants of a widespread interpolant.

    ``R_j`` vanishes on every point of ``S`` except ``x_j`` and shares the
    leading coefficient of the interpolant ``P``; ``Q_j = P - R_j``.
    """
    p = Prime(p)
    if S.ys is None:
        raise ValueError("need values on S")
    n = len(S.xs) - 1
    if n < 1:
        raise PreconditionError("need at least two points")
    P = interpolate(S)
    if P.degree != n:
        raise PreconditionError(f"interpolant has degree {P.degree}, expected exactly {n}")
    if not is_widespread(S, p):
        raise PreconditionError("evaluation set is not widespread")
    out = []
    for j in range(n + 1):
        R = Polynomial.from_roots([x for i, x in enumerate(S.xs) if i != j], P.leading)
        Q = P - R
        out.append((Q, R, _poly_loss(Q, S.xs, S.ys, p)))
    return out
