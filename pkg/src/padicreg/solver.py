"""Multivariate p-adic linear regression.

An optimal affine model for the loss ``sum |F(X_i) - y_i|_p`` always
passes through at least ``n + 1`` data points, so the exact solver only
has to look at hyperplanes spanned by ``(n + 1)``-subsets of the rows.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    DegenerateDataError,
    InconsistentDataError,
    InsufficientDataError,
    PreconditionError,
)
from .kernels import bareiss_solve, int_valuation, residual_valuations
from .padic_core import Prime, abs_p, as_rational, format_rational

MODES = ("auto", "exact", "large_prime")

Row = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class Dataset:
    """``k`` observations ``(X_i, y_i)`` with ``X_i`` of length ``dim``."""

    rows: tuple[Row, ...]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for i, (x, _) in enumerate(self.rows):
            if len(x) != self.dim:
                raise ValueError(f"row {i} has {len(x)} features, expected {self.dim}")

    def consistency_violation(self) -> tuple[int, int] | None:
        """First pair of rows with equal features and different targets."""
        seen: dict[tuple[Fraction, ...], tuple[int, Fraction]] = {}
        for i, (x, y) in enumerate(self.rows):
            if x in seen and seen[x][1] != y:
                return seen[x][0], i
            seen.setdefault(x, (i, y))
        return None

    def check_consistent(self) -> None:
        bad = self.consistency_violation()
        if bad is not None:
            raise InconsistentDataError(*bad)

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[Sequence, object]], dim: int | None = None) -> "Dataset":
        conv = tuple(
            (tuple(as_rational(v) for v in x), as_rational(y)) for x, y in rows
        )
        if dim is None:
            if not conv:
                raise ValueError("cannot infer dimension of an empty dataset")
            dim = len(conv[0][0])
        return cls(conv, dim)

    @classmethod
    def from_points(cls, points: Iterable[tuple[object, object]]) -> "Dataset":
        """One-feature dataset from ``(x, y)`` pairs."""
        return cls.from_rows(((x,), y) for x, y in points)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def features(self) -> list[tuple[Fraction, ...]]:
        return [x for x, _ in self.rows]

    @property
    def targets(self) -> list[Fraction]:
        return [y for _, y in self.rows]


@dataclass(frozen=True)
class AffineModel:
    """``y = weights . X + intercept``."""

    weights: tuple[Fraction, ...]
    intercept: Fraction

    @classmethod
    def from_vector(cls, v: Sequence) -> "AffineModel":
        v = [as_rational(c) for c in v]
        return cls(tuple(v[:-1]), v[-1])

    @classmethod
    def make(cls, weights: Sequence, intercept=0) -> "AffineModel":
        return cls(tuple(as_rational(w) for w in weights), as_rational(intercept))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return self.weights + (self.intercept,)

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        return sum((w * xi for w, xi in zip(self.weights, x)), self.intercept)

    def key(self) -> tuple[int, ...]:
        """Primitive integer form of the hyperplane ``weights . X + intercept - y = 0``."""
        return linalg.primitive(self.vector + (Fraction(-1),))

    def __str__(self) -> str:
        return "y = " + format_affine(self.weights, self.intercept)


def format_affine(weights: Sequence[Fraction], intercept: Fraction, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = ["x"] if len(weights) == 1 else [f"x{j + 1}" for j in range(len(weights))]
    parts = []
    for w, name in zip(weights, names):
        if w == 0:
            continue
        coef = "" if w == 1 else "-" if w == -1 else format_rational(w) + "*"
        parts.append(f"{coef}{name}")
    if intercept != 0 or not parts:
        parts.append(format_rational(intercept))
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


@dataclass(frozen=True)
class FitReport:
    optimal_models: tuple[AffineModel, ...]
    loss: Fraction
    fit_counts: dict[AffineModel, int]
    candidates_examined: int
    mode: str
    prime: int
    singular_skipped: int = 0
    dim: int = field(default=0)

    def __post_init__(self):
        if not self.optimal_models:
            raise ValueError("a fit report needs at least one optimal model")


@dataclass(frozen=True)
class DescentStep:
    direction: tuple[Fraction, ...]
    alphas: dict[int, Fraction]
    chosen_index: int
    step_size: Fraction


def _check_dim(model: AffineModel, data: Dataset) -> None:
    if model.dim != data.dim:
        raise ValueError(f"model has dimension {model.dim}, dataset has {data.dim}")


def residuals(model: AffineModel, data: Dataset) -> list[Fraction]:
    _check_dim(model, data)
    return [model(x) - y for x, y in data.rows]


def evaluate_loss(model: AffineModel, data: Dataset, p: int) -> Fraction:
    p = Prime(p)
    return sum((abs_p(r, p) for r in residuals(model, data)), Fraction(0))


def fitted_rows(model: AffineModel, data: Dataset) -> list[int]:
    return [i for i, r in enumerate(residuals(model, data)) if r == 0]


def check_nondegenerate(data: Dataset) -> tuple[bool, tuple[int, ...] | None]:
    """Whether the rows ``(X_i, 1)`` span Q^(n+1); else a vanishing affine function.

    The certificate ``phi`` satisfies ``phi . (X_i, 1) = 0`` for every row.
    """
    M = [list(x) + [Fraction(1)] for x in data.features]
    basis = linalg.nullspace(M, data.dim + 1)
    if not basis:
        return True, None
    return False, linalg.primitive(basis[0])


def _require_solvable(data: Dataset) -> None:
    if data.k < data.dim + 1:
        raise InsufficientDataError(f"need at least {data.dim + 1} rows, got {data.k}")
    ok, cert = check_nondegenerate(data)
    if not ok:
        raise DegenerateDataError(cert)


def hyperplane_through(rows: Sequence[tuple[Sequence, object]]) -> AffineModel | None:
    """The unique affine model through ``n + 1`` rows, or None if not unique."""
    if not rows:
        raise ValueError("need at least one row")
    n = len(rows[0][0])
    if len(rows) != n + 1:
        raise ValueError(f"need exactly {n + 1} rows for dimension {n}, got {len(rows)}")
    A = [[as_rational(v) for v in x] + [Fraction(1)] for x, _ in rows]
    b = [as_rational(y) for _, y in rows]
    sol = linalg.solve(A, b)
    if sol is None:
        return None
    return AffineModel.from_vector(sol)


# --- candidate enumeration ---------------------------------------------------


@dataclass
class _Candidate:
    num: list[int]
    den: int
    fitted: list[int]
    vals: list[int]


class _IntegerData:
    """The dataset scaled by the lcm of all its denominators."""

    def __init__(self, data: Dataset):
        dens = [v.denominator for x, y in data.rows for v in (*x, y)]
        self.scale = math.lcm(*dens)
        self.rows = [[int(v * self.scale) for v in x] for x in data.features]
        self.targets = [int(y * self.scale) for y in data.targets]
        self.dim = data.dim

    def model(self, num: list[int], den: int) -> AffineModel:
        w = tuple(Fraction(v, den) for v in num[:-1])
        return AffineModel(w, Fraction(num[-1], den * self.scale))


def _reduce(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    g = den
    for v in num:
        g = math.gcd(g, v)
    return tuple(v // g for v in num), den // g


def _scan_subsets(idata: _IntegerData, subsets: Iterable[tuple[int, ...]], p: int):
    found: dict[tuple[tuple[int, ...], int], None] = {}
    singular = 0
    examined = 0
    for subset in subsets:
        examined += 1
        A = [idata.rows[i] + [1] for i in subset]
        b = [idata.targets[i] for i in subset]
        sol = bareiss_solve(A, b)
        if sol is None:
            singular += 1
            continue
        found.setdefault(_reduce(*sol), None)
    out = {}
    for num, den in found:
        fitted, vals = residual_valuations(list(num), den, idata.rows, idata.targets, p)
        out[(num, den)] = (fitted, vals)
    return out, examined, singular


def _chunk_worker(args):
    idata, k, r, start, stop, p = args
    subsets = itertools.islice(itertools.combinations(range(k), r), start, stop)
    return _scan_subsets(idata, subsets, p)


def _enumerate(data: Dataset, p: int, workers: int = 1):
    idata = _IntegerData(data)
    k, r = data.k, data.dim + 1
    if workers <= 1:
        results = [_scan_subsets(idata, itertools.combinations(range(k), r), p)]
    else:
        total = math.comb(k, r)
        step = -(-total // workers)
        jobs = [(idata, k, r, s, min(s + step, total), p) for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_chunk_worker, jobs))
    merged: dict = {}
    examined = singular = 0
    for found, ex_count, sing in results:
        merged.update(found)
        examined += ex_count
        singular += sing
    cands = [
        _Candidate(list(num), den, fitted, vals)
        for (num, den), (fitted, vals) in sorted(merged.items())
    ]
    return idata, cands, examined, singular


def _loss(exponents: list[int], p: int) -> Fraction:
    if not exponents:
        return Fraction(0)
    lo = min(exponents)
    total = sum(p ** (t - lo) for t in exponents)
    return Fraction(total) * Fraction(p) ** lo


def _sorted_models(models: Iterable[AffineModel]) -> tuple[AffineModel, ...]:
    return tuple(sorted(models, key=AffineModel.key))


def _exact_report(data, p, idata, cands, examined, singular) -> FitReport:
    vscale = int_valuation(idata.scale, p)
    best = None
    losses = []
    for c in cands:
        shift = int_valuation(c.den, p) + vscale
        loss = _loss([shift - e for e in c.vals], p)
        losses.append(loss)
        if best is None or loss < best:
            best = loss
    opt = [c for c, loss in zip(cands, losses) if loss == best]
    models = {idata.model(c.num, c.den): len(c.fitted) for c in opt}
    report = FitReport(
        optimal_models=_sorted_models(models),
        loss=best,
        fit_counts=models,
        candidates_examined=examined,
        mode="exact",
        prime=int(p),
        singular_skipped=singular,
        dim=data.dim,
    )
    _check_report(report, data)
    return report


def _check_report(report: FitReport, data: Dataset) -> None:
    for m, count in report.fit_counts.items():
        if count < data.dim + 1:
            raise RuntimeError(f"optimal model {m} fits only {count} rows")


def fit_exact(data: Dataset, p: int, workers: int = 1) -> FitReport:
    """All loss-minimising affine models, by enumerating ``(n+1)``-subsets."""
    p = Prime(p)
    _require_solvable(data)
    return _exact_report(data, p, *_enumerate(data, p, workers))


def fit_large_prime(data: Dataset, p: int, workers: int = 1) -> FitReport:
    """Maximise the exact-fit count, valid when every nonzero residual is a p-adic unit.

    The unit condition is verified on every candidate; if it fails the exact
    loss is used instead and the report's mode is ``"exact"``.
    """
    p = Prime(p)
    _require_solvable(data)
    idata, cands, examined, singular = _enumerate(data, p, workers)
    vscale = int_valuation(idata.scale, p)
    for c in cands:
        shift = int_valuation(c.den, p) + vscale
        if any(e != shift for e in c.vals):
            return _exact_report(data, p, idata, cands, examined, singular)
    most = max(len(c.fitted) for c in cands)
    models = {idata.model(c.num, c.den): most for c in cands if len(c.fitted) == most}
    report = FitReport(
        optimal_models=_sorted_models(models),
        loss=Fraction(data.k - most),
        fit_counts=models,
        candidates_examined=examined,
        mode="large_prime",
        prime=int(p),
        singular_skipped=singular,
        dim=data.dim,
    )
    _check_report(report, data)
    return report


def fit(data: Dataset, p: int, mode: str = "auto", workers: int = 1) -> FitReport:
    mode = mode.replace("-", "_")
    if mode == "exact":
        return fit_exact(data, p, workers)
    if mode in ("auto", "large_prime"):
        # fit_large_prime only reports mode large_prime after verification.
        return fit_large_prime(data, p, workers)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def descend(model: AffineModel, data: Dataset, p: int) -> tuple[AffineModel, DescentStep]:
    """One improving step: keep every fitted row, fit one more, lower the loss."""
    p = Prime(p)
    _check_dim(model, data)
    res = residuals(model, data)
    fitted = [i for i, r in enumerate(res) if r == 0]
    n = data.dim
    if len(fitted) >= n + 1:
        raise PreconditionError(f"model already fits {len(fitted)} >= {n + 1} rows")
    ok, cert = check_nondegenerate(data)
    if not ok:
        raise DegenerateDataError(cert)
    points = [list(x) + [Fraction(1)] for x in data.features]
    constraints = [points[i] for i in fitted]
    for direction in linalg.nullspace(constraints, n + 1):
        moves = [sum((a * b for a, b in zip(direction, pt)), Fraction(0)) for pt in points]
        if any(moves):
            break
    else:  # pragma: no cover - excluded by non-degeneracy
        raise DegenerateDataError(linalg.primitive(direction))
    alphas = {i: res[i] / -d for i, d in enumerate(moves) if d != 0}
    chosen = min(alphas, key=lambda i: (abs_p(alphas[i], p), i))
    alpha = alphas[chosen]
    new = AffineModel.from_vector([v + alpha * d for v, d in zip(model.vector, direction)])
    step = DescentStep(tuple(direction), alphas, chosen, alpha)
    return new, step


def descend_to_candidate(model: AffineModel, data: Dataset, p: int) -> list[tuple[AffineModel, DescentStep]]:
    """Iterate :func:`descend` until the model fits at least ``n + 1`` rows."""
    path = []
    while len(fitted_rows(model, data)) < data.dim + 1:
        model, step = descend(model, data, p)
        path.append((model, step))
    return path


def ols_baseline(data: Dataset) -> np.ndarray:
    """Float least-squares fit ``(weights..., intercept)`` for comparison only."""
    if data.k < data.dim + 1:
        raise InsufficientDataError(f"need at least {data.dim + 1} rows, got {data.k}")
    A = np.array([[float(v) for v in x] + [1.0] for x in data.features])
    y = np.array([float(v) for v in data.targets])
    # Columns can differ by 10**25 in scale (Table 1); equilibrate first.
    scale = np.abs(A).max(axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    if np.linalg.matrix_rank(As) < data.dim + 1:
        raise PreconditionError("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(As, y, rcond=None)
    return coef / scale
