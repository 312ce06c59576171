"""Dataset/report (de)serialization and the bundled datasets."""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .hierarchy import TaxonomyTree, load_tree
from .padic_core import RationalParseError, format_rational, parse_rational
from .solver import AffineModel, Dataset, FitReport


class DataFormatError(ValueError):
    pass


def parse_dataset(text: str, header: bool | None = None, check_consistency: bool = True) -> Dataset:
    """CSV rows of ``n`` feature cells then one target cell, rationals as text.

    ``header=None`` detects a header row by whether the first row parses.
    Inconsistent rows raise ``InconsistentDataError`` naming both rows.
    """
    rows = [r for r in csv.reader(_io.StringIO(text)) if r and any(c.strip() for c in r)]
    if header is None and rows:
        try:
            [parse_rational(c) for c in rows[0]]
            header = False
        except RationalParseError:
            header = True
    if header:
        rows = rows[1:]
    if not rows:
        raise DataFormatError("dataset has no rows")
    width = len(rows[0])
    if width < 2:
        raise DataFormatError("each row needs at least one feature and a target")
    parsed = []
    for lineno, r in enumerate(rows):
        if len(r) != width:
            raise DataFormatError(f"row {lineno} has {len(r)} cells, expected {width}")
        try:
            vals = [parse_rational(c) for c in r]
        except RationalParseError as e:
            raise DataFormatError(f"row {lineno}: {e}") from e
        parsed.append((tuple(vals[:-1]), vals[-1]))
    data = Dataset(tuple(parsed), width - 1)
    if check_consistency:
        data.check_consistent()
    return data


def serialize_dataset(data: Dataset, header: list[str] | None = None) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for x, y in data.rows:
        w.writerow([format_rational(v) for v in (*x, y)])
    return buf.getvalue()


def model_to_dict(model: AffineModel) -> dict:
    return {
        "weights": [format_rational(w) for w in model.weights],
        "intercept": format_rational(model.intercept),
    }


def model_from_dict(d: dict) -> AffineModel:
    return AffineModel(
        tuple(parse_rational(w) for w in d["weights"]), parse_rational(d["intercept"])
    )


def report_to_dict(report: FitReport) -> dict:
    if not report.optimal_models:
        raise ValueError("report has no optimal models")
    models = sorted(report.optimal_models, key=AffineModel.key)
    return {
        "prime": report.prime,
        "mode": report.mode,
        "dim": report.dim,
        "loss": format_rational(report.loss),
        "candidates_examined": report.candidates_examined,
        "singular_skipped": report.singular_skipped,
        "models": [
            {**model_to_dict(m), "fit_count": report.fit_counts[m]} for m in models
        ],
    }


def serialize_report(report: FitReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def parse_report(text: str) -> FitReport:
    d = json.loads(text)
    models = [model_from_dict(m) for m in d["models"]]
    counts = {m: int(e["fit_count"]) for m, e in zip(models, d["models"])}
    return FitReport(
        optimal_models=tuple(models),
        loss=parse_rational(d["loss"]),
        fit_counts=counts,
        candidates_examined=int(d["candidates_examined"]),
        mode=d["mode"],
        prime=int(d["prime"]),
        singular_skipped=int(d.get("singular_skipped", 0)),
        dim=int(d.get("dim", len(models[0].weights))),
    )


# --- bundled data ----------------------------------------------------------------


@dataclass(frozen=True)
class BundledDataset:
    name: str
    description: str
    payload: Dataset


_BUNDLED = {
    "zorgette": (
        "zorgette.csv",
        "Zorgette's ten missions (WordNet 3.1 codes, p=409): features are robot 2 "
        "and robot 3's loot, target is robot 1's loot",
    ),
    "padic-four-solution": (
        "padic_four_solution.csv",
        "Five points with four 2-adically optimal lines",
    ),
    "identity": ("identity.csv", "Five points on y = x"),
}

_TREES = {"fig1": "fig1.json"}


def _read(filename: str) -> str:
    return resources.files("padicreg").joinpath("data", filename).read_text(encoding="utf-8")


def bundled_names() -> list[str]:
    return sorted(_BUNDLED)


def bundled_text(name: str) -> str:
    if name not in _BUNDLED:
        raise KeyError(f"unknown bundled dataset {name!r}; known: {bundled_names()}")
    return _read(_BUNDLED[name][0])


def bundled(name: str) -> BundledDataset:
    filename, description = _BUNDLED[name] if name in _BUNDLED else (None, None)
    if filename is None:
        raise KeyError(f"unknown bundled dataset {name!r}; known: {bundled_names()}")
    # The four-solution set repeats x = 1 with different targets on purpose.
    data = parse_dataset(_read(filename), header=True, check_consistency=False)
    return BundledDataset(name, description, data)


def bundled_tree(name: str = "fig1") -> TaxonomyTree:
    if name not in _TREES:
        raise KeyError(f"unknown bundled tree {name!r}; known: {sorted(_TREES)}")
    return load_tree(_read(_TREES[name]))


def zorgette_labels() -> list[list[str]]:
    """Per mission: request, robot 1, robot 2, robot 3 synset names."""
    return json.loads(_read("zorgette.json"))["missions"]


def polynomial_list(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.split(",") if t.strip()]
