"""Discrete datasets: ingestion, encoding, discretization, and fold plans."""
from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

FORMAT_TAG = "unifsel/1"


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


@dataclass(frozen=True, eq=False)
class DiscreteDataset:
    """Column-oriented matrix of category codes with a designated class column.

    ``columns`` has shape ``(n_columns, m)``; the class column is one of them.
    ``categories`` optionally holds the raw label for each code of each column.
    """

    feature_names: tuple[str, ...]
    cardinalities: tuple[int, ...]
    columns: np.ndarray
    class_index: int
    categories: tuple[tuple[str, ...], ...] | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        cols = np.array(self.columns, dtype=np.int32, copy=True)
        if cols.ndim != 2:
            raise DataError("columns must be a 2-D array (n_columns, m)")
        object.__setattr__(self, "feature_names", tuple(str(n) for n in self.feature_names))
        object.__setattr__(self, "cardinalities", tuple(int(r) for r in self.cardinalities))
        k = cols.shape[0]
        if len(self.feature_names) != k or len(self.cardinalities) != k:
            raise DataError("feature_names, cardinalities and columns disagree in length")
        if len(set(self.feature_names)) != k:
            raise DataError("duplicate column names")
        if k < 2:
            raise DataError("need at least one feature plus the class column")
        if not 0 <= self.class_index < k:
            raise DataError(f"class_index {self.class_index} out of range")
        if any(r < 1 for r in self.cardinalities):
            raise DataError("cardinalities must be positive")
        if self.cardinalities[self.class_index] < 2:
            raise DataError("class attribute needs at least 2 values")
        if cols.size:
            if cols.min() < 0:
                raise DataError("negative category code")
            over = cols.max(axis=1) >= np.asarray(self.cardinalities)
            if over.any():
                bad = self.feature_names[int(np.flatnonzero(over)[0])]
                raise DataError(f"code out of range for column {bad!r}")
        if self.categories is not None:
            cats = tuple(tuple(str(v) for v in c) for c in self.categories)
            if [len(c) for c in cats] != list(self.cardinalities):
                raise DataError("categories must list one label per code")
            object.__setattr__(self, "categories", cats)
        cols.flags.writeable = False
        object.__setattr__(self, "columns", cols)

    @property
    def m(self) -> int:
        return int(self.columns.shape[1])

    @property
    def n(self) -> int:
        """Number of features (class excluded)."""
        return self.columns.shape[0] - 1

    @property
    def n_columns(self) -> int:
        return self.columns.shape[0]

    @property
    def class_name(self) -> str:
        return self.feature_names[self.class_index]

    @property
    def n_classes(self) -> int:
        return self.cardinalities[self.class_index]

    @property
    def target(self) -> np.ndarray:
        return self.columns[self.class_index]

    @property
    def feature_indices(self) -> list[int]:
        return [i for i in range(self.n_columns) if i != self.class_index]

    def index_of(self, name: str | int) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= int(name) < self.n_columns:
                raise DataError(f"column index {name} out of range")
            return int(name)
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise DataError(f"unknown column {name!r}") from None

    def names(self, indices) -> list[str]:
        return [self.feature_names[i] for i in indices]

    def take_rows(self, rows) -> "DiscreteDataset":
        rows = np.asarray(rows, dtype=np.int64)
        return DiscreteDataset(self.feature_names, self.cardinalities, self.columns[:, rows],
                               self.class_index, self.categories)

    def with_class(self, class_spec: str | int) -> "DiscreteDataset":
        return DiscreteDataset(self.feature_names, self.cardinalities, self.columns,
                               self.index_of(class_spec), self.categories)

    def decode(self, column: int, codes) -> list[str]:
        if self.categories is None:
            return [str(int(c)) for c in np.atleast_1d(codes)]
        labels = self.categories[column]
        return [labels[int(c)] for c in np.atleast_1d(codes)]

    def to_json_dict(self) -> dict:
        doc = {
            "format": FORMAT_TAG,
            "feature_names": list(self.feature_names),
            "cardinalities": list(self.cardinalities),
            "class_index": self.class_index,
            "columns": self.columns.tolist(),
        }
        if self.categories is not None:
            doc["categories"] = [list(c) for c in self.categories]
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DiscreteDataset":
        try:
            names = doc["feature_names"]
            cols = doc["columns"]
            arr = np.array(cols, dtype=np.int32).reshape(len(names), -1) if names else np.zeros((0, 0))
            return cls(names, doc["cardinalities"], arr, int(doc["class_index"]),
                       doc.get("categories"))
        except KeyError as exc:
            raise DataError(f"dataset document lacks field {exc}") from None


def encode_column(values: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Map raw values to codes 0..r-1 in order of first appearance."""
    lookup: dict[str, int] = {}
    codes = np.empty(len(values), dtype=np.int32)
    for i, v in enumerate(values):
        codes[i] = lookup.setdefault(v, len(lookup))
    return codes, tuple(lookup)


def from_raw(header: Sequence[str], rows: Sequence[Sequence[str]], class_spec: str | int) -> DiscreteDataset:
    k = len(header)
    if len(rows) < 2:
        raise DataError("fewer than 2 rows")
    for lineno, row in enumerate(rows, start=2):
        if len(row) != k:
            raise DataError(f"ragged row at line {lineno}: {len(row)} fields, expected {k}")
        if any(v.strip() == "" for v in row):
            raise DataError(f"missing value at line {lineno}")
    names = [h.strip() for h in header]
    class_index = _resolve_class(names, class_spec)
    codes, cats = [], []
    for j in range(k):
        c, labels = encode_column([row[j].strip() for row in rows])
        codes.append(c)
        cats.append(labels)
    return DiscreteDataset(names, [len(c) for c in cats], np.vstack(codes), class_index, cats)


def _resolve_class(names: Sequence[str], class_spec) -> int:
    if isinstance(class_spec, str) and class_spec in names:
        if names.count(class_spec) != 1:
            raise DataError(f"class column {class_spec!r} is ambiguous")
        return names.index(class_spec)
    try:
        idx = int(class_spec)
    except (TypeError, ValueError):
        raise DataError(f"class column {class_spec!r} not found") from None
    if not 0 <= idx < len(names):
        raise DataError(f"class index {idx} out of range")
    return idx


def load_csv(path, class_spec: str | int) -> DiscreteDataset:
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError("empty dataset")
    return from_raw(rows[0], rows[1:], class_spec)


def save_csv(data: DiscreteDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(data.feature_names)
        decoded = [data.decode(j, data.columns[j]) for j in range(data.n_columns)]
        for i in range(data.m):
            w.writerow([decoded[j][i] for j in range(data.n_columns)])


def save_json(data: DiscreteDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data.to_json_dict(), fh)


def load_json(path) -> DiscreteDataset:
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        return DiscreteDataset.from_json_dict(json.load(fh))


def load_dataset(path, class_spec=None) -> DiscreteDataset:
    """Load by extension: ``.json`` native documents, anything else as CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = load_json(path)
        return data if class_spec is None else data.with_class(class_spec)
    if class_spec is None:
        raise DataError("CSV input needs a class column")
    return load_csv(path, class_spec)


def save_dataset(data: DiscreteDataset, path) -> None:
    if Path(path).suffix.lower() == ".json":
        save_json(data, path)
    else:
        save_csv(data, path)


def _numeric_labels(labels) -> np.ndarray | None:
    try:
        return np.array([float(v) for v in labels])
    except ValueError:
        return None


def discretize(data: DiscreteDataset, bins: int = 5, strategy: str = "equal-frequency",
               columns=None) -> DiscreteDataset:
    """Replace numeric columns by bin codes.

    Numeric columns are detected from their category labels unless ``columns``
    names them explicitly. The class column is never binned.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if strategy not in ("equal-frequency", "equal-width"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if data.categories is None:
        raise DataError("discretize needs raw category labels")
    targets = range(data.n_columns) if columns is None else [data.index_of(c) for c in columns]
    new_cols = np.array(data.columns)
    cards = list(data.cardinalities)
    cats = list(data.categories)
    notes = list(data.notes)
    for j in targets:
        if j == data.class_index:
            continue
        values = _numeric_labels(data.categories[j])
        if values is None:
            if columns is not None:
                raise DataError(f"column {data.feature_names[j]!r} is not numeric")
            continue
        raw = values[data.columns[j]]
        codes, labels = _bin(raw, bins, strategy)
        if len(labels) == 1:
            msg = f"column {data.feature_names[j]!r} is constant; kept as a single bin"
            warnings.warn(msg, stacklevel=2)
            notes.append(msg)
        new_cols[j] = codes
        cards[j] = len(labels)
        cats[j] = labels
    return DiscreteDataset(data.feature_names, cards, new_cols, data.class_index, cats, tuple(notes))


def _bin(raw: np.ndarray, bins: int, strategy: str):
    m = raw.size
    lo, hi = float(raw.min()), float(raw.max())
    if lo == hi:
        return np.zeros(m, dtype=np.int32), (f"[{lo:g}]",)
    if strategy == "equal-width":
        width = (hi - lo) / bins
        codes = np.minimum(((raw - lo) / width).astype(np.int64), bins - 1)
        edges = [lo + width * b for b in range(bins + 1)]
    else:
        # min-rank of each value keeps ties in one bin
        order = np.sort(raw)
        min_rank = np.searchsorted(order, raw, side="left")
        codes = (min_rank * bins) // m
        edges = None
    used = np.unique(codes)
    remap = np.full(bins, -1, dtype=np.int64)
    remap[used] = np.arange(used.size)
    codes = remap[codes].astype(np.int32)
    labels = []
    for new, b in enumerate(used):
        if edges is not None:
            labels.append(f"[{edges[b]:g},{edges[b + 1]:g})")
        else:
            members = raw[codes == new]
            labels.append(f"[{members.min():g},{members.max():g}]")
    return codes, tuple(labels)


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int

    def train_test(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        test = np.flatnonzero(self.assignments == fold)
        train = np.flatnonzero(self.assignments != fold)
        return train, test


def make_folds(data: DiscreteDataset, k: int, seed: int) -> FoldPlan:
    """Stratified k-fold assignment, deterministic in ``seed``.

    Rows of each class are shuffled, then dealt round-robin; the dealing offset
    carries over between classes so fold sizes stay balanced.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > data.m:
        raise ValueError(f"k={k} exceeds the number of rows m={data.m}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    assign = np.empty(data.m, dtype=np.int64)
    offset = 0
    y = data.target
    for c in range(data.n_classes):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(rows.size)]
        assign[rows] = (offset + np.arange(rows.size)) % k
        offset = (offset + rows.size) % k
    assign.flags.writeable = False
    return FoldPlan(k, assign, seed)
