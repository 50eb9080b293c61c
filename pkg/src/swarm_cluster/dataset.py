"""Dataset loading, validation, normalization and search-space bounds."""

from __future__ import annotations

import csv
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DATA_ENV_VAR = "SWARM_CLUSTER_DATA"
BUILTIN_NAMES = ("cmc", "glass", "iris", "pima", "wine")


class DatasetError(ValueError):
    """Invalid dataset contents or an unreadable data file."""


class CsvParseError(DatasetError):
    def __init__(self, path, row: int, column: int, value: str):
        self.path = str(path)
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"{self.path}: cannot parse {value!r} as a finite real "
            f"(row {row}, column {column})"
        )


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """An n x d matrix of finite reals with optional dense class ids.

    ``label_names[c]`` is the original label string for class id ``c``.
    Instances are immutable (the arrays are flagged read-only).
    """

    points: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] | None = None
    label_names: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DatasetError(f"points must be a non-empty n x d matrix, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("points contain NaN or infinite values")
        object.__setattr__(self, "points", _readonly(pts))

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.ndim != 1 or labels.shape[0] != pts.shape[0]:
                raise DatasetError(
                    f"labels must have length {pts.shape[0]}, got shape {labels.shape}"
                )
            if not np.issubdtype(labels.dtype, np.integer):
                raise DatasetError("labels must be integer class ids")
            labels = labels.astype(np.int64)
            n_classes = len(np.unique(labels))
            if labels.min() < 0 or labels.max() >= n_classes:
                raise DatasetError(f"class ids must be dense in 0..{n_classes - 1}")
            object.__setattr__(self, "labels", _readonly(labels))

        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != pts.shape[1]:
                raise DatasetError(f"expected {pts.shape[1]} feature names, got {len(names)}")
            object.__setattr__(self, "feature_names", names)
        if self.label_names is not None:
            object.__setattr__(self, "label_names", tuple(str(s) for s in self.label_names))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return 0 if self.labels is None else len(np.unique(self.labels))

    def class_sizes(self) -> list[int]:
        if self.labels is None:
            return []
        return np.bincount(self.labels).tolist()

    def with_points(self, points: np.ndarray) -> Dataset:
        return Dataset(points, self.labels, self.feature_names, self.label_names, self.name)


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    n_instances: int
    n_dimensions: int
    n_classes: int
    class_sizes: tuple[int, ...]

    def __post_init__(self):
        if sum(self.class_sizes) != self.n_instances or len(self.class_sizes) != self.n_classes:
            raise DatasetError(f"inconsistent descriptor for {self.name!r}")


@dataclass(frozen=True, eq=False)
class NormalizationParams:
    """Per-dimension min/max of the data a min-max normalization was fitted on."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.min, dtype=float)
        hi = np.asarray(self.max, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DatasetError("min and max must be vectors of equal length")
        if np.any(lo > hi):
            raise DatasetError("min must not exceed max in any dimension")
        object.__setattr__(self, "min", _readonly(lo))
        object.__setattr__(self, "max", _readonly(hi))

    @property
    def span(self) -> np.ndarray:
        return self.max - self.min

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        span = self.span
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (x - self.min) / safe, 0.0)

    def inverse(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(self.span > 0, x * self.span + self.min, self.min)


@dataclass(frozen=True, eq=False)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper bounds must be vectors of equal length")
        if np.any(lo > hi) or not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bounds must be finite with lower <= upper")
        object.__setattr__(self, "lower", _readonly(lo))
        object.__setattr__(self, "upper", _readonly(hi))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        return bool(np.all((x >= self.lower) & (x <= self.upper)))

    def tile(self, k: int) -> Bounds:
        """Repeat the box ``k`` times (bounds for a flattened k x d centroid matrix)."""
        return Bounds(np.tile(self.lower, k), np.tile(self.upper, k))

    @classmethod
    def uniform(cls, low: float, high: float, dim: int) -> Bounds:
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))


@dataclass(frozen=True)
class CsvSchema:
    delimiter: str = ","
    has_header: bool = False
    label_column: int | None = None
    # zero-based columns to drop entirely (e.g. text metadata)
    skip_columns: tuple[int, ...] = ()


def load_csv(path, schema: CsvSchema | None = None, name: str | None = None) -> Dataset:
    """Read a delimited text file into a :class:`Dataset`.

    Label strings found in ``schema.label_column`` are mapped to dense ids in
    order of first appearance. Row numbers in error messages are 1-based file
    lines; columns are 1-based fields.
    """
    schema = schema or CsvSchema()
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = [row for row in csv.reader(fh, delimiter=schema.delimiter)]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc

    # (file line number, fields); blank lines are skipped
    rows = [(i + 1, r) for i, r in enumerate(raw) if any(c.strip() for c in r)]
    header = None
    if schema.has_header and rows:
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    width = len(rows[0][1])
    if header is not None and len(header) != width:
        raise DatasetError(f"{path}: header has {len(header)} fields, data rows have {width}")
    label_col = schema.label_column
    if label_col is not None:
        if not -width <= label_col < width:
            raise DatasetError(f"{path}: label column {label_col} out of range for {width} fields")
        label_col %= width
    skip = set()
    for c in schema.skip_columns:
        if not -width <= c < width:
            raise DatasetError(f"{path}: skipped column {c} out of range for {width} fields")
        skip.add(c % width)
    if label_col in skip:
        raise DatasetError(f"{path}: label column {label_col} is also skipped")
    n_features = width - len(skip) - (label_col is not None)
    if n_features < 1:
        raise DatasetError(f"{path}: no feature columns left")

    values = []
    label_strings = []
    for lineno, fields in rows:
        if len(fields) != width:
            raise DatasetError(
                f"{path}: row {lineno} has {len(fields)} fields, expected {width}"
            )
        vec = []
        for j, cell in enumerate(fields):
            if j == label_col:
                label_strings.append(cell.strip())
                continue
            if j in skip:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise CsvParseError(path, lineno, j + 1, cell) from None
            if not np.isfinite(v):
                raise CsvParseError(path, lineno, j + 1, cell)
            vec.append(v)
        values.append(vec)

    labels = label_names = None
    if label_col is not None:
        ids: dict[str, int] = {}
        labels = np.array([ids.setdefault(s, len(ids)) for s in label_strings], dtype=np.int64)
        label_names = tuple(ids)
    feature_names = None
    if header is not None:
        feature_names = tuple(
            h for j, h in enumerate(header) if j != label_col and j not in skip
        )
    return Dataset(
        np.array(values, dtype=float),
        labels,
        feature_names,
        label_names,
        name if name is not None else path.stem,
    )


def min_max_normalize(ds: Dataset) -> tuple[Dataset, NormalizationParams]:
    """Scale every column to [0, 1]; constant columns become all zeros."""
    params = NormalizationParams(ds.points.min(axis=0), ds.points.max(axis=0))
    return ds.with_points(params.transform(ds.points)), params


def denormalize_centers(centers, params: NormalizationParams) -> np.ndarray:
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[1] != params.min.shape[0]:
        raise DatasetError(
            f"centers have {centers.shape[1]} dimensions, normalization has {params.min.shape[0]}"
        )
    return params.inverse(centers)


def dataset_bounds(ds: Dataset) -> Bounds:
    return Bounds(ds.points.min(axis=0), ds.points.max(axis=0))


_DESCRIPTORS = {
    "cmc": DatasetDescriptor("cmc", 1473, 9, 3, (629, 334, 510)),
    "glass": DatasetDescriptor("glass", 214, 9, 6, (70, 17, 76, 13, 9, 29)),
    "iris": DatasetDescriptor("iris", 150, 4, 3, (50, 50, 50)),
    "pima": DatasetDescriptor("pima", 768, 8, 2, (500, 268)),
    "wine": DatasetDescriptor("wine", 178, 13, 3, (59, 71, 48)),
}


def builtin_descriptor(name: str) -> DatasetDescriptor:
    try:
        return _DESCRIPTORS[name.lower()]
    except KeyError:
        raise DatasetError(
            f"unknown dataset {name!r}; expected one of {', '.join(BUILTIN_NAMES)}"
        ) from None


def data_dir() -> Path:
    """Directory holding the bundled CSV files (``$SWARM_CLUSTER_DATA`` overrides)."""
    override = os.environ.get(DATA_ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).with_name("data")


def check_descriptor(ds: Dataset, desc: DatasetDescriptor) -> None:
    """Raise on an (n, d, C) mismatch; only warn when class sizes differ."""
    got = (ds.n, ds.d, ds.n_classes)
    want = (desc.n_instances, desc.n_dimensions, desc.n_classes)
    if got != want:
        raise DatasetError(f"{desc.name}: loaded (n, d, C) = {got}, expected {want}")
    if sorted(ds.class_sizes()) != sorted(desc.class_sizes):
        warnings.warn(
            f"{desc.name}: class sizes {ds.class_sizes()} differ from reference "
            f"{list(desc.class_sizes)}",
            stacklevel=2,
        )


def load_builtin(name: str, validate: bool = True) -> Dataset:
    """Load one of the bundled benchmark files (label in the last column, header row)."""
    desc = builtin_descriptor(name)
    path = data_dir() / f"{desc.name}.csv"
    ds = load_csv(path, CsvSchema(has_header=True, label_column=-1), name=desc.name)
    if validate:
        check_descriptor(ds, desc)
    return ds


def as_points(data) -> np.ndarray:
    """Accept a Dataset or anything array-like and return a 2-D float array."""
    if isinstance(data, Dataset):
        return data.points
    pts = np.asarray(data, dtype=float)
    return pts.reshape(-1, 1) if pts.ndim == 1 else pts


def describe(ds: Dataset) -> dict:
    return {
        "name": ds.name,
        "n_instances": ds.n,
        "n_dimensions": ds.d,
        "n_classes": ds.n_classes,
        "class_sizes": ds.class_sizes(),
    }


__all__ = [
    "BUILTIN_NAMES",
    "Bounds",
    "CsvParseError",
    "CsvSchema",
    "Dataset",
    "DatasetDescriptor",
    "DatasetError",
    "NormalizationParams",
    "as_points",
    "builtin_descriptor",
    "check_descriptor",
    "data_dir",
    "dataset_bounds",
    "denormalize_centers",
    "describe",
    "load_builtin",
    "load_csv",
    "min_max_normalize",
]
