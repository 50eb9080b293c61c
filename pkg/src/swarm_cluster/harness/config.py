"""Strict JSON experiment configuration."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..dataset import BUILTIN_NAMES, CsvSchema
from ..optimizer import PsoParams
from ..subtractive import SubtractiveParams

ALGORITHMS = ("kmeans", "pso", "sc-brapso", "subtractive-only")
NEEDS_K = ("kmeans", "pso")
SEEDED = ("sc-brapso", "subtractive-only")


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending key (dotted)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class DatasetSpec:
    builtin: str | None = None
    path: str | None = None
    schema: CsvSchema = field(default_factory=CsvSchema)
    name: str | None = None

    @property
    def label(self) -> str:
        if self.builtin:
            return self.builtin
        return self.name or Path(self.path).stem


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetSpec
    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    k: int | None = None
    subtractive: SubtractiveParams = field(default_factory=SubtractiveParams)
    pso: PsoParams = field(default_factory=PsoParams)
    lloyd_refine: bool = True
    refine_mode: str = "particles"
    seed_fraction: float | None = None
    search_space: str = "normalized"
    kmeans_max_iters: int = 100
    kmeans_tol: float = 1e-6
    convergence_frac: float = 0.01
    report: str | None = None
    trace_dir: str | None = None
    # Directory relative paths are resolved against; not part of the config itself.
    base_dir: str = field(default=".", compare=False)

    def resolve(self, p: str) -> Path:
        path = Path(p)
        return path if path.is_absolute() else Path(self.base_dir) / path


_TOP_KEYS = {
    "dataset", "algorithm", "k", "seeds", "subtractive", "pso", "lloyd_refine",
    "refine_mode", "seed_fraction", "search_space", "kmeans", "convergence_frac", "output",
}  # fmt: skip


def _type_error(path: str, expected: str, value: Any) -> ConfigError:
    return ConfigError(path, f"expected {expected}, got {json.dumps(value)}")


def _int(path: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _type_error(path, "an integer", value)
    return value


def _num(path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _type_error(path, "a number", value)
    return float(value)


def _bool(path: str, value: Any) -> bool:
    if not isinstance(value, bool):
        raise _type_error(path, "true or false", value)
    return value


def _str(path: str, value: Any) -> str:
    if not isinstance(value, str):
        raise _type_error(path, "a string", value)
    return value


def _obj(path: str, value: Any, allowed) -> dict:
    if not isinstance(value, dict):
        raise _type_error(path, "an object", value)
    for key in value:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")
    return value


def _params(path: str, cls, value: Any):
    """Build a params dataclass from a JSON object, checking names and types."""
    fields = {f.name: f for f in dataclasses.fields(cls)}
    raw = _obj(path, value, fields)
    kwargs = {}
    for key, v in raw.items():
        p = f"{path}.{key}"
        default = fields[key].default
        if v is None and (default is None or key == "k_max"):
            kwargs[key] = None
        elif isinstance(default, bool):
            kwargs[key] = _bool(p, v)
        elif isinstance(default, int) or key == "k_max":
            kwargs[key] = _int(p, v)
        elif isinstance(default, float):
            kwargs[key] = _num(p, v)
        else:
            kwargs[key] = _str(p, v)
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def _dataset(value: Any) -> DatasetSpec:
    if isinstance(value, str):
        if value.lower() not in BUILTIN_NAMES:
            raise ConfigError(
                "dataset", f"unknown builtin {value!r}; expected one of {', '.join(BUILTIN_NAMES)}"
            )
        return DatasetSpec(builtin=value.lower())
    raw = _obj("dataset", value, {"path", "delimiter", "has_header", "label_column", "name"})
    if "path" not in raw:
        raise ConfigError("dataset.path", "required for a CSV dataset")
    label = raw.get("label_column")
    schema = CsvSchema(
        delimiter=_str("dataset.delimiter", raw.get("delimiter", ",")),
        has_header=_bool("dataset.has_header", raw.get("has_header", False)),
        label_column=None if label is None else _int("dataset.label_column", label),
    )
    name = raw.get("name")
    return DatasetSpec(
        path=_str("dataset.path", raw["path"]),
        schema=schema,
        name=None if name is None else _str("dataset.name", name),
    )


def config_from_dict(raw: Any, base_dir: str | Path = ".") -> ExperimentConfig:
    raw = _obj("", raw, _TOP_KEYS)
    for key in ("dataset", "algorithm", "seeds"):
        if key not in raw:
            raise ConfigError(key, "required key missing")

    algo = raw["algorithm"]
    algos = [algo] if isinstance(algo, str) else algo
    if not isinstance(algos, list) or not algos:
        raise _type_error("algorithm", "a name or a non-empty list of names", algo)
    for i, a in enumerate(algos):
        p = "algorithm" if isinstance(algo, str) else f"algorithm[{i}]"
        if _str(p, a) not in ALGORITHMS:
            raise ConfigError(p, f"unknown algorithm {a!r}; expected one of {', '.join(ALGORITHMS)}")
    if len(set(algos)) != len(algos):
        raise ConfigError("algorithm", "duplicate algorithm names")

    k = raw.get("k")
    if k is not None:
        k = _int("k", k)
        if k < 1:
            raise ConfigError("k", "must be >= 1")
    missing_k = [a for a in algos if a in NEEDS_K]
    if k is None and missing_k:
        raise ConfigError("k", f"required for algorithm {missing_k[0]!r}")
    if k is not None and all(a in SEEDED for a in algos):
        raise ConfigError("k", f"must not be set for {algos[0]!r}; the seeding decides k")

    seeds = raw["seeds"]
    if not isinstance(seeds, list) or not seeds:
        raise _type_error("seeds", "a non-empty list of integers", seeds)
    seeds = tuple(_int(f"seeds[{i}]", s) for i, s in enumerate(seeds))
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds", "duplicate seeds")

    km = _obj("kmeans", raw.get("kmeans", {}), {"max_iters", "tol"})
    out = _obj("output", raw.get("output", {}), {"report", "trace_dir"})
    frac = _num("convergence_frac", raw.get("convergence_frac", 0.01))
    if not 0 <= frac < 1:
        raise ConfigError("convergence_frac", "must be in [0, 1)")
    km_iters = _int("kmeans.max_iters", km.get("max_iters", 100))
    if km_iters < 1:
        raise ConfigError("kmeans.max_iters", "must be >= 1")

    refine_mode = _str("refine_mode", raw.get("refine_mode", "particles"))
    if refine_mode not in ("particles", "gbest"):
        raise ConfigError("refine_mode", "expected 'particles' or 'gbest'")
    search_space = _str("search_space", raw.get("search_space", "normalized"))
    if search_space not in ("normalized", "original"):
        raise ConfigError("search_space", "expected 'normalized' or 'original'")
    seed_fraction = raw.get("seed_fraction")
    if seed_fraction is not None:
        seed_fraction = _num("seed_fraction", seed_fraction)
        if not 0 < seed_fraction <= 1:
            raise ConfigError("seed_fraction", "must be in (0, 1]")

    def opt_str(path, v):
        return None if v is None else _str(path, v)

    return ExperimentConfig(
        dataset=_dataset(raw["dataset"]),
        algorithms=tuple(algos),
        seeds=seeds,
        k=k,
        subtractive=_params("subtractive", SubtractiveParams, raw.get("subtractive", {})),
        pso=_params("pso", PsoParams, raw.get("pso", {})),
        lloyd_refine=_bool("lloyd_refine", raw.get("lloyd_refine", True)),
        refine_mode=refine_mode,
        seed_fraction=seed_fraction,
        search_space=search_space,
        kmeans_max_iters=km_iters,
        kmeans_tol=_num("kmeans.tol", km.get("tol", 1e-6)),
        convergence_frac=frac,
        report=opt_str("output.report", out.get("report")),
        trace_dir=opt_str("output.trace_dir", out.get("trace_dir")),
        base_dir=str(base_dir),
    )


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            "", f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    return config_from_dict(raw, base_dir=path.parent)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Fully explicit JSON-ready form; ``config_from_dict`` reads it back to an equal config."""
    ds = cfg.dataset
    if ds.builtin:
        dataset: Any = ds.builtin
    else:
        dataset = {
            "path": ds.path,
            "delimiter": ds.schema.delimiter,
            "has_header": ds.schema.has_header,
            "label_column": ds.schema.label_column,
        }
        if ds.name is not None:
            dataset["name"] = ds.name
    out: dict[str, Any] = {
        "dataset": dataset,
        "algorithm": cfg.algorithms[0] if len(cfg.algorithms) == 1 else list(cfg.algorithms),
        "seeds": list(cfg.seeds),
    }
    if cfg.k is not None:
        out["k"] = cfg.k
    out.update(
        subtractive=dataclasses.asdict(cfg.subtractive),
        pso=dataclasses.asdict(cfg.pso),
        lloyd_refine=cfg.lloyd_refine,
        refine_mode=cfg.refine_mode,
        seed_fraction=cfg.seed_fraction,
        search_space=cfg.search_space,
        kmeans={"max_iters": cfg.kmeans_max_iters, "tol": cfg.kmeans_tol},
        convergence_frac=cfg.convergence_frac,
        output={"report": cfg.report, "trace_dir": cfg.trace_dir},
    )
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"
