"""Run configuration, model persistence, and report serialization.

Everything on disk is line-oriented ``key = value`` text. The model format
is versioned; floats are written with ``repr`` so a save/load/save round
trip is byte-identical. Unknown config keys are rejected outright since a
silently ignored typo in a hyper-parameter is worse than an error.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .data import Standardization
from .engine import EngineConfig, IterationReport
from .errors import ConfigError, ModelFormatError
from .featuremap import Layer, RecursiveFeatureMap
from .solver import SolverConfig

MODEL_FORMAT = "contilearn-model-v1"

_STATUSES = ("completed", "degenerate", "algebra-converged")

_CONFIG_KEYS = (
    "n_iters",
    "n_replicates",
    "seed",
    "rel_threshold",
    "k_max",
    "r_grid",
    "grad_tol",
    "max_iters",
    "algebra_check",
    "algebra_stop_tol",
    "has_header",
)
_PATH_KEYS = ("data", "out")


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration: engine settings plus optional default paths."""

    n_iters: int = 1
    n_replicates: int = 64
    seed: int = 0
    rel_threshold: float = 0.05
    k_max: int = 8
    r_grid: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0)
    grad_tol: float = 1e-8
    max_iters: int = 100
    algebra_check: bool = False
    algebra_stop_tol: float | None = None
    has_header: bool = False
    data: str | None = None
    out: str | None = None

    def engine_config(self) -> EngineConfig:
        return EngineConfig(
            n_iters=self.n_iters,
            n_replicates=self.n_replicates,
            seed=self.seed,
            rel_threshold=self.rel_threshold,
            k_max=self.k_max,
            r_grid=self.r_grid,
            solver=SolverConfig(grad_tol=self.grad_tol, max_iters=self.max_iters),
            algebra_check=self.algebra_check,
            algebra_stop_tol=self.algebra_stop_tol,
        )


def _fmt_float(v: float) -> str:
    return repr(float(v))


def _fmt_bool(v: bool) -> str:
    return "true" if v else "false"


def _fmt_vector(v: np.ndarray) -> str:
    return ",".join(_fmt_float(x) for x in np.asarray(v, dtype=float))


def _parse_bool(text: str, key: str, error) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise error(f"{key}: expected true or false, got {text!r}")


def _parse_int(text: str, key: str, error) -> int:
    try:
        return int(text)
    except ValueError:
        raise error(f"{key}: expected an integer, got {text!r}") from None


def _parse_float(text: str, key: str, error) -> float:
    try:
        return float(text)
    except ValueError:
        raise error(f"{key}: expected a number, got {text!r}") from None


def _parse_vector(text: str, key: str, error) -> np.ndarray:
    if text == "":
        return np.zeros(0)
    return np.array([_parse_float(tok, key, error) for tok in text.split(",")])


def _parse_kv_lines(text: str, error):
    """Ordered (key, value) pairs from ``key = value`` lines; '#' starts a comment."""
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise error(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, value = stripped.split("=", 1)
        pairs.append((key.strip(), value.strip()))
    return pairs


def parse_run_config(text: str) -> RunConfig:
    seen: dict[str, str] = {}
    for key, value in _parse_kv_lines(text, ConfigError):
        if key not in _CONFIG_KEYS + _PATH_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        if key in seen:
            raise ConfigError(f"duplicate config key {key!r}")
        seen[key] = value

    kwargs: dict = {}
    for key, value in seen.items():
        if key in ("n_iters", "n_replicates", "seed", "k_max", "max_iters"):
            kwargs[key] = _parse_int(value, key, ConfigError)
        elif key in ("rel_threshold", "grad_tol"):
            kwargs[key] = _parse_float(value, key, ConfigError)
        elif key == "r_grid":
            kwargs[key] = tuple(_parse_vector(value, key, ConfigError))
        elif key in ("algebra_check", "has_header"):
            kwargs[key] = _parse_bool(value, key, ConfigError)
        elif key == "algebra_stop_tol":
            kwargs[key] = None if value == "none" else _parse_float(value, key, ConfigError)
        else:
            kwargs[key] = value
    config = RunConfig(**kwargs)
    try:
        config.engine_config()  # range validation lives on the engine/solver configs
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config


def load_run_config(path) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"no such config file: {path}")
    return parse_run_config(p.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class TrainedModel:
    """Everything needed to reproduce predictions: feature map, parameters, config echo."""

    feature_map: RecursiveFeatureMap
    w: np.ndarray
    r_per_iteration: tuple[float, ...]
    status: str
    config: RunConfig


def _config_lines(config: RunConfig) -> list[str]:
    stop = "none" if config.algebra_stop_tol is None else _fmt_float(config.algebra_stop_tol)
    return [
        f"config.n_iters = {config.n_iters}",
        f"config.n_replicates = {config.n_replicates}",
        f"config.seed = {config.seed}",
        f"config.rel_threshold = {_fmt_float(config.rel_threshold)}",
        f"config.k_max = {config.k_max}",
        f"config.r_grid = {','.join(_fmt_float(r) for r in config.r_grid)}",
        f"config.grad_tol = {_fmt_float(config.grad_tol)}",
        f"config.max_iters = {config.max_iters}",
        f"config.algebra_check = {_fmt_bool(config.algebra_check)}",
        f"config.algebra_stop_tol = {stop}",
        f"config.has_header = {_fmt_bool(config.has_header)}",
    ]


def format_model(model: TrainedModel) -> str:
    fm = model.feature_map
    lines = [
        f"format = {MODEL_FORMAT}",
        f"status = {model.status}",
        f"d = {fm.d}",
        f"mean = {_fmt_vector(fm.standardization.mean)}",
        f"scale = {_fmt_vector(fm.standardization.scale)}",
        f"r_per_iteration = {','.join(_fmt_float(r) for r in model.r_per_iteration)}",
        f"n_layers = {len(fm.layers)}",
    ]
    for i, layer in enumerate(fm.layers):
        lines.append(f"layer{i}.m_in = {layer.m_in}")
        lines.append(f"layer{i}.k = {layer.k}")
        lines.append(f"layer{i}.degenerate_v0 = {_fmt_bool(layer.degenerate_v0)}")
        lines.append(f"layer{i}.v0 = {_fmt_vector(layer.v0)}")
        for j in range(layer.k):
            lines.append(f"layer{i}.u{j} = {_fmt_vector(layer.u[j])}")
        lines.append(f"layer{i}.scales = {_fmt_vector(layer.scales)}")
    lines.append(f"w = {_fmt_vector(model.w)}")
    lines.extend(_config_lines(model.config))
    return "\n".join(lines) + "\n"


def save_model(path, model: TrainedModel) -> None:
    Path(path).write_text(format_model(model), encoding="utf-8")


def _take(fields: dict[str, str], key: str) -> str:
    if key not in fields:
        raise ModelFormatError(f"missing model field {key!r}")
    return fields.pop(key)


def parse_model(text: str) -> TrainedModel:
    fields = dict()
    for key, value in _parse_kv_lines(text, ModelFormatError):
        if key in fields:
            raise ModelFormatError(f"duplicate model field {key!r}")
        fields[key] = value

    fmt = _take(fields, "format")
    if fmt != MODEL_FORMAT:
        raise ModelFormatError(f"unsupported model format {fmt!r} (expected {MODEL_FORMAT!r})")
    status = _take(fields, "status")
    if status not in _STATUSES:
        raise ModelFormatError(f"unknown model status {status!r}")
    d = _parse_int(_take(fields, "d"), "d", ModelFormatError)
    mean = _parse_vector(_take(fields, "mean"), "mean", ModelFormatError)
    scale = _parse_vector(_take(fields, "scale"), "scale", ModelFormatError)
    r_text = _take(fields, "r_per_iteration")
    r_per_iteration = tuple(_parse_vector(r_text, "r_per_iteration", ModelFormatError))
    n_layers = _parse_int(_take(fields, "n_layers"), "n_layers", ModelFormatError)

    try:
        standardization = Standardization(mean, scale)
        if standardization.d != d:
            raise ModelFormatError("standardization width does not match d")
        layers = []
        for i in range(n_layers):
            m_in = _parse_int(_take(fields, f"layer{i}.m_in"), f"layer{i}.m_in", ModelFormatError)
            k = _parse_int(_take(fields, f"layer{i}.k"), f"layer{i}.k", ModelFormatError)
            degenerate = _parse_bool(
                _take(fields, f"layer{i}.degenerate_v0"), f"layer{i}.degenerate_v0", ModelFormatError
            )
            v0 = _parse_vector(_take(fields, f"layer{i}.v0"), f"layer{i}.v0", ModelFormatError)
            u = np.array(
                [
                    _parse_vector(_take(fields, f"layer{i}.u{j}"), f"layer{i}.u{j}", ModelFormatError)
                    for j in range(k)
                ]
            ).reshape(k, m_in)
            if v0.shape != (m_in,):
                raise ModelFormatError(f"layer{i}.v0 width does not match layer{i}.m_in")
            scales = _parse_vector(
                _take(fields, f"layer{i}.scales"), f"layer{i}.scales", ModelFormatError
            )
            layers.append(Layer(v0, u, scales, degenerate))
        feature_map = RecursiveFeatureMap(standardization, tuple(layers))
        w = _parse_vector(_take(fields, "w"), "w", ModelFormatError)
        if w.shape != (feature_map.output_dim,):
            raise ModelFormatError(
                f"parameter vector has {w.shape[0]} entries, the feature map emits"
                f" {feature_map.output_dim}"
            )
    except ModelFormatError:
        raise
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None

    config_kwargs: dict = {}
    for key in list(fields):
        if not key.startswith("config."):
            raise ModelFormatError(f"unknown model field {key!r}")
        name = key[len("config.") :]
        if name not in _CONFIG_KEYS:
            raise ModelFormatError(f"unknown model field {key!r}")
        value = fields.pop(key)
        if name in ("n_iters", "n_replicates", "seed", "k_max", "max_iters"):
            config_kwargs[name] = _parse_int(value, key, ModelFormatError)
        elif name in ("rel_threshold", "grad_tol"):
            config_kwargs[name] = _parse_float(value, key, ModelFormatError)
        elif name == "r_grid":
            config_kwargs[name] = tuple(_parse_vector(value, key, ModelFormatError))
        elif name in ("algebra_check", "has_header"):
            config_kwargs[name] = _parse_bool(value, key, ModelFormatError)
        else:
            config_kwargs[name] = None if value == "none" else _parse_float(value, key, ModelFormatError)
    missing = [k for k in _CONFIG_KEYS if k not in config_kwargs]
    if missing:
        raise ModelFormatError(f"missing model fields: {', '.join('config.' + k for k in missing)}")
    try:
        config = RunConfig(**config_kwargs)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    return TrainedModel(feature_map, w, r_per_iteration, status, config)


def load_model(path) -> TrainedModel:
    p = Path(path)
    if not p.is_file():
        raise ModelFormatError(f"no such model file: {path}")
    return parse_model(p.read_text(encoding="utf-8"))


def strip_paths(config: RunConfig) -> RunConfig:
    """Drop path defaults before echoing a config into a model file."""
    return replace(config, data=None, out=None)


_REPORT_FIELDS = (
    "iteration",
    "m",
    "expanded",
    "k",
    "best_L",
    "embed_L",
    "r",
    "oob",
    "closure",
    "accuracy",
)


def format_report_line(report: IterationReport) -> str:
    def opt_int(v):
        return "none" if v is None else str(v)

    def opt_float(v):
        return "none" if v is None else _fmt_float(v)

    values = (
        str(report.iteration),
        str(report.m),
        opt_int(report.expanded_dim),
        opt_int(report.k),
        _fmt_float(report.best_L),
        _fmt_float(report.embed_L),
        _fmt_float(report.r),
        _fmt_float(report.oob),
        opt_float(report.closure_residual),
        _fmt_float(report.train_accuracy),
    )
    return " ".join(f"{name}={value}" for name, value in zip(_REPORT_FIELDS, values))


def parse_report_line(line: str) -> dict[str, str]:
    """Field name to raw value text; the writer's field order is fixed."""
    out: dict[str, str] = {}
    for token in line.split():
        key, _, value = token.partition("=")
        out[key] = value
    return out


def save_reports(path, reports) -> None:
    Path(path).write_text(
        "".join(format_report_line(r) + "\n" for r in reports), encoding="utf-8"
    )


def save_predictions(path, probs) -> None:
    """One probability per line, 17 significant digits (exact for doubles)."""
    probs = np.asarray(probs, dtype=float)
    Path(path).write_text("".join(f"{p:.17g}\n" for p in probs), encoding="utf-8")
