"""Experiment configuration: flat `key = value` files plus overrides.

Recognized keys (exhaustive):
    grid.T, grid.L,
    model.a1, model.a2, model.a3, model.alpha, model.beta,
    noise.amplitude, noise.seed,
    range.alpha_min, range.alpha_max, range.beta_min, range.beta_max,
    search.algorithm (1|2), search.m, search.n,
    search.schedule (semicolon-separated m,n,p triples),
    search.early_abandon (bool),
    out.dir
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

from .gl import SamplingGrid
from .noise import NoiseSpec
from .search import PowerRange, RefinementSchedule
from .simulate import FractionalModel


class ConfigError(ValueError):
    """A configuration file, key, or value is invalid."""


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_schedule(text: str) -> tuple[tuple[int, int, int], ...]:
    stages = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = [piece.strip() for piece in part.split(",")]
        if len(pieces) != 3:
            raise ConfigError(f"schedule stage must be 'm,n,p', got {part!r}")
        try:
            stages.append(tuple(int(piece) for piece in pieces))
        except ValueError as exc:
            raise ConfigError(f"bad schedule stage {part!r}: {exc}") from None
    if not stages:
        raise ConfigError("schedule must contain at least one m,n,p stage")
    return tuple(stages)


def _format_schedule(stages: tuple[tuple[int, int, int], ...]) -> str:
    return ";".join(",".join(str(v) for v in stage) for stage in stages)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run needs, with paper-reproduction defaults."""

    grid_t: float = 0.001
    grid_l: float = 10.0
    model_a1: float = 0.8
    model_a2: float = 0.5
    model_a3: float = 1.0
    model_alpha: float = 2.23
    model_beta: float = 0.88
    noise_amplitude: float = 0.05
    noise_seed: int = 20090
    range_alpha_min: float = 2.0
    range_alpha_max: float = 2.4
    range_beta_min: float = 0.7
    range_beta_max: float = 1.1
    search_algorithm: int = 1
    search_m: int = 20
    search_n: int = 20
    search_schedule: tuple[tuple[int, int, int], ...] = ((4, 4, 4), (5, 5, 3), (5, 5, 3))
    search_early_abandon: bool = False
    out_dir: str = "out"

    # --- domain objects (raise ConfigError on invalid combinations) ---

    def grid(self) -> SamplingGrid:
        return self._domain(SamplingGrid, period=self.grid_t, memory=self.grid_l)

    def model(self) -> FractionalModel:
        return self._domain(
            FractionalModel,
            a1=self.model_a1,
            a2=self.model_a2,
            a3=self.model_a3,
            alpha=self.model_alpha,
            beta=self.model_beta,
        )

    def noise_spec(self) -> NoiseSpec:
        return self._domain(
            NoiseSpec, amplitude=self.noise_amplitude, seed=self.noise_seed
        )

    def power_range(self) -> PowerRange:
        return self._domain(
            PowerRange,
            alpha_min=self.range_alpha_min,
            alpha_max=self.range_alpha_max,
            beta_min=self.range_beta_min,
            beta_max=self.range_beta_max,
        )

    def schedule(self) -> RefinementSchedule:
        return self._domain(RefinementSchedule, stages=self.search_schedule)

    @staticmethod
    def _domain(cls, **kwargs):
        try:
            return cls(**kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self) -> "ExperimentConfig":
        self.grid()
        self.model()
        self.noise_spec()
        self.power_range()
        self.schedule()
        if self.search_algorithm not in (1, 2):
            raise ConfigError(
                f"search.algorithm must be 1 or 2, got {self.search_algorithm}"
            )
        if self.search_m < 1 or self.search_n < 1:
            raise ConfigError("search.m and search.n must be >= 1")
        return self

    def to_text(self) -> str:
        lines = []
        for key, (attr, _, fmt) in _KEYS.items():
            value = getattr(self, attr)
            lines.append(f"{key} = {fmt(value)}")
        return "\n".join(lines) + "\n"


_KEYS = {
    "grid.T": ("grid_t", float, repr),
    "grid.L": ("grid_l", float, repr),
    "model.a1": ("model_a1", float, repr),
    "model.a2": ("model_a2", float, repr),
    "model.a3": ("model_a3", float, repr),
    "model.alpha": ("model_alpha", float, repr),
    "model.beta": ("model_beta", float, repr),
    "noise.amplitude": ("noise_amplitude", float, repr),
    "noise.seed": ("noise_seed", int, str),
    "range.alpha_min": ("range_alpha_min", float, repr),
    "range.alpha_max": ("range_alpha_max", float, repr),
    "range.beta_min": ("range_beta_min", float, repr),
    "range.beta_max": ("range_beta_max", float, repr),
    "search.algorithm": ("search_algorithm", int, str),
    "search.m": ("search_m", int, str),
    "search.n": ("search_n", int, str),
    "search.schedule": ("search_schedule", _parse_schedule, _format_schedule),
    "search.early_abandon": ("search_early_abandon", _parse_bool, lambda b: str(b).lower()),
    "out.dir": ("out_dir", str, str),
}


def _coerce(key: str, raw: str):
    if key not in _KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    attr, parse, _ = _KEYS[key]
    try:
        return attr, parse(raw.strip())
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def parse_overrides(
    config: ExperimentConfig, overrides: list[str]
) -> ExperimentConfig:
    """Apply `key=value` strings on top of an existing config."""
    updates = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, raw = item.split("=", 1)
        attr, value = _coerce(key.strip(), raw)
        updates[attr] = value
    return replace(config, **updates)


def load_config(
    path: Optional[Union[str, Path]] = None, overrides: Optional[list[str]] = None
) -> ExperimentConfig:
    """Read a flat key = value file (optional), then apply overrides."""
    config = ExperimentConfig()
    if path is not None:
        text = Path(path).read_text()
        updates = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, raw = stripped.split("=", 1)
            attr, value = _coerce(key.strip(), raw)
            updates[attr] = value
        config = replace(config, **updates)
    if overrides:
        config = parse_overrides(config, overrides)
    return config
