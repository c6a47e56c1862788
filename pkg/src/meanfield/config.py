"""Run configuration and the flat ``key = value`` config file format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .activations import ActivationKind
from .errors import ConfigError

DATASETS = ("linear", "nonlinear", "digits")
DEFAULT_EPOCHS = {"linear": 2000, "nonlinear": 5000, "digits": 3000}
DEFAULT_ARCHITECTURE = {"linear": (10,), "nonlinear": (8, 2), "digits": (25,)}


@dataclass(frozen=True)
class RunConfig:
    dataset: str = "nonlinear"
    digits_path: str = "data/digits.csv"
    class_a: int = 0
    class_b: int = 1
    data_seed: int = 0
    architecture: tuple[int, ...] | None = None
    activation: ActivationKind = ActivationKind.SWISH
    beta0: float = 1.0
    beta_trainable: bool = True
    column_normalize: bool = False
    learning_rate: float = 0.01
    adam_b1: float = 0.9
    adam_b2: float = 0.999
    adam_eps: float = 1e-8
    epochs: int | None = None
    checkpoint_every: int | None = None
    seed: int = 0
    residual_tol: float = 0.05
    zero_tol_rel: float = 1e-6
    test_fraction: float = 0.2
    output_dir: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        if self.dataset not in DATASETS:
            raise ConfigError(f"dataset must be one of {DATASETS}, got {self.dataset!r}")
        set_("activation", ActivationKind.parse(self.activation))
        if self.architecture is None:
            set_("architecture", DEFAULT_ARCHITECTURE[self.dataset])
        set_("architecture", tuple(int(n) for n in self.architecture))
        if not self.architecture or any(n < 1 for n in self.architecture):
            raise ConfigError(f"invalid architecture {self.architecture!r}")
        if self.epochs is None:
            set_("epochs", DEFAULT_EPOCHS[self.dataset])
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.checkpoint_every is None:
            set_("checkpoint_every", max(1, self.epochs // 20))
        if not 1 <= self.checkpoint_every <= self.epochs:
            raise ConfigError("checkpoint_every must lie in [1, epochs]")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")
        if not (0 <= self.adam_b1 < 1 and 0 <= self.adam_b2 < 1 and self.adam_eps > 0):
            raise ConfigError("need 0 <= adam_b1, adam_b2 < 1 and adam_eps > 0")
        if not self.beta0 > 0:
            raise ConfigError("beta0 must be > 0")
        if not (self.residual_tol > 0 and self.zero_tol_rel > 0):
            raise ConfigError("tolerances must be > 0")
        if not 0 < self.test_fraction < 1:
            raise ConfigError("test_fraction must lie in (0, 1)")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, ActivationKind):
                v = v.value
            elif isinstance(v, tuple):
                v = list(v)
            d[f.name] = v
        return d


def field_names() -> list[str]:
    return [f.name for f in dataclasses.fields(RunConfig)]


def _parse_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_sizes(s: str) -> tuple[int, ...]:
    parts = s.replace("-", ",").replace(" ", ",").split(",")
    return tuple(int(p) for p in parts if p)


_PARSERS = {
    "class_a": int, "class_b": int, "data_seed": int, "seed": int,
    "epochs": int, "checkpoint_every": int,
    "beta0": float, "learning_rate": float, "adam_b1": float, "adam_b2": float,
    "adam_eps": float, "residual_tol": float, "zero_tol_rel": float, "test_fraction": float,
    "beta_trainable": _parse_bool, "column_normalize": _parse_bool,
    "architecture": _parse_sizes,
    "activation": ActivationKind.parse,
}


def parse_value(key: str, raw: str):
    if key not in field_names():
        raise ConfigError(f"unknown key {key!r}; valid keys: {', '.join(field_names())}")
    try:
        return _PARSERS.get(key, str)(raw.strip())
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, raw = (part.strip() for part in line.split("=", 1))
        try:
            values[key] = parse_value(key, raw)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def build_config(path=None, overrides: dict | None = None) -> RunConfig:
    values = read_config_file(path) if path else {}
    for key, raw in (overrides or {}).items():
        values[key] = parse_value(key, raw) if isinstance(raw, str) else raw
    return RunConfig(**values)


def write_config_file(cfg: RunConfig, path) -> None:
    lines = []
    for key, v in cfg.to_dict().items():
        if isinstance(v, list):
            v = ",".join(str(n) for n in v)
        lines.append(f"{key} = {v}")
    Path(path).write_text("\n".join(lines) + "\n")
