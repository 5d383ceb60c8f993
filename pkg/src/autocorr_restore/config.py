"""Experiment configuration: plain-text key=value files with sections.

The on-disk format is INI-style. Every key has a built-in default, so all
commands run without a config file; `--set section.key=value` overrides
win over file values. Manifests written next to command outputs are full
config dumps plus a [result] section, and re-parse to an equivalent
configuration.
"""

import configparser
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .forward import SCENARIO_KINDS, WINDOW_KINDS, Scenario
from .phantoms import PHANTOM_KINDS
from .solvers import UPDATE_RULES, SolverConfig

RESULT_SECTION = "result"


@dataclass
class ExperimentConfig:
    # [object]
    phantom: str = "stars"
    image: str = ""  # path to a FloatRaster object; overrides the phantom
    height: int = 64
    width: int = 64
    object_seed: int = 11
    # [scenario]
    scenario_kind: str = "blurred_autocorr"
    sigma: float = 2.0
    window: str = "gaussian"
    cutoff: float = 0.5
    # [noise]
    noise_lambda: float = 256.0
    noise_seed: int = 1234
    # [solver]
    rule: str = "anchor_update"
    max_iters: int = 20000
    stop_on_snr_drop: bool = True
    snr_check_stride: int = 50
    patience: int = 3
    epsilon_floor: float = 1e-12
    record_stride: int = 50
    solver_seed: int = 42
    # [output]
    out_dir: str = "runs/latest"
    emit_images: bool = True
    emit_csv: bool = True
    emit_report: bool = True
    # [evaluate]
    profile_row: int = -1  # -1 means the center row

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            rule=self.rule,
            max_iters=self.max_iters,
            stop_on_snr_drop=self.stop_on_snr_drop,
            snr_check_stride=self.snr_check_stride,
            patience=self.patience,
            epsilon_floor=self.epsilon_floor,
            seed=self.solver_seed,
            record_stride=self.record_stride,
        )

    def scenario(self) -> Scenario:
        if self.scenario_kind == "bandlimited":
            return Scenario(self.scenario_kind, window=self.window, cutoff=self.cutoff)
        return Scenario(self.scenario_kind, sigma=self.sigma)


# section -> key -> (attribute, type); booleans accept true/false/yes/no/1/0
_SCHEMA: dict[str, dict[str, tuple[str, type]]] = {
    "object": {
        "phantom": ("phantom", str),
        "image": ("image", str),
        "height": ("height", int),
        "width": ("width", int),
        "seed": ("object_seed", int),
    },
    "scenario": {
        "kind": ("scenario_kind", str),
        "sigma": ("sigma", float),
        "window": ("window", str),
        "cutoff": ("cutoff", float),
    },
    "noise": {
        "lambda": ("noise_lambda", float),
        "seed": ("noise_seed", int),
    },
    "solver": {
        "rule": ("rule", str),
        "max_iters": ("max_iters", int),
        "stop_on_snr_drop": ("stop_on_snr_drop", bool),
        "snr_check_stride": ("snr_check_stride", int),
        "patience": ("patience", int),
        "epsilon_floor": ("epsilon_floor", float),
        "record_stride": ("record_stride", int),
        "seed": ("solver_seed", int),
    },
    "output": {
        "dir": ("out_dir", str),
        "images": ("emit_images", bool),
        "csv": ("emit_csv", bool),
        "report": ("emit_report", bool),
    },
    "evaluate": {
        "profile_row": ("profile_row", int),
    },
}

_BOOL_WORDS = {
    "1": True,
    "true": True,
    "yes": True,
    "on": True,
    "0": False,
    "false": False,
    "no": False,
    "off": False,
}


def _convert(section: str, key: str, raw: str, typ: type):
    raw = raw.strip()
    try:
        if typ is bool:
            try:
                return _BOOL_WORDS[raw.lower()]
            except KeyError:
                raise ValueError(f"not a boolean: {raw!r}")
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: {exc}") from exc


def _assign(cfg: ExperimentConfig, section: str, key: str, raw: str) -> None:
    try:
        attr, typ = _SCHEMA[section][key]
    except KeyError:
        raise ConfigError(f"unknown config key {section}.{key}") from None
    setattr(cfg, attr, _convert(section, key, raw, typ))


def load_config(
    path=None,
    overrides: tuple[str, ...] = (),
    out: str | None = None,
    seed: int | None = None,
) -> ExperimentConfig:
    """Build a config from defaults, an optional file, then overrides."""
    cfg = ExperimentConfig()
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None)
        try:
            text = Path(path).read_text()
            parser.read_string(text, source=str(path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
        for section in parser.sections():
            if section == RESULT_SECTION:
                continue  # manifests re-parse as configs; results are informational
            if section not in _SCHEMA:
                raise ConfigError(f"{path}: unknown config section [{section}]")
            for key, raw in parser.items(section):
                _assign(cfg, section, key, raw)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        section, key = dotted.split(".", 1)
        _assign(cfg, section.strip(), key.strip(), raw)
    if out is not None:
        cfg.out_dir = out
    if seed is not None:
        cfg.solver_seed = seed
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.phantom not in PHANTOM_KINDS:
        raise ConfigError(f"object.phantom: unknown kind {cfg.phantom!r}")
    if cfg.height < 8 or cfg.width < 8:
        raise ConfigError("object.height/width: must be at least 8")
    if cfg.scenario_kind not in SCENARIO_KINDS:
        raise ConfigError(f"scenario.kind: unknown kind {cfg.scenario_kind!r}")
    if not cfg.sigma > 0:
        raise ConfigError("scenario.sigma: must be positive")
    if cfg.window not in WINDOW_KINDS:
        raise ConfigError(f"scenario.window: unknown kind {cfg.window!r}")
    if not cfg.cutoff > 0:
        raise ConfigError("scenario.cutoff: must be positive")
    if cfg.noise_lambda < 0:
        raise ConfigError("noise.lambda: must be >= 0")
    if cfg.rule not in UPDATE_RULES:
        raise ConfigError(f"solver.rule: unknown rule {cfg.rule!r}")
    if cfg.max_iters < 1:
        raise ConfigError("solver.max_iters: must be >= 1")
    if cfg.snr_check_stride < 1 or cfg.record_stride < 1:
        raise ConfigError("solver strides must be >= 1")
    if cfg.patience < 0:
        raise ConfigError("solver.patience: must be >= 0")
    if not cfg.epsilon_floor > 0:
        raise ConfigError("solver.epsilon_floor: must be > 0")


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def manifest_text(cfg: ExperimentConfig, result: dict[str, str] | None = None) -> str:
    """Full config dump (re-parseable) plus an informational [result] section."""
    lines: list[str] = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (attr, _typ) in keys.items():
            lines.append(f"{key} = {_format_value(getattr(cfg, attr))}")
        lines.append("")
    if result:
        lines.append(f"[{RESULT_SECTION}]")
        for key, value in result.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def configs_equivalent(a: ExperimentConfig, b: ExperimentConfig) -> bool:
    return all(getattr(a, f.name) == getattr(b, f.name) for f in fields(ExperimentConfig))
