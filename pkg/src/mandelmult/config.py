"""Run configuration: flat key = value files with strict key checking."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import NumericsConfig
from .errors import ConfigError

_NUMERIC_KEYS = {
    "newton_tolerance": float,
    "max_newton_steps": int,
    "escape_radius": float,
    "green_refine_depth": int,
    "mc_samples": int,
    "rng_seed": int,
}

_TOP_KEYS = {
    "lambda_star": float,
    "output_dir": str,
    "emit_csv": bool,
    "emit_json": bool,
    "emit_svg": bool,
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    lambda_star: float = 2.0
    output_dir: str = "."
    emit_csv: bool = True
    emit_json: bool = True
    emit_svg: bool = True

    def with_seed(self, seed: int) -> "RunConfig":
        num = NumericsConfig(
            newton_tolerance=self.numerics.newton_tolerance,
            max_newton_steps=self.numerics.max_newton_steps,
            escape_radius=self.numerics.escape_radius,
            green_refine_depth=self.numerics.green_refine_depth,
            mc_samples=self.numerics.mc_samples,
            rng_seed=seed,
        )
        return RunConfig(
            numerics=num,
            lambda_star=self.lambda_star,
            output_dir=self.output_dir,
            emit_csv=self.emit_csv,
            emit_json=self.emit_json,
            emit_svg=self.emit_svg,
        )


def load_config(path: str | Path) -> RunConfig:
    """Parse a flat `key = value` file; unknown keys are rejected outright."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"{path}:{line_no}: duplicate key {key!r}")
        values[key] = val

    num_kwargs = {}
    top_kwargs = {}
    for key, val in values.items():
        if key in _NUMERIC_KEYS:
            num_kwargs[key] = _NUMERIC_KEYS[key](val)
        elif key in _TOP_KEYS:
            caster = _TOP_KEYS[key]
            top_kwargs[key] = _parse_bool(val) if caster is bool else caster(val)
        else:
            raise ConfigError(f"{path}: unknown key {key!r}")
    try:
        numerics = NumericsConfig(**num_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(numerics=numerics, **top_kwargs)
