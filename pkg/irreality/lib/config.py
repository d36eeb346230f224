from __future__ import annotations
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from .errors import InvalidArgumentError
from .utils import repo_root


@dataclass(frozen=True)
class Tolerances:
    """Comparison tolerances used by the verification checks."""
    state: float = 1e-12
    normalization: float = 1e-10
    analytic: float = 1e-9
    endpoint: float = 1e-5
    uncertainty: float = 1e-9
    property: float = 1e-10
    asymptotic_ratio: float = 0.05
    phase: float = 1e-12
    vanishing: float = 1e-12

    def override(self, value: float) -> Tolerances:
        """Return a copy with every tolerance forced to ``value``."""
        if not value > 0:
            raise InvalidArgumentError(f"tolerance must be positive, got {value}")
        return replace(self, **{f.name: float(value) for f in fields(self)})


@dataclass(frozen=True)
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    sweep_steps: int = 201
    verify_steps: int = 21
    random_draws: int = 1000
    shannon_draws: int = 100
    seed: int = 20190501
    phi: float = 0.0


def default_config_path() -> Path:
    return repo_root() / "config" / "defaults.yml"


def load_settings(path: Path | None = None) -> Settings:
    """Read settings from YAML; a missing default file yields the built-in defaults."""
    cfg = Path(path) if path is not None else default_config_path()
    if not cfg.exists():
        if path is not None:
            raise InvalidArgumentError(f"config file not found: {cfg}")
        return Settings()
    yml = yaml.safe_load(cfg.read_text(encoding="utf-8")) or {}
    if not isinstance(yml, dict):
        raise InvalidArgumentError(f"config file must hold a mapping: {cfg}")

    tol_yml = yml.get("tolerances", {}) or {}
    known = {f.name for f in fields(Tolerances)}
    unknown = set(tol_yml) - known
    if unknown:
        raise InvalidArgumentError(f"unknown tolerance keys in {cfg}: {sorted(unknown)}")
    tolerances = Tolerances(**{k: float(v) for k, v in tol_yml.items()})

    sweep = yml.get("sweep", {}) or {}
    verify = yml.get("verify", {}) or {}
    defaults = Settings()
    return Settings(
        tolerances=tolerances,
        sweep_steps=int(sweep.get("steps", defaults.sweep_steps)),
        phi=float(sweep.get("phi", defaults.phi)),
        verify_steps=int(verify.get("steps", defaults.verify_steps)),
        random_draws=int(verify.get("random_draws", defaults.random_draws)),
        shannon_draws=int(verify.get("shannon_draws", defaults.shannon_draws)),
        seed=int(verify.get("seed", defaults.seed)),
    )
