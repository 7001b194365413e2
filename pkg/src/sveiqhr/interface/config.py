"""Scenario configuration: JSON files and request fragments.

A scenario resolves to a full ModelParameters (baseline values for
omitted rates; delta and u2 always explicit), an initial condition
(named preset or explicit compartments), integrator settings and the
list of requested artifacts. Unknown keys are rejected everywhere so
typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..dynamics import IntegratorConfig, default_initial
from ..equilibrium import disease_free_equilibrium
from ..errors import ParseError, ValidationError
from ..model import PARAM_ORDER, ModelParameters, State
from ..strategy import ppkm_level_u2

OUTPUT_KINDS = ("trajectory", "r0", "equilibria", "sensitivity", "region", "sweep")
INITIAL_PRESETS = ("default", "dfe")

_TOP_KEYS = ("parameters", "initial", "integrator", "outputs")
_INTEGRATOR_KEYS = ("method", "step", "abs_tol", "rel_tol", "horizon", "sample_interval")
_STATE_KEYS = ("S", "V", "E", "I", "Q", "H", "R")


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParameters
    initial: State | str = "default"
    integrator: IntegratorConfig = field(
        default_factory=lambda: IntegratorConfig(horizon=365.0)
    )
    outputs: tuple = ("r0",)

    def resolve_initial(self) -> State:
        if isinstance(self.initial, State):
            return self.initial
        if self.initial == "default":
            return default_initial()
        if self.initial == "dfe":
            return disease_free_equilibrium(self.params)
        raise ValidationError("initial", f"unknown preset {self.initial!r}")


def _require_number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"must be a number, got {value!r}")
    return float(value)


def parameters_from_fragment(fragment: dict, require_u2: bool = True) -> ModelParameters:
    """Build ModelParameters from a flat dict of external names.

    Accepts "ppkm_level" (1-4) in place of an explicit u2. delta is
    always required; there is no sensible default efficacy to assume.
    """
    if not isinstance(fragment, dict):
        raise ValidationError("parameters", "must be an object of name: value pairs")
    fragment = dict(fragment)
    level = fragment.pop("ppkm_level", None)
    if level is not None:
        if "u2" in fragment:
            raise ValidationError("ppkm_level", "give either ppkm_level or u2, not both")
        fragment["u2"] = ppkm_level_u2(level)
    unknown = [k for k in fragment if k not in PARAM_ORDER]
    if unknown:
        raise ValidationError(unknown[0], "unknown parameter key")
    values = {k: _require_number(v, k) for k, v in fragment.items()}
    if "delta" not in values:
        raise ValidationError("delta", "required: choose a vaccine-efficacy scenario")
    if "u2" not in values:
        if not require_u2:
            values["u2"] = 0.0
        else:
            raise ValidationError("u2", "required: set u2 directly or via ppkm_level")
    kwargs = {("lam" if k == "lambda" else "lam_prime" if k == "lambda_prime" else k): v
              for k, v in values.items()}
    return ModelParameters(**kwargs)


def _integrator_from_dict(data: dict) -> IntegratorConfig:
    if not isinstance(data, dict):
        raise ValidationError("integrator", "must be an object")
    unknown = [k for k in data if k not in _INTEGRATOR_KEYS]
    if unknown:
        raise ValidationError(f"integrator.{unknown[0]}", "unknown integrator key")
    kwargs = {}
    for key in _INTEGRATOR_KEYS:
        if key in data:
            value = data[key]
            if key == "method":
                if not isinstance(value, str):
                    raise ValidationError("integrator.method", f"must be a string, got {value!r}")
                kwargs[key] = value
            elif value is not None:
                kwargs[key] = _require_number(value, f"integrator.{key}")
    if "horizon" not in kwargs:
        kwargs["horizon"] = 365.0
    return IntegratorConfig(**kwargs)


def _initial_from_value(value):
    if isinstance(value, str):
        if value not in INITIAL_PRESETS:
            raise ValidationError("initial", f"unknown preset {value!r}; use {INITIAL_PRESETS}")
        return value
    if isinstance(value, dict):
        unknown = [k for k in value if k not in _STATE_KEYS]
        if unknown:
            raise ValidationError(f"initial.{unknown[0]}", "unknown compartment")
        missing = [k for k in _STATE_KEYS if k not in value]
        if missing:
            raise ValidationError(f"initial.{missing[0]}", "all seven compartments are required")
        return State(**{k: _require_number(value[k], f"initial.{k}") for k in _STATE_KEYS})
    raise ValidationError("initial", f"must be a preset name or a compartment object, got {value!r}")


def config_from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ValidationError("config", "top level must be an object")
    unknown = [k for k in data if k not in _TOP_KEYS]
    if unknown:
        raise ValidationError(unknown[0], "unknown config key")
    params = parameters_from_fragment(data.get("parameters", {}))
    initial = _initial_from_value(data["initial"]) if "initial" in data else "default"
    integrator = (
        _integrator_from_dict(data["integrator"]) if "integrator" in data
        else IntegratorConfig(horizon=365.0)
    )
    outputs = data.get("outputs", ["r0"])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ValidationError("outputs", "must be a list of artifact names")
    bad = [o for o in outputs if o not in OUTPUT_KINDS]
    if bad:
        raise ValidationError("outputs", f"unknown artifact {bad[0]!r}; use {OUTPUT_KINDS}")
    return ScenarioConfig(params=params, initial=initial, integrator=integrator,
                          outputs=tuple(outputs))


def load_config(path: str) -> ScenarioConfig:
    """Parse a JSON scenario file; ParseError carries line/column."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    return config_from_dict(data)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    data = {
        "parameters": cfg.params.as_dict(),
        "initial": cfg.initial if isinstance(cfg.initial, str) else cfg.initial.as_dict(),
        "integrator": {
            "method": cfg.integrator.method,
            "horizon": cfg.integrator.horizon,
            "sample_interval": cfg.integrator.sample_interval,
        },
        "outputs": list(cfg.outputs),
    }
    if cfg.integrator.step is not None:
        data["integrator"]["step"] = cfg.integrator.step
    if cfg.integrator.abs_tol is not None:
        data["integrator"]["abs_tol"] = cfg.integrator.abs_tol
    data["integrator"]["rel_tol"] = cfg.integrator.rel_tol
    return data


def emit_config(cfg: ScenarioConfig, path: str | None = None):
    """Serialize a config so that load_config(emit_config(cfg)) == cfg;
    floats round-trip exactly through repr."""
    text = json.dumps(config_to_dict(cfg), indent=2)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return None


@dataclass(frozen=True)
class RunManifest:
    """Record of one CLI run: echoed config, version, timestamp, the
    files written and how long the run took."""

    config: dict
    version: str
    timestamp: str
    outputs: tuple
    duration_seconds: float

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "version": self.version,
            "timestamp": self.timestamp,
            "outputs": list(self.outputs),
            "duration_seconds": self.duration_seconds,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def make_manifest(config_echo: dict, outputs, started: float) -> RunManifest:
    from .. import __version__

    return RunManifest(
        config=config_echo,
        version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        outputs=tuple(str(o) for o in outputs),
        duration_seconds=time.monotonic() - started,
    )
