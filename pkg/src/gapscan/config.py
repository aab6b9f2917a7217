"""Config parsing for the CLI: INI-style sections, strict unknown-key rejection.

Physical parameters are mandatory; only numerical/analysis policy fields have
defaults, and every applied default is recorded so reports can echo it.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .evolution import DEFAULT_DT_NS, DEFAULT_RENORM_TOLERANCE, StepPolicy
from .model import ModelParams
from .protocol import SweepGrid

OUTPUT_DIR_ENV = "GAPSCAN_OUTDIR"
FALLBACK_OUTPUT_DIR = "gapscan_out"


@dataclass(frozen=True)
class SpectrumConfig:
    """Analysis-policy knobs for the transform and peak extraction (GHz)."""

    nu_max_ghz: float
    nu_step_ghz: float
    dc_exclusion_ghz: float
    threshold_rel: float
    min_separation_ghz: float
    match_tolerance_ghz: float

    def __post_init__(self):
        if self.nu_max_ghz <= 0 or self.nu_step_ghz <= 0:
            raise ValueError("nu_max_ghz and nu_step_ghz must be > 0")
        if self.nu_step_ghz >= self.nu_max_ghz:
            raise ValueError("nu_step_ghz must be smaller than nu_max_ghz")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated experiment description (one or several ramp durations)."""

    params: ModelParams
    anneal_ns_list: tuple[float, ...]
    grid: SweepGrid
    policy: StepPolicy
    spectrum: SpectrumConfig
    output_dir: str
    applied_defaults: tuple[str, ...] = field(default=(), compare=False)


_SECTIONS = {
    "model": {"num_qubits", "driver_amps_ghz", "qubit_freqs_ghz", "zz_coupling_ghz", "flipflop_coupling_ghz"},
    "schedule": {"anneal_ns"},
    "grid": {"t_min_ns", "t_max_ns", "num_samples"},
    "policy": {"dt_ns", "renorm_tolerance"},
    "spectrum": {
        "nu_max_ghz",
        "nu_step_ghz",
        "dc_exclusion_ghz",
        "threshold_rel",
        "min_separation_ghz",
        "match_tolerance_ghz",
    },
    "output": {"dir"},
}
_MANDATORY = {
    "model": _SECTIONS["model"],
    "schedule": {"anneal_ns"},
    "grid": _SECTIONS["grid"],
}


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r} as a number") from None


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r} as an integer") from None


def _parse_float_list(raw: str, where: str) -> tuple[float, ...]:
    items = [piece for chunk in raw.split(",") for piece in chunk.split()]
    if not items:
        raise ConfigError(f"{where}: empty value")
    return tuple(_parse_float(item, where) for item in items)


def load_config(path: str | Path, output_override: str | None = None) -> ExperimentConfig:
    """Parse and validate a config file; see from_mapping for the rules."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    mapping = {section: dict(parser.items(section)) for section in parser.sections()}
    return from_mapping(mapping, output_override=output_override)


def from_mapping(
    mapping: dict[str, dict[str, object]], output_override: str | None = None
) -> ExperimentConfig:
    """Validate a nested section/key mapping into an ExperimentConfig.

    Unknown sections or keys are rejected; missing physical parameters are
    errors; policy/spectrum defaults are applied and recorded.
    """
    raw = {
        section: {key: str(value) for key, value in entries.items()}
        for section, entries in mapping.items()
    }
    for section, entries in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in entries:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    for section, keys in _MANDATORY.items():
        if section not in raw:
            raise ConfigError(f"missing mandatory section [{section}]")
        for key in sorted(keys - set(raw[section])):
            raise ConfigError(f"missing mandatory key {key!r} in section [{section}]")

    applied: list[str] = []

    def opt_float(section: str, key: str, default: float) -> float:
        value = raw.get(section, {}).get(key)
        if value is None:
            applied.append(f"{section}.{key} = {default!r}")
            return default
        return _parse_float(value, f"[{section}] {key}")

    model = raw["model"]
    where = "[model]"
    try:
        params = ModelParams(
            num_qubits=_parse_int(model["num_qubits"], f"{where} num_qubits"),
            driver_amps=_parse_float_list(model["driver_amps_ghz"], f"{where} driver_amps_ghz"),
            qubit_freqs=_parse_float_list(model["qubit_freqs_ghz"], f"{where} qubit_freqs_ghz"),
            zz_coupling=_parse_float(model["zz_coupling_ghz"], f"{where} zz_coupling_ghz"),
            flipflop_coupling=_parse_float(model["flipflop_coupling_ghz"], f"{where} flipflop_coupling_ghz"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc

    anneal_list = _parse_float_list(raw["schedule"]["anneal_ns"], "[schedule] anneal_ns")
    if any(t <= 0 for t in anneal_list):
        raise ConfigError("[schedule] anneal_ns: all values must be > 0")

    where = "[grid]"
    try:
        grid = SweepGrid(
            t_min_ns=_parse_float(raw["grid"]["t_min_ns"], f"{where} t_min_ns"),
            t_max_ns=_parse_float(raw["grid"]["t_max_ns"], f"{where} t_max_ns"),
            num_samples=_parse_int(raw["grid"]["num_samples"], f"{where} num_samples"),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc

    where = "[policy]"
    try:
        policy = StepPolicy(
            dt_ns=opt_float("policy", "dt_ns", DEFAULT_DT_NS),
            renorm_tolerance=opt_float("policy", "renorm_tolerance", DEFAULT_RENORM_TOLERANCE),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc

    resolution = 1.0 / (grid.t_max_ns - grid.t_min_ns)
    where = "[spectrum]"
    try:
        spectrum = SpectrumConfig(
            nu_max_ghz=opt_float("spectrum", "nu_max_ghz", 5.0),
            nu_step_ghz=opt_float("spectrum", "nu_step_ghz", 0.001),
            dc_exclusion_ghz=opt_float("spectrum", "dc_exclusion_ghz", 3.0 * resolution),
            threshold_rel=opt_float("spectrum", "threshold_rel", 0.1),
            min_separation_ghz=opt_float("spectrum", "min_separation_ghz", 5.0 * resolution),
            match_tolerance_ghz=opt_float("spectrum", "match_tolerance_ghz", resolution),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if not 0 < spectrum.threshold_rel <= 1:
        raise ConfigError("[spectrum] threshold_rel must lie in (0, 1]")
    if spectrum.dc_exclusion_ghz < 0 or spectrum.min_separation_ghz < 0:
        raise ConfigError("[spectrum] dc_exclusion_ghz and min_separation_ghz must be >= 0")
    if spectrum.match_tolerance_ghz <= 0:
        raise ConfigError("[spectrum] match_tolerance_ghz must be > 0")

    if output_override is not None:
        output_dir = output_override
    else:
        output_dir = raw.get("output", {}).get("dir") or os.environ.get(OUTPUT_DIR_ENV)
        if output_dir is None:
            output_dir = FALLBACK_OUTPUT_DIR
            applied.append(f"output.dir = {FALLBACK_OUTPUT_DIR}")

    return ExperimentConfig(
        params=params,
        anneal_ns_list=anneal_list,
        grid=grid,
        policy=policy,
        spectrum=spectrum,
        output_dir=str(output_dir),
        applied_defaults=tuple(applied),
    )


def echo_mapping(config: ExperimentConfig) -> dict[str, dict[str, object]]:
    """Effective-value mapping; feeding it back to from_mapping reproduces
    an identical config (defaults already materialized, floats via repr)."""
    return {
        "model": {
            "num_qubits": config.params.num_qubits,
            "driver_amps_ghz": ", ".join(repr(x) for x in config.params.driver_amps),
            "qubit_freqs_ghz": ", ".join(repr(x) for x in config.params.qubit_freqs),
            "zz_coupling_ghz": repr(config.params.zz_coupling),
            "flipflop_coupling_ghz": repr(config.params.flipflop_coupling),
        },
        "schedule": {"anneal_ns": ", ".join(repr(t) for t in config.anneal_ns_list)},
        "grid": {
            "t_min_ns": repr(config.grid.t_min_ns),
            "t_max_ns": repr(config.grid.t_max_ns),
            "num_samples": config.grid.num_samples,
        },
        "policy": {
            "dt_ns": repr(config.policy.dt_ns),
            "renorm_tolerance": repr(config.policy.renorm_tolerance),
        },
        "spectrum": {
            name: repr(getattr(config.spectrum, name))
            for name in (f.name for f in fields(SpectrumConfig))
        },
        "output": {"dir": config.output_dir},
    }
