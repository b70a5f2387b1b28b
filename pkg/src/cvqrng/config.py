"""Workbench configuration: one TOML file, strictly validated.

Sections (all optional; each command states what it needs):

[chain]       t13, t24, r23, r14 (power fractions), eta1, eta2 (A/W),
              gain (V/A), power (W), phase (rad, default 0)
[adc]         bits, range_volts, offset_volts (default 0),
              quantization_policy ("twelfth-squared" | "standard")
[simulation]  sigma_lo_sq, sigma_q_sq, sigma_e_sq (V^2-normalized),
              dc_offset (V, default 0), sample_count, seed
[monitor]     nominal_ratio (default 0.1), multiple (default 9.85)
[extractor]   input_bits, output_bits, bits_per_sample (optional),
              h_min_per_sample (bits, optional; enables the ratio guard)
[sweep]       transmittances, powers (W), splitters (labels into the
              bundled beam-splitter table)

Unknown sections or keys are rejected, and every value is re-validated
against the owning type's constraints on load.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .adc import AdcConfig, QuantizationPolicy
from .calibration import MonitorTap
from .errors import ConfigError
from .optics import OpticalChain
from .simulator import SimConfig

__all__ = [
    "ExtractorSettings",
    "SweepSettings",
    "WorkbenchConfig",
    "load_config",
]

_MISSING = object()


@dataclass(frozen=True)
class ExtractorSettings:
    """Extractor dimensions and the calibrated entropy claim for the guard."""

    input_bits: int
    output_bits: int
    bits_per_sample: int | None = None
    h_min_per_sample: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.output_bits < self.input_bits:
            raise ValueError(
                "need 0 < output_bits < input_bits, got "
                f"output_bits={self.output_bits}, input_bits={self.input_bits}"
            )
        if self.bits_per_sample is not None and self.bits_per_sample < 1:
            raise ValueError("bits_per_sample must be >= 1")
        if self.h_min_per_sample is not None and self.h_min_per_sample <= 0.0:
            raise ValueError("h_min_per_sample must be positive")


@dataclass(frozen=True)
class SweepSettings:
    transmittances: tuple[float, ...] = (0.5, 0.6, 0.7, 0.8, 0.9)
    powers: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)
    splitters: tuple[str, ...] = ("50/50", "60/40", "70/30")

    def __post_init__(self) -> None:
        if not self.transmittances or not self.powers or not self.splitters:
            raise ValueError("sweep value lists must be nonempty")


@dataclass(frozen=True)
class WorkbenchConfig:
    chain: OpticalChain | None = None
    adc: AdcConfig | None = None
    policy: QuantizationPolicy = QuantizationPolicy.TWELFTH_SQUARED
    simulation: SimConfig | None = None
    monitor: MonitorTap | None = None
    extractor: ExtractorSettings | None = None
    sweep: SweepSettings = SweepSettings()


def _pop(section: dict, name: str, key: str, kind: str, default=_MISSING):
    if key not in section:
        if default is _MISSING:
            raise ConfigError(f"[{name}] is missing required key {key!r}")
        return default
    value = section.pop(key)
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"[{name}] {key} must be a number, got {value!r}")
        return float(value)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"[{name}] {key} must be an integer, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"[{name}] {key} must be a string, got {value!r}")
        return value
    if kind == "list[float]":
        if not isinstance(value, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
        ):
            raise ConfigError(f"[{name}] {key} must be a list of numbers")
        return tuple(float(v) for v in value)
    if kind == "list[str]":
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise ConfigError(f"[{name}] {key} must be a list of strings")
        return tuple(value)
    raise AssertionError(kind)


def _reject_unknown(section: dict, name: str) -> None:
    if section:
        raise ConfigError(f"unknown key(s) in [{name}]: {sorted(section)}")


def _build(name: str, builder):
    # Re-raise the owning type's constraint message with the section named.
    try:
        return builder()
    except ValueError as exc:
        raise ConfigError(f"[{name}] violates a constraint: {exc}") from exc


def load_config(path: str | Path) -> WorkbenchConfig:
    """Load and validate a workbench TOML file."""
    with open(path, "rb") as handle:
        try:
            data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path} is not valid TOML: {exc}") from exc

    known = {"chain", "adc", "simulation", "monitor", "extractor", "sweep"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown section(s): {sorted(unknown)}")
    for name in data:
        if not isinstance(data[name], dict):
            raise ConfigError(f"[{name}] must be a section, not a value")

    chain = None
    if "chain" in data:
        sec = dict(data["chain"])
        kwargs = {
            "t13": _pop(sec, "chain", "t13", "float"),
            "t24": _pop(sec, "chain", "t24", "float"),
            "r23": _pop(sec, "chain", "r23", "float"),
            "r14": _pop(sec, "chain", "r14", "float"),
            "eta1": _pop(sec, "chain", "eta1", "float"),
            "eta2": _pop(sec, "chain", "eta2", "float"),
            "g": _pop(sec, "chain", "gain", "float"),
            "power": _pop(sec, "chain", "power", "float"),
            "phase": _pop(sec, "chain", "phase", "float", 0.0),
        }
        _reject_unknown(sec, "chain")
        chain = _build("chain", lambda: OpticalChain(**kwargs))

    adc_cfg = None
    policy = QuantizationPolicy.TWELFTH_SQUARED
    if "adc" in data:
        sec = dict(data["adc"])
        bits = _pop(sec, "adc", "bits", "int")
        range_volts = _pop(sec, "adc", "range_volts", "float")
        offset = _pop(sec, "adc", "offset_volts", "float", 0.0)
        policy_name = _pop(
            sec, "adc", "quantization_policy", "str", QuantizationPolicy.TWELFTH_SQUARED.value
        )
        _reject_unknown(sec, "adc")
        try:
            policy = QuantizationPolicy(policy_name)
        except ValueError:
            choices = [p.value for p in QuantizationPolicy]
            raise ConfigError(
                f"[adc] quantization_policy must be one of {choices}, got {policy_name!r}"
            ) from None
        adc_cfg = _build(
            "adc", lambda: AdcConfig(n=bits, range_r=range_volts, offset=offset)
        )

    simulation = None
    if "simulation" in data:
        if chain is None:
            raise ConfigError("[simulation] requires a [chain] section")
        sec = dict(data["simulation"])
        kwargs = {
            "sigma_lo_sq": _pop(sec, "simulation", "sigma_lo_sq", "float"),
            "sigma_q_sq": _pop(sec, "simulation", "sigma_q_sq", "float"),
            "sigma_e_sq": _pop(sec, "simulation", "sigma_e_sq", "float"),
            "dc_offset": _pop(sec, "simulation", "dc_offset", "float", 0.0),
            "sample_count": _pop(sec, "simulation", "sample_count", "int", 1),
            "seed": _pop(sec, "simulation", "seed", "int", 0),
        }
        _reject_unknown(sec, "simulation")
        simulation = _build("simulation", lambda: SimConfig(chain=chain, **kwargs))

    monitor = None
    if "monitor" in data:
        sec = dict(data["monitor"])
        ratio = _pop(sec, "monitor", "nominal_ratio", "float", 0.1)
        multiple = _pop(sec, "monitor", "multiple", "float", 9.85)
        _reject_unknown(sec, "monitor")
        monitor = _build(
            "monitor", lambda: MonitorTap(nominal_ratio=ratio, multiple_k=multiple)
        )

    extractor = None
    if "extractor" in data:
        sec = dict(data["extractor"])
        kwargs = {
            "input_bits": _pop(sec, "extractor", "input_bits", "int"),
            "output_bits": _pop(sec, "extractor", "output_bits", "int"),
            "bits_per_sample": _pop(sec, "extractor", "bits_per_sample", "int", None),
            "h_min_per_sample": _pop(
                sec, "extractor", "h_min_per_sample", "float", None
            ),
        }
        _reject_unknown(sec, "extractor")
        extractor = _build("extractor", lambda: ExtractorSettings(**kwargs))

    sweep = SweepSettings()
    if "sweep" in data:
        sec = dict(data["sweep"])
        defaults = SweepSettings()
        kwargs = {
            "transmittances": _pop(
                sec, "sweep", "transmittances", "list[float]", defaults.transmittances
            ),
            "powers": _pop(sec, "sweep", "powers", "list[float]", defaults.powers),
            "splitters": _pop(
                sec, "sweep", "splitters", "list[str]", defaults.splitters
            ),
        }
        _reject_unknown(sec, "sweep")
        sweep = _build("sweep", lambda: SweepSettings(**kwargs))

    return WorkbenchConfig(
        chain=chain,
        adc=adc_cfg,
        policy=policy,
        simulation=simulation,
        monitor=monitor,
        extractor=extractor,
        sweep=sweep,
    )
