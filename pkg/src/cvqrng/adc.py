"""Mid-tread ADC model with offset, clamping and quantization-error policies.

An n-bit converter with sampling range R covers a window of total width R
centered on the offset voltage, split into 2^n bins of width
delta = R / 2^n.  Bin k is centered at offset + (k - 2^(n-1)) * delta and
covers the half-open interval [center - delta/2, center + delta/2); inputs
beyond the window clamp to the first or last code.  The offset therefore
lands exactly on the center of code 2^(n-1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AdcConfig",
    "QuantizationPolicy",
    "quantize",
    "quantize_array",
    "quantization_error_variance",
    "quantization_correction",
]


class QuantizationPolicy(enum.Enum):
    """Convention for the quantization-error variance of one measurement.

    TWELFTH_SQUARED uses (delta/12)^2 per measured variance; the entropy
    budget then subtracts one such term for each of the three measured
    variances it combines, 3 * (delta/12)^2 in total.  STANDARD uses the
    textbook uniform-quantizer variance delta^2 / 12 once.
    """

    TWELFTH_SQUARED = "twelfth-squared"
    STANDARD = "standard"


@dataclass(frozen=True)
class AdcConfig:
    """Converter bit depth n, sampling range R (V) and offset (V)."""

    n: int
    range_r: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not 1 <= self.n <= 16:
            raise ValueError(f"bit depth n={self.n} must be an integer in [1, 16]")
        if not self.range_r > 0.0:
            raise ValueError(f"range_r={self.range_r} must be positive")
        if not abs(self.offset) < self.range_r:
            raise ValueError(
                f"offset={self.offset} must satisfy |offset| < range_r={self.range_r}"
            )

    @property
    def bin_width(self) -> float:
        return self.range_r / 2**self.n

    @property
    def code_count(self) -> int:
        return 2**self.n


def quantize(v: float, cfg: AdcConfig) -> int:
    """Map an analog voltage to its ADC code, clamping out-of-window inputs."""
    half_codes = cfg.code_count // 2
    k = math.floor((v - cfg.offset) / cfg.bin_width + 0.5) + half_codes
    return min(max(k, 0), cfg.code_count - 1)


def quantize_array(v: np.ndarray, cfg: AdcConfig) -> np.ndarray:
    """Vectorized quantize; returns codes as uint16."""
    half_codes = cfg.code_count // 2
    k = np.floor((np.asarray(v, dtype=np.float64) - cfg.offset) / cfg.bin_width + 0.5)
    k = np.clip(k + half_codes, 0, cfg.code_count - 1)
    return k.astype(np.uint16)


def quantization_error_variance(cfg: AdcConfig, policy: QuantizationPolicy) -> float:
    """Quantization-error variance attributed to a single measured variance."""
    delta = cfg.bin_width
    if policy is QuantizationPolicy.TWELFTH_SQUARED:
        return (delta / 12.0) ** 2
    if policy is QuantizationPolicy.STANDARD:
        return delta**2 / 12.0
    raise ValueError(f"unknown quantization policy {policy!r}")


def quantization_correction(cfg: AdcConfig, policy: QuantizationPolicy) -> float:
    """Total quantization term subtracted in the practical entropy budget.

    Under TWELFTH_SQUARED the budget combines three measured variances and
    subtracts one (delta/12)^2 term for each; under STANDARD the single
    textbook term delta^2 / 12 is subtracted.
    """
    if policy is QuantizationPolicy.TWELFTH_SQUARED:
        return 3.0 * quantization_error_variance(cfg, policy)
    return quantization_error_variance(cfg, policy)
