"""Calibration of the entropy budget from monitored measurements.

A tap on the local oscillator diverts a small power fraction to a monitor
photodiode; the LO intensity-noise variance is the measured monitor
variance scaled by a calibrated multiple (ideally (1 - ratio) / ratio for
a lossless tap).  Combining the monitored LO variance with the measured
total and electronic-noise variances yields the practical min-entropy, and
comparing against the naive budget that ignores LO noise quantifies how
many bits per sample an LO-aware adversary could otherwise predict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adc import AdcConfig, QuantizationPolicy, quantization_correction
from .entropy import (
    ClassicalBound,
    c1_boundary,
    c2_central,
    min_entropy_from_variance,
    practical_min_entropy,
    residual_quantum_variance,
)
from .errors import CalibrationError
from .optics import NoiseBudget, OpticalChain, cmrr_db, imbalance_coefficients

__all__ = [
    "MonitorTap",
    "MeasuredVariances",
    "CalibrationReport",
    "lo_variance_from_monitor",
    "calibrate",
    "report_to_text",
    "report_from_text",
    "sweep_transmittance",
    "sweep_power",
    "sweep_cmrr",
    "TRANSMITTANCE_SWEEP_COLUMNS",
    "POWER_SWEEP_COLUMNS",
    "CMRR_SWEEP_COLUMNS",
]


@dataclass(frozen=True)
class MonitorTap:
    """LO monitor tap: nominal diverted power fraction and the calibrated
    multiple that converts monitor variance to LO variance."""

    nominal_ratio: float = 0.1
    multiple_k: float = 9.85

    def __post_init__(self) -> None:
        if not 0.0 < self.nominal_ratio < 1.0:
            raise ValueError(
                f"nominal_ratio={self.nominal_ratio} must lie strictly in (0, 1)"
            )
        if not self.multiple_k > 0.0:
            raise ValueError(f"multiple_k={self.multiple_k} must be positive")

    @classmethod
    def ideal(cls, ratio: float) -> "MonitorTap":
        """Lossless tap: a ratio r monitor sees r of the power, the main
        path (1 - r), so the variance multiple is (1 - r) / r."""
        return cls(nominal_ratio=ratio, multiple_k=(1.0 - ratio) / ratio)


@dataclass(frozen=True)
class MeasuredVariances:
    """Measured inputs to a calibration run (V^2)."""

    sigma_m_sq: float
    sigma_e_sq: float
    sigma_mon_sq: float

    def __post_init__(self) -> None:
        for name in ("sigma_m_sq", "sigma_e_sq", "sigma_mon_sq"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class CalibrationReport:
    """Outcome of a calibration run.

    h_with_monitoring subtracts the monitored LO contribution from the
    budget; h_without_monitoring is the naive figure that trusts the LO to
    be quiet.  Their gap is the per-sample advantage handed to an adversary
    who watches the LO.  c1_le_c2 records the appropriate-sampling-range
    condition evaluated on the certified quadrature variance.
    """

    sigma_lo_sq: float
    budget: NoiseBudget
    h_with_monitoring: float
    h_without_monitoring: float
    cmrr_db: float
    c1_le_c2: bool


def lo_variance_from_monitor(sigma_mon_sq: float, tap: MonitorTap) -> float:
    """LO intensity-noise variance inferred from the monitor variance."""
    if sigma_mon_sq < 0.0:
        raise ValueError("sigma_mon_sq must be nonnegative")
    return tap.multiple_k * sigma_mon_sq


def calibrate(
    measured: MeasuredVariances,
    chain: OpticalChain,
    tap: MonitorTap,
    cfg: AdcConfig,
    policy: QuantizationPolicy = QuantizationPolicy.TWELFTH_SQUARED,
    q_correction: float | None = None,
    bound: ClassicalBound = ClassicalBound(0.0, 0.0),
) -> CalibrationReport:
    """Derive the full entropy report from measured variances.

    The quantization correction defaults to the policy value for cfg; a
    measured correction can be supplied explicitly.  Raises
    CalibrationError when the budget leaves no positive quadrature
    variance.
    """
    sigma_lo_sq = lo_variance_from_monitor(measured.sigma_mon_sq, tap)
    coeff = imbalance_coefficients(chain)
    scale = 4.0 * chain.g**2 * chain.power
    sigma_lo_amp_sq = scale * coeff.a * sigma_lo_sq

    sigma_q_amp_sq = measured.sigma_m_sq - measured.sigma_e_sq - sigma_lo_amp_sq
    if not sigma_q_amp_sq > 0.0:
        raise CalibrationError(
            "monitored LO and electronic noise exhaust the measured variance "
            f"(residual {sigma_q_amp_sq} V^2)"
        )
    budget = NoiseBudget(
        sigma_lo_sq=sigma_lo_sq,
        sigma_q_sq=sigma_q_amp_sq / (scale * coeff.b) if coeff.b > 0.0 else 0.0,
        sigma_e_sq=measured.sigma_e_sq,
        sigma_lo_amp_sq=sigma_lo_amp_sq,
        sigma_q_amp_sq=sigma_q_amp_sq,
        sigma_m_sq=measured.sigma_m_sq,
    )

    if q_correction is None:
        q_correction = quantization_correction(cfg, policy)
    h_with = practical_min_entropy(budget, cfg, policy, q_correction)
    naive_residual = residual_quantum_variance(
        measured.sigma_m_sq, measured.sigma_e_sq, 0.0, q_correction
    )
    h_without = min_entropy_from_variance(naive_residual, cfg)

    certified = residual_quantum_variance(
        measured.sigma_m_sq, measured.sigma_e_sq, sigma_lo_amp_sq, q_correction
    )
    flag = c1_boundary(certified, bound, cfg) <= c2_central(certified, cfg)

    return CalibrationReport(
        sigma_lo_sq=sigma_lo_sq,
        budget=budget,
        h_with_monitoring=h_with,
        h_without_monitoring=h_without,
        cmrr_db=cmrr_db(coeff),
        c1_le_c2=flag,
    )


# ----- report serialization (flat key = value text) -----

_REPORT_FIELDS = (
    "sigma_lo_sq",
    "budget.sigma_lo_sq",
    "budget.sigma_q_sq",
    "budget.sigma_e_sq",
    "budget.sigma_lo_amp_sq",
    "budget.sigma_q_amp_sq",
    "budget.sigma_m_sq",
    "h_with_monitoring",
    "h_without_monitoring",
    "cmrr_db",
    "c1_le_c2",
)


def report_to_text(report: CalibrationReport) -> str:
    """Serialize a report as flat key = value lines."""
    values = {
        "sigma_lo_sq": repr(report.sigma_lo_sq),
        "budget.sigma_lo_sq": repr(report.budget.sigma_lo_sq),
        "budget.sigma_q_sq": repr(report.budget.sigma_q_sq),
        "budget.sigma_e_sq": repr(report.budget.sigma_e_sq),
        "budget.sigma_lo_amp_sq": repr(report.budget.sigma_lo_amp_sq),
        "budget.sigma_q_amp_sq": repr(report.budget.sigma_q_amp_sq),
        "budget.sigma_m_sq": repr(report.budget.sigma_m_sq),
        "h_with_monitoring": repr(report.h_with_monitoring),
        "h_without_monitoring": repr(report.h_without_monitoring),
        "cmrr_db": repr(report.cmrr_db),
        "c1_le_c2": "true" if report.c1_le_c2 else "false",
    }
    return "".join(f"{key} = {values[key]}\n" for key in _REPORT_FIELDS)


def report_from_text(text: str) -> CalibrationReport:
    """Parse a report written by report_to_text."""
    values: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    missing = [k for k in _REPORT_FIELDS if k not in values]
    if missing:
        raise ValueError(f"report is missing fields: {missing}")
    budget = NoiseBudget(
        sigma_lo_sq=float(values["budget.sigma_lo_sq"]),
        sigma_q_sq=float(values["budget.sigma_q_sq"]),
        sigma_e_sq=float(values["budget.sigma_e_sq"]),
        sigma_lo_amp_sq=float(values["budget.sigma_lo_amp_sq"]),
        sigma_q_amp_sq=float(values["budget.sigma_q_amp_sq"]),
        sigma_m_sq=float(values["budget.sigma_m_sq"]),
    )
    return CalibrationReport(
        sigma_lo_sq=float(values["sigma_lo_sq"]),
        budget=budget,
        h_with_monitoring=float(values["h_with_monitoring"]),
        h_without_monitoring=float(values["h_without_monitoring"]),
        cmrr_db=float(values["cmrr_db"]),
        c1_le_c2=values["c1_le_c2"] == "true",
    )


# ----- parameter sweeps -----

TRANSMITTANCE_SWEEP_COLUMNS = (
    "t",
    "a",
    "b",
    "sigma_lo_amp_sq[V^2]",
    "sigma_q_amp_sq[V^2]",
    "sigma_m_sq[V^2]",
)

POWER_SWEEP_COLUMNS = ("power[W]", "sigma_m_sq[V^2]")

CMRR_SWEEP_COLUMNS = (
    "cmrr[dB]",
    "classical_fraction",
    "h_with_monitoring[bits]",
    "h_without_monitoring[bits]",
)


def _symmetric_lossless_chain(t: float, g: float, power: float) -> OpticalChain:
    # Unit-efficiency detectors on a lossless splitter with t13 = t24 = t.
    return OpticalChain(
        t13=t, t24=t, r23=1.0 - t, r14=1.0 - t, eta1=1.0, eta2=1.0, g=g, power=power
    )


def sweep_transmittance(
    t_values,
    sigma_lo_sq: float,
    sigma_q_sq: float,
    g: float = 1.0,
    power: float = 1.0,
    sigma_e_sq: float = 0.0,
) -> list[tuple[float, float, float, float, float, float]]:
    """Noise budget versus splitter transmittance for the lossless
    symmetric chain (unit detectors, t13 = t24 = t, r14 = r23 = 1 - t),
    where a = (2t - 1)^2 and b = 4 t (1 - t)."""
    rows = []
    for t in t_values:
        chain = _symmetric_lossless_chain(float(t), g, power)
        coeff = imbalance_coefficients(chain)
        scale = 4.0 * g**2 * power
        lo_amp = scale * coeff.a * sigma_lo_sq
        q_amp = scale * coeff.b * sigma_q_sq
        rows.append(
            (float(t), coeff.a, coeff.b, lo_amp, q_amp, lo_amp + q_amp + sigma_e_sq)
        )
    return rows


def sweep_power(
    p_values,
    chain: OpticalChain,
    sigma_lo_sq: float,
    sigma_q_sq: float,
    sigma_e_sq: float,
) -> list[tuple[float, float]]:
    """Measured variance versus LO power; affine with intercept sigma_e_sq
    and slope 4 g^2 (a sigma_lo_sq + b sigma_q_sq)."""
    coeff = imbalance_coefficients(chain)
    rows = []
    for p in p_values:
        if p < 0.0:
            raise ValueError("power must be nonnegative")
        sigma_m_sq = (
            4.0
            * chain.g**2
            * float(p)
            * (coeff.a * sigma_lo_sq + coeff.b * sigma_q_sq)
            + sigma_e_sq
        )
        rows.append((float(p), sigma_m_sq))
    return rows


def sweep_cmrr(
    chains,
    sigma_lo_sq: float,
    sigma_q_sq: float,
    sigma_e_sq: float,
    cfg: AdcConfig,
    policy: QuantizationPolicy = QuantizationPolicy.TWELFTH_SQUARED,
) -> list[tuple[float, float, float, float]]:
    """Entropy penalty of LO noise versus detection-chain CMRR.

    Each row holds the chain's CMRR, the classical fraction
    sigma_lo_amp_sq / sigma_m_sq, and the min-entropy with and without LO
    monitoring; the widening gap at low CMRR is the point of the exercise.
    """
    q_corr = quantization_correction(cfg, policy)
    rows = []
    for chain in chains:
        coeff = imbalance_coefficients(chain)
        scale = 4.0 * chain.g**2 * chain.power
        lo_amp = scale * coeff.a * sigma_lo_sq
        q_amp = scale * coeff.b * sigma_q_sq
        sigma_m_sq = lo_amp + q_amp + sigma_e_sq
        h_with = min_entropy_from_variance(
            residual_quantum_variance(sigma_m_sq, sigma_e_sq, lo_amp, q_corr), cfg
        )
        h_without = min_entropy_from_variance(
            residual_quantum_variance(sigma_m_sq, sigma_e_sq, 0.0, q_corr), cfg
        )
        rows.append((cmrr_db(coeff), lo_amp / sigma_m_sq, h_with, h_without))
    return rows
