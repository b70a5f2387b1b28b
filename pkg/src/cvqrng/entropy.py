"""Min-entropy bounds for Gaussian noise sampled by a clamping ADC.

The discretized measurement follows the boundary model of the converter:
bins of width delta = R / 2^n centered at offset - R + k * delta for
k = 0 .. 2^(n+1) - 1, with the lowest and highest bins extended to -inf and
+inf by clamping.  Two candidate maxima bound the most likely outcome an
adversary with side information about the classical noise can predict:

    c1 = (erf((e_max + delta_max - R + 3 delta / 2) / sqrt(2 sigma^2)) + 1) / 2

the worst-case mass of the top clamped bin when classical offsets push the
distribution toward the boundary, and

    c2 = erf(delta / (2 sqrt(2 sigma^2)))

the mass of the central bin.  The conditional min-entropy is
-log2(max(c1, c2)).  A sampling range is appropriate when c1 <= c2, i.e.
the interior maximum dominates the clamped tail.

The practical pipeline subtracts every measured classical contribution from
the measured variance and evaluates the central-bin bound on what remains:

    sigma_q_amp^2 = sigma_m^2 - sigma_e^2 - sigma_lo_amp^2 - q_corr
    h = -log2(erf(R / (2^(n+1) sqrt(2 sigma_q_amp^2))))

where q_corr is the quantization correction of the active policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .adc import AdcConfig, QuantizationPolicy, quantization_correction
from .errors import CalibrationError

__all__ = [
    "ClassicalBound",
    "MinEntropyResult",
    "min_entropy_discrete",
    "c1_boundary",
    "c2_central",
    "conditional_min_entropy",
    "residual_quantum_variance",
    "min_entropy_from_variance",
    "practical_min_entropy",
    "brute_force_max_prob",
]


@dataclass(frozen=True)
class ClassicalBound:
    """Worst-case magnitudes of the classical excursions (V).

    e_max bounds the classical noise amplitude available to an adversary,
    delta_max the converter offset drift.
    """

    e_max: float
    delta_max: float

    def __post_init__(self) -> None:
        if self.e_max < 0.0 or self.delta_max < 0.0:
            raise ValueError("classical bounds must be nonnegative")


@dataclass(frozen=True)
class MinEntropyResult:
    """Boundary and central candidate maxima and the resulting bound (bits).

    c1_le_c2 records the appropriate-sampling-range condition: the clamped
    boundary bin must not dominate the central bin.
    """

    c1: float
    c2: float
    h_min: float
    c1_le_c2: bool


def min_entropy_discrete(probabilities: np.ndarray) -> float:
    """Min-entropy -log2(max p) of a discrete distribution.

    The input must be a nonempty vector of nonnegative masses summing to 1
    within 1e-9.
    """
    p = np.asarray(probabilities, dtype=np.float64)
    if p.size == 0:
        raise ValueError("probability vector is empty")
    if np.any(p < 0.0):
        raise ValueError("probabilities must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, expected 1 within 1e-9")
    return -math.log2(float(p.max()))


def c1_boundary(sigma_q_sq: float, bound: ClassicalBound, cfg: AdcConfig) -> float:
    """Worst-case probability of the top clamped bin.

    sigma_q_sq is the variance of the Gaussian being bounded; callers pass
    whichever variance matches their threat model (amplified quadrature
    only, or the full measured variance).
    """
    if not sigma_q_sq > 0.0:
        raise ValueError("sigma_q_sq must be positive")
    arg = bound.e_max + bound.delta_max - cfg.range_r + 1.5 * cfg.bin_width
    return 0.5 * (math.erf(arg / math.sqrt(2.0 * sigma_q_sq)) + 1.0)


def c2_central(sigma_q_sq: float, cfg: AdcConfig) -> float:
    """Probability of the central bin of a centered Gaussian."""
    if not sigma_q_sq > 0.0:
        raise ValueError("sigma_q_sq must be positive")
    return math.erf(cfg.bin_width / (2.0 * math.sqrt(2.0 * sigma_q_sq)))


def conditional_min_entropy(
    sigma_q_sq: float, bound: ClassicalBound, cfg: AdcConfig
) -> MinEntropyResult:
    """Conditional min-entropy bound -log2(max(c1, c2)) with its witnesses."""
    c1 = c1_boundary(sigma_q_sq, bound, cfg)
    c2 = c2_central(sigma_q_sq, cfg)
    h_min = -math.log2(max(c1, c2))
    return MinEntropyResult(c1=c1, c2=c2, h_min=h_min, c1_le_c2=c1 <= c2)


def residual_quantum_variance(
    sigma_m_sq: float,
    sigma_e_sq: float,
    sigma_lo_amp_sq: float,
    q_correction: float,
) -> float:
    """Measured variance minus every classical contribution (V^2).

    Raises CalibrationError when the residual is not positive: the device
    then carries no certifiable quantum noise and must not be used.
    """
    residual = sigma_m_sq - sigma_e_sq - sigma_lo_amp_sq - q_correction
    if not residual > 0.0:
        raise CalibrationError(
            "residual quadrature variance is not positive "
            f"({residual} V^2); measured noise is entirely classical"
        )
    return residual


def min_entropy_from_variance(sigma_q_amp_sq: float, cfg: AdcConfig) -> float:
    """Central-bin min-entropy (bits) of a Gaussian with the given variance."""
    if not sigma_q_amp_sq > 0.0:
        raise ValueError("sigma_q_amp_sq must be positive")
    arg = cfg.range_r / (2 ** (cfg.n + 1) * math.sqrt(2.0 * sigma_q_amp_sq))
    return -math.log2(math.erf(arg))


def practical_min_entropy(
    budget,
    cfg: AdcConfig,
    policy: QuantizationPolicy = QuantizationPolicy.TWELFTH_SQUARED,
    q_correction: float | None = None,
) -> float:
    """Practical min-entropy (bits/sample) from a measured noise budget.

    budget supplies sigma_m_sq, sigma_e_sq and sigma_lo_amp_sq.  The
    quantization correction defaults to the policy value for cfg; a
    measured correction can be passed explicitly instead.
    """
    if q_correction is None:
        q_correction = quantization_correction(cfg, policy)
    residual = residual_quantum_variance(
        budget.sigma_m_sq, budget.sigma_e_sq, budget.sigma_lo_amp_sq, q_correction
    )
    return min_entropy_from_variance(residual, cfg)


def brute_force_max_prob(sigma: float, cfg: AdcConfig) -> float:
    """Maximum bin probability by direct numerical integration.

    Integrates the zero-mean Gaussian of standard deviation sigma over
    every bin of the boundary model (centers offset - R + k * delta,
    k = 0 .. 2^(n+1) - 1, clamped tail bins extended to +-inf) with
    adaptive quadrature and returns the largest mass.  Deliberately avoids
    erf so it can serve as an independent cross-check of the closed forms.

    Error bound: each bin is integrated to absolute tolerance 1e-14 and
    bins lying entirely beyond 15 sigma are dropped; their mass is below
    1e-49 while the maximum is at least 2^-(n+1), so the result is accurate
    to better than 1e-12.
    """
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    delta = cfg.bin_width
    count = 2 * cfg.code_count
    centers = cfg.offset - cfg.range_r + delta * np.arange(count)
    lowers = centers - 0.5 * delta
    uppers = centers + 0.5 * delta
    lowers[0] = -np.inf
    uppers[-1] = np.inf

    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))

    def density(x: float) -> float:
        return norm * math.exp(-0.5 * (x / sigma) ** 2)

    window = 15.0 * sigma
    best = 0.0
    for lo, hi in zip(lowers, uppers):
        lo = max(lo, -window)
        hi = min(hi, window)
        if lo >= hi:
            continue
        mass, _ = quad(density, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
        if mass > best:
            best = mass
    return best
