"""Imbalanced homodyne detection chain and its noise budget.

A local oscillator (port 1) and the vacuum signal (port 2) interfere on a
beam splitter with power couplings t13, r14, r23, t24; the outputs hit two
photodiodes with responsivities eta1, eta2 whose photocurrents are
subtracted and amplified with transimpedance gain g.  Imbalance anywhere in
the chain leaks local-oscillator intensity noise into the difference signal.
The leakage is captured by two signed coefficients

    alpha = eta1 * t13 - eta2 * r14          (common mode)
    beta  = eta1 * sqrt(t13 * r23) + eta2 * sqrt(t24 * r14)   (differential)

and their squares a = alpha^2, b = beta^2.  The measured variance then
splits into an LO contribution, a quadrature contribution and electronic
noise:

    sigma_M^2 = 4 g^2 P (a sigma_LO^2 + b sigma_Q^2) + sigma_E^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

__all__ = [
    "OpticalChain",
    "ImbalanceCoefficients",
    "NoiseBudget",
    "imbalance_coefficients",
    "total_measurement_variance",
    "cmrr_db",
    "load_reference_splitters",
    "reference_chain",
    "REFERENCE_ETA1",
    "REFERENCE_ETA2",
]

# Photodiode responsivities (A/W) measured for the reference detector pair
# that accompanies the bundled beam-splitter data.
REFERENCE_ETA1 = 0.584
REFERENCE_ETA2 = 0.561


@dataclass(frozen=True)
class OpticalChain:
    """Beam splitter couplings plus detector and amplifier parameters.

    Couplings are power fractions in [0, 1]; a lossy splitter is allowed
    (each input may deliver less than unit total power) but never gain.
    eta1/eta2 are photodiode responsivities (A/W), g the transimpedance
    gain (V/A), power the LO power (W) and phase the LO phase (rad).
    """

    t13: float
    t24: float
    r23: float
    r14: float
    eta1: float
    eta2: float
    g: float
    power: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        for name in ("t13", "t24", "r23", "r14"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"coupling {name}={value} must lie in [0, 1]")
        if self.t13 + self.r14 > 1.0 + 1e-12:
            raise ValueError(
                f"port 1 couplings t13 + r14 = {self.t13 + self.r14} exceed 1"
            )
        if self.t24 + self.r23 > 1.0 + 1e-12:
            raise ValueError(
                f"port 2 couplings t24 + r23 = {self.t24 + self.r23} exceed 1"
            )
        for name in ("eta1", "eta2", "g"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"{name}={value} must be positive")
        if self.power < 0.0:
            raise ValueError(f"power={self.power} must be nonnegative")


@dataclass(frozen=True)
class ImbalanceCoefficients:
    """Signed imbalance coefficients and their squares."""

    alpha: float
    beta: float
    a: float
    b: float


@dataclass(frozen=True)
class NoiseBudget:
    """Variance decomposition of the difference signal (V^2).

    sigma_lo_sq / sigma_q_sq are the normalized LO-intensity and vacuum
    quadrature variances entering the chain; the primed amplified terms
    sigma_lo_amp_sq = 4 a g^2 P sigma_lo_sq and
    sigma_q_amp_sq = 4 b g^2 P sigma_q_sq are their shares of the measured
    variance, so sigma_m_sq = sigma_lo_amp_sq + sigma_q_amp_sq + sigma_e_sq.
    """

    sigma_lo_sq: float
    sigma_q_sq: float
    sigma_e_sq: float
    sigma_lo_amp_sq: float
    sigma_q_amp_sq: float
    sigma_m_sq: float

    def __post_init__(self) -> None:
        for name in (
            "sigma_lo_sq",
            "sigma_q_sq",
            "sigma_e_sq",
            "sigma_lo_amp_sq",
            "sigma_q_amp_sq",
            "sigma_m_sq",
        ):
            value = getattr(self, name)
            if value < 0.0:
                raise ValueError(f"{name}={value} must be nonnegative")
        total = self.sigma_lo_amp_sq + self.sigma_q_amp_sq + self.sigma_e_sq
        if not math.isclose(self.sigma_m_sq, total, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError(
                "sigma_m_sq must equal sigma_lo_amp_sq + sigma_q_amp_sq + "
                f"sigma_e_sq ({self.sigma_m_sq} != {total})"
            )


def imbalance_coefficients(chain: OpticalChain) -> ImbalanceCoefficients:
    """Compute alpha, beta and their squares for a detection chain.

    alpha vanishes for a perfectly balanced chain (eta1 t13 == eta2 r14)
    and the LO intensity noise then cancels in the subtraction; beta scales
    the vacuum quadrature signal that carries the randomness.
    """
    alpha = chain.eta1 * chain.t13 - chain.eta2 * chain.r14
    beta = chain.eta1 * math.sqrt(chain.t13 * chain.r23) + chain.eta2 * math.sqrt(
        chain.t24 * chain.r14
    )
    return ImbalanceCoefficients(alpha=alpha, beta=beta, a=alpha**2, b=beta**2)


def total_measurement_variance(
    chain: OpticalChain,
    sigma_lo_sq: float,
    sigma_q_sq: float,
    sigma_e_sq: float,
) -> NoiseBudget:
    """Predict the measured variance and its decomposition for a chain."""
    if sigma_lo_sq < 0.0 or sigma_q_sq < 0.0 or sigma_e_sq < 0.0:
        raise ValueError("variances must be nonnegative")
    coeff = imbalance_coefficients(chain)
    scale = 4.0 * chain.g**2 * chain.power
    sigma_lo_amp_sq = scale * coeff.a * sigma_lo_sq
    sigma_q_amp_sq = scale * coeff.b * sigma_q_sq
    return NoiseBudget(
        sigma_lo_sq=sigma_lo_sq,
        sigma_q_sq=sigma_q_sq,
        sigma_e_sq=sigma_e_sq,
        sigma_lo_amp_sq=sigma_lo_amp_sq,
        sigma_q_amp_sq=sigma_q_amp_sq,
        sigma_m_sq=sigma_lo_amp_sq + sigma_q_amp_sq + sigma_e_sq,
    )


def cmrr_db(coeff: ImbalanceCoefficients) -> float:
    """Common-mode rejection ratio 10 log10(b / a) in dB.

    Infinite for a perfectly balanced chain (a == 0).
    """
    if coeff.b < 0.0 or coeff.a < 0.0:
        raise ValueError("coefficient squares must be nonnegative")
    if coeff.a == 0.0:
        return math.inf
    return 10.0 * math.log10(coeff.b / coeff.a)


def load_reference_splitters() -> dict[str, dict[str, float]]:
    """Load the bundled beam-splitter measurements.

    Returns a mapping from the nominal coupling-ratio label to the four
    measured power fractions {t13, r14, r23, t24} (percentages in the data
    file, fractions here).
    """
    text = (
        resources.files("cvqrng.data").joinpath("beam_splitters.txt").read_text()
    )
    table: dict[str, dict[str, float]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, *values = line.split()
        if len(values) != 4:
            raise ValueError(f"malformed beam-splitter row: {line!r}")
        t13, r14, r23, t24 = (float(v) / 100.0 for v in values)
        table[label] = {"t13": t13, "r14": r14, "r23": r23, "t24": t24}
    return table


def reference_chain(
    label: str,
    g: float = 1.0,
    power: float = 1.0,
    phase: float = 0.0,
    eta1: float = REFERENCE_ETA1,
    eta2: float = REFERENCE_ETA2,
) -> OpticalChain:
    """Build an OpticalChain from a bundled splitter row and detector pair."""
    table = load_reference_splitters()
    if label not in table:
        raise KeyError(
            f"unknown splitter label {label!r}, available: {sorted(table)}"
        )
    row = table[label]
    return OpticalChain(
        t13=row["t13"],
        t24=row["t24"],
        r23=row["r23"],
        r14=row["r14"],
        eta1=eta1,
        eta2=eta2,
        g=g,
        power=power,
        phase=phase,
    )
