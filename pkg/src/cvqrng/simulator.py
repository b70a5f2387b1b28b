"""Monte Carlo model of the homodyne difference signal.

One sample of the amplified difference voltage is

    v = 2 g sqrt(P) (alpha x_lo + beta (x_s cos phi + p_s sin phi))
        + g alpha P_dc + e

with x_lo the LO intensity fluctuation, (x_s, p_s) the vacuum quadrature
pair, e the electronic noise and P_dc a DC power imbalance that maps onto
the converter offset.  All draws are Gaussian and zero mean, so the batch
variance follows the optics noise budget exactly.

Generation is blocked: block j of a run draws from a counter-based stream
keyed by (seed, j), so any subset of blocks can be produced independently,
in any order or in parallel, and always yields the same values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .adc import AdcConfig, quantize_array
from .errors import ResourceLimitError
from .optics import OpticalChain, imbalance_coefficients

__all__ = [
    "BLOCK_SIZE",
    "DEFAULT_SAMPLE_CAP",
    "QuadratureDraws",
    "SimConfig",
    "SampleBatch",
    "VarianceEstimate",
    "draw_sample",
    "dc_level",
    "sample_block",
    "iter_sample_blocks",
    "simulate_batch",
    "empirical_variance",
]

# Samples per substream block; fixed so that results never depend on how a
# run is split up.
BLOCK_SIZE = 1 << 16

# simulate_batch refuses larger runs and points callers at the block
# iterator instead.
DEFAULT_SAMPLE_CAP = 1 << 24


@dataclass(frozen=True)
class QuadratureDraws:
    """One draw of the four noise processes entering a sample."""

    x_lo: float
    x_s: float
    p_s: float
    e: float


@dataclass(frozen=True)
class SimConfig:
    """Detection chain, noise variances (V^2-normalized), DC offset (V),
    sample count and RNG seed for one simulated acquisition."""

    chain: OpticalChain
    sigma_lo_sq: float
    sigma_q_sq: float
    sigma_e_sq: float
    dc_offset: float = 0.0
    sample_count: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("sigma_lo_sq", "sigma_q_sq", "sigma_e_sq"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.sample_count < 1:
            raise ValueError(f"sample_count={self.sample_count} must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class SampleBatch:
    """Simulated analog voltages with optional quantized codes."""

    analog: np.ndarray
    config: SimConfig
    codes: np.ndarray | None = None

    def with_codes(self, adc_cfg: AdcConfig) -> "SampleBatch":
        return SampleBatch(
            analog=self.analog,
            config=self.config,
            codes=quantize_array(self.analog, adc_cfg),
        )


@dataclass(frozen=True)
class VarianceEstimate:
    """Unbiased sample variance and its standard error (Gaussian input)."""

    variance: float
    std_error: float


def draw_sample(
    chain: OpticalChain, draws: QuadratureDraws, p_dc: float = 0.0
) -> float:
    """Difference voltage for one draw of the noise processes."""
    coeff = imbalance_coefficients(chain)
    quad = draws.x_s * math.cos(chain.phase) + draws.p_s * math.sin(chain.phase)
    ac = 2.0 * chain.g * math.sqrt(chain.power) * (
        coeff.alpha * draws.x_lo + coeff.beta * quad
    )
    return ac + dc_level(chain, p_dc) + draws.e


def dc_level(chain: OpticalChain, p_dc: float) -> float:
    """DC voltage produced by a common-mode power imbalance p_dc (W)."""
    return chain.g * imbalance_coefficients(chain).alpha * p_dc


def sample_block(cfg: SimConfig, block_index: int) -> np.ndarray:
    """Analog voltages of one BLOCK_SIZE-aligned block of a run.

    Pure in (cfg, block_index): the block's substream is keyed by
    (seed, block_index) alone, so blocks can be generated in any order.
    """
    start = block_index * BLOCK_SIZE
    if start >= cfg.sample_count:
        raise ValueError(f"block {block_index} is beyond the configured run")
    m = min(BLOCK_SIZE, cfg.sample_count - start)
    rng = np.random.Generator(
        np.random.Philox(key=np.array([cfg.seed, block_index], dtype=np.uint64))
    )
    # Fixed draw order: x_lo, x_s, p_s, e.
    x_lo = rng.standard_normal(m) * math.sqrt(cfg.sigma_lo_sq)
    x_s = rng.standard_normal(m) * math.sqrt(cfg.sigma_q_sq)
    p_s = rng.standard_normal(m) * math.sqrt(cfg.sigma_q_sq)
    e = rng.standard_normal(m) * math.sqrt(cfg.sigma_e_sq)

    chain = cfg.chain
    coeff = imbalance_coefficients(chain)
    quad = x_s * math.cos(chain.phase) + p_s * math.sin(chain.phase)
    ac = 2.0 * chain.g * math.sqrt(chain.power) * (coeff.alpha * x_lo + coeff.beta * quad)
    return ac + e + cfg.dc_offset


def iter_sample_blocks(cfg: SimConfig) -> Iterator[np.ndarray]:
    """Stream the run block by block without holding it in memory."""
    n_blocks = -(-cfg.sample_count // BLOCK_SIZE)
    for j in range(n_blocks):
        yield sample_block(cfg, j)


def simulate_batch(cfg: SimConfig, sample_cap: int = DEFAULT_SAMPLE_CAP) -> SampleBatch:
    """Simulate a full run into memory.

    Refuses runs beyond sample_cap; stream those with iter_sample_blocks.
    """
    if cfg.sample_count > sample_cap:
        raise ResourceLimitError(
            f"sample_count={cfg.sample_count} exceeds the in-memory cap "
            f"{sample_cap}; use iter_sample_blocks to stream"
        )
    analog = np.concatenate(list(iter_sample_blocks(cfg)))
    return SampleBatch(analog=analog, config=cfg)


def empirical_variance(values: np.ndarray) -> VarianceEstimate:
    """Unbiased variance with standard error sqrt(2 / (N - 1)) * variance."""
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two samples to estimate a variance")
    variance = float(x.var(ddof=1))
    return VarianceEstimate(
        variance=variance,
        std_error=math.sqrt(2.0 / (x.size - 1)) * variance,
    )
