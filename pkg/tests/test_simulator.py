"""Block-structured Monte Carlo stream: purity, statistics, resource caps."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from cvqrng.adc import AdcConfig
from cvqrng.errors import ResourceLimitError
from cvqrng.optics import total_measurement_variance
from cvqrng.simulator import (
    BLOCK_SIZE,
    QuadratureDraws,
    SampleBatch,
    SimConfig,
    dc_level,
    draw_sample,
    empirical_variance,
    iter_sample_blocks,
    sample_block,
    simulate_batch,
)


def make_config(chain, **overrides):
    defaults = dict(
        chain=chain,
        sigma_lo_sq=2.5,
        sigma_q_sq=0.5,
        sigma_e_sq=0.1,
        sample_count=1024,
        seed=7,
    )
    defaults.update(overrides)
    return SimConfig(**defaults)


class TestSingleSample:
    def test_balanced_chain_passes_only_the_quadrature(self, balanced_chain):
        draws = QuadratureDraws(x_lo=5.0, x_s=0.3, p_s=9.0, e=0.01)
        v = draw_sample(balanced_chain, draws)
        # alpha = 0 kills x_lo, phase = 0 kills p_s
        assert v == pytest.approx(2.0 * 0.3 + 0.01, abs=1e-12)

    def test_quadrature_angle_selects_the_conjugate(self, balanced_chain):
        rotated = dataclasses.replace(balanced_chain, phase=math.pi / 2)
        draws = QuadratureDraws(x_lo=0.0, x_s=0.3, p_s=9.0, e=0.0)
        assert draw_sample(rotated, draws) == pytest.approx(2.0 * 9.0, abs=1e-12)

    def test_gain_and_power_scaling(self, balanced_chain):
        boosted = dataclasses.replace(balanced_chain, g=3.0, power=4.0)
        draws = QuadratureDraws(x_lo=0.0, x_s=1.0, p_s=0.0, e=0.0)
        assert draw_sample(boosted, draws) == pytest.approx(2 * 3 * 2 * 1.0, abs=1e-12)

    def test_imbalance_leaks_the_lo(self, fifty_chain):
        draws = QuadratureDraws(x_lo=1.0, x_s=0.0, p_s=0.0, e=0.0)
        from cvqrng.optics import imbalance_coefficients

        alpha = imbalance_coefficients(fifty_chain).alpha
        assert draw_sample(fifty_chain, draws) == pytest.approx(2 * alpha, rel=1e-12)

    def test_dc_imbalance_maps_through_alpha(self, fifty_chain, balanced_chain):
        from cvqrng.optics import imbalance_coefficients

        alpha = imbalance_coefficients(fifty_chain).alpha
        assert dc_level(fifty_chain, 2.0) == pytest.approx(2 * alpha, rel=1e-12)
        assert dc_level(balanced_chain, 2.0) == 0.0


class TestConfigValidation:
    def test_negative_variance(self, fifty_chain):
        with pytest.raises(ValueError, match="sigma_q_sq"):
            make_config(fifty_chain, sigma_q_sq=-0.5)

    def test_zero_samples(self, fifty_chain):
        with pytest.raises(ValueError, match="sample_count"):
            make_config(fifty_chain, sample_count=0)

    def test_oversized_seed(self, fifty_chain):
        with pytest.raises(ValueError, match="seed"):
            make_config(fifty_chain, seed=2**64)


class TestBlockStream:
    def test_blocks_are_pure_functions_of_seed_and_index(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=3 * BLOCK_SIZE)
        first = sample_block(cfg, 1)
        again = sample_block(cfg, 1)
        np.testing.assert_array_equal(first, again)

    def test_blocks_can_be_generated_out_of_order(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=2 * BLOCK_SIZE + 100)
        streamed = list(iter_sample_blocks(cfg))
        assert [len(b) for b in streamed] == [BLOCK_SIZE, BLOCK_SIZE, 100]
        np.testing.assert_array_equal(sample_block(cfg, 2), streamed[2])
        np.testing.assert_array_equal(sample_block(cfg, 0), streamed[0])

    def test_distinct_blocks_and_seeds_decorrelate(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=2 * BLOCK_SIZE)
        b0, b1 = sample_block(cfg, 0), sample_block(cfg, 1)
        assert not np.array_equal(b0, b1)
        reseeded = make_config(fifty_chain, sample_count=2 * BLOCK_SIZE, seed=8)
        assert not np.array_equal(sample_block(reseeded, 0), b0)

    def test_block_beyond_run_rejected(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=10)
        with pytest.raises(ValueError, match="beyond"):
            sample_block(cfg, 1)

    def test_batch_equals_stream(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=BLOCK_SIZE + 17)
        batch = simulate_batch(cfg)
        assert batch.analog.size == cfg.sample_count
        np.testing.assert_array_equal(
            batch.analog, np.concatenate(list(iter_sample_blocks(cfg)))
        )

    def test_memory_cap(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=2048)
        with pytest.raises(ResourceLimitError, match="stream"):
            simulate_batch(cfg, sample_cap=1024)


class TestStatistics:
    def test_variance_tracks_the_noise_budget(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=200_000)
        est = empirical_variance(simulate_batch(cfg).analog)
        theory = total_measurement_variance(
            fifty_chain, cfg.sigma_lo_sq, cfg.sigma_q_sq, cfg.sigma_e_sq
        ).sigma_m_sq
        assert abs(est.variance - theory) < 4.0 * est.std_error

    def test_mean_tracks_the_dc_offset(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=200_000, dc_offset=0.75)
        batch = simulate_batch(cfg)
        sigma_m = math.sqrt(empirical_variance(batch.analog).variance)
        tol = 5.0 * sigma_m / math.sqrt(cfg.sample_count)
        assert abs(float(batch.analog.mean()) - 0.75) < tol

    def test_balanced_chain_has_no_lo_contribution(self, balanced_chain):
        quiet = SimConfig(
            chain=balanced_chain,
            sigma_lo_sq=100.0,
            sigma_q_sq=0.25,
            sigma_e_sq=0.0,
            sample_count=100_000,
            seed=3,
        )
        est = empirical_variance(simulate_batch(quiet).analog)
        assert abs(est.variance - 4 * 0.25) < 4.0 * est.std_error


class TestVarianceEstimate:
    def test_unbiased_convention(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        est = empirical_variance(x)
        assert est.variance == pytest.approx(float(np.var(x, ddof=1)), abs=0.0)
        assert est.std_error == pytest.approx(
            math.sqrt(2.0 / 3.0) * est.variance, abs=0.0
        )

    def test_needs_two_samples(self):
        with pytest.raises(ValueError, match="two"):
            empirical_variance(np.array([1.0]))


class TestQuantizedBatch:
    def test_with_codes_quantizes_the_analog_trace(self, fifty_chain):
        cfg = make_config(fifty_chain, sample_count=500)
        adc = AdcConfig(n=12, range_r=16.0)
        batch = simulate_batch(cfg).with_codes(adc)
        assert batch.codes is not None
        assert batch.codes.dtype == np.uint16
        assert batch.codes.size == 500
        assert int(batch.codes.min()) >= 0 and int(batch.codes.max()) < 4096
        # analog trace is carried along unchanged
        assert batch.analog is simulate_batch(cfg).analog or np.array_equal(
            batch.analog, simulate_batch(cfg).analog
        )
