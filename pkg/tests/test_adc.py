"""Quantizer geometry, clamping and the two quantization-noise policies."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cvqrng.adc import (
    AdcConfig,
    QuantizationPolicy,
    quantization_correction,
    quantization_error_variance,
    quantize,
    quantize_array,
)


class TestConfig:
    def test_derived_quantities(self):
        cfg = AdcConfig(n=12, range_r=16.0)
        assert cfg.code_count == 4096
        assert cfg.bin_width == pytest.approx(16.0 / 4096, abs=0.0)

    @pytest.mark.parametrize("n", [0, 17, -3])
    def test_resolution_bounds(self, n):
        with pytest.raises(ValueError, match="n"):
            AdcConfig(n=n, range_r=1.0)

    def test_non_integral_resolution_rejected(self):
        with pytest.raises(ValueError):
            AdcConfig(n=7.5, range_r=1.0)

    def test_nonpositive_range_rejected(self):
        with pytest.raises(ValueError, match="range"):
            AdcConfig(n=8, range_r=0.0)

    def test_offset_must_stay_inside_range(self):
        with pytest.raises(ValueError, match="offset"):
            AdcConfig(n=8, range_r=1.0, offset=1.0)
        AdcConfig(n=8, range_r=1.0, offset=0.999)


class TestQuantize:
    # hand-enumerated n=2, R=1 ladder: bins centred at -0.25, 0, 0.25 within
    # the window, width 0.25, right edge excluded
    CASES = [
        (0.13, 3),
        (0.124, 2),
        (0.125, 3),
        (0.0, 2),
        (-0.125, 2),
        (-0.1251, 1),
        (-0.126, 1),
        (0.375, 3),
        (10.0, 3),
        (-0.6, 0),
        (-10.0, 0),
    ]

    @pytest.mark.parametrize("volts,code", CASES)
    def test_two_bit_ladder(self, volts, code):
        cfg = AdcConfig(n=2, range_r=1.0)
        assert quantize(volts, cfg) == code

    def test_bin_width_input_maps_to_centre_code(self):
        for n in (2, 8, 12):
            cfg = AdcConfig(n=n, range_r=2.0)
            assert quantize(cfg.bin_width, cfg) == 2 ** (n - 1) + 1
            assert quantize(0.0, cfg) == 2 ** (n - 1)

    def test_saturation_at_both_rails(self):
        cfg = AdcConfig(n=8, range_r=4.0)
        assert quantize(10 * cfg.range_r, cfg) == 255
        assert quantize(-10 * cfg.range_r, cfg) == 0

    def test_offset_shifts_the_window(self):
        base = AdcConfig(n=8, range_r=4.0)
        shifted = AdcConfig(n=8, range_r=4.0, offset=0.5)
        for v in np.linspace(-1.5, 1.5, 23):
            assert quantize(v + 0.5, shifted) == quantize(v, base)

    def test_array_agrees_with_scalar(self):
        cfg = AdcConfig(n=4, range_r=2.0, offset=-0.1)
        volts = np.linspace(-1.5, 1.5, 401)
        codes = quantize_array(volts, cfg)
        assert codes.dtype == np.uint16
        for v, c in zip(volts, codes):
            assert quantize(float(v), cfg) == c

    @given(
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-50.0, max_value=50.0),
    )
    def test_monotone_in_the_input(self, v1, v2):
        cfg = AdcConfig(n=10, range_r=3.0)
        lo, hi = sorted((v1, v2))
        assert quantize(lo, cfg) <= quantize(hi, cfg)

    @given(st.integers(min_value=0, max_value=2**10 - 1))
    def test_bin_centres_round_trip(self, code):
        cfg = AdcConfig(n=10, range_r=5.0, offset=0.25)
        centre = cfg.offset + (code - 2**9) * cfg.bin_width
        assert quantize(centre, cfg) == code


class TestQuantizationNoise:
    def test_per_term_variance_for_a_fine_adc(self):
        # delta = 2 * 4.17e-4, so (delta / 12)^2 = 4.8e-9 ... the coarse
        # divide-by-twelve convention gives a visibly different number
        cfg = AdcConfig(n=1, range_r=2 * 4.17e-4)
        per_term = quantization_error_variance(cfg, QuantizationPolicy.TWELFTH_SQUARED)
        assert per_term == pytest.approx((cfg.bin_width / 12) ** 2, abs=0.0)
        assert per_term == pytest.approx(1.21e-9, rel=5e-3)
        std_term = quantization_error_variance(cfg, QuantizationPolicy.STANDARD)
        assert std_term == pytest.approx(cfg.bin_width**2 / 12, abs=0.0)

    def test_policy_totals(self):
        cfg = AdcConfig(n=1, range_r=2 * 4.17e-4)
        tw = quantization_correction(cfg, QuantizationPolicy.TWELFTH_SQUARED)
        std = quantization_correction(cfg, QuantizationPolicy.STANDARD)
        assert tw == pytest.approx(3 * 1.21e-9, rel=5e-3)
        assert std == pytest.approx(cfg.bin_width**2 / 12, abs=0.0)
        assert std == pytest.approx(1.449e-8, rel=5e-3)

    def test_policy_values(self):
        assert QuantizationPolicy("twelfth-squared") is QuantizationPolicy.TWELFTH_SQUARED
        assert QuantizationPolicy("standard") is QuantizationPolicy.STANDARD

    @given(st.integers(min_value=1, max_value=16))
    def test_correction_shrinks_with_resolution(self, n):
        cfg = AdcConfig(n=n, range_r=1.0)
        tw = quantization_correction(cfg, QuantizationPolicy.TWELFTH_SQUARED)
        std = quantization_correction(cfg, QuantizationPolicy.STANDARD)
        assert tw > 0 and std > 0
        assert tw < std  # 3/144 < 1/12
