"""Imbalance coefficients, noise budget and the bundled splitter data."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from cvqrng.optics import (
    NoiseBudget,
    OpticalChain,
    cmrr_db,
    imbalance_coefficients,
    load_reference_splitters,
    reference_chain,
    total_measurement_variance,
    REFERENCE_ETA1,
    REFERENCE_ETA2,
)


def symmetric_lossless(t: float) -> OpticalChain:
    return OpticalChain(
        t13=t, t24=t, r23=1.0 - t, r14=1.0 - t, eta1=1.0, eta2=1.0, g=1.0, power=1.0
    )


class TestImbalanceCoefficients:
    def test_symmetric_lossless_closed_form(self):
        # a = (2t - 1)^2 and b = 4 t (1 - t) for the unit-detector chain
        for t in (0.5, 0.6, 0.75, 0.9):
            coeff = imbalance_coefficients(symmetric_lossless(t))
            assert coeff.a == pytest.approx((2 * t - 1) ** 2, abs=1e-15)
            assert coeff.b == pytest.approx(4 * t * (1 - t), abs=1e-15)

    def test_reference_fifty_fifty_row(self):
        # independent arithmetic on the bundled 50/50 measurements
        alpha = REFERENCE_ETA1 * 0.4878 - REFERENCE_ETA2 * 0.4771
        beta = REFERENCE_ETA1 * math.sqrt(0.4878 * 0.4893) + REFERENCE_ETA2 * math.sqrt(
            0.4852 * 0.4771
        )
        coeff = imbalance_coefficients(reference_chain("50/50"))
        assert coeff.alpha == pytest.approx(alpha, abs=1e-15)
        assert coeff.beta == pytest.approx(beta, abs=1e-15)
        # the strong common-mode suppression of a near-balanced chain
        assert coeff.a == pytest.approx(2.97e-4, rel=5e-3)
        assert coeff.b == pytest.approx(0.308, rel=5e-3)

    def test_squares_are_squares(self):
        coeff = imbalance_coefficients(reference_chain("60/40"))
        assert coeff.a == coeff.alpha**2
        assert coeff.b == coeff.beta**2

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_lossless_symmetric_sums_to_one(self, t):
        coeff = imbalance_coefficients(symmetric_lossless(t))
        assert coeff.a + coeff.b == pytest.approx(1.0, abs=1e-12)

    def test_balanced_chain_cancels_common_mode(self, balanced_chain):
        coeff = imbalance_coefficients(balanced_chain)
        assert coeff.alpha == 0.0
        assert coeff.a == 0.0
        assert coeff.beta == pytest.approx(1.0, abs=1e-15)


class TestNoiseBudget:
    def test_ideal_balanced_reduces_to_shot_noise(self, balanced_chain):
        budget = total_measurement_variance(balanced_chain, 5.0, 0.5, 0.1)
        assert budget.sigma_lo_amp_sq == 0.0
        assert budget.sigma_q_amp_sq == pytest.approx(4 * 0.5, abs=1e-12)
        assert budget.sigma_m_sq == pytest.approx(4 * 0.5 + 0.1, abs=1e-12)

    def test_decomposition_identity_is_exact(self, fifty_chain):
        budget = total_measurement_variance(fifty_chain, 8.0, 0.5, 0.05)
        assert budget.sigma_m_sq == (
            budget.sigma_lo_amp_sq + budget.sigma_q_amp_sq + budget.sigma_e_sq
        )

    @given(
        st.floats(min_value=0.0, max_value=1e3),
        st.floats(min_value=0.0, max_value=1e3),
        st.floats(min_value=0.0, max_value=1e3),
    )
    def test_identity_holds_across_variances(self, lo, q, e):
        chain = reference_chain("70/30", g=2.0, power=0.5)
        budget = total_measurement_variance(chain, lo, q, e)
        total = budget.sigma_lo_amp_sq + budget.sigma_q_amp_sq + budget.sigma_e_sq
        assert budget.sigma_m_sq == pytest.approx(total, rel=1e-12)

    def test_amplified_terms_scale_with_gain_and_power(self, fifty_chain):
        import dataclasses

        base = total_measurement_variance(fifty_chain, 2.0, 0.5, 0.0)
        boosted_chain = dataclasses.replace(fifty_chain, g=3.0, power=2.0)
        boosted = total_measurement_variance(boosted_chain, 2.0, 0.5, 0.0)
        scale = 3.0**2 * 2.0
        assert boosted.sigma_lo_amp_sq == pytest.approx(
            scale * base.sigma_lo_amp_sq, rel=1e-12
        )
        assert boosted.sigma_q_amp_sq == pytest.approx(
            scale * base.sigma_q_amp_sq, rel=1e-12
        )

    def test_inconsistent_budget_rejected(self):
        with pytest.raises(ValueError, match="sigma_m_sq"):
            NoiseBudget(
                sigma_lo_sq=1.0,
                sigma_q_sq=1.0,
                sigma_e_sq=0.1,
                sigma_lo_amp_sq=0.2,
                sigma_q_amp_sq=0.3,
                sigma_m_sq=1.0,
            )

    def test_negative_variance_rejected(self, fifty_chain):
        with pytest.raises(ValueError):
            total_measurement_variance(fifty_chain, -1.0, 0.5, 0.1)


class TestCmrr:
    def test_reference_value(self):
        from cvqrng.optics import ImbalanceCoefficients

        coeff = ImbalanceCoefficients(alpha=0.01, beta=math.sqrt(0.99), a=1e-4, b=0.99)
        assert cmrr_db(coeff) == pytest.approx(10 * math.log10(0.99 / 1e-4), abs=1e-12)
        assert cmrr_db(coeff) == pytest.approx(39.96, abs=5e-3)

    def test_perfect_balance_is_infinite(self, balanced_chain):
        assert cmrr_db(imbalance_coefficients(balanced_chain)) == math.inf

    def test_reference_chains_are_ordered_by_balance(self):
        values = [
            cmrr_db(imbalance_coefficients(reference_chain(label)))
            for label in ("50/50", "60/40", "70/30")
        ]
        assert values[0] > values[1] > values[2]


class TestOpticalChainValidation:
    def test_coupling_out_of_range(self):
        with pytest.raises(ValueError, match="t13"):
            OpticalChain(
                t13=1.2, t24=0.5, r23=0.5, r14=0.5, eta1=1.0, eta2=1.0, g=1.0, power=1.0
            )

    def test_gain_on_a_port_rejected(self):
        with pytest.raises(ValueError, match="port 1"):
            OpticalChain(
                t13=0.8, t24=0.5, r23=0.5, r14=0.4, eta1=1.0, eta2=1.0, g=1.0, power=1.0
            )

    def test_lossy_splitter_allowed(self):
        OpticalChain(
            t13=0.45, t24=0.45, r23=0.4, r14=0.4, eta1=0.6, eta2=0.6, g=1.0, power=1.0
        )

    @pytest.mark.parametrize("field", ["eta1", "eta2", "g"])
    def test_nonpositive_detector_parameters_rejected(self, field):
        kwargs = dict(
            t13=0.5, t24=0.5, r23=0.5, r14=0.5, eta1=1.0, eta2=1.0, g=1.0, power=1.0
        )
        kwargs[field] = 0.0
        with pytest.raises(ValueError, match=field):
            OpticalChain(**kwargs)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError, match="power"):
            OpticalChain(
                t13=0.5, t24=0.5, r23=0.5, r14=0.5, eta1=1.0, eta2=1.0, g=1.0, power=-1.0
            )


class TestReferenceData:
    def test_all_rows_present_and_physical(self):
        table = load_reference_splitters()
        assert set(table) == {"50/50", "60/40", "70/30"}
        for row in table.values():
            assert 0.0 < min(row.values()) and max(row.values()) < 1.0
            assert row["t13"] + row["r14"] <= 1.0
            assert row["t24"] + row["r23"] <= 1.0

    def test_values_match_the_published_percentages(self):
        table = load_reference_splitters()
        assert table["50/50"] == pytest.approx(
            {"t13": 0.4878, "r14": 0.4771, "r23": 0.4893, "t24": 0.4852}, rel=1e-12
        )
        assert table["60/40"] == pytest.approx(
            {"t13": 0.6125, "r14": 0.3826, "r23": 0.3844, "t24": 0.6138}, rel=1e-12
        )
        assert table["70/30"] == pytest.approx(
            {"t13": 0.6982, "r14": 0.3017, "r23": 0.2817, "t24": 0.6349}, rel=1e-12
        )

    def test_unknown_label_rejected(self):
        with pytest.raises(KeyError, match="90/10"):
            reference_chain("90/10")
