import numpy as np
import pytest

from conftest import make_link
from secbeam import (
    ChannelRealization,
    DesignResult,
    HybridCombiner,
    HybridPrecoder,
    LinkNoise,
    TransmitConfig,
    UlaGeometry,
    an_precoder,
    bob_rate_with_an,
    design_unknown_csi,
    eve_capacity_from_matrices,
    eve_rate_with_an,
    hybrid_no_pls,
    min_power_for_qos,
    mutual_info_rate,
    rate_from_matrices,
)

NOISE = LinkNoise(1.0)


def scalar_design():
    one = np.array([[1.0 + 0j]])
    return DesignResult(
        precoder=HybridPrecoder(one, one),
        combiner=HybridCombiner(one, one),
        effective_channel=one,
        selected_indices=((0, 0),),
    )


def scalar_channel():
    geo = UlaGeometry(1)
    return ChannelRealization.from_paths([1.0], [0.0], [0.0], geo, geo, 1.0)


class TestMinPowerForQos:
    def test_zero_qos_needs_zero_power(self):
        result = min_power_for_qos(scalar_channel(), scalar_design(), NOISE, 0.0, 5.0)
        assert result == (0.0, True)

    def test_boundary_qos_returns_cap(self):
        ch, design = scalar_channel(), scalar_design()
        cap = 4.0
        qos_at_cap = rate_from_matrices(ch.matrix, design.precoder.matrix, design.combiner.matrix, 1.0, cap)
        power, feasible = min_power_for_qos(ch, design, NOISE, qos_at_cap, cap)
        assert feasible
        assert power == pytest.approx(cap, rel=1e-5)

    def test_scalar_closed_form(self):
        # log2(1 + P) = 1  =>  P = 1.
        power, feasible = min_power_for_qos(scalar_channel(), scalar_design(), NOISE, 1.0, 10.0)
        assert feasible
        assert power == pytest.approx(1.0, rel=1e-5)

    def test_infeasible_flagged_not_raised(self):
        power, feasible = min_power_for_qos(scalar_channel(), scalar_design(), NOISE, 50.0, 2.0)
        assert not feasible
        assert power == 2.0

    def test_monotone_in_qos(self):
        link = make_link(seed=30, rf_chains=4, streams=2)
        design = hybrid_no_pls(link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx)
        powers = [
            min_power_for_qos(link.h_bob, design, NOISE, q, 100.0).power
            for q in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)
        ]
        assert all(a <= b + 1e-12 for a, b in zip(powers, powers[1:]))

    def test_returned_power_meets_qos(self):
        for i in range(10):
            link = make_link(seed=1000 + i, rf_chains=4, streams=2)
            design = hybrid_no_pls(link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx)
            qos = 2.0
            power, feasible = min_power_for_qos(link.h_bob, design, NOISE, qos, 100.0)
            assert feasible
            achieved = rate_from_matrices(
                link.h_bob.matrix, design.precoder.matrix, design.combiner.matrix, 1.0, power
            )
            assert qos <= achieved <= qos + 1e-4

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            min_power_for_qos(scalar_channel(), scalar_design(), NOISE, -1.0, 1.0)
        with pytest.raises(ValueError):
            min_power_for_qos(scalar_channel(), scalar_design(), NOISE, 1.0, 1.0, tolerance=0.0)


class TestAnPrecoder:
    def test_diagonal_effective_channel(self):
        tx = TransmitConfig(1.0, 2, 4)
        h_eff = np.diag([3.0, 2.0, 1.0, 0.5]).astype(complex)
        f_an = an_precoder(h_eff, np.eye(4, dtype=complex), tx)
        # Spans coordinates 3 and 4 (up to phase), scaled to unit Frobenius norm.
        np.testing.assert_allclose(np.abs(f_an[:2, :]), 0.0, atol=1e-12)
        assert np.linalg.norm(f_an) == pytest.approx(1.0, rel=1e-12)
        w_bb = np.eye(4, dtype=complex)[:, :2]
        np.testing.assert_allclose(w_bb.conj().T @ h_eff @ f_an, 0.0, atol=1e-14)

    def test_nulling_against_design_combiner(self):
        for i in range(10):
            link = make_link(seed=1100 + i, rf_chains=4, streams=2)
            design = hybrid_no_pls(link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx)
            f_an = an_precoder(design.effective_channel, design.precoder.analog, link.tx)
            leak = design.combiner.digital.conj().T @ design.effective_channel @ f_an
            assert np.linalg.norm(leak) <= 1e-9 * np.linalg.norm(design.effective_channel)
            cascade = np.linalg.norm(design.precoder.analog @ f_an)
            assert cascade == pytest.approx(1.0, rel=1e-9)

    def test_no_spare_rf_chains_rejected(self):
        tx = TransmitConfig(1.0, 4, 4)
        with pytest.raises(ValueError):
            an_precoder(np.eye(4, dtype=complex), np.eye(4, dtype=complex), tx)


class TestDesignUnknownCsi:
    def test_zero_qos_sends_everything_as_noise(self):
        link = make_link(seed=31, rf_chains=4, streams=2, power=2.0)
        result = design_unknown_csi(
            link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, 0.0
        )
        assert result.signal_power == 0.0
        assert result.an_power == 2.0
        assert result.feasible

    def test_unreachable_qos_flagged(self):
        link = make_link(seed=32, rf_chains=4, streams=2, power=1.0)
        result = design_unknown_csi(
            link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, 1000.0
        )
        assert not result.feasible
        assert result.signal_power == 1.0
        assert result.an_power == 0.0

    def test_power_ledger(self):
        for i, qos in enumerate((0.5, 1.0, 2.0, 4.0)):
            link = make_link(seed=1200 + i, rf_chains=4, streams=2, power=10.0)
            result = design_unknown_csi(
                link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, qos
            )
            assert result.signal_power + result.an_power == pytest.approx(10.0, abs=1e-12)
            assert result.an_power == max(10.0 - result.signal_power, 0.0)
            cascade = np.linalg.norm(result.base.precoder.analog @ result.an_digital_precoder)
            assert cascade == pytest.approx(1.0, rel=1e-9)

    def test_qos_met_within_bisection_tolerance(self):
        for i in range(5):
            link = make_link(seed=1300 + i, rf_chains=4, streams=2, power=50.0)
            qos = 3.0
            result = design_unknown_csi(
                link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, qos
            )
            assert result.feasible
            achieved = mutual_info_rate(link.h_bob, result.base.precoder, result.base.combiner, NOISE,
                                         TransmitConfig(result.signal_power, 2, 4))
            assert qos <= achieved <= qos + 1e-4

    def test_requires_spare_rf_chains(self):
        link = make_link(seed=33, rf_chains=2, streams=2)
        with pytest.raises(ValueError):
            design_unknown_csi(
                link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, 1.0
            )


class TestAnRates:
    def test_bob_rate_preserved_under_an(self):
        # The noise burst must be invisible at the legitimate combiner output.
        for i in range(10):
            link = make_link(
                seed=1400 + i, num_tx=16, num_rx=16, bits=4, rf_chains=8, streams=4, power=10.0
            )
            result = design_unknown_csi(
                link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, 2.0
            )
            with_an = bob_rate_with_an(link.h_bob, result, NOISE)
            without = rate_from_matrices(
                link.h_bob.matrix,
                result.base.precoder.matrix,
                result.base.combiner.matrix,
                1.0,
                result.signal_power,
            )
            assert with_an == pytest.approx(without, rel=1e-6)

    def test_an_reduces_eavesdropper_rate_at_equal_total_power(self):
        # Monte-Carlo mean comparison on shared-scatterer ensembles.
        rng = np.random.default_rng(77)
        from secbeam import draw_scatterer_pool, realize_channel, build_codebook

        geo = UlaGeometry(16)
        cb = build_codebook(geo, 5)
        power = 10.0
        tx = TransmitConfig(power, 4, 8)
        with_an, without_an = [], []
        for _ in range(200):
            pool = draw_scatterer_pool(rng, 20, (3, 8))
            h_bob = realize_channel(pool, "bob", geo, geo, 1.0, rng)
            h_eve = realize_channel(pool, "eve", geo, geo, 1.0, rng)
            result = design_unknown_csi(h_bob, cb, cb, tx, NOISE, 2.0)
            with_an.append(eve_rate_with_an(h_eve, result, NOISE))
            without_an.append(
                eve_capacity_from_matrices(h_eve.matrix, result.base.precoder.matrix, 1.0, power)
            )
        assert np.mean(with_an) < np.mean(without_an)

    def test_all_noise_split_gives_zero_rates(self):
        link = make_link(seed=34, rf_chains=4, streams=2, power=2.0)
        result = design_unknown_csi(
            link.h_bob, link.precoder_codebook, link.combiner_codebook, link.tx, NOISE, 0.0
        )
        assert bob_rate_with_an(link.h_bob, result, NOISE) == 0.0
        assert eve_rate_with_an(link.h_eve, result, NOISE) == 0.0
