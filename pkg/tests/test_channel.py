import numpy as np
import pytest

from secbeam import (
    ChannelRealization,
    Scatterer,
    ScattererPool,
    UlaGeometry,
    array_response,
    draw_scatterer_pool,
    realize_channel,
)


def brute_force_matrix(gains, aods, aoas, geo_tx, geo_rx, path_loss):
    """Per-path outer-product assembly, independent of the library's vectorized path."""
    h = np.zeros((geo_rx.num_antennas, geo_tx.num_antennas), dtype=complex)
    scale = np.sqrt(geo_tx.num_antennas * geo_rx.num_antennas / path_loss)
    for gain, aod, aoa in zip(gains, aods, aoas):
        h += scale * gain * np.outer(array_response(geo_rx, aoa), array_response(geo_tx, aod).conj())
    return h


class TestArrayResponse:
    def test_zero_angle_is_uniform(self):
        vec = array_response(UlaGeometry(4), 0.0)
        np.testing.assert_allclose(vec, 0.5 * np.ones(4), atol=1e-15)

    def test_single_antenna(self):
        np.testing.assert_allclose(array_response(UlaGeometry(1), 1.234), [1.0], atol=1e-15)

    def test_broadside_alternation(self):
        vec = array_response(UlaGeometry(4), np.pi / 2)
        np.testing.assert_allclose(vec, 0.5 * np.array([1, -1, 1, -1]), atol=1e-12)

    def test_unit_norm_and_constant_magnitude(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(1, 65))
            vec = array_response(UlaGeometry(n), rng.uniform(0, 2 * np.pi))
            assert abs(np.linalg.norm(vec) - 1.0) < 1e-12
            mags = np.abs(vec)
            assert np.max(mags) - np.min(mags) < 1e-12

    def test_geometry_validation(self):
        with pytest.raises(ValueError):
            UlaGeometry(0)
        with pytest.raises(ValueError):
            UlaGeometry(4, element_spacing=0.0)


class TestScattererPool:
    def test_path_counts_within_range(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            pool = draw_scatterer_pool(rng, 20, (3, 8))
            assert len(pool.scatterers) == 20
            assert 3 <= len(pool.bob_paths) <= 8
            assert 3 <= len(pool.eve_paths) <= 8

    def test_forced_full_overlap(self):
        pool = draw_scatterer_pool(np.random.default_rng(1), 1, (1, 1))
        assert pool.bob_paths == pool.eve_paths == (0,)
        assert pool.shared_indices == (0,)

    def test_seeded_determinism(self):
        a = draw_scatterer_pool(np.random.default_rng(7), 20, (3, 8))
        b = draw_scatterer_pool(np.random.default_rng(7), 20, (3, 8))
        assert a == b

    def test_invalid_range_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            draw_scatterer_pool(rng, 5, (3, 8))
        with pytest.raises(ValueError):
            draw_scatterer_pool(rng, 5, (4, 3))
        with pytest.raises(ValueError):
            draw_scatterer_pool(rng, 5, (0, 3))

    def test_pool_validation(self):
        sc = (Scatterer(0.1, 0.2, 0.3),)
        with pytest.raises(ValueError):
            ScattererPool(sc, bob_paths=(), eve_paths=(0,))
        with pytest.raises(ValueError):
            ScattererPool(sc, bob_paths=(0, 0), eve_paths=(0,))
        with pytest.raises(ValueError):
            ScattererPool(sc, bob_paths=(1,), eve_paths=(0,))
        with pytest.raises(ValueError):
            Scatterer(-0.1, 0.2, 0.3)


class TestChannelRealization:
    def test_scalar_single_path(self):
        geo = UlaGeometry(1)
        ch = ChannelRealization.from_paths([1.0], [0.3], [1.1], geo, geo, 1.0)
        np.testing.assert_allclose(ch.matrix, [[1.0]], atol=1e-15)

    def test_zero_gain_path_contributes_nothing(self):
        geo = UlaGeometry(4)
        one = ChannelRealization.from_paths([1.0], [0.3], [1.1], geo, geo)
        two = ChannelRealization.from_paths([1.0, 0.0], [0.3, 2.0], [1.1, 0.5], geo, geo)
        np.testing.assert_allclose(two.matrix, one.matrix, atol=1e-14)

    def test_four_antenna_boresight_is_all_ones(self):
        geo = UlaGeometry(4)
        ch = ChannelRealization.from_paths([1.0], [0.0], [0.0], geo, geo, 1.0)
        np.testing.assert_allclose(ch.matrix, np.ones((4, 4)), atol=1e-12)
        oracle = brute_force_matrix([1.0], [0.0], [0.0], geo, geo, 1.0)
        np.testing.assert_allclose(ch.matrix, oracle, atol=1e-12)

    def test_inconsistent_matrix_rejected(self):
        geo = UlaGeometry(2)
        good = ChannelRealization.from_paths([1.0], [0.3], [1.1], geo, geo)
        with pytest.raises(ValueError):
            ChannelRealization(
                good.matrix + 1.0, good.path_gains, good.aods, good.aoas, 1.0, geo, geo
            )

    def test_zero_channel(self):
        ch = ChannelRealization.zero(UlaGeometry(3), UlaGeometry(5))
        assert ch.matrix.shape == (5, 3)
        assert np.all(ch.matrix == 0)
        assert ch.num_paths == 0


class TestRealizeChannel:
    def test_reconstruction_against_brute_force(self):
        rng = np.random.default_rng(11)
        geo_tx, geo_rx = UlaGeometry(16), UlaGeometry(8)
        for _ in range(20):
            pool = draw_scatterer_pool(rng, 20, (3, 8))
            ch = realize_channel(pool, "bob", geo_tx, geo_rx, 2.5, rng)
            oracle = brute_force_matrix(ch.path_gains, ch.aods, ch.aoas, geo_tx, geo_rx, 2.5)
            assert np.linalg.norm(ch.matrix - oracle) <= 1e-12 * np.linalg.norm(ch.matrix)

    def test_rank_bounded_by_path_count(self):
        rng = np.random.default_rng(5)
        geo = UlaGeometry(16)
        for _ in range(20):
            pool = draw_scatterer_pool(rng, 20, (3, 8))
            ch = realize_channel(pool, "eve", geo, geo, 1.0, rng)
            s = np.linalg.svd(ch.matrix, compute_uv=False)
            numerical_rank = int(np.sum(s > 1e-9 * s[0]))
            assert numerical_rank <= ch.num_paths

    def test_shared_scatterers_share_departure_angles(self):
        rng = np.random.default_rng(13)
        geo = UlaGeometry(8)
        pool = draw_scatterer_pool(rng, 6, (4, 6))
        h_bob = realize_channel(pool, "bob", geo, geo, 1.0, rng)
        h_eve = realize_channel(pool, "eve", geo, geo, 1.0, rng)
        for s in pool.shared_indices:
            aod_bob = h_bob.aods[pool.bob_paths.index(s)]
            aod_eve = h_eve.aods[pool.eve_paths.index(s)]
            assert aod_bob == aod_eve

    def test_seeded_determinism(self):
        geo = UlaGeometry(8)
        mats = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            pool = draw_scatterer_pool(rng, 20, (3, 8))
            mats.append(realize_channel(pool, "bob", geo, geo, 1.0, rng).matrix)
        assert np.array_equal(mats[0], mats[1])

    def test_unknown_receiver_rejected(self):
        rng = np.random.default_rng(0)
        pool = draw_scatterer_pool(rng, 20, (3, 8))
        geo = UlaGeometry(4)
        with pytest.raises(ValueError):
            realize_channel(pool, "mallory", geo, geo, 1.0, rng)
