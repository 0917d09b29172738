"""Shared builders for randomized test instances."""

from types import SimpleNamespace

import numpy as np
import pytest

from secbeam import (
    LinkNoise,
    TransmitConfig,
    UlaGeometry,
    build_codebook,
    draw_scatterer_pool,
    realize_channel,
)


def make_link(
    seed=0,
    num_tx=16,
    num_rx=16,
    bits=4,
    rf_chains=2,
    streams=2,
    pool_size=20,
    path_range=(3, 8),
    power=1.0,
):
    """A full random wiretap instance: channels, codebooks, tx config, noises."""
    rng = np.random.default_rng(seed)
    geo_tx = UlaGeometry(num_tx)
    geo_rx = UlaGeometry(num_rx)
    pool = draw_scatterer_pool(rng, pool_size, path_range)
    h_bob = realize_channel(pool, "bob", geo_tx, geo_rx, 1.0, rng)
    h_eve = realize_channel(pool, "eve", geo_tx, geo_rx, 1.0, rng)
    return SimpleNamespace(
        rng=rng,
        pool=pool,
        geo_tx=geo_tx,
        geo_rx=geo_rx,
        h_bob=h_bob,
        h_eve=h_eve,
        precoder_codebook=build_codebook(geo_tx, bits),
        combiner_codebook=build_codebook(geo_rx, bits),
        tx=TransmitConfig(power, streams, rf_chains),
        noise_b=LinkNoise(1.0),
        noise_e=LinkNoise(1.0),
    )


@pytest.fixture
def link_factory():
    return make_link
