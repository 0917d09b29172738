"""Secure hybrid beamforming for mmWave MIMO wiretap links.

Channel model, codebook beam-pair designs (with and without eavesdropper
CSI), artificial-noise power splitting, full-digital benchmarks, and a
Monte-Carlo harness with a CSV/JSON-emitting CLI.
"""

from .an_design import (
    AnDesignResult,
    PowerSearchResult,
    an_precoder,
    bob_rate_with_an,
    design_unknown_csi,
    eve_rate_with_an,
    min_power_for_qos,
)
from .benchmarks import full_digital_ged, full_digital_no_pls, hybrid_no_pls
from .channel import (
    ChannelRealization,
    Scatterer,
    ScattererPool,
    UlaGeometry,
    array_response,
    draw_scatterer_pool,
    realize_channel,
)
from .core import (
    AnalogCodebook,
    HybridCombiner,
    HybridPrecoder,
    LinkNoise,
    SingularNoiseCovarianceError,
    TransmitConfig,
    build_codebook,
    eve_capacity_from_matrices,
    eve_rate_upper_bound,
    mutual_info_rate,
    normalize_digital,
    rate_from_matrices,
    secrecy_rate,
    truncated_svd,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    SecrecyResult,
    emit_results,
    load_results,
    run_qos_sweep,
    run_snr_sweep,
    snr_db_to_power,
)
from .secure_design import (
    DeflationState,
    DegenerateResidualError,
    DesignResult,
    deflate,
    design_known_csi,
    digital_stage,
    eve_nullspace_projection,
    select_beam_pair,
    successive_pair_design,
)

__version__ = "0.1.0"

__all__ = [
    "AnDesignResult",
    "AnalogCodebook",
    "ChannelRealization",
    "ConfigError",
    "DeflationState",
    "DegenerateResidualError",
    "DesignResult",
    "ExperimentConfig",
    "HybridCombiner",
    "HybridPrecoder",
    "LinkNoise",
    "PowerSearchResult",
    "Scatterer",
    "ScattererPool",
    "SecrecyResult",
    "SingularNoiseCovarianceError",
    "TransmitConfig",
    "UlaGeometry",
    "an_precoder",
    "array_response",
    "bob_rate_with_an",
    "build_codebook",
    "deflate",
    "design_known_csi",
    "design_unknown_csi",
    "digital_stage",
    "draw_scatterer_pool",
    "emit_results",
    "eve_capacity_from_matrices",
    "eve_nullspace_projection",
    "eve_rate_upper_bound",
    "eve_rate_with_an",
    "full_digital_ged",
    "full_digital_no_pls",
    "hybrid_no_pls",
    "load_results",
    "min_power_for_qos",
    "mutual_info_rate",
    "normalize_digital",
    "rate_from_matrices",
    "realize_channel",
    "run_qos_sweep",
    "run_snr_sweep",
    "secrecy_rate",
    "select_beam_pair",
    "snr_db_to_power",
    "successive_pair_design",
    "truncated_svd",
]
