"""Analog codebooks, hybrid beamformer containers, and information rates.

All rates are in bits (log base 2).  Determinants of the small Hermitian
forms that appear in the rate expressions are evaluated through
`numpy.linalg.slogdet` on positive-definite matrices rather than through
explicit determinants of large products.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import TWO_PI, ChannelRealization, UlaGeometry, array_response

# R_n is treated as singular when its smallest eigenvalue falls below this
# fraction of the largest.
NOISE_COV_RTOL = 1e-12


class SingularNoiseCovarianceError(ValueError):
    """The post-combining noise covariance is rank deficient (degenerate combiner)."""


@dataclass(frozen=True)
class AnalogCodebook:
    """Steering-vector codebook at uniformly quantized angles.

    Column k of `vectors` is the array response at angle 2*pi*(k+1)/2**bits,
    i.e. the quantized angles are 2*pi*i/2**bits for i = 1..2**bits.
    """

    vectors: np.ndarray
    angles: np.ndarray
    bits: int

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    @property
    def num_antennas(self) -> int:
        return self.vectors.shape[0]

    def vector(self, index: int) -> np.ndarray:
        return self.vectors[:, index]


def build_codebook(geometry: UlaGeometry, bits: int) -> AnalogCodebook:
    """Build the 2**bits-entry steering codebook for `geometry`."""
    if bits < 1:
        raise ValueError("bits must be at least 1")
    count = 2 ** bits
    angles = TWO_PI * np.arange(1, count + 1) / count
    vectors = np.column_stack([array_response(geometry, a) for a in angles])
    return AnalogCodebook(vectors=vectors, angles=angles, bits=bits)


@dataclass(frozen=True)
class LinkNoise:
    """Receiver noise variance (per antenna, i.i.d. complex Gaussian)."""

    variance: float

    def __post_init__(self) -> None:
        if self.variance <= 0:
            raise ValueError("noise variance must be positive")


@dataclass(frozen=True)
class TransmitConfig:
    """Total transmit power, stream count, and RF-chain count."""

    total_power: float
    num_streams: int
    num_rf_chains: int

    def __post_init__(self) -> None:
        if self.total_power <= 0:
            raise ValueError("total_power must be positive")
        if self.num_streams < 1 or self.num_rf_chains < 1:
            raise ValueError("num_streams and num_rf_chains must be positive")
        if self.num_streams > self.num_rf_chains:
            raise ValueError("num_streams cannot exceed num_rf_chains")


@dataclass(frozen=True)
class HybridPrecoder:
    """Analog (codebook-column) precoder cascaded with a digital precoder.

    `analog_indices` records which codebook entry each analog column came
    from; it is None for hand-built precoders.
    """

    analog: np.ndarray
    digital: np.ndarray
    analog_indices: tuple[int, ...] | None = None

    @property
    def matrix(self) -> np.ndarray:
        """The composite transmit matrix analog @ digital."""
        return self.analog @ self.digital


@dataclass(frozen=True)
class HybridCombiner:
    """Analog (codebook-column) combiner cascaded with a digital combiner."""

    analog: np.ndarray
    digital: np.ndarray
    analog_indices: tuple[int, ...] | None = None

    @property
    def matrix(self) -> np.ndarray:
        return self.analog @ self.digital


def _logdet_hermitian(matrix: np.ndarray) -> float:
    """log|det| of a Hermitian positive-definite matrix."""
    _, logdet = np.linalg.slogdet(matrix)
    return float(logdet)


def rate_from_matrices(
    channel_matrix: np.ndarray,
    precoder_matrix: np.ndarray,
    combiner_matrix: np.ndarray,
    noise_variance: float,
    total_power: float,
    interference_matrix: np.ndarray | None = None,
    interference_power: float = 0.0,
) -> float:
    """Achievable rate (bits) of a link through explicit precoder/combiner matrices.

    Evaluates log2 det(I + S) with
    S = (P/N_s) * R_n^{-1} W^H H F F^H H^H W  and  R_n = sigma^2 W^H W,
    where F and W are the composite (possibly full-digital) transmit and
    receive matrices and N_s is the number of transmit columns.  Computed as
    the difference of two positive-definite log-determinants for stability.

    `interference_matrix` (transmit side, columns carrying
    interference_power / num_columns each) adds a Gaussian interference term
    to R_n; this models transmitter-generated jamming such as artificial
    noise.
    """
    h = np.asarray(channel_matrix)
    f = np.atleast_2d(np.asarray(precoder_matrix))
    w = np.atleast_2d(np.asarray(combiner_matrix))
    if f.shape[0] != h.shape[1] or w.shape[0] != h.shape[0]:
        raise ValueError("channel, precoder and combiner dimensions are incompatible")
    num_streams = f.shape[1]

    noise_cov = noise_variance * (w.conj().T @ w)
    eigs = np.linalg.eigvalsh(noise_cov)
    if eigs[-1] <= 0 or eigs[0] <= NOISE_COV_RTOL * eigs[-1]:
        raise SingularNoiseCovarianceError("post-combining noise covariance is singular")
    if interference_matrix is not None and interference_power > 0.0:
        j = np.atleast_2d(np.asarray(interference_matrix))
        g_j = w.conj().T @ h @ j
        noise_cov = noise_cov + (interference_power / j.shape[1]) * (g_j @ g_j.conj().T)

    g = w.conj().T @ h @ f
    signal_cov = (total_power / num_streams) * (g @ g.conj().T)
    rate = (_logdet_hermitian(noise_cov + signal_cov) - _logdet_hermitian(noise_cov)) / np.log(2.0)
    return max(rate, 0.0)


def mutual_info_rate(
    channel: ChannelRealization,
    precoder: HybridPrecoder,
    combiner: HybridCombiner,
    noise: LinkNoise,
    tx: TransmitConfig,
) -> float:
    """Rate (bits) through a hybrid precoder/combiner pair over `channel`."""
    return rate_from_matrices(channel.matrix, precoder.matrix, combiner.matrix, noise.variance, tx.total_power)


def eve_capacity_from_matrices(
    channel_matrix: np.ndarray,
    precoder_matrix: np.ndarray,
    noise_variance: float,
    total_power: float,
    interference_matrix: np.ndarray | None = None,
    interference_power: float = 0.0,
) -> float:
    """Combiner-independent capacity of a link: log2 det(I + (P/(N_s s^2)) H F F^H H^H).

    Upper-bounds the rate achievable with any receive combiner, so it serves
    as the conservative eavesdropper model.  With an `interference_matrix`
    the Gaussian interference (total `interference_power` split evenly over
    its columns) is folded into the noise covariance before inverting, i.e.
    the receiver is optimal but cannot cancel the jamming.
    """
    h = np.asarray(channel_matrix)
    f = np.atleast_2d(np.asarray(precoder_matrix))
    num_streams = f.shape[1]
    m = h @ f
    c = total_power / num_streams
    if interference_matrix is None or interference_power == 0.0:
        gram_eigs = np.clip(np.linalg.eigvalsh(m.conj().T @ m), 0.0, None)
        return float(np.sum(np.log2(1.0 + (c / noise_variance) * gram_eigs)))

    j = np.atleast_2d(np.asarray(interference_matrix))
    m_j = h @ j
    noise_cov = noise_variance * np.eye(h.shape[0], dtype=complex)
    noise_cov += (interference_power / j.shape[1]) * (m_j @ m_j.conj().T)
    rate = (_logdet_hermitian(noise_cov + c * (m @ m.conj().T)) - _logdet_hermitian(noise_cov)) / np.log(2.0)
    return max(rate, 0.0)


def eve_rate_upper_bound(
    channel_e: ChannelRealization,
    precoder: HybridPrecoder,
    noise_e: LinkNoise,
    tx: TransmitConfig,
) -> float:
    """Upper bound on the eavesdropper's rate, independent of her combiner."""
    return eve_capacity_from_matrices(channel_e.matrix, precoder.matrix, noise_e.variance, tx.total_power)


def secrecy_rate(rate_bob: float, rate_eve: float) -> float:
    """Nonnegative part of the legitimate-minus-eavesdropper rate difference."""
    return max(rate_bob - rate_eve, 0.0)


def truncated_svd(matrix: np.ndarray, rank_tolerance: float = 1e-9) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD truncated to singular values above rank_tolerance * sigma_max.

    Returns (U_t, s_t, V_t) with s_t in decreasing order and V_t holding the
    right singular vectors as columns, so matrix ~= U_t @ diag(s_t) @ V_t^H.
    A zero matrix yields empty factors.
    """
    m = np.atleast_2d(np.asarray(matrix))
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        keep = np.zeros(s.shape, dtype=bool)
    else:
        keep = s > rank_tolerance * s[0]
    return u[:, keep], s[keep], vh[keep, :].conj().T


def normalize_digital(precoder: HybridPrecoder, target: float) -> HybridPrecoder:
    """Rescale the digital precoder so that ||analog @ digital||_F^2 == target."""
    norm = np.linalg.norm(precoder.analog @ precoder.digital)
    if norm == 0.0:
        raise ValueError("cannot normalize a zero precoder")
    return replace(precoder, digital=precoder.digital * (np.sqrt(target) / norm))
