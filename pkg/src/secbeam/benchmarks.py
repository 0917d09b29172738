"""Full-digital reference designs and the no-protection hybrid baseline.

These provide the comparison curves for the secure hybrid designs: an
eigenbeamforming transceiver that ignores the eavesdropper, a generalized
eigenvector design that trades legitimate gain against leakage, and the
codebook pipeline run without the eavesdropper-nulling projection.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .channel import ChannelRealization
from .core import AnalogCodebook, LinkNoise, TransmitConfig
from .secure_design import DesignResult, successive_pair_design


def full_digital_no_pls(
    h_bob: ChannelRealization,
    tx: TransmitConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenbeamforming on the legitimate channel, no secrecy effort.

    Returns (precoder, combiner): the leading num_streams right/left singular
    vectors of the channel, with the precoder scaled to ||F||_F^2 = N_s.
    """
    ns = tx.num_streams
    if ns > min(h_bob.num_rx, h_bob.num_tx):
        raise ValueError("num_streams exceeds the channel dimensions")
    u, _, vh = np.linalg.svd(h_bob.matrix)
    f = vh.conj().T[:, :ns]
    f = f * (np.sqrt(ns) / np.linalg.norm(f))
    return f, u[:, :ns]


def full_digital_ged(
    h_bob: ChannelRealization,
    h_eve: ChannelRealization,
    tx: TransmitConfig,
    noise_b: LinkNoise,
    noise_e: LinkNoise,
) -> tuple[np.ndarray, np.ndarray]:
    """Secure full-digital design from a generalized eigenvector pencil.

    The precoder takes the num_streams dominant generalized eigenvectors of
    (I + (P/(N_s s_b^2)) H_b^H H_b,  I + (P/(N_s s_e^2)) H_e^H H_e),
    orthonormalized and scaled to ||F||_F^2 = N_s with equal power per
    stream; the combiner matches the resulting legitimate subspace.  The
    second pencil matrix has eigenvalues >= 1, so the solve cannot hit a
    singular pencil while the eavesdropper noise variance is positive.
    """
    if h_bob.num_tx != h_eve.num_tx:
        raise ValueError("channels must share the transmitter dimension")
    ns = tx.num_streams
    if ns > h_bob.num_tx:
        raise ValueError("num_streams exceeds the transmit dimension")
    n_a = h_bob.num_tx
    eye = np.eye(n_a, dtype=complex)
    c_b = tx.total_power / (ns * noise_b.variance)
    c_e = tx.total_power / (ns * noise_e.variance)
    a = eye + c_b * (h_bob.matrix.conj().T @ h_bob.matrix)
    b = eye + c_e * (h_eve.matrix.conj().T @ h_eve.matrix)
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.conj().T)
    _, vecs = scipy.linalg.eigh(a, b)
    dominant = vecs[:, ::-1][:, :ns]
    q, _ = np.linalg.qr(dominant)
    f = q * (np.sqrt(ns) / np.linalg.norm(q))
    u, _, _ = np.linalg.svd(h_bob.matrix @ f)
    return f, u[:, :ns]


def hybrid_no_pls(
    h_bob: ChannelRealization,
    precoder_codebook: AnalogCodebook,
    combiner_codebook: AnalogCodebook,
    tx: TransmitConfig,
) -> DesignResult:
    """Codebook beam-pair design with no secrecy effort.

    Identical to the known-CSI secure design except that the working channel
    starts as the legitimate channel itself (no eavesdropper projection).
    """
    return successive_pair_design(h_bob.matrix, h_bob, precoder_codebook, combiner_codebook, tx)
