"""Joint hybrid precoder/combiner design when the eavesdropper channel is known.

The pipeline: project the eavesdropper's departure-angle subspace out of the
legitimate channel, then successively pick the codebook beam pair with the
largest channel gain, deflating the working channel after each pick with a
Gram-Schmidt step so later streams cannot reuse earlier directions.  A final
SVD on the effective baseband channel produces the digital stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .core import (
    AnalogCodebook,
    HybridCombiner,
    HybridPrecoder,
    TransmitConfig,
    normalize_digital,
    truncated_svd,
)

# A selected beam whose Gram-Schmidt residual is below this norm is treated as
# linearly dependent on earlier picks.
DEGENERATE_RESIDUAL_TOL = 1e-12


class DegenerateResidualError(RuntimeError):
    """A selected beam lies in the span of previously selected components.

    `side` is "precoder" or "combiner" (or "exhausted" when every codebook
    entry has been ruled out for a stream).
    """

    def __init__(self, message: str, side: str):
        super().__init__(message)
        self.side = side


@dataclass(frozen=True)
class DeflationState:
    """Working channel plus the orthonormal components already removed from it."""

    current_channel: np.ndarray
    tx_components: tuple[np.ndarray, ...] = ()
    rx_components: tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class DesignResult:
    """Output of the successive beam-pair design.

    `selected_indices` holds one (precoder-codebook-index,
    combiner-codebook-index) pair per RF chain, in selection order.
    """

    precoder: HybridPrecoder
    combiner: HybridCombiner
    effective_channel: np.ndarray
    selected_indices: tuple[tuple[int, int], ...]


def eve_nullspace_projection(
    h_bob: ChannelRealization,
    h_eve: ChannelRealization,
    rank_tolerance: float = 1e-9,
) -> np.ndarray:
    """Remove the eavesdropper's departure-angle subspace from Bob's channel.

    Returns H_b (I - V_e V_e^H) where V_e spans the right singular subspace of
    the eavesdropper channel above the numerical-rank tolerance.  A zero
    eavesdropper channel leaves Bob's channel untouched; an eavesdropper
    subspace covering the whole transmit space legally yields a zero result.
    """
    if h_bob.num_tx != h_eve.num_tx:
        raise ValueError("channels must share the transmitter dimension")
    _, _, v_e = truncated_svd(h_eve.matrix, rank_tolerance)
    if v_e.shape[1] == 0:
        return h_bob.matrix.copy()
    return h_bob.matrix - (h_bob.matrix @ v_e) @ v_e.conj().T


def select_beam_pair(
    channel: np.ndarray,
    precoder_codebook: AnalogCodebook,
    combiner_codebook: AnalogCodebook,
    exclude_precoder: frozenset[int] | set[int] = frozenset(),
    exclude_combiner: frozenset[int] | set[int] = frozenset(),
) -> tuple[int, int, float]:
    """Exhaustively pick the codebook pair maximizing |w^H H f|.

    Returns (precoder_index, combiner_index, gain).  Exact ties resolve to the
    lowest (combiner_index, precoder_index) pair.  The exclusion sets support
    the degenerate-beam fallback of the design loop; with every admissible
    pair excluded a DegenerateResidualError("exhausted") is raised.
    """
    gains = np.abs(combiner_codebook.vectors.conj().T @ (channel @ precoder_codebook.vectors))
    if exclude_precoder:
        gains[:, list(exclude_precoder)] = -1.0
    if exclude_combiner:
        gains[list(exclude_combiner), :] = -1.0
    flat = int(np.argmax(gains))
    w_index, f_index = np.unravel_index(flat, gains.shape)
    gain = float(gains[w_index, f_index])
    if gain < 0.0:
        raise DegenerateResidualError("every codebook entry is excluded", side="exhausted")
    return int(f_index), int(w_index), gain


def _orthonormal_residual(vector: np.ndarray, components: tuple[np.ndarray, ...], side: str) -> np.ndarray:
    """Gram-Schmidt residual of `vector` against `components`, normalized.

    Runs a second orthogonalization pass so the returned direction stays
    orthogonal to the components even when the first residual is small.
    """
    residual = vector.copy()
    for _ in range(2):
        for comp in components:
            residual = residual - (comp.conj() @ residual) * comp
    norm = np.linalg.norm(residual)
    if norm < DEGENERATE_RESIDUAL_TOL:
        raise DegenerateResidualError(f"selected {side} beam is dependent on earlier components", side=side)
    return residual / norm


def deflate(state: DeflationState, f_star: np.ndarray, w_star: np.ndarray) -> DeflationState:
    """Fold a selected beam pair into the deflation state.

    The first pair is taken as-is (codebook vectors are unit norm); later
    pairs are orthonormalized against the accumulated components.  The working
    channel is then sandwiched between the complementary projectors so the new
    directions carry no gain for subsequent streams.
    """
    if not state.tx_components:
        p = f_star.copy()
        q = w_star.copy()
    else:
        p = _orthonormal_residual(f_star, state.tx_components, side="precoder")
        q = _orthonormal_residual(w_star, state.rx_components, side="combiner")
    h = state.current_channel
    h = h - np.outer(q, q.conj() @ h)
    h = h - np.outer(h @ p, p.conj())
    return DeflationState(
        current_channel=h,
        tx_components=state.tx_components + (p,),
        rx_components=state.rx_components + (q,),
    )


def digital_stage(effective_channel: np.ndarray, tx: TransmitConfig) -> tuple[np.ndarray, np.ndarray]:
    """SVD-based digital precoder/combiner on the effective baseband channel.

    Returns (F_BB, W_BB): the leading num_streams right and left singular
    vectors of the effective channel, each with orthonormal columns.
    """
    h_eff = np.asarray(effective_channel)
    if h_eff.shape[0] != h_eff.shape[1]:
        raise ValueError("effective channel must be square (N_RF x N_RF)")
    u, _, vh = np.linalg.svd(h_eff)
    ns = tx.num_streams
    return vh.conj().T[:, :ns], u[:, :ns]


def successive_pair_design(
    h_initial: np.ndarray,
    h_bob: ChannelRealization,
    precoder_codebook: AnalogCodebook,
    combiner_codebook: AnalogCodebook,
    tx: TransmitConfig,
) -> DesignResult:
    """Run the successive beam-pair selection starting from `h_initial`.

    One beam pair is selected per RF chain.  If a pick's Gram-Schmidt residual
    degenerates, the offending codebook entry is excluded and the selection
    for that stream repeats; exhausting a codebook raises
    DegenerateResidualError.  The digital stages come from the SVD of the
    effective channel (which always uses the true legitimate channel, not the
    deflated one), and the digital precoder is normalized to the total-power
    constraint.
    """
    n_rf = tx.num_rf_chains
    state = DeflationState(current_channel=np.asarray(h_initial, dtype=complex))
    f_columns: list[np.ndarray] = []
    w_columns: list[np.ndarray] = []
    selected: list[tuple[int, int]] = []

    for _ in range(n_rf):
        excluded_f: set[int] = set()
        excluded_w: set[int] = set()
        while True:
            f_idx, w_idx, _ = select_beam_pair(
                state.current_channel,
                precoder_codebook,
                combiner_codebook,
                exclude_precoder=excluded_f,
                exclude_combiner=excluded_w,
            )
            f_star = precoder_codebook.vector(f_idx)
            w_star = combiner_codebook.vector(w_idx)
            try:
                state = deflate(state, f_star, w_star)
            except DegenerateResidualError as err:
                if err.side == "precoder":
                    excluded_f.add(f_idx)
                else:
                    excluded_w.add(w_idx)
                continue
            break
        f_columns.append(f_star)
        w_columns.append(w_star)
        selected.append((f_idx, w_idx))

    analog_f = np.column_stack(f_columns)
    analog_w = np.column_stack(w_columns)
    effective = analog_w.conj().T @ h_bob.matrix @ analog_f
    f_bb, w_bb = digital_stage(effective, tx)

    f_indices = tuple(pair[0] for pair in selected)
    w_indices = tuple(pair[1] for pair in selected)
    precoder = normalize_digital(
        HybridPrecoder(analog=analog_f, digital=f_bb, analog_indices=f_indices), tx.num_streams
    )
    combiner = HybridCombiner(analog=analog_w, digital=w_bb, analog_indices=w_indices)
    return DesignResult(
        precoder=precoder,
        combiner=combiner,
        effective_channel=effective,
        selected_indices=tuple(selected),
    )


def design_known_csi(
    h_bob: ChannelRealization,
    h_eve: ChannelRealization,
    precoder_codebook: AnalogCodebook,
    combiner_codebook: AnalogCodebook,
    tx: TransmitConfig,
    rank_tolerance: float = 1e-9,
) -> DesignResult:
    """Secure hybrid design with eavesdropper CSI.

    Projects the eavesdropper's subspace out of Bob's channel, then runs the
    successive pair selection on the projected channel.
    """
    h_start = eve_nullspace_projection(h_bob, h_eve, rank_tolerance)
    return successive_pair_design(h_start, h_bob, precoder_codebook, combiner_codebook, tx)
