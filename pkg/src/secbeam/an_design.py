"""Artificial-noise hybrid design for the unknown-eavesdropper-CSI case.

Without eavesdropper CSI the transmitter runs the successive beam-pair design
on the legitimate channel alone, spends only as much power as the legitimate
QoS target needs, and pours the remainder into artificial noise shaped to be
invisible at the legitimate combiner output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelRealization
from .core import (
    AnalogCodebook,
    LinkNoise,
    TransmitConfig,
    eve_capacity_from_matrices,
    rate_from_matrices,
)
from .secure_design import DesignResult, successive_pair_design


class PowerSearchResult(NamedTuple):
    """Minimum-power search outcome: the power and whether the target was met."""

    power: float
    feasible: bool


@dataclass(frozen=True)
class AnDesignResult:
    """Artificial-noise design: base beamformers plus the power split.

    `an_digital_precoder` maps the (num_rf_chains - num_streams)-dimensional
    noise vector into the RF chains; it is normalized so the analog-cascaded
    noise precoder has unit Frobenius norm.
    """

    base: DesignResult
    an_digital_precoder: np.ndarray
    signal_power: float
    an_power: float
    qos_threshold: float
    feasible: bool

    @property
    def num_streams(self) -> int:
        return self.base.precoder.digital.shape[1]

    @property
    def num_an_dims(self) -> int:
        return self.an_digital_precoder.shape[1]

    @property
    def an_transmit_matrix(self) -> np.ndarray:
        """Composite transmit-side noise precoder (analog @ AN digital)."""
        return self.base.precoder.analog @ self.an_digital_precoder

    @property
    def an_radiating_matrix(self) -> np.ndarray:
        """Noise precoder scaled so the burst radiates its full power budget.

        The stored cascade has unit Frobenius norm, so with the noise symbol
        covariance I/num_an_dims it would radiate only an_power/num_an_dims;
        scaling by sqrt(num_an_dims) restores the P_s + P_AN power ledger in
        radiated terms.  Rate evaluations use this matrix.
        """
        return self.an_transmit_matrix * np.sqrt(self.num_an_dims)


def min_power_for_qos(
    h_bob: ChannelRealization,
    design: DesignResult,
    noise: LinkNoise,
    qos: float,
    power_cap: float,
    tolerance: float = 1e-6,
    max_iterations: int = 200,
) -> PowerSearchResult:
    """Smallest transmit power whose legitimate rate meets `qos` (bits).

    The rate is strictly increasing in power, so a bisection on [0, power_cap]
    converges to relative `tolerance`; the returned power always sits on the
    feasible side of the target.  If even `power_cap` cannot meet the target
    the cap is returned with feasible=False (the caller decides how to record
    the miss).
    """
    if qos < 0:
        raise ValueError("qos must be nonnegative")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if power_cap < 0:
        raise ValueError("power_cap must be nonnegative")

    f = design.precoder.matrix
    w = design.combiner.matrix

    def rate(power: float) -> float:
        if power == 0.0:
            return 0.0
        return rate_from_matrices(h_bob.matrix, f, w, noise.variance, power)

    if rate(0.0) >= qos:
        return PowerSearchResult(0.0, True)
    if rate(power_cap) < qos:
        return PowerSearchResult(power_cap, False)

    lo, hi = 0.0, power_cap
    for _ in range(max_iterations):
        if hi - lo <= tolerance * hi:
            break
        mid = 0.5 * (lo + hi)
        if rate(mid) >= qos:
            hi = mid
        else:
            lo = mid
    return PowerSearchResult(hi, True)


def an_precoder(
    effective_channel: np.ndarray,
    analog_precoder: np.ndarray,
    tx: TransmitConfig,
) -> np.ndarray:
    """Digital precoder spanning the unused right singular directions.

    Takes the trailing num_rf_chains - num_streams right singular vectors of
    the effective channel, which the SVD-based digital combiner cannot see,
    and scales them so the analog-cascaded noise precoder has unit Frobenius
    norm.  Requires spare RF chains (num_streams < num_rf_chains).
    """
    if tx.num_streams >= tx.num_rf_chains:
        raise ValueError("artificial noise needs num_streams < num_rf_chains")
    h_eff = np.asarray(effective_channel)
    if h_eff.shape != (tx.num_rf_chains, tx.num_rf_chains):
        raise ValueError("effective channel must be num_rf_chains x num_rf_chains")
    _, _, vh = np.linalg.svd(h_eff)
    f_an = vh.conj().T[:, tx.num_streams:tx.num_rf_chains]
    norm = np.linalg.norm(np.asarray(analog_precoder) @ f_an)
    if norm == 0.0:
        raise ValueError("analog precoder annihilates the noise subspace")
    return f_an / norm


def design_unknown_csi(
    h_bob: ChannelRealization,
    precoder_codebook: AnalogCodebook,
    combiner_codebook: AnalogCodebook,
    tx: TransmitConfig,
    noise_b: LinkNoise,
    qos: float,
    power_tolerance: float = 1e-6,
) -> AnDesignResult:
    """Artificial-noise hybrid design without eavesdropper CSI.

    Runs the successive beam-pair design on the legitimate channel, finds the
    least signal power meeting the QoS target, and assigns the leftover power
    to artificial noise in the combiner's null directions.  An unreachable
    QoS target is flagged, not raised: the design then sends everything as
    signal.
    """
    if tx.num_streams >= tx.num_rf_chains:
        raise ValueError("artificial noise needs num_streams < num_rf_chains")
    base = successive_pair_design(h_bob.matrix, h_bob, precoder_codebook, combiner_codebook, tx)
    signal_power, feasible = min_power_for_qos(
        h_bob, base, noise_b, qos, power_cap=tx.total_power, tolerance=power_tolerance
    )
    an_power = max(tx.total_power - signal_power, 0.0)
    f_an = an_precoder(base.effective_channel, base.precoder.analog, tx)
    return AnDesignResult(
        base=base,
        an_digital_precoder=f_an,
        signal_power=signal_power,
        an_power=an_power,
        qos_threshold=qos,
        feasible=feasible,
    )


def bob_rate_with_an(
    h_bob: ChannelRealization,
    result: AnDesignResult,
    noise: LinkNoise,
) -> float:
    """Legitimate rate under the full transmit model, noise burst included.

    The artificial noise lands in the combiner's null space, so this should
    match the noise-free rate at the signal power; evaluating it through the
    full model keeps that claim checkable.
    """
    if result.signal_power == 0.0:
        return 0.0
    base = result.base
    return rate_from_matrices(
        h_bob.matrix,
        base.precoder.matrix,
        base.combiner.matrix,
        noise.variance,
        result.signal_power,
        interference_matrix=result.an_radiating_matrix,
        interference_power=result.an_power,
    )


def eve_rate_with_an(
    h_eve: ChannelRealization,
    result: AnDesignResult,
    noise: LinkNoise,
) -> float:
    """Eavesdropper rate under artificial noise, with an optimal receiver.

    The noise burst is treated as Gaussian interference the eavesdropper
    cannot cancel; her receiver is otherwise unconstrained, so this stays a
    conservative (upper-bound) eavesdropper model.
    """
    if result.signal_power == 0.0:
        return 0.0
    return eve_capacity_from_matrices(
        h_eve.matrix,
        result.base.precoder.matrix,
        noise.variance,
        result.signal_power,
        interference_matrix=result.an_radiating_matrix,
        interference_power=result.an_power,
    )
