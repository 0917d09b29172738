"""Scatterer-sharing geometric channel model for uniform linear arrays.

A fixed pool of scatterers sits between the transmitter (Alice) and the two
receivers (Bob the legitimate receiver, Eve the eavesdropper).  Each receiver
propagates over a random subset of the pool, so the two links may reuse the
same departure angles at Alice, which is exactly the leakage scenario the
secure designs in this package target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# Relative Frobenius tolerance for the stored-parameters-reproduce-the-matrix
# check on ChannelRealization.
RECONSTRUCTION_RTOL = 1e-12


@dataclass(frozen=True)
class UlaGeometry:
    """Uniform linear array described by antenna count and element spacing.

    `element_spacing` is the inter-element distance as a fraction of the
    carrier wavelength (d/lambda); half-wavelength spacing is the default.
    """

    num_antennas: int
    element_spacing: float = 0.5

    def __post_init__(self) -> None:
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be at least 1")
        if self.element_spacing <= 0:
            raise ValueError("element_spacing must be positive")


def array_response(geometry: UlaGeometry, angle: float) -> np.ndarray:
    """Unit-norm ULA steering vector toward `angle` (radians).

    Element k carries phase 2*pi*(d/lambda)*k*sin(angle).  The 1/sqrt(N)
    scaling keeps the vector unit norm while every entry shares the same
    magnitude, so steering vectors are directly usable as analog
    (phase-shifter) beamformer columns.
    """
    n = geometry.num_antennas
    step = TWO_PI * geometry.element_spacing * np.sin(angle)
    return np.exp(1j * step * np.arange(n)) / np.sqrt(n)


@dataclass(frozen=True)
class Scatterer:
    """A single reflector shared by the links.

    The departure angle at Alice is a property of the scatterer itself; each
    receiver that bounces off it sees its own arrival angle.
    """

    aod_alice: float
    aoa_bob: float
    aoa_eve: float

    def __post_init__(self) -> None:
        for name in ("aod_alice", "aoa_bob", "aoa_eve"):
            value = getattr(self, name)
            if not 0.0 <= value < TWO_PI:
                raise ValueError(f"{name} must lie in [0, 2*pi), got {value!r}")


@dataclass(frozen=True)
class ScattererPool:
    """Scatterer pool plus the subsets Bob and Eve actually propagate over."""

    scatterers: tuple[Scatterer, ...]
    bob_paths: tuple[int, ...]
    eve_paths: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.scatterers)
        for name, paths in (("bob_paths", self.bob_paths), ("eve_paths", self.eve_paths)):
            if len(paths) == 0:
                raise ValueError(f"{name} must be nonempty")
            if len(set(paths)) != len(paths):
                raise ValueError(f"{name} contains duplicate indices")
            if any(i < 0 or i >= n for i in paths):
                raise ValueError(f"{name} has indices outside the pool of size {n}")

    @property
    def shared_indices(self) -> tuple[int, ...]:
        """Pool indices used by both receivers (the leakage-critical paths)."""
        return tuple(sorted(set(self.bob_paths) & set(self.eve_paths)))


def draw_scatterer_pool(
    rng: np.random.Generator,
    pool_size: int = 20,
    path_count_range: tuple[int, int] = (3, 8),
) -> ScattererPool:
    """Draw a pool of scatterers and independent path subsets for Bob and Eve.

    All angles are i.i.d. uniform on [0, 2*pi).  Each receiver's path count is
    uniform over `path_count_range` (inclusive) and its subset is a uniform
    draw without replacement, so overlap between the two subsets occurs with
    positive probability.
    """
    lo, hi = int(path_count_range[0]), int(path_count_range[1])
    if lo < 1 or hi < lo:
        raise ValueError(f"path_count_range must satisfy 1 <= lo <= hi, got ({lo}, {hi})")
    if pool_size < hi:
        raise ValueError(f"pool_size {pool_size} is smaller than the maximum path count {hi}")

    aod = rng.uniform(0.0, TWO_PI, pool_size)
    aoa_bob = rng.uniform(0.0, TWO_PI, pool_size)
    aoa_eve = rng.uniform(0.0, TWO_PI, pool_size)
    scatterers = tuple(
        Scatterer(aod_alice=aod[i], aoa_bob=aoa_bob[i], aoa_eve=aoa_eve[i])
        for i in range(pool_size)
    )

    num_bob = int(rng.integers(lo, hi + 1))
    bob = tuple(sorted(int(i) for i in rng.choice(pool_size, size=num_bob, replace=False)))
    num_eve = int(rng.integers(lo, hi + 1))
    eve = tuple(sorted(int(i) for i in rng.choice(pool_size, size=num_eve, replace=False)))
    return ScattererPool(scatterers=scatterers, bob_paths=bob, eve_paths=eve)


def _assemble_matrix(
    path_gains: np.ndarray,
    aods: np.ndarray,
    aoas: np.ndarray,
    tx_geometry: UlaGeometry,
    rx_geometry: UlaGeometry,
    path_loss: float,
) -> np.ndarray:
    n_tx = tx_geometry.num_antennas
    n_rx = rx_geometry.num_antennas
    if len(path_gains) == 0:
        return np.zeros((n_rx, n_tx), dtype=complex)
    a_tx = np.column_stack([array_response(tx_geometry, phi) for phi in aods])
    a_rx = np.column_stack([array_response(rx_geometry, theta) for theta in aoas])
    scale = np.sqrt(n_tx * n_rx / path_loss)
    return scale * (a_rx * path_gains) @ a_tx.conj().T


@dataclass(frozen=True)
class ChannelRealization:
    """A narrowband multipath channel together with its generating parameters.

    `matrix` is the (num_rx x num_tx) channel; `path_gains`, `aods` and `aoas`
    are per-path parameters sufficient to rebuild it, which the constructor
    verifies to a relative Frobenius tolerance of 1e-12.
    """

    matrix: np.ndarray
    path_gains: np.ndarray
    aods: np.ndarray
    aoas: np.ndarray
    path_loss: float
    tx_geometry: UlaGeometry
    rx_geometry: UlaGeometry

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        object.__setattr__(self, "path_gains", np.asarray(self.path_gains, dtype=complex))
        object.__setattr__(self, "aods", np.asarray(self.aods, dtype=float))
        object.__setattr__(self, "aoas", np.asarray(self.aoas, dtype=float))
        if self.path_loss <= 0:
            raise ValueError("path_loss must be positive")
        expected_shape = (self.rx_geometry.num_antennas, self.tx_geometry.num_antennas)
        if self.matrix.shape != expected_shape:
            raise ValueError(f"matrix shape {self.matrix.shape} does not match geometry {expected_shape}")
        if not (len(self.path_gains) == len(self.aods) == len(self.aoas)):
            raise ValueError("path_gains, aods and aoas must have equal length")
        rebuilt = _assemble_matrix(
            self.path_gains, self.aods, self.aoas, self.tx_geometry, self.rx_geometry, self.path_loss
        )
        err = np.linalg.norm(self.matrix - rebuilt)
        ref = np.linalg.norm(self.matrix)
        if err > RECONSTRUCTION_RTOL * ref + (0.0 if ref > 0 else 1e-300):
            raise ValueError("matrix is inconsistent with the stored path parameters")

    @classmethod
    def from_paths(
        cls,
        path_gains: np.ndarray,
        aods: np.ndarray,
        aoas: np.ndarray,
        tx_geometry: UlaGeometry,
        rx_geometry: UlaGeometry,
        path_loss: float = 1.0,
    ) -> "ChannelRealization":
        """Assemble the channel matrix from per-path parameters."""
        gains = np.asarray(path_gains, dtype=complex)
        aods = np.asarray(aods, dtype=float)
        aoas = np.asarray(aoas, dtype=float)
        matrix = _assemble_matrix(gains, aods, aoas, tx_geometry, rx_geometry, path_loss)
        return cls(matrix, gains, aods, aoas, path_loss, tx_geometry, rx_geometry)

    @classmethod
    def zero(
        cls,
        tx_geometry: UlaGeometry,
        rx_geometry: UlaGeometry,
        path_loss: float = 1.0,
    ) -> "ChannelRealization":
        """An all-zero channel (no propagation paths)."""
        return cls.from_paths(
            np.zeros(0, dtype=complex), np.zeros(0), np.zeros(0), tx_geometry, rx_geometry, path_loss
        )

    @property
    def num_paths(self) -> int:
        return len(self.path_gains)

    @property
    def num_tx(self) -> int:
        return self.tx_geometry.num_antennas

    @property
    def num_rx(self) -> int:
        return self.rx_geometry.num_antennas


def realize_channel(
    pool: ScattererPool,
    receiver: str,
    tx_geometry: UlaGeometry,
    rx_geometry: UlaGeometry,
    path_loss: float = 1.0,
    rng: np.random.Generator | None = None,
) -> ChannelRealization:
    """Realize the channel toward `receiver` ("bob" or "eve") from the pool.

    Path gains are i.i.d. circularly-symmetric complex Gaussian with unit
    variance (Rayleigh magnitude, uniform phase).  Departure angles come from
    the shared scatterers, so links that reuse a scatterer reuse its AoD.
    """
    if receiver == "bob":
        indices = pool.bob_paths
        aoas = np.array([pool.scatterers[i].aoa_bob for i in indices])
    elif receiver == "eve":
        indices = pool.eve_paths
        aoas = np.array([pool.scatterers[i].aoa_eve for i in indices])
    else:
        raise ValueError(f"receiver must be 'bob' or 'eve', got {receiver!r}")
    if len(indices) == 0:
        raise ValueError("receiver has an empty path set")
    if rng is None:
        rng = np.random.default_rng()
    aods = np.array([pool.scatterers[i].aod_alice for i in indices])
    num = len(indices)
    gains = (rng.standard_normal(num) + 1j * rng.standard_normal(num)) / np.sqrt(2.0)
    return ChannelRealization.from_paths(gains, aods, aoas, tx_geometry, rx_geometry, path_loss)
