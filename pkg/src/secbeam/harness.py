"""Monte-Carlo secrecy experiment engine: configs, sweeps, CSV/JSON emission.

Trials are paired: within a trial every algorithm and every grid point sees
the same channel pair, and each trial owns an RNG keyed by (seed, trial_id),
so results are reproducible independently of execution order or thread count.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .an_design import bob_rate_with_an, design_unknown_csi, eve_rate_with_an
from .benchmarks import full_digital_ged, full_digital_no_pls, hybrid_no_pls
from .channel import ChannelRealization, UlaGeometry, draw_scatterer_pool, realize_channel
from .core import (
    LinkNoise,
    TransmitConfig,
    build_codebook,
    eve_capacity_from_matrices,
    rate_from_matrices,
    secrecy_rate,
)
from .secure_design import design_known_csi

ALGO_KNOWN_CSI = "known-csi"
ALGO_UNKNOWN_CSI_AN = "unknown-csi-an"
ALGO_HYBRID_NO_PLS = "hybrid-no-pls"
ALGO_FULL_DIGITAL_GED = "full-digital-ged"
ALGO_FULL_DIGITAL_NO_PLS = "full-digital-no-pls"

KNOWN_ALGORITHMS = (
    ALGO_KNOWN_CSI,
    ALGO_UNKNOWN_CSI_AN,
    ALGO_HYBRID_NO_PLS,
    ALGO_FULL_DIGITAL_GED,
    ALGO_FULL_DIGITAL_NO_PLS,
)

CSV_COLUMNS = (
    "trial_id",
    "algorithm",
    "x_kind",
    "x_value",
    "rate_bob",
    "rate_eve",
    "secrecy_rate",
    "infeasible",
)


class ConfigError(ValueError):
    """Invalid experiment configuration; `problems` lists the field-level issues."""

    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs: scenario, grids, trial count, seed, algorithms.

    Defaults are desk scale (32 antennas, 5-bit codebooks) so tests and smoke
    runs stay fast; `paper_scale()` gives the 192-antenna, 7-bit setup.
    `total_power_db` is the fixed transmit power (equal to the SNR in dB since
    the noise variances are 1) used by QoS sweeps.
    """

    antennas: tuple[int, int, int] = (32, 32, 32)
    rf_chains: int = 2
    streams: int = 2
    codebook_bits: int = 5
    pool_size: int = 20
    path_count_range: tuple[int, int] = (3, 8)
    snr_grid_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0)
    qos_grid: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0)
    total_power_db: float = 10.0
    num_trials: int = 50
    seed: int = 0
    algorithm_set: tuple[str, ...] = (
        ALGO_KNOWN_CSI,
        ALGO_HYBRID_NO_PLS,
        ALGO_FULL_DIGITAL_GED,
        ALGO_FULL_DIGITAL_NO_PLS,
    )

    @classmethod
    def paper_scale(cls) -> "ExperimentConfig":
        """Large-array scenario: 192 antennas everywhere, 7-bit codebooks."""
        return cls(antennas=(192, 192, 192), codebook_bits=7)

    def validate(self, kind: str | None = None) -> list[str]:
        """Field-level diagnostics; empty means valid for the given sweep kind."""
        problems: list[str] = []
        if len(self.antennas) != 3 or any(int(n) < 1 for n in self.antennas):
            problems.append("antennas: need three positive counts (alice, bob, eve)")
        if self.rf_chains < 1:
            problems.append("rf_chains: must be at least 1")
        if self.streams < 1:
            problems.append("streams: must be at least 1")
        elif self.streams > self.rf_chains:
            problems.append("streams: cannot exceed rf_chains")
        if self.codebook_bits < 1:
            problems.append("codebook_bits: must be at least 1")
        lo, hi = self.path_count_range
        if lo < 1 or hi < lo:
            problems.append("path_count_range: need 1 <= lo <= hi")
        elif self.pool_size < hi:
            problems.append("pool_size: must cover the maximum path count")
        if self.num_trials < 1:
            problems.append("num_trials: must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            problems.append("seed: must fit in an unsigned 64-bit integer")
        if not self.algorithm_set:
            problems.append("algorithm_set: must be nonempty")
        unknown = [a for a in self.algorithm_set if a not in KNOWN_ALGORITHMS]
        if unknown:
            problems.append(f"algorithm_set: unknown algorithms {unknown}")
        if len(set(self.algorithm_set)) != len(self.algorithm_set):
            problems.append("algorithm_set: duplicate entries")
        if ALGO_UNKNOWN_CSI_AN in self.algorithm_set and self.streams >= self.rf_chains:
            problems.append("streams: unknown-csi-an needs streams < rf_chains")

        if kind == "snr":
            if not self.snr_grid_db:
                problems.append("snr_grid_db: must be nonempty for an SNR sweep")
            if ALGO_UNKNOWN_CSI_AN in self.algorithm_set:
                problems.append("algorithm_set: unknown-csi-an requires a QoS sweep")
        elif kind == "qos":
            if not self.qos_grid:
                problems.append("qos_grid: must be nonempty for a QoS sweep")
            if any(q < 0 for q in self.qos_grid):
                problems.append("qos_grid: QoS targets must be nonnegative")
            if ALGO_UNKNOWN_CSI_AN not in self.algorithm_set:
                problems.append("algorithm_set: a QoS sweep requires unknown-csi-an")
            extras = [
                a
                for a in self.algorithm_set
                if a not in (ALGO_UNKNOWN_CSI_AN, ALGO_HYBRID_NO_PLS)
            ]
            if extras:
                problems.append(
                    f"algorithm_set: {extras} not supported in a QoS sweep "
                    "(only unknown-csi-an plus the hybrid-no-pls full-power baseline)"
                )
        elif kind is not None:
            problems.append(f"unknown sweep kind {kind!r}")
        return problems

    def ensure_valid(self, kind: str | None = None) -> None:
        problems = self.validate(kind)
        if problems:
            raise ConfigError(problems)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        """Build a config from plain key/value data (parsed JSON), with coercion."""
        base = cls()
        valid_names = {f.name for f in fields(cls)}
        problems = [f"unknown config key {key!r}" for key in mapping if key not in valid_names]
        updates = {}
        for key, raw in mapping.items():
            if key not in valid_names:
                continue
            try:
                updates[key] = _coerce_field(key, raw)
            except (TypeError, ValueError) as err:
                problems.append(f"{key}: {err}")
        if problems:
            raise ConfigError(problems)
        return replace(base, **updates)


_TUPLE_FIELDS: dict[str, tuple[type, int | None]] = {
    "antennas": (int, 3),
    "path_count_range": (int, 2),
    "snr_grid_db": (float, None),
    "qos_grid": (float, None),
    "algorithm_set": (str, None),
}
_SCALAR_FIELDS: dict[str, type] = {
    "rf_chains": int,
    "streams": int,
    "codebook_bits": int,
    "pool_size": int,
    "num_trials": int,
    "seed": int,
    "total_power_db": float,
}


def _coerce_field(name: str, raw):
    """Coerce a raw config value (JSON scalar/list or CLI string) to the field type."""
    if name in _TUPLE_FIELDS:
        elem_type, length = _TUPLE_FIELDS[name]
        if isinstance(raw, str):
            raw = [part.strip() for part in raw.split(",") if part.strip() != ""]
        if not isinstance(raw, (list, tuple)):
            raise ValueError(f"expected a list, got {raw!r}")
        values = tuple(elem_type(v) for v in raw)
        if length is not None and len(values) != length:
            raise ValueError(f"expected {length} entries, got {len(values)}")
        return values
    if name in _SCALAR_FIELDS:
        target = _SCALAR_FIELDS[name]
        if target is int:
            if isinstance(raw, bool) or (isinstance(raw, float) and not raw.is_integer()):
                raise ValueError(f"expected an integer, got {raw!r}")
            return int(raw)
        return float(raw)
    raise ValueError(f"no coercion rule for field {name!r}")


@dataclass(frozen=True)
class SecrecyResult:
    """One trial outcome at one grid point for one algorithm."""

    trial_id: int
    algorithm: str
    x_kind: str
    x_value: float
    rate_bob: float
    rate_eve: float
    secrecy_rate: float
    infeasible: bool


def snr_db_to_power(snr_db: float) -> float:
    return float(10.0 ** (snr_db / 10.0))


def _trial_channels(
    config: ExperimentConfig, trial: int
) -> tuple[ChannelRealization, ChannelRealization]:
    """Draw the paired Bob/Eve channels for one trial (counter-keyed RNG)."""
    rng = np.random.default_rng((config.seed, trial))
    pool = draw_scatterer_pool(rng, config.pool_size, config.path_count_range)
    n_a, n_b, n_e = config.antennas
    geo_a = UlaGeometry(n_a)
    h_bob = realize_channel(pool, "bob", geo_a, UlaGeometry(n_b), 1.0, rng)
    h_eve = realize_channel(pool, "eve", geo_a, UlaGeometry(n_e), 1.0, rng)
    return h_bob, h_eve


def _run_trials(worker: Callable[[int], list[SecrecyResult]], num_trials: int, threads: int) -> list[SecrecyResult]:
    if threads < 0:
        raise ValueError("threads must be nonnegative (0 = auto)")
    max_workers = threads if threads > 0 else (os.cpu_count() or 1)
    if max_workers == 1 or num_trials == 1:
        per_trial = [worker(t) for t in range(num_trials)]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_trial = list(pool.map(worker, range(num_trials)))
    return [row for rows in per_trial for row in rows]


def run_snr_sweep(config: ExperimentConfig, threads: int = 0) -> list[SecrecyResult]:
    """Secrecy rate versus SNR for every configured algorithm.

    One channel pair per trial is shared across all SNR points and
    algorithms.  The eavesdropper rate is always her combiner-independent
    capacity for the algorithm's transmit matrix.
    """
    config.ensure_valid("snr")
    n_a, n_b, _ = config.antennas
    pre_cb = build_codebook(UlaGeometry(n_a), config.codebook_bits)
    comb_cb = build_codebook(UlaGeometry(n_b), config.codebook_bits)
    noise_b = LinkNoise(1.0)
    noise_e = LinkNoise(1.0)
    design_tx = TransmitConfig(1.0, config.streams, config.rf_chains)

    def worker(trial: int) -> list[SecrecyResult]:
        h_bob, h_eve = _trial_channels(config, trial)
        # Power-independent designs are built once per trial.
        static: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for algo in config.algorithm_set:
            if algo == ALGO_KNOWN_CSI:
                d = design_known_csi(h_bob, h_eve, pre_cb, comb_cb, design_tx)
                static[algo] = (d.precoder.matrix, d.combiner.matrix)
            elif algo == ALGO_HYBRID_NO_PLS:
                d = hybrid_no_pls(h_bob, pre_cb, comb_cb, design_tx)
                static[algo] = (d.precoder.matrix, d.combiner.matrix)
            elif algo == ALGO_FULL_DIGITAL_NO_PLS:
                static[algo] = full_digital_no_pls(h_bob, design_tx)

        rows = []
        for snr_db in config.snr_grid_db:
            power = snr_db_to_power(snr_db)
            for algo in config.algorithm_set:
                if algo == ALGO_FULL_DIGITAL_GED:
                    tx = TransmitConfig(power, config.streams, config.rf_chains)
                    f, w = full_digital_ged(h_bob, h_eve, tx, noise_b, noise_e)
                else:
                    f, w = static[algo]
                rb = rate_from_matrices(h_bob.matrix, f, w, noise_b.variance, power)
                re = eve_capacity_from_matrices(h_eve.matrix, f, noise_e.variance, power)
                rows.append(
                    SecrecyResult(
                        trial_id=trial,
                        algorithm=algo,
                        x_kind="snr_db",
                        x_value=float(snr_db),
                        rate_bob=rb,
                        rate_eve=re,
                        secrecy_rate=secrecy_rate(rb, re),
                        infeasible=False,
                    )
                )
        return rows

    return _run_trials(worker, config.num_trials, threads)


def run_qos_sweep(config: ExperimentConfig, threads: int = 0) -> list[SecrecyResult]:
    """Artificial-noise spectrum efficiency versus the QoS target.

    At a fixed total power (`total_power_db`), each QoS target gets its own
    power split; rows record the legitimate rate under the full transmit
    model, the eavesdropper's noise-degraded rate, and the infeasibility
    flag.  When hybrid-no-pls is also configured, baseline rows with all
    power spent on the signal are emitted for comparison.
    """
    config.ensure_valid("qos")
    n_a, n_b, _ = config.antennas
    pre_cb = build_codebook(UlaGeometry(n_a), config.codebook_bits)
    comb_cb = build_codebook(UlaGeometry(n_b), config.codebook_bits)
    noise_b = LinkNoise(1.0)
    noise_e = LinkNoise(1.0)
    power = snr_db_to_power(config.total_power_db)
    tx = TransmitConfig(power, config.streams, config.rf_chains)
    with_baseline = ALGO_HYBRID_NO_PLS in config.algorithm_set

    def worker(trial: int) -> list[SecrecyResult]:
        h_bob, h_eve = _trial_channels(config, trial)
        rows = []
        baseline: tuple[float, float] | None = None
        for qos in config.qos_grid:
            an = design_unknown_csi(h_bob, pre_cb, comb_cb, tx, noise_b, qos)
            rb = bob_rate_with_an(h_bob, an, noise_b)
            re = eve_rate_with_an(h_eve, an, noise_e)
            rows.append(
                SecrecyResult(
                    trial_id=trial,
                    algorithm=ALGO_UNKNOWN_CSI_AN,
                    x_kind="qos",
                    x_value=float(qos),
                    rate_bob=rb,
                    rate_eve=re,
                    secrecy_rate=secrecy_rate(rb, re),
                    infeasible=not an.feasible,
                )
            )
            if with_baseline:
                if baseline is None:
                    f, w = an.base.precoder.matrix, an.base.combiner.matrix
                    rb0 = rate_from_matrices(h_bob.matrix, f, w, noise_b.variance, power)
                    re0 = eve_capacity_from_matrices(h_eve.matrix, f, noise_e.variance, power)
                    baseline = (rb0, re0)
                rb0, re0 = baseline
                rows.append(
                    SecrecyResult(
                        trial_id=trial,
                        algorithm=ALGO_HYBRID_NO_PLS,
                        x_kind="qos",
                        x_value=float(qos),
                        rate_bob=rb0,
                        rate_eve=re0,
                        secrecy_rate=secrecy_rate(rb0, re0),
                        infeasible=False,
                    )
                )
        return rows

    return _run_trials(worker, config.num_trials, threads)


def _sorted_rows(results: Iterable[SecrecyResult]) -> list[SecrecyResult]:
    return sorted(results, key=lambda r: (r.algorithm, r.x_value, r.trial_id))


def _result_to_record(result: SecrecyResult) -> dict:
    return {
        "trial_id": result.trial_id,
        "algorithm": result.algorithm,
        "x_kind": result.x_kind,
        "x_value": result.x_value,
        "rate_bob": result.rate_bob,
        "rate_eve": result.rate_eve,
        "secrecy_rate": result.secrecy_rate,
        "infeasible": int(result.infeasible),
    }


def emit_results(
    results: Sequence[SecrecyResult],
    format: str = "csv",
    destination: str | Path | io.TextIOBase = "results.csv",
) -> None:
    """Write results sorted by (algorithm, x_value, trial_id) as CSV or JSON.

    Output is byte-deterministic for a given result set.  `destination` may
    be a path or an open text stream.
    """
    if not results:
        raise ValueError("results must be nonempty")
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    rows = _sorted_rows(results)

    def write(stream) -> None:
        if format == "csv":
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                rec = _result_to_record(r)
                writer.writerow([rec[col] for col in CSV_COLUMNS])
        else:
            json.dump([_result_to_record(r) for r in rows], stream, indent=2)
            stream.write("\n")

    if hasattr(destination, "write"):
        write(destination)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as stream:
            write(stream)


def load_results(
    source: str | Path | io.TextIOBase,
    format: str = "csv",
) -> list[SecrecyResult]:
    """Read back results emitted by `emit_results` (exact float round-trip)."""
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")

    def parse(stream) -> list[SecrecyResult]:
        if format == "csv":
            reader = csv.DictReader(stream)
            records = list(reader)
        else:
            records = json.load(stream)
        return [
            SecrecyResult(
                trial_id=int(rec["trial_id"]),
                algorithm=str(rec["algorithm"]),
                x_kind=str(rec["x_kind"]),
                x_value=float(rec["x_value"]),
                rate_bob=float(rec["rate_bob"]),
                rate_eve=float(rec["rate_eve"]),
                secrecy_rate=float(rec["secrecy_rate"]),
                infeasible=bool(int(rec["infeasible"])),
            )
            for rec in records
        ]

    if hasattr(source, "read"):
        return parse(source)
    with open(source, "r", encoding="utf-8", newline="") as stream:
        return parse(stream)
