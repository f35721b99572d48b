"""Conventional uniform-planar-array benchmark: narrowband eigenmode
capacity, wideband MIMO-OFDM capacity with cyclic-prefix overhead, and
power-based antenna selection under an RF-chain budget."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import UpaConfig, upa_response
from .channel import PathSet, TappedChannel
from .errors import InvalidInputError, UnsupportedConfigurationError
from .numerics import RANK_TOL, svd, water_fill, waterfill_capacity


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM numerology: subcarrier count, cyclic-prefix length, bandwidth.

    The cyclic prefix must cover the longest channel tap so that the
    per-subcarrier channels are exactly parallel (no residual ISI).
    """

    subcarriers: int = 512
    cp_samples: int = 50
    bandwidth_hz: float = 500e6

    def __post_init__(self) -> None:
        n = self.subcarriers
        if n < 1 or (n & (n - 1)) != 0:
            raise InvalidInputError("subcarrier count must be a power of two")
        if self.cp_samples < 0:
            raise InvalidInputError("cp_samples must be non-negative")
        if self.bandwidth_hz <= 0:
            raise InvalidInputError("bandwidth must be positive")


def _eigen_gains(h: np.ndarray) -> np.ndarray:
    s, _, _ = svd(h)
    if s.size and s[0] > 0:
        s = np.where(s < RANK_TOL * s[0], 0.0, s)
    return s**2


def eigenmode_capacity(h: np.ndarray, power: float, noise: float) -> float:
    """SVD eigenmode transmission with water-filling: sum of
    log2(1 + p_i s_i^2 / sigma^2) over the channel's singular values."""
    gains = _eigen_gains(np.asarray(h))
    if not np.any(gains > 0):
        return 0.0
    return waterfill_capacity(gains, power, noise)


def narrowband_upa_matrix(paths: PathSet, tx: UpaConfig, rx: UpaConfig) -> np.ndarray:
    """Narrowband UPA channel H = sum_l alpha_l b_R(phi_l) b_T(theta_l)^H."""
    h = np.zeros((rx.element_count, tx.element_count), dtype=complex)
    for alpha, phi_r, phi_t in zip(paths.gains, paths.aoa_spatial_freqs, paths.aod_spatial_freqs):
        b_r = upa_response(rx, math.asin(phi_r), "receive")
        b_t = upa_response(tx, math.asin(phi_t), "transmit")
        h += alpha * np.outer(b_r, b_t.conj())
    return h


def upa_tapped_channel(
    paths: PathSet, tx: UpaConfig, rx: UpaConfig, sample_rate_hz: float
) -> TappedChannel:
    """Discrete-time tapped UPA channel; paths with equal quantized delay
    are merged into one tap."""
    delays = paths.delay_samples(sample_rate_hz)
    path_taps = []
    merged: dict[int, np.ndarray] = {}
    for alpha, phi_r, phi_t, n in zip(
        paths.gains, paths.aoa_spatial_freqs, paths.aod_spatial_freqs, delays
    ):
        b_r = upa_response(rx, math.asin(phi_r), "receive")
        b_t = upa_response(tx, math.asin(phi_t), "transmit")
        mat = alpha * np.outer(b_r, b_t.conj())
        path_taps.append((int(n), mat))
        merged[int(n)] = merged.get(int(n), 0) + mat
    taps = tuple((n, merged[n]) for n in sorted(merged))
    return TappedChannel(
        taps=taps,
        path_taps=tuple(path_taps),
        rx_indices=tuple(range(rx.element_count)),
        tx_indices=tuple(range(tx.element_count)),
    )


def ofdm_subchannels(tapped: TappedChannel, subcarriers: int) -> list[np.ndarray]:
    """Frequency-domain subchannels H_k = sum_t tap_t exp(-j 2 pi k n_t / N)."""
    if any(n >= subcarriers for n, _ in tapped.taps):
        raise UnsupportedConfigurationError(
            "channel tap delay reaches or exceeds the OFDM symbol length"
        )
    k = np.arange(subcarriers)
    out = [np.zeros(tapped.taps[0][1].shape, dtype=complex) for _ in k]
    for n, mat in tapped.taps:
        phase = np.exp(-2j * np.pi * k * n / subcarriers)
        for i in range(subcarriers):
            out[i] = out[i] + phase[i] * mat
    return out


def ofdm_eigen_gains(subchannels: list[np.ndarray]) -> np.ndarray:
    """Pooled squared singular values of every subcarrier matrix."""
    return np.concatenate([_eigen_gains(h) for h in subchannels])


def ofdm_capacity_from_gains(
    gains: np.ndarray, power: float, noise: float, cfg: OfdmConfig
) -> float:
    """MIMO-OFDM spectral efficiency from pooled eigen-gains: a global power
    budget N*P is water-filled over all subcarrier eigen-gains and the sum
    rate is discounted by the CP overhead factor N/(N+cp)."""
    n = cfg.subcarriers
    if not np.any(gains > 0):
        return 0.0
    alloc = water_fill(gains, n * power, noise)
    active = gains > 0
    rate = np.log2(1.0 + alloc.powers[active] * gains[active] / noise).sum()
    return (n / (n + cfg.cp_samples)) * rate / n


def mimo_ofdm_capacity(
    subchannels: list[np.ndarray], power: float, noise: float, cfg: OfdmConfig
) -> float:
    """MIMO-OFDM spectral efficiency of the given subcarrier matrices."""
    if len(subchannels) != cfg.subcarriers:
        raise InvalidInputError("subchannel count must equal the subcarrier count")
    return ofdm_capacity_from_gains(ofdm_eigen_gains(subchannels), power, noise, cfg)


def power_select_antennas(
    tapped: TappedChannel, n_rx_rf: int, n_tx_rf: int
) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage power-based selection under RF-chain budgets.

    Picks the n_rx_rf rows with the largest squared channel magnitude summed
    over taps and columns, then the n_tx_rf columns on the row-restricted
    channel. Ties go to the lower antenna index.
    """
    n_rx, n_tx = tapped.taps[0][1].shape
    if not (1 <= n_rx_rf <= n_rx and 1 <= n_tx_rf <= n_tx):
        raise InvalidInputError("RF budgets must be between 1 and the array size")
    energy = np.zeros((n_rx, n_tx))
    for _, mat in tapped.taps:
        energy += np.abs(mat) ** 2
    row_power = energy.sum(axis=1)
    # lexsort: primary key descending power, secondary ascending index
    rows = np.sort(np.lexsort((np.arange(n_rx), -row_power))[:n_rx_rf])
    col_power = energy[rows].sum(axis=0)
    cols = np.sort(np.lexsort((np.arange(n_tx), -col_power))[:n_tx_rf])
    return rows, cols


def restrict_taps(tapped: TappedChannel, rows: np.ndarray, cols: np.ndarray) -> TappedChannel:
    """Tapped channel restricted to selected receive rows and transmit columns."""
    rows = np.asarray(rows, dtype=int)
    cols = np.asarray(cols, dtype=int)
    return TappedChannel(
        taps=tuple((n, mat[np.ix_(rows, cols)]) for n, mat in tapped.taps),
        path_taps=tuple((n, mat[np.ix_(rows, cols)]) for n, mat in tapped.path_taps),
        rx_indices=tuple(tapped.rx_indices[i] for i in rows),
        tx_indices=tuple(tapped.tx_indices[j] for j in cols),
    )
