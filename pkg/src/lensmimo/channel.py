"""Sparse multi-path mmWave channel: deterministic construction and the
stochastic 73 GHz generator (path loss, shadowing, per-path power fractions).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import LensArrayConfig, lens_response_spatial, spatial_decompose
from .errors import InvalidInputError

_LN10_OVER_10 = math.log(10.0) / 10.0


@dataclass(frozen=True)
class ChannelStats:
    """Stochastic channel model parameters (73 GHz measurement fit).

    Angle placement: exactly one of (fixed spatial-frequency list, angular
    spread in degrees) must be set per side. With a spread, the L path
    angles are equally spaced in [-spread/2, spread/2].
    """

    carrier_ghz: float = 73.0
    pathloss_intercept_db: float = 86.6
    pathloss_exponent: float = 2.45
    shadowing_std_db: float = 8.0
    delay_power_exponent: float = 3.0
    per_path_shadowing_std_db: float = 4.0
    distance_m: float = 100.0
    bandwidth_hz: float = 500e6
    noise_density_dbm_hz: float = -174.0
    max_excess_delay_s: float = 100e-9
    aoa_spatial_freqs: tuple[float, ...] | None = None
    aoa_spread_deg: float | None = None
    aod_spatial_freqs: tuple[float, ...] | None = None
    aod_spread_deg: float | None = None

    def __post_init__(self) -> None:
        if self.distance_m <= 0 or self.bandwidth_hz <= 0:
            raise InvalidInputError("distance and bandwidth must be positive")
        if self.max_excess_delay_s < 0:
            raise InvalidInputError("max excess delay must be non-negative")
        for fixed, spread, name in (
            (self.aoa_spatial_freqs, self.aoa_spread_deg, "AoA"),
            (self.aod_spatial_freqs, self.aod_spread_deg, "AoD"),
        ):
            if (fixed is None) == (spread is None):
                raise InvalidInputError(
                    f"exactly one of fixed list / angular spread must be set for {name}"
                )
            if fixed is not None and any(abs(v) > 1.0 for v in fixed):
                raise InvalidInputError(f"{name} spatial frequencies must lie in [-1, 1]")

    @property
    def mean_pathloss_db(self) -> float:
        """Distance-dependent path loss in dB, excluding shadowing."""
        return self.pathloss_intercept_db + 10.0 * self.pathloss_exponent * math.log10(
            self.distance_m
        )

    @property
    def mean_beta(self) -> float:
        """Analytic mean of the linear large-scale gain over lognormal shadowing."""
        return 10.0 ** (-self.mean_pathloss_db / 10.0) * math.exp(
            (_LN10_OVER_10 * self.shadowing_std_db) ** 2 / 2.0
        )

    @property
    def noise_power(self) -> float:
        """Receiver noise power (linear mW) = N0 * W."""
        return 10.0 ** (self.noise_density_dbm_hz / 10.0) * self.bandwidth_hz

    def tx_power(self, snr_db: float) -> float:
        """Transmit power (mW) for a target average SNR = P * E[beta] / sigma^2."""
        return 10.0 ** (snr_db / 10.0) * self.noise_power / self.mean_beta

    def placed_angles(self, num_paths: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-path AoA and AoD spatial frequencies under the placement rule."""
        out = []
        for fixed, spread, name in (
            (self.aoa_spatial_freqs, self.aoa_spread_deg, "AoA"),
            (self.aod_spatial_freqs, self.aod_spread_deg, "AoD"),
        ):
            if fixed is not None:
                if len(fixed) != num_paths:
                    raise InvalidInputError(
                        f"{name} list has {len(fixed)} entries for {num_paths} paths"
                    )
                out.append(np.asarray(fixed, dtype=float))
            else:
                angles = np.linspace(-spread / 2.0, spread / 2.0, num_paths)
                out.append(np.sin(np.deg2rad(angles)))
        return out[0], out[1]


@dataclass(frozen=True)
class PathSet:
    """The L multi-path parameters of one channel realization."""

    gains: np.ndarray  # complex linear amplitudes alpha_l
    delays_s: np.ndarray
    aoa_spatial_freqs: np.ndarray
    aod_spatial_freqs: np.ndarray

    def __post_init__(self) -> None:
        if self.num_paths < 1:
            raise InvalidInputError("a PathSet needs at least one path")
        if np.any(self.delays_s < 0):
            raise InvalidInputError("path delays must be non-negative")

    @property
    def num_paths(self) -> int:
        return len(self.gains)

    def rx_focusing(self, rx: LensArrayConfig) -> tuple[np.ndarray, np.ndarray]:
        """Per-path (focusing index, misalignment) on the receive side."""
        pairs = [spatial_decompose(v, rx.azimuth_dim) for v in self.aoa_spatial_freqs]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])

    def tx_focusing(self, tx: LensArrayConfig) -> tuple[np.ndarray, np.ndarray]:
        pairs = [spatial_decompose(v, tx.azimuth_dim) for v in self.aod_spatial_freqs]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])

    def delay_samples(self, sample_rate_hz: float) -> np.ndarray:
        """Path delays quantized to integer symbol intervals."""
        return np.rint(self.delays_s * sample_rate_hz).astype(int)


@dataclass(frozen=True)
class TappedChannel:
    """Discrete-delay channel over selected antenna subsets.

    ``taps`` merges paths with equal quantized delay (strictly increasing
    delays); ``path_taps`` keeps one rank-1 tap per path, in path order.
    """

    taps: tuple[tuple[int, np.ndarray], ...]
    path_taps: tuple[tuple[int, np.ndarray], ...]
    rx_indices: tuple[int, ...]
    tx_indices: tuple[int, ...]


def sample_paths(stats: ChannelStats, num_paths: int, rng) -> PathSet:
    """Draw one stochastic channel realization.

    alpha_l = sqrt(beta * kappa_l) * exp(j*eta_l) with lognormal-shadowed
    large-scale gain beta and normalized per-path power fractions kappa_l;
    delays are i.i.d. uniform over [0, T_m], sorted ascending. Angles follow
    the placement rule in ``stats``.
    """
    if num_paths < 1:
        raise InvalidInputError("num_paths must be at least 1")
    rng = np.random.default_rng(rng)
    shadowing = rng.normal(0.0, stats.shadowing_std_db)
    beta_db = -(stats.mean_pathloss_db + shadowing)
    beta = 10.0 ** (beta_db / 10.0)
    u = rng.random(num_paths)
    z = rng.normal(0.0, stats.per_path_shadowing_std_db, num_paths)
    raw = u ** (stats.delay_power_exponent - 1.0) * 10.0 ** (-0.1 * z)
    kappa = raw / raw.sum()
    eta = rng.uniform(0.0, 2.0 * np.pi, num_paths)
    delays = np.sort(rng.uniform(0.0, stats.max_excess_delay_s, num_paths))
    aoa, aod = stats.placed_angles(num_paths)
    return PathSet(
        gains=np.sqrt(beta * kappa) * np.exp(1j * eta),
        delays_s=delays,
        aoa_spatial_freqs=aoa,
        aod_spatial_freqs=aod,
    )


def narrowband_matrix(paths: PathSet, tx: LensArrayConfig, rx: LensArrayConfig) -> np.ndarray:
    """Narrow-band MIMO channel H = sum_l alpha_l a_R a_T^H (M x Q)."""
    h = np.zeros((rx.element_count, tx.element_count), dtype=complex)
    for alpha, phi_r, phi_t in zip(paths.gains, paths.aoa_spatial_freqs, paths.aod_spatial_freqs):
        a_r = lens_response_spatial(rx, phi_r)
        a_t = lens_response_spatial(tx, phi_t)
        h += alpha * np.outer(a_r, a_t.conj())
    return h


def _subset_positions(config: LensArrayConfig, subset) -> np.ndarray:
    subset = np.asarray(subset, dtype=int)
    half = (config.element_count - 1) // 2
    if subset.size == 0:
        raise InvalidInputError("antenna subset must be non-empty")
    if np.any(np.abs(subset) > half):
        raise InvalidInputError("antenna subset index outside the array")
    return subset + half


def tapped_channel(
    paths: PathSet,
    tx: LensArrayConfig,
    rx: LensArrayConfig,
    sample_rate_hz: float,
    rx_subset,
    tx_subset,
) -> TappedChannel:
    """Discrete-time tapped channel restricted to antenna subsets.

    Each path becomes a rank-1 tap at round(tau_l * W) samples; paths whose
    delays quantize to the same sample are summed into one merged tap.
    """
    rx_pos = _subset_positions(rx, rx_subset)
    tx_pos = _subset_positions(tx, tx_subset)
    delays = paths.delay_samples(sample_rate_hz)
    path_taps = []
    merged: dict[int, np.ndarray] = {}
    for alpha, phi_r, phi_t, n in zip(
        paths.gains, paths.aoa_spatial_freqs, paths.aod_spatial_freqs, delays
    ):
        a_r = lens_response_spatial(rx, phi_r)[rx_pos]
        a_t = lens_response_spatial(tx, phi_t)[tx_pos]
        mat = alpha * np.outer(a_r, a_t.conj())
        path_taps.append((int(n), mat))
        if int(n) in merged:
            merged[int(n)] = merged[int(n)] + mat
        else:
            merged[int(n)] = mat
    taps = tuple((n, merged[n]) for n in sorted(merged))
    return TappedChannel(
        taps=taps,
        path_taps=tuple(path_taps),
        rx_indices=tuple(int(m) for m in np.asarray(rx_subset, dtype=int)),
        tx_indices=tuple(int(q) for q in np.asarray(tx_subset, dtype=int)),
    )
