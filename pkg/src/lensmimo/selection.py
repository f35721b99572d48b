"""AoA/AoD-based antenna selection: per-path supporting antenna subsets and
channel reduction to the selected antennas."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import LensArrayConfig, lens_response_spatial
from .channel import PathSet
from .errors import InvalidInputError


@dataclass(frozen=True)
class SupportSets:
    """Per-path supporting antenna subsets and their unions.

    M_l / Q_l contain the antennas within (strict) distance delta of the
    path's focusing point; each is non-empty and holds its focusing index.
    """

    rx_sets: tuple[tuple[int, ...], ...]
    tx_sets: tuple[tuple[int, ...], ...]
    rx_union: tuple[int, ...]
    tx_union: tuple[int, ...]
    delta: int


def _per_path_sets(config: LensArrayConfig, spatial_freqs, delta: int):
    indices = config.element_indices
    sets = []
    for phi in spatial_freqs:
        center = config.azimuth_dim * phi
        members = indices[np.abs(indices - center) < delta]
        sets.append(tuple(int(m) for m in members))
    return tuple(sets)


def support_sets(
    paths: PathSet, tx: LensArrayConfig, rx: LensArrayConfig, delta: int = 1
) -> SupportSets:
    """Supporting antenna subsets for every path and their unions.

    Indices at exactly distance delta are excluded; indices falling outside
    the physical array are clipped away (the set stays non-empty since the
    nearest in-range antenna is within 1/2 < delta of the focusing point).
    """
    if delta < 1:
        raise InvalidInputError("delta must be a positive integer")
    rx_sets = _per_path_sets(rx, paths.aoa_spatial_freqs, delta)
    tx_sets = _per_path_sets(tx, paths.aod_spatial_freqs, delta)
    rx_union = tuple(sorted({m for s in rx_sets for m in s}))
    tx_union = tuple(sorted({q for s in tx_sets for q in s}))
    return SupportSets(
        rx_sets=rx_sets, tx_sets=tx_sets, rx_union=rx_union, tx_union=tx_union, delta=delta
    )


def _restricted(config: LensArrayConfig, spatial_freqs, subset) -> np.ndarray:
    half = (config.element_count - 1) // 2
    pos = np.asarray(subset, dtype=int) + half
    return np.array([lens_response_spatial(config, phi)[pos] for phi in spatial_freqs])


def restricted_rx_responses(paths: PathSet, sets: SupportSets, rx: LensArrayConfig) -> np.ndarray:
    """(L, |M_S|) receive responses restricted to the union subset M_S."""
    return _restricted(rx, paths.aoa_spatial_freqs, sets.rx_union)


def restricted_tx_responses(paths: PathSet, sets: SupportSets, tx: LensArrayConfig) -> np.ndarray:
    """(L, |Q_S|) transmit responses restricted to the union subset Q_S."""
    return _restricted(tx, paths.aod_spatial_freqs, sets.tx_union)


def reduce_channel(
    paths: PathSet, sets: SupportSets, tx: LensArrayConfig, rx: LensArrayConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Per-path responses restricted to the selected antennas.

    Returns (rx_responses, tx_responses) of shapes (L, |M_S|) and (L, |Q_S|);
    row l is the path-l response over the union subset.
    """
    return (
        restricted_rx_responses(paths, sets, rx),
        restricted_tx_responses(paths, sets, tx),
    )
