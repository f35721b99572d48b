"""Shared numerical kernels: complex SVD, water-filling, Hermitian solve.

All functions are pure and thread-safe.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError, NumericalError

# Singular values below RANK_TOL * s_max are treated as exact zeros in
# downstream capacity sums.
RANK_TOL = 1e-12


@dataclass(frozen=True)
class PowerAllocation:
    """Water-filling result: per-channel powers and the water level mu."""

    powers: np.ndarray  # non-negative, sum <= budget
    water_level: float


def svd(matrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD of a complex matrix.

    Returns (s, u, v) with s non-increasing and matrix = u @ diag(s) @ v^H.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInputError("svd expects a non-empty 2-D matrix")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("svd input contains non-finite entries")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return s, u, vh.conj().T


def water_fill(gains, budget: float, noise: float) -> PowerAllocation:
    """Water-filling power allocation over parallel channels.

    Maximizes sum log2(1 + p_i g_i / noise) s.t. sum p_i <= budget, p_i >= 0.
    The water level mu is found by bisection (p_i = max(0, mu - noise/g_i)),
    then refined exactly on the identified active set. Channels with zero
    gain get zero power; all-zero gains are an error.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0 or not np.all(np.isfinite(g)) or np.any(g < 0):
        raise InvalidInputError("gains must be a 1-D array of finite non-negative reals")
    if budget <= 0 or noise <= 0:
        raise InvalidInputError("budget and noise must be positive")
    positive = g > 0
    if not positive.any():
        raise DegenerateInputError("water_fill: all channel gains are zero")

    floors = noise / g[positive]
    # mu <= floors.min() + budget: the best channel alone absorbs the budget.
    lo, hi = 0.0, float(floors.min() + budget)
    # 200 halvings shrink the bracket by 2^-200, far below any float gap,
    # so the active set is identified exactly even for extreme floors.
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        total = np.maximum(0.0, mu - floors).sum()
        if total > budget:
            hi = mu
        else:
            lo = mu
    mu = 0.5 * (lo + hi)
    active = mu > floors
    if active.any():
        # Exact water level for the active set: sum(mu - floor_i) = budget.
        mu = (budget + floors[active].sum()) / active.sum()
    powers = np.zeros_like(g)
    powers[positive] = np.maximum(0.0, mu - floors)
    return PowerAllocation(powers=powers, water_level=float(mu))


def waterfill_capacity(gains, budget: float, noise: float) -> float:
    """Spectral efficiency (bps/Hz) of water-filling over parallel channels."""
    g = np.asarray(gains, dtype=float)
    if not (g > 0).any():
        return 0.0
    alloc = water_fill(g, budget, noise)
    return float(np.log2(1.0 + alloc.powers * g / noise).sum())


def hermitian_solve(c, b) -> np.ndarray:
    """Solve C x = b for Hermitian positive definite C."""
    cm = np.asarray(c, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise InvalidInputError("C must be square")
    if not (np.all(np.isfinite(cm)) and np.all(np.isfinite(bv))):
        raise InvalidInputError("hermitian_solve input contains non-finite entries")
    scale = np.linalg.norm(cm)
    if np.linalg.norm(cm - cm.conj().T) > 1e-12 * max(scale, 1e-300):
        raise InvalidInputError("C is not Hermitian to within 1e-12")
    try:
        np.linalg.cholesky(cm)  # positive definiteness check
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"C is singular or indefinite (condition number {np.linalg.cond(cm):.3e})"
        ) from exc
    return np.linalg.solve(cm, bv)
