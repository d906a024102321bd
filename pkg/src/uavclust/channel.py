"""Propagation math: A2G free-space links and V2V fading links.

Every function here is pure; fading/shadowing draws take an explicit
numpy Generator so callers own all randomness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LinkSample:
    """One evaluated link: distance, power gain ratio and SNR ratio."""

    distance: float
    gain: float
    snr: float


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a dBm level to watts."""
    return 10.0 ** (p_dbm / 10.0) * 1e-3


def a2g_distance(uav_x: float, uav_y: float, altitude: float,
                 veh_x: float, veh_y: float) -> float:
    """Euclidean UAV-to-vehicle distance; never below the hover altitude."""
    return math.sqrt((uav_x - veh_x) ** 2 + (uav_y - veh_y) ** 2 + altitude ** 2)


def a2g_gain(d: float, g0: float) -> float:
    """Free-space power gain g0 / d^2 relative to the 1 m reference."""
    if d <= 0.0:
        raise ValueError(f"a2g_gain: distance must be positive, got {d}")
    return g0 / (d * d)


def a2g_snr(assigned: bool, p_uav: float, gain: float, noise: float) -> float:
    """A2G SNR; zero for an unassigned link."""
    if noise <= 0.0:
        raise ValueError(f"a2g_snr: noise power must be positive, got {noise}")
    if not assigned:
        return 0.0
    return p_uav * gain / noise


def v2v_large_scale(d: float, shadow_mu: float, loss_const: float,
                    loss_exp: float) -> float:
    """Large-scale V2V fading: shadowing times path loss mu * L * d^-eta."""
    if d <= 0.0:
        raise ValueError(f"v2v_large_scale: distance must be positive, got {d}")
    if shadow_mu <= 0.0:
        raise ValueError(f"v2v_large_scale: shadowing must be positive, got {shadow_mu}")
    return shadow_mu * loss_const * d ** (-loss_exp)


def v2v_gain(large_scale: float, fast_fading: float) -> float:
    """Instantaneous V2V gain: exponential fast-fading factor times J_V."""
    if fast_fading < 0.0:
        raise ValueError(f"v2v_gain: fading factor cannot be negative, got {fast_fading}")
    return fast_fading * large_scale


def v2v_snr(p_vehicle: float, gain: float, noise: float) -> float:
    """V2V SNR with the vehicle transmit power."""
    if noise <= 0.0:
        raise ValueError(f"v2v_snr: noise power must be positive, got {noise}")
    return p_vehicle * gain / noise


def sample_fast_fading(rng: np.random.Generator) -> float:
    """Unit-mean exponential fast-fading draw."""
    return float(rng.exponential(1.0))


def sample_shadowing(rng: np.random.Generator, std_db: float) -> float:
    """Log-normal shadowing factor with median 1 and the given dB spread."""
    return float(10.0 ** (rng.normal(0.0, std_db) / 10.0))
