"""Closed-form rate/memory operating points of the schemes, and the two
combinators (universal extra caching and time sharing) that trace out the
achievable tradeoff curves.

All rates are per user in bits per channel use; memory is normalized the same
way (cache bits divided by the block length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..model import NetworkConfig, SimError

# Baseline per-user multiplexing gain with no caches, entering time-sharing
# curves as an analytic anchor only (that scheme is not simulated here).
NO_CACHE_MG = 2.0 / 3.0


def rate_soft(cfg: NetworkConfig) -> float:
    """Per-user message rate of the soft-handoff scheme:
    (5/3) * 0.5*log2(1 + alpha_min^2 * (P - eps)) - 5*eps."""
    snr = cfg.alpha_min**2 * (cfg.power - cfg.epsilon)
    return (5.0 / 3.0) * 0.5 * math.log2(1.0 + snr) - 5.0 * cfg.epsilon


def rate_full(cfg: NetworkConfig) -> float:
    """Per-user message rate of the full-model scheme: 2*(0.5*log2(1+P-eps) - eps)."""
    return 2.0 * (0.5 * math.log2(1.0 + cfg.power - cfg.epsilon) - cfg.epsilon)


def memory_rate_soft(cfg: NetworkConfig, num_files: int) -> float:
    """Normalized cache size of the soft placement: two of five data parts of each file."""
    return 2.0 * num_files * rate_soft(cfg) / 5.0


def memory_rate_full(cfg: NetworkConfig, num_files: int) -> float:
    """Normalized cache size of the full placement: one of two parts of each file."""
    return num_files * rate_full(cfg) / 2.0


@dataclass(frozen=True)
class SchemePoint:
    """An achievable (rate, memory) operating point, both per user."""

    rate: float
    memory: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.rate < 0 or self.memory < 0:
            raise SimError(f"scheme point must be nonnegative, got ({self.rate}, {self.memory})")


def soft_point(cfg: NetworkConfig, num_files: int) -> SchemePoint:
    return SchemePoint(rate_soft(cfg), memory_rate_soft(cfg, num_files), "soft")


def full_point(cfg: NetworkConfig, num_files: int) -> SchemePoint:
    return SchemePoint(rate_full(cfg), memory_rate_full(cfg, num_files), "full")


def baseline_point(power: float) -> SchemePoint:
    """The cache-free anchor: per-user MG 2/3 at zero memory."""
    return SchemePoint(NO_CACHE_MG * 0.5 * math.log2(1.0 + power), 0.0, "no-cache")


def augment_prop1(base: SchemePoint, delta: float, num_files: int) -> SchemePoint:
    """Cache an extra rate-delta/D submessage of every file at every receiver:
    (R, M) becomes (R + delta/D, M + delta)."""
    if delta < 0:
        raise SimError(f"negative augmentation {delta}")
    return SchemePoint(base.rate + delta / num_files, base.memory + delta, base.label)


def time_share(a: SchemePoint, b: SchemePoint, lam: float) -> SchemePoint:
    """Convex combination of two operating points with weight ``lam`` on ``a``."""
    if not 0 <= lam <= 1:
        raise SimError(f"time-share fraction {lam} outside [0, 1]")
    return SchemePoint(
        lam * a.rate + (1 - lam) * b.rate,
        lam * a.memory + (1 - lam) * b.memory,
        a.label or b.label,
    )
