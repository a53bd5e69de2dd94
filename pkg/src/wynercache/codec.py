"""Random Gaussian shell codebooks with nearest-neighbor decoding, plus the
ideal capacity-threshold link abstraction.

Shell codewords are rescaled to exact empirical power, so the block-power
constraint holds deterministically rather than just almost surely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SimError

# Exhaustive nearest-neighbor decoding stays tractable at desk scale.
MAX_CODEBOOK_BITS = 20


class TooManyWords(SimError):
    pass


@dataclass(frozen=True, eq=False)
class Codebook:
    """2^L codewords indexed by L-bit integers, each with exact empirical power."""

    words: np.ndarray  # shape (num_words, n_uses)
    power: float

    @property
    def n_uses(self) -> int:
        return self.words.shape[1]

    @property
    def num_words(self) -> int:
        return self.words.shape[0]


def draw_codebook(n_uses: int, bits: int, power: float, seed: int) -> Codebook:
    """Draw 2^bits Gaussian-direction vectors, each rescaled to empirical power ``power``."""
    if bits > MAX_CODEBOOK_BITS:
        raise TooManyWords(f"codebook of 2^{bits} words exceeds the 2^{MAX_CODEBOOK_BITS} cap")
    if n_uses < 1 or bits < 1:
        raise SimError(f"need n_uses >= 1 and bits >= 1, got {n_uses}, {bits}")
    if power < 0:
        raise SimError(f"negative codeword power {power}")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((1 << bits, n_uses))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    words = directions * (math.sqrt(power * n_uses) / norms)
    return Codebook(words=words, power=power)


def nn_decode(y: np.ndarray, cb: Codebook, gain: float) -> int:
    """argmin over codewords c of ||y - gain*c||^2; ties break to the lowest index."""
    y = np.asarray(y, dtype=float)
    if y.shape != (cb.n_uses,):
        raise SimError(f"received block of shape {y.shape}, codebook expects ({cb.n_uses},)")
    distances = np.sum((y[None, :] - gain * cb.words) ** 2, axis=1)
    return int(np.argmin(distances))


def capacity(gain: float, power: float) -> float:
    """Interference-free AWGN capacity 0.5 * log2(1 + gain^2 * power), unit noise."""
    if power < 0:
        raise SimError(f"negative power {power}")
    return 0.5 * math.log2(1.0 + gain * gain * power)


@dataclass(frozen=True)
class LinkBudget:
    gain: float
    rate: float  # bits per channel use attempted on the link
    power: float
    noise_var: float = 1.0

    def __post_init__(self) -> None:
        if self.rate < 0:
            raise SimError(f"negative link rate {self.rate}")


def ideal_link(link: LinkBudget) -> bool:
    """Asymptotic link abstraction: success iff rate is strictly below capacity."""
    return link.rate < capacity(link.gain, link.power)
