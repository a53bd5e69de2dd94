"""Core domain types: network configuration, message library, demands, caches, bitstrings.

Conventions used throughout the package:

* transmitters and receivers are numbered 1..K around the circle,
* files are numbered 1..D, message parts are 1-based,
* rates are in bits per channel use (log base 2),
* noise variance is 1, so the SNR is set entirely by the power P.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator, Mapping

import numpy as np

DEFAULT_EPSILON = 0.05
# Library sizes below this are rejected unless explicitly allowed; the schemes
# themselves operate for any D >= 2.
MIN_LIBRARY_FILES = 6


class SimError(ValueError):
    """Base class for domain errors; the subclass name identifies the violated rule."""


class ConfigError(SimError):
    pass


class ZeroCrossGain(ConfigError):
    pass


class NonPositivePower(ConfigError):
    pass


class BadEpsilon(ConfigError):
    pass


class OddKForFullModel(ConfigError):
    pass


class LengthMismatch(SimError):
    pass


class Variant(Enum):
    """Interference topology: one-sided (soft handoff) or two-sided (full)."""

    SOFT_HANDOFF = "soft"
    FULL = "full"


@dataclass(frozen=True)
class NetworkConfig:
    """Physical setting of the circular network.

    ``gains`` holds the cross gains alpha_1..alpha_K for the soft-handoff
    variant and a single shared alpha for the full variant.
    """

    variant: Variant
    k: int
    gains: tuple[float, ...]
    power: float
    epsilon: float = DEFAULT_EPSILON

    @classmethod
    def soft_handoff(
        cls,
        k: int,
        gains: float | Iterable[float],
        power: float,
        epsilon: float = DEFAULT_EPSILON,
    ) -> "NetworkConfig":
        if isinstance(gains, (int, float)):
            gains = (float(gains),) * k
        return cls(Variant.SOFT_HANDOFF, k, tuple(float(g) for g in gains), power, epsilon)

    @classmethod
    def full(
        cls, k: int, alpha: float, power: float, epsilon: float = DEFAULT_EPSILON
    ) -> "NetworkConfig":
        return cls(Variant.FULL, k, (float(alpha),), power, epsilon)

    @property
    def alpha(self) -> float:
        """Shared cross gain of the full variant."""
        if self.variant is not Variant.FULL:
            raise ConfigError("alpha is only defined for the full variant")
        return self.gains[0]

    def gain_at(self, rx: int) -> float:
        """Cross gain heard by receiver ``rx`` from its neighbours."""
        if self.variant is Variant.SOFT_HANDOFF:
            return self.gains[rx - 1]
        return self.gains[0]

    @property
    def alpha_min(self) -> float:
        """min{1, |alpha_1|, ..., |alpha_K|}; the weakest link seen by any decoder."""
        return min(1.0, min(abs(g) for g in self.gains))

    def with_power(self, power: float) -> "NetworkConfig":
        return replace(self, power=power)


def validate_config(cfg: NetworkConfig) -> None:
    """Raise the named ConfigError for the first violated invariant."""
    if cfg.k < 3:
        raise ConfigError(f"K must be at least 3, got {cfg.k}")
    expected = cfg.k if cfg.variant is Variant.SOFT_HANDOFF else 1
    if len(cfg.gains) != expected:
        raise ConfigError(
            f"{cfg.variant.value} variant needs {expected} cross gain(s), got {len(cfg.gains)}"
        )
    for i, g in enumerate(cfg.gains, start=1):
        if g == 0:
            raise ZeroCrossGain(f"cross gain alpha_{i} must be nonzero")
    if cfg.power <= 0:
        raise NonPositivePower(f"power must be positive, got {cfg.power}")
    if not (0 < cfg.epsilon < cfg.power and cfg.epsilon < 1):
        raise BadEpsilon(
            f"epsilon must satisfy 0 < eps < min(P, 1), got eps={cfg.epsilon}, P={cfg.power}"
        )
    if cfg.variant is Variant.FULL and cfg.k % 2 != 0:
        raise OddKForFullModel(
            f"full variant requires an even K (odd/even caching is circularly "
            f"inconsistent for K={cfg.k})"
        )


@dataclass(frozen=True)
class Bitstring:
    """Immutable bit vector of a fixed length, stored MSB-first in an int."""

    length: int
    value: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise SimError(f"negative bitstring length {self.length}")
        if not 0 <= self.value < (1 << self.length):
            raise SimError("bitstring value out of range for its length")

    @classmethod
    def zeros(cls, length: int) -> "Bitstring":
        return cls(length, 0)

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "Bitstring":
        nbytes = (length + 7) // 8
        raw = int.from_bytes(rng.bytes(nbytes), "big") if nbytes else 0
        return cls(length, raw & ((1 << length) - 1) if length else 0)

    @classmethod
    def from_bits(cls, bits: str) -> "Bitstring":
        return cls(len(bits), int(bits, 2) if bits else 0)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstring":
        return cls(8 * len(data), int.from_bytes(data, "big"))

    @classmethod
    def from_hex(cls, hexstr: str, length: int) -> "Bitstring":
        return cls(length, int(hexstr, 16) if hexstr else 0)

    def bits(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_bytes(self) -> bytes:
        if self.length % 8 != 0:
            raise LengthMismatch(f"length {self.length} is not byte aligned")
        return self.value.to_bytes(self.length // 8, "big")

    def to_hex(self) -> str:
        nibbles = (self.length + 3) // 4
        return format(self.value, f"0{nibbles}x") if nibbles else ""

    def xor(self, other: "Bitstring") -> "Bitstring":
        if self.length != other.length:
            raise LengthMismatch(f"xor of lengths {self.length} and {other.length}")
        return Bitstring(self.length, self.value ^ other.value)

    __xor__ = xor

    def concat(self, other: "Bitstring") -> "Bitstring":
        return Bitstring(self.length + other.length, (self.value << other.length) | other.value)

    @classmethod
    def concat_all(cls, parts: Iterable["Bitstring"]) -> "Bitstring":
        out = cls.zeros(0)
        for p in parts:
            out = out.concat(p)
        return out

    def split(self, n_parts: int) -> tuple["Bitstring", ...]:
        """Split into ``n_parts`` equal chunks, part 1 holding the most significant bits."""
        if n_parts < 1 or self.length % n_parts != 0:
            raise LengthMismatch(f"cannot split {self.length} bits into {n_parts} equal parts")
        chunk = self.length // n_parts
        mask = (1 << chunk) - 1
        return tuple(
            Bitstring(chunk, (self.value >> ((n_parts - 1 - i) * chunk)) & mask)
            for i in range(n_parts)
        )


def xor(a: Bitstring, b: Bitstring) -> Bitstring:
    """Bitwise exclusive-or of two equal-length bitstrings."""
    return a.xor(b)


@dataclass(frozen=True)
class MessageLibrary:
    """The D file payloads, all of identical bit length."""

    payloads: tuple[Bitstring, ...]

    def __post_init__(self) -> None:
        if len(self.payloads) < 2:
            raise SimError("library needs at least 2 files")
        lengths = {p.length for p in self.payloads}
        if len(lengths) != 1:
            raise SimError(f"library payloads have mixed lengths {sorted(lengths)}")

    @property
    def num_files(self) -> int:
        return len(self.payloads)

    @property
    def payload_bits(self) -> int:
        return self.payloads[0].length

    def payload(self, file_index: int) -> Bitstring:
        """Payload of file ``file_index`` (1-based)."""
        if not 1 <= file_index <= self.num_files:
            raise SimError(f"file index {file_index} outside 1..{self.num_files}")
        return self.payloads[file_index - 1]

    def __iter__(self) -> Iterator[Bitstring]:
        return iter(self.payloads)


def random_library(
    num_files: int, payload_bits: int, seed: int, *, allow_small_d: bool = False
) -> MessageLibrary:
    """Draw ``num_files`` uniform i.i.d. payloads of ``payload_bits`` bits each."""
    if num_files < 2 or payload_bits < 1:
        raise SimError(f"need num_files >= 2 and payload_bits >= 1, got {num_files}, {payload_bits}")
    if num_files < MIN_LIBRARY_FILES and not allow_small_d:
        raise SimError(
            f"library size {num_files} < {MIN_LIBRARY_FILES}; pass allow_small_d=True to permit"
        )
    rng = np.random.default_rng(seed)
    return MessageLibrary(tuple(Bitstring.random(payload_bits, rng) for _ in range(num_files)))


@dataclass(frozen=True)
class DemandVector:
    """One requested file index per receiver."""

    entries: tuple[int, ...]

    @classmethod
    def checked(cls, entries: Iterable[int], k: int, num_files: int) -> "DemandVector":
        d = cls(tuple(int(e) for e in entries))
        if len(d.entries) != k:
            raise SimError(f"demand vector has {len(d.entries)} entries, expected K={k}")
        for e in d.entries:
            if not 1 <= e <= num_files:
                raise SimError(f"demand {e} outside 1..{num_files}")
        return d

    def for_rx(self, rx: int) -> int:
        return self.entries[rx - 1]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)


@dataclass(frozen=True)
class CacheEntry:
    file: int
    part: int
    bits: Bitstring


@dataclass(frozen=True)
class CachePlacement:
    """Per-receiver stored (file, part) contents with exact bit accounting."""

    per_receiver: Mapping[int, tuple[CacheEntry, ...]]

    def __post_init__(self) -> None:
        totals = set()
        for rx, entries in self.per_receiver.items():
            keys = [(e.file, e.part) for e in entries]
            if len(keys) != len(set(keys)):
                raise SimError(f"duplicate (file, part) cache entry at receiver {rx}")
            totals.add(sum(e.bits.length for e in entries))
        if len(totals) > 1:
            raise SimError(f"asymmetric cache memory across receivers: {sorted(totals)}")

    @property
    def bits_per_receiver(self) -> int:
        if not self.per_receiver:
            return 0
        first = next(iter(self.per_receiver.values()))
        return sum(e.bits.length for e in first)

    def lookup(self, rx: int, file: int, part: int) -> Bitstring | None:
        for e in self.per_receiver.get(rx, ()):
            if e.file == file and e.part == part:
                return e.bits
        return None

    def parts_of(self, rx: int, file: int) -> dict[int, Bitstring]:
        """All cached parts of ``file`` at receiver ``rx``, keyed by part index."""
        return {e.part: e.bits for e in self.per_receiver.get(rx, ()) if e.file == file}


# --- JSON serialization for harness logging -------------------------------

def config_to_json(cfg: NetworkConfig) -> dict:
    return {
        "variant": cfg.variant.value,
        "k": cfg.k,
        "gains": list(cfg.gains),
        "power": cfg.power,
        "epsilon": cfg.epsilon,
    }


def config_from_json(obj: Mapping) -> NetworkConfig:
    return NetworkConfig(
        Variant(obj["variant"]),
        int(obj["k"]),
        tuple(float(g) for g in obj["gains"]),
        float(obj["power"]),
        float(obj["epsilon"]),
    )


def library_to_json(lib: MessageLibrary) -> dict:
    return {
        "payload_bits": lib.payload_bits,
        "payloads": [p.to_hex() for p in lib.payloads],
    }


def library_from_json(obj: Mapping) -> MessageLibrary:
    bits = int(obj["payload_bits"])
    return MessageLibrary(tuple(Bitstring.from_hex(h, bits) for h in obj["payloads"]))


def demands_to_json(demands: DemandVector) -> dict:
    return {"demands": list(demands.entries)}


def demands_from_json(obj: Mapping) -> DemandVector:
    return DemandVector(tuple(int(e) for e in obj["demands"]))


def placement_to_json(placement: CachePlacement) -> dict:
    return {
        "total_bits_per_receiver": placement.bits_per_receiver,
        "cache_entries": [
            {"rx": rx, "file": e.file, "part": e.part, "bits": e.bits.to_hex(), "length": e.bits.length}
            for rx, entries in sorted(placement.per_receiver.items())
            for e in entries
        ],
    }


def placement_from_json(obj: Mapping) -> CachePlacement:
    per_rx: dict[int, list[CacheEntry]] = {}
    for row in obj["cache_entries"]:
        entry = CacheEntry(
            int(row["file"]), int(row["part"]), Bitstring.from_hex(row["bits"], int(row["length"]))
        )
        per_rx.setdefault(int(row["rx"]), []).append(entry)
    return CachePlacement({rx: tuple(v) for rx, v in per_rx.items()})
