"""End-to-end scheme execution.

Two interchangeable backends drive the same schedules:

* ``Ideal`` treats every point-to-point hop as an erasure link that succeeds
  iff its attempted rate is strictly below the interference-free capacity;
  on success the submessage bits are delivered exactly and all XOR and
  cancellation algebra is carried out bit-exactly.
* ``MonteCarlo`` draws fresh shell codebooks per (transmitter, period), runs
  the actual noisy channel, cancels known interferers from cache, and decodes
  by nearest neighbor.

Receivers 2..K-1 are the soft-handoff scheme's guarantee; Rx 1 and Rx K only
collect one or two submessages each and are repaired by the round-robin
wrapper, which rotates all labels over K super-periods and erasure-codes each
message so that any K-2 of its K coded parts suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..channel import cancel_known, check_power, transmit_full, transmit_soft
from ..codec import LinkBudget, draw_codebook, ideal_link, nn_decode
from ..model import (
    Bitstring,
    CacheEntry,
    CachePlacement,
    DemandVector,
    MessageLibrary,
    NetworkConfig,
    SimError,
    Variant,
    validate_config,
)
from .mds import mds_decode, mds_encode
from .parts import DATA_PARTS_SOFT, PARTS_FULL, reconstruct_five, split_full, split_soft
from .placement import cache_placement_full, cache_placement_soft, cached_parts_soft
from .points import rate_full, rate_soft
from .schedule import (
    DeliverySchedule,
    Direct,
    Silent,
    XorPair,
    delivery_schedule_full,
    delivery_schedule_soft,
)

# Part label for the extra submessage cached at every receiver by the
# prop1 augmentation (labels 1..6 belong to the base scheme).
EXTRA_PART = 7

_SEED_CODEBOOK = 0xC0DE
_SEED_NOISE = 0x401E
_SEED_SUPER = 0x50BE


class PowerViolation(SimError):
    pass


class ConfigMismatch(SimError):
    pass


@dataclass(frozen=True)
class Ideal:
    """Capacity-threshold link abstraction; no block length involved."""


@dataclass(frozen=True)
class MonteCarlo:
    """Real-codeword simulation over ``n`` channel uses split evenly across periods."""

    n: int
    seed: int = 0


Backend = Union[Ideal, MonteCarlo]


@dataclass(frozen=True)
class SimResult:
    """Outcome of one delivery run."""

    decoded: dict[int, Bitstring | None]  # per-receiver payload guess
    success: dict[int, bool]  # bit-exact match with the demanded file
    guaranteed: tuple[int, ...]  # receivers the scheme promises to serve
    links_total: int
    link_failures: int
    rate_per_user: float
    memory_bits_per_receiver: int

    def all_guaranteed_ok(self) -> bool:
        return all(self.success[rx] for rx in self.guaranteed)


def _derive_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _check_inputs(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    variant: Variant,
    parts: int,
) -> None:
    validate_config(cfg)
    if cfg.variant is not variant:
        raise ConfigMismatch(f"config is {cfg.variant.value}, scheme needs {variant.value}")
    if len(demands) != cfg.k:
        raise ConfigMismatch(f"demand vector length {len(demands)} != K={cfg.k}")
    for d in demands:
        if not 1 <= d <= library.num_files:
            raise ConfigMismatch(f"demand {d} outside library 1..{library.num_files}")
    if library.payload_bits % parts != 0:
        raise ConfigMismatch(
            f"payload of {library.payload_bits} bits is not divisible by {parts}"
        )


def _true_index(action, part_bits: dict[int, tuple[Bitstring, ...]]) -> int:
    if isinstance(action, Direct):
        return part_bits[action.file][action.part - 1].value
    assert isinstance(action, XorPair)
    return (
        part_bits[action.file_a][action.part_a - 1].value
        ^ part_bits[action.file_b][action.part_b - 1].value
    )


def _execute(
    cfg: NetworkConfig,
    schedule: DeliverySchedule,
    placement: CachePlacement,
    part_bits: dict[int, tuple[Bitstring, ...]],
    backend: Backend,
    link_rate: float,
    bits_per_part: int,
) -> tuple[dict[int, dict[tuple[int, int], Bitstring]], int, int]:
    """Run all periods; returns (per-rx decoded (file, part) -> bits, failures, links)."""
    decoded: dict[int, dict[tuple[int, int], Bitstring]] = {
        rx: {} for rx in range(1, cfg.k + 1)
    }
    failures = 0
    links = 0

    if isinstance(backend, MonteCarlo):
        n_slot = backend.n // len(schedule.periods)
        if n_slot < 1:
            raise ConfigMismatch(f"block length {backend.n} too short for the period count")

    for per in schedule.periods:
        codebooks = {}
        received = None
        if isinstance(backend, MonteCarlo):
            blocks = []
            for tx in range(1, cfg.k + 1):
                action = per.tx_actions[tx]
                if isinstance(action, Silent):
                    blocks.append(np.zeros(n_slot))
                    continue
                cb = draw_codebook(
                    n_slot,
                    bits_per_part,
                    cfg.power - cfg.epsilon,
                    _derive_seed(backend.seed, _SEED_CODEBOOK, per.index, tx),
                )
                codebooks[tx] = cb
                blocks.append(cb.words[_true_index(action, part_bits)])
            for tx, block in enumerate(blocks, start=1):
                pc = check_power(block, cfg.power)
                if not pc.ok:
                    raise PowerViolation(
                        f"Tx {tx} block power {pc.measured:.6g} exceeds P={cfg.power}"
                    )
            noise_seed = _derive_seed(backend.seed, _SEED_NOISE, per.index)
            if cfg.variant is Variant.SOFT_HANDOFF:
                received = transmit_soft(blocks, cfg.gains, noise_seed)
            else:
                received = transmit_full(blocks, cfg.alpha, noise_seed)

        for rx in range(1, cfg.k + 1):
            plan = per.rx_plans[rx]
            if plan is None:
                continue
            links += 1
            cached_keys = [placement.lookup(rx, f, p) for _, f, p in plan.cancel]
            strip_bits = placement.lookup(rx, *plan.strip) if plan.strip else None
            if any(c is None for c in cached_keys) or (plan.strip and strip_bits is None):
                failures += 1
                continue
            referenced = [plan.source] + [tx for tx, _, _ in plan.cancel]
            if any(isinstance(per.tx_actions[tx], Silent) for tx in referenced):
                failures += 1
                continue

            source_action = per.tx_actions[plan.source]
            true_value = _true_index(source_action, part_bits)
            gain = 1.0 if plan.source == rx else cfg.gain_at(rx)

            if isinstance(backend, Ideal):
                ok = ideal_link(
                    LinkBudget(gain=gain, rate=link_rate, power=cfg.power - cfg.epsilon)
                )
                if not ok:
                    failures += 1
                    continue
                guess = true_value
            else:
                y = received[rx - 1]
                for (tx, _, _), cached in zip(plan.cancel, cached_keys):
                    y = cancel_known(y, cfg.gain_at(rx), codebooks[tx].words[cached.value])
                guess = nn_decode(y, codebooks[plan.source], gain)
                if guess != true_value:
                    failures += 1

            value = Bitstring(bits_per_part, guess)
            if strip_bits is not None:
                value = value ^ strip_bits
            decoded[rx][plan.target] = value
    return decoded, failures, links


def _finish_soft(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    placement: CachePlacement,
    decoded: dict[int, dict[tuple[int, int], Bitstring]],
) -> tuple[dict[int, Bitstring | None], dict[int, bool]]:
    payloads: dict[int, Bitstring | None] = {}
    success: dict[int, bool] = {}
    for rx in range(1, cfg.k + 1):
        want = demands.for_rx(rx)
        available = {p: bits for (f, p), bits in decoded[rx].items() if f == want}
        for p in cached_parts_soft(rx):
            cached = placement.lookup(rx, want, p)
            if cached is not None:
                available.setdefault(p, cached)
        if len(available) < DATA_PARTS_SOFT:
            payloads[rx] = None
            success[rx] = False
            continue
        chosen = dict(sorted(available.items())[:DATA_PARTS_SOFT])
        payloads[rx] = reconstruct_five(chosen)
        success[rx] = payloads[rx] == library.payload(want)
    return payloads, success


def run_soft(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    backend: Backend = Ideal(),
) -> SimResult:
    """One delivery round of the soft-handoff scheme (interior receivers guaranteed)."""
    _check_inputs(cfg, library, demands, Variant.SOFT_HANDOFF, DATA_PARTS_SOFT)
    bits_per_part = library.payload_bits // DATA_PARTS_SOFT
    part_bits = {
        f: split_soft(library.payload(f), f).parts
        for f in range(1, library.num_files + 1)
    }
    placement = cache_placement_soft(cfg.k, library)
    schedule = delivery_schedule_soft(cfg.k, demands)

    rate = rate_soft(cfg)
    if isinstance(backend, Ideal):
        link_rate = 3.0 * rate / 5.0  # one part over a third of the block
        reported_rate = rate
    else:
        n_slot = backend.n // 3
        link_rate = bits_per_part / max(n_slot, 1)
        reported_rate = library.payload_bits / (3.0 * max(n_slot, 1))

    decoded, failures, links = _execute(
        cfg, schedule, placement, part_bits, backend, link_rate, bits_per_part
    )
    payloads, success = _finish_soft(cfg, library, demands, placement, decoded)
    return SimResult(
        decoded=payloads,
        success=success,
        guaranteed=tuple(range(2, cfg.k)),
        links_total=links,
        link_failures=failures,
        rate_per_user=reported_rate,
        memory_bits_per_receiver=placement.bits_per_receiver,
    )


def run_full(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    backend: Backend = Ideal(),
) -> SimResult:
    """One delivery round of the full-model scheme (all K receivers guaranteed)."""
    _check_inputs(cfg, library, demands, Variant.FULL, PARTS_FULL)
    bits_per_part = library.payload_bits // PARTS_FULL
    part_bits = {
        f: split_full(library.payload(f), f).parts for f in range(1, library.num_files + 1)
    }
    placement = cache_placement_full(cfg.k, library)
    schedule = delivery_schedule_full(cfg.k, demands)

    rate = rate_full(cfg)
    if isinstance(backend, Ideal):
        link_rate = rate / 2.0
        reported_rate = rate
    else:
        link_rate = bits_per_part / backend.n
        reported_rate = library.payload_bits / backend.n

    decoded, failures, links = _execute(
        cfg, schedule, placement, part_bits, backend, link_rate, bits_per_part
    )
    payloads: dict[int, Bitstring | None] = {}
    success: dict[int, bool] = {}
    for rx in range(1, cfg.k + 1):
        want = demands.for_rx(rx)
        parts = {p: bits for (f, p), bits in decoded[rx].items() if f == want}
        parts.update(
            {p: b for p, b in placement.parts_of(rx, want).items() if p not in parts}
        )
        if set(parts) != {1, 2}:
            payloads[rx] = None
            success[rx] = False
            continue
        payloads[rx] = parts[1].concat(parts[2])
        success[rx] = payloads[rx] == library.payload(want)
    return SimResult(
        decoded=payloads,
        success=success,
        guaranteed=tuple(range(1, cfg.k + 1)),
        links_total=links,
        link_failures=failures,
        rate_per_user=reported_rate,
        memory_bits_per_receiver=placement.bits_per_receiver,
    )


def run_soft_prop1(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    extra_bits: int,
    backend: Backend = Ideal(),
) -> SimResult:
    """Soft-handoff run with an extra tail of every file cached at every receiver.

    Each payload is treated as (main || extra) with ``extra_bits`` trailing bits;
    the base scheme delivers the main piece and the extra piece is read from
    cache, lifting the operating point from (R, M) to (R + dR, M + D*dR).
    """
    if extra_bits < 0:
        raise ConfigMismatch(f"negative extra_bits {extra_bits}")
    if extra_bits == 0:
        return run_soft(cfg, library, demands, backend)
    main_bits = library.payload_bits - extra_bits
    if main_bits <= 0 or main_bits % DATA_PARTS_SOFT != 0:
        raise ConfigMismatch(
            f"main payload of {main_bits} bits is not divisible by {DATA_PARTS_SOFT}"
        )
    mains = tuple(Bitstring(main_bits, p.value >> extra_bits) for p in library)
    base = run_soft(cfg, MessageLibrary(mains), demands, backend)
    augmented = prop1_placement(cfg.k, library, extra_bits)

    decoded: dict[int, Bitstring | None] = {}
    success: dict[int, bool] = {}
    for rx in range(1, cfg.k + 1):
        want = demands.for_rx(rx)
        main_guess = base.decoded[rx]
        extra = augmented.lookup(rx, want, EXTRA_PART)
        if main_guess is None or extra is None:
            decoded[rx] = None
            success[rx] = False
            continue
        decoded[rx] = main_guess.concat(extra)
        success[rx] = decoded[rx] == library.payload(want)
    scale = library.payload_bits / main_bits
    return SimResult(
        decoded=decoded,
        success=success,
        guaranteed=base.guaranteed,
        links_total=base.links_total,
        link_failures=base.link_failures,
        rate_per_user=base.rate_per_user * scale,
        memory_bits_per_receiver=augmented.bits_per_receiver,
    )


def prop1_placement(k: int, library: MessageLibrary, extra_bits: int) -> CachePlacement:
    """Base soft placement on the main payloads plus the universal extra part."""
    main_bits = library.payload_bits - extra_bits
    mains = tuple(Bitstring(main_bits, p.value >> extra_bits) for p in library)
    base = cache_placement_soft(k, MessageLibrary(mains))
    mask = (1 << extra_bits) - 1
    per_rx = {
        rx: entries
        + tuple(
            CacheEntry(f, EXTRA_PART, Bitstring(extra_bits, library.payload(f).value & mask))
            for f in range(1, library.num_files + 1)
        )
        for rx, entries in base.per_receiver.items()
    }
    return CachePlacement(per_rx)


def role_of(physical: int, super_period: int, k: int) -> int:
    """Role index of physical node ``physical`` in super-period ``super_period``."""
    return (physical - super_period - 1) % k + 1


def physical_of(role: int, super_period: int, k: int) -> int:
    return (role + super_period - 1) % k + 1


def round_robin_soft(
    cfg: NetworkConfig,
    library: MessageLibrary,
    demands: DemandVector,
    backend: Backend = Ideal(),
) -> SimResult:
    """Rotate the soft-handoff scheme over K super-periods so all K receivers decode.

    Each message is erasure-coded into K parts of which any K-2 reconstruct it;
    super-period l delivers coded part l with all labels shifted by l, so every
    receiver plays a bad edge role exactly twice and still collects K-2 parts.
    The per-user rate shrinks by the factor (K-2)/K.
    """
    _check_inputs(cfg, library, demands, Variant.SOFT_HANDOFF, 1)
    k = cfg.k
    chunk = library.payload_bits // (k - 2)
    if library.payload_bits % (k - 2) != 0 or chunk % 8 != 0 or chunk % DATA_PARTS_SOFT != 0:
        raise ConfigMismatch(
            f"round-robin needs the payload divisible into K-2={k - 2} byte-aligned "
            f"parts each divisible by {DATA_PARTS_SOFT}; got {library.payload_bits} bits"
        )

    coded = {
        f: mds_encode(list(library.payload(f).split(k - 2)))
        for f in range(1, library.num_files + 1)
    }

    collected: dict[int, dict[int, Bitstring]] = {rx: {} for rx in range(1, k + 1)}
    failures = 0
    links = 0
    base_rate = 0.0
    memory_bits = 0
    for ell in range(1, k + 1):
        role_gains = tuple(cfg.gain_at(physical_of(r, ell, k)) for r in range(1, k + 1))
        sub_cfg = NetworkConfig.soft_handoff(k, role_gains, cfg.power, cfg.epsilon)
        sub_lib = MessageLibrary(tuple(coded[f][ell - 1] for f in range(1, library.num_files + 1)))
        sub_demands = DemandVector(
            tuple(demands.for_rx(physical_of(r, ell, k)) for r in range(1, k + 1))
        )
        sub_backend = backend
        if isinstance(backend, MonteCarlo):
            sub_backend = MonteCarlo(backend.n, _derive_seed(backend.seed, _SEED_SUPER, ell))
        sub = run_soft(sub_cfg, sub_lib, sub_demands, sub_backend)
        failures += sub.link_failures
        links += sub.links_total
        base_rate = sub.rate_per_user
        memory_bits += sub.memory_bits_per_receiver
        for rx in range(1, k + 1):
            role = role_of(rx, ell, k)
            if role in sub.guaranteed and sub.decoded[role] is not None:
                collected[rx][ell] = sub.decoded[role]

    decoded: dict[int, Bitstring | None] = {}
    success: dict[int, bool] = {}
    for rx in range(1, k + 1):
        want = demands.for_rx(rx)
        have = collected[rx]
        if len(have) < k - 2:
            decoded[rx] = None
            success[rx] = False
            continue
        take = dict(sorted(have.items())[: k - 2])
        data = mds_decode(take, k)
        decoded[rx] = Bitstring.concat_all(data)
        success[rx] = decoded[rx] == library.payload(want)
    return SimResult(
        decoded=decoded,
        success=success,
        guaranteed=tuple(range(1, k + 1)),
        links_total=links,
        link_failures=failures,
        rate_per_user=base_rate * (k - 2) / k,
        memory_bits_per_receiver=memory_bits,
    )
