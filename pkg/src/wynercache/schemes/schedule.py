"""Delivery schedules: per-period transmitter actions and receiver decode plans,
plus a mechanical validity checker.

Soft handoff runs three periods. In period p the transmitter class
(p - 1) mod 3 is silent, and Tx K is silent in every period, which cuts the
circle into non-interfering subnets of two active transmitters. Within each
subnet the first active transmitter sends one of its own submessage parts
directly and the second sends an XOR of a part of its own demand with a part
of the next receiver's demand. The part indices per period are pinned so that
every receiver class ends up with three decoded parts disjoint from its two
cached parts:

    period   silent class   direct part   xor (own, next)
      1           0              3            (6, 3)
      2           1              5            (1, 5)
      3           2              2            (4, 1)

The full model needs a single period: every transmitter sends the part its own
receiver is missing, and each receiver cancels both neighbours from cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..model import (
    CachePlacement,
    DemandVector,
    SimError,
    Variant,
)
from .parts import TOTAL_PARTS_SOFT
from .placement import cached_part_full, cached_parts_soft

MIN_SOFT_K = 5


class KTooSmall(SimError):
    pass


@dataclass(frozen=True)
class Silent:
    def files(self) -> tuple[int, ...]:
        return ()


@dataclass(frozen=True)
class Direct:
    file: int
    part: int

    def files(self) -> tuple[int, ...]:
        return (self.file,)


@dataclass(frozen=True)
class XorPair:
    file_a: int
    part_a: int
    file_b: int
    part_b: int

    def files(self) -> tuple[int, ...]:
        return (self.file_a, self.file_b)

    def sides(self) -> set[tuple[int, int]]:
        return {(self.file_a, self.part_a), (self.file_b, self.part_b)}


TxAction = Union[Silent, Direct, XorPair]
SILENT = Silent()


@dataclass(frozen=True)
class DecodePlan:
    """How one receiver uses one period.

    ``source`` is the transmitter whose codeword is decoded; ``cancel`` lists
    (tx, file, part) interferers subtracted using cached bits; ``strip`` names
    the cached (file, part) xored out of an XOR codeword; ``target`` is the
    (file, part) obtained.
    """

    source: int
    cancel: tuple[tuple[int, int, int], ...]
    strip: tuple[int, int] | None
    target: tuple[int, int]


@dataclass(frozen=True)
class PeriodSchedule:
    index: int
    silent_class: int | None  # k mod 3 value muted this period; None for the full model
    tx_actions: dict[int, TxAction]
    rx_plans: dict[int, DecodePlan | None]


@dataclass(frozen=True)
class DeliverySchedule:
    variant: Variant
    k: int
    demands: DemandVector
    periods: tuple[PeriodSchedule, ...]

    def to_json(self) -> dict:
        def action_json(a: TxAction) -> dict:
            if isinstance(a, Silent):
                return {"kind": "silent"}
            if isinstance(a, Direct):
                return {"kind": "direct", "file": a.file, "part": a.part}
            return {
                "kind": "xor",
                "file_a": a.file_a,
                "part_a": a.part_a,
                "file_b": a.file_b,
                "part_b": a.part_b,
            }

        def plan_json(p: DecodePlan | None) -> dict | None:
            if p is None:
                return None
            return {
                "source": p.source,
                "cancel": [list(c) for c in p.cancel],
                "strip": list(p.strip) if p.strip else None,
                "target": list(p.target),
            }

        return {
            "variant": self.variant.value,
            "k": self.k,
            "demands": list(self.demands.entries),
            "periods": [
                {
                    "index": per.index,
                    "silent_class": per.silent_class,
                    "tx_actions": {str(tx): action_json(a) for tx, a in sorted(per.tx_actions.items())},
                    "rx_plans": {str(rx): plan_json(p) for rx, p in sorted(per.rx_plans.items())},
                }
                for per in self.periods
            ],
        }


# Part assignments per period (see module docstring).
DIRECT_PART = {1: 3, 2: 5, 3: 2}
XOR_OWN_PART = {1: 6, 2: 1, 3: 4}
XOR_NEXT_PART = {1: 3, 2: 5, 3: 1}


def delivery_schedule_soft(k: int, demands: DemandVector) -> DeliverySchedule:
    """Three-period schedule for the soft-handoff scheme; Tx K stays silent throughout."""
    if k < MIN_SOFT_K:
        raise KTooSmall(f"soft-handoff schedule needs K >= {MIN_SOFT_K}, got {k}")
    if len(demands) != k:
        raise SimError(f"demand vector length {len(demands)} != K={k}")
    d = demands.for_rx

    periods = []
    for p in (1, 2, 3):
        silent = p - 1
        first = (silent + 1) % 3  # sends a direct part, decoded interference-free
        actions: dict[int, TxAction] = {}
        for tx in range(1, k + 1):
            if tx == k or tx % 3 == silent:
                actions[tx] = SILENT
            elif tx % 3 == first:
                actions[tx] = Direct(d(tx), DIRECT_PART[p])
            else:
                actions[tx] = XorPair(d(tx), XOR_OWN_PART[p], d(tx + 1), XOR_NEXT_PART[p])

        plans: dict[int, DecodePlan | None] = {}
        for rx in range(1, k + 1):
            cls = rx % 3
            prev = rx - 1 if rx > 1 else k
            if cls == silent:
                # Hears only the previous transmitter's XOR codeword.
                if prev == k:
                    plans[rx] = None
                else:
                    plans[rx] = DecodePlan(
                        source=prev,
                        cancel=(),
                        strip=(d(prev), XOR_OWN_PART[p]),
                        target=(d(rx), XOR_NEXT_PART[p]),
                    )
            elif cls == first:
                if rx == k:
                    plans[rx] = None
                else:
                    plans[rx] = DecodePlan(
                        source=rx, cancel=(), strip=None, target=(d(rx), DIRECT_PART[p])
                    )
            else:
                if rx == k:
                    plans[rx] = None
                else:
                    cancel = () if prev == k else ((prev, d(prev), DIRECT_PART[p]),)
                    plans[rx] = DecodePlan(
                        source=rx,
                        cancel=cancel,
                        strip=(d(rx + 1), XOR_NEXT_PART[p]),
                        target=(d(rx), XOR_OWN_PART[p]),
                    )
        periods.append(PeriodSchedule(p, silent, actions, plans))
    return DeliverySchedule(Variant.SOFT_HANDOFF, k, demands, tuple(periods))


def delivery_schedule_full(k: int, demands: DemandVector) -> DeliverySchedule:
    """Single-period schedule for the full model: everyone transmits, both neighbours cancelled."""
    if k % 2 != 0:
        raise SimError(f"full-model schedule needs even K, got {k}")
    if len(demands) != k:
        raise SimError(f"demand vector length {len(demands)} != K={k}")
    d = demands.for_rx

    actions: dict[int, TxAction] = {
        tx: Direct(d(tx), 2 if tx % 2 == 1 else 1) for tx in range(1, k + 1)
    }
    plans: dict[int, DecodePlan | None] = {}
    for rx in range(1, k + 1):
        prev = rx - 1 if rx > 1 else k
        nxt = rx + 1 if rx < k else 1
        neighbour_part = cached_part_full(rx)  # neighbours have opposite parity
        plans[rx] = DecodePlan(
            source=rx,
            cancel=((prev, d(prev), neighbour_part), (nxt, d(nxt), neighbour_part)),
            strip=None,
            target=(d(rx), 2 if rx % 2 == 1 else 1),
        )
    period = PeriodSchedule(1, None, actions, plans)
    return DeliverySchedule(Variant.FULL, k, demands, (period,))


@dataclass(frozen=True)
class Violation:
    kind: str  # knowledge | silent_class | cancel_key | extraction_key | part_count | interference
    period: int
    actor: int  # tx index for knowledge/silent_class, rx index otherwise
    detail: str


def _knowledge_set(schedule: DeliverySchedule, tx: int) -> set[int]:
    d = schedule.demands.for_rx
    nxt = tx + 1 if tx < schedule.k else 1
    if schedule.variant is Variant.SOFT_HANDOFF:
        return {d(tx), d(nxt)}
    prev = tx - 1 if tx > 1 else schedule.k
    return {d(prev), d(tx), d(nxt)}


def _heard_transmitters(schedule: DeliverySchedule, rx: int) -> tuple[int, ...]:
    prev = rx - 1 if rx > 1 else schedule.k
    if schedule.variant is Variant.SOFT_HANDOFF:
        return (prev, rx)
    nxt = rx + 1 if rx < schedule.k else 1
    return (prev, rx, nxt)


def verify_schedule(
    schedule: DeliverySchedule, placement: CachePlacement, demands: DemandVector
) -> list[Violation]:
    """Mechanically check a schedule; an empty list means the schedule is valid."""
    k = schedule.k
    if len(demands) != k:
        raise SimError(f"demand vector length {len(demands)} != K={k}")
    violations: list[Violation] = []
    decoded_parts: dict[int, list[int]] = {rx: [] for rx in range(1, k + 1)}

    for per in schedule.periods:
        # (a) silence pattern and transmitter knowledge
        for tx, action in per.tx_actions.items():
            if per.silent_class is not None:
                should_be_silent = tx == k or tx % 3 == per.silent_class
                if should_be_silent != isinstance(action, Silent):
                    violations.append(
                        Violation(
                            "silent_class",
                            per.index,
                            tx,
                            f"Tx {tx} must be {'silent' if should_be_silent else 'active'} "
                            f"in period {per.index}",
                        )
                    )
            known = _knowledge_set(schedule, tx)
            for f in action.files():
                if f not in known:
                    violations.append(
                        Violation(
                            "knowledge",
                            per.index,
                            tx,
                            f"Tx {tx} references file {f} outside its download set {sorted(known)}",
                        )
                    )

        for rx, plan in per.rx_plans.items():
            if plan is None:
                continue
            # (b) every cancellation key is cached and matches the interferer's action
            for tx, f, p in plan.cancel:
                action = per.tx_actions.get(tx)
                if not (isinstance(action, Direct) and (action.file, action.part) == (f, p)):
                    violations.append(
                        Violation(
                            "cancel_key",
                            per.index,
                            rx,
                            f"Rx {rx} cancels ({f}, {p}) from Tx {tx}, which sends {action}",
                        )
                    )
                if placement.lookup(rx, f, p) is None:
                    violations.append(
                        Violation(
                            "cancel_key",
                            per.index,
                            rx,
                            f"Rx {rx} lacks cached ({f}, {p}) needed to cancel Tx {tx}",
                        )
                    )
            # extraction consistency: the source action must carry exactly
            # {target, strip} for XOR plans, or the target for direct plans
            source_action = per.tx_actions.get(plan.source)
            if plan.strip is None:
                if not (
                    isinstance(source_action, Direct)
                    and (source_action.file, source_action.part) == plan.target
                ):
                    violations.append(
                        Violation(
                            "extraction_key",
                            per.index,
                            rx,
                            f"Rx {rx} expects direct {plan.target} from Tx {plan.source}, "
                            f"which sends {source_action}",
                        )
                    )
            else:
                wanted = {plan.target, plan.strip}
                if not (isinstance(source_action, XorPair) and source_action.sides() == wanted):
                    violations.append(
                        Violation(
                            "extraction_key",
                            per.index,
                            rx,
                            f"Rx {rx} expects xor of {sorted(wanted)} from Tx {plan.source}, "
                            f"which sends {source_action}",
                        )
                    )
                if placement.lookup(rx, *plan.strip) is None:
                    violations.append(
                        Violation(
                            "extraction_key",
                            per.index,
                            rx,
                            f"Rx {rx} lacks cached {plan.strip} to strip the xor",
                        )
                    )
            # (d) no active transmitter is heard beyond the decode plan
            allowed = {plan.source} | {tx for tx, _, _ in plan.cancel}
            for tx in _heard_transmitters(schedule, rx):
                if not isinstance(per.tx_actions.get(tx), Silent) and tx not in allowed:
                    violations.append(
                        Violation(
                            "interference",
                            per.index,
                            rx,
                            f"Rx {rx} hears active Tx {tx} not covered by its decode plan",
                        )
                    )
            if plan.target[0] == demands.for_rx(rx):
                decoded_parts[rx].append(plan.target[1])

    # (c) part accounting at the receivers the scheme guarantees
    if schedule.variant is Variant.SOFT_HANDOFF:
        for rx in range(2, k):
            cached = set(cached_parts_soft(rx))
            decoded = decoded_parts[rx]
            distinct = set(decoded)
            if len(decoded) != 3 or len(distinct) != 3 or distinct & cached:
                violations.append(
                    Violation(
                        "part_count",
                        0,
                        rx,
                        f"Rx {rx} decodes parts {sorted(decoded)} against cached {sorted(cached)}",
                    )
                )
            elif len(distinct | cached) < TOTAL_PARTS_SOFT - 1:
                violations.append(
                    Violation("part_count", 0, rx, f"Rx {rx} holds fewer than 5 distinct parts")
                )
    else:
        for rx in range(1, k + 1):
            need = {1, 2} - {cached_part_full(rx)}
            if set(decoded_parts[rx]) != need:
                violations.append(
                    Violation(
                        "part_count",
                        0,
                        rx,
                        f"Rx {rx} decodes parts {sorted(decoded_parts[rx])}, needs {sorted(need)}",
                    )
                )
    return violations
