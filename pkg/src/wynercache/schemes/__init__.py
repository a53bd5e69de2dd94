"""Achievability schemes: splitting, placements, schedules, pipelines, combinators."""

from .mds import TooFewParts, mds_decode, mds_encode
from .parts import (
    BadLength,
    DuplicateLabel,
    PartitionedMessage,
    WrongPartCount,
    reconstruct_five,
    split_full,
    split_soft,
)
from .pipeline import (
    ConfigMismatch,
    Ideal,
    MonteCarlo,
    PowerViolation,
    SimResult,
    physical_of,
    prop1_placement,
    role_of,
    round_robin_soft,
    run_full,
    run_soft,
    run_soft_prop1,
)
from .placement import cache_placement_full, cache_placement_soft, cached_parts_soft
from .points import (
    SchemePoint,
    augment_prop1,
    baseline_point,
    full_point,
    memory_rate_full,
    memory_rate_soft,
    rate_full,
    rate_soft,
    soft_point,
    time_share,
)
from .schedule import (
    SILENT,
    DecodePlan,
    DeliverySchedule,
    Direct,
    KTooSmall,
    PeriodSchedule,
    Silent,
    Violation,
    XorPair,
    delivery_schedule_full,
    delivery_schedule_soft,
    verify_schedule,
)

__all__ = [
    "BadLength",
    "ConfigMismatch",
    "DecodePlan",
    "DeliverySchedule",
    "Direct",
    "DuplicateLabel",
    "Ideal",
    "KTooSmall",
    "MonteCarlo",
    "PartitionedMessage",
    "PeriodSchedule",
    "PowerViolation",
    "SILENT",
    "SchemePoint",
    "Silent",
    "SimResult",
    "TooFewParts",
    "Violation",
    "WrongPartCount",
    "XorPair",
    "augment_prop1",
    "baseline_point",
    "cache_placement_full",
    "cache_placement_soft",
    "cached_parts_soft",
    "delivery_schedule_full",
    "delivery_schedule_soft",
    "full_point",
    "mds_decode",
    "mds_encode",
    "memory_rate_full",
    "memory_rate_soft",
    "physical_of",
    "prop1_placement",
    "rate_full",
    "rate_soft",
    "reconstruct_five",
    "role_of",
    "round_robin_soft",
    "run_full",
    "run_soft",
    "run_soft_prop1",
    "soft_point",
    "split_full",
    "split_soft",
    "time_share",
    "verify_schedule",
]
