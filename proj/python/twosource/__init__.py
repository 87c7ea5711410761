"""Python access to the twosource core: schedules, regular tables, extraction and compression estimates."""

from ._twosource import (
    InfeasibleError,
    check_sampled,
    check_weak,
    chernoff_feasible,
    compressor_version,
    dependency,
    dependency_threshold,
    extract,
    find_regular,
    generate,
    khat,
    random_table,
    rate_profile,
    required_prefix,
    schedule,
    seeded_source,
    zero_dilute,
)

__all__ = [
    "InfeasibleError",
    "check_sampled",
    "check_weak",
    "chernoff_feasible",
    "compressor_version",
    "dependency",
    "dependency_threshold",
    "extract",
    "find_regular",
    "generate",
    "khat",
    "random_table",
    "rate_profile",
    "required_prefix",
    "schedule",
    "seeded_source",
    "zero_dilute",
]
