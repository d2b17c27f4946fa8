from .records import ITERecord, Kind, merge_records
from .search import (
    SCAN_DIVISIONS,
    check_alpha,
    counting_function,
    default_alpha,
    evaluate_off_axis,
    find_regular_ites,
    find_singular_ites,
    first_eigenvalue,
    ite_search,
    mode_certified,
    mode_cutoff,
    scan_mode,
    touch_confirmed,
    zero_threshold,
)

__all__ = [
    "ITERecord",
    "Kind",
    "merge_records",
    "SCAN_DIVISIONS",
    "check_alpha",
    "counting_function",
    "default_alpha",
    "evaluate_off_axis",
    "find_regular_ites",
    "find_singular_ites",
    "first_eigenvalue",
    "ite_search",
    "mode_certified",
    "mode_cutoff",
    "scan_mode",
    "touch_confirmed",
    "zero_threshold",
]
