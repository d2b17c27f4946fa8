from .config import (
    CACHE_ENV,
    RunConfig,
    SearchOptions,
    SymbolOptions,
    Tolerances,
    canonical_json,
    digest,
    load_config,
    load_defaults,
    merge,
)

DEFAULT_TOLERANCES = Tolerances()
