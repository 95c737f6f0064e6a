from ._yspde import (
    Grid,
    YspdeError,
    canonical_config,
    deterministic_driver,
    holder_seminorm,
    one_mode_constant,
    oracle_young_linear,
    run_check,
    sample_bm,
    sample_fbm,
    solve_scalar_young,
    young_integral,
)

__all__ = [
    "Grid",
    "YspdeError",
    "canonical_config",
    "deterministic_driver",
    "holder_seminorm",
    "one_mode_constant",
    "oracle_young_linear",
    "run_check",
    "sample_bm",
    "sample_fbm",
    "solve_scalar_young",
    "young_integral",
]
