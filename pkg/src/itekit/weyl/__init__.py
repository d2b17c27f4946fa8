from .jumps import (
    Decomposition,
    JumpRecord,
    decomposition,
    jump_analysis,
    jump_table,
    measure_jump,
    pole_windows,
    residue_sign_jump,
)
from .report import BoundRow, WeylReport, verify_lower_bound
from .volume import (
    WeylFit,
    dirichlet_counting,
    dirichlet_counts,
    sphere_area,
    unit_ball_volume,
    weyl_constant,
    weyl_constant_literal,
    weyl_fit,
)

__all__ = [
    "BoundRow",
    "Decomposition",
    "JumpRecord",
    "WeylFit",
    "WeylReport",
    "decomposition",
    "dirichlet_counting",
    "dirichlet_counts",
    "jump_analysis",
    "jump_table",
    "measure_jump",
    "pole_windows",
    "residue_sign_jump",
    "sphere_area",
    "unit_ball_volume",
    "verify_lower_bound",
    "weyl_constant",
    "weyl_constant_literal",
    "weyl_fit",
]
