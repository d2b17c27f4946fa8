from itekit.radial import regular_part

from .catalog import PoleEntry, manifold_spectrum, mode_spectrum, pole_catalog, ranges_intersect
from .difference import DifferenceSample, DifferenceSweep, difference_mode, difference_sweep, zeta_matrix
from .mu import (
    MuCurves,
    MuSample,
    NegativeCount,
    certified,
    count_negative,
    mode_weights,
    mu_curves,
    mu_mode,
    negative_counts,
    weighted,
)
