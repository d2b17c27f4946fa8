from .prufer import PhaseEnd, integrate_phase, integrate_riccati
from .solver import (
    DtnSweep,
    Solvability,
    dirichlet_spectrum_mode,
    dtn_mode,
    dtn_sweep,
    eigen_boundary_data,
    eigen_record,
    nearest_pole,
    phase_count,
    phase_counts,
    regular_part,
    residue_mode,
    solvability,
)
from .types import DirichletEigenRecord, DtnModeSample, ResidueMatrix
