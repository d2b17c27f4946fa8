from .geometry import Cap, Shell, WarpedManifold, make_poly, parse_number
from .modes import Mode, ModeFamily, indicial_roots, kappa, mode_family, multiplicity
from .pair import Case, ManifoldPair, boundary_wavenumber, detect_case, validate_pair
