from .principal import (
    closed_form,
    difference_levels,
    difference_principal_symbol,
    generic_difference_principal_symbol,
    parameter_closed_form,
    parameter_principal_symbol,
    tail_predict,
    tail_terms,
)
from .recursion import (
    MAX_ORDER,
    BoundaryJets,
    apply_degree,
    dtn_symbol,
    homogeneity_defect,
    residual,
    solve_model_ode,
    symbol_recursion,
)
from .terms import LAM, XI, Y, SymbolSeries, SymbolTerm, canonical
