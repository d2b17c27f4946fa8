"""Exception hierarchy for itekit.

Every error carries a stable ``code`` and a structured ``detail`` mapping so the
CLI can emit it as a JSON object on standard error.
"""

from __future__ import annotations

import typing


class ITEKitError(Exception):
    """Base class for all itekit errors."""

    code = "itekit_error"
    exit_code = 5

    def __init__(self, message: str, **detail: typing.Any) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message, "detail": self.detail}


class ConfigError(ITEKitError):
    code = "config_error"
    exit_code = 4


# geometry / assumptions


class GeometryError(ITEKitError):
    code = "geometry_error"
    exit_code = 2


class MismatchedBoundary(GeometryError):
    code = "mismatched_boundary"


class AssumptionViolation(GeometryError):
    code = "assumption_violation"


class AmbiguousCase(GeometryError):
    code = "ambiguous_case"


class InadmissibleAlpha(GeometryError):
    code = "inadmissible_alpha"


# numerics


class NumericalError(ITEKitError):
    code = "numerical_error"


class PoleProximity(NumericalError):
    code = "pole_proximity"


class IntegrationFailure(NumericalError):
    code = "integration_failure"


class BracketExhaustion(NumericalError):
    code = "bracket_exhaustion"


class NotAnEigenvalue(NumericalError):
    code = "not_an_eigenvalue"


class TruncationUncertified(NumericalError):
    code = "truncation_uncertified"


class RootRefinementFailure(NumericalError):
    code = "root_refinement_failure"


class AmbiguousRoot(NumericalError):
    code = "ambiguous_root"


class PoleSpacing(NumericalError):
    code = "pole_spacing"


# symbol calculus


class SymbolError(ITEKitError):
    code = "symbol_error"


class NonPolynomialRhs(SymbolError):
    code = "non_polynomial_rhs"


class UnsupportedOrder(SymbolError):
    code = "unsupported_order"


class CancellationBeyondOrder(SymbolError):
    code = "cancellation_beyond_order"


class BranchOnCut(SymbolError):
    code = "branch_on_cut"


class EllipticRegimeViolation(SymbolError):
    code = "elliptic_regime_violation"


class VerificationFailure(ITEKitError):
    """A verified inequality or jump rule did not hold."""

    code = "verification_failure"
    exit_code = 3
