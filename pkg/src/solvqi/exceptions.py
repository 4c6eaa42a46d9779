from dataclasses import dataclass, field
from typing import List, Optional


class SolvQIError(Exception):
    """Base exception for all solvqi errors"""
    exit_code = 3


class InputError(SolvQIError):
    """Error in user supplied input (documents, files, lookups)"""
    exit_code = 1


@dataclass(frozen=True)
class Diagnostic:
    """Positioned parser message"""
    line: int
    column: int
    message: str
    expected: List[str] = field(default_factory=list)
    hint: Optional[str] = None

    def __str__(self):
        text = f"line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            if len(self.expected) == 1:
                text += f"; expecting {self.expected[0]}"
            else:
                text += f"; expecting {', '.join(self.expected[:-1])} or {self.expected[-1]}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


class AlgebraSyntaxError(InputError):
    """Malformed .lie document"""

    def __init__(self, diagnostic: Diagnostic, source: str = "<text>"):
        self.diagnostic = diagnostic
        self.source = source
        super().__init__(f"{source}: {diagnostic}")


class DocumentError(InputError):
    """Well-formed document that does not describe a usable algebra"""
    pass


class CatalogLookupError(InputError):
    """Unknown catalog entry or inadmissible parameters"""
    pass


class ConfigError(SolvQIError):
    """Error in configuration"""
    exit_code = 1


class UnsupportedInstanceError(SolvQIError):
    """Input lies outside what the exact rational engine supports"""
    exit_code = 2


class IrrationalSpectrumError(UnsupportedInstanceError):
    """Characteristic polynomial does not split over the rationals"""
    pass


class NotSolvableError(UnsupportedInstanceError):
    """Operation requires a solvable Lie algebra"""
    pass


class TriangularizationError(UnsupportedInstanceError):
    """Operation requires a completely solvable Lie algebra"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"not completely solvable over the rationals: {reason}")


class SearchBudgetExhaustedError(TriangularizationError):
    """Eigenvalue combination search stopped before deciding complete solvability"""
    pass


class ReductionConsistencyError(UnsupportedInstanceError):
    """Semisimple parts do not assemble into a Lie algebra action"""
    pass


class InvariantViolationError(SolvQIError):
    """An internal algebraic invariant failed"""
    exit_code = 3


class DerivationActionError(InvariantViolationError):
    """Action is not by derivations, or is not a Lie homomorphism"""
    pass


class NotAnIdealError(InvariantViolationError):
    pass


class NotInvariantError(InvariantViolationError):
    pass


class DimensionMismatchError(InvariantViolationError, ValueError):
    pass


class NonSquareMatrixError(InvariantViolationError, ValueError):
    pass


class SingularMatrixError(InvariantViolationError, ValueError):
    pass


class ParentMismatchError(InvariantViolationError):
    pass


class ZeroPolynomialError(InvariantViolationError, ValueError):
    pass
