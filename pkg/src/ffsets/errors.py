"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: HypothesisError (a checked mathematical
hypothesis fails for the given input) exits 1, ContractError and bad
parameters exit 2, everything else here exits 3.
"""


class FFSetsError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatchError(FFSetsError):
    """Operands belong to different field specifications."""


class ContractError(FFSetsError):
    """A documented precondition was violated by the caller."""


class ConstructionError(FFSetsError):
    """A field specification is invalid (non-prime p, reducible modulus, ...)."""


class HypothesisError(FFSetsError):
    """A mathematical hypothesis required by a theorem fails for this input."""


class ResourceGuardError(FFSetsError):
    """A desk-scale resource guard (q^n caps, node budgets) was exceeded."""


class InternalConsistencyError(FFSetsError):
    """An internal cross-check failed; indicates a bug, must never fire."""
