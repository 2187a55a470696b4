"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: math preconditions -> 2, enumeration
budgets -> 3, cross-method disagreement -> 4.
"""


class FaithdimError(Exception):
    """Base class for all library errors."""


class ParameterError(FaithdimError):
    """Invalid numeric parameter (non-prime p, non-positive sizes, ...)."""


class DimensionMismatchError(FaithdimError):
    """Vector or matrix shapes inconsistent with the ambient rank."""


class MembershipError(FaithdimError):
    """A lattice element is not contained where a precondition requires."""


class RankDeficiencyError(FaithdimError):
    """Input vectors were required to be a basis but are dependent."""


class SizeLimitError(FaithdimError):
    """Instance exceeds the documented size bound for an exhaustive step."""


class InfeasibleError(FaithdimError):
    """No selection satisfying the independence requirement exists."""


class PreconditionError(FaithdimError):
    """Stated mathematical precondition violated (reported distinctly from
    a failure of the conclusion)."""


class ValidationError(FaithdimError):
    """Lie algebra validation failure; carries a witness."""

    def __init__(self, kind: str, witness, message: str):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


class LazardError(FaithdimError):
    """p does not exceed the nilpotency class, so exp/log are undefined."""


class BudgetError(FaithdimError):
    """Enumeration would exceed the configured point budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration needs {required} points, budget is {budget}"
        )
        self.required = required
        self.budget = budget


class ThresholdError(FaithdimError):
    """p is below an explicit hypothesis of the closed form being used."""


class RamifiedError(FaithdimError):
    """Prime divides the discriminant; the unramified theory does not apply."""


class UnsupportedRingError(FaithdimError):
    """Operation restricted to F_{p^f} and Z/p^d (oracle scope)."""


class CrossCheckError(FaithdimError):
    """Two methods that must agree produced different values."""


class InternalInvariantError(FaithdimError):
    """A 'must not occur' condition occurred; indicates a library bug."""
