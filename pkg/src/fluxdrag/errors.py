"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the physical or printed domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole of a response function."""


class SingularityError(DomainError):
    """Evaluation requested on a removable-by-substitution singular locus
    (kappa = 0 or q_z = 0 sector boundary, or the omega = 0 occupation pole)."""


class ConvergenceError(RuntimeError):
    """Adaptive integration exhausted its evaluation budget.

    Carries the partial `result` (a ForceResult with converged=False) so
    callers can report the best available value and error estimate.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class IndeterminateRatioError(RuntimeError):
    """Both forces of a ratio check sit below the absolute floor (0/0).

    Carries `numerator` and `denominator` ForceResults.
    """

    def __init__(self, message, numerator=None, denominator=None):
        super().__init__(message)
        self.numerator = numerator
        self.denominator = denominator
