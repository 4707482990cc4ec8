"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes: ValidationError -> 1,
NumericError -> 2, BudgetError -> 3.
"""


class ValidationError(ValueError):
    """Bad or inconsistent input: malformed descriptors, wrong field, bad flags."""


class NumericError(ArithmeticError):
    """A numerical procedure failed: non-convergence, ill-conditioning, pole."""


class BudgetError(RuntimeError):
    """A configured work budget (enumeration count, quadrature depth) was exceeded."""
