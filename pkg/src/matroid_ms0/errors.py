class InputError(ValueError):
    """Malformed input: unknown labels, violated preconditions, bad files."""


class FormationError(InputError):
    """A formula violates one of the MS0 formation rules."""

    def __init__(self, message: str, variable: str | None = None):
        super().__init__(message)
        self.variable = variable


class ParseError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"estimated {estimate} oracle calls exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget
