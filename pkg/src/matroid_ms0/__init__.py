"""Matroids, gain graphs, amalgams and monadic second-order logic over them."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, FormationError, InputError, ParseError  # noqa: E402

__all__ = ["BudgetExceeded", "FormationError", "InputError", "ParseError", "__version__"]
