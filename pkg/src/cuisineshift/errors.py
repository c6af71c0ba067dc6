"""Exception hierarchy shared across the package.

The CLI maps these onto its documented exit codes: DataError -> 2,
NumericalError -> 3. Anything else bubbles up as a crash.
"""


class CuisineShiftError(Exception):
    """Base class for all package errors."""


class DataError(CuisineShiftError):
    """Malformed, missing, or inconsistent input data."""


class UnknownTokenError(DataError):
    """An ingredient or country name is not in the vocabulary/embedding."""


class UnclassifiableRecipeError(DataError):
    """Every ingredient of a recipe is out-of-vocabulary."""


class IllegalSwapError(DataError):
    """A substitution that does not fit the current session state.

    Covers removing an ingredient that is not in the recipe, adding one
    that already is, and no-op swaps.
    """


class NumericalError(CuisineShiftError):
    """Training diverged or a numerical routine failed."""
