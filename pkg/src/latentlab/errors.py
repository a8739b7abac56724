"""Exception types shared across the package.

Two families matter to callers: :class:`ContractError` means the inputs
violated a documented precondition (bad shapes, ranges, file formats), while
:class:`FitError` means the inputs were well formed but the computation could
not produce a model (rank deficiency, non-convergence, degenerate targets).
The HTTP service maps these to 422 and 409 respectively.
"""

from __future__ import annotations


class ContractError(ValueError):
    """An input violated a documented precondition."""


class CsvFormatError(ContractError):
    """A CSV file did not match the documented schema.

    ``row`` and ``column`` are 1-based positions as they appear in the file
    (the header is row 1); either may be None when not applicable.
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        loc = ""
        if row is not None and column is not None:
            loc = f" (row {row}, column {column})"
        elif row is not None:
            loc = f" (row {row})"
        super().__init__(message + loc)


class FitError(RuntimeError):
    """A fit could not be completed on otherwise well-formed inputs."""


class SingularityError(FitError):
    """The design matrix is rank deficient where full rank is required."""


class RankError(FitError):
    """More components were requested than the data can support."""

    def __init__(self, message: str, attainable: int):
        self.attainable = attainable
        super().__init__(f"{message}; attainable number of components is {attainable}")


class ConvergenceError(FitError):
    """An iterative solver exhausted its iteration budget."""

    def __init__(self, message: str, kkt_residual: float):
        self.kkt_residual = kkt_residual
        super().__init__(f"{message} (final KKT residual {kkt_residual:.3e})")


class DegenerateTargetError(FitError):
    """The target carries no usable correlation with the inputs."""


class DegenerateSignalError(FitError):
    """The signal is identically zero, so a signal-to-noise ratio is undefined."""


class LeakageError(RuntimeError):
    """Statistics not derived from the training partition were injected."""
