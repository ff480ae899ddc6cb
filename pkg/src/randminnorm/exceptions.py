"""Exception types raised by the solvers, the file readers and the CLI."""

import numpy as np


class DimensionError(ValueError):
    """Array shapes are inconsistent with each other or with the problem."""


class ConfigurationError(ValueError):
    """Solver parameters are invalid for the given problem size."""


class RankDeficiencyError(np.linalg.LinAlgError):
    """A triangular factor revealed numerical rank below the column count.

    Attributes
    ----------
    rank : int
        Number of diagonal entries of the triangular factor above threshold.
    ncols : int
        Number of columns the factor was expected to have full rank in.
    """

    def __init__(self, where, rank, ncols):
        self.where = where
        self.rank = int(rank)
        self.ncols = int(ncols)
        super().__init__(
            f"{where}: numerical rank {self.rank} < {self.ncols} "
            f"({self.ncols - self.rank} deficient column(s))"
        )


class MatrixMarketError(ValueError):
    """A Matrix Market file could not be parsed."""

    def __init__(self, path, line, column, message):
        self.path = str(path)
        self.line = line
        self.column = column
        super().__init__(f"{self.path}:{line}:{column}: {message}")
