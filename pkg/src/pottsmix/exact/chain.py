from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ChainMatrixError(ValueError):
    pass


class RowSumExceededError(ChainMatrixError):
    """Off-diagonal entries of a row add up to more than 1."""


@dataclass
class ChainMatrix:
    """Dense transition matrix on an enumerated state space.

    ``states`` holds the global state indices when the chain lives on a
    subset of the full space (the restricted heat bath), else ``None``.
    """

    entries: np.ndarray
    stationary: np.ndarray
    label: str
    states: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def row_sum_error(self) -> float:
        return float(np.max(np.abs(self.entries.sum(axis=1) - 1.0)))

    def detailed_balance_error(self) -> float:
        flow = self.stationary[:, None] * self.entries
        return float(np.max(np.abs(flow - flow.T)))

    def validate(self, tol: float = 1e-10) -> "ChainMatrix":
        if self.entries.shape != (self.dim, self.dim) or self.stationary.shape != (self.dim,):
            raise ChainMatrixError(f"{self.label}: shape mismatch")
        if np.min(self.entries) < -tol:
            raise ChainMatrixError(f"{self.label}: negative entry {np.min(self.entries):.3g}")
        err = self.row_sum_error()
        if err > tol:
            raise ChainMatrixError(f"{self.label}: row sums off by {err:.3g}")
        err = self.detailed_balance_error()
        if err > tol:
            raise ChainMatrixError(f"{self.label}: detailed balance violated by {err:.3g}")
        return self

    def square(self) -> "ChainMatrix":
        return ChainMatrix(self.entries @ self.entries, self.stationary, self.label + "^2", self.states)
