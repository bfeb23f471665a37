"""The quadratic interaction map on the nonnegative orthant, and its Jacobian.

One step of the discrete-time system sends a state x = (x_1, ..., x_n),
x_k >= 0, to

    x_k' = (r_k * x_k / 2) * (x_k + 2 * sum_{i != k} x_i),

where the per-coordinate rates r_k are strictly positive.  The map is
homogeneous of degree two and preserves the nonnegative orthant.  States are
plain 1-d float arrays; `as_state` enforces the domain at the library
boundary.  All values here are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch, DomainError


def _readonly(values: np.ndarray) -> np.ndarray:
    out = np.array(values, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Rates:
    """Strictly positive rate vector of length >= 2."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if values.ndim != 1:
            raise DomainError(f"rates must be a 1-d vector, got shape {values.shape}")
        if values.size < 2:
            raise DomainError(f"n must be >= 2, got {values.size} rate(s)")
        if not np.all(np.isfinite(values)):
            raise DomainError("rates must be finite")
        if np.any(values <= 0.0):
            raise DomainError("rates must be strictly positive")
        object.__setattr__(self, "values", _readonly(values))

    @property
    def n(self) -> int:
        return self.values.size

    def reciprocal_sum(self) -> float:
        """Sum of 1/r_k over all coordinates."""
        return float(np.sum(1.0 / self.values))

    def reciprocal_sum_over(self, indices: Iterable[int]) -> float:
        """Sum of 1/r_k over the given coordinate indices (0-based)."""
        idx = sorted(indices)
        if not idx:
            return 0.0
        if idx[0] < 0 or idx[-1] >= self.n:
            raise DimensionMismatch(f"index out of range for n={self.n}: {idx}")
        return float(np.sum(1.0 / self.values[idx]))

    def restrict(self, indices: Iterable[int]) -> "Rates":
        """Rates for the subsystem on the given coordinates (needs >= 2 of them)."""
        idx = sorted(indices)
        return Rates(self.values[idx])


def as_state(x, n: int | None = None) -> np.ndarray:
    """Validate x as a state in the nonnegative orthant and return it as an array.

    Rejects (rather than clamps) negative or nonfinite coordinates: silently
    clamping would corrupt downstream fate classification.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise DimensionMismatch(f"state must be a 1-d vector, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"state has length {arr.size}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("state must be finite")
    if np.any(arr < 0.0):
        raise DomainError("state must be componentwise nonnegative")
    return arr


def _step(theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    # x_k + 2*sum_{i != k} x_i == 2*sum(x) - x_k
    s = x.sum()
    return 0.5 * theta * x * (2.0 * s - x)


def apply(rates: Rates, x) -> np.ndarray:
    """One application of the map to a state in the nonnegative orthant."""
    arr = as_state(x, rates.n)
    return _step(rates.values, arr)


def apply_unchecked(rates: Rates, x) -> np.ndarray:
    """One application of the defining polynomial, without the orthant check.

    Exists so residuals can be evaluated at algebraic fixed points whose
    coordinates are negative; prefer `apply` everywhere else.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (rates.n,):
        raise DimensionMismatch(f"state has shape {arr.shape}, expected ({rates.n},)")
    return _step(rates.values, arr)


def jacobian(rates: Rates, x) -> np.ndarray:
    """Jacobian matrix of the map at x.

    Entry (k, k) is r_k * sum(x) and entry (k, j), j != k, is r_k * x_k.
    Negative coordinates are allowed here: stability analysis evaluates the
    Jacobian at infeasible algebraic fixed points as well.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (rates.n,):
        raise DimensionMismatch(f"state has shape {arr.shape}, expected ({rates.n},)")
    if not np.all(np.isfinite(arr)):
        raise DomainError("state must be finite")
    jac = np.repeat((rates.values * arr)[:, None], rates.n, axis=1)
    np.fill_diagonal(jac, rates.values * arr.sum())
    return jac
