"""Shared oracles for the test suite: finite differences, brute-force fixed
point search, stable quadratic roots, feasible-rate sampling."""

from __future__ import annotations

import math

import numpy as np

from qdyn import Rates, apply_unchecked, interior_fixed_point, jacobian


def fd_jacobian(rates: Rates, x, h: float = 1e-6) -> np.ndarray:
    """Central finite-difference Jacobian of one map application.

    Uses the unchecked evaluation so probes a hair below zero stay legal.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        out[:, j] = (apply_unchecked(rates, x + e) - apply_unchecked(rates, x - e)) / (2.0 * h)
    return out


def quadratic_roots(b: float, c: float) -> tuple[float, float]:
    """Real roots of lam^2 + b*lam + c, computed stably, sorted descending."""
    disc = b * b - 4.0 * c
    assert disc >= 0.0, f"complex roots for b={b}, c={c}"
    if b == 0.0 and c == 0.0:
        return 0.0, 0.0
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    roots = sorted((q, c / q if q != 0.0 else 0.0), reverse=True)
    return roots[0], roots[1]


def newton_fixed_point_search(rates: Rates, starts: np.ndarray, iters: int = 30) -> np.ndarray:
    """Polish a batch of starting points toward solutions of H(x) = x.

    Returns the converged solutions (residual <= 1e-10); divergent or
    singular batches are dropped.
    """
    n = rates.n
    x = np.array(starts, dtype=float)
    eye = np.eye(n)
    for _ in range(iters):
        s = x.sum(axis=1, keepdims=True)
        g = 0.5 * rates.values * x * (2.0 * s - x) - x
        jac = np.repeat((rates.values * x)[:, :, None], n, axis=2)
        idx = np.arange(n)
        jac[:, idx, idx] = rates.values * s
        try:
            delta = np.linalg.solve(jac - eye, -g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            # perturb the whole batch off the singular set and continue
            x = x + 1e-9
            continue
        keep = np.all(np.isfinite(delta), axis=1)
        x = np.where(keep[:, None], x + delta, x)
    s = x.sum(axis=1, keepdims=True)
    residual = np.max(np.abs(0.5 * rates.values * x * (2.0 * s - x) - x), axis=1)
    good = np.isfinite(residual) & (residual <= 1e-10)
    return x[good]


def sample_feasible_interior(rng: np.random.Generator, n: int) -> Rates:
    """Seeded draw of rates whose interior fixed point is strictly positive.

    The interior point is feasible only when the rates are nearly
    proportional, so draw a base level with narrow per-coordinate jitter
    (width shrinking with n) and reject the rare miss.
    """
    w = 0.4 / n
    while True:
        base = 0.1 + 2.4 * rng.random()
        rates = Rates(base * (1.0 - w + 2.0 * w * rng.random(n)))
        if np.all(interior_fixed_point(rates).coords > 0.0):
            return rates


def explicit_coefficient_matrix(n: int) -> np.ndarray:
    out = np.full((n, n), 2.0)
    np.fill_diagonal(out, 1.0)
    return out
