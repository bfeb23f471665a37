"""Seeded randomized verification of the structural identities.

Rate vectors are drawn with a Philox counter-based generator (64-bit keyed,
splittable), built only from raw uniform doubles so the stream is
reproducible across platforms and numpy versions.  Each draw is checked
for: fixed-point count and residuals, the eigenvalue-2 identity at every
non-origin fixed point, the origin being the only attractor, and one-step
invariance plus monotonicity of the MBAR regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import RegionKind, region_membership
from .errors import DomainError
from .fixed_points import enumerate_fixed_points
from .model import Rates, apply
from .stability import StabilityTag, classify, eigenvalue_two_residual, spectrum_at

RATE_LOW = 0.05
RATE_HIGH = 3.0

RESIDUAL_RTOL = 1e-9
EIG_TWO_DISTANCE_TOL = 1e-6
EIG_TWO_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tolerance: float
    passed: bool
    failures: tuple[str, ...] = ()


@dataclass(frozen=True)
class VerificationSummary:
    n: int
    trials: int
    seed: int
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def sample_rates(rng: np.random.Generator, n: int, low: float = RATE_LOW, high: float = RATE_HIGH) -> Rates:
    """Uniform draw from (low, high]^n."""
    return Rates(high - (high - low) * rng.random(n))


def _simplex_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    # exponentials via inverse CDF on (0, 1]; normalized to sum 1
    e = -np.log(1.0 - rng.random(n))
    return e / e.sum()


def sample_in_region(rng: np.random.Generator, rates: Rates, region: RegionKind) -> np.ndarray:
    """Random point strictly inside MBAR1 or MBAR2.

    Along a random direction u (sum 1), the scale s satisfies all MBAR1
    constraints iff s <= min_k 2/(r_k*(2 - u_k)); MBAR2 flips the bound.
    """
    if region not in (RegionKind.MBAR1, RegionKind.MBAR2):
        raise DomainError("sampling is provided only for the MBAR regions")
    u = _simplex_direction(rng, rates.n)
    critical = 2.0 / (rates.values * (2.0 - u))
    if region is RegionKind.MBAR1:
        s = float(critical.min()) * rng.random()
    else:
        s = float(critical.max()) * (1.0 + 2.0 * rng.random())
    return s * u


def _check_one_trial(rates: Rates, rng: np.random.Generator, points_per_region: int):
    """Worst-case metrics for a single rate draw.

    Returns (residual, count_err, eig_dist, eig_resid, attracting_err,
    region_err); everything is 0-or-positive, bigger is worse.
    """
    points = enumerate_fixed_points(rates)
    count_err = abs(len(points) - 2**rates.n)

    residual = 0.0
    eig_dist = 0.0
    eig_resid = 0.0
    attracting_err = 0.0
    for fp in points:
        scale = max(1.0, float(np.max(np.abs(fp.coords))))
        residual = max(residual, fp.residual / scale)
        spectrum = spectrum_at(rates, fp)
        tag = classify(spectrum).tag
        if fp.is_origin:
            if tag is not StabilityTag.ATTRACTING:
                attracting_err += 1.0
        else:
            if tag is StabilityTag.ATTRACTING:
                attracting_err += 1.0
            eig_dist = max(eig_dist, float(np.min(np.abs(spectrum - 2.0))))
            eig_resid = max(eig_resid, eigenvalue_two_residual(rates, fp))

    region_err = 0.0
    for region in (RegionKind.MBAR1, RegionKind.MBAR2):
        for _ in range(points_per_region):
            x = sample_in_region(rng, rates, region)
            x_next = apply(rates, x)
            if not region_membership(rates, x_next, region):
                region_err += 1.0
            diff = x_next - x if region is RegionKind.MBAR1 else x - x_next
            region_err = max(region_err, float(np.max(diff)))
    return residual, count_err, eig_dist, eig_resid, attracting_err, region_err


def verification_sweep(
    n: int,
    trials: int,
    seed: int,
    points_per_region: int = 2,
) -> VerificationSummary:
    """Run all randomized checks over `trials` seeded rate draws."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rng = make_rng(seed)

    names_tols = [
        ("fixed-point residual (relative)", RESIDUAL_RTOL),
        ("fixed-point count == 2^n", 0.0),
        ("eigenvalue-2 distance min |lam - 2|", EIG_TWO_DISTANCE_TOL),
        ("eigenvalue-2 residual |det(J - 2I)| / ||J||^n", EIG_TWO_RESIDUAL_TOL),
        ("attracting only at the origin", 0.0),
        ("MBAR one-step invariance and monotonicity", 0.0),
    ]
    worsts = [0.0] * len(names_tols)
    failures: list[list[str]] = [[] for _ in names_tols]

    for _ in range(trials):
        rates = sample_rates(rng, n)
        metrics = _check_one_trial(rates, rng, points_per_region)
        for k, value in enumerate(metrics):
            worsts[k] = max(worsts[k], value)
            if value > names_tols[k][1] and len(failures[k]) < 5:
                failures[k].append(repr(rates.values.tolist()))

    checks = tuple(
        CheckResult(name, worsts[k], tol, worsts[k] <= tol, tuple(failures[k]))
        for k, (name, tol) in enumerate(names_tols)
    )
    return VerificationSummary(n=n, trials=trials, seed=seed, checks=checks)
