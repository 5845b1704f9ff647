"""Parameter sweeps over lambda.

Averaged pair-correlation integrals, min-gap exceedance scans, empirical
transversality constants for random {0,±1} polynomials, and a finite-depth
truncation of the nested-interval construction of parameters with abnormally
strong pair correlation.

All sweeps are deterministic given their configuration: Monte Carlo sampling
records its 64-bit seed, per-sample work is independent, and reductions run
in fixed sample order so results are bit-identical for any worker count.
"""

from __future__ import annotations

import math
import secrets
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebraic import nearest_zero_above
from .errors import DomainError
from .pointset import Form, generate, generate_exact, MAX_EXACT_LEVELS
from .stats import coincidence_rate, gaps, pair_correlation

__all__ = [
    "SweepConfig",
    "SweepReport",
    "MinGapScan",
    "TransversalityReport",
    "AttractingParameter",
    "averaged_pair_correlation",
    "min_gap_scan",
    "sublevel_ratio",
    "transversality_check",
    "construct_attracting_parameter",
]


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of an averaged pair-correlation sweep.

    ``quadrature`` is "midpoint" (deterministic, CI-friendly) or "montecarlo"
    (uniform samples from a recorded seed).  A degenerate interval with
    ``sample_count = 1`` is allowed and reduces to a single pair-correlation
    evaluation.
    """

    interval: tuple[float, float]
    levels: int
    s_grid: tuple[float, ...]
    sample_count: int
    quadrature: str = "midpoint"
    seed: int | None = None
    form: Form = Form.STANDARD
    worker_count: int = 1
    keep_curves: bool = False

    def __post_init__(self):
        a, b = self.interval
        if not (0.5 <= a <= b < 1.0):
            raise DomainError(f"interval must satisfy 0.5 <= a <= b < 1, got [{a}, {b}]")
        if self.sample_count < 1:
            raise DomainError("sample_count must be >= 1")
        if self.quadrature not in ("midpoint", "montecarlo"):
            raise DomainError(f"unknown quadrature {self.quadrature!r}")
        if not self.s_grid:
            raise DomainError("empty s grid")
        if any(s < 0 for s in self.s_grid):
            raise DomainError("s values must be nonnegative")
        if any(x > y for x, y in zip(self.s_grid, self.s_grid[1:])):
            raise DomainError("s grid must be ascending")
        if self.worker_count < 1:
            raise DomainError("worker_count must be >= 1")


@dataclass(frozen=True)
class SweepReport:
    """Per-s averages of R2 over the sampled parameters.

    ``mean`` approximates the interval *mean* ``(1/|I|) \\int_I R2 ds`` (the raw
    integral is mean times the interval width).  ``c_hat``/``C_hat`` are the
    extreme slopes ``mean(s)/s`` over the positive grid points.
    """

    config: SweepConfig
    seed: int | None
    lambdas: np.ndarray
    s_grid: np.ndarray
    mean: np.ndarray
    min: np.ndarray
    max: np.ndarray
    c_hat: float
    C_hat: float
    curves: np.ndarray | None = None

    def to_json_dict(self) -> dict:
        per_s = [
            {"s": float(s), "mean": float(m), "min": float(lo), "max": float(hi)}
            for s, m, lo, hi in zip(self.s_grid, self.mean, self.min, self.max)
        ]
        return {
            "config": {
                "interval": [self.config.interval[0], self.config.interval[1]],
                "levels": self.config.levels,
                "s_grid": list(self.config.s_grid),
                "sample_count": self.config.sample_count,
                "quadrature": self.config.quadrature,
                "form": self.config.form.value,
                "worker_count": self.config.worker_count,
            },
            "seed": self.seed,
            "per_s": per_s,
            "c_hat": self.c_hat,
            "C_hat": self.C_hat,
        }


def _sample_lambdas(cfg: SweepConfig) -> tuple[np.ndarray, int | None]:
    a, b = cfg.interval
    n = cfg.sample_count
    if cfg.quadrature == "midpoint":
        return a + (np.arange(n) + 0.5) * (b - a) / n, None
    seed = cfg.seed if cfg.seed is not None else secrets.randbits(64)
    rng = np.random.default_rng(seed)
    return a + (b - a) * rng.random(n), seed


def averaged_pair_correlation(cfg: SweepConfig, progress: bool = False) -> SweepReport:
    """Average R2(s, lambda, 2**levels) over sampled lambdas, per grid point.

    Parameter samples are independent work items; with ``worker_count > 1``
    they are dispatched to a thread pool but gathered and reduced in sample
    order, so the report is identical for any worker count.
    """
    lambdas, seed = _sample_lambdas(cfg)
    grid = np.asarray(cfg.s_grid, dtype=np.float64)

    def one(lam: float) -> np.ndarray:
        return pair_correlation(generate(lam, cfg.levels, cfg.form), grid).r_values

    if cfg.worker_count > 1:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            rows = list(pool.map(one, lambdas))
    else:
        rows = []
        t0 = time.perf_counter()
        for i, lam in enumerate(lambdas):
            rows.append(one(lam))
            if progress and (i + 1) % max(1, len(lambdas) // 10) == 0:
                print(f"sweep: {i + 1}/{len(lambdas)} samples "
                      f"({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
    curves = np.vstack(rows)
    mean = curves.mean(axis=0)
    positive = grid > 0
    slopes = mean[positive] / grid[positive]
    c_hat = float(slopes.min()) if slopes.size else float("nan")
    C_hat = float(slopes.max()) if slopes.size else float("nan")
    return SweepReport(cfg, seed, lambdas, grid, mean,
                       curves.min(axis=0), curves.max(axis=0), c_hat, C_hat,
                       curves if cfg.keep_curves else None)


# ---------------------------------------------------------------------------
# min-gap exceedance scan


@dataclass(frozen=True)
class MinGapScan:
    interval: tuple[float, float]
    levels: tuple[int, ...]
    lambdas: np.ndarray
    alphas: np.ndarray  # threshold alpha_N per level
    min_gaps: np.ndarray  # shape (len(lambdas), len(levels))
    exceedances: tuple[tuple[int, ...], ...]  # per lambda: levels with g_N > alpha_N
    seed: int | None


def min_gap_scan(interval, lambda_samples, level_range, alpha,
                 seed: int | None = 0, form: Form = Form.PRIMED,
                 distinct_tol: float | None = None) -> MinGapScan:
    """Scan which levels have smallest gap above a summable threshold alpha(N).

    ``lambda_samples`` is either a count of seeded uniform samples from
    ``interval`` or an explicit sequence of lambdas.  The caller chooses
    ``alpha`` so that ``sum 3**N * alpha(N)`` converges (e.g.
    ``alpha = lambda n: 3.0**-n * n**-1.1``); exceedance of every sampled
    lambda at some level is the finite surrogate of the almost-everywhere
    statement.
    """
    a, b = float(interval[0]), float(interval[1])
    levels = tuple(level_range)
    if not levels:
        raise DomainError("empty level range")
    if isinstance(lambda_samples, (int, np.integer)):
        used_seed = seed if seed is not None else secrets.randbits(64)
        rng = np.random.default_rng(used_seed)
        lambdas = a + (b - a) * rng.random(int(lambda_samples))
    else:
        lambdas = np.asarray(lambda_samples, dtype=np.float64)
        used_seed = None
    alphas = np.array([alpha(n) for n in levels], dtype=np.float64)
    table = np.empty((lambdas.size, len(levels)), dtype=np.float64)
    exceed = []
    for i, lam in enumerate(lambdas):
        hit = []
        for j, n in enumerate(levels):
            report = gaps(generate(lam, n, form), distinct_tol)
            table[i, j] = report.min_gap
            if report.min_gap > alphas[j]:
                hit.append(n)
        exceed.append(tuple(hit))
    return MinGapScan((a, b), levels, lambdas, alphas, table, tuple(exceed), used_seed)


# ---------------------------------------------------------------------------
# transversality measurement


@dataclass(frozen=True)
class TransversalityReport:
    """Measured ``Leb{lambda in I : |g(lambda)| <= rho} / rho`` ratios.

    ``ratios[i, j]`` is the ratio for polynomial i at ``rho_grid[j]``;
    ``empirical_C`` is the overall maximum (the measured analogue of the
    uniform sublevel-measure constant).
    """

    degree: int
    interval: tuple[float, float]
    rho_grid: tuple[float, ...]
    coefficient_rows: np.ndarray  # c_1..c_D per sampled polynomial
    ratios: np.ndarray
    max_ratio_per_rho: np.ndarray
    empirical_C: float
    seed: int


def sublevel_ratio(coeffs, rho: float, interval, min_grid: int = 100_000) -> float:
    """Measured ``Leb{lambda in I : |g(lambda)| <= rho} / rho`` for one polynomial.

    Dense-grid measurement with step ``min(rho/100, |I|/min_grid)``; the
    {0,±1} polynomials are Lipschitz on the interval, so this resolves the
    sublevel set to ~1% of rho.
    """
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise DomainError("empty interval")
    if rho <= 0:
        raise DomainError("rho must be positive")
    n_pts = max(int(min_grid), int(math.ceil((b - a) * 100.0 / rho)) + 1)
    xs = np.linspace(a, b, n_pts)
    step = (b - a) / (n_pts - 1)
    vals = npoly.polyval(xs, np.asarray(coeffs, dtype=np.float64))
    measure = np.count_nonzero(np.abs(vals) <= rho) * step
    return measure / rho


def transversality_check(degree: int, poly_samples: int, rho_grid, interval,
                         seed: int = 0, min_grid: int = 100_000) -> TransversalityReport:
    """Measure sublevel-set sizes of random {0,±1} polynomials on an interval.

    Polynomials are ``1 + c_1 x + ... + c_D x^D`` with seeded uniform
    coefficients in {-1, 0, 1}; each is measured by :func:`sublevel_ratio`.
    """
    rho_grid = tuple(float(r) for r in rho_grid)
    rng = np.random.default_rng(seed)
    rows = rng.integers(-1, 2, size=(poly_samples, degree))
    ratios = np.empty((poly_samples, len(rho_grid)), dtype=np.float64)
    for j, rho in enumerate(rho_grid):
        for i in range(poly_samples):
            coeffs = np.concatenate(([1.0], rows[i].astype(np.float64)))
            ratios[i, j] = sublevel_ratio(coeffs, rho, interval, min_grid)
    max_per_rho = ratios.max(axis=0)
    a, b = float(interval[0]), float(interval[1])
    return TransversalityReport(degree, (a, b), rho_grid, rows, ratios,
                                max_per_rho, float(max_per_rho.max()), seed)


# ---------------------------------------------------------------------------
# nested-interval construction (finite depth)


@dataclass(frozen=True)
class Certificate:
    stage: int
    s: float
    levels: int
    r2_lower_bound: float  # exact ordered-coincidence count per point


@dataclass(frozen=True)
class AttractingParameter:
    lam: float
    certificates: tuple[Certificate, ...]
    interval: tuple[float, float]  # final interval of the construction
    depth_reached: int
    complete: bool


def construct_attracting_parameter(interval, depth: int, epsilon: float,
                                   level_cap: int = 18) -> AttractingParameter:
    """Finite truncation of the nested-interval construction.

    At stage k the midpoint's greedy relation pins a nearby {0,±1} zero
    lambda_k; the exact backend then searches for a level N_k whose certified
    coincidence count satisfies ``R2(0) >= 2**(N_k**(1-epsilon))`` (a lower
    bound for ``R2(2**-k)``), and the interval shrinks around lambda_k so the
    float pair correlation keeps the bound across it.  If no level within
    ``level_cap`` certifies, the result is returned partial with the depth
    actually reached flagged.
    """
    a, b = float(interval[0]), float(interval[1])
    if not 0.5 < a < b < 1.0:
        raise DomainError("interval must sit inside (1/2, 1)")
    if depth < 0 or depth > 4:
        raise DomainError("depth must lie in 0..4 (cost grows fast)")
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    level_cap = min(level_cap, MAX_EXACT_LEVELS)

    certificates: list[Certificate] = []
    prev_level = 0
    for stage in range(1, depth + 1):
        mid = 0.5 * (a + b)
        # Order of the greedy expansion: deep enough that the located zero
        # stays inside the current interval, and growing with the stage.
        k = stage + 2
        while mid + mid**k >= b:
            k += 1
        poly, lam_k = nearest_zero_above(mid, k)
        s_k = 2.0**-stage
        found = None
        for n in range(prev_level + 1, level_cap + 1):
            eps_set = generate_exact(poly.coeffs, n)
            r0 = coincidence_rate(eps_set)
            if r0 >= 2.0 ** (n ** (1.0 - epsilon)):
                found = (n, r0)
                break
        if found is None:
            return AttractingParameter(0.5 * (a + b), tuple(certificates),
                                       (a, b), stage - 1, False)
        n_k, r0 = found
        certificates.append(Certificate(stage, s_k, n_k, r0))
        prev_level = n_k
        # Pair differences move at most (1-b)^-2 per unit lambda, so within
        # delta the coincident pairs stay inside the s_k/2**n_k window.
        delta = 0.5 * s_k * 2.0**-n_k * (1.0 - b) ** 2
        a = max(a, lam_k - delta)
        b = min(b, lam_k + delta)
    return AttractingParameter(0.5 * (a + b), tuple(certificates), (a, b),
                               depth, True)
