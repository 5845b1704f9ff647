"""Spacing and correlation statistics over sorted point sets.

Conventions fixed across the module:

* Spacings are normalized by the point count: ``delta_n = n_points *
  (x[n+ell] - x[n])`` over the sorted sequence.
* Pair correlations count *ordered* index pairs (n, m), n != m, within
  distance ``s / n_points``; for i.i.d. uniform points this tends to ``2 s``.
  Coincident values at distinct indices count, so R2(0) measures exact
  coincidences.
* Histograms use 50 left-closed bins on [0, 5*ell]; out-of-range samples land
  in an explicit overflow counter, never silently dropped.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeCapError
from .pointset import ExactPointSet, Form, PointSet
from . import pointset as _pointset

__all__ = [
    "SpacingSet",
    "CdfModel",
    "Histogram",
    "CorrelationCurve",
    "GapReport",
    "GofReport",
    "spacings",
    "cdf_sqrt_half",
    "cdf_empirical",
    "rescale",
    "histogram",
    "poisson_reference",
    "poisson_cdf",
    "gof_statistics",
    "pair_correlation",
    "pair_correlation_interval",
    "coincidence_rate",
    "gaps",
    "write_histogram_csv",
    "write_curve_csv",
    "GOLDEN_RATIO",
]

GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0

HIST_BIN_COUNT = 50


# ---------------------------------------------------------------------------
# sliding-window pair counter (numba-compiled when available)


def _window_count_py(values, thr):
    n = values.shape[0]
    total = 0
    j = 0
    for i in range(n):
        if j < i:
            j = i
        while j + 1 < n and values[j + 1] - values[i] <= thr:
            j += 1
        total += j - i
    return total


try:
    from numba import njit

    _window_count = njit(cache=True)(_window_count_py)
except Exception:  # pragma: no cover - numba is an optional accelerator
    _window_count = _window_count_py


def _as_sorted_values(source) -> tuple[np.ndarray, PointSet | None]:
    if isinstance(source, PointSet):
        return source.values, source
    values = np.ascontiguousarray(source, dtype=np.float64)
    if values.ndim != 1:
        raise DomainError("expected a 1-D sequence of values")
    if values.size > 1 and np.any(np.diff(values) < 0):
        raise DomainError("sequence must be sorted ascending")
    return values, None


# ---------------------------------------------------------------------------
# spacings


@dataclass(frozen=True)
class SpacingSet:
    """Point-count-normalized order-ell spacings of a sorted sequence."""

    ell: int
    values: np.ndarray  # length point_count - ell, all >= 0
    point_count: int
    lam: float | None = None
    levels: int | None = None
    form: Form | None = None
    rescaled: bool = False


def spacings(source, ell: int, rescaled: bool = False) -> SpacingSet:
    """Order-ell spacings ``n_points * (x[n+ell] - x[n])`` of a sorted sequence.

    ``source`` is a :class:`PointSet` or any sorted 1-D array (e.g. the output
    of :func:`rescale`, in which case pass ``rescaled=True`` for bookkeeping).
    """
    values, ps = _as_sorted_values(source)
    n = values.size
    if not 1 <= ell < n:
        raise DomainError(f"ell must lie in 1..{n - 1}, got {ell}")
    sp = (values[ell:] - values[:-ell]) * float(n)
    if ps is not None:
        return SpacingSet(ell, sp, n, ps.lam, ps.levels, ps.form, rescaled)
    return SpacingSet(ell, sp, n, rescaled=rescaled)


# ---------------------------------------------------------------------------
# rescaling CDFs

_SQRT2 = math.sqrt(2.0)
_CDF_A = 1.5 * _SQRT2 + 2.0
_CDF_B = _SQRT2 - 1.0


class CdfModel:
    """Nondecreasing CDF used to push a point set toward the uniform lattice.

    ``variant`` is ``"explicit-sqrt-half"`` (closed form, support [0, 1]) or
    ``"empirical"`` (monotone linear interpolation of an empirical CDF on an
    equally spaced knot grid).  Calling the model clamps to {0, 1} outside the
    support; :meth:`evaluate` additionally reports how many inputs clamped.
    """

    def __init__(self, variant: str, lam: float | None = None,
                 level: int | None = None,
                 knots_x: np.ndarray | None = None,
                 knots_y: np.ndarray | None = None):
        self.variant = variant
        self.lam = lam
        self.level = level
        self.knots_x = knots_x
        self.knots_y = knots_y
        if variant == "empirical":
            self.support = (float(knots_x[0]), float(knots_x[-1]))
        else:
            self.support = (0.0, 1.0)

    def __call__(self, x):
        y, _ = self.evaluate(x)
        return y

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        lo, hi = self.support
        clamped = int(np.count_nonzero((x < lo) | (x > hi)))
        if self.variant == "explicit-sqrt-half":
            xc = np.clip(x, 0.0, 1.0)
            y = np.where(
                xc <= _CDF_B,
                _CDF_A * xc * xc / 2.0,
                np.where(
                    xc >= 1.0 - _CDF_B,
                    1.0 - _CDF_A * (1.0 - xc) ** 2 / 2.0,
                    _CDF_A * _CDF_B * _CDF_B / 2.0 + _CDF_A * _CDF_B * (xc - _CDF_B),
                ),
            )
        else:
            y = np.interp(x, self.knots_x, self.knots_y)
        return y, clamped


def cdf_sqrt_half() -> CdfModel:
    """Closed-form CDF of the infinite Bernoulli convolution at lambda = 2**-0.5.

    Three pieces with a = 1.5*sqrt(2) + 2 and b = sqrt(2) - 1:
    ``a x^2/2`` on [0, b], linear ``a b^2/2 + a b (x - b)`` on [b, 1-b], and
    ``1 - a (1-x)^2/2`` on [1-b, 1]; continuous at both joins since
    ``a b (1 - b) = 1`` exactly.
    """
    return CdfModel("explicit-sqrt-half", lam=1.0 / _SQRT2)


def cdf_empirical(lam: float, level: int, knots: int = 4096) -> CdfModel:
    """Empirical CDF of the level-``level`` point set, resampled onto ``knots``
    equally spaced positions with monotone linear interpolation.

    The model must not be used to rescale the very point set it was built
    from (same lambda and level): that degenerates to the uniform lattice and
    :func:`rescale` warns about it.  64+ knots are recommended.
    """
    if knots < 2:
        raise DomainError("need at least 2 knots")
    if level > _pointset.MAX_EXACT_LEVELS:
        raise SizeCapError(f"empirical CDF level capped at {_pointset.MAX_EXACT_LEVELS}")
    values = _pointset.generate(lam, level, Form.STANDARD).values
    xs = np.linspace(0.0, float(values[-1]), knots)
    counts = np.searchsorted(values, xs, side="right")
    # Rank-based normalization pins F(min)=0 and F(max)=1 exactly; counts is
    # nondecreasing, so the knot values are monotone as interp requires.
    ys = (counts - 1) / float(values.size - 1)
    return CdfModel("empirical", lam=float(lam), level=level, knots_x=xs, knots_y=ys)


def rescale(ps: PointSet, model: CdfModel) -> np.ndarray:
    """Apply the CDF elementwise to a STANDARD-form point set.

    The output stays sorted because the model is nondecreasing; this is
    asserted rather than re-sorted so any violation surfaces loudly.
    """
    if ps.form is Form.PRIMED:
        raise DomainError("rescale needs STANDARD form (support in [0, 1]); "
                          "regenerate with Form.STANDARD")
    if (model.variant == "empirical" and model.lam == ps.lam
            and model.level == ps.levels):
        warnings.warn(
            "rescaling a point set by its own empirical CDF degenerates to the "
            "uniform lattice; build the CDF at a different level",
            UserWarning, stacklevel=2)
    out = model(ps.values)
    if np.any(np.diff(out) < 0):
        raise AssertionError("CDF model produced a non-monotone rescaling")
    return out


# ---------------------------------------------------------------------------
# histogram and Poisson reference


@dataclass(frozen=True)
class Histogram:
    """50-bin spacing histogram on [0, 5*ell] with a Poisson overlay."""

    ell: int
    bin_edges: np.ndarray  # length 51
    counts: np.ndarray  # int64, length 50
    overlay: np.ndarray  # expected Poisson count per bin, length 50
    overflow: int
    point_count: int


def poisson_reference(ell: int, s):
    """Poisson order-ell spacing density ``s**(ell-1) * exp(-s) / (ell-1)!``."""
    if ell < 1:
        raise DomainError("ell must be >= 1")
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise DomainError("s must be nonnegative")
    out = s ** (ell - 1) * np.exp(-s) / math.factorial(ell - 1)
    return float(out) if out.ndim == 0 else out


def poisson_cdf(ell: int, s):
    """CDF of the order-ell Poisson spacing law (a Gamma(ell, 1) variable)."""
    s = np.asarray(s, dtype=np.float64)
    partial = np.zeros_like(s)
    term = np.ones_like(s)
    for j in range(ell):
        if j > 0:
            term = term * s / j
        partial += term
    out = 1.0 - np.exp(-s) * partial
    return float(out) if out.ndim == 0 else out


def histogram(sp: SpacingSet) -> Histogram:
    """Bin the spacings into 50 left-closed bins of width 0.1*ell on [0, 5*ell].

    The overlay is the expected Poisson count per bin,
    ``0.1 * ell * point_count * P_ell(bin center)`` (bin width times sample
    size times density).
    """
    ell = sp.ell
    width_units = 5.0 * ell
    # Two-step index so exact bin-edge values (like a lattice spacing of 1.0)
    # land in the correct left-closed bin.
    scaled = sp.values * float(HIST_BIN_COUNT)
    idx = np.floor(scaled / width_units).astype(np.int64)
    in_range = (idx >= 0) & (idx < HIST_BIN_COUNT)
    counts = np.bincount(idx[in_range], minlength=HIST_BIN_COUNT).astype(np.int64)
    overflow = int(sp.values.size - counts.sum())
    edges = np.linspace(0.0, width_units, HIST_BIN_COUNT + 1)
    centers = (np.arange(HIST_BIN_COUNT) + 0.5) * (0.1 * ell)
    overlay = 0.1 * ell * sp.point_count * poisson_reference(ell, centers)
    return Histogram(ell, edges, counts, overlay, overflow, sp.point_count)


@dataclass(frozen=True)
class GofReport:
    ks: float
    chi2: float
    mean: float
    variance: float
    sample_count: int


def gof_statistics(sp: SpacingSet) -> GofReport:
    """Goodness of fit of the spacings against the order-ell Poisson law.

    ``ks`` is the maximum over sample points of |ECDF - Poisson CDF| (the
    ECDF evaluated right-continuously at the samples); ``chi2`` is Pearson's
    statistic of the 50 histogram bins against the overlay.
    """
    n = sp.values.size
    if n < 100:
        raise DomainError(f"need at least 100 spacings for fit statistics, got {n}")
    ordered = np.sort(sp.values)
    ecdf = np.searchsorted(ordered, ordered, side="right") / n
    ks = float(np.max(np.abs(ecdf - poisson_cdf(sp.ell, ordered))))
    hist = histogram(sp)
    live = hist.overlay > 0
    chi2 = float(np.sum((hist.counts[live] - hist.overlay[live]) ** 2
                        / hist.overlay[live]))
    return GofReport(ks, chi2, float(np.mean(sp.values)),
                     float(np.var(sp.values, ddof=1)) if n > 1 else 0.0, n)


# ---------------------------------------------------------------------------
# pair correlations


@dataclass(frozen=True)
class CorrelationCurve:
    s_grid: np.ndarray
    r_values: np.ndarray
    lam: float | None = None
    levels: int | None = None
    form: Form | None = None
    restricted_interval: tuple[float, float] | None = None
    point_count: int = 0


def _validate_grid(s_grid) -> np.ndarray:
    grid = np.asarray(s_grid, dtype=np.float64)
    if grid.ndim == 0:
        grid = grid.reshape(1)
    if grid.size == 0:
        raise DomainError("empty s grid")
    if np.any(grid < 0):
        raise DomainError("s values must be nonnegative")
    if np.any(np.diff(grid) < 0):
        raise DomainError("s grid must be ascending")
    return grid


def pair_correlation(source, s_grid) -> CorrelationCurve:
    """R2(s): ordered pairs within ``s / n_points``, divided by ``n_points``.

    One monotone sliding-window pass over the sorted values per grid point,
    O(n + matches).  At s = 0 only exact float coincidences count; certified
    coincidence analysis for algebraic parameters belongs to
    :func:`coincidence_rate` on the exact backend.
    """
    values, ps = _as_sorted_values(source)
    grid = _validate_grid(s_grid)
    n = values.size
    r = np.empty(grid.size, dtype=np.float64)
    for i, s in enumerate(grid):
        thr = s / n
        r[i] = 2.0 * _window_count(values, thr) / n
    if ps is not None:
        return CorrelationCurve(grid, r, ps.lam, ps.levels, ps.form, None, n)
    return CorrelationCurve(grid, r, point_count=n)


def pair_correlation_interval(source, interval, s_grid) -> CorrelationCurve:
    """Interval-restricted pair correlation over the points in J = [a, b).

    Threshold ``s * |J| / count(J)`` and normalization by ``count(J)``, so a
    uniform occupancy again gives the Poisson slope 2s.  J is half-open on
    the right (immaterial for b = 1: STANDARD support stays below 1).
    """
    values, ps = _as_sorted_values(source)
    if ps is not None and ps.form is not Form.STANDARD:
        raise DomainError("interval restriction expects STANDARD form (support in [0,1])")
    a, b = float(interval[0]), float(interval[1])
    if not 0.0 <= a < b <= 1.0:
        raise DomainError(f"need 0 <= a < b <= 1, got [{a}, {b}]")
    grid = _validate_grid(s_grid)
    lo = int(np.searchsorted(values, a, side="left"))
    hi = int(np.searchsorted(values, b, side="left"))
    window = np.ascontiguousarray(values[lo:hi])
    m = window.size
    if m == 0:
        raise DomainError(f"no points of the set fall in [{a}, {b}]")
    r = np.empty(grid.size, dtype=np.float64)
    for i, s in enumerate(grid):
        thr = s * (b - a) / m
        r[i] = 2.0 * _window_count(window, thr) / m
    lam = ps.lam if ps is not None else None
    levels = ps.levels if ps is not None else None
    form = ps.form if ps is not None else None
    return CorrelationCurve(grid, r, lam, levels, form, (a, b), m)


def coincidence_rate(eps: ExactPointSet) -> float:
    """Exact R2(0): ordered coincident pairs per point, ``sum m(m-1) / 2**N``."""
    total = sum(m * (m - 1) for m in eps.residues.values())
    return total / float(2 ** eps.levels)


# ---------------------------------------------------------------------------
# gap statistics


@dataclass(frozen=True)
class GapReport:
    """Smallest/largest consecutive gaps of a point set.

    ``min_gap`` ignores gaps at or below ``distinct_tol`` (float shadows of
    exact coincidences).  ``ejk_prediction_match`` records whether the largest
    interior gap sits at the Erdos-Joo-Komornik location ``1 + lam^2 + ... +
    lam^(N-3)`` with size ``lam^(N-1)`` (meaningful for odd N and lambda below
    the golden ratio).
    """

    lam: float
    levels: int
    form: Form
    distinct_tol: float
    min_gap: float
    max_gap: float
    max_gap_index: int
    max_gap_left: float
    interior_max_gap: float | None
    interior_max_left: float | None
    ejk_prediction_match: bool


def gaps(ps: PointSet, distinct_tol: float | None = None) -> GapReport:
    """Gap statistics of consecutive sorted values.

    PRIMED form is the natural scale: there the largest gap equals
    ``lam**(N-1)`` (the set starts 0, lam^(N-1)).  For STANDARD form the
    reference quantities are scaled by ``(1 - lam)``.
    """
    if distinct_tol is None:
        distinct_tol = ps.distinct_tolerance()
    if distinct_tol < 0:
        raise DomainError("distinct_tol must be >= 0")
    diffs = np.diff(ps.values)
    positive = diffs[diffs > distinct_tol]
    min_gap = float(positive.min()) if positive.size else 0.0
    max_idx = int(np.argmax(diffs))
    max_gap = float(diffs[max_idx])

    interior_max = interior_left = None
    ejk = False
    if diffs.size >= 3:
        interior = diffs[1:-1]
        k = int(np.argmax(interior))
        interior_max = float(interior[k])
        interior_left = float(ps.values[1 + k])
        ejk = _ejk_match(ps, diffs, interior_max)
    return GapReport(ps.lam, ps.levels, ps.form, float(distinct_tol),
                     min_gap, max_gap, max_idx, float(ps.values[max_idx]),
                     interior_max, interior_left, ejk)


def _ejk_match(ps: PointSet, diffs: np.ndarray, interior_max: float) -> bool:
    lam, n = ps.lam, ps.levels
    if n < 3 or n % 2 == 0 or not lam < GOLDEN_RATIO:
        return False
    expected_left = 1.0
    power = 1.0
    for _ in range((n - 3) // 2):
        power *= lam * lam
        expected_left += power
    expected_gap = lam ** (n - 1)
    scale = (1.0 - lam) if ps.form is Form.STANDARD else 1.0
    expected_left *= scale
    expected_gap *= scale
    # Gaps are differences of values up to the support maximum, so their
    # rounding error scales with the ulp of the values, not of the gap.
    tol_gap = 8.0 * n * np.spacing(float(ps.values[-1]))
    tol_left = tol_gap
    if abs(interior_max - expected_gap) > tol_gap:
        return False
    # The mirror gap ties the maximum (the set is symmetric), so accept any
    # maximal interior gap whose left endpoint sits at the predicted spot.
    candidates = np.nonzero(diffs[1:-1] >= interior_max - tol_gap)[0] + 1
    lefts = ps.values[candidates]
    return bool(np.any(np.abs(lefts - expected_left) <= tol_left))


# ---------------------------------------------------------------------------
# CSV serialization (17 significant digits, lossless for doubles)


def write_histogram_csv(hist: Histogram, path) -> None:
    with open(path, "w") as f:
        f.write("bin_left,bin_right,count,overlay\n")
        for i in range(HIST_BIN_COUNT):
            f.write(f"{format(hist.bin_edges[i], '.17g')},"
                    f"{format(hist.bin_edges[i + 1], '.17g')},"
                    f"{hist.counts[i]},"
                    f"{format(hist.overlay[i], '.17g')}\n")


def write_curve_csv(curve: CorrelationCurve, path) -> None:
    with open(path, "w") as f:
        f.write("s,r2\n")
        for s, r in zip(curve.s_grid, curve.r_values):
            f.write(f"{format(s, '.17g')},{format(r, '.17g')}\n")
