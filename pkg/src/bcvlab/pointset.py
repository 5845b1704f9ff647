"""Finite Bernoulli convolution point sets.

``generate`` builds the 2**N partial-sum values for a parameter lambda by N
sorted merges of the iterated affine map x -> lambda*x (+1), keeping repeated
values (multiplicity matters: repeats are exactly the coincidences between
digit strings).  ``generate_exact`` tallies the same 2**N digit strings as
residues modulo a defining integer polynomial, so coincidence structure at an
algebraic parameter is certified exactly instead of read off floats.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .algebraic import reduction_vector, shift_residue
from .errors import DomainError, SizeCapError

__all__ = [
    "Form",
    "PointSet",
    "ExactPointSet",
    "generate",
    "generate_exact",
    "distinct_count",
    "distinct_count_profile",
    "write_binary",
    "read_binary",
    "write_csv",
    "MAX_FLOAT_LEVELS",
    "MAX_EXACT_LEVELS",
    "DISTINCT_REL_TOL",
]

MAX_FLOAT_LEVELS = 28  # 2**28 doubles; beyond this is an error, not a truncation
MAX_EXACT_LEVELS = 24
# Doubles accumulate O(N) ulp through the iterated map, so values closer than
# this (relative to the support width) are treated as one point.
DISTINCT_REL_TOL = 2.0**-44

_RANGE_NOTE = "lambda outside the interesting range (1/2, 1)"


class Form(Enum):
    """Scaling convention: STANDARD is supported on [0, 1-lambda^N]; PRIMED
    is the same set divided by (1 - lambda)."""

    STANDARD = "standard"
    PRIMED = "primed"


@dataclass(frozen=True)
class PointSet:
    lam: float
    levels: int
    form: Form
    values: np.ndarray  # sorted ascending, length 2**levels, repeats kept
    range_note: str | None = None

    @property
    def point_count(self) -> int:
        return self.values.size

    def distinct_tolerance(self) -> float:
        """Default absolute tolerance below which two values count as equal."""
        return DISTINCT_REL_TOL * float(self.values[-1])


@dataclass(frozen=True)
class ExactPointSet:
    """Residues of the 2**N digit polynomials modulo ``minpoly``.

    ``residues`` maps the canonical coefficient vector (degree < deg minpoly,
    exact rational entries) to its multiplicity; multiplicities sum to 2**N.
    """

    minpoly: tuple[int, ...]
    levels: int
    residues: Mapping[tuple, int]


def _merge_sorted(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(a.size + b.size, dtype=np.float64)
    pos_b = np.searchsorted(a, b, side="right") + np.arange(b.size)
    mask = np.ones(out.size, dtype=bool)
    mask[pos_b] = False
    out[pos_b] = b
    out[mask] = a
    return out


def generate(lam: float, levels: int, form: Form = Form.STANDARD) -> PointSet:
    """All 2**levels values ``sum a_n lam^n`` (a_n in {0,1}), sorted, repeats kept.

    Built by iterating ``A -> merge(lam*A, lam*A + 1)`` from {0}, which costs
    O(2**levels) and evaluates every digit string by the same Horner scheme a
    direct evaluation would use.  STANDARD form scales the result by
    ``(1 - lam)`` so the support is inside [0, 1].
    """
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    if not 1 <= levels <= MAX_FLOAT_LEVELS:
        raise SizeCapError(
            f"levels must lie in 1..{MAX_FLOAT_LEVELS} (2**{MAX_FLOAT_LEVELS} floats), got {levels}")
    values = np.zeros(1, dtype=np.float64)
    for _ in range(levels):
        low = lam * values
        high = lam * values + 1.0
        values = _merge_sorted(low, high)
    if form is Form.STANDARD:
        values = (1.0 - lam) * values
    values.flags.writeable = False
    note = _RANGE_NOTE if lam <= 0.5 else None
    return PointSet(lam, levels, form, values, note)


def _exact_levels(minpoly, levels: int):
    if not 1 <= levels <= MAX_EXACT_LEVELS:
        raise SizeCapError(
            f"levels must lie in 1..{MAX_EXACT_LEVELS} for the exact backend, got {levels}")
    p, red = reduction_vector(minpoly)
    d = len(p) - 1
    residues = {(0,) * d: 1}
    for _ in range(levels):
        nxt: dict = {}
        get = nxt.get
        for res, mult in residues.items():
            shifted = shift_residue(res, red)
            nxt[shifted] = get(shifted, 0) + mult
            bumped = (shifted[0] + 1,) + shifted[1:]
            nxt[bumped] = get(bumped, 0) + mult
        residues = nxt
        yield p, residues


def generate_exact(minpoly, levels: int) -> ExactPointSet:
    """Exact residue tally of all 2**levels digit strings modulo ``minpoly``.

    Reduction is exact rational division, so non-monic defining polynomials
    (e.g. 2x^2 - 1 for lambda = 2**-0.5) are handled.  When ``minpoly`` is the
    minimal polynomial of lambda, equal residues are exactly the digit strings
    evaluating to the same point.
    """
    for p, residues in _exact_levels(minpoly, levels):
        pass
    return ExactPointSet(p, levels, MappingProxyType(residues))


def distinct_count(eps: ExactPointSet) -> int:
    """Number of distinct values, i.e. the point-set size without multiplicities."""
    return len(eps.residues)


def distinct_count_profile(minpoly, levels: int) -> list[int]:
    """Distinct-value counts for every level 1..levels in one pass."""
    return [len(residues) for _, residues in _exact_levels(minpoly, levels)]


# ---------------------------------------------------------------------------
# serialization

_MAGIC = b"BCV1"
_FORM_CODE = {Form.STANDARD: 0, Form.PRIMED: 1}
_CODE_FORM = {v: k for k, v in _FORM_CODE.items()}


def write_binary(ps: PointSet, path) -> None:
    """Little-endian dump: magic "BCV1", lambda f64, levels u32, form u8, values."""
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<dIB", ps.lam, ps.levels, _FORM_CODE[ps.form]))
        ps.values.astype("<f8").tofile(f)


def read_binary(path) -> PointSet:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != _MAGIC:
            raise DomainError(f"bad magic {magic!r}; expected {_MAGIC!r}")
        lam, levels, code = struct.unpack("<dIB", f.read(13))
        values = np.fromfile(f, dtype="<f8", count=1 << levels)
    if values.size != 1 << levels:
        raise DomainError("truncated point-set dump")
    values = values.astype(np.float64)
    values.flags.writeable = False
    note = _RANGE_NOTE if lam <= 0.5 else None
    return PointSet(lam, levels, _CODE_FORM[code], values, note)


def write_csv(ps: PointSet, path) -> None:
    """One value per line, 17 significant digits (lossless for doubles)."""
    with open(path, "w") as f:
        for v in ps.values:
            f.write(format(v, ".17g"))
            f.write("\n")
