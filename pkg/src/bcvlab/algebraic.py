"""Machinery for {0,±1} polynomials and the algebraic parameters they pin down.

Covers greedy digit expansions of 1 in base lambda, location of the nearest
{0,±1}-polynomial zero above a given parameter, numerical root finding with
margin reporting, Pisot/Garsia classification, forbidden digit blocks, word
counts of the subshift avoiding a block, and exact reduction of digit
polynomials modulo a defining polynomial.

Polynomials are coefficient tuples in *constant-first* order throughout:
``(c0, c1, ..., cd)`` represents ``c0 + c1*x + ... + cd*x**d``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "SignedPoly",
    "GreedyExpansion",
    "AlgebraicClass",
    "GrowthReport",
    "Verdict",
    "parse_poly",
    "poly_to_string",
    "poly_eval",
    "poly_degree",
    "poly_roots",
    "classify",
    "greedy_expansion",
    "nearest_zero_above",
    "forbidden_block",
    "sft_growth_rate",
    "reduction_vector",
    "shift_residue",
    "reduce_mod_minpoly",
]

# Certification margin for root moduli: verdicts closer than this to the unit
# circle are refused ("borderline"), never silently certified.
MODULUS_MARGIN = 1e-9


# ---------------------------------------------------------------------------
# plain-coefficient helpers


def _trim(coeffs):
    """Drop trailing zero coefficients, keeping at least the constant term."""
    coeffs = tuple(coeffs)
    d = len(coeffs) - 1
    while d > 0 and coeffs[d] == 0:
        d -= 1
    return coeffs[: d + 1]


def poly_degree(coeffs) -> int:
    return len(_trim(coeffs)) - 1


def poly_eval(coeffs, x):
    """Evaluate a constant-first coefficient sequence at ``x`` by Horner."""
    acc = 0 * x
    for c in reversed(tuple(coeffs)):
        acc = acc * x + c
    return acc


_TERM = re.compile(r"([+-]?)(\d*)(?:(x)(?:\^(\d+))?)?\Z")


def parse_poly(text: str) -> tuple[int, ...]:
    """Parse strings like ``"x^3-2x-2"`` into constant-first coefficients.

    Accepts optional whitespace and ``*`` between a coefficient and ``x``.
    Raises :class:`DomainError` on anything it cannot read.
    """
    compact = text.replace(" ", "").replace("*", "")
    if not compact:
        raise DomainError("empty polynomial string")
    coeffs: dict[int, int] = {}
    for token in re.findall(r"[+-]?[^+-]+", compact):
        m = _TERM.match(token)
        if m is None or (not m.group(2) and not m.group(3)):
            raise DomainError(f"unparsable polynomial term {token!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) else 1
        else:
            exp = 0
        coeffs[exp] = coeffs.get(exp, 0) + sign * coef
    degree = max(coeffs)
    return _trim(tuple(coeffs.get(i, 0) for i in range(degree + 1)))


def poly_to_string(coeffs, descending: bool = False) -> str:
    """Render constant-first coefficients as e.g. ``"1 - x - x^5"``."""
    coeffs = _trim(coeffs)
    terms = []
    exps = range(len(coeffs))
    for e in (reversed(exps) if descending else exps):
        c = coeffs[e]
        if c == 0 and len(coeffs) > 1:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "x" if e == 1 else f"x^{e}"
            body = var if mag == 1 else f"{mag}{var}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign0, body0 = terms[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class SignedPoly:
    """A polynomial ``1 + c_1 x + ... + c_k x^k`` with ``c_n`` in {-1, 0, +1}."""

    coeffs: tuple[int, ...]  # constant-first; coeffs[0] == 1

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise DomainError("constant term must be +1")
        if any(c not in (-1, 0, 1) for c in self.coeffs):
            raise DomainError("coefficients must lie in {-1, 0, 1}")

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)

    def __call__(self, x):
        return poly_eval(self.coeffs, x)


@dataclass(frozen=True)
class GreedyExpansion:
    """Digits ``c_1..c_k`` of the greedy expansion of 1 in powers of lambda.

    ``remainder = 1 - sum(c_n * lam**n)`` lies in ``[0, lam**k)`` and
    ``c_1 == 1`` (which needs ``lam > 1/2``).
    """

    lam: float
    k: int
    coefficients: tuple[int, ...]  # c_1..c_k, each 0 or 1
    remainder: float

    def relation_poly(self) -> SignedPoly:
        """The polynomial ``1 - c_1 x - ... - c_k x^k`` vanishing near lam."""
        return SignedPoly((1,) + tuple(-c for c in self.coefficients))


class Verdict(Enum):
    PISOT = "pisot"
    GARSIA = "garsia"
    NEITHER = "neither"


@dataclass(frozen=True)
class AlgebraicClass:
    """Classification of an integer polynomial's dominant root.

    ``modulus_margin`` is the smallest distance of any root modulus to 1, so
    borderline cases are visible to the caller.
    """

    poly: tuple[int, ...]
    verdict: Verdict
    roots: tuple[complex, ...]
    dominant_root: float | None
    reciprocal: float | None
    modulus_margin: float
    note: str | None = None


@dataclass(frozen=True)
class GrowthReport:
    """Growth data for binary words avoiding one forbidden block."""

    forbidden_block: str
    automaton_size: int
    rho: float  # spectral radius of the transfer matrix, in [1, 2]
    word_counts: tuple[int, ...]  # word_counts[n] = #length-n words, n = 0..cap
    degenerate: bool = False


# ---------------------------------------------------------------------------
# greedy expansion and nearby zeros


def greedy_expansion(lam: float, k: int) -> GreedyExpansion:
    """Greedy 0/1 digits c_1..c_k with ``1 - sum c_n lam^n`` in ``[0, lam^k)``.

    c_n is set to 1 exactly when the running remainder still exceeds lam^n.
    Requires ``lam > 1/2`` so that the leading digit c_1 = 1 is forced
    (equivalently ``1 - lam < lam``).
    """
    if not 0.5 < lam < 1.0:
        raise DomainError(f"greedy expansion needs lambda in (1/2, 1), got {lam}")
    if k < 1:
        raise DomainError("expansion length k must be >= 1")
    digits = [1]
    remainder = 1.0 - lam
    power = lam
    for _ in range(2, k + 1):
        power *= lam
        if remainder >= power:
            digits.append(1)
            remainder -= power
        else:
            digits.append(0)
    return GreedyExpansion(lam, k, tuple(digits), remainder)


def nearest_zero_above(lam: float, k: int) -> tuple[SignedPoly, float]:
    """Locate the zero of the greedy relation polynomial just above ``lam``.

    Returns ``(p, root)`` with ``p(x) = 1 - sum c_n x^n`` built from
    :func:`greedy_expansion` and its unique root in ``[lam, lam + lam**k)``.
    p is strictly decreasing there (``p' <= -1``), so plain bisection is
    unconditionally convergent; we run it to full double resolution.
    """
    expansion = greedy_expansion(lam, k)
    p = expansion.relation_poly()
    if expansion.remainder == 0.0:
        return p, lam
    lo = lam
    hi = lam + expansion.remainder
    # p(hi) <= 0 mathematically; nudge past any rounding of the evaluation.
    while poly_eval(p.coeffs, hi) > 0.0:
        hi += max(2.0**-48, 4.0 * np.spacing(hi))
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if poly_eval(p.coeffs, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return p, hi


# ---------------------------------------------------------------------------
# roots and classification


def _horner_pair(coeffs, z):
    """Value and derivative at ``z`` in one Horner pass."""
    val = 0j
    der = 0j
    for c in reversed(coeffs):
        der = der * z + val
        val = val * z + c
    return val, der


def poly_roots(coeffs) -> tuple[complex, ...]:
    """All complex roots of an integer polynomial, polished to ~1e-12.

    Companion-matrix eigenvalues seed a few Newton steps with the exact
    integer coefficients; conjugate pairs are symmetrized exactly.  Raises
    if any residual stays above ``1e-10`` relative to the coefficient scale.
    """
    coeffs = _trim(tuple(int(c) for c in coeffs))
    if len(coeffs) < 2:
        raise DomainError("root finding needs a nonconstant polynomial")
    raw = np.roots(np.array(coeffs[::-1], dtype=float))
    polished = []
    for z in raw:
        z = complex(z)
        for _ in range(8):
            val, der = _horner_pair(coeffs, z)
            if val == 0 or abs(der) < 1e-30:
                break
            step = val / der
            z -= step
            if abs(step) < 1e-15 * (1.0 + abs(z)):
                break
        polished.append(z)
    # Snap near-real roots, then rebuild exact conjugate pairs.
    reals = []
    uppers = []
    for z in polished:
        if abs(z.imag) <= 1e-10 * (1.0 + abs(z)):
            reals.append(complex(z.real, 0.0))
        elif z.imag > 0:
            uppers.append(z)
    roots = list(reals)
    for z in uppers:
        roots.append(z)
        roots.append(z.conjugate())
    if len(roots) != len(coeffs) - 1:
        # Pairing lost someone (e.g. odd cluster); fall back to raw values.
        roots = [complex(z) for z in polished]
    roots.sort(key=lambda z: (z.real, z.imag))
    scale = sum(abs(c) for c in coeffs)
    for z in roots:
        bound = scale * max(1.0, abs(z)) ** poly_degree(coeffs)
        if abs(poly_eval(coeffs, z)) > 1e-10 * bound:
            raise ArithmeticError(f"root residual too large for {coeffs}")
    return tuple(roots)


def classify(coeffs) -> AlgebraicClass:
    """Classify an integer polynomial as Pisot, Garsia, or neither.

    Pisot: monic, exactly one real root > 1, every other root of modulus
    < 1 by at least ``MODULUS_MARGIN``.  Garsia: monic, constant term of
    absolute value 2, every root of modulus > 1 by the same margin.  Root
    moduli within the margin of 1 yield NEITHER with a "borderline" note
    rather than an uncertain certificate.  The polynomial is taken at face
    value as the defining polynomial; reducible input can only lose a
    verdict, never fabricate one.
    """
    coeffs = _trim(tuple(int(c) for c in coeffs))
    if len(coeffs) < 2:
        raise DomainError("classification needs a nonconstant polynomial")
    if coeffs[-1] < 0:
        coeffs = tuple(-c for c in coeffs)
    roots = poly_roots(coeffs)
    margin = min(abs(abs(z) - 1.0) for z in roots)
    monic = coeffs[-1] == 1

    if not monic:
        return AlgebraicClass(coeffs, Verdict.NEITHER, roots, None, None, margin,
                              note="not monic: cannot certify an algebraic integer")

    real_gt_one = [z.real for z in roots if z.imag == 0.0 and z.real > 1.0]
    dominant = max(real_gt_one) if real_gt_one else None

    # Garsia first: for the single overlap x - 2 (no conjugates at all), the
    # reciprocal 1/2 behaves like the Garsia repulsion case.
    if abs(coeffs[0]) == 2:
        moduli = [abs(z) for z in roots]
        if all(m > 1.0 + MODULUS_MARGIN for m in moduli):
            return AlgebraicClass(coeffs, Verdict.GARSIA, roots, dominant,
                                  1.0 / dominant if dominant else None, margin)
        if all(m > 1.0 - MODULUS_MARGIN for m in moduli):
            return AlgebraicClass(coeffs, Verdict.NEITHER, roots, None, None, margin,
                                  note="borderline: root modulus within 1e-9 of 1")

    if dominant is not None and len(real_gt_one) == 1:
        others = [z for z in roots if not (z.imag == 0.0 and z.real == dominant)]
        moduli = [abs(z) for z in others]
        if all(m < 1.0 - MODULUS_MARGIN for m in moduli):
            return AlgebraicClass(coeffs, Verdict.PISOT, roots, dominant,
                                  1.0 / dominant, margin)
        if all(m < 1.0 + MODULUS_MARGIN for m in moduli):
            return AlgebraicClass(coeffs, Verdict.NEITHER, roots, None, None, margin,
                                  note="borderline: root modulus within 1e-9 of 1")

    return AlgebraicClass(coeffs, Verdict.NEITHER, roots, dominant,
                          1.0 / dominant if dominant else None, margin)


# ---------------------------------------------------------------------------
# forbidden blocks and subshift growth


def forbidden_block(relation_coeffs) -> str:
    """Digit block whose removal absorbs the relation ``1 + sum c_n x^n = 0``.

    Writing ``c_n = u_n - v_n`` canonically (``u_n = 1`` iff ``c_n = 1``,
    ``v_n = 1`` iff ``c_n = -1``), any occurrence of the block
    ``1 u_1 ... u_k`` in a digit string can be replaced by ``0 v_1 ... v_k``
    without changing the represented value, so counting strings that avoid
    the block bounds the number of distinct values.
    """
    coeffs = tuple(relation_coeffs)
    if any(c not in (-1, 0, 1) for c in coeffs):
        raise DomainError("relation coefficients must lie in {-1, 0, 1}")
    return "1" + "".join("1" if c == 1 else "0" for c in coeffs)


def _pattern_transitions(block: str) -> list[list[int]]:
    """KMP-automaton transitions over {0,1}; state len(block) is the dead state."""
    m = len(block)
    lps = [0] * m
    length = 0
    for i in range(1, m):
        while length and block[i] != block[length]:
            length = lps[length - 1]
        if block[i] == block[length]:
            length += 1
        lps[i] = length
    delta = [[0, 0] for _ in range(m)]
    for q in range(m):
        for a in (0, 1):
            ch = "01"[a]
            if block[q] == ch:
                delta[q][a] = q + 1
            elif q == 0:
                delta[q][a] = 0
            else:
                delta[q][a] = delta[lps[q - 1]][a]
    return delta


def _spectral_radius(T: np.ndarray) -> float:
    """Perron root of a nonnegative integer matrix by squared power iteration.

    Iterating on ``T + I`` removes rotational eigenvalue ties; repeated
    squaring reaches an effective power of 2^60, which also settles defective
    (Jordan) cases, so the final Rayleigh-style ratio is exact to rounding.
    """
    m = T.shape[0]
    M = T.astype(float) + np.eye(m)
    W = M.copy()
    for _ in range(60):
        W = W @ W
        W /= W.max()
    v = W @ np.ones(m)
    norm = v.sum()
    if norm <= 0:  # unreachable: state 0 always survives on the 0 symbol
        return 1.0
    v /= norm
    return float((M @ v).sum() / v.sum()) - 1.0


def sft_growth_rate(block: str, count_cap: int = 30) -> GrowthReport:
    """Growth rate of binary words avoiding ``block``, with exact word counts.

    Builds the pattern-matching automaton for the block, drops the absorbing
    (matched) state, and returns the transfer-matrix spectral radius together
    with exact dynamic-programming counts of surviving words for lengths up
    to ``count_cap``.  For non-degenerate blocks the count ratio is required
    to agree with the spectral radius to 1e-6 (extending the horizon
    internally as needed); disagreement raises.

    A block that only leaves polynomially many words (e.g. ``"1"``, which
    leaves just 0^n) is returned with ``rho = 1`` and flagged degenerate.
    """
    if not block or any(ch not in "01" for ch in block):
        raise DomainError("block must be a nonempty string over {0,1}")
    if block[0] != "1":
        raise DomainError("block must start with 1")
    m = len(block)
    delta = _pattern_transitions(block)
    T = np.zeros((m, m), dtype=np.int64)
    for q in range(m):
        for a in (0, 1):
            q2 = delta[q][a]
            if q2 < m:
                T[q, q2] += 1

    rho = _spectral_radius(T)
    rho = min(max(rho, 1.0), 2.0)
    degenerate = rho < 1.0 + 1e-9
    if degenerate:
        rho = 1.0

    # Exact integer word counts; counts[n] = number of length-n words.
    counts = [1]
    state = [0] * m
    state[0] = 1
    horizon = count_cap if degenerate else max(count_cap, 60)
    n = 0
    while True:
        nxt = [0] * m
        for q, w in enumerate(state):
            if w:
                for a in (0, 1):
                    q2 = delta[q][a]
                    if q2 < m:
                        nxt[q2] += w
        state = nxt
        counts.append(sum(state))
        n += 1
        if n >= horizon:
            if degenerate:
                break
            ratio = counts[-1] / counts[-2]
            if abs(ratio - rho) <= 1e-6 * rho or n >= 400:
                break
            horizon += 40
    if not degenerate:
        ratio = counts[-1] / counts[-2]
        if abs(ratio - rho) > 1e-6 * rho:
            raise ArithmeticError(
                f"word-count growth {ratio} disagrees with spectral radius {rho}")
    return GrowthReport(block, m, rho, tuple(counts[: count_cap + 1]), degenerate)


# ---------------------------------------------------------------------------
# exact reduction modulo a defining polynomial


def reduction_vector(minpoly):
    """Normalized polynomial and the reduction row for ``x**d`` modulo it.

    Returns ``(p, red)`` where ``p`` has positive leading coefficient and
    ``red[i]`` is the coefficient of ``x**i`` in ``x**d mod p`` (exact
    rationals; plain ints when ``p`` is monic so the hot path stays integer).
    """
    p = _trim(tuple(int(c) for c in minpoly))
    if len(p) < 2:
        raise DomainError("defining polynomial must be nonconstant")
    if p[-1] < 0:
        p = tuple(-c for c in p)
    lead = p[-1]
    red = tuple(Fraction(-c, lead) for c in p[:-1])
    if all(r.denominator == 1 for r in red):
        red = tuple(int(r) for r in red)
    return p, red


def shift_residue(res, red):
    """Multiply a residue vector by x and reduce, using the row from
    :func:`reduction_vector`."""
    top = res[-1]
    base = (0,) + res[:-1]
    if not top:
        return base
    return tuple(b + top * r for b, r in zip(base, red))


def reduce_mod_minpoly(digits, minpoly) -> tuple[Fraction, ...]:
    """Canonical representative of ``sum digits[n] * x**n`` modulo ``minpoly``.

    The result is a rational vector of length ``deg(minpoly)``; two digit
    strings reduce to the same vector exactly when their difference is
    divisible by the polynomial.
    """
    p, red = reduction_vector(minpoly)
    if any(d not in (0, 1) for d in digits):
        raise DomainError("digits must lie in {0, 1}")
    d = len(p) - 1
    res = (0,) * d
    for a in reversed(tuple(digits)):
        res = shift_residue(res, red)
        if a:
            res = (res[0] + 1,) + res[1:]
    return tuple(Fraction(c) for c in res)
