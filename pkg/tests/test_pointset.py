import math

import numpy as np
import pytest

from bcvlab import (DomainError, Form, SizeCapError, distinct_count,
                    distinct_count_profile, generate, generate_exact,
                    read_binary, write_binary, write_csv)
from oracles import horner_values

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_MINPOLY = (-1, 1, 1)  # x^2 + x - 1


def test_primed_two_levels_explicit():
    ps = generate(0.75, 2, Form.PRIMED)
    assert ps.values.tolist() == [0.0, 0.75, 1.0, 1.75]


def test_half_gives_binary_rationals():
    for n in (3, 6, 10):
        ps = generate(0.5, n, Form.STANDARD)
        assert np.array_equal(ps.values, np.arange(1 << n) / (1 << n))


def test_golden_level3_coincidence():
    # Digit strings 100 and 011 both represent 1 (lam + lam^2 = 1); in floats
    # they land within the distinctness tolerance of each other.
    ps = generate(GOLDEN, 3, Form.PRIMED)
    assert ps.values.size == 8
    diffs = np.diff(ps.values)
    assert diffs.min() <= ps.distinct_tolerance()
    near_one = np.abs(ps.values - 1.0) <= 4 * np.spacing(1.0)
    assert near_one.sum() == 2
    # The exact backend certifies the coincidence.
    eps = generate_exact(GOLDEN_MINPOLY, 3)
    assert sorted(eps.residues.values()) == [1, 1, 1, 1, 1, 1, 2]


@pytest.mark.parametrize("levels,expected", [(1, 2), (2, 4), (3, 7), (4, 12)])
def test_golden_distinct_counts(levels, expected):
    assert distinct_count(generate_exact(GOLDEN_MINPOLY, levels)) == expected


def test_garsia_sqrt2_no_coincidences():
    eps = generate_exact((-2, 0, 1), 8)
    assert distinct_count(eps) == 256
    assert all(m == 1 for m in eps.residues.values())


def test_distinct_count_profile_matches_individual_runs():
    profile = distinct_count_profile(GOLDEN_MINPOLY, 6)
    assert profile == [distinct_count(generate_exact(GOLDEN_MINPOLY, n))
                       for n in range(1, 7)]


def test_multiplicity_conservation():
    for minpoly in [GOLDEN_MINPOLY, (-2, 0, 1), (-1, 0, 2), (-2, -2, 0, 1)]:
        for n in (1, 4, 9):
            eps = generate_exact(minpoly, n)
            assert sum(eps.residues.values()) == 1 << n


def test_merge_equals_horner_brute_force():
    rng = np.random.default_rng(31415)
    for lam in 0.52 + 0.38 * rng.random(6):
        for n in (1, 5, 12):
            for form, standard in ((Form.STANDARD, True), (Form.PRIMED, False)):
                got = generate(lam, n, form).values
                want = horner_values(lam, n, standard)
                tol = 8 * n * np.spacing(np.maximum(np.abs(got), np.abs(want)))
                assert np.all(np.abs(got - want) <= tol)


def test_standard_is_scaled_primed_same_float_path():
    rng = np.random.default_rng(7)
    for lam in 0.52 + 0.45 * rng.random(5):
        std = generate(lam, 9, Form.STANDARD)
        pri = generate(lam, 9, Form.PRIMED)
        assert np.array_equal(std.values, (1.0 - lam) * pri.values)


def test_endpoint_invariants():
    rng = np.random.default_rng(11)
    for lam in 0.52 + 0.45 * rng.random(8):
        for n in (2, 7, 13):
            std = generate(lam, n, Form.STANDARD)
            pri = generate(lam, n, Form.PRIMED)
            assert std.values[0] == 0.0 and pri.values[0] == 0.0
            end_std = 1.0 - lam**n
            end_pri = (1.0 - lam**n) / (1.0 - lam)
            assert abs(std.values[-1] - end_std) <= 4 * n * np.spacing(end_std)
            assert abs(pri.values[-1] - end_pri) <= 4 * n * np.spacing(end_pri)


def test_float_distinctness_away_from_relations():
    # lambda = 1/2 is a zero of no {0,±1} polynomial, and generic samples
    # stay clear of low-degree relations at this resolution.
    for lam in (0.5, 0.67234, 0.81321):
        ps = generate(lam, 12)
        assert np.all(np.diff(ps.values) > ps.distinct_tolerance())


def test_values_sorted_and_sized():
    ps = generate(0.83, 11, Form.PRIMED)
    assert ps.values.size == 1 << 11
    assert np.all(np.diff(ps.values) >= 0)


def test_generate_errors_and_range_note():
    with pytest.raises(DomainError):
        generate(0.0, 4)
    with pytest.raises(DomainError):
        generate(1.0, 4)
    with pytest.raises(SizeCapError):
        generate(0.6, 0)
    with pytest.raises(SizeCapError):
        generate(0.6, 29)
    assert generate(0.4, 3).range_note is not None
    assert generate(0.5, 3).range_note is not None
    assert generate(0.51, 3).range_note is None


def test_generate_exact_errors():
    with pytest.raises(DomainError):
        generate_exact((3,), 4)  # constant
    with pytest.raises(DomainError):
        generate_exact((0,), 4)  # zero
    with pytest.raises(SizeCapError):
        generate_exact(GOLDEN_MINPOLY, 25)


def test_values_are_read_only():
    ps = generate(0.6, 5)
    with pytest.raises(ValueError):
        ps.values[0] = 1.0


def test_binary_round_trip(tmp_path):
    ps = generate(0.6429, 9, Form.PRIMED)
    path = tmp_path / "dump.bin"
    write_binary(ps, path)
    raw = path.read_bytes()
    assert raw[:4] == b"BCV1"
    assert len(raw) == 4 + 13 + 8 * (1 << 9)
    back = read_binary(path)
    assert back.lam == ps.lam and back.levels == ps.levels and back.form == ps.form
    assert np.array_equal(back.values, ps.values)


def test_binary_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 32)
    with pytest.raises(DomainError):
        read_binary(path)


def test_csv_round_trip(tmp_path):
    ps = generate(0.70880447, 7)
    path = tmp_path / "vals.csv"
    write_csv(ps, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 1 << 7
    back = np.array([float(x) for x in lines])
    assert np.array_equal(back, ps.values)
