import math
from fractions import Fraction

import pytest

from regasym.counts import (
    CountTable,
    LimitExceeded,
    MissingCount,
    OffsetMismatch,
    ParseError,
    PROV_FORMULA,
    PROV_INGESTED,
    count_brute,
    count_hadamard,
    count_two_regular,
    egf_reciprocal_coeffs,
    inner_bracket,
    load_bfile,
    reference_table,
)
from regasym.series import Series


# -- brute force ------------------------------------------------------------


def test_brute_examples():
    assert count_brute(0, 5) == 1
    assert count_brute(1, 4) == 3
    assert count_brute(2, 4) == 3
    assert count_brute(2, 3) == 1
    assert count_brute(3, 4) == 1


def test_brute_limit():
    with pytest.raises(LimitExceeded):
        count_brute(3, 11)
    assert count_brute(3, 9, limit=10) == 0  # odd n*k


def test_brute_structural_zeros():
    assert count_brute(3, 2) == 0
    assert count_brute(5, 4) == 0
    assert count_brute(2, 0) == 1


# -- moment formula ----------------------------------------------------------


def test_hadamard_examples():
    assert count_hadamard(2, 3) == 1
    assert count_hadamard(3, 4) == 1
    assert count_hadamard(3, 6) == 70  # brute-force oracle value


def test_hadamard_structural_zero_range():
    for k in (2, 3, 4):
        for n in range(1, k + 1):
            if (n * k) % 2 == 0:
                assert count_hadamard(k, n) == 0


def test_hadamard_preconditions():
    with pytest.raises(ValueError):
        count_hadamard(1, 2)
    with pytest.raises(ValueError):
        count_hadamard(3, 5)


def test_hadamard_empty_graph():
    assert count_hadamard(4, 0) == 1


def test_inner_bracket_imaginary_structure():
    # the k=2 bracket is -i x2 - x1^2/2 + 1/2
    from regasym.multipoly import MPoly, monomial
    from regasym.series import GaussianRational

    p = inner_bracket(2)
    assert p.terms[monomial({2: 1})] == GaussianRational(0, -1)
    assert p.terms[monomial({1: 2})] == GaussianRational(Fraction(-1, 2))
    assert p.terms[()] == GaussianRational(Fraction(1, 2))


def test_hadamard_matches_brute_small_grid():
    for k in (2, 3):
        for n in range(0, 9):
            if (n * k) % 2 == 0:
                assert count_hadamard(k, n) == count_brute(k, n), (k, n)


def test_hadamard_matches_two_regular():
    for n in range(0, 13):
        assert count_hadamard(2, n) == count_two_regular(n), n


def test_hadamard_complement_identity():
    # complementing swaps k-regular and (n-1-k)-regular on n vertices
    assert count_hadamard(4, 7) == count_two_regular(7)
    assert count_hadamard(5, 6) == 1  # complement of the empty graph: K6


def test_two_regular_examples():
    assert count_two_regular(0) == 1
    assert count_two_regular(3) == 1
    assert count_two_regular(5) == 12  # brute-force oracle value
    assert count_two_regular(5) == count_brute(2, 5)


# -- count table ----------------------------------------------------------------


def test_table_structural_answers():
    t = CountTable()
    assert t.get(7, 0) == 1
    assert t.get(3, 5) == 0  # odd n*k
    assert t.get(4, 3) == 0  # 1 <= n <= k
    assert t.get(0, 9) == 1
    with pytest.raises(MissingCount):
        t.get(3, 6)


def test_table_put_conflicts():
    t = CountTable()
    t.put(3, 6, 70, PROV_FORMULA)
    t.put(3, 6, 70, PROV_INGESTED)  # same value is fine
    with pytest.raises(ValueError):
        t.put(3, 6, 71, PROV_FORMULA)
    # n = 2 <= k = 3 must be zero
    with pytest.raises(ValueError):
        t.put(3, 2, 5, PROV_FORMULA)


def test_table_cache_round_trip(tmp_path):
    t = CountTable()
    t.put(3, 6, 70, PROV_FORMULA)
    t.put(2, 5, 12, PROV_INGESTED)
    path = tmp_path / "cache.txt"
    t.save_cache(path)
    lines = path.read_text().splitlines()
    assert "3 6 70 formula" in lines and "2 5 12 ingested" in lines
    back = CountTable.load_cache(path)
    assert back.entries == t.entries
    assert back.provenance == t.provenance


# -- b-files -----------------------------------------------------------------------


def test_load_bfile_basic(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("# a comment\n0 1\n1 0\n\n4 1\n")
    t = load_bfile(path, 3)
    assert t.get(3, 0) == 1 and t.get(3, 4) == 1
    assert t.provenance[(3, 4)] == PROV_INGESTED


def test_load_bfile_parse_error(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("0 1\nnot numbers\n")
    with pytest.raises(ParseError) as err:
        load_bfile(path, 3)
    assert err.value.lineno == 2
    path.write_text("0 1 2\n")
    with pytest.raises(ParseError):
        load_bfile(path, 3)


def test_load_bfile_offset(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("5 1\n6 0\n")
    with pytest.raises(OffsetMismatch):
        load_bfile(path, 3, offset=0)


def test_reference_tables_cross_checked():
    sg3 = reference_table("sg", 3)
    assert sg3.get(3, 4) == 1
    for n in range(0, 9):
        if (3 * n) % 2 == 0:
            assert sg3.get(3, n) == count_brute(3, n), n
    sg5 = reference_table("sg", 5)
    assert sg5.get(5, 8) == count_two_regular(8)
    csg3 = reference_table("csg", 3)
    assert csg3.get(3, 0) == 0  # the empty graph is not connected
    assert csg3.get(3, 4) == 1
    assert csg3.get(3, 6) == 70


def test_reference_table_extends_to_100():
    for which, k in (("sg", 3), ("sg", 4), ("sg", 5), ("csg", 3), ("csg", 4)):
        t = reference_table(which, k)
        assert t.known(k, 100)


def test_ingested_values_equal_formula_values(small_counts):
    # wherever both provenances exist they must agree
    for k in (3, 4, 5):
        ref = reference_table("sg", k)
        for (kk, n), value in small_counts.entries.items():
            if kk == k and ref.known(k, n):
                assert ref.get(k, n) == value, (k, n)


# -- reciprocal EGF ---------------------------------------------------------------


def test_egf_reciprocal_small():
    t = CountTable()
    t.put(3, 4, 1, PROV_FORMULA)
    coeffs = egf_reciprocal_coeffs(3, 4, t)
    assert coeffs[0] == 1
    assert coeffs[1:4] == [0, 0, 0]
    assert coeffs[4] == Fraction(-1, 24)


def test_egf_reciprocal_vanishes_through_k(small_counts):
    for k in (3, 4, 5):
        coeffs = egf_reciprocal_coeffs(k, min(2 * k, 10), small_counts)
        for j in range(1, k + 1):
            assert coeffs[j] == 0, (k, j)


def test_egf_reciprocal_oracle_division(small_counts):
    # oracle: multiply back and compare with 1
    k, jmax = 3, 8
    coeffs = egf_reciprocal_coeffs(k, jmax, small_counts)
    egf = Series(
        [Fraction(small_counts.get(k, m), math.factorial(m)) for m in range(jmax + 1)],
        jmax,
    )
    assert egf * Series(coeffs, jmax) == Series.one(jmax)


def test_egf_reciprocal_missing_count():
    with pytest.raises(MissingCount):
        egf_reciprocal_coeffs(3, 6, CountTable())
