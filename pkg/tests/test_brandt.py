from fractions import Fraction

import pytest

from superspecial.brandt import (
    BrandtIntegralityError,
    OrientationError,
    brandt_g1_classical,
    brandt_matrix,
    brandt_zero,
    expected_row_sum,
    matches_up_to_permutation,
    row_sum_check,
    weighted_symmetry_check,
)
from superspecial.hermitian import class_set

# published values for discriminant 5 (rank 1 and 2)
TABLE_P5 = {
    (1, 2): [[3]],
    (1, 3): [[4]],
    (1, 7): [[8]],
    (1, 11): [[12]],
    (2, 2): [[12, 3], [10, 5]],
    (2, 3): [[34, 6], [20, 20]],
    (2, 7): [[322, 78], [260, 140]],
    (2, 11): [[1164, 300], [1000, 464]],
}


def test_known_values_p5_rank1():
    cs = class_set(5, 1)
    for (g, ell), ref in TABLE_P5.items():
        if g != 1:
            continue
        got = brandt_matrix(cs, ell)
        assert got.as_int_rows() == ref


def test_known_values_p5_rank2():
    cs = class_set(5, 2)
    for (g, ell), ref in TABLE_P5.items():
        if g != 2:
            continue
        got = brandt_matrix(cs, ell)
        assert matches_up_to_permutation(got, ref) is not None


def test_row_sums_general():
    for p in (2, 3, 5, 7):
        for g in (1, 2):
            cs = class_set(p, g)
            for ell in (2, 3):
                if ell == p:
                    continue
                matrix = brandt_matrix(cs, ell)
                ok, report = row_sum_check(matrix)
                assert ok, report
                assert report["target"] == expected_row_sum(g, ell)


def test_weighted_symmetry():
    for p, g in ((5, 1), (5, 2), (7, 2), (11, 1)):
        cs = class_set(p, g)
        for ell in (2, 3):
            if ell == p:
                continue
            assert weighted_symmetry_check(brandt_matrix(cs, ell))


def test_brandt_zero():
    cs = class_set(5, 2)
    b0 = brandt_zero(cs)
    assert b0.entries == (
        (Fraction(1, 72), Fraction(1, 240)),
        (Fraction(1, 72), Fraction(1, 240)),
    )
    assert all(v > 0 for row in b0.entries for v in row)
    assert brandt_zero(class_set(5, 1)).entries == ((Fraction(1, 6),),)


def test_rank_one_identity_level():
    cs = class_set(5, 1)
    assert brandt_matrix(cs, 1).as_int_rows() == [[1]]


def test_rank_one_arbitrary_levels():
    # levels divisible by p are allowed in rank one
    cs = class_set(5, 1)
    assert brandt_matrix(cs, 5).as_int_rows() == [[1]]
    assert brandt_matrix(cs, 10).as_int_rows() == [[3]]


def test_classical_matches_hermitian_route():
    for p in (2, 3, 5, 7, 11, 13):
        cs = class_set(p, 1)
        for n in range(1, 13):
            via_classes = brandt_matrix(cs, n)
            classical = brandt_g1_classical(p, n)
            assert matches_up_to_permutation(
                via_classes, classical.as_int_rows()
            ) is not None, (p, n)


def test_commutativity_rank_one():
    # B(m) B(n) = B(n) B(m) for coprime m, n (classical Brandt fact)
    import math

    for p in (5, 11):
        cs = class_set(p, 1)
        mats = {n: brandt_matrix(cs, n).as_int_rows() for n in range(1, 13)}

        def matmul(a, b):
            h = len(a)
            return [
                [sum(a[i][t] * b[t][j] for t in range(h)) for j in range(h)]
                for i in range(h)
            ]

        for m in range(2, 13):
            for n in range(2, 13):
                if math.gcd(m, n) == 1:
                    assert matmul(mats[m], mats[n]) == matmul(mats[n], mats[m])


def test_composite_level_rejected_for_higher_rank():
    cs = class_set(5, 2)
    with pytest.raises(ValueError):
        brandt_matrix(cs, 6)
    with pytest.raises(ValueError):
        brandt_matrix(cs, 5)  # equals p
    with pytest.raises(ValueError):
        brandt_matrix(cs, 0)


def test_jobs_do_not_change_results():
    cs = class_set(5, 2)
    assert brandt_matrix(cs, 3, jobs=1).entries == brandt_matrix(cs, 3, jobs=4).entries


def test_orientation_guard():
    asym = [[5, 1], [3, 2]]
    transposed = [[5, 3], [1, 2]]
    with pytest.raises(OrientationError):
        matches_up_to_permutation(asym, transposed)
    # a genuine non-match (not a transpose) is None, no error
    assert matches_up_to_permutation(asym, [[9, 9], [9, 9]]) is None


def test_integrality_guard():
    from superspecial.brandt import _divide_exact

    with pytest.raises(BrandtIntegralityError):
        _divide_exact(7, 2)
