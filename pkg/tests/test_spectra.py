import random
from fractions import Fraction

import pytest

from superspecial.brandt import brandt_matrix
from superspecial.graphs import build_enhanced, build_little
from superspecial.hermitian import class_set
from superspecial.spectra import (
    char_poly,
    companion_matrix,
    eigenvalues,
    ramanujan_report,
)


def test_char_poly_basics():
    assert char_poly([[3]]) == [-3, 1]
    assert char_poly([[12, 3], [10, 5]]) == [30, -17, 1]  # (x-15)(x-2)
    assert char_poly([[0, 1], [1, 0]]) == [-1, 0, 1]


def test_companion_round_trip():
    rng = random.Random(5)
    for _ in range(6):
        coeffs = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))] + [1]
        assert char_poly(companion_matrix(coeffs)) == coeffs


def test_eigenvalues_exact_and_intervals():
    evs = eigenvalues([[12, 3], [10, 5]])
    assert [e.exact for e in evs] == [2, 15]
    # irrational pair at +-sqrt(2)
    evs = eigenvalues([[0, 2], [1, 0]])
    assert all(e.exact is None for e in evs)
    for e, target in zip(evs, (-(2**0.5), 2**0.5)):
        assert abs(e.approx() - target) < 1e-8
        assert e.hi - e.lo <= Fraction(1, 2**30)


def test_multiplicity():
    # (x-1)^2 (x-3)
    mat = [[1, 0, 0], [0, 1, 0], [0, 0, 3]]
    evs = eigenvalues(mat)
    assert [(e.exact, e.multiplicity) for e in evs] == [(1, 2), (3, 1)]


def test_symmetric_matrices_have_real_spectra():
    rng = random.Random(11)
    for _ in range(5):
        n = rng.randint(2, 4)
        sym = [[0] * n for _ in range(n)]
        for r in range(n):
            for c in range(r, n):
                sym[r][c] = sym[c][r] = rng.randint(-4, 4)
        evs = eigenvalues(sym)  # raises if any root is not real
        assert sum(e.multiplicity for e in evs) == n


def test_report_p5_g2():
    cs = class_set(5, 2)
    B = brandt_matrix(cs, 2)
    rep = ramanujan_report(B)
    assert rep.k == 15
    assert rep.char_coefficients == (30, -17, 1)
    assert [e.exact for e in rep.eigenvalues] == [2]
    assert rep.verdicts == ("within",)  # |2| <= 2*sqrt(14) ~ 7.48
    assert rep.is_ramanujan


def test_report_vacuous_single_class():
    cs = class_set(5, 1)
    rep = ramanujan_report(brandt_matrix(cs, 2))
    assert rep.k == 3
    assert rep.eigenvalues == ()
    assert rep.is_ramanujan  # vacuously


def test_trivial_eigenvalue_always_root():
    for p, g, ell in ((5, 2, 3), (7, 2, 2), (11, 1, 3)):
        B = brandt_matrix(class_set(p, g), ell)
        rep = ramanujan_report(B)
        poly = rep.char_coefficients
        k = rep.k
        assert sum(c * k**t for t, c in enumerate(poly)) == 0


def test_bipartite_spectrum_is_symmetric():
    cs = class_set(5, 2)
    little = build_little(cs, 2)
    enh = build_enhanced(little)
    adw = [[int(v) for v in row] for row in enh.graph.weighted_adjacency()]
    rep = ramanujan_report(adw, bipartite=True)
    evs = {(e.exact, e.multiplicity) for e in rep.eigenvalues}
    assert evs == {(Fraction(2), 1), (Fraction(-2), 1)}
    # +-spec identity at the characteristic polynomial level
    small = char_poly([[int(v) for v in row] for row in little.weighted_adjacency()])
    big = char_poly(adw)
    reflected = [c * (-1) ** t for t, c in enumerate(small)]
    prod = [0] * (len(small) + len(reflected) - 1)
    for i, a in enumerate(small):
        for j, b in enumerate(reflected):
            prod[i + j] += a * b
    assert big == prod or big == [-c for c in prod]


def test_outside_verdict():
    # 4-regular graph with eigenvalue 4 > 2*sqrt(3): two disjoint 4-cliques
    # would be disconnected; instead use the multigraph [[0,4],[4,0]]:
    # eigenvalues +-4, bound 2*sqrt(3) ~ 3.46: -4 is outside
    rep = ramanujan_report([[0, 4], [4, 0]])
    assert rep.k == 4
    assert rep.verdicts == ("outside",)
    assert not rep.is_ramanujan


def test_boundary_contact_counts_as_within():
    # [[0,2],[2,0]] has k = 2, bound 2*sqrt(1) = 2; eigenvalue -2 = -k is
    # the bipartite-trivial one; treated as within when not excluded
    rep = ramanujan_report([[0, 2], [2, 0]])
    assert rep.verdicts == ("within",)


def test_row_sum_validation():
    with pytest.raises(ValueError):
        ramanujan_report([[1, 2], [3, 1]])
