import random
from fractions import Fraction

import numpy as np
import pytest

from superspecial.lattice import (
    CrossConstraints,
    GramForm,
    constrained_matrix_search,
    rref_mod,
    rref_mod_batch,
    search_columns,
    short_vector_array,
    short_vectors,
    short_vectors_naive,
)
from superspecial.quat import order_for_prime


def identity_form(n):
    return GramForm([[1 if r == c else 0 for c in range(n)] for r in range(n)])


def random_form(rng, n):
    # L L^T for a random integer matrix L with dominant diagonal: pos def
    L = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    for r in range(n):
        L[r][r] = rng.randint(3, 7)
    return GramForm([
        [Fraction(sum(L[r][t] * L[s][t] for t in range(n))) for s in range(n)]
        for r in range(n)
    ])


def test_identity_counts():
    q = identity_form(4)
    assert len(short_vectors(q, 1)) == 8
    assert len(short_vectors(q, 2)) == 24
    assert short_vectors(q, 0) == [(0, 0, 0, 0)]
    assert short_vectors(q, -1) == []


def test_unit_count_h5():
    order = order_for_prime(5)
    q = GramForm.from_doubled(order.gram)
    assert len(short_vectors(q, 1)) == 6


def test_negation_symmetry_and_values():
    rng = random.Random(17)
    q = random_form(rng, 4)
    for value in (4, 10, 25):
        vecs = short_vectors(q, value)
        got = set(vecs)
        for v in vecs:
            assert tuple(-c for c in v) in got
            assert q.value(v) == value


def test_completeness_against_box_search():
    rng = random.Random(23)
    for n in (2, 3, 4):
        for _ in range(3):
            q = random_form(rng, n)
            for value in range(21):
                assert short_vectors(q, value) == short_vectors_naive(q, value)


def test_rejects_indefinite():
    with pytest.raises(ValueError):
        GramForm([[1, 0], [0, -1]])
    with pytest.raises(ValueError):
        GramForm([[0, 1], [1, 0]])


def test_rref_mod_canonical():
    rows = [[2, 4, 0, 1], [1, 2, 0, 3]]
    a = rref_mod(rows, 5)
    b = rref_mod([[1, 2, 0, 3], [3, 6, 0, 4]], 5)
    assert a == b  # same row span, same canonical form
    batch = np.array([
        [[2, 4, 0, 1], [1, 2, 0, 3], [0, 0, 0, 0], [0, 0, 0, 0]],
        [[1, 2, 0, 3], [3, 6, 0, 4], [0, 0, 0, 0], [0, 0, 0, 0]],
    ])
    reduced = rref_mod_batch(batch, 5)
    assert reduced[0].tobytes() == reduced[1].tobytes()
    nz = [tuple(int(x) for x in row) for row in reduced[0] if row.any()]
    assert tuple(nz) == a


def test_rref_mod_batch_matches_scalar():
    rng = random.Random(3)
    for ell in (2, 3, 7):
        mats = np.array([
            [[rng.randint(0, ell - 1) for _ in range(5)] for _ in range(4)]
            for _ in range(20)
        ])
        reduced = rref_mod_batch(mats, ell)
        for t in range(20):
            single = rref_mod([list(map(int, r)) for r in mats[t]], ell)
            nz = tuple(
                tuple(int(x) for x in row) for row in reduced[t] if row.any()
            )
            assert nz == single


def test_constrained_search_trivial_cases():
    # no columns: one vacuous solution
    assert constrained_matrix_search([], []) == [()]
    # unsatisfiable first column (7 is not a sum of three squares): empty
    q = identity_form(3)
    assert constrained_matrix_search([q], [7]) == []
    # single column with no cross constraints reduces to short vectors
    sols = constrained_matrix_search([q], [2])
    assert sorted(s[0] for s in sols) == short_vectors(q, 2)


def test_constrained_search_cross_exact():
    # columns x, y in Z^2 with |x|^2 = |y|^2 = 1 and <x, y> = 0
    q = identity_form(2)
    tensor = np.zeros((2, 2, 1), dtype=np.int64)
    tensor[0, 0, 0] = 1
    tensor[1, 1, 0] = 1
    cross = CrossConstraints(tensor, targets={(0, 1): (0,)})
    sols = constrained_matrix_search([q, q], [1, 1], cross)
    # 4 choices of +-e_i for x, then y must be orthogonal: 2 choices each
    assert len(sols) == 8
    for x, y in sols:
        assert x[0] * y[0] + x[1] * y[1] == 0


def test_constrained_search_modulus():
    q = identity_form(2)
    tensor = np.zeros((2, 2, 1), dtype=np.int64)
    tensor[0, 0, 0] = 1
    tensor[1, 1, 0] = 1
    cross = CrossConstraints(tensor, modulus=2)
    sols = constrained_matrix_search([q, q], [1, 1], cross)
    for x, y in sols:
        assert (x[0] * y[0] + x[1] * y[1]) % 2 == 0


def test_search_columns_blocks_cover_all():
    q = identity_form(2)
    total = 0
    for block in search_columns([q, q], [1, 2]):
        assert block.shape[1:] == (2, 2)
        total += len(block)
    assert total == len(short_vectors(q, 1)) * len(short_vectors(q, 2))


def test_limit_short_circuits():
    q = identity_form(4)
    sols = constrained_matrix_search([q], [2], limit=5)
    assert len(sols) == 5


def test_short_vector_array_dtype():
    q = identity_form(3)
    arr = short_vector_array(q, 1)
    assert arr.dtype == np.int64 and arr.shape == (6, 3)
    assert short_vector_array(q, 10**6 + 7).shape == (0, 3)
