import random
from fractions import Fraction

import pytest

from superspecial.hermitian import (
    HermitianForm,
    QuatMatrix,
    act,
    automorphism_count,
    automorphism_group,
    class_set,
    dagger,
    genus_mass,
    haupt_norm,
    is_equivalent,
    quat_matrix_inverse,
    reduced_norm_mat,
    solve_congruence,
)
from superspecial.ideals import ideal_classes
from superspecial.lattice import GramForm, short_vectors
from superspecial.quat import order_for_prime


def rand_order_element(order, rng, span=2):
    return order.from_coords([rng.randint(-span, span) for _ in range(4)])


def rand_matrix(order, rng, g, span=2):
    return QuatMatrix([
        [rand_order_element(order, rng, span) for _ in range(g)]
        for _ in range(g)
    ])


def order_element_of_norm(order, value):
    q = GramForm.from_doubled(order.gram)
    vecs = short_vectors(q, value)
    assert vecs, f"no element of norm {value}"
    return order.from_coords(vecs[0])


def test_dagger_involution_and_antihomomorphism():
    order = order_for_prime(5)
    rng = random.Random(1)
    ident = QuatMatrix.identity(order.algebra, 3)
    assert dagger(ident) == ident
    x = rand_order_element(order, rng)
    scalar = QuatMatrix([[x]])
    assert dagger(scalar)[0][0] == x.conjugate()
    for _ in range(6):
        m = rand_matrix(order, rng, 3)
        n = rand_matrix(order, rng, 3)
        assert dagger(dagger(m)) == m
        assert dagger(m * n) == dagger(n) * dagger(m)


def test_reduced_norm_matrix():
    order = order_for_prime(5)
    alg = order.algebra
    rng = random.Random(2)
    for g in (1, 2, 3):
        assert reduced_norm_mat(QuatMatrix.identity(alg, g)) == 1
    # diagonal matrices multiply norms of the entries
    xs = [rand_order_element(order, rng) for _ in range(3)]
    diag = QuatMatrix.diagonal(alg, xs)
    assert reduced_norm_mat(diag) == (
        xs[0].reduced_norm() * xs[1].reduced_norm() * xs[2].reduced_norm()
    )
    # multiplicativity on random samples
    for _ in range(6):
        m = rand_matrix(order, rng, 2)
        n = rand_matrix(order, rng, 2)
        assert reduced_norm_mat(m * n) == reduced_norm_mat(m) * reduced_norm_mat(n)
    # g = 1 equals the quaternion norm
    x = rand_order_element(order, rng)
    assert reduced_norm_mat(QuatMatrix([[x]])) == x.reduced_norm()


def test_haupt_norm_identity_and_scaling():
    order = order_for_prime(5)
    for g in (1, 2, 3):
        ident = HermitianForm.identity(order, g)
        assert haupt_norm(ident) == 1
        for scale in (2, 3):
            scaled = HermitianForm(
                order, ident.mat.scale(scale), require_integral=True
            )
            assert haupt_norm(scaled) == scale**g


def test_haupt_norm_moore_example():
    # [[2, x], [conj(x), 3]] with Nm(x) = 5 has norm 2*3 - 5 = 1
    order = order_for_prime(5)
    alg = order.algebra
    x = order_element_of_norm(order, 5)
    mat = QuatMatrix([
        [alg.quaternion(2), x],
        [x.conjugate(), alg.quaternion(3)],
    ])
    form = HermitianForm(order, mat)
    assert haupt_norm(form) == 1


def test_act_right_action_and_norm_transport():
    order = order_for_prime(5)
    alg = order.algebra
    rng = random.Random(4)
    h = HermitianForm.identity(order, 2)
    assert act(h, QuatMatrix.identity(alg, 2)).mat == h.mat
    x = rand_order_element(order, rng)
    moved = act(h, QuatMatrix.diagonal(alg, [x, alg.one]))
    assert moved.mat[0][0] == alg.quaternion(x.reduced_norm())
    for _ in range(8):
        m = rand_matrix(order, rng, 2)
        if reduced_norm_mat(m) == 0:
            continue
        moved = act(h, m)
        assert moved.mat.dagger() == moved.mat
        assert reduced_norm_mat(moved.mat) == reduced_norm_mat(m) ** 2
        n = rand_matrix(order, rng, 2)
        assert act(act(h, m), n).mat == act(h, m * n).mat


def test_solve_congruence_unit_count():
    order = order_for_prime(5)
    one = HermitianForm.identity(order, 1)
    sols = solve_congruence(one, one, 1)
    assert len(sols) == 6  # the unit group of the order


def test_isometries_form_a_group():
    order = order_for_prime(5)
    h = HermitianForm.identity(order, 2)
    group = automorphism_group(h)
    keys = {m.key() for m in group}
    assert len(keys) == len(group) == 72
    rng = random.Random(7)
    for _ in range(10):
        a = rng.choice(group)
        b = rng.choice(group)
        assert (a * b).key() in keys
    inv = quat_matrix_inverse(group[3])
    assert inv.key() in keys


def test_automorphism_counts_p5():
    cs = class_set(5, 2)
    assert cs.e_values == (72, 240)
    for c in cs.classes:
        assert automorphism_count(c.form) == c.e
        assert c.e % 2 == 0  # contains +-Id


def test_class_sets_known_values():
    assert class_set(5, 1).h == 1
    assert class_set(5, 2).h == 2
    assert class_set(7, 2).h == 2
    assert class_set(2, 2).e_values == (1152,)


def test_class_set_mass_formula():
    for p in (2, 3, 5, 7, 13):
        cs = class_set(p, 2)
        assert cs.mass() == genus_mass(p, 2) == Fraction(
            (p - 1) * (p * p + 1), 5760
        )


def test_class_set_independent_of_auxiliary_prime():
    a = class_set(5, 2, 2)
    b = class_set(5, 2, 3)
    assert a.h == b.h
    assert sorted(a.e_values) == sorted(b.e_values)
    for ca in a.classes:
        matches = [
            cb for cb in b.classes
            if is_equivalent(ca.form, cb.form) is not None
        ]
        assert len(matches) == 1


def test_rank_one_consistency_with_ideal_classes():
    for p in (5, 11):
        cs = class_set(p, 1)
        assert cs.h == len(ideal_classes(p))
        assert cs.mass() == Fraction(p - 1, 24)


def test_inequivalent_p5_g2_classes():
    cs = class_set(5, 2)
    h1, h2 = (c.form for c in cs.classes)
    assert is_equivalent(h1, h2) is None
    # exhaustive: no solution at all to M^dagger H1 M = H2
    assert solve_congruence(h1, h2, 1) == []


def test_equivalence_witness_has_norm_one():
    order = order_for_prime(5)
    h = HermitianForm.identity(order, 2)
    group = automorphism_group(h)
    moved = act(h, group[5])
    w = is_equivalent(h, HermitianForm(order, moved.mat))
    assert w is not None
    assert reduced_norm_mat(w) == 1


def test_invalid_inputs():
    order = order_for_prime(5)
    with pytest.raises(ValueError):
        class_set(4, 1)
    with pytest.raises(ValueError):
        class_set(5, 0)
    with pytest.raises(ValueError):
        class_set(5, 2, 5)  # auxiliary prime must differ from p
    alg = order.algebra
    not_hermitian = QuatMatrix([
        [alg.one, alg.gen_i],
        [alg.gen_i, alg.one],
    ])
    with pytest.raises(ValueError):
        HermitianForm(order, not_hermitian)


def test_genus_mass_table():
    assert genus_mass(5, 1) == Fraction(1, 6)
    assert genus_mass(5, 2) == Fraction(13, 720)
    assert genus_mass(5, 3) == Fraction(403, 90720)
    assert genus_mass(5, 4) is None
