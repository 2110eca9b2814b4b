import json
import random
from fractions import Fraction

import pytest

from superspecial.quat import (
    ConstructionError,
    MaximalOrder,
    Quaternion,
    QuaternionAlgebra,
    algebra_for_prime,
    hilbert_symbol,
    is_prime,
    maximal_order,
    order_for_prime,
    order_from_dict,
    ramified_primes,
    reduced_norm,
)

PRIMES = (2, 3, 5, 7, 11, 13, 17, 29)


def random_quaternion(alg, rng, span=9):
    return alg.quaternion(*[Fraction(rng.randint(-span, span), rng.randint(1, 3))
                            for _ in range(4)])


def test_primality():
    assert is_prime(2) and is_prime(97) and is_prime(2**31 - 1)
    assert not is_prime(1) and not is_prime(4) and not is_prime(91)


def test_hilbert_symbol_product_formula():
    rng = random.Random(11)
    for _ in range(40):
        a = rng.choice([-1, 1]) * rng.randint(1, 60)
        b = rng.choice([-1, 1]) * rng.randint(1, 60)
        places = {2, None}
        for n in (abs(a), abs(b)):
            d = 2
            while d * d <= n:
                if n % d == 0:
                    places.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                places.add(n)
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1


def test_algebra_for_prime_ramification():
    for p in PRIMES:
        alg = algebra_for_prime(p)
        assert alg.is_definite()
        assert ramified_primes(int(alg.a), int(alg.b)) == {p}
        assert hilbert_symbol(int(alg.a), int(alg.b), None) == -1


def test_algebra_for_prime_rejects_composites():
    with pytest.raises(ValueError):
        algebra_for_prime(4)
    with pytest.raises(ValueError):
        algebra_for_prime(1)


def test_quaternion_arithmetic_laws():
    rng = random.Random(5)
    alg = algebra_for_prime(7)
    for _ in range(25):
        x = random_quaternion(alg, rng)
        y = random_quaternion(alg, rng)
        z = random_quaternion(alg, rng)
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        # conjugation is an anti-involution
        assert x.conjugate().conjugate() == x
        assert (x * y).conjugate() == y.conjugate() * x.conjugate()
        # norm is multiplicative
        assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)


def test_norm_positivity_and_examples():
    alg = algebra_for_prime(5)
    assert reduced_norm(alg.one) == 1
    assert reduced_norm(alg.gen_i) == -alg.a == 2
    rng = random.Random(3)
    for _ in range(20):
        x = random_quaternion(alg, rng)
        if not x.is_zero():
            assert reduced_norm(x) > 0
    assert (alg.gen_i * alg.gen_i).coeffs[0] == alg.a
    assert alg.gen_i * alg.gen_j == -(alg.gen_j * alg.gen_i)


def test_maximal_orders_certified():
    for p in PRIMES:
        order = order_for_prime(p)
        assert order.reduced_discriminant == p
        assert order.contains(order.algebra.one)
        # trace form Gram: integral, positive definite, determinant p^2
        gram = order.gram
        assert all(isinstance(v, int) for row in gram for v in row)
        # integrality of Trd and Nm on order elements
        rng = random.Random(p)
        for _ in range(10):
            x = order.from_coords([rng.randint(-4, 4) for _ in range(4)])
            assert x.reduced_trace().denominator == 1
            assert x.reduced_norm().denominator == 1


def test_order_closed_under_multiplication():
    order = order_for_prime(11)
    for er in order.basis:
        for es in order.basis:
            assert order.contains(er * es)


def test_maximal_order_rejects_indefinite():
    bad = QuaternionAlgebra(Fraction(2), Fraction(-3), 6)
    with pytest.raises(ConstructionError):
        maximal_order(bad)


def test_json_round_trip():
    order = order_for_prime(13)
    data = json.loads(json.dumps(order.to_dict()))
    rebuilt = order_from_dict(data)
    assert rebuilt.basis_matrix == order.basis_matrix
    assert rebuilt.reduced_discriminant == 13


def test_trace_form_matches_norm():
    # <x,x> = Trd(x conj(x)) = 2 Nm(x) on the order
    order = order_for_prime(5)
    rng = random.Random(9)
    for _ in range(10):
        cs = [rng.randint(-3, 3) for _ in range(4)]
        x = order.from_coords(cs)
        q = sum(
            order.gram[r][s] * cs[r] * cs[s] for r in range(4) for s in range(4)
        )
        assert q == 2 * reduced_norm(x)
