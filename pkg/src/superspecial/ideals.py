"""Right ideals of a maximal quaternion order: classes, norms, unit groups.

This is the rank-one layer: ideal classes of the maximal order realize the
principally polarized classes in dimension one, and the classical Brandt
matrix counts elements of the colon lattices I_i I_j^{-1} by reduced norm.

Class representatives are found by a breadth-first walk over index-ell^2
neighbors; completeness is certified by the Eichler mass formula
sum_j 1/e_j = (p-1)/24.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .lattice import GramForm, rref_mod, short_vectors
from .quat import (
    ConstructionError,
    MaximalOrder,
    Quaternion,
    hnf_rational,
    order_for_prime,
    _solve4,
)

__all__ = [
    "RightIdeal",
    "unit_ideal",
    "ideal_product",
    "ideal_inverse",
    "ideal_classes",
    "eichler_mass",
]


class RightIdeal:
    """A lattice I in the algebra with I * O = I, basis in HNF.

    ``norm`` is the positive rational generating the fractional ideal of
    norms; for these locally principal lattices it equals sqrt([O : I]),
    which is how it is computed (with an exactness assertion).
    """

    def __init__(self, order: MaximalOrder, rows: Sequence[Sequence[Fraction]],
                 check: bool = True):
        self.order = order
        basis_rows = hnf_rational(rows)
        if len(basis_rows) != 4:
            raise ValueError("ideal basis must have rank 4")
        self.basis_matrix = tuple(tuple(r) for r in basis_rows)
        self.basis = tuple(
            Quaternion(order.algebra, tuple(r)) for r in basis_rows
        )
        self.norm = self._norm_from_index()
        if check:
            self._check_right_stability()
        self._gram_form: GramForm | None = None
        self._left_order: MaximalOrder | None = None

    def _norm_from_index(self) -> Fraction:
        rows = [list(self.order.coords(b)) for b in self.basis]
        det = _det4_frac(rows)
        det = abs(det)
        if det == 0:
            raise ValueError("degenerate ideal basis")
        num, den = det.numerator, det.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            raise ConstructionError("ideal index is not a perfect square")
        return Fraction(rn, rd)

    def _check_right_stability(self) -> None:
        for b in self.basis:
            for e in self.order.basis:
                if not _in_lattice(self.basis_matrix, b * e):
                    raise ValueError("lattice is not stable under right multiplication")

    def coords(self, x: Quaternion) -> tuple[Fraction, ...]:
        sol = _solve4([list(r) for r in self.basis_matrix], x.coeffs)
        if sol is None:
            raise ValueError("coordinate solve failed")
        return tuple(sol)

    def contains(self, x: Quaternion) -> bool:
        return all(c.denominator == 1 for c in self.coords(x))

    def norm_form(self) -> GramForm:
        """Q(x) = Nm(x)/Nm(I) on the ideal lattice; integral, det p^2."""
        if self._gram_form is None:
            doubled = [
                [
                    (x * y.conjugate()).reduced_trace() / self.norm
                    for y in self.basis
                ]
                for x in self.basis
            ]
            for row in doubled:
                for v in row:
                    if v.denominator != 1:
                        raise ConstructionError("norm form is not integral")
            self._gram_form = GramForm.from_doubled(
                [[int(v) for v in row] for row in doubled]
            )
        return self._gram_form

    def left_order(self) -> MaximalOrder:
        """The maximal order {x : x*I <= I}, computed as I * I^{-1}."""
        if self._left_order is None:
            prod = ideal_product_rows(self, ideal_inverse(self))
            self._left_order = MaximalOrder(self.order.algebra, prod)
        return self._left_order

    def unit_count(self) -> int:
        """Number of units of the left order (the weight e of this class)."""
        om = self.left_order()
        return len(short_vectors(GramForm.from_doubled(om.gram), 1))

    def scaled(self, c: Fraction) -> "RightIdeal":
        c = Fraction(c)
        rows = [[c * v for v in row] for row in self.basis_matrix]
        return RightIdeal(self.order, rows, check=False)

    def key(self) -> bytes:
        return repr(self.basis_matrix).encode()

    def to_rows(self) -> list[list[str]]:
        return [[_fstr(v) for v in row] for row in self.basis_matrix]

    @classmethod
    def from_rows(cls, order: MaximalOrder, rows) -> "RightIdeal":
        return cls(order, [[Fraction(v) for v in row] for row in rows])

    def __repr__(self) -> str:
        return f"RightIdeal(norm={self.norm})"


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _det4_frac(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    det = Fraction(0)
    for c in range(n):
        if rows[0][c] == 0:
            continue
        minor = [[rows[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        det += (-1) ** c * rows[0][c] * _det4_frac(minor)
    return det


def _in_lattice(basis_matrix, x: Quaternion) -> bool:
    sol = _solve4([list(r) for r in basis_matrix], x.coeffs)
    return sol is not None and all(c.denominator == 1 for c in sol)


def unit_ideal(order: MaximalOrder) -> RightIdeal:
    return RightIdeal(order, [list(r) for r in order.basis_matrix], check=False)


def ideal_product_rows(left: RightIdeal, right: RightIdeal) -> list[list[Fraction]]:
    rows = []
    for x in left.basis:
        for y in right.basis:
            rows.append(list((x * y).coeffs))
    return hnf_rational(rows)


def ideal_product(left: RightIdeal, right: RightIdeal) -> RightIdeal:
    """Lattice generated by pairwise products (a compatible ideal product)."""
    return RightIdeal(left.order, ideal_product_rows(left, right), check=False)


def ideal_conjugate(ideal: RightIdeal) -> RightIdeal:
    rows = [list(b.conjugate().coeffs) for b in ideal.basis]
    return RightIdeal(ideal.order, rows, check=False)


def ideal_inverse(ideal: RightIdeal) -> RightIdeal:
    """I^{-1} = conj(I)/Nm(I); satisfies I * I^{-1} = left order of I."""
    conj = ideal_conjugate(ideal)
    return conj.scaled(Fraction(1) / ideal.norm)


def colon_lattice(left: RightIdeal, right: RightIdeal) -> RightIdeal:
    """I_i I_j^{-1} = {x : x * I_j <= I_i}, the isogeny lattice."""
    return ideal_product(left, ideal_inverse(right))


def is_principal(ideal: RightIdeal) -> Quaternion | None:
    """A generator x with I = x*O, or None.

    Nm on I is bounded below by Nm(I), attained exactly on generators, so
    principality reduces to a short-vector search at the minimum.
    """
    vecs = short_vectors(ideal.norm_form(), 1)
    if not vecs:
        return None
    cs = vecs[0]
    gen = ideal.order.algebra.quaternion(0)
    for c, b in zip(cs, ideal.basis):
        if c:
            gen = gen + b.scale(c)
    return gen


def equivalent_ideals(a: RightIdeal, b: RightIdeal) -> Quaternion | None:
    """Witness x with a = x*b, or None if the classes differ."""
    return is_principal(colon_lattice(a, b))


def neighbors(ideal: RightIdeal, ell: int) -> list[RightIdeal]:
    """The ell+1 right sub-ideals J with I > J > ell*I and [I : J] = ell^2.

    These are the index-ell^2 kernels: the rank-one right submodules of
    I/ell*I over O/ell*O (a 2x2 matrix algebra since ell does not divide
    the discriminant).
    """
    p = ideal.order.algebra.discriminant
    if ell == p:
        raise ValueError("neighbor prime must differ from the discriminant")
    right_mats = []
    for e in ideal.order.basis:
        mat = []
        for b in ideal.basis:
            cs = ideal.coords(b * e)
            if any(c.denominator != 1 for c in cs):
                raise ConstructionError("right multiplication left the lattice")
            mat.append([int(c) % ell for c in cs])
        right_mats.append(mat)

    seen: dict[bytes, list[list[int]]] = {}
    for v in _projective_points(ell):
        span = _module_span([list(v)], right_mats, ell)
        if len(span) != 2:
            continue
        key = repr(span).encode()
        seen.setdefault(key, span)
    if len(seen) != ell + 1:
        raise ConstructionError(
            f"expected {ell + 1} neighbors, found {len(seen)}"
        )
    out = []
    for key in sorted(seen):
        span = seen[key]
        rows = [[ell * v for v in row] for row in ideal.basis_matrix]
        for coeffs in span:
            lifted = [Fraction(0)] * 4
            for c, brow in zip(coeffs, ideal.basis_matrix):
                for t in range(4):
                    lifted[t] += c * brow[t]
            rows.append(lifted)
        nbr = RightIdeal(ideal.order, rows, check=False)
        if nbr.norm != ell * ideal.norm:
            raise ConstructionError("neighbor has wrong norm")
        out.append(nbr)
    return out


def _projective_points(ell: int):
    """Representatives of P^3(F_ell): first nonzero coordinate is 1."""
    for lead in range(4):
        head = [0] * lead + [1]
        tail_len = 3 - lead
        counters = [0] * tail_len
        while True:
            yield tuple(head + counters)
            t = tail_len - 1
            while t >= 0:
                counters[t] += 1
                if counters[t] < ell:
                    break
                counters[t] = 0
                t -= 1
            else:
                break
            if tail_len == 0:
                break


def _module_span(gens: list[list[int]], right_mats, ell: int) -> tuple:
    """Row-reduced basis of the right submodule of F_ell^4 generated by gens."""
    basis = rref_mod(gens, ell)
    while True:
        new_rows = [list(r) for r in basis]
        for r in basis:
            for mat in right_mats:
                new_rows.append(
                    [sum(r[s] * mat[s][t] for s in range(4)) % ell for t in range(4)]
                )
        new_basis = rref_mod(new_rows, ell)
        if new_basis == basis:
            return basis
        basis = new_basis


def eichler_mass(p: int) -> Fraction:
    """The exact mass (p-1)/24 of the rank-one class set."""
    return Fraction(p - 1, 24)


@lru_cache(maxsize=None)
def ideal_classes(p: int, ell: int | None = None) -> tuple[RightIdeal, ...]:
    """Representatives of the right ideal classes of the maximal order in H_p.

    Walks the ell-neighbor graph from the unit ideal; the Eichler mass
    equality certifies that no class was missed (the neighbor graph is
    connected, so a shortfall would be visible in the mass).
    """
    order = order_for_prime(p)
    if ell is None:
        ell = 2 if p != 2 else 3
    if ell == p:
        raise ValueError("auxiliary prime must differ from p")
    reps: list[RightIdeal] = [unit_ideal(order)]
    frontier = [reps[0]]
    while frontier:
        current = frontier.pop(0)
        for nbr in neighbors(current, ell):
            if any(equivalent_ideals(nbr, r) is not None for r in reps):
                continue
            reps.append(nbr)
            frontier.append(nbr)
    mass = sum(Fraction(1, r.unit_count()) for r in reps)
    if mass != eichler_mass(p):
        raise ConstructionError(
            f"class walk incomplete: mass {mass} != {eichler_mass(p)}"
        )
    return tuple(reps)
