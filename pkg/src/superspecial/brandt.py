"""Brandt matrices of the maximal order in H_p, in two formulations.

Entry (i, j) of B_g(n) counts the degree-n^(2g) polarized isogenies from
class i to class j, normalized by the automorphism count e_j:

* for any rank, |{M integral : M^dagger H_i M = n H_j}| / e_j;
* for rank one, the classical count of elements of the colon lattice
  I_i I_j^{-1} of norm n * Nm(I_i I_j^{-1}), divided by the unit count of
  the left order of I_j.

Row sums at a prime ell != p equal prod_{k<=g}(ell^k + 1), and
diag(e)^{-1} B is symmetric; both identities are exposed as checks here
and asserted by the test suite.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .hermitian import (
    PolarizedClassSet,
    automorphism_count,
    class_set,
    congruence_count,
    genus_mass,
)
from .ideals import colon_lattice, ideal_classes
from .lattice import short_vectors, short_vectors_naive
from .quat import is_prime

__all__ = [
    "BrandtMatrix",
    "BrandtIntegralityError",
    "OrientationError",
    "brandt_matrix",
    "brandt_zero",
    "brandt_g1_classical",
    "row_sum_check",
    "expected_row_sum",
    "weighted_symmetry_check",
    "matches_up_to_permutation",
]


class BrandtIntegralityError(ArithmeticError):
    """A solution count was not divisible by the automorphism count."""


class OrientationError(AssertionError):
    """A reference matrix matches only after transposition."""


@dataclass(frozen=True)
class BrandtMatrix:
    """h x h matrix of exact rationals with its defining parameters."""

    p: int
    g: int
    n: int
    entries: tuple[tuple[Fraction, ...], ...]
    e_values: tuple[int, ...]
    classes_key: str

    @property
    def h(self) -> int:
        return len(self.entries)

    def as_int_rows(self) -> list[list[int]]:
        out = []
        for row in self.entries:
            int_row = []
            for v in row:
                if v.denominator != 1:
                    raise ValueError("matrix has non-integral entries")
                int_row.append(int(v))
            out.append(int_row)
        return out

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.entries]

    def __repr__(self) -> str:
        return f"BrandtMatrix(p={self.p}, g={self.g}, n={self.n}, h={self.h})"


def expected_row_sum(g: int, ell: int) -> int:
    """prod_{k=1..g} (ell^k + 1): the number of degree-ell^(2g) kernels."""
    out = 1
    for k in range(1, g + 1):
        out *= ell**k + 1
    return out


def _fingerprint(classes: PolarizedClassSet) -> str:
    return classes.fingerprint()


def _divide_exact(count: int, e: int) -> Fraction:
    if count % e != 0:
        raise BrandtIntegralityError(
            f"count {count} not divisible by automorphism count {e}"
        )
    return Fraction(count // e)


def brandt_matrix(classes: PolarizedClassSet, n: int, jobs: int = 1) -> BrandtMatrix:
    """B_g(n) against the given ordered class set.

    For g > 1 only prime n different from p is supported (the index
    condition for composite n is out of scope); for g = 1 any n >= 1 is
    allowed, including multiples of p.  ``jobs`` dispatches the h x h entry
    grid over worker threads; the result is assembled in index order and
    does not depend on the degree of parallelism.
    """
    if n < 1:
        raise ValueError("n must be >= 1 (use brandt_zero for n = 0)")
    g, p = classes.g, classes.p
    if g > 1 and (not is_prime(n) or n == p):
        raise ValueError("for g > 1 the level must be a prime different from p")
    h = classes.h
    es = classes.e_values

    if g == 1:
        ideals = [c.ideal for c in classes.classes]

        def entry_count(i: int, j: int) -> int:
            colon = colon_lattice(ideals[i], ideals[j])
            return len(short_vectors(colon.norm_form(), n))
    else:
        forms = [c.form for c in classes.classes]

        def entry_count(i: int, j: int) -> int:
            return congruence_count(forms[i], forms[j], n)

    pairs = [(i, j) for i in range(h) for j in range(h)]
    counts: dict[tuple[int, int], int] = {}
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for (i, j), count in zip(
                pairs, pool.map(lambda ij: entry_count(*ij), pairs)
            ):
                counts[(i, j)] = count
    else:
        for i, j in pairs:
            counts[(i, j)] = entry_count(i, j)
    rows = tuple(
        tuple(_divide_exact(counts[(i, j)], es[j]) for j in range(h))
        for i in range(h)
    )
    return BrandtMatrix(
        p=p, g=g, n=n, entries=rows,
        e_values=es, classes_key=_fingerprint(classes),
    )


def brandt_zero(classes: PolarizedClassSet) -> BrandtMatrix:
    """B_g(0): column j constant 1/e_j."""
    es = classes.e_values
    row = tuple(Fraction(1, e) for e in es)
    rows = tuple(row for _ in range(classes.h))
    return BrandtMatrix(
        p=classes.p, g=classes.g, n=0, entries=rows,
        e_values=es, classes_key=_fingerprint(classes),
    )


def brandt_g1_classical(p: int, n: int, aux_ell: int | None = None) -> BrandtMatrix:
    """Classical rank-one Brandt matrix, as an independent oracle.

    Uses its own class walk (different auxiliary prime by default) and the
    naive box enumeration instead of the backtracking enumerator, so the
    two rank-one routes share no counting code.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if aux_ell is None:
        aux_ell = 3 if p not in (3,) else 5
    reps = ideal_classes(p, aux_ell)
    es = [r.unit_count() for r in reps]
    rows = []
    for left in reps:
        row = []
        for right, e in zip(reps, es):
            colon = colon_lattice(left, right)
            count = len(short_vectors_naive(colon.norm_form(), n))
            row.append(_divide_exact(count, e))
        rows.append(tuple(row))
    key = hashlib.sha256(
        b"classical|" + b"|".join(r.key() for r in reps)
    ).hexdigest()[:16]
    return BrandtMatrix(
        p=p, g=1, n=n, entries=tuple(rows), e_values=tuple(es), classes_key=key,
    )


def row_sum_check(matrix: BrandtMatrix) -> tuple[bool, dict]:
    """Row sums against prod(ell^k + 1); meaningful for prime n != p."""
    target = expected_row_sum(matrix.g, matrix.n)
    sums = matrix.row_sums()
    ok = all(s == target for s in sums)
    report = {
        "target": target,
        "row_sums": [str(s) for s in sums],
        "ok": ok,
    }
    return ok, report


def weighted_symmetry_check(matrix: BrandtMatrix) -> bool:
    """diag(e)^{-1} B symmetric: B_ij / e_i = B_ji / e_j exactly."""
    es = matrix.e_values
    h = matrix.h
    for i in range(h):
        for j in range(h):
            if matrix.entries[i][j] * es[j] != matrix.entries[j][i] * es[i]:
                return False
    return True


def matches_up_to_permutation(
    got: BrandtMatrix | list, reference: list
) -> list[int] | None:
    """A permutation sigma with got[sigma(i)][sigma(j)] == reference[i][j].

    Raises OrientationError if no permutation matches but one matches the
    transpose: that means the counting orientation is flipped, which must
    fail loudly rather than be silently repaired.
    """
    rows = got.as_int_rows() if isinstance(got, BrandtMatrix) else [
        [int(v) for v in row] for row in got
    ]
    h = len(rows)
    ref = [[int(v) for v in row] for row in reference]
    if len(ref) != h:
        return None

    def try_match(mat) -> list[int] | None:
        for perm in permutations(range(h)):
            if all(
                mat[perm[i]][perm[j]] == ref[i][j]
                for i in range(h)
                for j in range(h)
            ):
                return list(perm)
        return None

    direct = try_match(rows)
    if direct is not None:
        return direct
    transposed = try_match([[rows[j][i] for j in range(h)] for i in range(h)])
    if transposed is not None:
        raise OrientationError(
            "matrix matches the reference only after transposition"
        )
    return None


def brandt_for(p: int, g: int, n: int) -> BrandtMatrix:
    """Convenience: Brandt matrix against the canonical class set."""
    return brandt_matrix(class_set(p, g), n)


def mass_check(classes: PolarizedClassSet) -> tuple[Fraction, Fraction | None]:
    """(computed mass, exact expected mass or None if no formula)."""
    return classes.mass(), genus_mass(classes.p, classes.g)
