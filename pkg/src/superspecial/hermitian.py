"""Quaternionic hermitian forms over a maximal order and their class sets.

A form is a g x g matrix H over the order with H equal to its conjugate
transpose, positive definite and integral.  The reduced norm of a matrix
is computed exactly through the 2g x 2g representation over the quadratic
subfield Q(sqrt(a)); its square root on hermitian forms (the classical
Hauptnorm) is the degree-g invariant that singles out the principally
polarized classes (value 1).

``class_set`` enumerates the classes by walking neighbors at an auxiliary
prime; completeness is certified by constant row sums of the induced
isogeny counts (the neighbor graph is connected) and, in ranks where the
exact mass is known, by the mass formula.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterator, Sequence

import numpy as np

from .ideals import RightIdeal, eichler_mass, ideal_classes
from .lattice import CrossConstraints, GramForm, search_columns
from .quat import (
    ConstructionError,
    MaximalOrder,
    Quaternion,
    order_for_prime,
)

__all__ = [
    "QuatMatrix",
    "HermitianForm",
    "PolarizedClass",
    "PolarizedClassSet",
    "dagger",
    "reduced_norm_mat",
    "haupt_norm",
    "quat_matrix_inverse",
    "act",
    "solve_congruence",
    "congruence_count",
    "is_equivalent",
    "automorphism_group",
    "automorphism_count",
    "class_set",
    "genus_mass",
]


# ---------------------------------------------------------------------------
# matrices over the quaternion algebra
# ---------------------------------------------------------------------------


class QuatMatrix:
    """Immutable g x g matrix with quaternion entries."""

    __slots__ = ("entries", "g", "algebra")

    def __init__(self, entries: Sequence[Sequence[Quaternion]]):
        rows = tuple(tuple(r) for r in entries)
        g = len(rows)
        if any(len(r) != g for r in rows):
            raise ValueError("matrix must be square")
        self.entries = rows
        self.g = g
        self.algebra = rows[0][0].algebra

    def __getitem__(self, idx):
        return self.entries[idx]

    def __mul__(self, other: "QuatMatrix") -> "QuatMatrix":
        g = self.g
        zero = self.algebra.quaternion(0)
        out = []
        for r in range(g):
            row = []
            for c in range(g):
                acc = zero
                for t in range(g):
                    acc = acc + self.entries[r][t] * other.entries[t][c]
                row.append(acc)
            out.append(row)
        return QuatMatrix(out)

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix([[-x for x in row] for row in self.entries])

    def __eq__(self, other) -> bool:
        return isinstance(other, QuatMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def scale(self, c) -> "QuatMatrix":
        return QuatMatrix([[x.scale(c) for x in row] for row in self.entries])

    def dagger(self) -> "QuatMatrix":
        g = self.g
        return QuatMatrix(
            [[self.entries[c][r].conjugate() for c in range(g)] for r in range(g)]
        )

    def is_integral(self, order: MaximalOrder) -> bool:
        return all(order.contains(x) for row in self.entries for x in row)

    @staticmethod
    def identity(algebra, g: int) -> "QuatMatrix":
        one, zero = algebra.one, algebra.quaternion(0)
        return QuatMatrix(
            [[one if r == c else zero for c in range(g)] for r in range(g)]
        )

    @staticmethod
    def diagonal(algebra, diag: Sequence[Quaternion]) -> "QuatMatrix":
        zero = algebra.quaternion(0)
        g = len(diag)
        return QuatMatrix(
            [[diag[r] if r == c else zero for c in range(g)] for r in range(g)]
        )

    def key(self) -> bytes:
        alg = self.algebra
        return repr((
            (alg.a, alg.b, alg.discriminant),
            tuple(tuple(x.coeffs for x in row) for row in self.entries),
        )).encode()

    def __repr__(self) -> str:
        body = "; ".join(
            ", ".join(repr(x) for x in row) for row in self.entries
        )
        return f"QuatMatrix[{body}]"


def dagger(mat: QuatMatrix) -> QuatMatrix:
    """Conjugate transpose; an anti-involution of the matrix algebra."""
    return mat.dagger()


# ---------------------------------------------------------------------------
# reduced norm via the split quadratic subfield
# ---------------------------------------------------------------------------


def _split_matrix(mat: QuatMatrix):
    """Image of the matrix in Mat_{2g}(K), K = Q(sqrt(a)), entries (u, v) pairs.

    x0 + x1 i + x2 j + x3 k maps to [[alpha, beta], [b*conj(beta), conj(alpha)]]
    with alpha = x0 + x1 sqrt(a), beta = x2 + x3 sqrt(a).
    """
    g = mat.g
    b = mat.algebra.b
    big = [[None] * (2 * g) for _ in range(2 * g)]
    for r in range(g):
        for c in range(g):
            x0, x1, x2, x3 = mat.entries[r][c].coeffs
            big[2 * r][2 * c] = (x0, x1)
            big[2 * r][2 * c + 1] = (x2, x3)
            big[2 * r + 1][2 * c] = (b * x2, -b * x3)
            big[2 * r + 1][2 * c + 1] = (x0, -x1)
    return big


def reduced_norm_mat(mat: QuatMatrix) -> Fraction:
    """Exact reduced norm: determinant of the split 2g x 2g representation.

    Multiplicative of degree 2g; coincides with the quaternion reduced norm
    when g = 1.
    """
    a = mat.algebra.a
    big = _split_matrix(mat)
    n = len(big)

    def kmul(x, y):
        return (x[0] * y[0] + a * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def ksub(x, y):
        return (x[0] - y[0], x[1] - y[1])

    def kinv(x):
        d = x[0] * x[0] - a * x[1] * x[1]
        return (x[0] / d, -x[1] / d)

    det = (Fraction(1), Fraction(0))
    rows = [row[:] for row in big]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if rows[r][col] != (0, 0)), None
        )
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = (-det[0], -det[1])
        pivot = rows[col][col]
        det = kmul(det, pivot)
        inv = kinv(pivot)
        for r in range(col + 1, n):
            if rows[r][col] == (0, 0):
                continue
            f = kmul(rows[r][col], inv)
            rows[r] = [
                ksub(x, kmul(f, y)) for x, y in zip(rows[r], rows[col])
            ]
    if det[1] != 0:
        raise ConstructionError("reduced norm did not land in Q")
    return det[0]


# ---------------------------------------------------------------------------
# hermitian forms
# ---------------------------------------------------------------------------


class HermitianForm:
    """Positive definite hermitian g x g matrix over a maximal order."""

    __slots__ = (
        "order", "mat", "g", "is_integral",
        "_doubled_gram", "_gram_form", "_tensor", "_hnm",
        "_aut_group", "_theta", "_key",
    )

    def __init__(self, order: MaximalOrder, mat: QuatMatrix,
                 require_integral: bool = True):
        if mat.algebra != order.algebra:
            raise ValueError("matrix and order live in different algebras")
        if mat.dagger() != mat:
            raise ValueError("matrix is not hermitian")
        self.order = order
        self.mat = mat
        self.g = mat.g
        self.is_integral = mat.is_integral(order)
        if require_integral and not self.is_integral:
            raise ValueError("form is not integral over the order")
        if self.is_integral:
            for t in range(self.g):
                d = mat[t][t]
                if any(c != 0 for c in d.coeffs[1:]):
                    raise ValueError("hermitian diagonal must be scalar")
                if d.coeffs[0].denominator != 1 or d.coeffs[0] < 1:
                    raise ValueError("integral diagonal entries must be >= 1")
        self._doubled_gram = None
        self._gram_form = None
        self._tensor = None
        self._hnm = None
        self._aut_group = None
        self._theta = None
        self._key = None

    # -- identity-like constructors ------------------------------------------

    @classmethod
    def identity(cls, order: MaximalOrder, g: int) -> "HermitianForm":
        return cls(order, QuatMatrix.identity(order.algebra, g))

    # -- invariants -----------------------------------------------------------

    def tensor(self) -> np.ndarray:
        """W[u, v, :] = order coordinates of eps_u^dagger H eps_v (int64).

        Index u = 4*s + r addresses order basis element r in vector slot s;
        the bilinear values x^T W y give the order coordinates of
        x^dagger H y for integer coordinate vectors.
        """
        if self._tensor is None:
            g, order = self.g, self.order
            m = 4 * g
            W = np.zeros((m, m, 4), dtype=np.int64)
            basis = order.basis
            conj = [e.conjugate() for e in basis]
            for su in range(g):
                for ru in range(4):
                    u = 4 * su + ru
                    for sv in range(g):
                        h = self.mat[su][sv]
                        if h.is_zero():
                            continue
                        left = conj[ru] * h
                        for rv in range(4):
                            cs = order.coords(left * basis[rv])
                            for t in range(4):
                                if cs[t].denominator != 1:
                                    raise ConstructionError(
                                        "tensor coordinate not integral"
                                    )
                                W[u, v_idx(sv, rv), t] = int(cs[t])
            self._tensor = W
        return self._tensor

    def doubled_gram(self) -> tuple:
        """Trace-form Gram: G[u][v] = Trd(eps_u^dagger H eps_v), integral."""
        if self._doubled_gram is None:
            W = self.tensor()
            trd = np.array(
                [int(e.reduced_trace()) for e in self.order.basis], dtype=np.int64
            )
            G = W @ trd
            if not np.array_equal(G, G.T):
                raise ConstructionError("trace Gram is not symmetric")
            self._doubled_gram = tuple(tuple(int(x) for x in row) for row in G)
        return self._doubled_gram

    def gram_form(self) -> GramForm:
        """The 4g-dimensional quadratic form x -> x^dagger H x (exact)."""
        if self._gram_form is None:
            self._gram_form = GramForm.from_doubled(self.doubled_gram())
        return self._gram_form

    def diag(self) -> tuple[int, ...]:
        return tuple(int(self.mat[t][t].coeffs[0]) for t in range(self.g))

    def haupt_norm(self) -> Fraction:
        """Positive square root of the reduced norm (exact).

        For g <= 2 the value is cross-checked against the explicit
        quaternionic determinant h11*h22 - Nm(h12).
        """
        if self._hnm is None:
            nrd = reduced_norm_mat(self.mat)
            num, den = nrd.numerator, nrd.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn != num or rd * rd != den:
                raise ConstructionError("reduced norm of hermitian form not a square")
            val = Fraction(rn, rd)
            if self.g == 1:
                direct = self.mat[0][0].coeffs[0]
                if direct != val:
                    raise ConstructionError("rank-1 norm cross-check failed")
            elif self.g == 2:
                moore = (
                    self.mat[0][0].coeffs[0] * self.mat[1][1].coeffs[0]
                    - self.mat[0][1].reduced_norm()
                )
                if moore != val:
                    raise ConstructionError("rank-2 Moore determinant cross-check failed")
            self._hnm = val
        return self._hnm

    def theta_prefix(self, depth: int = 3) -> tuple[int, ...]:
        """Short-vector counts at 1..depth; cheap equivalence invariant."""
        if self._theta is None:
            from .lattice import short_vectors
            q = self.gram_form()
            self._theta = tuple(len(short_vectors(q, v)) for v in range(1, depth + 1))
        return self._theta

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.mat.key()
        return self._key

    def column_quaternions(self, coords: np.ndarray) -> list[Quaternion]:
        """Decode a length-4g coordinate vector into a quaternion column."""
        return [
            self.order.from_coords([int(c) for c in coords[4 * s: 4 * s + 4]])
            for s in range(self.g)
        ]

    def to_coord_lists(self) -> list:
        return [
            [[_fstr(c) for c in x.coeffs] for x in row]
            for row in self.mat.entries
        ]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HermitianForm)
            and self.order is other.order
            and self.mat == other.mat
        )

    def __hash__(self) -> int:
        return hash(self.mat)

    def __repr__(self) -> str:
        return f"HermitianForm(g={self.g}, diag={self.diag()})"


def v_idx(slot: int, basis_index: int) -> int:
    return 4 * slot + basis_index


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def quat_matrix_inverse(mat: QuatMatrix) -> QuatMatrix:
    """Exact inverse, computed in the split representation over Q(sqrt(a))."""
    a, b = mat.algebra.a, mat.algebra.b
    big = _split_matrix(mat)
    n = len(big)

    def kmul(x, y):
        return (x[0] * y[0] + a * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def kinv(x):
        d = x[0] * x[0] - a * x[1] * x[1]
        return (x[0] / d, -x[1] / d)

    aug = [row[:] + [((1, 0) if r == c else (0, 0)) for c in range(n)]
           for r, row in enumerate(big)]
    aug = [[(Fraction(u), Fraction(v)) for (u, v) in row] for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != (0, 0)), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = kinv(aug[col][col])
        aug[col] = [kmul(inv, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != (0, 0):
                f = aug[r][col]
                aug[r] = [
                    (x[0] - kmul(f, y)[0], x[1] - kmul(f, y)[1])
                    for x, y in zip(aug[r], aug[col])
                ]
    g = mat.g
    alg = mat.algebra
    entries = []
    for r in range(g):
        row = []
        for c in range(g):
            alpha = aug[2 * r][n + 2 * c]
            beta = aug[2 * r][n + 2 * c + 1]
            alpha_c = aug[2 * r + 1][n + 2 * c + 1]
            beta_c = aug[2 * r + 1][n + 2 * c]
            if alpha_c != (alpha[0], -alpha[1]) or beta_c != (b * beta[0], -b * beta[1]):
                raise ConstructionError("inverse left the quaternion algebra")
            row.append(alg.quaternion(alpha[0], alpha[1], beta[0], beta[1]))
        entries.append(row)
    return QuatMatrix(entries)


def haupt_norm(form: HermitianForm) -> Fraction:
    return form.haupt_norm()


def act(form: HermitianForm, mat: QuatMatrix) -> HermitianForm:
    """Right action H . M = M^dagger H M.

    Transports the norm: HNm(H.M) = Nrd(M) * HNm(H).
    """
    moved = mat.dagger() * form.mat * mat
    return HermitianForm(form.order, moved, require_integral=False)


# ---------------------------------------------------------------------------
# congruence solving M^dagger H1 M = n H2
# ---------------------------------------------------------------------------


def _congruence_problem(h1: HermitianForm, h2: HermitianForm, n: int):
    g, order = h1.g, h1.order
    values = [n * d for d in h2.diag()]
    targets = {}
    for j in range(g):
        for k in range(j + 1, g):
            cs = order.coords(h2.mat[j][k].scale(n))
            if any(c.denominator != 1 for c in cs):
                raise ValueError("scaled target entry is not integral")
            targets[(j, k)] = tuple(int(c) for c in cs)
    cross = CrossConstraints(h1.tensor(), targets=targets) if g > 1 else None
    forms = [h1.gram_form()] * g
    return forms, values, cross


def congruence_blocks(
    h1: HermitianForm, h2: HermitianForm, n: int,
    candidate_pool: dict | None = None, limit: int | None = None,
) -> Iterator[np.ndarray]:
    """Stream solution blocks (N, g, 4g) of M^dagger H1 M = n H2.

    Solutions are coordinate arrays: row j of a solution holds the order
    coordinates of column j of M.
    """
    if h1.g != h2.g:
        raise ValueError("forms of different rank")
    forms, values, cross = _congruence_problem(h1, h2, n)
    pool = _SHARED_POOL if candidate_pool is None else candidate_pool
    yield from search_columns(forms, values, cross,
                              candidate_pool=pool, limit=limit)


_COUNT_CACHE: dict[tuple, int] = {}
_SHARED_POOL: dict[tuple, np.ndarray] = {}


def congruence_count(h1: HermitianForm, h2: HermitianForm, n: int,
                     candidate_pool: dict | None = None) -> int:
    """|{M in Mat_g(O) : M^dagger H1 M = n H2}| (exact, cached)."""
    key = (h1.key(), h2.key(), n)
    if key not in _COUNT_CACHE:
        pool = _SHARED_POOL if candidate_pool is None else candidate_pool
        total = 0
        for block in congruence_blocks(h1, h2, n, candidate_pool=pool):
            total += len(block)
        _COUNT_CACHE[key] = total
    return _COUNT_CACHE[key]


def coords_to_matrix(h: HermitianForm, sol: np.ndarray) -> QuatMatrix:
    """Decode one solution (g, 4g) into the quaternion matrix M."""
    g = h.g
    cols = [h.column_quaternions(sol[j]) for j in range(g)]
    return QuatMatrix([[cols[c][r] for c in range(g)] for r in range(g)])


def solve_congruence(h1: HermitianForm, h2: HermitianForm, n: int,
                     limit: int | None = None) -> list[QuatMatrix]:
    """Complete duplicate-free list of integral M with M^dagger H1 M = n H2."""
    out = []
    for block in congruence_blocks(h1, h2, n, limit=limit):
        for sol in block:
            out.append(coords_to_matrix(h1, sol))
    return out


def automorphism_group(h: HermitianForm) -> list[QuatMatrix]:
    """All U with U^dagger H U = H (the isometry group, order e)."""
    if h._aut_group is None:
        h._aut_group = solve_congruence(h, h, 1)
        if len(h._aut_group) % 2 != 0:
            raise ConstructionError("automorphism count must be even (+-Id)")
    return h._aut_group


def automorphism_count(h: HermitianForm) -> int:
    return len(automorphism_group(h))


def is_equivalent(h1: HermitianForm, h2: HermitianForm) -> QuatMatrix | None:
    """A witness M with M^dagger H1 M = H2, or None.

    Forms of unequal norm are definitely inequivalent.  Any witness between
    forms of equal norm has Nrd(M) = 1 (asserted), so isometry equivalence
    and the norm-one quotient coincide.
    """
    if h1.g != h2.g:
        return None
    if h1.haupt_norm() != h2.haupt_norm():
        return None
    if h1.theta_prefix() != h2.theta_prefix():
        return None
    sols = solve_congruence(h1, h2, 1, limit=1)
    if not sols:
        return None
    witness = sols[0]
    if reduced_norm_mat(witness) != 1:
        raise ConstructionError("equivalence witness has reduced norm != 1")
    return witness


# ---------------------------------------------------------------------------
# class sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarizedClass:
    """One class: a norm-one representative with its automorphism count."""

    e: int
    gram: tuple
    form: HermitianForm | None = field(compare=False, default=None)
    ideal: RightIdeal | None = field(compare=False, default=None)

    def sort_key(self) -> tuple:
        payload = self.form.key() if self.form is not None else self.ideal.key()
        return (self.e, self.gram, payload)


@dataclass(frozen=True)
class PolarizedClassSet:
    """Ordered, pairwise inequivalent class representatives for (p, g)."""

    p: int
    g: int
    classes: tuple[PolarizedClass, ...]
    discovery_ell: int

    @property
    def h(self) -> int:
        return len(self.classes)

    @property
    def e_values(self) -> tuple[int, ...]:
        return tuple(c.e for c in self.classes)

    def mass(self) -> Fraction:
        return sum((Fraction(1, c.e) for c in self.classes), Fraction(0))

    def fingerprint(self) -> str:
        import hashlib
        blob = b"|".join(
            (c.form.key() if c.form is not None else c.ideal.key())
            for c in self.classes
        )
        return hashlib.sha256(
            f"{self.p}:{self.g}:".encode() + blob
        ).hexdigest()[:16]


def genus_mass(p: int, g: int) -> Fraction | None:
    """Exact mass of the principally polarized genus for g <= 3.

    The g-th factor pattern is |zeta(1-2k)|/2 * (p^k + (-1)^k); beyond
    g = 3 the constant is not wired in and None is returned.
    """
    zeta_half = {1: Fraction(1, 24), 2: Fraction(1, 240), 3: Fraction(1, 504)}
    if g not in (1, 2, 3):
        return None
    mass = Fraction(1)
    for k in range(1, g + 1):
        mass *= zeta_half[k] * (p**k + (-1) ** k)
    return mass


def _row_target(g: int, ell: int) -> int:
    out = 1
    for k in range(1, g + 1):
        out *= ell**k + 1
    return out


_NORM_ELEMENTS: dict[tuple, list[Quaternion]] = {}


def _order_elements_of_norm(order: MaximalOrder, value: int) -> list[Quaternion]:
    """All x in the order with Nm(x) = value (cached)."""
    key = (id(order), value)
    if key not in _NORM_ELEMENTS:
        from .lattice import short_vectors

        q = GramForm.from_doubled(order.gram)
        out = [order.from_coords(v) for v in short_vectors(q, value)]
        _NORM_ELEMENTS[key] = out
    return _NORM_ELEMENTS[key]


def _candidate_forms(order: MaximalOrder, g: int, bound: int) -> list[HermitianForm]:
    """All integral norm-one forms with nondecreasing diagonal <= bound.

    Off-diagonal entries x_jk range over order elements with
    Nm(x_jk) <= d_j d_k - 1 (forced by positivity of the 2x2 minors); the
    exact norm-one condition is then checked through the reduced norm.
    Every class has such a representative once the bound is large enough,
    because permuting coordinates is a norm-one change of basis.
    """
    out = []
    pairs = [(j, k) for j in range(g) for k in range(j + 1, g)]
    for diag in combinations_with_replacement(range(1, bound + 1), g):
        pools = []
        for (j, k) in pairs:
            cap = diag[j] * diag[k] - 1
            elems: list[Quaternion] = []
            for v in range(cap + 1):
                elems.extend(_order_elements_of_norm(order, v))
            pools.append(elems)
        zero = order.algebra.quaternion(0)
        for combo in product(*pools) if pairs else [()]:
            entries = [
                [zero for _ in range(g)] for _ in range(g)
            ]
            for t in range(g):
                entries[t][t] = order.algebra.quaternion(diag[t])
            ok = True
            for (j, k), x in zip(pairs, combo):
                entries[j][k] = x
                entries[k][j] = x.conjugate()
            mat = QuatMatrix(entries)
            if reduced_norm_mat(mat) != 1:
                continue
            try:
                form = HermitianForm(order, mat)
                form.gram_form()  # positive definiteness certificate
            except ValueError:
                continue
            out.append(form)
    return out


def _group_into_classes(forms: list[HermitianForm]) -> list[HermitianForm]:
    """First representative of each equivalence class, discovery order."""
    reps: list[HermitianForm] = []
    for cand in forms:
        if any(is_equivalent(cand, r) is not None for r in reps):
            continue
        reps.append(cand)
    return reps


def _certified_reps(
    order: MaximalOrder, g: int, ell: int
) -> list[HermitianForm]:
    """Escalate the diagonal bound until the row-sum certificate holds.

    For the true class set, the isogeny counts at ell sum over each row to
    prod(ell^k + 1); the class graph is connected, so a missing class makes
    some computed row fall short, which triggers a larger search bound.
    """
    target = _row_target(g, ell)
    bound = 2
    while bound <= 16:
        reps = _group_into_classes(_candidate_forms(order, g, bound))
        ok = True
        for hi in reps:
            row = Fraction(0)
            for hj in reps:
                cnt = congruence_count(hi, hj, ell)
                e_j = automorphism_count(hj)
                if cnt % e_j != 0:
                    raise ConstructionError(
                        "solution count not divisible by automorphism count"
                    )
                row += Fraction(cnt, e_j)
            if row != target:
                ok = False
                break
        if ok:
            return reps
        bound += 1
    raise ConstructionError("diagonal bound escalation failed")


@lru_cache(maxsize=None)
def class_set(p: int, g: int, ell: int | None = None) -> PolarizedClassSet:
    """Class representatives of the principally polarized forms for (p, g).

    g = 1 delegates to the ideal-class walk (the rank-one classes are the
    right ideal classes); g > 1 walks hermitian neighbors at the auxiliary
    prime.  The result does not depend on the auxiliary prime (tested), and
    classes are ordered by (e, serialized trace Gram).
    """
    from .quat import is_prime

    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if g < 1:
        raise ValueError("g must be >= 1")
    if ell is None:
        ell = 2 if p != 2 else 3
    if not is_prime(ell) or ell == p:
        raise ValueError("auxiliary prime must be a prime different from p")

    if g == 1:
        reps = ideal_classes(p, ell)
        classes = []
        for ideal in reps:
            q = ideal.norm_form()
            doubled = tuple(
                tuple(int(2 * x) for x in row) for row in q.matrix
            )
            classes.append(
                PolarizedClass(e=ideal.unit_count(), gram=doubled, ideal=ideal)
            )
        classes.sort(key=PolarizedClass.sort_key)
        result = PolarizedClassSet(p, 1, tuple(classes), ell)
        if result.mass() != eichler_mass(p):
            raise ConstructionError("rank-one mass check failed")
        return result

    order = order_for_prime(p)
    reps = _certified_reps(order, g, ell)
    classes = []
    for h in reps:
        classes.append(
            PolarizedClass(
                e=automorphism_count(h), gram=h.doubled_gram(), form=h
            )
        )
    classes.sort(key=PolarizedClass.sort_key)
    result = PolarizedClassSet(p, g, tuple(classes), ell)
    expected = genus_mass(p, g)
    if expected is not None:
        if g <= 2:
            if result.mass() != expected:
                raise ConstructionError(
                    f"mass check failed: {result.mass()} != {expected}"
                )
        elif result.mass() != expected:
            warnings.warn(
                f"rank-{g} mass {result.mass()} differs from the product "
                f"formula {expected}; completeness rests on the row-sum "
                "certificate",
                stacklevel=2,
            )
    return result
