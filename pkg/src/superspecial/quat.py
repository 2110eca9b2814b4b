"""Exact arithmetic in definite rational quaternion algebras and their maximal orders.

A quaternion algebra (a,b / Q) has basis 1, i, j, k with i^2 = a, j^2 = b,
ij = -ji = k.  For a prime p, ``algebra_for_prime(p)`` returns the algebra
ramified exactly at p and infinity, certified by Hilbert symbols, and
``maximal_order`` produces an order whose reduced discriminant equals p,
certified by the determinant of its trace-form Gram matrix.

Everything here is exact: coefficients are ``fractions.Fraction``; no
floating point enters any computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "Quaternion",
    "QuaternionAlgebra",
    "MaximalOrder",
    "algebra_for_prime",
    "maximal_order",
    "order_for_prime",
    "reduced_norm",
    "is_prime",
    "hilbert_symbol",
    "ramified_primes",
]


class ConstructionError(ValueError):
    """A certified construction (algebra or order) failed its certificate."""


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any input used here."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:  # correct for all n < 3.3 * 10**24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def _two_adic_split(n: int) -> tuple[int, int]:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, p: int | None) -> int:
    """Hilbert symbol (a,b)_p over Q; ``p=None`` means the real place.

    a, b must be nonzero integers (multiply numerator by denominator to
    reduce a rational argument to this case).
    """
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if p is None:
        return -1 if (a < 0 and b < 0) else 1
    if p == 2:
        alpha, u = _two_adic_split(abs(a))
        beta, v = _two_adic_split(abs(b))
        u = u if a > 0 else -u
        v = v if b > 0 else -v
        eps_u, eps_v = (u - 1) // 2 % 2, (v - 1) // 2 % 2
        om_u, om_v = (u * u - 1) // 8 % 2, (v * v - 1) // 8 % 2
        ex = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if ex % 2 else 1
    alpha, beta = 0, 0
    while a % p == 0:
        a //= p
        alpha += 1
    while b % p == 0:
        b //= p
        beta += 1
    ex = alpha * beta * ((p - 1) // 2)
    sym = -1 if ex % 2 else 1
    if beta % 2:
        sym *= legendre(a, p)
    if alpha % 2:
        sym *= legendre(b, p)
    return sym


def ramified_primes(a: int, b: int) -> set[int]:
    """Finite primes where the quaternion algebra (a,b / Q) ramifies."""
    candidates = {2}
    candidates.update(factorize(abs(a)))
    candidates.update(factorize(abs(b)))
    return {q for q in candidates if hilbert_symbol(a, b, q) == -1}


# ---------------------------------------------------------------------------
# quaternion algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The rational quaternion algebra with i^2 = a, j^2 = b, ij = -ji."""

    a: Rational
    b: Rational
    discriminant: int

    def quaternion(self, x0, x1=0, x2=0, x3=0) -> "Quaternion":
        return Quaternion(
            self,
            (Fraction(x0), Fraction(x1), Fraction(x2), Fraction(x3)),
        )

    @property
    def one(self) -> "Quaternion":
        return self.quaternion(1)

    @property
    def gen_i(self) -> "Quaternion":
        return self.quaternion(0, 1)

    @property
    def gen_j(self) -> "Quaternion":
        return self.quaternion(0, 0, 1)

    @property
    def gen_k(self) -> "Quaternion":
        return self.quaternion(0, 0, 0, 1)

    def is_definite(self) -> bool:
        return self.a < 0 and self.b < 0

    def __repr__(self) -> str:
        return f"QuaternionAlgebra(a={self.a}, b={self.b}, disc={self.discriminant})"


@dataclass(frozen=True)
class Quaternion:
    """Element x0 + x1*i + x2*j + x3*k of a fixed quaternion algebra."""

    algebra: QuaternionAlgebra
    coeffs: tuple[Rational, Rational, Rational, Rational]

    def _check(self, other: "Quaternion") -> None:
        if self.algebra != other.algebra:
            raise ValueError("quaternions from different algebras")

    def __add__(self, other: "Quaternion") -> "Quaternion":
        self._check(other)
        x, y = self.coeffs, other.coeffs
        return Quaternion(self.algebra, tuple(u + v for u, v in zip(x, y)))

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        self._check(other)
        x, y = self.coeffs, other.coeffs
        return Quaternion(self.algebra, tuple(u - v for u, v in zip(x, y)))

    def __neg__(self) -> "Quaternion":
        return Quaternion(self.algebra, tuple(-u for u in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            self._check(other)
            a, b = self.algebra.a, self.algebra.b
            x0, x1, x2, x3 = self.coeffs
            y0, y1, y2, y3 = other.coeffs
            return Quaternion(
                self.algebra,
                (
                    x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                    x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                    x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                    x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
                ),
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Quaternion":
        c = Fraction(c)
        return Quaternion(self.algebra, tuple(c * u for u in self.coeffs))

    def conjugate(self) -> "Quaternion":
        x0, x1, x2, x3 = self.coeffs
        return Quaternion(self.algebra, (x0, -x1, -x2, -x3))

    def reduced_trace(self) -> Rational:
        return 2 * self.coeffs[0]

    def reduced_norm(self) -> Rational:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coeffs
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self) -> "Quaternion":
        n = self.reduced_norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conjugate().scale(Fraction(1, 1) / n)

    def is_zero(self) -> bool:
        return all(u == 0 for u in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        parts = []
        for c, sym in zip(self.coeffs, ("", "i", "j", "k")):
            if c == 0:
                continue
            s = str(c) if not sym else (sym if abs(c) == 1 else f"{abs(c)}*{sym}")
            if sym and c < 0:
                s = "-" + s
            parts.append(s if not parts or s.startswith("-") else "+" + s)
        return "".join(parts) if parts else "0"


def reduced_norm(x: Quaternion) -> Rational:
    """Nm(x) = x * conj(x), multiplicative and positive definite."""
    return x.reduced_norm()


# ---------------------------------------------------------------------------
# lattices in a quaternion algebra: exact 4-dim HNF utilities
# ---------------------------------------------------------------------------


def _hnf_int(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form (upper echelon, positive pivots) over Z.

    Only full-rank-or-less small inputs appear here, so a plain
    gcd-elimination is plenty fast.
    """
    mat = [row[:] for row in rows if any(row)]
    n_cols = len(rows[0]) if rows else 0
    basis: list[list[int]] = []
    col = 0
    while mat and col < n_cols:
        pivots = [r for r in mat if r[col] != 0]
        if not pivots:
            col += 1
            continue
        while True:
            pivots.sort(key=lambda r: abs(r[col]))
            head = pivots[0]
            done = True
            for r in pivots[1:]:
                q = r[col] // head[col]
                if q:
                    for t in range(n_cols):
                        r[t] -= q * head[t]
                if r[col]:
                    done = False
            pivots = [head] + [r for r in pivots[1:] if r[col] != 0]
            if done and len(pivots) == 1:
                break
        if head[col] < 0:
            head[:] = [-v for v in head]
        basis.append(head)
        mat = [r for r in mat if r is not head and any(r)]
        col += 1
    # reduce entries above each pivot
    for idx in range(len(basis) - 1, -1, -1):
        row = basis[idx]
        pcol = next(t for t in range(n_cols) if row[t] != 0)
        for above in basis[:idx]:
            q = above[pcol] // row[pcol]
            if q:
                for t in range(n_cols):
                    above[t] -= q * row[t]
    return basis


def hnf_rational(rows: Iterable[Sequence[Rational]]) -> list[list[Rational]]:
    """HNF basis of the lattice spanned by rational row vectors."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return []
    den = 1
    for r in rows:
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
    int_rows = [[int(v * den) for v in r] for r in rows]
    red = _hnf_int(int_rows)
    return [[Fraction(v, den) for v in row] for row in red]


def _solve4(mat: list[list[Rational]], vec: Sequence[Rational]) -> list[Rational] | None:
    """Solve x * mat = vec exactly; None if singular/inconsistent."""
    n = len(mat)
    aug = [[mat[r][c] for r in range(n)] for c in range(len(vec))]  # transpose
    rhs = list(vec)
    # gaussian elimination on the transposed system mat^T x^T = vec^T
    a = [row[:] + [rhs[idx]] for idx, row in enumerate(aug)]
    x = [Fraction(0)] * n
    piv_rows: list[int] = []
    r = 0
    for c in range(n):
        piv = next((t for t in range(r, len(a)) if a[t][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for t in range(len(a)):
            if t != r and a[t][c] != 0:
                f = a[t][c]
                a[t] = [u - f * v for u, v in zip(a[t], a[r])]
        piv_rows.append(c)
        r += 1
    for t in range(r, len(a)):
        if a[t][-1] != 0:
            return None
    for row_idx, c in enumerate(piv_rows):
        x[c] = a[row_idx][-1]
    return x


# ---------------------------------------------------------------------------
# maximal orders
# ---------------------------------------------------------------------------


class MaximalOrder:
    """A maximal order in a definite quaternion algebra of prime discriminant.

    The basis is stored in Hermite normal form with respect to 1, i, j, k.
    Construction certifies: 1 lies in the order, the integer multiplication
    table closes, and the trace-form Gram determinant equals disc^2.
    """

    def __init__(self, algebra: QuaternionAlgebra, basis_rows: list[list[Rational]]):
        rows = hnf_rational(basis_rows)
        if len(rows) != 4:
            raise ConstructionError("order basis does not have rank 4")
        self.algebra = algebra
        self.basis_matrix = tuple(tuple(r) for r in rows)
        self.basis = tuple(
            Quaternion(algebra, tuple(r)) for r in self.basis_matrix
        )
        self._coord_cache: dict = {}
        self.mul_table = self._build_mul_table()
        self.gram = self._build_gram()
        self.reduced_discriminant = self._reduced_discriminant()
        self._certify()

    # -- linear structure ---------------------------------------------------

    def coords(self, x: Quaternion) -> tuple[Rational, ...]:
        """Coordinates of x with respect to the order basis."""
        sol = _solve4([list(r) for r in self.basis_matrix], x.coeffs)
        if sol is None:
            raise ValueError("coordinate solve failed (degenerate basis)")
        return tuple(sol)

    def contains(self, x: Quaternion) -> bool:
        return all(c.denominator == 1 for c in self.coords(x))

    def from_coords(self, cs: Sequence) -> Quaternion:
        acc = self.algebra.quaternion(0)
        for c, e in zip(cs, self.basis):
            if c:
                acc = acc + e.scale(Fraction(c))
        return acc

    # -- certified structure -------------------------------------------------

    def _build_mul_table(self) -> tuple:
        table = []
        for er in self.basis:
            row = []
            for es in self.basis:
                cs = self.coords(er * es)
                if any(c.denominator != 1 for c in cs):
                    raise ConstructionError("basis not closed under multiplication")
                row.append(tuple(int(c) for c in cs))
            table.append(tuple(row))
        return tuple(table)

    def _build_gram(self) -> tuple:
        gram = []
        for er in self.basis:
            row = []
            for es in self.basis:
                t = (er * es.conjugate()).reduced_trace()
                if t.denominator != 1:
                    raise ConstructionError("trace pairing not integral on basis")
                row.append(int(t))
            gram.append(tuple(row))
        return tuple(gram)

    def _reduced_discriminant(self) -> int:
        det = _det4([[Fraction(v) for v in row] for row in self.gram])
        if det <= 0:
            raise ConstructionError("trace form not positive definite")
        rd = math.isqrt(int(det))
        if rd * rd != det:
            raise ConstructionError("trace Gram determinant is not a perfect square")
        return rd

    def _certify(self) -> None:
        if not self.contains(self.algebra.one):
            raise ConstructionError("1 is not in the order")
        for x in self.basis:
            if x.reduced_trace().denominator != 1 or x.reduced_norm().denominator != 1:
                raise ConstructionError("basis element is not integral")
        if self.reduced_discriminant != self.algebra.discriminant:
            raise ConstructionError(
                f"order is not maximal: reduced discriminant "
                f"{self.reduced_discriminant} != {self.algebra.discriminant}"
            )

    # -- integer matrices of structural maps ---------------------------------

    def right_mul_matrix(self, r: int) -> list[list[int]]:
        """Matrix of x -> x*e_r on order coordinates (columns act on the left)."""
        return [[self.mul_table[s][r][t] for s in range(4)] for t in range(4)]

    def left_mul_matrix_of(self, q: Quaternion) -> list[list[Rational]]:
        """Matrix of x -> q*x on order coordinates (exact, rational)."""
        cols = [self.coords(q * e) for e in self.basis]
        return [[cols[s][t] for s in range(4)] for t in range(4)]

    def to_dict(self) -> dict:
        return {
            "a": _frac_str(self.algebra.a),
            "b": _frac_str(self.algebra.b),
            "p": self.algebra.discriminant,
            "basis": [[_frac_str(v) for v in row] for row in self.basis_matrix],
        }

    def __repr__(self) -> str:
        return (
            f"MaximalOrder(disc={self.reduced_discriminant}, "
            f"algebra=({self.algebra.a},{self.algebra.b}))"
        )


def _frac_str(x: Rational) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _det4(m: list[list[Rational]]) -> Rational:
    """Exact determinant by fraction-free expansion (n <= 4 here)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    det = Fraction(0)
    for c in range(n):
        if m[0][c] == 0:
            continue
        minor = [[m[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        det += (-1) ** c * m[0][c] * _det4(minor)
    return det


# ---------------------------------------------------------------------------
# construction of H_p and its maximal order
# ---------------------------------------------------------------------------


def algebra_for_prime(p: int) -> QuaternionAlgebra:
    """The definite quaternion algebra ramified exactly at p and infinity.

    Uses the classical (a, b) table by residue class of p, then certifies
    the ramification set with Hilbert symbols at every relevant prime.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if p == 2:
        a, b = -1, -1
    elif p % 4 == 3:
        a, b = -1, -p
    elif p % 8 == 5:
        a, b = -2, -p
    else:  # p = 1 mod 8: take -q with q = 3 mod 4 a nonresidue mod p
        q = 3
        while not (is_prime(q) and q % 4 == 3 and legendre(q, p) == -1):
            q += 2
        a, b = -q, -p
    alg = QuaternionAlgebra(Fraction(a), Fraction(b), p)
    if not alg.is_definite():
        raise ConstructionError("algebra is not definite")
    ram = ramified_primes(a, b)
    if ram != {p}:
        raise ConstructionError(
            f"(a,b)=({a},{b}) ramifies at {sorted(ram)}, expected {{{p}}}"
        )
    return alg


def _ring_closure(
    alg: QuaternionAlgebra, rows: list[list[Rational]], max_rounds: int = 16
) -> list[list[Rational]] | None:
    """Close a rank-4 lattice under multiplication; None if it blows up."""
    basis = hnf_rational(rows)
    if len(basis) != 4:
        return None
    for _ in range(max_rounds):
        quats = [Quaternion(alg, tuple(r)) for r in basis]
        prods = []
        ok = True
        for x in quats:
            for y in quats:
                z = x * y
                if _solve_membership(basis, z.coeffs):
                    continue
                ok = False
                prods.append(list(z.coeffs))
        if ok:
            return basis
        basis = hnf_rational(basis + prods)
        if len(basis) != 4:
            return None
        if any(
            Quaternion(alg, tuple(r)).reduced_trace().denominator != 1
            or Quaternion(alg, tuple(r)).reduced_norm().denominator != 1
            for r in basis
        ):
            return None  # left the integral world: not an order
    return None


def _solve_membership(basis: list[list[Rational]], coeffs) -> bool:
    sol = _solve4(basis, coeffs)
    return sol is not None and all(c.denominator == 1 for c in sol)


def _lattice_reduced_disc(alg: QuaternionAlgebra, basis: list[list[Rational]]) -> int:
    quats = [Quaternion(alg, tuple(r)) for r in basis]
    gram = [
        [(x * y.conjugate()).reduced_trace() for y in quats] for x in quats
    ]
    det = _det4(gram)
    num = abs(det)
    rd2 = int(num)
    if Fraction(rd2) != num:
        raise ConstructionError("non-integral discriminant during saturation")
    rd = math.isqrt(rd2)
    if rd * rd != rd2:
        raise ConstructionError("discriminant not a square during saturation")
    return rd


@lru_cache(maxsize=None)
def maximal_order(alg: QuaternionAlgebra) -> MaximalOrder:
    """Compute a maximal order by saturating Z<1,i,j,k> prime by prime.

    At each step the current order is enlarged by an integral element
    x with q*x in the order, chosen deterministically, until the reduced
    discriminant drops to the algebra discriminant.
    """
    if not alg.is_definite():
        raise ConstructionError("only definite algebras are supported")
    a, b = alg.a, alg.b
    if a.denominator != 1 or b.denominator != 1:
        raise ConstructionError("expected integral a, b")
    one = Fraction(1)
    basis = [
        [one, 0, 0, 0],
        [0, one, 0, 0],
        [0, 0, one, 0],
        [0, 0, 0, one],
    ]
    basis = [[Fraction(v) for v in row] for row in basis]
    target = alg.discriminant
    rd = _lattice_reduced_disc(alg, basis)
    while rd > target:
        if rd % target != 0:
            raise ConstructionError("discriminant lost divisibility by target")
        excess = rd // target
        enlarged = False
        for q in sorted(factorize(excess)):
            for cs in product(range(q), repeat=4):
                if not any(cs):
                    continue
                cand = [Fraction(0)] * 4
                for c, row in zip(cs, basis):
                    for t in range(4):
                        cand[t] += Fraction(c, q) * row[t]
                x = Quaternion(alg, tuple(cand))
                if x.reduced_trace().denominator != 1:
                    continue
                if x.reduced_norm().denominator != 1:
                    continue
                if _solve_membership(basis, x.coeffs):
                    continue
                closed = _ring_closure(alg, basis + [cand])
                if closed is None:
                    continue
                new_rd = _lattice_reduced_disc(alg, closed)
                if new_rd < rd:
                    basis, rd, enlarged = closed, new_rd, True
                    break
            if enlarged:
                break
        if not enlarged:
            raise ConstructionError(
                f"saturation stalled at reduced discriminant {rd}"
            )
    return MaximalOrder(alg, basis)


def order_for_prime(p: int) -> MaximalOrder:
    """Maximal order of the algebra ramified at {p, infinity}."""
    return maximal_order(algebra_for_prime(p))


def algebra_from_dict(data: dict) -> QuaternionAlgebra:
    a = Fraction(data["a"])
    b = Fraction(data["b"])
    return QuaternionAlgebra(a, b, int(data["p"]))


def order_from_dict(data: dict) -> MaximalOrder:
    alg = algebra_from_dict(data)
    rows = [[Fraction(v) for v in row] for row in data["basis"]]
    return MaximalOrder(alg, rows)
