"""Integral positive-definite quadratic forms: exact short-vector enumeration.

``short_vectors`` solves Q(x) = v completely for a positive definite
rational form, using a Fincke-Pohst style backtracking over an exact
rational LDL decomposition (no floating point, so the counts feeding
Brandt matrix entries are exact).

``constrained_matrix_search`` extends this to tuples of columns subject to
bilinear cross constraints (exact values or divisibility), the engine
behind congruence solving on hermitian forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "GramForm",
    "short_vectors",
    "short_vector_array",
    "short_vectors_naive",
    "CrossConstraints",
    "constrained_matrix_search",
    "search_columns",
    "rref_mod",
    "rref_mod_batch",
]


_GRAM_SERIAL = iter(range(1, 1 << 62))


class GramForm:
    """Q(x) = x^T A x for a symmetric positive definite rational matrix A.

    ``from_doubled`` accepts the bilinear ("doubled") Gram matrix G with
    G[r][s] = B(e_r, e_s), B(x,x) = 2 Q(x), the natural integral matrix for
    trace forms of quaternionic lattices.
    """

    __slots__ = ("matrix", "n", "serial", "_ldl", "_int_data")

    def __init__(self, matrix: Sequence[Sequence]):
        mat = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        n = len(mat)
        if any(len(row) != n for row in mat):
            raise ValueError("matrix must be square")
        for r in range(n):
            for s in range(r):
                if mat[r][s] != mat[s][r]:
                    raise ValueError("matrix must be symmetric")
        self.matrix = mat
        self.n = n
        self.serial = next(_GRAM_SERIAL)  # stable pool key across searches
        self._ldl = self._decompose()
        self._int_data = None

    @classmethod
    def from_doubled(cls, doubled: Sequence[Sequence]) -> "GramForm":
        return cls([[Fraction(v, 2) for v in row] for row in doubled])

    def _decompose(self):
        """Exact LDL: Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2, d_i > 0."""
        n = self.n
        a = [[Fraction(v) for v in row] for row in self.matrix]
        d = [Fraction(0)] * n
        u = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            pivot = a[i][i]
            if pivot <= 0:
                raise ValueError("form is not positive definite")
            d[i] = pivot
            for j in range(i + 1, n):
                u[i][j] = a[i][j] / pivot
            for r in range(i + 1, n):
                for s in range(r, n):
                    a[r][s] -= a[i][r] * a[i][s] / pivot
                    a[s][r] = a[r][s]
        return tuple(d), tuple(tuple(row) for row in u)

    def int_data(self):
        """Integer-scaled LDL for the enumeration inner loop.

        With row denominators U_i for the unit-triangular part and a global
        denominator DEN = lcm(dd_i * U_i^2), the decomposition becomes
        DEN * Q(x) = sum_i K_i * (U_i x_i + C_i)^2 with integer K_i and
        integer center accumulators C_i = sum_{j>i} UU[i][j] x_j, so the
        backtracking never touches a Fraction.
        """
        if self._int_data is None:
            d, u = self._ldl
            n = self.n
            U = []
            for i in range(n):
                den = 1
                for j in range(i + 1, n):
                    den = den * u[i][j].denominator // math.gcd(
                        den, u[i][j].denominator
                    )
                U.append(den)
            DEN = 1
            for i in range(n):
                q = d[i].denominator * U[i] * U[i]
                DEN = DEN * q // math.gcd(DEN, q)
            K = [int(Fraction(DEN) * d[i] / (U[i] * U[i])) for i in range(n)]
            UU = [
                [int(u[i][j] * U[i]) if j > i else 0 for j in range(n)]
                for i in range(n)
            ]
            self._int_data = (K, U, UU, DEN)
        return self._int_data

    def value(self, x: Sequence[int]) -> Fraction:
        acc = Fraction(0)
        for r in range(self.n):
            if x[r]:
                acc += self.matrix[r][r] * x[r] * x[r]
                for s in range(r + 1, self.n):
                    if x[s]:
                        acc += 2 * self.matrix[r][s] * x[r] * x[s]
        return acc

    def inverse_diagonal(self) -> list[Fraction]:
        """Diagonal of A^{-1}, used for naive box bounds."""
        n = self.n
        a = [[Fraction(v) for v in row] + [Fraction(int(r == c)) for c in range(n)]
             for r, row in enumerate(self.matrix)]
        for col in range(n):
            piv = next(r for r in range(col, n) if a[r][col] != 0)
            a[col], a[piv] = a[piv], a[col]
            inv = Fraction(1) / a[col][col]
            a[col] = [v * inv for v in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return [a[r][n + r] for r in range(n)]

    def __repr__(self) -> str:
        return f"GramForm(n={self.n})"


def _floor_sqrt(r: Fraction) -> int:
    """floor(sqrt(r)) for a nonnegative rational."""
    if r < 0:
        raise ValueError("negative radicand")
    return math.isqrt(r.numerator * r.denominator) // r.denominator


def short_vectors(form: GramForm, value) -> list[tuple[int, ...]]:
    """All integer x with Q(x) = value, in lexicographic order.

    value 0 returns exactly the zero vector; the result is closed under
    negation and complete (every solution appears once).  The backtracking
    runs entirely in integer arithmetic on the scaled decomposition.
    """
    value = Fraction(value)
    if value < 0:
        return []
    n = form.n
    if value == 0:
        return [(0,) * n]
    K, U, UU, DEN = form.int_data()
    scaled = value * DEN
    if scaled.denominator != 1:
        return []
    out: list[tuple[int, ...]] = []
    x = [0] * n
    centers = [0] * n  # centers[t] = sum_{j>t fixed} UU[t][j] * x_j

    def recurse(level: int, budget: int) -> None:
        k, uu = K[level], U[level]
        c = centers[level]
        if level == 0:
            if budget % k:
                return
            y2 = budget // k
            s = math.isqrt(y2)
            if s * s != y2:
                return
            for root in ((s,) if s == 0 else (s, -s)):
                num = root - c
                if num % uu == 0:
                    x[0] = num // uu
                    out.append(tuple(x))
            return
        # K*(U*x + c)^2 <= budget: exactly |y| <= isqrt(budget // K)
        ybound = math.isqrt(budget // k)
        lo = -((ybound + c) // uu)  # ceil((-ybound - c)/uu)
        hi = (ybound - c) // uu
        if lo > hi:
            return
        saved = centers[:level]
        urow = UU
        for xi in range(lo, hi + 1):
            y = uu * xi + c
            rem = budget - k * y * y
            if rem < 0:
                continue
            x[level] = xi
            for t in range(level):
                centers[t] = saved[t] + urow[t][level] * xi
            recurse(level - 1, rem)
        centers[:level] = saved

    recurse(n - 1, int(scaled))
    out.sort()
    return out


def short_vector_array(form: GramForm, value) -> np.ndarray:
    """short_vectors as an (N, n) int64 array (empty array if none)."""
    vecs = short_vectors(form, value)
    if not vecs:
        return np.zeros((0, form.n), dtype=np.int64)
    return np.array(vecs, dtype=np.int64)


def short_vectors_naive(form: GramForm, value) -> list[tuple[int, ...]]:
    """Independent oracle: scan the coordinate box |x_i| <= sqrt(v*(A^-1)_ii).

    Deliberately avoids the LDL recursion so the two enumerations share no
    code path beyond the form itself.  The scan is vectorized over exact
    integers (the doubled Gram has integer entries after scaling).
    """
    value = Fraction(value)
    if value < 0:
        return []
    if value == 0:
        return [(0,) * form.n]
    inv_diag = form.inverse_diagonal()
    bounds = [_floor_sqrt(value * q) for q in inv_diag]
    den = 1
    for row in form.matrix:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    scaled = np.array(
        [[int(v * den) for v in row] for row in form.matrix], dtype=np.int64
    )
    target = value * den
    if target.denominator != 1:
        return []
    grids = np.meshgrid(
        *[np.arange(-b, b + 1, dtype=np.int64) for b in bounds], indexing="ij"
    )
    pts = np.stack([grid.ravel() for grid in grids], axis=1)
    vals = np.einsum("nr,rs,ns->n", pts, scaled, pts)
    hits = pts[vals == int(target)]
    out = [tuple(int(c) for c in row) for row in hits]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# row reduction over F_ell (kernel subspace canonical forms)
# ---------------------------------------------------------------------------


def rref_mod(rows: Sequence[Sequence[int]], modulus: int) -> tuple[tuple[int, ...], ...]:
    """Unique reduced row echelon form of the row span over F_modulus."""
    mat = [[v % modulus for v in r] for r in rows]
    mat = [r for r in mat if any(r)]
    if not mat:
        return ()
    width = len(mat[0])
    out: list[list[int]] = []
    r = 0
    for col in range(width):
        piv = next((t for t in range(r, len(mat)) if mat[t][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][col], -1, modulus)
        mat[r] = [(v * inv) % modulus for v in mat[r]]
        for t in range(len(mat)):
            if t != r and mat[t][col]:
                f = mat[t][col]
                mat[t] = [(u - f * v) % modulus for u, v in zip(mat[t], mat[r])]
        r += 1
        if r == len(mat):
            break
    mat = [row for row in mat[:r] if any(row)]
    return tuple(tuple(row) for row in mat)


def rref_mod_batch(mats: np.ndarray, modulus: int) -> np.ndarray:
    """Reduced row echelon form over F_modulus for a stack of matrices.

    ``mats`` has shape (N, r, c); the result is canonical per matrix (rows
    ordered by pivot column, zero rows at the bottom), suitable for
    fingerprinting row spans via ``tobytes``.
    """
    A = np.ascontiguousarray(mats % modulus).astype(np.int64)
    N, r, c = A.shape
    inv_table = np.zeros(modulus, dtype=np.int64)
    for v in range(1, modulus):
        inv_table[v] = pow(v, -1, modulus)
    pivot_row = np.zeros(N, dtype=np.int64)
    rowidx = np.arange(r)
    for col in range(c):
        colvals = A[:, :, col]
        eligible = (rowidx[None, :] >= pivot_row[:, None]) & (colvals != 0)
        has = eligible.any(axis=1)
        if not has.any():
            continue
        sel = np.where(has, eligible.argmax(axis=1), 0)
        n = np.nonzero(has)[0]
        cur = pivot_row[n]
        chosen = sel[n]
        tmp = A[n, cur].copy()
        A[n, cur] = A[n, chosen]
        A[n, chosen] = tmp
        pv = A[n, cur, col]
        A[n, cur] = (A[n, cur] * inv_table[pv][:, None]) % modulus
        factors = A[n, :, col].copy()
        factors[np.arange(len(n)), cur] = 0
        A[n] = (A[n] - factors[:, :, None] * A[n, cur][:, None, :]) % modulus
        pivot_row[n] = cur + 1
        if (pivot_row >= r).all():
            break
    return A


# ---------------------------------------------------------------------------
# constrained column search
# ---------------------------------------------------------------------------


@dataclass
class CrossConstraints:
    """Bilinear constraints between columns.

    ``tensor`` has shape (m, m, c): value(x, y)[t] = x . tensor[:, :, t] . y.
    Exactly one of ``targets`` (exact values per ordered pair j < k) or
    ``modulus`` (all off-diagonal pairs divisible by the modulus) is set.
    """

    tensor: np.ndarray
    targets: dict[tuple[int, int], tuple[int, ...]] | None = None
    modulus: int | None = None

    def __post_init__(self):
        if (self.targets is None) == (self.modulus is None):
            raise ValueError("exactly one of targets/modulus must be given")
        self.tensor = np.asarray(self.tensor, dtype=np.int64)


_PAIR_SCAN_THRESHOLD = 1_000_000
_BLOCK_CELLS = 6_000_000  # float64 buffer cells per matmul block


def _fold_signs(cands: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero coordinate is positive (one per +- pair)."""
    nz = cands != 0
    first = nz.argmax(axis=1)
    lead = cands[np.arange(len(cands)), first]
    return cands[lead > 0]


def _pair_survivors(
    a: np.ndarray, b: np.ndarray, tensor: np.ndarray, target: np.ndarray,
    twin_target: np.ndarray | None = None,
):
    """Index pairs (i, j) with value(a_i, b_j) == target, by blocked matmul.

    All products fit far below 2^53, so float64 matrix products are exact
    integers and the equality masks are exact.  If ``twin_target`` is given
    the scan simultaneously collects pairs hitting it (used for the +-
    folded search, where one matmul serves both signs).
    """
    m = a.shape[1]
    c = tensor.shape[2]
    bound = (
        int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0))
        * int(np.abs(tensor).max(initial=0)) * m
    )
    if bound >= 2**52:
        raise ArithmeticError("pair scan would overflow exact float64 range")
    af = a.astype(np.float64)
    right = [
        (tensor[:, :, t].astype(np.float64) @ b.T.astype(np.float64))
        for t in range(c)
    ]
    blk = max(16, _BLOCK_CELLS // max(1, b.shape[0]))
    hits_pos: list[tuple[np.ndarray, np.ndarray]] = []
    hits_twin: list[tuple[np.ndarray, np.ndarray]] = []
    for start in range(0, len(a), blk):
        ablk = af[start:start + blk]
        mask_pos = None
        mask_twin = None
        alive = True
        for t in range(c):
            v = ablk @ right[t]
            mp = v == target[t]
            mask_pos = mp if mask_pos is None else (mask_pos & mp)
            if twin_target is not None:
                mt = v == twin_target[t]
                mask_twin = mt if mask_twin is None else (mask_twin & mt)
            if not mask_pos.any() and (
                twin_target is None or not mask_twin.any()
            ):
                alive = False
                break
        if not alive:
            continue
        ii, jj = np.nonzero(mask_pos)
        if len(ii):
            hits_pos.append((ii + start, jj))
        if twin_target is not None:
            ii, jj = np.nonzero(mask_twin)
            if len(ii):
                hits_twin.append((ii + start, jj))

    def collect(parts):
        if not parts:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return (
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
        )

    return collect(hits_pos), collect(hits_twin)


def search_columns(
    forms: Sequence[GramForm],
    values: Sequence[int],
    cross: CrossConstraints | None = None,
    candidate_pool: dict[tuple[int, int], np.ndarray] | None = None,
    limit: int | None = None,
) -> Iterator[np.ndarray]:
    """Depth-first column search, streaming solution blocks.

    Yields int64 arrays of shape (N, g, m): N complete solutions, each a
    g-tuple of columns in the caller's order.  Internally columns are fixed
    in order of increasing target value; all solutions with a common prefix
    are emitted as one block, so counting is cheap and nothing larger than a
    block lives in memory at once.

    ``candidate_pool`` may pre-supply short-vector arrays keyed by
    (column_index, value) to share enumeration work across searches.
    """
    g = len(forms)
    if g != len(values):
        raise ValueError("forms and values must have equal length")
    m = forms[0].n if g else 0
    if g == 0:
        yield np.zeros((1, 0, 0), dtype=np.int64)
        return

    def cands_for(k: int) -> np.ndarray:
        key = (forms[k].serial, int(values[k]))
        if candidate_pool is not None and key in candidate_pool:
            return candidate_pool[key]
        arr = short_vector_array(forms[k], values[k])
        if candidate_pool is not None:
            candidate_pool[key] = arr
        return arr

    order = sorted(range(g), key=lambda k: (values[k], k))
    cand = [cands_for(k) for k in order]
    if any(len(c) == 0 for c in cand):
        return
    tensor = cross.tensor if cross is not None else None

    def admissible(x: np.ndarray, pos_fixed: int, pos_other: int,
                   rows: np.ndarray) -> np.ndarray:
        if cross is None:
            return np.ones(len(rows), dtype=bool)
        j, k = order[pos_fixed], order[pos_other]
        if cross.modulus is not None:
            left = np.tensordot(x, tensor, axes=(0, 0))  # (m, c)
            vals = rows @ left
            return (vals % cross.modulus == 0).all(axis=1)
        if j < k:
            target = np.asarray(cross.targets[(j, k)], dtype=np.int64)
            left = np.tensordot(x, tensor, axes=(0, 0))
            vals = rows @ left
        else:
            target = np.asarray(cross.targets[(k, j)], dtype=np.int64)
            right = np.tensordot(tensor, x, axes=(1, 0))  # (m, c)
            vals = rows @ right
        return (vals == target).all(axis=1)

    emitted = 0

    def rec(level: int, fixed: list[np.ndarray],
            live: list) -> Iterator[np.ndarray]:
        nonlocal emitted
        if limit is not None and emitted >= limit:
            return
        if level == g - 1:
            tail = live[level]
            if len(tail) == 0:
                return
            if limit is not None and emitted + len(tail) > limit:
                tail = tail[: limit - emitted]
            emitted += len(tail)
            block = np.empty((len(tail), g, m), dtype=np.int64)
            for pos, x in enumerate(fixed):
                block[:, order[pos], :] = x
            block[:, order[level], :] = tail
            yield block
            return
        for x in live[level]:
            new_live = live[:level + 1]
            dead = False
            for pos in range(level + 1, g):
                mask = admissible(x, level, pos, live[pos])
                filtered = live[pos][mask]
                if len(filtered) == 0:
                    dead = True
                    break
                new_live.append(filtered)
            if dead:
                continue
            yield from rec(level + 1, fixed + [x], new_live)
            if limit is not None and emitted >= limit:
                return

    big_pair = (
        cross is not None and cross.targets is not None and g >= 2
        and limit is None
        and len(cand[0]) * len(cand[1]) >= _PAIR_SCAN_THRESHOLD
    )
    if not big_pair:
        yield from rec(0, [], cand)
        return

    # blocked pair scan over the two smallest columns
    j0, k0 = order[0], order[1]
    if j0 < k0:
        tensor01 = cross.tensor
        t01 = np.asarray(cross.targets[(j0, k0)], dtype=np.int64)
    else:
        tensor01 = np.ascontiguousarray(cross.tensor.transpose(1, 0, 2))
        t01 = np.asarray(cross.targets[(k0, j0)], dtype=np.int64)

    if g == 2:
        a_half = _fold_signs(cand[0])
        b_half = _fold_signs(cand[1])
        if t01.any():
            (pi, pj), (ni, nj) = _pair_survivors(
                a_half, b_half, tensor01, t01, -t01
            )
            sign_plans = [(pi, pj, 1, 1), (pi, pj, -1, -1),
                          (ni, nj, -1, 1), (ni, nj, 1, -1)]
        else:
            (pi, pj), _ = _pair_survivors(a_half, b_half, tensor01, t01)
            sign_plans = [(pi, pj, 1, 1), (pi, pj, -1, -1),
                          (pi, pj, -1, 1), (pi, pj, 1, -1)]
        for ii, jj, sa, sb in sign_plans:
            for start in range(0, len(ii), 65536):
                sl = slice(start, start + 65536)
                xs = sa * a_half[ii[sl]]
                ys = sb * b_half[jj[sl]]
                block = np.empty((len(xs), 2, m), dtype=np.int64)
                block[:, order[0], :] = xs
                block[:, order[1], :] = ys
                yield block
        return

    # g >= 3: scan the first two columns, continue per surviving pair
    (pi, pj), _ = _pair_survivors(cand[0], cand[1], tensor01, t01)
    if len(pi) == 0:
        return
    grouping = np.lexsort((pj, pi))
    pi, pj = pi[grouping], pj[grouping]
    boundaries = np.nonzero(np.diff(pi))[0] + 1
    for ii, jj in zip(np.split(pi, boundaries), np.split(pj, boundaries)):
        x = cand[0][ii[0]]
        live_x: list = [None, None]
        dead = False
        for pos in range(2, g):
            mask = admissible(x, 0, pos, cand[pos])
            filtered = cand[pos][mask]
            if len(filtered) == 0:
                dead = True
                break
            live_x.append(filtered)
        if dead:
            continue
        for j in jj:
            y = cand[1][j]
            live_xy: list = [None, None]
            dead = False
            for pos in range(2, g):
                mask = admissible(y, 1, pos, live_x[pos])
                filtered = live_x[pos][mask]
                if len(filtered) == 0:
                    dead = True
                    break
                live_xy.append(filtered)
            if dead:
                continue
            yield from rec(2, [x, y], live_xy)


def constrained_matrix_search(
    forms: Sequence[GramForm],
    values: Sequence[int],
    cross: CrossConstraints | None = None,
    limit: int | None = None,
) -> list[tuple[tuple[int, ...], ...]]:
    """Complete list of column tuples satisfying all constraints.

    Each solution is a tuple of g integer column vectors (caller's column
    order); the list is sorted lexicographically.  An empty column list has
    the single vacuous solution ().
    """
    if len(forms) == 0:
        return [()]
    out = []
    for block in search_columns(forms, values, cross, limit=limit):
        for sol in block:
            out.append(tuple(tuple(int(v) for v in col) for col in sol))
    out.sort()
    if limit is not None:
        out = out[:limit]
    return out
