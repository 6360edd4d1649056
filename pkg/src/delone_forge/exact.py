"""Exact rational scalar and matrix arithmetic.

Matrices are plain row-major sequences of rows whose entries are ``int`` or
``fractions.Fraction``.  Functions never mutate their arguments and always
return tuples of tuples, so results can be hashed and compared structurally.
``Fraction`` already keeps numerator/denominator gcd-reduced with a positive
denominator, which is the canonical scalar form used throughout.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from .errors import NotSquare, NotSymmetric, RankDeficient, Singular

Matrix = Sequence[Sequence]


def format_rational(x) -> str:
    """Wire encoding: ``"p/q"``, or ``"p"`` when the denominator is one."""
    return str(Fraction(x))


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rationals are encoded as strings, got {s!r}")
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {s!r}") from exc


def parse_integer(s) -> int:
    x = parse_rational(s)
    if x.denominator != 1:
        raise ValueError(f"not an integer: {s!r}")
    return x.numerator


def as_fraction_matrix(m: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def shape(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> tuple[tuple, ...]:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> tuple[tuple, ...]:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def quad(q: Matrix, v: Sequence):
    """The quadratic form value ``v^T q v``."""
    return sum(vi * sum(qij * vj for qij, vj in zip(row, v)) for vi, row in zip(v, q))


def is_symmetric(m: Matrix) -> bool:
    n, k = shape(m)
    return n == k and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def _require_square(m: Matrix) -> int:
    n, k = shape(m)
    if n != k:
        raise NotSquare(f"expected a square matrix, got {n}x{k}")
    return n


def det_exact(m: Matrix):
    """Determinant by Bareiss fraction-free elimination.

    Integer input keeps every intermediate an integer (each division is
    exact); rational input works the same way over Q.
    """
    n = _require_square(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                num = row_i[j] * akk - aik * row_k[j]
                if isinstance(num, int) and isinstance(prev, int):
                    row_i[j] = num // prev
                else:
                    row_i[j] = num / prev
            row_i[k] = 0
        prev = akk
    d = sign * a[n - 1][n - 1]
    if isinstance(d, Fraction) and d.denominator == 1:
        return d.numerator
    return d


def hnf_rows(gens: Matrix) -> tuple[tuple[int, ...], ...]:
    """Canonical row Hermite normal form of an integer generating set.

    The rows of ``gens`` must span a full-rank sublattice of Z^cols.  The
    result is square and upper triangular with positive pivots, and every
    entry above a pivot lies in ``[0, pivot)``.
    """
    _, cols = shape(gens)
    rows = [[int(x) for x in r] for r in gens]
    if any(Fraction(x) != int(x) for r in gens for x in r):
        raise ValueError("hnf_rows needs integer entries")
    for col in range(cols):
        while True:
            live = [i for i in range(col, len(rows)) if rows[i][col] != 0]
            if not live:
                raise RankDeficient(f"generators do not span full rank (column {col})")
            p = min(live, key=lambda i: abs(rows[i][col]))
            rows[col], rows[p] = rows[p], rows[col]
            pivot_row = rows[col]
            clean = True
            for i in range(col + 1, len(rows)):
                x = rows[i][col]
                if x:
                    qt = x // pivot_row[col]
                    if qt:
                        rows[i] = [a - qt * b for a, b in zip(rows[i], pivot_row)]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if rows[col][col] < 0:
            rows[col] = [-a for a in rows[col]]
        piv = rows[col][col]
        for i in range(col):
            qt = rows[i][col] // piv
            if qt:
                rows[i] = [a - qt * b for a, b in zip(rows[i], rows[col])]
    return tuple(tuple(r) for r in rows[:cols])


def _eliminate(aug: list[list[Fraction]], ncols: int) -> list[int]:
    """Gauss-Jordan in place on the first ``ncols`` columns; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    return pivots


def solve_exact(m: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    n = _require_square(m)
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    if len(_eliminate(aug, n)) < n:
        raise Singular("matrix is singular")
    return tuple(row[n] for row in aug)


def solve_full_column_rank(m: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve a possibly overdetermined system exactly.

    Raises ``Singular`` when the columns are dependent; returns ``None`` when
    the system is inconsistent.
    """
    rows, n = shape(m)
    if len(b) != rows:
        raise ValueError("right-hand side has the wrong length")
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    if len(_eliminate(aug, n)) < n:
        raise Singular("columns are linearly dependent")
    if any(row[n] != 0 for row in aug[n:]):
        return None
    return tuple(row[n] for row in aug[:n])


def rank(m: Matrix) -> int:
    _, n = shape(m)
    aug = [[Fraction(x) for x in row] for row in m]
    return len(_eliminate(aug, n))


def inverse(m: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    n = _require_square(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    if len(_eliminate(aug, n)) < n:
        raise Singular("matrix is singular")
    return tuple(tuple(row[n:]) for row in aug)


class LDL(NamedTuple):
    """``q = U^T diag(d) U`` with ``U`` unit upper triangular.

    Equivalently ``q[x] = sum_i d[i] * (x[i] + sum_{j>i} u[i][j] x[j])**2``,
    so the last coordinate can be enumerated first.
    """

    d: tuple[Fraction, ...]
    u: tuple[tuple[Fraction, ...], ...]


def ldl(q: Matrix) -> LDL | None:
    """Exact LDL factorization of a symmetric matrix, or ``None`` if some
    pivot is not strictly positive (the matrix is not positive definite)."""
    n = _require_square(q)
    if not is_symmetric(q):
        raise NotSymmetric("matrix is not symmetric")
    d: list[Fraction] = []
    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        di = Fraction(q[i][i]) - sum(d[k] * u[k][i] ** 2 for k in range(i))
        if di <= 0:
            return None
        d.append(di)
        for j in range(i + 1, n):
            s = Fraction(q[i][j]) - sum(d[k] * u[k][i] * u[k][j] for k in range(i))
            u[i][j] = s / di
    return LDL(tuple(d), tuple(tuple(r) for r in u))


def is_positive_definite(q: Matrix) -> bool:
    return ldl(q) is not None


def leading_minors(m: Matrix) -> list:
    n = _require_square(m)
    return [det_exact([row[:k] for row in m[:k]]) for k in range(1, n + 1)]


def lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        den = Fraction(v).denominator
        out = out * den // gcd(out, den)
    return out
