"""Exact linear algebra kernel over arbitrary-precision rationals.

Everything in this module is exact.  Matrices hold ``fractions.Fraction``
entries; determinants use fraction-free (Bareiss) elimination when every
entry is an integer and ordinary Gaussian elimination otherwise; inertia is
computed by symmetric congruence reduction with a 2x2 pivot fallback so
that hyperbolic blocks (zero diagonal) are handled without leaving exact
arithmetic.  Floating point is rejected on input and never appears
internally: denominators are data here, not noise.

All values are immutable after construction and every operation is a pure
function, so matrices can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, ShapeError, SingularMatrixError


def as_rational(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Accepts integers, ``Fraction`` and strings like ``"3"`` or ``"-5/7"``.
    Floats are rejected: a caller holding a float has already lost exactness.
    """
    if isinstance(value, bool):
        raise DomainError(f"boolean {value!r} is not a rational number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as an exact rational") from exc
    if isinstance(value, float):
        raise DomainError(f"float {value!r} rejected; use int, Fraction or 'p/q' string")
    raise DomainError(f"cannot interpret {type(value).__name__} as an exact rational")


def as_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


class RationalMatrix:
    """Immutable two-dimensional array of exact rationals."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        converted = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if converted and any(len(r) != len(converted[0]) for r in converted):
            raise ShapeError("rows have inconsistent lengths")
        self._rows = converted

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def symmetric(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        """Build a matrix that is required to be symmetric.

        Rejects any input where entry (i, j) differs from entry (j, i).
        """
        m = cls(rows)
        if not m.is_square():
            raise ShapeError(f"symmetric matrix must be square, got {m.nrows}x{m.ncols}")
        for i in range(m.nrows):
            for j in range(i + 1, m.ncols):
                if m[i, j] != m[j, i]:
                    raise ShapeError(f"asymmetric entry at ({i}, {j}): {m[i, j]} != {m[j, i]}")
        return m

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    @property
    def entries(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(
            self._rows[i][j] == self._rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self._rows for x in row)

    def int_rows(self) -> list[list[int]]:
        """Entries as plain Python ints; raises if any entry is fractional."""
        if not self.is_integral():
            raise DomainError("matrix has non-integer entries")
        return [[int(x) for x in row] for row in self._rows]

    def submatrix(self, indices: Sequence[int]) -> "RationalMatrix":
        """Principal submatrix on the given (row = column) indices."""
        idx = list(indices)
        return RationalMatrix([[self._rows[i][j] for j in idx] for i in idx])

    def replace_column(self, j: int, column: Sequence) -> "RationalMatrix":
        col = as_vector(column)
        if len(col) != self.nrows:
            raise ShapeError("replacement column has wrong length")
        return RationalMatrix(
            [
                [col[i] if c == j else self._rows[i][c] for c in range(self.ncols)]
                for i in range(self.nrows)
            ]
        )

    def matvec(self, vec: Sequence) -> tuple[Fraction, ...]:
        v = as_vector(vec)
        if len(v) != self.ncols:
            raise ShapeError(f"vector length {len(v)} != column count {self.ncols}")
        return tuple(sum((row[j] * v[j] for j in range(self.ncols)), Fraction(0)) for row in self._rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._rows))) if self._rows else RationalMatrix([])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: {body})"


def as_matrix(value) -> RationalMatrix:
    return value if isinstance(value, RationalMatrix) else RationalMatrix(value)


def det(matrix) -> Fraction:
    """Exact determinant.

    Integer matrices go through fraction-free Bareiss elimination, which
    keeps every intermediate value integral; rational matrices fall back to
    ordinary Gaussian elimination over ``Fraction``.
    """
    m = as_matrix(matrix)
    if not m.is_square():
        raise ShapeError(f"determinant needs a square matrix, got {m.nrows}x{m.ncols}")
    if m.nrows == 0:
        return Fraction(1)
    if m.is_integral():
        return Fraction(_det_bareiss(m.int_rows()))
    return _det_gauss([list(row) for row in m.entries])


def _det_bareiss(rows: list[list[int]]) -> int:
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # Exact division: Bareiss guarantees divisibility by the previous pivot.
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_gauss(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    result = Fraction(1)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if a[r][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            result = -result
        pivot = a[k][k]
        result *= pivot
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            f = a[i][k] / pivot
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return result


def solve(matrix, rhs) -> tuple[Fraction, ...]:
    """Solve ``matrix @ x = rhs`` exactly for a square nonsingular matrix."""
    m = as_matrix(matrix)
    if not m.is_square():
        raise ShapeError(f"solve needs a square matrix, got {m.nrows}x{m.ncols}")
    b = as_vector(rhs)
    if len(b) != m.nrows:
        raise ShapeError(f"right-hand side length {len(b)} != matrix size {m.nrows}")
    n = m.nrows
    a = [list(m.row(i)) + [b[i]] for i in range(n)]
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if a[r][k] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[pivot_row] = a[pivot_row], a[k]
        pivot = a[k][k]
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            f = a[i][k] / pivot
            for j in range(k, n + 1):
                a[i][j] -= f * a[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        acc = a[k][n] - sum((a[k][j] * x[j] for j in range(k + 1, n)), Fraction(0))
        x[k] = acc / a[k][k]
    return tuple(x)


@dataclass(frozen=True)
class Inertia:
    """Counts of positive, negative and zero squares of a symmetric form."""

    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero

    def as_pair(self) -> tuple[int, int]:
        return (self.n_plus, self.n_minus)


def signature(matrix) -> Inertia:
    """Inertia of a symmetric matrix by exact congruence reduction.

    Nonzero diagonal entries are used as 1x1 pivots; when every remaining
    diagonal entry vanishes, a nonzero off-diagonal entry provides a 2x2
    hyperbolic pivot contributing one positive and one negative square.
    By Sylvester's law of inertia the counts are congruence invariants.
    """
    m = as_matrix(matrix)
    if not m.is_symmetric():
        raise ShapeError("signature needs a symmetric matrix")
    a = [list(row) for row in m.entries]
    live = list(range(m.nrows))
    n_plus = n_minus = n_zero = 0
    while live:
        pivot = next((i for i in live if a[i][i] != 0), None)
        if pivot is not None:
            p = a[pivot][pivot]
            if p > 0:
                n_plus += 1
            else:
                n_minus += 1
            live.remove(pivot)
            for r in live:
                if a[r][pivot] == 0:
                    continue
                f = a[r][pivot] / p
                for s in live:
                    a[r][s] -= f * a[pivot][s]
            continue
        block = None
        for pos, i in enumerate(live):
            for j in live[pos + 1 :]:
                if a[i][j] != 0:
                    block = (i, j)
                    break
            if block:
                break
        if block is None:
            n_zero += len(live)
            break
        i, j = block
        b = a[i][j]
        n_plus += 1
        n_minus += 1
        live.remove(i)
        live.remove(j)
        # Schur complement of the hyperbolic 2x2 block [[0, b], [b, 0]].
        for r in live:
            ri, rj = a[r][i], a[r][j]
            if ri == 0 and rj == 0:
                continue
            for s in live:
                a[r][s] -= (ri * a[j][s] + rj * a[i][s]) / b
    return Inertia(n_plus, n_minus, n_zero)


def leading_principal_minors(matrix) -> tuple[Fraction, ...]:
    m = as_matrix(matrix)
    if not m.is_square():
        raise ShapeError("principal minors need a square matrix")
    return tuple(det(m.submatrix(range(k + 1))) for k in range(m.nrows))


def is_negative_definite(matrix) -> bool:
    """Sylvester criterion: leading principal minors strictly alternate,
    starting negative."""
    m = as_matrix(matrix)
    if not m.is_symmetric():
        raise ShapeError("definiteness test needs a symmetric matrix")
    for k, minor in enumerate(leading_principal_minors(m), start=1):
        if (minor > 0) != (k % 2 == 0) or minor == 0:
            return False
    return True


def _exgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class SmithNormalForm:
    """Diagonalization ``left @ matrix @ right == diag(diagonal)``.

    ``left`` and ``right`` are unimodular integer matrices, kept so the
    reduction can be certified after the fact instead of trusted.
    The diagonal is nonnegative and each entry divides the next nonzero one.
    """

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[int, ...], ...]

    def verify(self) -> bool:
        n = len(self.diagonal)
        umv = _int_matmul(_int_matmul(self.left, self.matrix), self.right)
        if any(umv[i][j] != (self.diagonal[i] if i == j else 0) for i in range(n) for j in range(n)):
            return False
        return abs(_det_bareiss([list(r) for r in self.left])) == 1 and abs(
            _det_bareiss([list(r) for r in self.right])
        ) == 1


def _int_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)) for i in range(n)
    )


def smith_normal_form(matrix) -> SmithNormalForm:
    """Smith normal form of a square integer matrix with transform records."""
    m = as_matrix(matrix)
    if not m.is_square():
        raise ShapeError(f"Smith normal form needs a square matrix, got {m.nrows}x{m.ncols}")
    d = m.int_rows()
    n = len(d)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i1, i2, x, y, z, w):
        # rows (i1, i2) <- (x*r1 + y*r2, z*r1 + w*r2); the 2x2 block must be unimodular
        for mat in (d, u):
            r1, r2 = mat[i1], mat[i2]
            mat[i1], mat[i2] = (
                [x * p + y * q for p, q in zip(r1, r2)],
                [z * p + w * q for p, q in zip(r1, r2)],
            )

    def col_op(j1, j2, x, y, z, w):
        for mat in (d, v):
            for row in mat:
                p, q = row[j1], row[j2]
                row[j1], row[j2] = x * p + y * q, z * p + w * q

    def eliminate_row(t, i):
        # Plain elimination keeps the pivot row fixed; the gcd transform is
        # used only when the pivot does not divide, which strictly shrinks
        # the pivot and so guarantees termination of the clearing loop.
        if d[t][t] != 0 and d[i][t] % d[t][t] == 0:
            row_op(t, i, 1, 0, -(d[i][t] // d[t][t]), 1)
        else:
            g, x, y = _exgcd(d[t][t], d[i][t])
            row_op(t, i, x, y, -(d[i][t] // g), d[t][t] // g)

    def eliminate_col(t, j):
        if d[t][t] != 0 and d[t][j] % d[t][t] == 0:
            col_op(t, j, 1, 0, -(d[t][j] // d[t][t]), 1)
        else:
            g, x, y = _exgcd(d[t][t], d[t][j])
            col_op(t, j, x, y, -(d[t][j] // g), d[t][t] // g)

    def clear_down(t):
        changed = False
        for i in range(t + 1, n):
            if d[i][t] == 0:
                continue
            eliminate_row(t, i)
            changed = True
        return changed

    def clear_right(t):
        changed = False
        for j in range(t + 1, n):
            if d[t][j] == 0:
                continue
            eliminate_col(t, j)
            changed = True
        return changed

    for t in range(n):
        pivot = next(
            ((i, j) for i in range(t, n) for j in range(t, n) if d[i][j] != 0), None
        )
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            row_op(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        while clear_down(t) | clear_right(t):
            pass

    for t in range(n):
        if d[t][t] < 0:
            for mat in (d, u):
                mat[t] = [-x for x in mat[t]]

    # Enforce the divisibility chain by folding adjacent diagonal pairs.
    # Every fold at least halves one diagonal entry, and every zero-swap
    # moves a zero strictly towards the end, so the pass count is bounded.
    guard = 16 + n * n + n * sum(abs(d[t][t]).bit_length() for t in range(n))
    changed = True
    while changed:
        changed = False
        guard -= 1
        assert guard >= 0, "divisibility normalization failed to converge"
        for t in range(n - 1):
            a_t, b_t = d[t][t], d[t + 1][t + 1]
            if a_t == 0 and b_t != 0:
                row_op(t, t + 1, 0, 1, 1, 0)
                col_op(t, t + 1, 0, 1, 1, 0)
                changed = True
                continue
            if a_t != 0 and b_t != 0 and b_t % a_t != 0:
                col_op(t, t + 1, 1, 1, 0, 1)  # column t += column t+1
                g, x, y = _exgcd(d[t][t], d[t + 1][t])
                row_op(t, t + 1, x, y, -(d[t + 1][t] // g), d[t][t] // g)
                if d[t][t + 1] != 0:
                    q = d[t][t + 1] // d[t][t]
                    col_op(t, t + 1, 1, 0, -q, 1)  # column t+1 -= q * column t
                for s in (t, t + 1):
                    if d[s][s] < 0:
                        for mat in (d, u):
                            mat[s] = [-x2 for x2 in mat[s]]
                changed = True

    diag = tuple(d[t][t] for t in range(n))
    return SmithNormalForm(
        diagonal=diag,
        left=tuple(tuple(r) for r in u),
        right=tuple(tuple(r) for r in v),
        matrix=tuple(tuple(r) for r in m.int_rows()),
    )
