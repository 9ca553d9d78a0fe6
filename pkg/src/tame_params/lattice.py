"""Exact arithmetic on finitely generated free abelian groups.

Matrices are tuples of row tuples of Python ints, so entries are arbitrary
precision and values are hashable.  Everything here is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    InfiniteOrder,
    NonInvertible,
    PDivisibleDeterminant,
    SingularMatrix,
)

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]

DEFAULT_ORDER_BOUND = 10**4


# ---------------------------------------------------------------------------
# small matrix toolkit


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if not m or not m[0]:
        raise ValueError("matrix must be nonempty")
    if any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def scalar_minus(c: int, a: Matrix) -> Matrix:
    """The matrix c*I - a."""
    n = len(a)
    return tuple(tuple((c if i == j else 0) - a[i][j] for j in range(n)) for i in range(n))


def matpow(a: Matrix, k: int) -> Matrix:
    result = identity(len(a))
    base = a
    if k < 0:
        base = inverse_unimodular(a)
        k = -k
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def rational_inverse(a: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def inverse_unimodular(a: Matrix) -> Matrix:
    inv = rational_inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise NonInvertible("matrix is not invertible over the integers")
    return tuple(tuple(int(x) for x in row) for row in inv)


def matrix_order(a: Matrix, bound: int = DEFAULT_ORDER_BOUND) -> int:
    """Multiplicative order of a finite-order integer matrix."""
    one = identity(len(a))
    cur = a
    for k in range(1, bound + 1):
        if cur == one:
            return k
        cur = matmul(cur, a)
    raise InfiniteOrder(f"order exceeds {bound}")


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    U: Matrix
    D: Matrix
    V: Matrix
    invariant_factors: tuple[int, ...]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SnfResult:
    """Return U, D, V with U*A*V = D diagonal and unimodular U, V.

    Pivots are chosen as the entry of smallest nonzero absolute value,
    first in row-major order, so the transforms are reproducible.
    """
    a = as_matrix(a)
    m, n = len(a), len(a[0])
    d = [list(r) for r in a]
    u = [list(r) for r in identity(m)]
    v = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = abs(d[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            piv = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // piv))
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // piv))
            if any(d[i][t] for i in range(t + 1, m)) or any(d[t][j] for j in range(t + 1, n)):
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        if d[t][t] == 0:
            break

    factors = tuple(d[i][i] for i in range(min(m, n)))
    return SnfResult(as_matrix(u), as_matrix(d), as_matrix(v), factors)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FiniteAbelianPresentation:
    """Z^n / image(M) written as (+) Z/d_i (+) Z^free_rank.

    ``basis_change`` sends ambient coordinates x to presentation
    coordinates U*x.  ``row_moduli[i]`` is the modulus of coordinate i
    (0 means free, 1 means the coordinate is always zero).
    """

    invariant_factors: tuple[int, ...]
    free_rank: int
    basis_change: Matrix
    row_moduli: tuple[int, ...]

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def free_rows(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.row_moduli) if d == 0)

    @property
    def tf_projection(self) -> Matrix | None:
        """Rows of basis_change giving the map onto the torsion-free quotient."""
        rows = self.free_rows
        if not rows:
            return None
        return tuple(self.basis_change[i] for i in rows)

    @property
    def tf_section(self) -> Matrix | None:
        """An integral right inverse of tf_projection (ambient x free)."""
        rows = self.free_rows
        if not rows:
            return None
        inv = inverse_unimodular(self.basis_change)
        return tuple(tuple(inv[r][c] for c in rows) for r in range(len(inv)))

    def coordinates(self, x: Sequence[int]) -> Vector:
        """Canonical presentation coordinates of the class of x."""
        y = matvec(self.basis_change, x)
        return tuple(c % d if d else c for c, d in zip(y, self.row_moduli))

    def elements(self) -> list[Vector]:
        """Ambient representatives of every element (finite groups only)."""
        if self.free_rank:
            raise ValueError("group is infinite")
        inv = inverse_unimodular(self.basis_change)
        out = []
        for coords in _box(self.row_moduli):
            out.append(matvec(inv, coords))
        return out


def _box(moduli: Sequence[int]):
    if not moduli:
        yield ()
        return
    for head in range(moduli[0]):
        for tail in _box(moduli[1:]):
            yield (head,) + tail


def cokernel_structure(m: Sequence[Sequence[int]]) -> FiniteAbelianPresentation:
    """Structure of Z^rows / M Z^cols."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    rows = len(m)
    moduli = tuple(snf.invariant_factors[i] if i < len(snf.invariant_factors) else 0
                   for i in range(rows))
    factors = tuple(d for d in moduli if d > 1)
    free = sum(1 for d in moduli if d == 0)
    return FiniteAbelianPresentation(factors, free, snf.U, moduli)


def coinvariants(rank: int, theta: Sequence[Sequence[int]],
                 order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteAbelianPresentation:
    """Presentation of X/(1 - theta)X for X = Z^rank."""
    theta = as_matrix(theta)
    if len(theta) != rank or len(theta[0]) != rank:
        raise ValueError("theta has the wrong shape")
    if abs(det(theta)) != 1:
        raise NonInvertible("theta is not invertible over Z")
    matrix_order(theta, order_bound)
    return cokernel_structure(scalar_minus(1, theta))


def kernel_basis(m: Sequence[Sequence[int]]) -> Matrix | None:
    """Columns spanning the saturated integer kernel of m (None if zero)."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    n = len(m[0])
    nonzero = sum(1 for d in snf.invariant_factors if d)
    cols = list(range(nonzero, n))
    if not cols:
        return None
    return tuple(tuple(snf.V[r][c] for c in cols) for r in range(n))


def solve_integral(m: Sequence[Sequence[int]], b: Sequence[int]) -> Vector | None:
    """Some integer x with m x = b, or None if none exists."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    c = matvec(snf.U, b)
    y = []
    for i in range(len(m[0])):
        d = snf.invariant_factors[i] if i < len(snf.invariant_factors) else 0
        ci = c[i] if i < len(c) else 0
        if d == 0:
            if ci != 0:
                return None
            y.append(0)
        else:
            if ci % d:
                return None
            y.append(ci // d)
    if any(c[i] for i in range(len(m[0]), len(c))):
        return None
    return matvec(snf.V, y)


def in_lattice(columns: Matrix | None, x: Sequence[int]) -> bool:
    """Whether x lies in the Z-span of the given columns."""
    if columns is None:
        return not any(x)
    return solve_integral(columns, x) is not None


# ---------------------------------------------------------------------------
# elements of L tensor Q_{p'}/Z


@dataclass(frozen=True)
class TorsionVector:
    """A point of Z^dim (x) Q_{p'}/Z with coordinates reduced into [0, 1)."""

    coords: tuple[Fraction, ...]
    p: int

    def __post_init__(self):
        reduced = tuple(Fraction(c) % 1 for c in self.coords)
        for c in reduced:
            if c.denominator % self.p == 0:
                raise PDivisibleDeterminant(
                    f"denominator {c.denominator} is divisible by p={self.p}")
        object.__setattr__(self, "coords", reduced)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def level(self) -> int:
        return lcm(1, *(c.denominator for c in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def torsion_vector(coords: Iterable, p: int) -> TorsionVector:
    return TorsionVector(tuple(Fraction(c) for c in coords), p)


def apply_matrix(a: Sequence[Sequence[int]], v: TorsionVector) -> TorsionVector:
    return TorsionVector(matvec(a, v.coords), v.p)


def scale(c: int, v: TorsionVector) -> TorsionVector:
    return TorsionVector(tuple(c * x for x in v.coords), v.p)


def torsion_solve(m: Sequence[Sequence[int]], mu: Sequence[int], p: int) -> TorsionVector:
    """The unique v in [0,1)^n with M v = mu mod Z^n."""
    m = as_matrix(m)
    dm = det(m)
    if dm == 0:
        raise SingularMatrix("matrix is singular")
    if dm % p == 0:
        raise PDivisibleDeterminant(f"p={p} divides det={dm}")
    inv = rational_inverse(m)
    return TorsionVector(matvec(inv, [Fraction(x) for x in mu]), p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_of(q: int) -> int:
    """The prime p with q a power of p."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r = q
    while r % p == 0:
        r //= p
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
