"""Table-driven finite fields GF(q), q <= 81, and small matrix groups over them.

Elements are ints 0..q-1 read as base-p digit vectors of a polynomial in a
fixed primitive element.  All arithmetic goes through numpy tables so that
whole batches of matrices can be multiplied at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import SearchSpaceExceeded
from ..lattice import prime_of

MAX_FIELD = 81
MAX_GROUP = 10 ** 7


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(ds))


def _polymulx(ds: list[int], modpoly: list[int], p: int) -> list[int]:
    # multiply by x modulo a monic polynomial given by its lower coefficients
    k = len(ds)
    top = ds[-1]
    shifted = [0] + ds[:-1]
    return [(shifted[i] - top * modpoly[i]) % p for i in range(k)]


class GF:
    """GF(q) with add/mul/neg/inv tables and a primitive element."""

    def __init__(self, q: int):
        if q > MAX_FIELD:
            raise ValueError(f"field size {q} exceeds the table limit {MAX_FIELD}")
        p = prime_of(q)
        k = 1
        while p ** k < q:
            k += 1
        self.q, self.p, self.k = q, p, k
        self.add = np.zeros((q, q), dtype=np.int64)
        for a, b in itertools.product(range(q), repeat=2):
            self.add[a, b] = _undigits([(x + y) % p for x, y in
                                        zip(_digits(a, p, k), _digits(b, p, k))], p)
        self.neg = np.array([_undigits([(-x) % p for x in _digits(a, p, k)], p)
                             for a in range(q)], dtype=np.int64)
        self.exp, self.log = self._primitive_tables()
        self.mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                self.mul[a, b] = self.exp[(self.log[a] + self.log[b]) % (q - 1)]
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = self.exp[(-self.log[a]) % (q - 1)]
        self.sub = self.add[:, self.neg]

    def _primitive_tables(self):
        p, k, q = self.p, self.k, self.q
        if k == 1:
            for g in range(1, p):
                powers = [pow(g, i, p) for i in range(p - 1)]
                if len(set(powers)) == p - 1:
                    exp = np.array(powers, dtype=np.int64)
                    break
        else:
            # first monic degree-k polynomial for which x has order q - 1
            for low in itertools.product(range(p), repeat=k):
                if low[0] == 0:
                    continue
                cur = [1] + [0] * (k - 1)
                seen = []
                for _ in range(q - 1):
                    seen.append(_undigits(cur, p))
                    cur = _polymulx(cur, list(low), p)
                if len(set(seen)) == q - 1 and _undigits(cur, p) == 1:
                    exp = np.array(seen, dtype=np.int64)
                    break
        log = np.zeros(q, dtype=np.int64)
        for i, v in enumerate(exp):
            log[v] = i
        return exp, log

    @property
    def generator(self) -> int:
        return int(self.exp[1 % (self.q - 1)])

    def root_of_unity(self, m: int) -> int:
        """A generator of the m-th roots of unity, m | q - 1."""
        return int(self.exp[((self.q - 1) // m) % (self.q - 1)])

    def from_int(self, a: int) -> int:
        """Image of the integer a under Z -> F_p -> GF(q)."""
        return a % self.p

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@lru_cache(maxsize=None)
def embedding(small: int, big: int) -> tuple[int, ...]:
    """A field embedding GF(small) -> GF(big), as a lookup table."""
    F, E = field(small), field(big)
    if F.p != E.p or E.k % F.k:
        raise ValueError(f"GF({small}) does not embed in GF({big})")
    step = (big - 1) // (small - 1)
    for j in range(1, small):
        if np.gcd(j, small - 1) != 1:
            continue
        h = int(E.exp[(step * j) % (big - 1)])
        table = [0] + [E.power(h, int(F.log[a])) for a in range(1, small)]
        if all(table[int(F.add[a, b])] == int(E.add[table[a], table[b]])
               for a in range(small) for b in range(small)):
            return tuple(table)
    raise AssertionError("no additive embedding found")


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class MatrixGroupElement:
    n: int
    q_field: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries must be n x n")
        if det_one(field(self.q_field), np.array(self.entries)) == 0:
            raise ValueError("matrix is not invertible")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


def element(q_field: int, rows, from_integers: bool = False) -> MatrixGroupElement:
    """Build an element; with from_integers, entries are integers reduced mod p."""
    F = field(q_field)
    ents = tuple(tuple(F.from_int(x) if from_integers else int(x) for x in r) for r in rows)
    return MatrixGroupElement(len(ents), q_field, ents)


def batch_matmul(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(..., n, n) x (..., n, n) products over F via tables."""
    n = a.shape[-1]
    out = None
    for k in range(n):
        term = F.mul[a[..., :, k][..., :, None], b[..., k, :][..., None, :]]
        out = term if out is None else F.add[out, term]
    return out


def det_one(F: GF, a: np.ndarray) -> int:
    return int(batch_det(F, a[None])[0])


def batch_det(F: GF, a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    total = np.zeros(a.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.ones(a.shape[:-2], dtype=np.int64)
        for i, j in enumerate(perm):
            term = F.mul[term, a[..., i, j]]
        if _sign(perm) < 0:
            term = F.neg[term]
        total = F.add[total, term]
    return total


def _sign(perm) -> int:
    s = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def batch_inverse(F: GF, a: np.ndarray) -> np.ndarray:
    """Inverse via the adjugate; fine for n <= 3."""
    n = a.shape[-1]
    d = batch_det(F, a)
    if np.any(d == 0):
        raise ValueError("singular matrix in batch")
    dinv = F.inv[d]
    out = np.zeros_like(a)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            if n == 1:
                cof = np.ones(a.shape[:-2], dtype=np.int64)
            else:
                cof = batch_det(F, a[..., rows, :][..., :, cols])
            if (i + j) % 2:
                cof = F.neg[cof]
            out[..., i, j] = F.mul[cof, dinv]
    return out


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def _span(F: GF, rows: list[np.ndarray]) -> set[tuple]:
    vecs = {tuple([0] * len(rows[0]))} if rows else set()
    for r in rows:
        new = set()
        for v in vecs:
            for c in range(F.q):
                new.add(tuple(int(F.add[x, F.mul[c, y]]) for x, y in zip(v, r)))
        vecs = new
    return vecs


@lru_cache(maxsize=None)
def gl_elements(n: int, q: int) -> np.ndarray:
    """All of GL_n(F_q) as an (N, n, n) array in a fixed order."""
    if gl_order(n, q) > MAX_GROUP:
        raise SearchSpaceExceeded(f"|GL_{n}(F_{q})| = {gl_order(n, q)} exceeds {MAX_GROUP}")
    F = field(q)
    vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(q), repeat=n)]

    def extend(prefix: list[np.ndarray]):
        if len(prefix) == n:
            yield prefix
            return
        span = _span(F, prefix) if prefix else {tuple([0] * n)}
        for v in vectors:
            if tuple(int(x) for x in v) not in span:
                yield from extend(prefix + [v])

    mats = [np.stack(rows) for rows in extend([])]
    return np.stack(mats)


def element_order(F: GF, a: np.ndarray, bound: int = 10 ** 5) -> int:
    n = a.shape[0]
    one = np.eye(n, dtype=np.int64)
    cur = a.copy()
    for k in range(1, bound):
        if np.array_equal(cur, one):
            return k
        cur = batch_matmul(F, cur, a)
    raise ValueError("element order exceeds the bound")


def mat_power(F: GF, a: np.ndarray, e: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a.copy()
    if e < 0:
        base = batch_inverse(F, a[None])[0]
        e = -e
    while e:
        if e & 1:
            out = batch_matmul(F, out, base)
        base = batch_matmul(F, base, base)
        e >>= 1
    return out
