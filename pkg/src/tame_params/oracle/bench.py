"""Brute-force oracles over small finite matrix groups.

These never touch the lattice machinery except to build the object they
are compared against: twisted conjugacy is computed by acting with every
element of GL_n(F_q), point counts by enumerating torsion points, and
common tori by scanning subalgebras of M_2(F_{q^k}).
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import factorint

from ..catalog import all_catalog_specs, gl_datum
from ..errors import HypothesisViolation, SearchSpaceExceeded, TorsionUnavailable
from ..lattice import TorsionVector, identity, matmul, matpow, matrix_order
from ..rootdatum import TameGroupSpec, pinned
from ..tori import FiniteFieldTorus, point_count
from ..twisted import canonicalize, frame
from .gf import (
    GF,
    MatrixGroupElement,
    batch_inverse,
    batch_matmul,
    element,
    element_order,
    embedding,
    field,
    gl_elements,
    mat_power,
)

SEARCH_LIMIT = 10 ** 7


def threads() -> int:
    try:
        return max(1, int(os.environ.get("TAME_PARAMS_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# twisted conjugacy


@dataclass(frozen=True)
class TwistSpec:
    """theta(h) = g h g^-1 (inner) or g h^-T g^-1 (transpose-inverse)."""

    kind: str
    matrix: MatrixGroupElement
    order: int = 2

    def __post_init__(self):
        if self.kind not in ("inner", "transpose-inverse"):
            raise ValueError("kind must be 'inner' or 'transpose-inverse'")
        if self.order < 1:
            raise ValueError("order must be positive")

    def apply(self, F: GF, h: np.ndarray) -> np.ndarray:
        g = self.matrix.array
        gi = batch_inverse(F, g[None])[0]
        inner = batch_inverse(F, h) if self.kind == "transpose-inverse" else h
        if self.kind == "transpose-inverse":
            inner = np.swapaxes(inner, -1, -2)
        return batch_matmul(F, batch_matmul(F, np.broadcast_to(g, h.shape), inner),
                            np.broadcast_to(gi, h.shape))

    def apply_inverse(self, F: GF, h: np.ndarray) -> np.ndarray:
        """theta(h)^-1 for a batch."""
        g = self.matrix.array
        gi = batch_inverse(F, g[None])[0]
        inner = np.swapaxes(h, -1, -2) if self.kind == "transpose-inverse" else batch_inverse(F, h)
        return batch_matmul(F, batch_matmul(F, np.broadcast_to(g, h.shape), inner),
                            np.broadcast_to(gi, h.shape))


def trivial_twist(n: int, q_field: int) -> TwistSpec:
    return TwistSpec("inner", element(q_field, identity(n), from_integers=True), 1)


def antidiagonal_sign(n: int) -> tuple:
    """antidiag(1, -1, 1, ...) as integer rows."""
    return tuple(tuple((-1) ** i if j == n - 1 - i else 0 for j in range(n)) for i in range(n))


def transpose_inverse_twist(n: int, q_field: int) -> TwistSpec:
    return TwistSpec("transpose-inverse", element(q_field, antidiagonal_sign(n), from_integers=True), 2)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted(sorted(v) for v in out.values())


def brute_twisted_classes(n: int, q_field: int, m: int, tw: TwistSpec) -> list[list[tuple]]:
    """Partition of diagonal m-torsion elements under s ~ h s theta(h)^-1.

    A diagonal element diag(z^a_1, ..., z^a_n), z a fixed generator of the
    m-th roots of unity, is recorded as its exponent tuple (a_1, ..., a_n).
    """
    if (q_field - 1) % m:
        raise TorsionUnavailable(f"m={m} does not divide q_field - 1 = {q_field - 1}")
    F = field(q_field)
    G = gl_elements(n, q_field)
    thinv = tw.apply_inverse(F, G)
    z = F.root_of_unity(m)
    step = (q_field - 1) // m
    tuples = list(itertools.product(range(m), repeat=n))
    uf = _UnionFind(tuples)
    off = ~np.eye(n, dtype=bool)
    for a in tuples:
        diag = np.array([F.power(z, x) for x in a], dtype=np.int64)
        hs = F.mul[G, diag[None, None, :]]
        prod = batch_matmul(F, hs, thinv)
        is_diag = np.all(prod[:, off] == 0, axis=1)
        entries = np.diagonal(prod[is_diag], axis1=1, axis2=2)
        logs = F.log[entries]
        ok = np.all(entries != 0, axis=1) & np.all(logs % step == 0, axis=1)
        for row in np.unique(logs[ok] // step, axis=0):
            uf.union(a, tuple(int(x) for x in row))
    return uf.classes()


def lattice_action(tw: TwistSpec) -> tuple:
    """The action of theta on the diagonal torus, as a matrix on exponent vectors."""
    n = tw.matrix.n
    g = tw.matrix.entries
    perm = []
    for i in range(n):
        nz = [j for j in range(n) if g[i][j] != 0]
        if len(nz) != 1:
            raise ValueError("comparison needs a monomial twisting matrix")
        perm.append(nz[0])
    sign = -1 if tw.kind == "transpose-inverse" else 1
    # (g t g^-1)_{ii} = t_{perm(i)}
    return tuple(tuple(sign if j == perm[i] else 0 for j in range(n)) for i in range(n))


def twist_group_spec(n: int, q_field: int, tw: TwistSpec) -> TameGroupSpec:
    """GL_n shell carrying theta as its inertia action; not validated, so wild cases pass."""
    d = gl_datum(n)
    theta = lattice_action(tw)
    p = field(q_field).p
    return TameGroupSpec(d, pinned(d, identity(n)), pinned(d, theta), p, q_field,
                         matrix_order(theta), name=f"GL{n}-twist")


def canonical_partition(n: int, q_field: int, m: int, tw: TwistSpec) -> list[list[tuple]]:
    """The same diagonal elements grouped by their canonical twisted class."""
    if (q_field - 1) % m:
        raise TorsionUnavailable(f"m={m} does not divide q_field - 1 = {q_field - 1}")
    spec = twist_group_spec(n, q_field, tw)
    fibers = {}
    for a in itertools.product(range(m), repeat=n):
        v = TorsionVector(tuple(Fraction(x, m) for x in a), spec.p)
        fibers.setdefault(canonicalize(spec, v).rep.coords, []).append(a)
    return sorted(sorted(v) for v in fibers.values())


# ---------------------------------------------------------------------------
# torus point counts


def brute_point_count(t: FiniteFieldTorus, n: int = 1, bound: int | None = None) -> int:
    """Count v in X_* (x) Q_{p'}/Z fixed by (q pi)^n, by enumeration.

    Every fixed point is killed by N = q^{n h} - 1 with h the order of
    pi^n.  Points are enumerated one primary component of (Z/N)^r at a
    time.  With bound < N only points whose order divides bound are seen.
    """
    if t.cochar_rank > 3:
        raise SearchSpaceExceeded("rank must be at most 3")
    pin = matpow(t.pi, n)
    h = matrix_order(pin)
    N = t.q ** (n * h) - 1
    D = N if bound is None or bound >= N else bound
    fmat = np.array([[t.q ** n * x for x in row] for row in pin], dtype=object)
    minus = (fmat - np.eye(t.cochar_rank, dtype=object))
    total = 1
    for ell, k in sorted(factorint(D).items()):
        mod = ell ** k
        if mod ** t.cochar_rank > SEARCH_LIMIT:
            raise SearchSpaceExceeded(f"component of size {mod}^{t.cochar_rank} exceeds {SEARCH_LIMIT}")
        total *= _count_kernel(minus, mod, t.cochar_rank)
    return total


def search_space(t: FiniteFieldTorus, n: int = 1) -> int:
    """Size of the largest primary block brute_point_count would enumerate."""
    h = matrix_order(matpow(t.pi, n))
    N = t.q ** (n * h) - 1
    return max((ell ** k) ** t.cochar_rank for ell, k in factorint(N).items()) if N > 1 else 1


def _count_kernel(minus, mod: int, r: int) -> int:
    a = np.array([[int(x) % mod for x in row] for row in minus], dtype=np.int64)
    if r == 0:
        return 1
    rest = np.indices((mod,) * (r - 1)).reshape(r - 1, -1) if r > 1 else np.zeros((0, 1), np.int64)
    count = 0
    for first in range(mod):
        vecs = np.vstack([np.full((1, rest.shape[1]), first, dtype=np.int64), rest])
        img = (a @ vecs) % mod
        count += int(np.count_nonzero(np.all(img == 0, axis=0)))
    return count


EXTRA_TORUS_MATRICES = (
    ((1,),), ((-1,),),
    ((1, 0), (0, 1)), ((-1, 0), (0, -1)), ((0, 1), (1, 0)), ((0, -1), (-1, 0)),
    ((0, -1), (1, 0)), ((0, -1), (1, -1)), ((1, -1), (1, 0)), ((1, 0), (0, -1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)), ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
    ((0, 1, 0), (1, 0, 0), (0, 0, 1)), ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ((0, 1, 0), (1, 0, 0), (0, 0, -1)),
)


def torus_test_set(max_qn: int = 27, max_det: int = 10 ** 4):
    """(torus, n) pairs: catalog maximal tori and a few extra, q^n <= max_qn, |det| <= max_det.

    Cases whose enumeration would exceed the search limit are left out.
    """
    pis = {}
    for q in (2, 3):
        for spec in all_catalog_specs(q):
            if spec.rank > 3 or not spec.rank:
                continue
            for w in frame(spec).omega.elements:
                pis.setdefault((spec.rank, matmul(spec.frobenius.matrix, w)), spec.name)
    for m in EXTRA_TORUS_MATRICES:
        pis.setdefault((len(m), m), "extra")
    out = []
    for (r, pi), label in sorted(pis.items()):
        for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27):
            n = 1
            while q ** n <= max_qn:
                t = FiniteFieldTorus(r, pi, q)
                if point_count(t, n) <= max_det and search_space(t, n) <= SEARCH_LIMIT:
                    out.append((t, n, label))
                n += 1
    return out


# ---------------------------------------------------------------------------
# common tori


@dataclass(frozen=True)
class TorusSearchResult:
    status: str                     # "found" or "inconclusive"
    k: int | None = None
    generator: tuple | None = None  # A with the torus = centralizer of A in GL_2(F_{q^k})
    split: bool | None = None
    scanned: int = 0
    notes: tuple = dc_field(default=())

    def to_json(self) -> dict:
        return {"status": self.status, "k": self.k,
                "generator": [list(r) for r in self.generator] if self.generator else None,
                "split": self.split, "scanned": self.scanned, "notes": list(self.notes)}


def _is_scalar(a: np.ndarray) -> bool:
    return a[0, 1] == 0 and a[1, 0] == 0 and a[0, 0] == a[1, 1]


def _equal_mod_scalars(F: GF, a: np.ndarray, b: np.ndarray) -> bool:
    # a = c b for some nonzero c
    idx = np.argwhere(b != 0)[0]
    c = F.mul[a[tuple(idx)], F.inv[b[tuple(idx)]]]
    return c != 0 and np.array_equal(F.mul[c, b], a)


def _conjugate(F: GF, sigma, a: np.ndarray) -> np.ndarray:
    """sigma(a) for a matrix (inner) or a TwistSpec (possibly outer)."""
    if isinstance(sigma, TwistSpec):
        return sigma.apply(F, a[None])[0]
    s = sigma
    return batch_matmul(F, batch_matmul(F, s[None], a[None]), batch_inverse(F, s[None]))[0]


def check_metacyclic(sigma, tau: MatrixGroupElement, q: int | None = None) -> None:
    """sigma tau sigma^-1 = tau^q modulo scalars, and tau of order prime to p."""
    F = field(tau.q_field)
    q = tau.q_field if q is None else q
    t = tau.array
    if gcd(element_order(F, t), F.p) != 1:
        raise HypothesisViolation("tau has order divisible by p")
    s = sigma if isinstance(sigma, TwistSpec) else sigma.array
    lhs = _conjugate(F, s, t)
    if not _equal_mod_scalars(F, lhs, mat_power(F, t, q)):
        raise HypothesisViolation("sigma tau sigma^-1 != tau^q (mod scalars)")


def _candidate_generators(E: GF):
    """A = [[0, b], [c, e]] for (b, c, e) in P^2(E), last nonzero coordinate 1, lex order."""
    pts = []
    for b, c, e in itertools.product(range(E.q), repeat=3):
        v = (b, c, e)
        nz = [x for x in v if x]
        if nz and nz[-1] == 1:
            pts.append(v)
    return pts


def _regular_semisimple(E: GF, b: int, c: int, e: int) -> bool:
    # char poly x^2 - e x - bc separable
    if E.p == 2:
        return e != 0
    disc = E.add[E.mul[e, e], E.mul[E.from_int(4), E.mul[b, c]]]
    return disc != 0


def _splits(E: GF, b: int, c: int, e: int) -> bool:
    bc = E.mul[b, c]
    return any(E.add[E.sub[E.mul[x, x], E.mul[e, x]], E.neg[bc]] == 0 for x in range(E.q))


def _in_span(E: GF, x: np.ndarray, a: np.ndarray) -> bool:
    """x in span(I, a) where a[0,0] = 0 and a is not scalar."""
    alpha = x[0, 0]
    y = x.copy()
    y[0, 0] = E.sub[y[0, 0], alpha]
    y[1, 1] = E.sub[y[1, 1], alpha]
    if not y.any():
        return True
    return _equal_mod_scalars(E, y, a)


def search_common_torus(n: int, q_field: int, sigma, tau: MatrixGroupElement, k_max: int = 3,
                        q: int | None = None) -> TorusSearchResult:
    """First maximal torus of GL_2(F_{q^k}), k <= k_max, stable under sigma and tau.

    Tori are the unit groups of the subalgebras span(I, A) for regular
    semisimple A, which is exactly the set of centralizers of regular
    semisimple elements; each appears once in the scan.
    """
    if n != 2:
        raise ValueError("the common-torus scan is implemented for n = 2")
    check_metacyclic(sigma, tau, q)
    scanned = 0
    notes = []
    for k in range(1, k_max + 1):
        Q = q_field ** k
        if Q > 81:
            notes.append(f"k={k}: GF({Q}) exceeds the table limit; stopped")
            break
        E = field(Q)
        emb = np.array(embedding(q_field, Q), dtype=np.int64)
        t = emb[tau.array]
        if isinstance(sigma, TwistSpec):
            s = TwistSpec(sigma.kind, MatrixGroupElement(2, Q, tuple(tuple(int(emb[x]) for x in r)
                                                                     for r in sigma.matrix.entries)),
                          sigma.order)
        else:
            s = emb[sigma.array]
        for b, c, e in _candidate_generators(E):
            if not _regular_semisimple(E, b, c, e):
                continue
            scanned += 1
            a = np.array([[0, b], [c, e]], dtype=np.int64)
            if isinstance(s, TwistSpec):
                # theta(K[A]^*) = K[g A^T g^-1]^*
                g = s.matrix.array
                sa = batch_matmul(E, batch_matmul(E, g[None], a.T[None]),
                                  batch_inverse(E, g[None]))[0]
            else:
                sa = _conjugate(E, s, a)
            if not _in_span(E, sa, a):
                continue
            if not _in_span(E, _conjugate(E, t, a), a):
                continue
            return TorusSearchResult("found", k, tuple(tuple(int(x) for x in r) for r in a),
                                     bool(_splits(E, b, c, e)), scanned, tuple(notes))
    return TorusSearchResult("inconclusive", None, None, None, scanned, tuple(notes))


def metacyclic_pairs(q_field: int, q: int | None = None) -> list[tuple[MatrixGroupElement, MatrixGroupElement]]:
    """Every (sigma, tau) in GL_2(F_q) of orders prime to p with sigma tau sigma^-1 = tau^q.

    Both elements have p'-order, so the group they generate acts completely
    reducibly; this is how the hypothesis of the common-torus theorem is met.
    """
    F = field(q_field)
    q = q_field if q is None else q
    G = gl_elements(2, q_field)
    orders = [element_order(F, g) for g in G]
    good = [i for i, o in enumerate(orders) if gcd(o, F.p) == 1]
    gp = G[good]
    inv = batch_inverse(F, gp)
    powers = np.stack([mat_power(F, g, q) for g in gp])
    out = []
    for i, si in zip(good, range(len(good))):
        conj = batch_matmul(F, batch_matmul(F, np.broadcast_to(gp[si], gp.shape), gp),
                            np.broadcast_to(inv[si], gp.shape))
        hits = np.all(conj == powers, axis=(1, 2))
        for j in np.nonzero(hits)[0]:
            out.append((MatrixGroupElement(2, q_field, tuple(map(tuple, G[i].tolist()))),
                        MatrixGroupElement(2, q_field, tuple(map(tuple, gp[j].tolist())))))
    return out


def sample_pairs(q_field: int, count: int, seed: int = 0):
    pairs = metacyclic_pairs(q_field)
    rng = random.Random(seed)
    if count >= len(pairs):
        return pairs
    return [pairs[i] for i in sorted(rng.sample(range(len(pairs)), count))]


# ---------------------------------------------------------------------------
# reports


def report(config: dict, results: list, mismatches: list, start: float) -> dict:
    return {"config": config, "results": results, "mismatches": mismatches,
            "elapsed_ms": int(round((time.perf_counter() - start) * 1000))}


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def verify_twisted(qfields=(3, 4, 9), n: int = 2) -> dict:
    start = time.perf_counter()
    results, mismatches = [], []
    for q in qfields:
        for label, tw in (("trivial", trivial_twist(n, q)),
                          ("transpose-inverse", transpose_inverse_twist(n, q))):
            for m in _divisors(q - 1):
                brute = brute_twisted_classes(n, q, m, tw)
                param = canonical_partition(n, q, m, tw)
                row = {"n": n, "q_field": q, "theta": label, "m": m,
                       "brute_classes": len(brute), "param_classes": len(param),
                       "match": brute == param}
                results.append(row)
                if not row["match"]:
                    mismatches.append(row)
    return report({"check": "twisted", "n": n, "qfields": list(qfields)}, results, mismatches, start)


def verify_tori(max_qn: int = 27, max_det: int = 10 ** 4) -> dict:
    start = time.perf_counter()
    results, mismatches = [], []
    for t, n, label in torus_test_set(max_qn, max_det):
        row = {"source": label, "rank": t.cochar_rank, "pi": [list(r) for r in t.pi],
               "q": t.q, "n": n, "formula": point_count(t, n)}
        try:
            row["brute"] = brute_point_count(t, n)
            row["match"] = row["brute"] == row["formula"]
        except SearchSpaceExceeded as exc:
            row["brute"] = None
            row["match"] = None
            row["skipped"] = str(exc)
        results.append(row)
        if row["match"] is False:
            mismatches.append(row)
    return report({"check": "tori", "max_qn": max_qn, "max_det": max_det}, results, mismatches, start)


def verify_metacyclic(qfields=(3, 4), kmax: int = 3, seed: int = 0, per_field: int = 20) -> dict:
    """Inconclusive searches are reported but are not mismatches."""
    start = time.perf_counter()
    results, mismatches = [], []
    for q in qfields:
        for sigma, tau in sample_pairs(q, per_field, seed):
            res = search_common_torus(2, q, sigma, tau, kmax)
            row = {"q_field": q, "sigma": [list(r) for r in sigma.entries],
                   "tau": [list(r) for r in tau.entries], **res.to_json()}
            results.append(row)
    return report({"check": "metacyclic", "qfields": list(qfields), "kmax": kmax, "seed": seed,
                   "per_field": per_field}, results, mismatches, start)


def verify_all(qfields=(3, 4, 9), kmax: int = 3, seed: int = 0) -> dict:
    start = time.perf_counter()
    meta_fields = tuple(q for q in qfields if q in (3, 4)) or (3, 4)
    jobs = [("twisted", lambda: verify_twisted(qfields)),
            ("tori", verify_tori),
            ("metacyclic", lambda: verify_metacyclic(meta_fields, kmax, seed))]
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        futures = [(name, pool.submit(fn)) for name, fn in jobs]
        parts = [(name, f.result()) for name, f in futures]
    results = [{"check": name, **{k: v for k, v in rep.items() if k != "config"},
                "config": rep["config"]} for name, rep in parts]
    mismatches = [m for _, rep in parts for m in rep["mismatches"]]
    return report({"check": "all", "qfields": list(qfields), "kmax": kmax, "seed": seed},
                  results, mismatches, start)


__all__ = [
    "TwistSpec", "trivial_twist", "transpose_inverse_twist", "brute_twisted_classes",
    "canonical_partition", "twist_group_spec", "brute_point_count", "torus_test_set",
    "TorusSearchResult", "search_common_torus", "check_metacyclic", "metacyclic_pairs",
    "sample_pairs", "verify_twisted", "verify_tori", "verify_metacyclic", "verify_all",
    "threads", "report", "search_space", "MatrixGroupElement",
]
