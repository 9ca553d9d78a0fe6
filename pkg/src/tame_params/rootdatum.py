"""Based root data, Weyl groups, pinned automorphisms and tame Galois data.

Vectors of the character lattice X^* are integer column vectors; a lattice
map is a square matrix acting on the left.  A matrix ``a`` on X^* acts on
the cocharacter lattice X_* through its inverse transpose, which keeps the
pairing <x, y> = sum(x_i y_i) invariant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Sequence

from .errors import (
    BadPairing,
    Explosion,
    MetacyclicViolation,
    NotPinned,
    WildRamification,
)
from .lattice import (
    Matrix,
    Vector,
    as_matrix,
    det,
    identity,
    inverse_unimodular,
    kernel_basis,
    matmul,
    matpow,
    matrix_order,
    matvec,
    prime_of,
    rational_inverse,
    transpose,
)

WEYL_BOUND = 10**6


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def _neg(v: Vector) -> Vector:
    return tuple(-x for x in v)


def reflection_matrix(root: Vector, coroot: Vector) -> Matrix:
    """s(x) = x - <x, coroot> root, as a matrix on X^*."""
    n = len(root)
    return tuple(tuple(int(i == j) - root[i] * coroot[j] for j in range(n)) for i in range(n))


def dual_action(a: Matrix) -> Matrix:
    """The matrix through which ``a`` acts on the dual lattice."""
    return transpose(inverse_unimodular(a))


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple_indices: tuple[int, ...]

    @property
    def simple_roots(self) -> tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.simple_indices)

    @property
    def simple_coroots(self) -> tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.simple_indices)

    @cached_property
    def coroot_of(self) -> dict[Vector, Vector]:
        return dict(zip(self.roots, self.coroots))

    @cached_property
    def simple_reflections(self) -> tuple[Matrix, ...]:
        return tuple(reflection_matrix(a, c)
                     for a, c in zip(self.simple_roots, self.simple_coroots))

    @cached_property
    def cartan_matrix(self) -> Matrix | None:
        """a_ij = <alpha_j, alpha_i^vee> on the simple system."""
        if not self.simple_indices:
            return None
        return tuple(tuple(pairing(aj, ci) for aj in self.simple_roots)
                     for ci in self.simple_coroots)

    def simple_coefficients(self, root: Vector) -> tuple[Fraction, ...]:
        """Coefficients of root in the basis of simple roots."""
        a = self.cartan_matrix
        b = [pairing(root, c) for c in self.simple_coroots]
        inv = rational_inverse(a)
        return matvec(inv, [Fraction(x) for x in b])

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        out = []
        for r in self.roots:
            coeffs = self.simple_coefficients(r)
            if all(c >= 0 for c in coeffs):
                out.append(r)
        return tuple(out)

    def is_positive(self, root: Vector) -> bool:
        return root in self._positive_set

    @cached_property
    def _positive_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    @cached_property
    def orthogonal_lattice(self) -> Matrix | None:
        """Columns spanning X^0 = {x : <x, a^vee> = 0 for every coroot}."""
        if not self.coroots:
            return identity(self.rank)
        return kernel_basis(self.coroots)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "simple": list(self.simple_indices),
        }


def datum_from_simple(rank: int, simple_roots: Sequence[Sequence[int]],
                      simple_coroots: Sequence[Sequence[int]]) -> BasedRootDatum:
    """Close a simple system under its Weyl group.

    Roots are ordered positives first (by height, then simple
    coefficients), followed by their negatives in the same order.
    """
    sr = tuple(tuple(int(x) for x in r) for r in simple_roots)
    sc = tuple(tuple(int(x) for x in c) for c in simple_coroots)
    if not sr:
        return BasedRootDatum(rank, (), (), ())
    for a, c in zip(sr, sc):
        if len(a) != rank or len(c) != rank:
            raise BadPairing("root or coroot has the wrong length")
        if pairing(a, c) != 2:
            raise BadPairing(f"<{a}, {c}> != 2")
    refl = [reflection_matrix(a, c) for a, c in zip(sr, sc)]
    coroot_of = dict(zip(sr, sc))
    frontier = list(sr)
    while frontier:
        nxt = []
        for r in frontier:
            cr = coroot_of[r]
            for s, a, c in zip(refl, sr, sc):
                r2 = matvec(s, r)
                if r2 not in coroot_of:
                    # s acts on X_* by x -> x - <a, x> c
                    coroot_of[r2] = tuple(x - pairing(a, cr) * y for x, y in zip(cr, c))
                    nxt.append(r2)
        frontier = nxt
        if len(coroot_of) > WEYL_BOUND:
            raise Explosion("root system is infinite")
    tmp = BasedRootDatum(rank, sr, sc, tuple(range(len(sr))))
    pos = []
    for r in coroot_of:
        coeffs = tmp.simple_coefficients(r)
        if any(x.denominator != 1 for x in coeffs):
            raise BadPairing(f"root {r} is not an integral combination of simple roots")
        if all(x >= 0 for x in coeffs):
            pos.append((sum(coeffs), tuple(coeffs), r))
        elif not all(x <= 0 for x in coeffs):
            raise BadPairing(f"root {r} has mixed-sign simple coefficients")
    pos.sort()
    positives = [r for _, _, r in pos]
    roots = tuple(positives) + tuple(_neg(r) for r in positives)
    if set(roots) != set(coroot_of):
        raise BadPairing("roots are not closed under negation")
    coroots = tuple(coroot_of[r] for r in roots)
    simple = tuple(roots.index(r) for r in sr)
    return BasedRootDatum(rank, roots, coroots, simple)


def datum_from_cartan(cartan: Sequence[Sequence[int]]) -> BasedRootDatum:
    """Simply connected datum with X^* the weight lattice.

    With a_ij = <alpha_j, alpha_i^vee>, the simple root alpha_j has
    fundamental-weight coordinates given by column j, and the simple
    coroots are the dual basis.
    """
    a = as_matrix(cartan)
    n = len(a)
    roots = [tuple(a[i][j] for i in range(n)) for j in range(n)]
    coroots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return datum_from_simple(n, roots, coroots)


def torus_datum(rank: int) -> BasedRootDatum:
    return BasedRootDatum(rank, (), (), ())


def product_datum(*parts: BasedRootDatum) -> BasedRootDatum:
    rank = sum(d.rank for d in parts)
    sr, sc = [], []
    offset = 0
    for d in parts:
        for a, c in zip(d.simple_roots, d.simple_coroots):
            pad = (0,) * offset, (0,) * (rank - offset - d.rank)
            sr.append(pad[0] + a + pad[1])
            sc.append(pad[0] + c + pad[1])
        offset += d.rank
    return datum_from_simple(rank, sr, sc)


def validate_datum(d: BasedRootDatum) -> None:
    if len(d.roots) != len(d.coroots):
        raise BadPairing("roots and coroots are not aligned")
    for a, c in zip(d.roots, d.coroots):
        if len(a) != d.rank or len(c) != d.rank:
            raise BadPairing("root or coroot has the wrong length")
        if pairing(a, c) != 2:
            raise BadPairing(f"<{a}, {c}> != 2")
    roots = set(d.roots)
    if len(roots) != len(d.roots):
        raise BadPairing("duplicate roots")
    for a, c in zip(d.roots, d.coroots):
        s = reflection_matrix(a, c)
        for b, bc in zip(d.roots, d.coroots):
            b2 = matvec(s, b)
            if b2 not in roots:
                raise BadPairing(f"reflection in {a} does not permute the roots")
            bc2 = tuple(x - pairing(a, bc) * y for x, y in zip(bc, c))
            if d.coroot_of[b2] != bc2:
                raise BadPairing(f"reflection in {a} does not permute the coroots")
    if d.simple_indices:
        if abs(det(d.cartan_matrix)) == 0:
            raise BadPairing("simple roots are linearly dependent")
        for r in d.roots:
            coeffs = d.simple_coefficients(r)
            if any(x.denominator != 1 for x in coeffs):
                raise BadPairing(f"root {r} is not in the simple root lattice")
            if not (all(x >= 0 for x in coeffs) or all(x <= 0 for x in coeffs)):
                raise BadPairing(f"root {r} has mixed-sign coefficients")
        recon = [sum(c * s[i] for c, s in zip(d.simple_coefficients(r), d.simple_roots))
                 for r in d.roots for i in range(d.rank)]
        flat = [x for r in d.roots for x in r]
        if recon != flat:
            raise BadPairing("a root is outside the span of the simple roots")
    weyl_group(d)


def dual(d: BasedRootDatum) -> BasedRootDatum:
    """Swap the roles of roots and coroots (and of X^* and X_*)."""
    return BasedRootDatum(d.rank, d.coroots, d.roots, d.simple_indices)


# ---------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True)
class WeylGroup:
    """Elements listed by word length, then lexicographically by word.

    ``words[k]`` is the lexicographically least reduced word of
    ``elements[k]``, as 0-based indices into the simple reflections;
    the matrix of a word (i1, ..., ik) is s_i1 * ... * s_ik.
    """

    elements: tuple[Matrix, ...]
    words: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[Matrix, int]:
        return {m: k for k, m in enumerate(self.elements)}

    def __contains__(self, m) -> bool:
        return m in self.index

    def word_of(self, m: Matrix) -> tuple[int, ...]:
        return self.words[self.index[m]]

    @property
    def identity(self) -> Matrix:
        return self.elements[0]

    @cached_property
    def longest(self) -> Matrix:
        return self.elements[-1]


@lru_cache(maxsize=None)
def weyl_group(d: BasedRootDatum, bound: int = WEYL_BOUND) -> WeylGroup:
    one = identity(d.rank)
    found = {one: ()}
    level = [one]
    while level:
        nxt = []
        for m in level:
            for i, s in enumerate(d.simple_reflections):
                m2 = matmul(m, s)
                if m2 not in found:
                    found[m2] = found[m] + (i,)
                    nxt.append(m2)
                    if len(found) > bound:
                        raise Explosion(f"Weyl group order exceeds {bound}")
        nxt.sort(key=lambda m: found[m])
        level = nxt
    ordered = sorted(found.items(), key=lambda kv: (len(kv[1]), kv[1]))
    return WeylGroup(tuple(m for m, _ in ordered), tuple(w for _, w in ordered))


def word_matrix(d: BasedRootDatum, word: Sequence[int]) -> Matrix:
    m = identity(d.rank)
    for i in word:
        m = matmul(m, d.simple_reflections[i])
    return m


def parse_word(text: str) -> tuple[int, ...]:
    """'s1 s2' -> (0, 1); 'e', 'id' or '' -> ()."""
    out = []
    for tok in text.replace(",", " ").replace("*", " ").split():
        if tok in ("e", "id", "1"):
            continue
        if not tok.startswith("s") or not tok[1:].isdigit():
            raise ValueError(f"bad Weyl word token {tok!r}")
        out.append(int(tok[1:]) - 1)
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    return " ".join(f"s{i + 1}" for i in word) or "e"


# ---------------------------------------------------------------------------
# pinned automorphisms


@dataclass(frozen=True)
class PinnedAutomorphism:
    matrix: Matrix
    simple_permutation: tuple[int, ...]

    @property
    def order(self) -> int:
        return matrix_order(self.matrix)


def pinned(d: BasedRootDatum, matrix: Sequence[Sequence[int]]) -> PinnedAutomorphism:
    """Wrap a lattice automorphism, checking that it pins d."""
    m = as_matrix(matrix)
    if len(m) != d.rank or len(m[0]) != d.rank:
        raise NotPinned("automorphism has the wrong size")
    if abs(det(m)) != 1:
        raise NotPinned("automorphism is not invertible over Z")
    mdual = dual_action(m)
    for a, c in zip(d.roots, d.coroots):
        a2 = matvec(m, a)
        if d.coroot_of.get(a2) != matvec(mdual, c):
            raise NotPinned("automorphism does not preserve the root datum")
    perm = []
    simple = d.simple_roots
    for a in simple:
        a2 = matvec(m, a)
        if a2 not in simple:
            raise NotPinned("automorphism does not permute the simple roots")
        perm.append(simple.index(a2))
    matrix_order(m)
    return PinnedAutomorphism(m, tuple(perm))


def fixed_weyl_subgroup(d: BasedRootDatum, a: PinnedAutomorphism) -> WeylGroup:
    """Weyl elements commuting with a (the group Omega^theta)."""
    W = weyl_group(d)
    am = a.matrix
    keep = [k for k, w in enumerate(W.elements) if matmul(am, w) == matmul(w, am)]
    return WeylGroup(tuple(W.elements[k] for k in keep), tuple(W.words[k] for k in keep))


# ---------------------------------------------------------------------------
# tame groups


@dataclass(frozen=True)
class TameGroupSpec:
    """Combinatorial shell of a quasi-split tame group and its L-group.

    ``datum`` is the based root datum of G on X^*(T) = X_*(T^); the
    frobenius and inertia automorphisms are the images of a Frobenius
    and of a tame inertia generator, as matrices on that lattice.
    """

    datum: BasedRootDatum
    frobenius: PinnedAutomorphism
    inertia: PinnedAutomorphism
    p: int
    q: int
    e: int
    name: str = field(default="custom", compare=False)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def is_unramified(self) -> bool:
        return self.inertia.matrix == identity(self.rank)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.datum.rank,
            "roots": [list(r) for r in self.datum.roots],
            "coroots": [list(c) for c in self.datum.coroots],
            "simple": list(self.datum.simple_indices),
            "frobenius_matrix": [list(r) for r in self.frobenius.matrix],
            "inertia_matrix": [list(r) for r in self.inertia.matrix],
            "p": self.p,
            "q": self.q,
            "e": self.e,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def make_spec(datum: BasedRootDatum, frobenius, inertia, q: int, name: str = "custom",
              e: int | None = None, p: int | None = None) -> TameGroupSpec:
    fr = frobenius if isinstance(frobenius, PinnedAutomorphism) else pinned(datum, frobenius)
    inr = inertia if isinstance(inertia, PinnedAutomorphism) else pinned(datum, inertia)
    if p is None:
        p = prime_of(q)
    if e is None:
        e = inr.order
    return TameGroupSpec(datum, fr, inr, p, q, e, name)


def spec_from_json(obj: dict) -> TameGroupSpec:
    rank = int(obj["rank"])
    roots = tuple(tuple(int(x) for x in r) for r in obj["roots"])
    coroots = tuple(tuple(int(x) for x in c) for c in obj["coroots"])
    simple = tuple(int(i) for i in obj["simple"])
    d = BasedRootDatum(rank, roots, coroots, simple)
    validate_datum(d)
    return make_spec(d, obj["frobenius_matrix"], obj["inertia_matrix"], int(obj["q"]),
                     name=obj.get("name", "custom"), e=int(obj["e"]), p=int(obj["p"]))


def validate(spec: TameGroupSpec) -> None:
    """Check every structural invariant of a TameGroupSpec, raising on failure."""
    d = spec.datum
    validate_datum(d)
    pinned(d, spec.frobenius.matrix)
    pinned(d, spec.inertia.matrix)
    if prime_of(spec.q) != spec.p:
        raise MetacyclicViolation(f"q={spec.q} is not a power of p={spec.p}")
    if spec.e != spec.inertia.order:
        raise WildRamification(f"e={spec.e} differs from the order of the inertia action")
    if gcd(spec.e, spec.p) != 1:
        raise WildRamification(f"gcd(e={spec.e}, p={spec.p}) != 1")
    s = spec.frobenius.matrix
    lhs = matmul(matmul(s, spec.inertia.matrix), inverse_unimodular(s))
    if lhs != matpow(spec.inertia.matrix, spec.q):
        raise MetacyclicViolation("frobenius * inertia * frobenius^-1 != inertia^q")


def galois_image(spec: TameGroupSpec) -> tuple[Matrix, ...]:
    """The finite group generated by the frobenius and inertia matrices."""
    gens = [spec.frobenius.matrix, spec.inertia.matrix]
    one = identity(spec.rank)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                g2 = matmul(h, g)
                if g2 not in seen:
                    seen.add(g2)
                    nxt.append(g2)
        frontier = nxt
    return tuple(sorted(seen))


def derived_simply_connected(d: BasedRootDatum) -> bool:
    """Whether pairing with the simple coroots maps X^* onto Z^Delta."""
    if not d.simple_indices:
        return True
    from .lattice import smith_normal_form
    snf = smith_normal_form(d.simple_coroots)
    return all(f == 1 for f in snf.invariant_factors)
