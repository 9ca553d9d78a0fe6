"""Tori over finite fields as lattices with a Frobenius.

A torus is a cocharacter lattice X_* = Z^r with a finite-order matrix pi.
Characters live on X^* with the contragredient action pi^* = pi^{-T};
for the permutation-type tori of the catalog the two coincide.  A
character mu in X^*/(q - pi^*)X^* is keyed by its avatar, the unique v
in X^* (x) Q_{p'}/Z with (q - pi^*) v = mu mod Z^r; the avatar forgets
the F_q-structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import RankMismatch
from .lattice import (
    FiniteAbelianPresentation,
    Matrix,
    TorsionVector,
    Vector,
    as_matrix,
    cokernel_structure,
    det,
    matmul,
    matpow,
    matrix_order,
    matvec,
    prime_of,
    scalar_minus,
    torsion_solve,
)
from .rootdatum import dual_action


@dataclass(frozen=True)
class FiniteFieldTorus:
    cochar_rank: int
    pi: Matrix
    q: int

    def __post_init__(self):
        object.__setattr__(self, "pi", as_matrix(self.pi))
        if len(self.pi) != self.cochar_rank:
            raise ValueError("pi has the wrong size")
        matrix_order(self.pi)
        prime_of(self.q)

    @property
    def p(self) -> int:
        return prime_of(self.q)

    @cached_property
    def pi_dual(self) -> Matrix:
        return dual_action(self.pi)

    def extend(self, n: int) -> "FiniteFieldTorus":
        """The same torus over F_{q^n}."""
        return FiniteFieldTorus(self.cochar_rank, matpow(self.pi, n), self.q ** n)


def point_count(t: FiniteFieldTorus, n: int = 1) -> int:
    """|T(F_{q^n})| = |det(q^n - pi^n)|."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return abs(det(scalar_minus(t.q ** n, matpow(t.pi, n))))


def character_group(t: FiniteFieldTorus) -> FiniteAbelianPresentation:
    return cokernel_structure(scalar_minus(t.q, t.pi_dual))


@dataclass(frozen=True)
class TorusCharacter:
    torus: FiniteFieldTorus
    mu: Vector
    avatar: TorsionVector

    def __str__(self):
        return f"mu={self.mu} avatar={self.avatar}"


def make_character(t: FiniteFieldTorus, mu) -> TorusCharacter:
    mu = tuple(int(x) for x in mu)
    if len(mu) != t.cochar_rank:
        raise RankMismatch("mu has the wrong length")
    avatar = torsion_solve(scalar_minus(t.q, t.pi_dual), mu, t.p)
    return TorusCharacter(t, mu, avatar)


def character_from_avatar(t: FiniteFieldTorus, avatar: TorsionVector) -> TorusCharacter:
    """Recover mu = (q - pi^*) v; raises ValueError if v is not a character of T(F_q)."""
    m = scalar_minus(t.q, t.pi_dual)
    image = matvec(m, avatar.coords)
    if any(x.denominator != 1 for x in image):
        raise ValueError("avatar is not fixed by q * pi^{*-1}")
    return TorusCharacter(t, tuple(int(x) for x in image), avatar)


def inflate_character(c: TorusCharacter, n: int) -> TorusCharacter:
    """chi -> chi o Nm from T(F_q) to T(F_{q^n}); the avatar is unchanged."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return character_from_avatar(c.torus.extend(n), c.avatar)


def characters_equivalent(c1: TorusCharacter, c2: TorusCharacter) -> bool:
    """Same character of X_* once the F_q-structures are forgotten."""
    if c1.torus.cochar_rank != c2.torus.cochar_rank or c1.torus.p != c2.torus.p:
        raise RankMismatch("characters live on different lattices")
    return c1.avatar == c2.avatar


def twisted_torus(pi: Matrix, w: Matrix, q: int) -> FiniteFieldTorus:
    """Torus with Frobenius w * pi, e.g. a Weyl twist of a quasi-split torus."""
    return FiniteFieldTorus(len(pi), matmul(w, pi), q)
