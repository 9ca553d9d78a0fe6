"""Twisted semisimple classes of the dual group and tame inertial types.

Classes in the theta-twisted component are points of
X_*(T^)_{theta,tf} (x) Q_{p'}/Z modulo Omega^theta.  We work in the
coordinates of the torsion-free coinvariant quotient produced by the
Smith normal form of 1 - theta; Omega^theta and the Frobenius both
descend to that quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .errors import DimensionMismatch, LevelNotCoprime
from .lattice import (
    Matrix,
    TorsionVector,
    coinvariants,
    inverse_unimodular,
    matmul,
    matvec,
)
from .rootdatum import TameGroupSpec, WeylGroup, fixed_weyl_subgroup


@dataclass(frozen=True)
class CoinvariantFrame:
    """Coordinates on X_{theta,tf} and the actions that descend to it."""

    spec: TameGroupSpec
    projection: tuple          # f x rank
    section: tuple             # rank x f
    omega: WeylGroup           # Omega^theta on X
    omega_tf: tuple            # the same elements acting on Z^f
    frob_tf: tuple             # pi_sigma on Z^f
    frob_tf_inv: tuple

    @property
    def dim(self) -> int:
        return len(self.projection)

    def project(self, v: TorsionVector) -> TorsionVector:
        return TorsionVector(matvec(self.projection, v.coords), v.p)

    def descend(self, a: Matrix) -> tuple:
        """Matrix on Z^f induced by a lattice map preserving (1 - theta)X."""
        if not self.dim:
            return ()
        return matmul(matmul(self.projection, a), self.section)

    @cached_property
    def orbit_table(self) -> tuple:
        # one matrix per distinct action, for orbit computations
        seen = []
        for m in self.omega_tf:
            if m not in seen:
                seen.append(m)
        return tuple(seen)


@lru_cache(maxsize=None)
def frame(spec: TameGroupSpec) -> CoinvariantFrame:
    pres = coinvariants(spec.rank, spec.inertia.matrix)
    proj = pres.tf_projection or ()
    sect = pres.tf_section or ()
    omega = fixed_weyl_subgroup(spec.datum, spec.inertia)
    fr = CoinvariantFrame(spec, proj, sect, omega, (), (), ())
    omega_tf = tuple(fr.descend(w) for w in omega.elements)
    frob = fr.descend(spec.frobenius.matrix)
    frob_inv = fr.descend(inverse_unimodular(spec.frobenius.matrix))
    return CoinvariantFrame(spec, proj, sect, omega, omega_tf, frob, frob_inv)


@dataclass(frozen=True)
class TwistedClass:
    """A twisted class, keyed by its canonical representative in X_{theta,tf} coordinates."""

    spec: TameGroupSpec
    rep: TorsionVector

    @property
    def level(self) -> int:
        return self.rep.level

    def __str__(self):
        return str(self.rep)


@dataclass(frozen=True)
class TameInertialType:
    cls: TwistedClass
    rational_witnesses: tuple   # Weyl matrices on X, in Omega^theta order

    def witness_words(self) -> list[tuple[int, ...]]:
        om = frame(self.cls.spec).omega
        return [om.word_of(w) for w in self.rational_witnesses]


def _orbit_min(fr: CoinvariantFrame, u: TorsionVector) -> TorsionVector:
    best = u.coords
    for m in fr.orbit_table:
        cand = tuple(x % 1 for x in matvec(m, u.coords))
        if cand < best:
            best = cand
    return TorsionVector(best, u.p)


def canonical_tf(spec: TameGroupSpec, u: TorsionVector) -> TwistedClass:
    """Canonical class of a point already in coinvariant coordinates."""
    fr = frame(spec)
    if u.dim != fr.dim:
        raise DimensionMismatch(f"expected {fr.dim} coinvariant coordinates, got {u.dim}")
    return TwistedClass(spec, _orbit_min(fr, u))


def canonicalize(spec: TameGroupSpec, v: TorsionVector) -> TwistedClass:
    """Class of a point of X_*(T^) (x) Q_{p'}/Z given in ambient coordinates."""
    if v.dim != spec.rank:
        raise DimensionMismatch(f"expected {spec.rank} coordinates, got {v.dim}")
    if v.p != spec.p:
        v = TorsionVector(v.coords, spec.p)
    return canonical_tf(spec, frame(spec).project(v))


def frobenius_action(spec: TameGroupSpec, u: TorsionVector) -> TorsionVector:
    """u -> q * pi_sigma^{-1}(u) on coinvariant coordinates."""
    fr = frame(spec)
    return TorsionVector(tuple(spec.q * x for x in matvec(fr.frob_tf_inv, u.coords)), u.p)


def frobenius_image(c: TwistedClass) -> TwistedClass:
    return canonical_tf(c.spec, frobenius_action(c.spec, c.rep))


def is_rational(c: TwistedClass) -> list[Matrix]:
    """All w in Omega^theta with q * pi_sigma^{-1}(rep) = w(rep)."""
    fr = frame(c.spec)
    target = frobenius_action(c.spec, c.rep).coords
    out = []
    for w, wt in zip(fr.omega.elements, fr.omega_tf):
        if tuple(x % 1 for x in matvec(wt, c.rep.coords)) == target:
            out.append(w)
    return out


def check_level(spec: TameGroupSpec, m: int) -> None:
    if m < 1 or gcd(m, spec.p) != 1:
        raise LevelNotCoprime(f"level {m} is not coprime to p={spec.p}")


def all_classes(spec: TameGroupSpec, m: int) -> list[TwistedClass]:
    """Every twisted class whose level divides m, sorted by representative."""
    check_level(spec, m)
    fr = frame(spec)
    reps = set()
    for point in itertools.product(range(m), repeat=fr.dim):
        u = TorsionVector(tuple(Fraction(x, m) for x in point), spec.p)
        reps.add(_orbit_min(fr, u))
    return [TwistedClass(spec, r) for r in sorted(reps, key=lambda r: r.coords)]


def enumerate_tame_types(spec: TameGroupSpec, m: int) -> list[TameInertialType]:
    """Frobenius-stable classes of level dividing m, i.e. tame inertial types."""
    out = []
    for c in all_classes(spec, m):
        wit = is_rational(c)
        if wit:
            out.append(TameInertialType(c, tuple(wit)))
    return out
