"""The Deligne-Lusztig correspondence between inertial DL data and tame types.

A Herzig presentation (w, mu) has w in Omega^theta and mu in the
coinvariant lattice X^*(T_bar) = X_*(T^)_{theta,tf}.  The twisted
Frobenius on that lattice is F_w = pi_sigma o w, and the presentation maps
to the class of the v with (q - F_w) v = mu mod the lattice.  With this
orientation w itself witnesses the rationality of v, since
q * pi_sigma^{-1}(v) = w(v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import IntegralityFailure
from .lattice import (
    Matrix,
    TorsionVector,
    Vector,
    cokernel_structure,
    in_lattice,
    inverse_unimodular,
    matmul,
    matrix_order,
    matvec,
    scalar_minus,
    torsion_solve,
)
from .rootdatum import TameGroupSpec, galois_image, pairing
from .twisted import (
    TameInertialType,
    TwistedClass,
    canonical_tf,
    check_level,
    enumerate_tame_types,
    frame,
)


@dataclass(frozen=True)
class HerzigPresentation:
    w: Matrix      # element of Omega^theta acting on X
    mu: Vector     # coinvariant coordinates


@dataclass(frozen=True)
class DLPacket:
    type: TameInertialType
    presentations: tuple[HerzigPresentation, ...]


def twisted_frobenius(spec: TameGroupSpec, w: Matrix) -> tuple:
    """F_w = pi_sigma o w on the coinvariant lattice."""
    fr = frame(spec)
    return matmul(fr.frob_tf, fr.descend(w))


def _dl_matrix(spec: TameGroupSpec, w: Matrix) -> tuple:
    return scalar_minus(spec.q, twisted_frobenius(spec, w))


def normalize_mu(spec: TameGroupSpec, w: Matrix, mu: Sequence[int]) -> Vector:
    """Representative of mu mod (q - F_w) in Smith normal form coordinates."""
    if not mu:
        return ()
    pres = cokernel_structure(_dl_matrix(spec, w))
    return matvec(inverse_unimodular(pres.basis_change), pres.coordinates(mu))


def make_presentation(spec: TameGroupSpec, w: Matrix, mu: Sequence[int]) -> HerzigPresentation:
    fr = frame(spec)
    if w not in fr.omega:
        raise ValueError("w is not in Omega^theta")
    mu = tuple(int(x) for x in mu)
    if len(mu) != fr.dim:
        raise ValueError(f"mu must have {fr.dim} coordinates")
    return HerzigPresentation(w, normalize_mu(spec, w, mu))


def presentation_to_json(spec: TameGroupSpec, hp: HerzigPresentation) -> dict:
    """{"w": word in simple reflections (1-based), "mu": coordinates}."""
    from .rootdatum import format_word
    return {"w": format_word(frame(spec).omega.word_of(hp.w)), "mu": list(hp.mu)}


def dl_avatar(spec: TameGroupSpec, hp: HerzigPresentation) -> TorsionVector:
    if not hp.mu:
        return TorsionVector((), spec.p)
    return torsion_solve(_dl_matrix(spec, hp.w), hp.mu, spec.p)


def dl_forward(spec: TameGroupSpec, hp: HerzigPresentation) -> TwistedClass:
    return canonical_tf(spec, dl_avatar(spec, hp))


def _conj_by_frobenius_inverse(spec: TameGroupSpec, u: Matrix) -> Matrix:
    s = spec.frobenius.matrix
    return matmul(matmul(inverse_unimodular(s), u), s)


def witness_classes(spec: TameGroupSpec, rep: TorsionVector, witnesses: Sequence[Matrix]):
    """Split witnesses into orbits of w -> pi_sigma^{-1}(u) w u^{-1}, u in Stab(rep).

    Each orbit is a rational conjugacy class of F-stable maximal tori
    carrying the given geometric class.
    """
    fr = frame(spec)
    stab = [u for u, ut in zip(fr.omega.elements, fr.omega_tf)
            if tuple(x % 1 for x in matvec(ut, rep.coords)) == rep.coords]
    remaining = list(witnesses)
    classes = []
    while remaining:
        w = remaining[0]
        orbit = {matmul(matmul(_conj_by_frobenius_inverse(spec, u), w), inverse_unimodular(u))
                 for u in stab}
        cls = [x for x in remaining if x in orbit]
        classes.append(cls)
        remaining = [x for x in remaining if x not in orbit]
    return classes


def dl_inverse(t: TameInertialType) -> DLPacket:
    spec = t.cls.spec
    rep = t.cls.rep
    out = []
    for cls in witness_classes(spec, rep, t.rational_witnesses):
        w = cls[0]
        image = matvec(_dl_matrix(spec, w), rep.coords) if rep.coords else ()
        if any(Fraction(x).denominator != 1 for x in image):
            raise IntegralityFailure(f"(q - F_w) rep is not integral for w={w}")
        mu = tuple(int(x) for x in image)
        out.append(HerzigPresentation(w, normalize_mu(spec, w, mu)))
    return DLPacket(t, tuple(out))


def presentations_equivalent(spec: TameGroupSpec, a: HerzigPresentation,
                             b: HerzigPresentation) -> bool:
    """(w, mu) ~ (pi_sigma^{-1}(u) w u^{-1}, u mu) modulo (q - F_w)."""
    fr = frame(spec)
    for u, ut in zip(fr.omega.elements, fr.omega_tf):
        w2 = matmul(matmul(_conj_by_frobenius_inverse(spec, u), a.w), inverse_unimodular(u))
        if w2 != b.w:
            continue
        if not b.mu:
            return True
        diff = tuple(x - y for x, y in zip(matvec(ut, a.mu), b.mu))
        if in_lattice(_dl_matrix(spec, b.w), diff):
            return True
    return False


def enumerate_dl_classes(spec: TameGroupSpec, m: int) -> list[TwistedClass]:
    """Geometric classes of inertial DL data of level dividing m.

    Runs over every (w, mu) with mu in Z^f / (q - F_w), independently of
    the twisted-class enumeration.
    """
    check_level(spec, m)
    fr = frame(spec)
    reps = {}
    for w in fr.omega.elements:
        if not fr.dim:
            reps[()] = canonical_tf(spec, TorsionVector((), spec.p))
            break
        pres = cokernel_structure(_dl_matrix(spec, w))
        for mu in pres.elements():
            v = torsion_solve(_dl_matrix(spec, w), mu, spec.p)
            if m % v.level:
                continue
            c = canonical_tf(spec, v)
            reps[c.rep.coords] = c
    return [reps[k] for k in sorted(reps)]


def dl_packets(spec: TameGroupSpec, m: int) -> list[DLPacket]:
    return [dl_inverse(t) for t in enumerate_tame_types(spec, m)]


def niveau(spec: TameGroupSpec, hp: HerzigPresentation) -> int:
    """Least m >= 1 with (pi_sigma w)^m preserving the positive roots."""
    f = matmul(spec.frobenius.matrix, hp.w)
    pos = spec.datum.positive_roots
    posset = set(pos)
    cur = f
    for k in range(1, matrix_order(f) + 1):
        if all(matvec(cur, a) in posset for a in pos):
            return k
        cur = matmul(cur, f)
    raise AssertionError("unreachable: the identity preserves the positive roots")


def _shell(rank: int, k: int):
    """Integer vectors of max-norm exactly k, in a fixed order."""
    values = range(k, -k - 1, -1)
    for v in itertools.product(values, repeat=rank):
        if max((abs(x) for x in v), default=0) == k:
            yield v


def is_regular_cocharacter(spec: TameGroupSpec, x: Sequence[int]) -> bool:
    """<a, g x> != 0 for every root a of the dual group and every Galois translate g."""
    coroots = spec.datum.coroots
    for g in galois_image(spec):
        gx = matvec(g, x)
        if any(pairing(c, gx) == 0 for c in coroots):
            return False
    return True


def regular_hodge_cocharacter(spec: TameGroupSpec) -> Vector:
    """First x in X_*(T^) = X^*(T), by max-norm sweep, with every Galois translate regular."""
    k = 0
    while True:
        for x in _shell(spec.rank, k):
            if is_regular_cocharacter(spec, x):
                return tuple(x)
        k += 1


__all__ = [
    "HerzigPresentation", "DLPacket", "twisted_frobenius", "normalize_mu", "make_presentation",
    "presentation_to_json", "dl_avatar", "dl_forward", "dl_inverse", "presentations_equivalent", "enumerate_dl_classes",
    "dl_packets", "niveau", "regular_hodge_cocharacter", "is_regular_cocharacter",
    "witness_classes",
]
