"""Parahoric Serre weights: restricted weights, Herzig's R and the W? recipe.

Weights live on X^*(T_bar), which is the coinvariant lattice
X^*(T)_{theta,tf}.  The reductive quotient's root datum on it is built
from theta-orbits of roots:

* an orbit of mutually orthogonal roots {b} contributes the restricted
  root P(b) with coroot sum(b^vee);
* an orbit containing b, b' with b + b' a root contributes P(b + b') with
  coroot (b + b')^vee.

For unramified groups this is the datum of G itself.  The Frobenius of the
F_p-structure is pi_sigma descended to the quotient.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .dl import DLPacket, HerzigPresentation, dl_avatar, dl_inverse, make_presentation, presentation_to_json
from .errors import NoTwistingElement, NotRegular, NotSimplyConnected
from .lattice import (
    Matrix,
    Vector,
    as_matrix,
    cokernel_structure,
    in_lattice,
    kernel_basis,
    matmul,
    matvec,
    scalar_minus,
    solve_integral,
    transpose,
)
from .rootdatum import (
    BasedRootDatum,
    TameGroupSpec,
    datum_from_simple,
    derived_simply_connected,
    pairing,
    pinned,
    weyl_group,
)
from .twisted import TameInertialType, frame


# ---------------------------------------------------------------------------
# the reductive quotient


@dataclass(frozen=True)
class ReductiveQuotient:
    datum: BasedRootDatum
    frobenius: Matrix
    p: int


def _theta_orbit(theta: Matrix, root: Vector) -> list[Vector]:
    orbit = [root]
    cur = matvec(theta, root)
    while cur != root:
        orbit.append(cur)
        cur = matvec(theta, cur)
    return orbit


def _restricted_pair(spec: TameGroupSpec, root: Vector) -> tuple[Vector, Vector]:
    fr = frame(spec)
    d = spec.datum
    orbit = _theta_orbit(spec.inertia.matrix, root)
    roots = set(d.roots)
    for a, b in itertools.combinations(orbit, 2):
        s = tuple(x + y for x, y in zip(a, b))
        if s in roots:
            r, c = s, d.coroot_of[s]
            break
    else:
        r = root
        c = tuple(sum(col) for col in zip(*(d.coroot_of[b] for b in orbit)))
    rbar = matvec(fr.projection, r)
    cbar = matvec(transpose(fr.section), c)
    return rbar, cbar


@lru_cache(maxsize=None)
def reductive_quotient(spec: TameGroupSpec) -> ReductiveQuotient:
    fr = frame(spec)
    d = spec.datum
    f = fr.dim
    simple_r, simple_c = [], []
    seen = set()
    for a in d.simple_roots:
        orbit = frozenset(_theta_orbit(spec.inertia.matrix, a))
        if orbit in seen:
            continue
        seen.add(orbit)
        r, c = _restricted_pair(spec, a)
        simple_r.append(r)
        simple_c.append(c)
    if f == 0:
        qd = BasedRootDatum(0, (), (), ())
        return ReductiveQuotient(qd, (), spec.p)
    qd = datum_from_simple(f, simple_r, simple_c)
    frob = fr.frob_tf
    pinned(qd, frob)
    return ReductiveQuotient(qd, as_matrix(frob), spec.p)


# ---------------------------------------------------------------------------
# twisting elements


def _fixed_solutions(constraints: Sequence[Sequence[int]], rhs: Sequence[int],
                     rank: int) -> Vector | None:
    """Canonical integral solution: fewest negative units, then smallest, then lex."""
    if not constraints:
        return (0,) * rank
    part = solve_integral(constraints, rhs)
    if part is None:
        return None
    ker = kernel_basis(constraints)
    if ker is None:
        return tuple(part)
    k = len(ker[0])
    radius = 2 + max(abs(x) for x in part)
    best = None
    for t in itertools.product(range(-radius, radius + 1), repeat=k):
        x = tuple(a + sum(ker[i][j] * t[j] for j in range(k)) for i, a in enumerate(part))
        key = (sum(-v for v in x if v < 0), sum(abs(v) for v in x), tuple(-v for v in x))
        if best is None or key < best[0]:
            best = (key, x)
    return best[1]


def _twisting_element(datum: BasedRootDatum, fixers: Sequence[Matrix]) -> Vector:
    n = datum.rank
    rows = [list(c) for c in datum.simple_coroots]
    rhs = [1] * len(rows)
    for g in fixers:
        for i in range(n):
            rows.append([g[i][j] - int(i == j) for j in range(n)])
            rhs.append(0)
    if not rows:
        return (0,) * n
    sol = _fixed_solutions(rows, rhs, n)
    if sol is None:
        raise NoTwistingElement("no Galois-fixed weight pairs to 1 with every simple coroot")
    return sol


def twisting_element(spec: TameGroupSpec, which: str = "special-fiber") -> Vector:
    """A Frobenius-stable eta with <eta, a^vee> = 1 on the simple coroots.

    ``special-fiber`` solves on X^*(T_bar) for the reductive quotient;
    ``generic-fiber`` solves on X^*(T) fixed by Frobenius and inertia and
    returns its image in X^*(T_bar).
    """
    if which == "special-fiber":
        rq = reductive_quotient(spec)
        if not rq.datum.rank:
            return ()
        return _twisting_element(rq.datum, [rq.frobenius])
    if which == "generic-fiber":
        eta = _twisting_element(spec.datum, [spec.frobenius.matrix, spec.inertia.matrix])
        return matvec(frame(spec).projection, eta)
    raise ValueError("which must be 'generic-fiber' or 'special-fiber'")


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class SerreWeight:
    lam: Vector
    r: int = 1
    regular: bool = field(default=False)

    def to_json(self) -> dict:
        return {"lambda": list(self.lam), "r": self.r, "regular": self.regular}


def simple_pairings(rq: ReductiveQuotient, lam: Sequence[int]) -> tuple[int, ...]:
    return tuple(pairing(lam, c) for c in rq.datum.simple_coroots)


def in_restricted_box(spec: TameGroupSpec, lam: Sequence[int], r: int = 1) -> bool:
    rq = reductive_quotient(spec)
    bound = spec.p ** r
    return all(0 <= n < bound for n in simple_pairings(rq, lam))


def _regular_pairings(p: int, pairings: Sequence[int]) -> bool:
    return all(0 <= n < p - 1 for n in pairings)


def make_weight(spec: TameGroupSpec, lam: Sequence[int], r: int = 1) -> SerreWeight:
    lam = tuple(int(x) for x in lam)
    rq = reductive_quotient(spec)
    if len(lam) != rq.datum.rank:
        raise ValueError(f"weight must have {rq.datum.rank} coordinates")
    if not in_restricted_box(spec, lam, r):
        raise ValueError(f"{lam} is not in X_{r}")
    reg = r == 1 and _regular_pairings(spec.p, simple_pairings(rq, lam))
    return SerreWeight(lam, r, reg)


@lru_cache(maxsize=None)
def fundamental_weights(spec: TameGroupSpec) -> tuple[Vector, ...]:
    """Lifts omega_a in X^*(T_bar) dual to the simple coroots."""
    rq = reductive_quotient(spec)
    d = rq.datum
    if not derived_simply_connected(d):
        raise NotSimplyConnected("derived subgroup of the reductive quotient is not simply connected")
    out = []
    k = len(d.simple_coroots)
    for i in range(k):
        e = [int(i == j) for j in range(k)]
        out.append(tuple(solve_integral(d.simple_coroots, e)))
    return tuple(out)


def restricted_representative(spec: TameGroupSpec, lam: Sequence[int], r: int = 1) -> SerreWeight:
    """A weight of X_r congruent to lam modulo (p^r - pi)X^*(T_bar).

    First adds a multiple of (p^r - pi)(sum of fundamental weights) to
    make lam dominant, then carries every coefficient n = s + p^r t >= p^r
    into (s at b, +t at pi(b)); each carry lowers the coefficient sum by
    (p^r - 1) t, so the loop terminates.
    """
    rq = reductive_quotient(spec)
    lam = tuple(int(x) for x in lam)
    if not rq.datum.simple_indices:
        return make_weight(spec, lam, r)
    omegas = fundamental_weights(spec)
    pr = spec.p ** r
    step = scalar_minus(pr, rq.frobenius)
    pairs = simple_pairings(rq, lam)
    low = min(pairs)
    if low < 0:
        big = -(-(-low) // (pr - 1))
        rho = tuple(sum(col) for col in zip(*omegas))
        shift = matvec(step, rho)
        lam = tuple(x + big * y for x, y in zip(lam, shift))
        pairs = simple_pairings(rq, lam)
    while True:
        idx = next((i for i, n in enumerate(pairs) if n >= pr), None)
        if idx is None:
            break
        t = pairs[idx] // pr
        carry = matvec(step, omegas[idx])
        lam = tuple(x - t * y for x, y in zip(lam, carry))
        pairs = simple_pairings(rq, lam)
    return make_weight(spec, lam, r)


@lru_cache(maxsize=None)
def _x0_image(spec: TameGroupSpec, r: int):
    rq = reductive_quotient(spec)
    k0 = rq.datum.orthogonal_lattice
    if k0 is None:
        return None
    return matmul(scalar_minus(spec.p ** r, rq.frobenius), k0)


def weights_equivalent(spec: TameGroupSpec, a: SerreWeight, b: SerreWeight) -> bool:
    """a - b in (p^r - pi) X^0, i.e. the same simple module of G_bar(F_{p^r})."""
    if a.r != b.r:
        raise ValueError("weights have different restriction exponents")
    diff = tuple(x - y for x, y in zip(a.lam, b.lam))
    return in_lattice(_x0_image(spec, a.r), diff)


def congruent_mod_frobenius(spec: TameGroupSpec, lam: Sequence[int], mu: Sequence[int],
                            r: int = 1) -> bool:
    """lam - mu in (p^r - pi) X^*(T_bar), i.e. the same torus character."""
    rq = reductive_quotient(spec)
    diff = tuple(x - y for x, y in zip(lam, mu))
    return in_lattice(scalar_minus(spec.p ** r, rq.frobenius), diff)


def is_regular(spec: TameGroupSpec, s: SerreWeight) -> bool:
    if s.r != 1:
        raise ValueError("regularity is defined for r = 1")
    return _regular_pairings(spec.p, simple_pairings(reductive_quotient(spec), s.lam))


def based_datum(spec: TameGroupSpec, s: SerreWeight) -> HerzigPresentation:
    """The niveau-1 based datum (id, lambda) attached to a weight."""
    return make_presentation(spec, frame(spec).omega.identity, s.lam)


def based_avatar(spec: TameGroupSpec, s: SerreWeight):
    """Avatar of (id, lambda): the torus character, with the Borel kept (no Weyl quotient)."""
    return dl_avatar(spec, based_datum(spec, s))


def longest_element(spec: TameGroupSpec) -> Matrix:
    rq = reductive_quotient(spec)
    if not rq.datum.rank:
        return ()
    return weyl_group(rq.datum).longest


def herzig_R(spec: TameGroupSpec, s: SerreWeight) -> SerreWeight:
    """L(mu) -> L(w0 . (mu - p eta)) with the eta-shifted dot action."""
    if not is_regular(spec, s):
        raise NotRegular(f"{s.lam} is not a regular restricted weight")
    eta = twisting_element(spec, "special-fiber")
    w0 = longest_element(spec)
    p = spec.p
    shifted = tuple(m - p * e + e for m, e in zip(s.lam, eta))
    out = tuple(x - e for x, e in zip(matvec(w0, shifted), eta))
    return restricted_representative(spec, out, 1)


def restricted_box(spec: TameGroupSpec, r: int = 1) -> list[SerreWeight]:
    """One representative of every class of X_r / (p^r - pi) X^0."""
    rq = reductive_quotient(spec)
    d = rq.datum
    pr = spec.p ** r
    if d.simple_indices:
        omegas = fundamental_weights(spec)
    else:
        omegas = ()
    central = [()]
    k0 = d.orthogonal_lattice
    if k0 is not None:
        # pi acts on X^0; enumerate X^0 / (p^r - pi) X^0 in kernel coordinates
        k0_cols = len(k0[0])
        left = solve_left_inverse(k0)
        pi0 = matmul(matmul(left, rq.frobenius), k0)
        pres = cokernel_structure(scalar_minus(pr, pi0))
        central = [tuple(matvec(k0, z)) for z in pres.elements()] if k0_cols else [()]
    out = []
    for n in itertools.product(range(pr), repeat=len(omegas)):
        base = [0] * d.rank
        for c, om in zip(n, omegas):
            base = [x + c * y for x, y in zip(base, om)]
        for z in central:
            lam = tuple(x + y for x, y in zip(base, z)) if z else tuple(base)
            out.append(make_weight(spec, lam, r))
    return out


def solve_left_inverse(cols: Matrix) -> Matrix:
    """Integral left inverse of a saturated column basis."""
    n = len(cols)
    k = len(cols[0])
    rows = []
    for i in range(k):
        # find y with y^T cols = e_i: solve cols^T y = e_i
        y = solve_integral(transpose(cols), [int(i == j) for j in range(k)])
        rows.append(tuple(y))
    assert len(rows[0]) == n
    return tuple(rows)


def random_weights(spec: TameGroupSpec, count: int, seed: int = 0, spread: int = 60):
    rng = random.Random(seed)
    rank = reductive_quotient(spec).datum.rank
    return [tuple(rng.randint(-spread, spread) for _ in range(rank)) for _ in range(count)]


# ---------------------------------------------------------------------------
# the W? recipe

JHOracle = Callable[[HerzigPresentation, Vector], list[SerreWeight]]
"""Jordan-Hoelder oracle slot.

Input: a Herzig presentation of DL^{-1}(tau) and the twist weight; output:
the multiset of Serre weights occurring in JH(V_bar(datum) (x) W(twist)).
No implementation ships with the library.
"""

JH_HOOK_NAME = "JH(Vbar(DL^-1(tau)) (x) W(twist_weight))"


@dataclass(frozen=True)
class RecipeExpression:
    dl_part: DLPacket
    twist_weight: Vector
    jh_hook: str = JH_HOOK_NAME
    tags: tuple[str, ...] = ()

    def to_json(self) -> dict:
        spec = self.dl_part.type.cls.spec
        return {
            "dl_part": [presentation_to_json(spec, hp) for hp in self.dl_part.presentations],
            "twist_weight": list(self.twist_weight),
            "jh_hook": self.jh_hook,
            "tags": list(self.tags),
        }


def check_assumption(spec: TameGroupSpec) -> None:
    """Twisting elements exist on both sides and the quotient has simply connected derived group."""
    twisting_element(spec, "generic-fiber")
    twisting_element(spec, "special-fiber")
    if not derived_simply_connected(reductive_quotient(spec).datum):
        raise NotSimplyConnected("derived subgroup of the reductive quotient is not simply connected")


def serre_recipe(spec: TameGroupSpec, t: TameInertialType) -> RecipeExpression:
    check_assumption(spec)
    eta_f = twisting_element(spec, "special-fiber")
    eta_q = twisting_element(spec, "generic-fiber")
    w0 = longest_element(spec)
    diff = tuple(a - b for a, b in zip(eta_f, eta_q))
    twist = matvec(w0, diff) if diff else ()
    tags = ("GHS-degenerate",) if not any(twist) else ()
    return RecipeExpression(dl_inverse(t), twist, JH_HOOK_NAME, tags)


def evaluate_recipe(spec: TameGroupSpec, expr: RecipeExpression, oracle: JHOracle):
    """Apply R to the oracle's JH constituents, one set per rational class in the packet."""
    out = []
    for hp in expr.dl_part.presentations:
        weights = oracle(hp, expr.twist_weight)
        out.append([herzig_R(spec, s) for s in weights if is_regular(spec, s)])
    return out


__all__ = [
    "ReductiveQuotient", "reductive_quotient", "twisting_element", "SerreWeight", "make_weight",
    "restricted_representative", "weights_equivalent", "congruent_mod_frobenius", "is_regular",
    "herzig_R", "restricted_box", "RecipeExpression", "serre_recipe", "evaluate_recipe",
    "check_assumption", "JHOracle", "JH_HOOK_NAME", "longest_element", "fundamental_weights",
    "in_restricted_box", "random_weights", "based_datum", "based_avatar",
]
