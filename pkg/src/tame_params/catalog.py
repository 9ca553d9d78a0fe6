"""Built-in tame groups.

Conventions: GL_n data live on Z^n with simple roots e_i - e_{i+1}.  The
unitary groups use the pinned flip x -> -w0(x), i.e.
(a_1, ..., a_n) -> (-a_n, ..., -a_1): as the Frobenius action when
unramified, as the inertia action when ramified.  Weil restrictions from
a degree-f unramified extension use the induced module Z^n (x) Z^f with
Frobenius cycling the blocks.  Other sign conventions for the outer
automorphism are equivalent by a pinned isomorphism.
"""

from __future__ import annotations

from .errors import BadParams, UnknownGroup
from .lattice import Matrix, identity, is_prime, prime_of
from .rootdatum import (
    BasedRootDatum,
    TameGroupSpec,
    datum_from_cartan,
    datum_from_simple,
    dual,
    make_spec,
    product_datum,
    validate,
)


def gl_datum(n: int) -> BasedRootDatum:
    sr = [tuple(int(k == i) - int(k == i + 1) for k in range(n)) for i in range(n - 1)]
    return datum_from_simple(n, sr, sr)


def type_a_cartan(r: int) -> Matrix:
    return tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r))
                 for i in range(r))


def sl_datum(n: int) -> BasedRootDatum:
    return datum_from_cartan(type_a_cartan(n - 1))


# a_ij = <alpha_j, alpha_i^vee>; alpha_1 short, alpha_2 long
C2_CARTAN = ((2, -2), (-1, 2))
B2_CARTAN = ((2, -1), (-2, 2))


def sp4_datum() -> BasedRootDatum:
    return datum_from_cartan(C2_CARTAN)


def flip_matrix(n: int) -> Matrix:
    """(a_1, ..., a_n) -> (-a_n, ..., -a_1)."""
    return tuple(tuple(-1 if j == n - 1 - i else 0 for j in range(n)) for i in range(n))


def block_cycle(n: int, f: int) -> Matrix:
    """Sends block k of Z^n (x) Z^f to block k+1 (mod f)."""
    size = n * f
    rows = [[0] * size for _ in range(size)]
    for k in range(f):
        for i in range(n):
            rows[((k + 1) % f) * n + i][k * n + i] = 1
    return tuple(tuple(r) for r in rows)


def _require(cond: bool, msg: str):
    if not cond:
        raise BadParams(msg)


def _check_q(q):
    _require(isinstance(q, int) and q >= 2, "q must be an integer >= 2")
    try:
        prime_of(q)
    except ValueError as exc:
        raise BadParams(str(exc)) from None


CATALOG_NAMES = ("gl", "sl", "pgl", "sp4", "u", "res-gl", "res-sl", "torus")


def catalog(name: str, n: int | None = None, q: int = 3, ramified: bool = False,
            f: int = 2) -> TameGroupSpec:
    """Build and validate a catalog group."""
    _check_q(q)
    key = name.lower()
    one = None
    if key == "gl":
        _require(n is not None and n >= 1, "gl needs n >= 1")
        d = gl_datum(n)
        label = f"GL{n}"
    elif key == "sl":
        _require(n is not None and n >= 2, "sl needs n >= 2")
        d = sl_datum(n)
        label = f"SL{n}"
    elif key == "pgl":
        _require(n is not None and n >= 2, "pgl needs n >= 2")
        d = dual(sl_datum(n))
        label = f"PGL{n}"
    elif key == "sp4":
        d = sp4_datum()
        label = "Sp4"
    elif key == "torus":
        _require(n is not None and n >= 1, "torus needs n >= 1")
        d = BasedRootDatum(n, (), (), ())
        label = f"Gm^{n}"
    elif key == "u":
        _require(n is not None and n >= 1, "u needs n >= 1")
        d = gl_datum(n)
        one = identity(n)
        flip = flip_matrix(n)
        if ramified:
            spec = make_spec(d, one, flip, q, name=f"U{n}-ramified")
        else:
            spec = make_spec(d, flip, one, q, name=f"U{n}-unramified")
        validate(spec)
        return spec
    elif key in ("res-gl", "res-sl"):
        _require(n is not None and n >= 1 and f >= 1, f"{key} needs n >= 1 and f >= 1")
        base = gl_datum(n) if key == "res-gl" else sl_datum(n)
        d = product_datum(*([base] * f))
        width = base.rank
        spec = make_spec(d, block_cycle(width, f), identity(d.rank), q,
                         name=f"Res{f}-{'GL' if key == 'res-gl' else 'SL'}{n}")
        validate(spec)
        return spec
    else:
        raise UnknownGroup(f"unknown catalog group {name!r}; known: {', '.join(CATALOG_NAMES)}")
    one = identity(d.rank)
    spec = make_spec(d, one, one, q, name=label)
    validate(spec)
    return spec


def acceptance_ladder() -> list[TameGroupSpec]:
    """Catalog specs used by the DL bijection check, skipping wild cases."""
    out = []
    for q in (2, 3):
        for args in (("gl", 1, False), ("gl", 2, False), ("gl", 3, False), ("sl", 2, False),
                     ("sp4", None, False), ("u", 2, False), ("u", 3, False), ("u", 2, True)):
            name, n, ram = args
            if ram and q % 2 == 0:
                continue
            out.append(catalog(name, n=n, q=q, ramified=ram))
    return out


def all_catalog_specs(q: int = 3) -> list[TameGroupSpec]:
    """One instance of every catalog family at a given q."""
    specs = [catalog("gl", n=k, q=q) for k in (1, 2, 3)]
    specs += [catalog("sl", n=2, q=q), catalog("sl", n=3, q=q), catalog("pgl", n=2, q=q),
              catalog("sp4", q=q), catalog("u", n=2, q=q), catalog("u", n=3, q=q),
              catalog("res-gl", n=2, f=2, q=q), catalog("res-sl", n=2, f=2, q=q),
              catalog("torus", n=2, q=q)]
    if q % 2:
        specs += [catalog("u", n=2, q=q, ramified=True), catalog("u", n=3, q=q, ramified=True)]
    return specs


__all__ = ["catalog", "acceptance_ladder", "all_catalog_specs", "gl_datum", "sl_datum",
           "sp4_datum", "flip_matrix", "block_cycle", "C2_CARTAN", "B2_CARTAN",
           "CATALOG_NAMES", "is_prime"]
