from fractions import Fraction

import pytest

from tame_params import catalog
from tame_params.catalog import acceptance_ladder, all_catalog_specs
from tame_params.dl import (
    dl_forward,
    dl_inverse,
    enumerate_dl_classes,
    is_regular_cocharacter,
    make_presentation,
    niveau,
    presentations_equivalent,
    regular_hodge_cocharacter,
)
from tame_params.lattice import TorsionVector, identity, matvec
from tame_params.rootdatum import galois_image, pairing
from tame_params.twisted import canonical_tf, enumerate_tame_types, is_rational, TameInertialType

F = Fraction
SWAP = ((0, 1), (1, 0))


def type_of(spec, *coords):
    c = canonical_tf(spec, TorsionVector(tuple(F(x) for x in coords), spec.p))
    return TameInertialType(c, tuple(is_rational(c)))


def test_forward_examples(gl2):
    hp = make_presentation(gl2, identity(2), (1, 0))
    assert dl_forward(gl2, hp).rep.coords == (0, F(1, 2))
    assert dl_forward(gl2, make_presentation(gl2, identity(2), (0, 0))).rep.is_zero()
    hp2 = make_presentation(gl2, SWAP, (0, 1))
    assert dl_forward(gl2, hp2).rep.coords == (F(1, 8), F(3, 8))


def test_inverse_examples(gl2):
    packet = dl_inverse(type_of(gl2, "1/8", "3/8"))
    target = make_presentation(gl2, SWAP, (0, 1))
    assert len(packet.presentations) == 1
    assert presentations_equivalent(gl2, packet.presentations[0], target)
    triv = dl_inverse(type_of(gl2, 0, 0))
    assert make_presentation(gl2, identity(2), (0, 0)) in triv.presentations
    half = dl_inverse(type_of(gl2, 0, "1/2"))
    assert any(presentations_equivalent(gl2, hp, make_presentation(gl2, identity(2), (0, 1)))
               for hp in half.presentations)


def test_niveau_examples(gl2):
    assert niveau(gl2, make_presentation(gl2, identity(2), (1, 1))) == 1
    assert niveau(gl2, make_presentation(gl2, SWAP, (0, 1))) == 2
    gl3 = catalog("gl", n=3, q=3)
    cox = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    assert niveau(gl3, make_presentation(gl3, cox, (0, 0, 0))) == 3


@pytest.mark.parametrize("spec", acceptance_ladder(), ids=lambda s: f"{s.name}-q{s.q}")
def test_bijection_on_ladder(spec):
    for m in (spec.q - 1, spec.q ** 2 - 1):
        types = enumerate_tame_types(spec, m)
        sc = enumerate_dl_classes(spec, m)
        assert [c.rep for c in sc] == [t.cls.rep for t in types]
        for t in types:
            packet = dl_inverse(t)
            assert packet.presentations
            for hp in packet.presentations:
                assert dl_forward(spec, hp).rep == t.cls.rep
                back = dl_inverse(type_of(spec, *dl_forward(spec, hp).rep.coords))
                assert any(presentations_equivalent(spec, hp, x) for x in back.presentations)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unramified_gl_niveau_one_means_identity(n):
    spec = catalog("gl", n=n, q=3)
    for t in enumerate_tame_types(spec, 8):
        for hp in dl_inverse(t).presentations:
            if niveau(spec, hp) == 1:
                assert hp.w == identity(n)
                # mu is reduced modulo (q - 1)X^*
                assert all(0 <= x < spec.q - 1 for x in hp.mu)
                v = t.cls.rep.coords
                assert all(((spec.q - 1) * a - b) % (spec.q - 1) == 0 for a, b in zip(v, hp.mu))
                assert dl_forward(spec, hp).rep == t.cls.rep


def test_regular_cocharacter_examples():
    sl2 = catalog("sl", n=2, q=3)
    assert regular_hodge_cocharacter(sl2) == (1,)
    gl2 = catalog("gl", n=2, q=3)
    x = regular_hodge_cocharacter(gl2)
    assert x[0] != x[1]


@pytest.mark.parametrize("spec", all_catalog_specs(3) + all_catalog_specs(2),
                         ids=lambda s: f"{s.name}-q{s.q}")
def test_regular_cocharacter_property(spec):
    x = regular_hodge_cocharacter(spec)
    assert is_regular_cocharacter(spec, x)
    for g in galois_image(spec):
        gx = matvec(g, x)
        # roots of the dual group are the coroots of G
        for a in spec.datum.coroots:
            assert pairing(a, gx) != 0
