import itertools
from fractions import Fraction

import pytest

from tame_params.errors import RankMismatch
from tame_params.lattice import scalar_minus, in_lattice
from tame_params.tori import (
    FiniteFieldTorus,
    character_from_avatar,
    character_group,
    characters_equivalent,
    inflate_character,
    make_character,
    point_count,
)

SPLIT3 = FiniteFieldTorus(1, ((1,),), 3)
NONSPLIT3 = FiniteFieldTorus(1, ((-1,),), 3)
SWAP2 = FiniteFieldTorus(2, ((0, 1), (1, 0)), 2)

TORI = [
    SPLIT3, NONSPLIT3, SWAP2,
    FiniteFieldTorus(2, ((0, -1), (1, 0)), 5),
    FiniteFieldTorus(2, ((0, -1), (1, -1)), 4),
    FiniteFieldTorus(3, ((0, 0, 1), (1, 0, 0), (0, 1, 0)), 2),
    FiniteFieldTorus(3, ((0, 1, 0), (1, 0, 0), (0, 0, -1)), 3),
]


def test_point_count_examples():
    assert point_count(SPLIT3) == 2
    assert point_count(NONSPLIT3) == 4
    assert point_count(SWAP2) == 3
    assert point_count(NONSPLIT3, 2) == 8


def test_character_group_examples():
    assert character_group(FiniteFieldTorus(1, ((1,),), 5)).invariant_factors == (4,)
    assert character_group(NONSPLIT3).invariant_factors == (4,)
    assert character_group(SWAP2).invariant_factors == (3,)


@pytest.mark.parametrize("t", TORI)
def test_character_group_order_matches_count(t):
    assert character_group(t).order == point_count(t)


def test_make_character_examples():
    assert make_character(SPLIT3, (1,)).avatar.coords == (Fraction(1, 2),)
    assert make_character(SWAP2, (0, 1)).avatar.coords == (Fraction(1, 3), Fraction(2, 3))
    for t in TORI:
        assert make_character(t, (0,) * t.cochar_rank).avatar.is_zero()


def test_inflation_examples():
    c = inflate_character(make_character(SPLIT3, (1,)), 2)
    assert c.mu == (4,)
    triv = inflate_character(make_character(NONSPLIT3, (0,)), 3)
    assert triv.avatar.is_zero()
    c2 = inflate_character(make_character(NONSPLIT3, (1,)), 2)
    assert c2.avatar.coords == (Fraction(1, 4),)
    assert c2.mu == (2,)


def test_equivalence_examples():
    a = make_character(SPLIT3, (0,))
    b = make_character(NONSPLIT3, (0,))
    assert characters_equivalent(a, b)
    assert not characters_equivalent(make_character(SPLIT3, (1,)), make_character(NONSPLIT3, (1,)))
    assert characters_equivalent(a, a)
    with pytest.raises(RankMismatch):
        characters_equivalent(a, make_character(SWAP2, (0, 0)))


@pytest.mark.parametrize("t", TORI)
def test_inflation_injective(t):
    if point_count(t) > 100:
        pytest.skip("order above the exhaustive range")
    for n in (2, 3):
        seen = set()
        for mu in character_group(t).elements():
            seen.add(inflate_character(make_character(t, mu), n).mu)
        assert len(seen) == point_count(t)


@pytest.mark.parametrize("t", TORI)
def test_avatar_roundtrip(t):
    m = scalar_minus(t.q, t.pi_dual)
    for mu in itertools.islice(itertools.product(range(-3, 4), repeat=t.cochar_rank), 60):
        c = make_character(t, mu)
        back = character_from_avatar(t, c.avatar).mu
        assert in_lattice(m, tuple(x - y for x, y in zip(back, mu)))
