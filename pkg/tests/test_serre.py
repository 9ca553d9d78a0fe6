import pytest

from tame_params import catalog
from tame_params.dl import dl_forward
from tame_params.errors import NoTwistingElement, NotRegular, NotSimplyConnected
from tame_params.lattice import matvec
from tame_params.serre import (
    JH_HOOK_NAME,
    based_avatar,
    congruent_mod_frobenius,
    evaluate_recipe,
    herzig_R,
    in_restricted_box,
    is_regular,
    longest_element,
    make_weight,
    random_weights,
    reductive_quotient,
    restricted_box,
    restricted_representative,
    serre_recipe,
    twisting_element,
    weights_equivalent,
)
from tame_params.twisted import enumerate_tame_types


def sl(n, p):
    return catalog("sl", n=n, q=p)


def test_twisting_examples():
    assert twisting_element(sl(2, 5), "special-fiber") == (1,)
    assert twisting_element(catalog("gl", n=2, q=3), "special-fiber") == (1, 0)
    with pytest.raises(ValueError):
        twisting_element(sl(2, 5), "neither")


@pytest.mark.parametrize("spec", [catalog("gl", n=2, q=3), catalog("u", n=3, q=3), sl(3, 5),
                                  catalog("sp4", q=3), catalog("res-gl", n=2, f=2, q=3)],
                         ids=lambda s: s.name)
def test_unramified_twisting_elements_agree(spec):
    assert twisting_element(spec, "generic-fiber") == twisting_element(spec, "special-fiber")


def test_twisting_element_missing():
    with pytest.raises(NoTwistingElement):
        twisting_element(catalog("u", n=2, q=3), "special-fiber")
    with pytest.raises(NoTwistingElement):
        twisting_element(catalog("u", n=2, q=3, ramified=True), "generic-fiber")


def test_quotient_of_ramified_u3_is_rank_one():
    rq = reductive_quotient(catalog("u", n=3, q=3, ramified=True))
    assert rq.datum.rank == 1 and len(rq.datum.roots) == 2


def test_restricted_examples():
    s = sl(2, 5)
    assert restricted_representative(s, (7,)).lam == (3,)
    assert restricted_representative(s, (2,)).lam == (2,)
    r = catalog("res-sl", n=2, f=2, q=3)
    out = restricted_representative(r, (4, 0))
    assert out.lam == (1, 1)
    assert congruent_mod_frobenius(r, (4, 0), out.lam)


def test_restricted_needs_simply_connected():
    with pytest.raises(NotSimplyConnected):
        restricted_representative(catalog("pgl", n=2, q=3), (3,))


@pytest.mark.parametrize("spec", [sl(2, 5), catalog("gl", n=2, q=3), sl(3, 3),
                                  catalog("res-sl", n=2, f=2, q=3), catalog("sp4", q=5),
                                  catalog("u", n=3, q=5)], ids=lambda s: f"{s.name}-p{s.p}")
@pytest.mark.parametrize("r", [1, 2])
def test_restricted_property(spec, r):
    for lam in random_weights(spec, 150, seed=r):
        out = restricted_representative(spec, lam, r)
        assert in_restricted_box(spec, out.lam, r)
        assert congruent_mod_frobenius(spec, lam, out.lam, r)


def test_weights_equivalent_examples():
    g = catalog("gl", n=2, q=3)
    a = make_weight(g, (2, 0))
    assert weights_equivalent(g, a, a)
    assert weights_equivalent(g, a, make_weight(g, (4, 2)))
    s = sl(2, 5)
    assert not weights_equivalent(s, make_weight(s, (1,)), make_weight(s, (2,)))


def test_make_weight_rejects_outside_box():
    with pytest.raises(ValueError):
        make_weight(sl(2, 5), (5,))


def test_regular_examples():
    s = sl(2, 5)
    assert not is_regular(s, make_weight(s, (4,)))
    assert is_regular(s, make_weight(s, (0,)))
    assert is_regular(s, make_weight(s, (3,)))


def test_reflection_examples():
    s = sl(2, 5)
    assert herzig_R(s, make_weight(s, (1,))).lam == (2,)
    assert herzig_R(s, make_weight(s, (2,))).lam == (1,)
    with pytest.raises(NotRegular):
        herzig_R(s, make_weight(s, (4,)))


def test_reflection_fixed_point_allowed():
    # SL2 at p = 3: the regular weights are 0 and 1, swapped; at p = 5 none is fixed
    s = sl(2, 7)
    fixed = [w.lam for w in restricted_box(s) if w.regular and herzig_R(s, w).lam == w.lam]
    assert fixed == []
    s3 = sl(3, 5)
    outs = [herzig_R(s3, w) for w in restricted_box(s3) if w.regular]
    assert all(o.regular for o in outs)


@pytest.mark.parametrize("spec", [sl(2, 3), sl(2, 5), sl(3, 3), sl(3, 5), catalog("sp4", q=5),
                                  catalog("res-sl", n=2, f=2, q=3), catalog("u", n=3, q=5)],
                         ids=lambda s: f"{s.name}-p{s.p}")
def test_reflection_is_involution_when_eta_is_antiinvariant(spec):
    for w in restricted_box(spec):
        if w.regular:
            assert weights_equivalent(spec, herzig_R(spec, herzig_R(spec, w)), w)


@pytest.mark.parametrize("p", [3, 5])
def test_gl2_reflection_squares_to_central_twist(p):
    # R(R(mu)) = mu - p (eta + w0 eta), and eta + w0 eta = det for GL2
    g = catalog("gl", n=2, q=p)
    eta = twisting_element(g, "special-fiber")
    w0eta = matvec(longest_element(g), eta)
    for w in restricted_box(g):
        if not w.regular:
            continue
        twice = herzig_R(g, herzig_R(g, w))
        expect = tuple(x - p * (a + b) for x, a, b in zip(w.lam, eta, w0eta))
        assert weights_equivalent(g, twice, restricted_representative(g, expect))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sl2_box_counts(p):
    box = restricted_box(sl(2, p))
    assert len(box) == p
    assert sum(w.regular for w in box) == p - 1


@pytest.mark.parametrize("spec", [sl(2, 3), sl(2, 5), catalog("gl", n=2, q=3), catalog("gl", n=2, q=5),
                                  sl(3, 3), sl(3, 5)], ids=lambda s: f"{s.name}-p{s.p}")
def test_regular_congruence_implies_equality(spec):
    regs = [w for w in restricted_box(spec) if w.regular]
    for a in regs:
        for b in regs:
            if congruent_mod_frobenius(spec, a.lam, b.lam):
                assert weights_equivalent(spec, a, b)
                assert a == b


@pytest.mark.parametrize("spec", [sl(2, 3), sl(2, 5), catalog("gl", n=2, q=3), catalog("gl", n=2, q=5)],
                         ids=lambda s: f"{s.name}-p{s.p}")
def test_regular_weights_give_distinct_based_data(spec):
    regs = [w for w in restricted_box(spec) if w.regular]
    avatars = [based_avatar(spec, w) for w in regs]
    assert len(set(avatars)) == len(regs)
    assert all((spec.p - 1) % a.level == 0 for a in avatars)


def test_recipe_unramified_is_degenerate(gl2):
    t = enumerate_tame_types(gl2, 2)[0]
    rec = serre_recipe(gl2, t)
    assert rec.twist_weight == (0, 0)
    assert rec.tags == ("GHS-degenerate",)
    assert any(hp.w == ((1, 0), (0, 1)) and hp.mu == (0, 0) for hp in rec.dl_part.presentations)
    js = rec.to_json()
    assert set(js) == {"dl_part", "twist_weight", "jh_hook", "tags"}
    assert js["jh_hook"] == JH_HOOK_NAME


def test_recipe_ramified_u3_twist():
    u3 = catalog("u", n=3, q=3, ramified=True)
    rq = reductive_quotient(u3)
    for t in enumerate_tame_types(u3, 8):
        rec = serre_recipe(u3, t)
        assert any(rec.twist_weight)
        assert "GHS-degenerate" not in rec.tags
        # the twist pairs non-negatively with the simple coroot: dominant after w0
        assert all(sum(x * y for x, y in zip(rec.twist_weight, c)) >= 0
                   for c in rq.datum.simple_coroots)


def test_recipe_assumption_failure():
    u2 = catalog("u", n=2, q=3)
    with pytest.raises(NoTwistingElement):
        serre_recipe(u2, enumerate_tame_types(u2, 2)[0])


def test_recipe_oracle_slot(gl2):
    t = enumerate_tame_types(gl2, 2)[0]
    rec = serre_recipe(gl2, t)
    calls = []

    def oracle(hp, twist):
        calls.append((hp, twist))
        return [make_weight(gl2, (1, 0)), make_weight(gl2, (2, 0))]

    out = evaluate_recipe(gl2, rec, oracle)
    assert len(calls) == len(rec.dl_part.presentations)
    # (2, 0) is not regular at p = 3 and is dropped
    assert all(len(ws) == 1 for ws in out)
    assert out[0][0] == herzig_R(gl2, make_weight(gl2, (1, 0)))


def test_based_datum_forward_is_level_p_minus_1():
    s = sl(2, 5)
    from tame_params.serre import based_datum
    for w in restricted_box(s):
        assert 4 % dl_forward(s, based_datum(s, w)).level == 0
