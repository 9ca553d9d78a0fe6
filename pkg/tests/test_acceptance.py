"""Acceptance suite: one PASS/FAIL line per criterion, printed in the terminal summary."""

import time

import pytest

from tame_params import catalog
from tame_params.catalog import acceptance_ladder, all_catalog_specs
from tame_params.dl import (
    dl_forward,
    dl_inverse,
    enumerate_dl_classes,
    is_regular_cocharacter,
    regular_hodge_cocharacter,
)
from tame_params.errors import NoTwistingElement
from tame_params.oracle import verify_metacyclic, verify_tori, verify_twisted
from tame_params.rootdatum import galois_image, pairing
from tame_params.lattice import matvec
from tame_params.serre import (
    congruent_mod_frobenius,
    herzig_R,
    in_restricted_box,
    random_weights,
    restricted_box,
    restricted_representative,
    serre_recipe,
    weights_equivalent,
)
from tame_params.twisted import enumerate_tame_types

from conftest import ACCEPTANCE_LINES


def record(label, ok, detail, elapsed, limit=None):
    timing = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
    ok = ok and (limit is None or elapsed < limit)
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail} [{timing}]")
    return ok


def test_criterion_1_dl_bijection():
    start = time.perf_counter()
    bad = []
    checked = 0
    for spec in acceptance_ladder():
        for m in (spec.q - 1, spec.q ** 2 - 1):
            types = enumerate_tame_types(spec, m)
            classes = enumerate_dl_classes(spec, m)
            if len(types) != len(classes):
                bad.append(f"{spec.name} q={spec.q} m={m}: |SC|={len(classes)} |TI|={len(types)}")
            for t in types:
                checked += 1
                packet = dl_inverse(t)
                if not packet.presentations or any(dl_forward(spec, hp).rep != t.cls.rep
                                                   for hp in packet.presentations):
                    bad.append(f"{spec.name} q={spec.q} m={m} type {t.cls.rep.coords}")
    elapsed = time.perf_counter() - start
    ok = record("1 DL bijection", not bad,
                f"{len(acceptance_ladder())} specs, {checked} types, {len(bad)} failures", elapsed, 60)
    assert ok, bad[:5]


def test_criterion_2_twisted_oracle():
    start = time.perf_counter()
    rep = verify_twisted((3, 4, 9))
    elapsed = time.perf_counter() - start
    ok = record("2 twisted-class oracle", not rep["mismatches"],
                f"{len(rep['results'])} configurations, {len(rep['mismatches'])} mismatches", elapsed, 120)
    assert ok, rep["mismatches"]


def test_criterion_3_torus_counts():
    start = time.perf_counter()
    rep = verify_tori(27, 10 ** 4)
    elapsed = time.perf_counter() - start
    skipped = sum(1 for r in rep["results"] if r["match"] is None)
    ok = record("3 torus point counts", not rep["mismatches"] and not skipped,
                f"{len(rep['results'])} tori, {len(rep['mismatches'])} mismatches, {skipped} skipped",
                elapsed, 30)
    assert ok, rep["mismatches"]


def test_criterion_4_metacyclic():
    start = time.perf_counter()
    rep = verify_metacyclic((3, 4), kmax=3, seed=0, per_field=20)
    elapsed = time.perf_counter() - start
    found = sum(1 for r in rep["results"] if r["status"] == "found")
    ok = record("4 metacyclic common torus", found >= 30 and not rep["mismatches"],
                f"{found}/{len(rep['results'])} found (need >= 30)", elapsed, 120)
    assert ok


SERRE_SPECS = [catalog(name, n=n, q=p) for p in (3, 5) for name, n in (("sl", 2), ("gl", 2), ("sl", 3))]


def test_criterion_5a_box_counts():
    start = time.perf_counter()
    counts = {}
    for p in (3, 5, 7):
        box = restricted_box(catalog("sl", n=2, q=p))
        counts[p] = (len(box), sum(w.regular for w in box))
    ok = all(counts[p] == (p, p - 1) for p in counts)
    ok = record("5a SL2 box counts", ok, f"(|X1|, |regular|) = {counts}", time.perf_counter() - start)
    assert ok


def test_criterion_5b_restricted_congruence():
    start = time.perf_counter()
    bad = 0
    for spec in SERRE_SPECS:
        for lam in random_weights(spec, 1000, seed=spec.p):
            out = restricted_representative(spec, lam)
            if not (in_restricted_box(spec, out.lam) and congruent_mod_frobenius(spec, lam, out.lam)):
                bad += 1
    ok = record("5b restricted_representative congruence", not bad,
                f"1000 random weights on each of {len(SERRE_SPECS)} specs, {bad} failures",
                time.perf_counter() - start, 60)
    assert ok


def _involution_failures(spec):
    regs = [w for w in restricted_box(spec) if w.regular]
    bad = [w.lam for w in regs if not weights_equivalent(spec, herzig_R(spec, herzig_R(spec, w)), w)]
    return len(regs), bad


@pytest.mark.parametrize("name,n", [("sl", 2), ("sl", 3), ("gl", 2)], ids=["SL2", "SL3", "GL2"])
def test_criterion_5c_reflection_involution(name, n):
    start = time.perf_counter()
    total, bad = 0, []
    for p in (3, 5):
        spec = catalog(name, n=n, q=p)
        k, b = _involution_failures(spec)
        total += k
        bad += [(p, lam) for lam in b]
    ok = record(f"5c herzig_R involution {name.upper()}{n}", not bad,
                f"{total} regular weights at p in (3, 5), {len(bad)} with R(R(s)) not equivalent to s",
                time.perf_counter() - start, 60)
    assert ok, bad[:5]


def test_criterion_5d_equivalence_implies_equality():
    start = time.perf_counter()
    bad, pairs = [], 0
    for spec in SERRE_SPECS:
        regs = [w for w in restricted_box(spec) if w.regular]
        for a in regs:
            for b in regs:
                pairs += 1
                if weights_equivalent(spec, a, b) and a.lam != b.lam:
                    bad.append((spec.name, spec.p, a.lam, b.lam))
    ok = record("5d regular equivalence implies equality", not bad,
                f"{pairs} pairs, {len(bad)} counterexamples", time.perf_counter() - start, 60)
    assert ok, bad[:5]


def test_criterion_6_unramified_degeneration():
    start = time.perf_counter()
    bad, excluded, checked = [], [], 0
    for q in (2, 3, 5):
        for spec in all_catalog_specs(q):
            if spec.e != 1:
                continue
            for t in enumerate_tame_types(spec, q - 1 if q > 2 else 3)[:4]:
                try:
                    rec = serre_recipe(spec, t)
                except NoTwistingElement:
                    excluded.append(f"{spec.name}@{q}")
                    break
                checked += 1
                if any(rec.twist_weight) or "GHS-degenerate" not in rec.tags:
                    bad.append((spec.name, q, t.cls.rep.coords))
    excl = sorted(set(excluded))
    ok = record("6 unramified degeneration", not bad and checked > 0,
                f"{checked} recipes, {len(bad)} failures; no twisting element (excluded): {', '.join(excl)}",
                time.perf_counter() - start)
    assert ok, bad[:5]


def test_criterion_7_regular_cocharacter():
    start = time.perf_counter()
    bad = []
    specs = all_catalog_specs(2) + all_catalog_specs(3) + all_catalog_specs(5)
    for spec in specs:
        x = regular_hodge_cocharacter(spec)
        direct = all(pairing(a, matvec(g, x)) != 0 for g in galois_image(spec) for a in spec.datum.coroots)
        if not (direct and is_regular_cocharacter(spec, x)):
            bad.append(spec.name)
    ok = record("7 regular Hodge cocharacter", not bad,
                f"{len(specs)} catalog specs, {len(bad)} failures", time.perf_counter() - start, 5)
    assert ok, bad
