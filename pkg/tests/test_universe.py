import random

import pytest
from hypothesis import given, settings, strategies as st

from equigpd.core import compose_functors, identity_functor, point, terminal_map, trivial_involution, validate, validate_functor
from equigpd.generators import random_discrete_fibration
from equigpd.modelstructure import S1, SI, is_discrete_fibration, is_fibration
from equigpd.search import is_isomorphism
from equigpd.universe import (
    NotSmall,
    UniverseElement,
    audit_universe,
    bijections,
    classify,
    equiv_fibration,
    funext_demo,
    realize_subuniverse,
    univalence_check,
)

from oracle import brute_is_discrete_fibration, brute_is_iso

ONE = trivial_involution(point())


def test_two_element_seed():
    sub = realize_subuniverse([["0", "1"]])
    assert len(sub.U.objects) == 2
    assert len(sub.U.morphisms) == 8
    assert validate(sub.U).ok and validate(sub.Ut).ok
    assert validate_functor(sub.p).ok
    assert is_discrete_fibration(sub.p)[0] and brute_is_discrete_fibration(sub.p)


def test_two_singleton_seeds_and_the_involution():
    sub = realize_subuniverse([["0"], ["a"]])
    assert len(sub.U.objects) == 4
    x = UniverseElement(frozenset("0"), frozenset("a"), (("0", "a"),))
    assert sub.U.invol_obj[x.name] == x.flip().name
    assert x.flip().name == "({a},{0},[a>0])"


def test_empty_seed():
    sub = realize_subuniverse([[]])
    assert sub.U.objects == ("({},{},[])",)
    assert sub.Ut.objects == ()


def test_bijection_enumeration():
    A = frozenset("abc")
    assert len(bijections(A, frozenset("xyz"))) == 6
    assert bijections(A, frozenset("xy")) == []


def test_morphisms_commute_with_the_bijections():
    sub = realize_subuniverse([["0", "1"], ["2"]])
    for m in sub.mor_by_name.values():
        assert m.commutes()


def test_fiber_of_equivalences_over_identity_pair():
    sub = realize_subuniverse([["0", "1"]])
    ef = equiv_fibration(sub)
    x = "({0,1},{0,1},[0>0,1>1])"
    over = [P for P in ef.E.objects if ef.proj.on_obj[P] == f"({x}|{x})"]
    assert len(over) == 2
    assert is_fibration(ef.proj)[0]


def test_univalence_fails_on_two_element_set():
    v = univalence_check(realize_subuniverse([["0", "1"]]))
    assert v.verdict is False
    src, dst, m = v.triple
    assert src == dst and src.name == "({0,1},{0,1},[0>0,1>1])"
    assert m.rho == m.tau == (("0", "1"), ("1", "0"))
    assert v.unit_is_equivalence and v.diagnosis.clause == "fixed points"


def test_univalence_fails_on_two_singletons_with_distinct_endpoints():
    v = univalence_check(realize_subuniverse([["0"], ["a"]]))
    assert v.verdict is False
    src, dst, _ = v.triple
    assert src != dst


def test_univalence_holds_on_empty_set():
    v = univalence_check(realize_subuniverse([[]]))
    assert v.verdict is True and v.witness is None


def test_classify_universal_map_is_identity_like():
    sub = realize_subuniverse([["0", "1"]])
    c = classify(sub.p, sub)
    assert c.validate(sub.p)


def test_classify_rejects_non_discrete():
    with pytest.raises(NotSmall):
        classify(terminal_map(SI, ONE))


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_classify_round_trip(seed):
    f = random_discrete_fibration(random.Random(seed))
    c = classify(f)
    assert validate_functor(c.g).ok and validate_functor(c.chi).ok
    assert is_isomorphism(c.chi) and brute_is_iso(c.chi)
    assert compose_functors(c.square.proj1, c.chi) == f


def test_classify_extends_given_subuniverse():
    sub = realize_subuniverse([["0"]])
    d = identity_functor(S1)
    c = classify(d, sub)
    assert c.validate(d)
    assert set(sub.U.objects) <= set(c.sub.U.objects)


def test_audit_passes_on_discrete_samples():
    rng = random.Random(3)
    samples = [random_discrete_fibration(rng) for _ in range(3)] + [identity_functor(S1)]
    rep = audit_universe(None, samples)
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert any(c.name.startswith("pi[") for c in rep.checks)


def test_audit_rejects_non_discrete_sample():
    with pytest.raises(ValueError):
        audit_universe(None, [terminal_map(SI, ONE)])


def test_funext_report():
    r = funext_demo()
    assert r.counterexample
    assert r.pi_objects == 4
    assert sorted(map(sorted, (s.items() for s in r.fixed_sections))) == [
        [("0", "0"), ("0'", "0'")], [("0", "1"), ("0'", "1'")]]
    assert r.diagnosis.clause == "fixed points"
