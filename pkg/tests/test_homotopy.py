import random

import pytest
from hypothesis import given, settings, strategies as st

from equigpd.budget import current_budget, use_budget
from equigpd.core import (
    EquivariantFunctor,
    bz2,
    compose_functors,
    disjoint_union,
    free_double,
    identity_functor,
    interval,
    point,
    terminal_map,
    trivial_involution,
)
from equigpd.generators import random_acyclic_cofibration, random_functor, random_involutive_groupoid
from equigpd.homotopy import (
    are_right_homotopic,
    is_rhe,
    is_weakly_connected,
    lift_through_acyclic_cofibration,
    rhe_clauses,
    rhe_witness,
    search_rhe_inverse,
    weak_components,
)
from equigpd.modelstructure import S1, SI, generating_acyclic_cofibration, path_object
from equigpd.universe import funext_instance

from oracle import brute_is_rhe, weak_component_count
from strategies import functors, groupoids

ONE = trivial_involution(point())


@given(groupoids(4, 2))
def test_weak_components_match_union_find(G):
    comps = weak_components(G)
    assert len(comps) == weak_component_count(G)
    assert sorted(x for c in comps for x in c.objects) == sorted(G.objects)
    assert is_weakly_connected(G) == (len(comps) <= 1)


def test_weak_components_examples():
    assert len(weak_components(SI)) == 1
    assert len(weak_components(disjoint_union(S1, S1))) == 2


@given(functors(3, 2))
def test_is_rhe_matches_oracle(f):
    ok, diag = is_rhe(f)
    assert ok == brute_is_rhe(f)
    assert (diag.clause is None) == ok
    assert len(set(rhe_clauses(f).values())) == 1


@settings(max_examples=40)
@given(functors(2, 2))
def test_is_rhe_matches_brute_force_inverse_search(f):
    assert is_rhe(f)[0] == (search_rhe_inverse(f) is not None)


@given(functors(3, 2))
def test_witness_exists_exactly_for_rhe(f):
    w = rhe_witness(f)
    assert (w is not None) == is_rhe(f)[0]
    if w is not None:
        assert w.validate(f)


def test_funext_map_is_rhe_with_witness():
    _, f = funext_instance()
    ok, _ = is_rhe(f)
    assert ok
    w = rhe_witness(f)
    assert w.validate(f)
    assert w.inverse.on_obj == {"0": "0", "0'": "0'"}


def test_terminal_of_double_is_not_rhe():
    # S(1) -> 1 is not full: nothing maps to the identity between 0 and 0'
    ok, diag = is_rhe(terminal_map(S1, ONE))
    assert not ok and diag.clause == "equivalence"


def test_collapse_of_two_fixed_points_fails_equivalence_or_fixed_points():
    I = trivial_involution(interval())
    ok, diag = is_rhe(terminal_map(I, ONE))
    assert not ok and diag.clause == "fixed points"
    Z = bz2()
    ok, diag = is_rhe(terminal_map(Z, ONE))
    assert not ok and diag.clause == "equivalence"


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_acyclic_cofibrations_are_rhe(seed):
    w = random_acyclic_cofibration(random.Random(seed))
    assert is_rhe(w)[0]
    # the witness needs the path object of the codomain, kept small here
    if len(w.cod.morphisms) <= 40:
        with use_budget(current_budget().scaled(8)):
            assert rhe_witness(w).validate(w)


def test_path_object_section_is_rhe():
    w = path_object(bz2()).w
    assert rhe_witness(w).validate(w)
    assert search_rhe_inverse(w) is not None


def test_homotopy_between_equal_maps_and_its_absence():
    i = generating_acyclic_cofibration()
    H = are_right_homotopic(i, i)
    assert H is not None and H.validate()
    j = EquivariantFunctor(S1, SI, {"0": "1", "0'": "1'"}, {"1_0": "1_1", "1_0'": "1_1'"})
    H = are_right_homotopic(i, j)
    assert H is not None and H.validate()
    k = EquivariantFunctor(S1, SI, {"0": "0'", "0'": "0"}, {"1_0": "1_0'", "1_0'": "1_0"})
    assert are_right_homotopic(i, k) is None


def test_homotopy_requires_parallel_maps():
    with pytest.raises(ValueError):
        are_right_homotopic(identity_functor(S1), identity_functor(SI))


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_homotopic_maps_out_of_totally_fixed_domains_are_equal(seed):
    rng = random.Random(seed)
    A = trivial_involution(random_involutive_groupoid(rng, 2, 2).carrier)
    B = random_involutive_groupoid(rng, 3, 2)
    f, g = random_functor(rng, A, B), random_functor(rng, A, B)
    if f is None:
        return
    if are_right_homotopic(f, g) is not None:
        assert f == g


def test_lift_through_acyclic_cofibration():
    w = path_object(bz2()).w
    v = EquivariantFunctor(ONE, w.cod, {"*": "[1_*]"}, {"1_*": w.on_mor["1_*"]})
    lifted = lift_through_acyclic_cofibration(w, v)
    assert compose_functors(w, lifted) == v
    with pytest.raises(ValueError):
        lift_through_acyclic_cofibration(w, identity_functor(free_double(point())))
