import random

import pytest
from hypothesis import given, settings

from equigpd.core import bz2, cyclic_group, free_double, interval, point, rename, trivial_involution, validate_functor
from equigpd.modelstructure import S1, SI
from equigpd.search import FunctorSearch, count_functors, find_isomorphism, first_functor, is_isomorphism

from oracle import brute_functors
from strategies import groupoids


@pytest.mark.parametrize("A,B,n", [
    (SI, S1, 2),
    (S1, SI, 4),
    (SI, SI, 8),
])
def test_known_equivariant_counts(A, B, n):
    # counts established by brute force over all raw assignments
    assert count_functors(A, B) == n == len(brute_functors(A, B))


def test_group_homomorphism_counts():
    Z2, Z3 = cyclic_group(2), cyclic_group(3)
    assert count_functors(Z3, Z3) == 3
    assert count_functors(Z2, Z3) == 1
    assert count_functors(Z2, Z2) == len(brute_functors(Z2, Z2))


@settings(max_examples=25)
@given(groupoids(3, 2), groupoids(2, 2))
def test_search_matches_brute_force(A, B):
    found = {tuple(sorted(F.on_mor.items())) + tuple(sorted(F.on_obj.items())) for F in FunctorSearch(A, B)}
    brute = {tuple(sorted(F.on_mor.items())) + tuple(sorted(F.on_obj.items())) for F in brute_functors(A, B)}
    assert found == brute


@given(groupoids(2, 3), groupoids(2, 2))
def test_non_equivariant_search_matches_brute_force(A, B):
    n = count_functors(A, B, equivariant=False)
    assert n == len(brute_functors(A.carrier, B.carrier, equivariant=False))


@given(groupoids(3, 2), groupoids(3, 2))
def test_every_found_functor_validates(A, B):
    for k, F in enumerate(FunctorSearch(A, B, rng=random.Random(7))):
        assert validate_functor(F).ok
        if k > 20:
            break


def test_injective_search():
    assert count_functors(S1, SI, injective=True) == 4
    assert count_functors(SI, S1, injective=True) == 0


def test_constraints_restrict_images():
    F = first_functor(S1, SI, obj_allowed={"0": {"1"}, "0'": {"1'"}})
    assert F.on_obj == {"0": "1", "0'": "1'"}
    assert first_functor(S1, SI, obj_allowed={"0": {"1"}, "0'": {"0'"}}) is None


@given(groupoids(3, 3))
def test_find_isomorphism_after_renaming(G):
    H, _ = rename(G, {x: "r" + x for x in G.objects}, {m: "r" + m for m in G.mor_ids})
    iso = find_isomorphism(G, H)
    assert iso is not None and is_isomorphism(iso)


def test_non_isomorphic_pairs():
    assert find_isomorphism(bz2(), trivial_involution(point())) is None
    assert find_isomorphism(free_double(interval()), trivial_involution(interval())) is None
