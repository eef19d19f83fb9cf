import pytest
from hypothesis import given

from equigpd.core import (
    EquivariantFunctor,
    FiniteGroupoid,
    InvalidStructure,
    InvolutiveGroupoid,
    anchored_extension,
    bz2,
    components,
    compose_functors,
    cyclic_group,
    discrete,
    disjoint_union,
    empty,
    ensure_valid,
    fiber_product,
    fixed_full,
    fixed_strict,
    free_double,
    identity_functor,
    interval,
    point,
    product,
    rename,
    terminal_map,
    trivial_involution,
    validate,
    validate_functor,
)
from equigpd.search import is_isomorphism

from oracle import brute_functors, weak_component_count
from strategies import functors, groupoids


def _table(G):
    return FiniteGroupoid(G.objects, G.morphisms, G.identity, G.inverse, dict(G.compose_table))


def test_interval_and_free_double_sizes():
    I = interval()
    assert (len(I.objects), len(I.morphisms)) == (2, 4)
    SI = free_double(I)
    assert (len(SI.objects), len(SI.morphisms)) == (4, 8)
    assert SI.invol_obj["0"] == "0'" and SI.invol_mor["phi'"] == "phi"
    assert validate(SI).ok


def test_standard_groupoids_validate():
    for G in (point(), interval(), cyclic_group(4), bz2(), free_double(point()), empty(), discrete("abc")):
        assert validate(G).ok


def test_cyclic_group_composition():
    Z = cyclic_group(3)
    assert Z.compose("g1", "g2") == "1_*"
    assert Z.inv("g1") == "g2"


def _broken(**changes):
    I = interval()
    parts = dict(objects=I.objects, morphisms=dict(I.morphisms), identity=dict(I.identity),
                 inverse=dict(I.inverse), compose=dict(I.compose_table))
    for k, v in changes.items():
        v(parts[k])
    return FiniteGroupoid(parts["objects"], parts["morphisms"], parts["identity"], parts["inverse"], parts["compose"])


@pytest.mark.parametrize("mutate,law", [
    (dict(morphisms=lambda m: m.__setitem__("phi", ("0", "9"))), "dst"),
    (dict(morphisms=lambda m: m.__setitem__("phi", ("9", "1"))), "src"),
    (dict(compose=lambda c: c.pop(("phi^-1", "phi"))), "compose total"),
    (dict(compose=lambda c: c.__setitem__(("phi^-1", "phi"), "phi")), "compose typing"),
    (dict(inverse=lambda i: i.__setitem__("phi", "phi")), "inverse law"),
    (dict(identity=lambda i: i.__setitem__("0", "phi")), "identity"),
])
def test_validate_names_the_violated_law(mutate, law):
    rep = validate(_broken(**mutate))
    assert not rep.ok
    assert law in rep.laws()


def test_non_associative_table_is_caught():
    # a "group" on {e, a, b} with a∘a = e, b∘b = e, a∘b = b∘a = a is not associative
    mors = {m: ("*", "*") for m in ("e", "a", "b")}
    comp = {("e", x): x for x in mors} | {(x, "e"): x for x in mors}
    comp |= {("a", "a"): "e", ("b", "b"): "e", ("a", "b"): "a", ("b", "a"): "a"}
    G = FiniteGroupoid(["*"], mors, {"*": "e"}, {"e": "e", "a": "a", "b": "b"}, comp)
    assert "associativity" in validate(G).laws()


def test_involution_laws():
    I = interval()
    not_involutive = InvolutiveGroupoid(I, {"0": "1", "1": "1"}, {m: m for m in I.mor_ids})
    assert "involution functor" in validate(not_involutive).laws() or "involution involutive" in validate(not_involutive).laws()
    cycle = InvolutiveGroupoid(cyclic_group(3), {"*": "*"}, {"1_*": "1_*", "g1": "g2", "g2": "g1"})
    assert validate(cycle).ok
    bad = InvolutiveGroupoid(cyclic_group(3), {"*": "*"}, {"1_*": "g1", "g1": "g2", "g2": "g1"})
    assert not validate(bad).ok


def test_ensure_valid_raises():
    with pytest.raises(InvalidStructure):
        ensure_valid(_broken(compose=lambda c: c.pop(("phi^-1", "phi"))))


def test_fixed_strict_on_inverted_cyclic_group():
    # inversion on B(Z3): every object fixed, only the identity is a fixed morphism
    G = InvolutiveGroupoid(cyclic_group(3), {"*": "*"}, {"1_*": "1_*", "g1": "g2", "g2": "g1"})
    S = fixed_strict(G)
    assert S.objects == ("*",) and set(S.morphisms) == {"1_*"}
    F = fixed_full(G)
    assert len(F.morphisms) == 3
    assert F.invol_mor["g1"] == "g2"  # restricted, not trivialized


def test_fixed_parts_of_free_double_are_empty():
    SI = free_double(interval())
    assert fixed_full(SI).objects == ()
    assert fixed_strict(SI).objects == ()


def test_components_sorted():
    G = disjoint_union(interval(), point("z"))
    assert components(G) == [("0", "1"), ("z",)]


def test_disjoint_union_tags_on_clash():
    G = disjoint_union(point(), point())
    assert sorted(G.objects) == ["0.*", "1.*"]
    assert validate(G).ok


@given(groupoids(3, 2), groupoids(3, 2))
def test_product_size_and_laws(G, H):
    P = product(G, H).apex
    assert len(P.objects) == len(G.objects) * len(H.objects)
    assert len(P.morphisms) == len(G.morphisms) * len(H.morphisms)
    assert validate(P).ok


@given(functors(3, 2))
def test_fiber_product_with_itself(f):
    apex, p1, p2 = fiber_product(f, f)
    expected = sum(1 for x in f.dom.objects for y in f.dom.objects if f.on_obj[x] == f.on_obj[y])
    assert len(apex.objects) == expected
    assert validate(apex).ok
    assert compose_functors(f, p1) == compose_functors(f, p2)


@given(functors(3, 2))
def test_identity_and_associativity_of_composition(f):
    assert validate_functor(f).ok
    assert compose_functors(f, identity_functor(f.dom)) == f
    assert compose_functors(identity_functor(f.cod), f) == f
    t = terminal_map(f.cod)
    assert compose_functors(compose_functors(t, f), identity_functor(f.dom)) == compose_functors(t, compose_functors(f, identity_functor(f.dom)))


@given(groupoids(3, 2))
def test_rename_is_an_isomorphism(G):
    on = {x: f"n{k}" for k, x in enumerate(G.objects)}
    om = {m: f"m{k}" for k, m in enumerate(G.mor_ids)}
    H, iso = rename(G, on, om)
    assert validate(H).ok and validate_functor(iso).ok and is_isomorphism(iso)


@given(groupoids(3, 2))
def test_lazy_and_tabled_composition_agree(G):
    T = _table(G)
    assert T == G.carrier


def test_anchored_extension_is_equivalent_copy():
    X = free_double(point("0"))
    ext = anchored_extension(X, {"c": "0", "c'": "0'"}, {"c": "c'", "c'": "c"})
    assert validate(ext.groupoid).ok
    assert len(ext.groupoid.objects) == 4
    assert len(ext.groupoid.hom("c", "0")) == 1
    assert validate_functor(ext.inclusion).ok and validate_functor(ext.retraction).ok


def test_terminal_map_counts_match_oracle():
    for G in (free_double(interval()), bz2(), trivial_involution(interval())):
        assert len(brute_functors(G, trivial_involution(point()))) == 1
        assert weak_component_count(G) >= 1
