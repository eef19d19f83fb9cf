import pytest
from hypothesis import given, settings

from equigpd.core import (
    EquivariantFunctor,
    bz2,
    compose_functors,
    cyclic_group,
    empty,
    free_double,
    identity_functor,
    interval,
    point,
    terminal_map,
    trivial_involution,
    validate,
    validate_functor,
)
from equigpd.modelstructure import (
    S1,
    SI,
    LiftingSquare,
    NoTarget,
    acyclic_cofibration_clauses,
    arrow_groupoid,
    attaching_map,
    decompose_acyclic_cofibration,
    equivalence_defect,
    factorize,
    generating_acyclic_cofibration,
    is_acyclic_cofibration,
    is_discrete_fibration,
    is_equivalence,
    is_fibration,
    path_object,
    path_object_diagonal_ok,
    pushout_cell,
    replay_cells,
    solve_lifting,
)
from equigpd.search import are_isomorphic, first_functor, is_isomorphism

from oracle import (
    brute_functors,
    brute_is_acyclic_cofibration,
    brute_is_discrete_fibration,
    brute_is_equivalence,
    brute_is_fibration,
    brute_is_iso,
)
from strategies import functors

ONE = trivial_involution(point())


@given(functors(3, 2))
def test_fibration_tests_match_oracle(f):
    assert is_fibration(f)[0] == brute_is_fibration(f)
    assert is_discrete_fibration(f)[0] == brute_is_discrete_fibration(f)


@given(functors(3, 2))
def test_equivalence_matches_oracle(f):
    assert is_equivalence(f) == brute_is_equivalence(f)
    assert (equivalence_defect(f) is None) == brute_is_equivalence(f)


@given(functors(3, 2))
def test_acyclic_cofibration_matches_oracle_and_clauses_agree(f):
    cert = is_acyclic_cofibration(f)
    assert cert.verdict == brute_is_acyclic_cofibration(f)
    clauses = acyclic_cofibration_clauses(f)
    assert len(set(clauses.values())) == 1
    assert clauses["fixed_point_bijection"] == cert.verdict
    assert (cert.witness is None) == cert.verdict


def test_cleavage_choice():
    g = terminal_map(S1, ONE)
    ok, cl = is_fibration(g)
    assert ok and len(cl) == 2
    ok, cl = is_fibration(generating_acyclic_cofibration())
    assert not ok and cl is None


def test_basic_acyclic_cofibrations():
    assert is_acyclic_cofibration(generating_acyclic_cofibration())
    assert is_acyclic_cofibration(identity_functor(bz2()))
    # 1 -> S(1) is not even equivariant-possible; 0 -> 1 misses the fixed point
    zero_to_one = EquivariantFunctor(trivial_involution(empty()), ONE, {}, {})
    cert = is_acyclic_cofibration(zero_to_one)
    assert not cert and not cert.fixed_point_bijection and not cert.equivalence


def test_interval_inclusion_of_fixed_endpoint_is_not_acyclic():
    # 1 -> I with trivial involutions: an equivalence, but I has a second fixed object
    I = trivial_involution(interval())
    f = EquivariantFunctor(ONE, I, {"*": "0"}, {"1_*": "1_0"})
    assert is_equivalence(f)
    cert = is_acyclic_cofibration(f)
    assert not cert.fixed_point_bijection
    assert cert.witness[0] == "fixed object outside the image of fixed objects"


def test_lifting_against_fibration_has_filler():
    i = generating_acyclic_cofibration()
    p = terminal_map(SI, ONE)
    sq = LiftingSquare(i, p, EquivariantFunctor(S1, SI, {"0": "1", "0'": "1'"}, {"1_0": "1_1", "1_0'": "1_1'"}),
                       terminal_map(SI, ONE))
    d = solve_lifting(sq)
    assert d is not None and sq.is_filler(d) and validate_functor(d).ok


def test_lifting_without_filler():
    # 0 -> 1 against S(1) -> 1: a filler would pick a fixed object of S(1)
    zero = trivial_involution(empty())
    left = EquivariantFunctor(zero, ONE, {}, {})
    right = terminal_map(S1, ONE)
    sq = LiftingSquare(left, right, EquivariantFunctor(zero, S1, {}, {}), identity_functor(ONE))
    assert sq.commutes()
    assert solve_lifting(sq) is None
    assert not brute_functors(ONE, S1)


def test_non_commuting_square_is_rejected():
    i = generating_acyclic_cofibration()
    p = identity_functor(SI)
    top = EquivariantFunctor(S1, SI, {"0": "1", "0'": "1'"}, {"1_0": "1_1", "1_0'": "1_1'"})
    with pytest.raises(ValueError):
        solve_lifting(LiftingSquare(i, p, top, identity_functor(SI)))


def _path_oracle_counts(B):
    """Objects: one per arrow, two per fixed non-identity arrow; morphisms: hom-set of the sources."""
    label_src = []
    for u, (s, _) in B.morphisms.items():
        copies = 2 if (B.invol_mor[u] == u and B.identity[s] != u) else 1
        label_src += [s] * copies
    n_mor = sum(len(B.hom(x, y)) for x in label_src for y in label_src)
    return len(label_src), n_mor


@pytest.mark.parametrize("B,n_obj,n_mor", [
    (S1, 2, 2),
    (SI, 8, 32),
    (bz2(), 3, 18),
    (ONE, 1, 1),
    (trivial_involution(cyclic_group(3)), 5, 75),
])
def test_path_object_sizes(B, n_obj, n_mor):
    P = path_object(B)
    assert (len(P.PB.objects), len(P.PB.morphisms)) == (n_obj, n_mor) == _path_oracle_counts(B)
    assert validate(P.PB).ok
    assert path_object_diagonal_ok(P)
    assert brute_is_acyclic_cofibration(P.w) and brute_is_fibration(P.proj)


def test_bz2_path_object_fixed_point():
    P = path_object(bz2())
    assert P.PB.fixed_objects == ("[1_*]",)
    assert P.PB.invol_obj["[g1,+]"] == "[g1,-]"


@given(functors(2, 2))
def test_path_object_of_random_codomain(f):
    P = path_object(f.cod)
    assert _path_oracle_counts(f.cod) == (len(P.PB.objects), len(P.PB.morphisms))


def test_arrow_groupoid_objects_are_arrows():
    A = arrow_groupoid(SI)
    assert len(A.groupoid.objects) == len(SI.morphisms)
    assert validate(A.groupoid).ok


@settings(max_examples=30)
@given(functors(3, 2))
def test_factorization(f):
    fac = factorize(f)
    assert compose_functors(fac.q, fac.j) == f
    assert brute_is_acyclic_cofibration(fac.j)
    assert brute_is_fibration(fac.q)


def test_pushout_cell_of_point_cell_is_interval_double():
    step = pushout_cell(attaching_map(S1))
    assert len(step.new_objects) == 2
    assert validate(step.groupoid).ok
    assert are_isomorphic(step.groupoid, SI)
    assert is_acyclic_cofibration(step.inclusion)
    assert compose_functors(step.retraction, step.inclusion) == identity_functor(S1)


def test_pushout_cell_into_empty_has_no_target():
    with pytest.raises(NoTarget):
        attaching_map(trivial_involution(empty()))


def test_decompose_generating_map():
    i = generating_acyclic_cofibration()
    cells = decompose_acyclic_cofibration(i)
    assert len(cells) == 1
    rp = replay_cells(i, cells)
    assert is_isomorphism(rp.comparison) and brute_is_iso(rp.comparison)
    assert compose_functors(rp.comparison, rp.inclusion) == i


def test_decompose_path_object_sections():
    # S(1) has no non-identity arrows, so w is already an isomorphism
    assert decompose_acyclic_cofibration(path_object(S1).w) == []
    w = path_object(bz2()).w
    cells = decompose_acyclic_cofibration(w)
    assert len(cells) == 1
    rp = replay_cells(w, cells)
    assert is_isomorphism(rp.comparison)


def test_decompose_rejects_non_acyclic():
    with pytest.raises(ValueError):
        decompose_acyclic_cofibration(terminal_map(S1, ONE))


@settings(max_examples=25)
@given(functors(3, 2))
def test_decompose_replays_factorization(f):
    j = factorize(f).j
    cells = decompose_acyclic_cofibration(j)
    rp = replay_cells(j, cells)
    assert validate_functor(rp.comparison).ok and is_isomorphism(rp.comparison)
    assert compose_functors(rp.comparison, rp.inclusion) == j


def test_first_functor_out_of_fixed_domain_needs_fixed_target():
    assert first_functor(ONE, free_double(point())) is None
