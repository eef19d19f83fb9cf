"""The universe of small discrete fibrations is not univalent.

For a set of seed sets we build the sub-universe they generate, its
fibration of equivalences E over U x U, and the unit map U -> E picking
identities. Univalence asks that the unit be a right homotopy equivalence.

Run with:  python3 demos/univalence_counterexample.py
"""
from equigpd.universe import equiv_fibration, realize_subuniverse, univalence_check


def report(seeds):
    sub = realize_subuniverse(seeds)
    ef = equiv_fibration(sub)
    v = univalence_check(sub)
    print(f"seeds {seeds}: U has {len(sub.U.objects)} objects, E has {len(ef.E.objects)}")
    print(f"  unit is an equivalence: {v.unit_is_equivalence}, univalent: {v.verdict}")
    if v.triple is not None:
        src, dst, m = v.triple
        print(f"  fixed point of E outside the unit: {m.name}")
        print(f"  endpoints {'coincide' if src == dst else 'differ'}")
    print()


# the swap of {0,1} is a self-equivalence fixed by the involution
report([["0", "1"]])
# two singletons: an equivalence between different fixed points of U
report([["0"], ["a"]])
# with only the empty set there is nothing to go wrong
report([[]])
