"""Dependent products need not preserve right homotopy equivalences.

Take the free involutive groupoid S(1) on a point, mapping to the terminal
groupoid 1, and the collapse f: S(I) -> S(1) of the free double of the
interval. Both are fibrations over 1 and f is a right homotopy equivalence.
Its dependent product along S(1) -> 1, however, is not.

Run with:  python3 demos/funext_counterexample.py
"""
from equigpd.homotopy import is_rhe
from equigpd.modelstructure import is_fibration
from equigpd.ttfc import dependent_product
from equigpd.universe import funext_instance

g, f = funext_instance()
print("g: S(1) -> 1        fibration:", is_fibration(g)[0])
print("f: S(I) -> S(1)     fibration:", is_fibration(f)[0], " RHE:", is_rhe(f)[0])

P = dependent_product(g, f)
print(f"\nthe product has {len(P.dom.objects)} objects and {len(P.dom.morphisms)} morphisms")
print("its sections, by object map:")
for name in P.dom.objects:
    po = P.objects[name]
    tag = "fixed" if P.dom.invol_obj[name] == name else "swapped with " + P.dom.invol_obj[name]
    print(f"  {name:<12} {po.s_obj}   ({tag})")

# the identity of S(1) is a single fixed point, but the product has two
ok, diag = is_rhe(P.pi)
print("\nPi(f) is an RHE:", ok)
print("reason:", diag)
