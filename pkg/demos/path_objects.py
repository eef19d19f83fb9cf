"""Path objects: the canonical factorisation of a diagonal.

For B(Z2) with the trivial involution the path object has one object per
arrow and a second copy of the fixed non-identity arrow.

Run with:  python3 demos/path_objects.py
"""
from equigpd.core import bz2
from equigpd.modelstructure import is_acyclic_cofibration, is_fibration, path_object, path_object_diagonal_ok

B = bz2()
P = path_object(B)
print(f"B has {len(B.objects)} object and {len(B.morphisms)} morphisms")
print(f"PB has {len(P.PB.objects)} objects and {len(P.PB.morphisms)} morphisms")
for x in P.PB.objects:
    print(f"  {x:<8} over {P.label[x]:<6} involution -> {P.PB.invol_obj[x]}")
print("fixed objects:", P.PB.fixed_objects)
print("w: B -> PB acyclic cofibration:", bool(is_acyclic_cofibration(P.w)))
print("PB -> B x B fibration:", is_fibration(P.proj)[0])
print("diagonal factors as proj . w:", path_object_diagonal_ok(P))
