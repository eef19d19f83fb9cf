"""Weak components, right homotopies and right homotopy equivalences.

A map is a right homotopy equivalence exactly when it is an equivalence of
underlying groupoids inducing a bijection on fixed objects.  Besides that
decision, :func:`rhe_witness` builds an explicit homotopy inverse together
with both right homotopies, and checks them before returning.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    EquivariantFunctor,
    InvolutiveGroupoid,
    components,
    compose_functors,
    full_subgroupoid,
    identity_functor,
    pair_name,
    validate_functor,
)
from .modelstructure import (
    ConstructionDefect,
    PathObject,
    equivalence_defect,
    fixed_point_defect,
    induces_full_fixed_iso,
    induces_strict_fixed_iso,
    is_acyclic_cofibration,
    fixed_point_bijection,
    is_equivalence,
    path_object,
)
from .search import first_functor, iter_functors


# ----------------------------------------------------------------------
# weak components
# ----------------------------------------------------------------------
@dataclass
class WeakComponent:
    objects: tuple
    groupoid: InvolutiveGroupoid


def weak_components(A: InvolutiveGroupoid) -> list[WeakComponent]:
    """Unions of a connected component with its image under the involution."""
    comps = components(A)
    where = {x: k for k, c in enumerate(comps) for x in c}
    out, seen = [], set()
    for k, c in enumerate(comps):
        if k in seen:
            continue
        j = where[A.invol_obj[c[0]]]
        seen |= {k, j}
        objs = tuple(sorted(set(c) | set(comps[j])))
        out.append(WeakComponent(objs, full_subgroupoid(A, objs)))
    return out


def is_weakly_connected(A: InvolutiveGroupoid) -> bool:
    comps = components(A)
    if len(comps) <= 1:
        return True
    if len(comps) > 2:
        return False
    return A.invol_obj[comps[0][0]] in comps[1]


# ----------------------------------------------------------------------
# right homotopies
# ----------------------------------------------------------------------
@dataclass
class RightHomotopy:
    H: EquivariantFunctor
    path: PathObject
    endpoints: tuple  # (f, g)

    def validate(self) -> bool:
        f, g = self.endpoints
        if not validate_functor(self.H).ok:
            return False
        ph = compose_functors(self.path.proj, self.H)
        A = self.H.dom
        return all(ph.on_obj[x] == pair_name(f.on_obj[x], g.on_obj[x]) for x in A.objects) and all(
            ph.on_mor[m] == pair_name(f.on_mor[m], g.on_mor[m]) for m in A.mor_ids
        )


def _homotopy_constraints(P: PathObject, f, g):
    by_o: dict = {}
    for Q in P.PB.objects:
        by_o.setdefault(P.proj.on_obj[Q], set()).add(Q)
    by_m: dict = {}
    for n in P.PB.mor_ids:
        by_m.setdefault(P.proj.on_mor[n], set()).add(n)
    A = f.dom
    obj_allowed = {x: by_o.get(pair_name(f.on_obj[x], g.on_obj[x]), set()) for x in A.objects}
    mor_allowed = {m: by_m.get(pair_name(f.on_mor[m], g.on_mor[m]), set()) for m in A.mor_ids}
    return obj_allowed, mor_allowed


def are_right_homotopic(f: EquivariantFunctor, g: EquivariantFunctor,
                        path: Optional[PathObject] = None) -> Optional[RightHomotopy]:
    """Search for ``H: A -> PB`` with ``proj∘H = <f, g>`` through the canonical path object."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("maps must share domain and codomain")
    P = path or path_object(f.cod, check=False)
    obj_allowed, mor_allowed = _homotopy_constraints(P, f, g)
    if any(not s for s in obj_allowed.values()) or any(not s for s in mor_allowed.values()):
        return None
    H = first_functor(f.dom, P.PB, obj_allowed=obj_allowed, mor_allowed=mor_allowed)
    return None if H is None else RightHomotopy(H, P, (f, g))


# ----------------------------------------------------------------------
# the decision procedure
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Diagnosis:
    clause: Optional[str]  # "equivalence" or "fixed points"; None when f is an RHE
    witness: Optional[tuple] = None

    def __str__(self):
        if self.clause is None:
            return "right homotopy equivalence"
        return f"fails {self.clause}: {self.witness}"


def is_rhe(f: EquivariantFunctor) -> tuple[bool, Diagnosis]:
    defect = equivalence_defect(f)
    if defect is not None:
        return False, Diagnosis("equivalence", defect)
    defect = fixed_point_defect(f)
    if defect is not None:
        return False, Diagnosis("fixed points", defect)
    return True, Diagnosis(None)


def rhe_clauses(f: EquivariantFunctor) -> dict[str, bool]:
    """The three fixed-point characterizations, each with the equivalence condition."""
    eq = is_equivalence(f)
    return {
        "full_fixed_iso": eq and induces_full_fixed_iso(f),
        "strict_fixed_iso": eq and induces_strict_fixed_iso(f),
        "fixed_point_bijection": eq and fixed_point_bijection(f),
    }


@dataclass
class RheWitness:
    inverse: EquivariantFunctor
    homotopy_left: RightHomotopy  # g∘f ~ 1_A
    homotopy_right: RightHomotopy  # f∘g ~ 1_B

    def validate(self, f: EquivariantFunctor) -> bool:
        g = self.inverse
        if not validate_functor(g).ok:
            return False
        gf, fg = compose_functors(g, f), compose_functors(f, g)
        if self.homotopy_left.endpoints != (gf, identity_functor(f.dom)):
            return False
        if self.homotopy_right.endpoints != (fg, identity_functor(f.cod)):
            return False
        return self.homotopy_left.validate() and self.homotopy_right.validate()


def _path_point(P: PathObject, u: str) -> str:
    """The path-object point over a morphism that is not a fixed non-identity arrow."""
    (Q,) = P.objects_over(u)
    return Q


def _natural_homotopy(P: PathObject, source: EquivariantFunctor, comp: dict) -> EquivariantFunctor:
    """``x ↦ [comp_x]`` for a natural isomorphism ``comp: source ⇒ 1``."""
    X = source.dom
    on_obj = {x: _path_point(P, comp[x]) for x in X.objects}
    on_mor = {m: P.mor(on_obj[X.src(m)], source.on_mor[m], on_obj[X.dst(m)]) for m in X.mor_ids}
    return EquivariantFunctor(X, P.PB, on_obj, on_mor)


def rhe_witness(f: EquivariantFunctor) -> Optional[RheWitness]:
    """A homotopy inverse with explicit right homotopies, built orbit by orbit."""
    ok, _ = is_rhe(f)
    if not ok:
        return None
    A, B = f.dom, f.cod
    g_obj, psi = {}, {}
    fixed_pre = {f.on_obj[x]: x for x in A.fixed_objects}
    for b in B.objects:
        if b in g_obj:
            continue
        bb = B.invol_obj[b]
        if bb == b:
            g_obj[b] = fixed_pre[b]
            psi[b] = B.ident(b)
            continue
        a, p = min((a, p) for a in A.objects for p in B.hom(f.on_obj[a], b))
        g_obj[b], psi[b] = a, p
        g_obj[bb], psi[bb] = A.invol_obj[a], B.invol_mor[p]

    hom_lookup: dict = {}
    for m in A.mor_ids:
        hom_lookup[f.on_mor[m], A.src(m), A.dst(m)] = m
    g_mor = {}
    for m in B.mor_ids:
        s, d = B.morphisms[m]
        target = B.compose_all(B.inv(psi[d]), m, psi[s])
        g_mor[m] = hom_lookup[target, g_obj[s], g_obj[d]]
    g = EquivariantFunctor(B, A, g_obj, g_mor)

    u = {x: hom_lookup[psi[f.on_obj[x]], g_obj[f.on_obj[x]], x] for x in A.objects}
    gf, fg = compose_functors(g, f), compose_functors(f, g)
    PA, PB = path_object(A, check=False), path_object(B, check=False)
    left = RightHomotopy(_natural_homotopy(PA, gf, u), PA, (gf, identity_functor(A)))
    right = RightHomotopy(_natural_homotopy(PB, fg, psi), PB, (fg, identity_functor(B)))
    w = RheWitness(g, left, right)
    if not w.validate(f):
        raise ConstructionDefect("rhe witness failed validation")
    return w


def search_rhe_inverse(f: EquivariantFunctor) -> Optional[tuple]:
    """Brute force: some ``g`` with both composites right homotopic to identities."""
    A, B = f.dom, f.cod
    PA, PB = path_object(A, check=False), path_object(B, check=False)
    for g in iter_functors(B, A):
        h1 = are_right_homotopic(compose_functors(g, f), identity_functor(A), PA)
        if h1 is None:
            continue
        h2 = are_right_homotopic(compose_functors(f, g), identity_functor(B), PB)
        if h2 is not None:
            return g, h1, h2
    return None


# ----------------------------------------------------------------------
# lifting out of totally fixed groupoids
# ----------------------------------------------------------------------
def lift_through_acyclic_cofibration(w: EquivariantFunctor, v: EquivariantFunctor) -> EquivariantFunctor:
    """The unique ``v̂`` with ``w∘v̂ = v``, for ``v`` out of a groupoid of fixed objects."""
    A = v.dom
    if len(A.fixed_objects) != len(A.objects):
        raise ValueError("domain must consist of fixed objects")
    if not is_acyclic_cofibration(w).verdict:
        raise ValueError("w must be an acyclic cofibration")
    Bw = w.dom
    pre = {w.on_obj[y]: y for y in Bw.fixed_objects}
    on_obj = {x: pre[v.on_obj[x]] for x in A.objects}
    lookup = {}
    for n in Bw.mor_ids:
        lookup[w.on_mor[n], Bw.src(n), Bw.dst(n)] = n
    on_mor = {m: lookup[v.on_mor[m], on_obj[A.src(m)], on_obj[A.dst(m)]] for m in A.mor_ids}
    return EquivariantFunctor(A, Bw, on_obj, on_mor)
