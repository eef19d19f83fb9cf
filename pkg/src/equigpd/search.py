"""Exhaustive search for (equivariant) functors between finite groupoids.

A functor out of a connected groupoid is determined by the image of a root
object, a group homomorphism on the root's automorphism group and the images
of a spanning tree of morphisms out of the root.  The engine enumerates these
data component by component, deriving every other morphism image and pruning
against the caller's constraints as soon as the relevant images are known.

For equivariant searches the components are grouped into orbits under the
involution: a component paired with a different one determines its partner,
while a self-conjugate component is checked for equivariance directly.
"""
from __future__ import annotations

import random
from typing import Iterator, Mapping, Optional

from .core import EquivariantFunctor, Functor, InvolutiveGroupoid, components


class _Component:
    """Precomputed search data for one connected component of the domain."""

    def __init__(self, D, objs, self_conj: bool, equivariant: bool):
        root = objs[0]
        comp = set(objs)
        self.root = root
        self.objs = objs
        t = {root: D.ident(root)}
        order = [root]
        for x in order:
            for m in D.out_of(x):
                y = D.dst(m)
                if y in comp and y not in t:
                    t[y] = D.compose(m, t[x])
                    order.append(y)
        self.order = order
        self.t = t
        pos = {x: k for k, x in enumerate(order)}

        # generators of the vertex group, chosen greedily
        gens: list[str] = []
        elems = [D.ident(root)]
        for a in D.hom(root, root):
            if a in elems:
                continue
            gens.append(a)
            elems, seen = [D.ident(root)], {D.ident(root)}
            for e in elems:
                for g in gens:
                    e2 = D.compose(g, e)
                    if e2 not in seen:
                        seen.add(e2)
                        elems.append(e2)
        self.gens = gens
        edges = []
        for e in elems:
            for k, g in enumerate(gens):
                edges.append((e, k, D.compose(g, e)))
        self.edges = edges
        self.group_id = D.ident(root)

        self.mors = [m for x in order for m in D.out_of(x)]
        self.core = {}
        self.at_step: list[list[str]] = [[] for _ in order]
        for m in self.mors:
            x, y = D.morphisms[m]
            self.core[m] = D.compose_all(D.inv(t[y]), m, t[x])
            self.at_step[max(pos[x], pos[y])].append(m)

        self.self_conj = self_conj and equivariant
        self.eq_obj_at: list[list[str]] = [[] for _ in order]
        self.eq_mor_at: list[list[str]] = [[] for _ in order]
        if self.self_conj:
            a, am = D.invol_obj, D.invol_mor
            for x in order:
                self.eq_obj_at[max(pos[x], pos[a[x]])].append(x)
            for m in self.mors:
                x, y = D.morphisms[m]
                k = max(pos[x], pos[y], pos[a[x]], pos[a[y]])
                self.eq_mor_at[k].append(m)


class FunctorSearch:
    """Enumerate functors ``dom -> cod`` subject to optional constraints.

    ``obj_allowed`` and ``mor_allowed`` map domain identifiers to the admissible
    images; missing keys are unconstrained.  With ``injective`` the object map
    must be injective.  Candidates are tried in identifier order unless an
    ``rng`` is supplied, in which case every choice point is shuffled.
    """

    def __init__(
        self,
        dom,
        cod,
        *,
        equivariant: Optional[bool] = None,
        obj_allowed: Optional[Mapping[str, set]] = None,
        mor_allowed: Optional[Mapping[str, set]] = None,
        injective: bool = False,
        rng: Optional[random.Random] = None,
    ):
        both = isinstance(dom, InvolutiveGroupoid) and isinstance(cod, InvolutiveGroupoid)
        if equivariant is None:
            equivariant = both
        if equivariant and not both:
            raise TypeError("equivariant search needs involutive domain and codomain")
        self.D, self.C = dom, cod
        self.equivariant = equivariant
        self.injective = injective
        self.rng = rng
        obj_allowed = dict(obj_allowed or {})
        mor_allowed = dict(mor_allowed or {})

        comps = components(dom)
        where = {x: k for k, c in enumerate(comps) for x in c}
        self.plans: list[tuple[_Component, Optional[tuple]]] = []
        done = set()
        for k, c in enumerate(comps):
            if k in done:
                continue
            done.add(k)
            partner = None
            self_conj = False
            if equivariant:
                j = where[dom.invol_obj[c[0]]]
                if j == k:
                    self_conj = True
                else:
                    done.add(j)
                    partner = comps[j]
            self.plans.append((_Component(dom, c, self_conj, equivariant), partner))

        # fold the partner's constraints back onto the enumerated component
        if equivariant:
            b, bm = cod.invol_obj, cod.invol_mor
            a, am = dom.invol_obj, dom.invol_mor
            for plan, partner in self.plans:
                if partner is None:
                    continue
                for x in plan.objs:
                    if a[x] in obj_allowed:
                        s = {b[c] for c in obj_allowed[a[x]]}
                        obj_allowed[x] = obj_allowed[x] & s if x in obj_allowed else s
                for m in plan.mors:
                    if am[m] in mor_allowed:
                        s = {bm[n] for n in mor_allowed[am[m]]}
                        mor_allowed[m] = mor_allowed[m] & s if m in mor_allowed else s
        self.obj_allowed = obj_allowed
        self.mor_allowed = mor_allowed

    # -- helpers ---------------------------------------------------------
    def _ordered(self, items):
        items = list(items)
        if self.rng is not None:
            self.rng.shuffle(items)
        return items

    def _obj_ok(self, x, c):
        allowed = self.obj_allowed.get(x)
        return allowed is None or c in allowed

    def _mor_ok(self, m, n):
        allowed = self.mor_allowed.get(m)
        return allowed is None or n in allowed

    def _homs(self, plan: _Component, Fr):
        """Group homomorphisms ``Aut(root) -> Aut(Fr)`` as element maps."""
        C = self.C
        targets = C.hom(Fr, Fr)
        gens = plan.gens
        cands = [self._ordered(n for n in targets if self._mor_ok(g, n)) for g in gens]

        def rec(k, imgs):
            if k == len(gens):
                phi = {plan.group_id: C.ident(Fr)}
                for e, j, e2 in plan.edges:
                    val = C.compose(imgs[j], phi[e])
                    old = phi.get(e2)
                    if old is None:
                        phi[e2] = val
                    elif old != val:
                        return
                yield phi
                return
            for n in cands[k]:
                imgs.append(n)
                yield from rec(k + 1, imgs)
                imgs.pop()

        yield from rec(0, [])

    def _component_maps(self, plan: _Component, used: set) -> Iterator[tuple[dict, dict, set]]:
        D, C = self.D, self.C
        eq = plan.self_conj
        if eq:
            a, am = D.invol_obj, D.invol_mor
            b, bm = C.invol_obj, C.invol_mor
        order = plan.order
        n = len(order)
        root = plan.root
        inj = self.injective
        for Fr in self._ordered(C.objects):
            if not self._obj_ok(root, Fr) or (inj and Fr in used):
                continue
            for phi in self._homs(plan, Fr):
                Fo = {root: Fr}
                Ft = {root: C.ident(Fr)}
                Fm: dict = {}
                if not self._step(plan, 0, phi, Fo, Ft, Fm):
                    continue
                taken = {Fr}
                out = self._ordered(C.out_of(Fr))

                def rec(k):
                    if k == n:
                        yield dict(Fo), dict(Fm), set(taken)
                        return
                    x = order[k]
                    for c in out:
                        y = C.dst(c)
                        if not self._obj_ok(x, y) or not self._mor_ok(plan.t[x], c):
                            continue
                        if inj and (y in used or y in taken):
                            continue
                        Fo[x] = y
                        Ft[x] = c
                        if inj:
                            taken.add(y)
                        if self._step(plan, k, phi, Fo, Ft, Fm):
                            yield from rec(k + 1)
                        for m in plan.at_step[k]:
                            Fm.pop(m, None)
                        if inj:
                            taken.discard(y)
                        del Fo[x], Ft[x]

                yield from rec(1)

    def _step(self, plan: _Component, k, phi, Fo, Ft, Fm) -> bool:
        C = self.C
        for m in plan.at_step[k]:
            x, y = self.D.morphisms[m]
            img = C.compose(C.compose(Ft[y], phi[plan.core[m]]), C.inv(Ft[x]))
            if not self._mor_ok(m, img):
                return False
            Fm[m] = img
        if plan.self_conj:
            a, am = self.D.invol_obj, self.D.invol_mor
            b, bm = C.invol_obj, C.invol_mor
            for x in plan.eq_obj_at[k]:
                if Fo[a[x]] != b[Fo[x]]:
                    return False
            for m in plan.eq_mor_at[k]:
                if Fm[am[m]] != bm[Fm[m]]:
                    return False
        return True

    def _with_partner(self, plan, partner, used) -> Iterator[tuple[dict, dict, set]]:
        if partner is None:
            yield from self._component_maps(plan, used)
            return
        a, am = self.D.invol_obj, self.D.invol_mor
        b, bm = self.C.invol_obj, self.C.invol_mor
        for Fo, Fm, taken in self._component_maps(plan, used):
            Fo2 = {a[x]: b[y] for x, y in Fo.items()}
            if self.injective:
                mirrored = set(Fo2.values())
                if mirrored & taken or mirrored & used:
                    continue
                taken = taken | mirrored
            Fo.update(Fo2)
            Fm.update({am[m]: bm[n] for m, n in Fm.items()})
            yield Fo, Fm, taken

    def __iter__(self) -> Iterator[Functor]:
        cls = EquivariantFunctor if self.equivariant else Functor
        plans = self.plans

        def rec(k, used, Fo, Fm):
            if k == len(plans):
                yield cls(self.D, self.C, dict(Fo), dict(Fm))
                return
            plan, partner = plans[k]
            for o, m, taken in self._with_partner(plan, partner, used):
                Fo.update(o)
                Fm.update(m)
                yield from rec(k + 1, used | taken if self.injective else used, Fo, Fm)
                for x in o:
                    del Fo[x]
                for mm in m:
                    del Fm[mm]

        yield from rec(0, frozenset(), {}, {})


def iter_functors(dom, cod, **kw) -> Iterator[Functor]:
    """All functors ``dom -> cod`` (equivariant ones when both are involutive)."""
    return iter(FunctorSearch(dom, cod, **kw))


def first_functor(dom, cod, **kw) -> Optional[Functor]:
    return next(iter_functors(dom, cod, **kw), None)


def count_functors(dom, cod, **kw) -> int:
    return sum(1 for _ in iter_functors(dom, cod, **kw))


def _signature(G, x):
    fixed = isinstance(G, InvolutiveGroupoid) and G.invol_obj[x] == x
    out = G.out_of(x)
    return (len(G.hom(x, x)), len(out), len({G.dst(m) for m in out}), fixed)


def is_isomorphism(F: Functor) -> bool:
    D, C = F.dom, F.cod
    return (
        len(set(F.on_obj.values())) == len(C.objects) == len(D.objects)
        and len(set(F.on_mor.values())) == len(C.morphisms) == len(D.morphisms)
    )


def find_isomorphism(G, H, *, over: Optional[tuple[Functor, Functor]] = None,
                     obj_allowed: Optional[Mapping[str, set]] = None) -> Optional[Functor]:
    """An isomorphism ``G -> H``; with ``over=(p, q)`` it must satisfy ``q∘F = p``."""
    if len(G.objects) != len(H.objects) or len(G.morphisms) != len(H.morphisms):
        return None
    if isinstance(G, InvolutiveGroupoid) != isinstance(H, InvolutiveGroupoid):
        return None
    if isinstance(G, InvolutiveGroupoid) and len(G.fixed_objects) != len(H.fixed_objects):
        return None
    by_sig: dict = {}
    for y in H.objects:
        by_sig.setdefault(_signature(H, y), set()).add(y)
    allowed = {x: set(by_sig.get(_signature(G, x), ())) for x in G.objects}
    if obj_allowed:
        for x, s in obj_allowed.items():
            allowed[x] &= set(s)
    mor_allowed = None
    if over is not None:
        p, q = over
        q_inv_o: dict = {}
        for y in H.objects:
            q_inv_o.setdefault(q.on_obj[y], set()).add(y)
        q_inv_m: dict = {}
        for n in H.mor_ids:
            q_inv_m.setdefault(q.on_mor[n], set()).add(n)
        for x in G.objects:
            allowed[x] &= q_inv_o.get(p.on_obj[x], set())
        mor_allowed = {m: q_inv_m.get(p.on_mor[m], set()) for m in G.mor_ids}
    if any(not s for s in allowed.values()):
        return None
    for F in iter_functors(G, H, obj_allowed=allowed, mor_allowed=mor_allowed, injective=True):
        if len(set(F.on_mor.values())) == len(H.morphisms):
            return F
    return None


def are_isomorphic(G, H) -> bool:
    return find_isomorphism(G, H) is not None
