"""Pullbacks, dependent products and diagonals of fibrations.

The dependent product ``Π_g f`` of a fibration ``f: C -> A`` along a
fibration ``g: A -> B`` is built explicitly.  Its objects are pairs
``(y, s)`` with ``s`` a section of ``f`` over the fiber ``g⁻¹{y}``; its
morphisms are pairs ``(u, v)`` with ``v`` a map over ``A`` out of the tube
``A ×_B I`` of ``u``.  Every tube map is materialized, so composites are
looked up among genuine functors rather than trusted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .budget import BudgetExceeded, current_budget
from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    Functor,
    InvolutiveGroupoid,
    compose_functors,
    fiber_product,
    interval,
    pair_name,
    subgroupoid,
)
from .modelstructure import ConstructionDefect, is_fibration
from .search import FunctorSearch, iter_functors


class NotAFibration(ValueError):
    pass


def _require_fibration(f, what="map"):
    ok, cl = is_fibration(f)
    if not ok:
        raise NotAFibration(f"{what} is not a fibration")
    return cl


# ----------------------------------------------------------------------
# pullbacks
# ----------------------------------------------------------------------
@dataclass
class PullbackSquare:
    """``apex = dom(along) ×_B dom(of)``; ``proj1`` is the pulled-back fibration."""

    apex: InvolutiveGroupoid
    proj1: EquivariantFunctor
    proj2: EquivariantFunctor
    along: EquivariantFunctor
    of: EquivariantFunctor

    def commutes(self) -> bool:
        return compose_functors(self.along, self.proj1) == compose_functors(self.of, self.proj2)


def pullback(of: EquivariantFunctor, along: EquivariantFunctor) -> PullbackSquare:
    """Pull the fibration ``of`` back along ``along``; objects are pairs ``(y|x)``."""
    _require_fibration(of, "of")
    if of.cod != along.cod:
        raise ValueError("pullback needs a common codomain")
    budget = current_budget()
    apex, p1, p2 = fiber_product(along, of)
    budget.check_groupoid(apex)
    return PullbackSquare(apex, p1, p2, along, of)


def mediating_map(sq: PullbackSquare, a: Functor, b: Functor) -> Functor:
    """The map ``T -> apex`` induced by a cone ``(a: T -> dom along, b: T -> dom of)``."""
    cls = type(a)
    return cls(
        a.dom, sq.apex,
        {t: pair_name(a.on_obj[t], b.on_obj[t]) for t in a.dom.objects},
        {m: pair_name(a.on_mor[m], b.on_mor[m]) for m in a.dom.mor_ids},
    )


def check_universal_property(sq: PullbackSquare, T: InvolutiveGroupoid) -> bool:
    """Every cone from ``T`` factors through the apex exactly once."""
    maps_to_apex = {
        (tuple(sorted(compose_functors(sq.proj1, k).on_mor.items())),
         tuple(sorted(compose_functors(sq.proj2, k).on_mor.items())))
        for k in iter_functors(T, sq.apex)
    }
    n_apex = sum(1 for _ in iter_functors(T, sq.apex))
    if n_apex != len(maps_to_apex):
        return False
    cones = 0
    for a in iter_functors(T, sq.along.dom):
        target = compose_functors(sq.along, a)
        allowed_o: dict = {}
        for x in sq.of.dom.objects:
            allowed_o.setdefault(sq.of.on_obj[x], set()).add(x)
        allowed_m: dict = {}
        for n in sq.of.dom.mor_ids:
            allowed_m.setdefault(sq.of.on_mor[n], set()).add(n)
        for b in iter_functors(
            T, sq.of.dom,
            obj_allowed={t: allowed_o.get(target.on_obj[t], set()) for t in T.objects},
            mor_allowed={m: allowed_m.get(target.on_mor[m], set()) for m in T.mor_ids},
        ):
            cones += 1
            key = (tuple(sorted(a.on_mor.items())), tuple(sorted(b.on_mor.items())))
            if key not in maps_to_apex:
                return False
    return cones == n_apex


# ----------------------------------------------------------------------
# fibers and tubes
# ----------------------------------------------------------------------
@dataclass
class FiberGroupoid:
    base_object: str
    total: object
    fiber: FiniteGroupoid


def fiber(f: Functor, y: str) -> FiberGroupoid:
    """Objects over ``y`` and morphisms over ``1_y``."""
    D = f.dom
    e = f.cod.ident(y)
    objs = [x for x in D.objects if f.on_obj[x] == y]
    mors = [m for m in D.mor_ids if f.on_mor[m] == e]
    carrier = D.carrier if isinstance(D, InvolutiveGroupoid) else D
    return FiberGroupoid(y, D, subgroupoid(carrier, objs, mors))


INTERVAL = interval()


def interval_map(B, u: str) -> Functor:
    """The functor ``I -> B`` picking out the isomorphism ``u``."""
    s, d = B.morphisms[u]
    return Functor(
        INTERVAL, B,
        {"0": s, "1": d},
        {"1_0": B.ident(s), "1_1": B.ident(d), "phi": u, "phi^-1": B.inv(u)},
    )


@dataclass
class Tube:
    u: str
    groupoid: FiniteGroupoid
    to_total: Functor  # projection to A
    to_interval: Functor


def tube(g: Functor, u: str, *, check: bool = True) -> Tube:
    """The pullback ``A ×_B I`` of ``g`` along ``u: I -> B``; objects ``(x|0)``, ``(x|1)``."""
    if check:
        _require_fibration(g, "g")
    und = g.underlying
    G, p1, p2 = fiber_product(und, interval_map(und.cod, u))
    return Tube(u, G, p1, p2)


# ----------------------------------------------------------------------
# dependent products
# ----------------------------------------------------------------------
def _key(F: Functor) -> tuple:
    return tuple(sorted(F.on_mor.items()))


@dataclass(frozen=True)
class PiObject:
    y: str
    section: tuple  # sorted (fiber morphism, image) pairs
    objects: tuple  # sorted (fiber object, image) pairs

    @property
    def s_obj(self) -> dict:
        return dict(self.objects)

    @property
    def s_mor(self) -> dict:
        return dict(self.section)


@dataclass(frozen=True)
class PiMorphism:
    u: str
    v: tuple  # sorted (tube morphism, image) pairs
    v_objects: tuple

    @property
    def v_obj(self) -> dict:
        return dict(self.v_objects)

    @property
    def v_mor(self) -> dict:
        return dict(self.v)


@dataclass
class DependentProduct:
    g: EquivariantFunctor
    f: EquivariantFunctor
    pi: EquivariantFunctor  # dom(Π_g f) -> B
    objects: dict  # name -> PiObject
    morphisms: dict  # name -> PiMorphism
    tubes: dict = field(repr=False)
    obj_index: dict = field(repr=False)  # (y, section key) -> name
    mor_index: dict = field(repr=False)  # (u, v key) -> name

    @property
    def dom(self) -> InvolutiveGroupoid:
        return self.pi.dom

    def fixed_sections(self) -> list[PiObject]:
        return [self.objects[n] for n in self.dom.fixed_objects]


def _over_constraints(C_over: Functor, base: Functor):
    """Allowed images so that ``C_over ∘ v = base``."""
    inv_o: dict = {}
    for c in C_over.dom.objects:
        inv_o.setdefault(C_over.on_obj[c], set()).add(c)
    inv_m: dict = {}
    for n in C_over.dom.mor_ids:
        inv_m.setdefault(C_over.on_mor[n], set()).add(n)
    T = base.dom
    return (
        {t: inv_o.get(base.on_obj[t], set()) for t in T.objects},
        {m: inv_m.get(base.on_mor[m], set()) for m in T.mor_ids},
    )


def _maps_over(T, f: Functor, base: Functor, cap: int, what: str) -> list[Functor]:
    """All plain functors ``v: T -> dom f`` with ``f∘v = base``."""
    obj_allowed, mor_allowed = _over_constraints(f.underlying, base)
    if any(not s for s in obj_allowed.values()):
        return []
    out = []
    for v in FunctorSearch(T, f.dom, equivariant=False, obj_allowed=obj_allowed, mor_allowed=mor_allowed):
        out.append(v)
        if len(out) > cap:
            raise BudgetExceeded(what, cap, len(out))
    return out


def _section_label(obj_items) -> str:
    return ",".join(f"{x}>{c}" for x, c in obj_items)


def dependent_product(
    g: EquivariantFunctor,
    f: EquivariantFunctor,
    *,
    cleavage=None,
    reverse: bool = False,
) -> DependentProduct:
    """``Π_g f`` for fibrations ``g: A -> B`` and ``f: C -> A``.

    The composite of ``(u, v)`` and ``(u', v')`` is computed with the lift of
    ``u`` chosen by ``cleavage`` (the least lift, or the greatest with
    ``reverse``); the result does not depend on that choice.
    """
    cl_g = _require_fibration(g, "g")
    _require_fibration(f, "f")
    if f.cod != g.dom:
        raise ValueError("f must be a fibration over dom g")
    if cleavage is None:
        cleavage = is_fibration(g, reverse=reverse)[1]
    budget = current_budget()
    A, B, C = g.dom, g.cod, f.dom
    alpha, alpha_m = A.invol_obj, A.invol_mor
    beta, beta_m = B.invol_obj, B.invol_mor
    gamma, gamma_m = C.invol_obj, C.invol_mor
    fu = f.underlying

    # objects: sections over each fiber
    objects: dict = {}
    obj_index: dict = {}
    for y in B.objects:
        F = fiber(g, y).fiber
        budget.check("max_fiber", len(F.objects))
        incl = Functor(F, A.carrier, {x: x for x in F.objects}, {m: m for m in F.mor_ids})
        secs = _maps_over(F, fu, incl, budget.max_sections, "max_sections")
        labels: dict = {}
        for s in secs:
            oi = tuple(sorted(s.on_obj.items()))
            labels.setdefault(oi, []).append(s)
        for oi, group in labels.items():
            group.sort(key=_key)
            for k, s in enumerate(group):
                name = f"({y}|{_section_label(oi)})"
                if len(group) > 1:
                    name += f"#{k}"
                objects[name] = PiObject(y, _key(s), oi)
                obj_index[(y, _key(s))] = name
    budget.check("max_objects", len(objects))

    # morphisms: maps out of tubes over A
    tubes: dict = {}
    morphisms: dict = {}
    mor_index: dict = {}
    mors_src_dst: dict = {}
    for u in B.mor_ids:
        T = tube(g, u, check=False)
        tubes[u] = T
        vs = _maps_over(T.groupoid, fu, T.to_total, budget.max_sections, "max_sections")
        vs.sort(key=_key)
        for k, v in enumerate(vs):
            name = f"({u}|v{k})"
            pm = PiMorphism(u, _key(v), tuple(sorted(v.on_obj.items())))
            morphisms[name] = pm
            mor_index[(u, pm.v)] = name
    budget.check("max_morphisms", len(morphisms))

    def restrict(u, v_mor: dict, end: int) -> tuple:
        """The section at one end of a tube map."""
        s, d = B.morphisms[u]
        y = s if end == 0 else d
        e = f"1_{end}"
        out = []
        for m in A.mor_ids:
            if g.on_mor[m] == B.ident(y):
                out.append((m, v_mor[pair_name(m, e)]))
        return y, tuple(sorted(out))

    for name, pm in morphisms.items():
        vm = pm.v_mor
        y0, s0 = restrict(pm.u, vm, 0)
        y1, s1 = restrict(pm.u, vm, 1)
        mors_src_dst[name] = (obj_index[(y0, s0)], obj_index[(y1, s1)])

    def tube_mor_parts(u):
        T = tubes[u].groupoid
        return [(t, tubes[u].to_total.on_mor[t], tubes[u].to_interval.on_mor[t]) for t in T.mor_ids]

    parts_cache = {u: tube_mor_parts(u) for u in B.mor_ids}

    def lookup(u, v_mor: dict) -> str:
        key = (u, tuple(sorted(v_mor.items())))
        name = mor_index.get(key)
        if name is None:
            raise ConstructionDefect(f"tube map over {u} is not a functor over A")
        return name

    ident = {}
    for name, po in objects.items():
        u = B.ident(po.y)
        sm = po.s_mor
        v = {t: sm[h] for t, h, _ in parts_cache[u]}
        ident[name] = lookup(u, v)

    inverse = {}
    swap_end = {"1_0": "1_1", "1_1": "1_0", "phi": "phi^-1", "phi^-1": "phi"}
    for name, pm in morphisms.items():
        ui = B.inv(pm.u)
        vm = pm.v_mor
        v = {t: vm[pair_name(h, swap_end[i])] for t, h, i in parts_cache[ui]}
        inverse[name] = lookup(ui, v)

    memo: dict = {}

    def compose(second, first):
        hit = memo.get((second, first))
        if hit is not None:
            return hit
        p1, p2 = morphisms[first], morphisms[second]
        u, u2 = p1.u, p2.u
        uu = B.compose(u2, u)
        v, v2 = p1.v_mor, p2.v_mor
        out = {}
        pending = []
        for t, h, i in parts_cache[uu]:
            if i == "1_0":
                out[t] = v[pair_name(h, "1_0")]
            elif i == "1_1":
                out[t] = v2[pair_name(h, "1_1")]
            elif i == "phi":
                x = A.src(h)
                ut = cleavage.lift(u, x)
                rest = A.compose(h, A.inv(ut))
                out[t] = C.compose(v2[pair_name(rest, "phi")], v[pair_name(ut, "phi")])
            else:
                pending.append((t, h))
        for t, h in pending:
            out[t] = C.inv(out[pair_name(A.inv(h), "phi")])
        res = lookup(uu, out)
        memo[(second, first)] = res
        return res

    carrier = FiniteGroupoid(list(objects), mors_src_dst, ident, inverse, compose)

    invol_obj = {}
    for name, po in objects.items():
        y2 = beta[po.y]
        sm = po.s_mor
        s2 = {}
        for m in A.mor_ids:
            if g.on_mor[m] == B.ident(y2):
                s2[m] = gamma_m[sm[alpha_m[m]]]
        invol_obj[name] = obj_index[(y2, tuple(sorted(s2.items())))]
    invol_mor = {}
    for name, pm in morphisms.items():
        u2 = beta_m[pm.u]
        vm = pm.v_mor
        v2 = {t: gamma_m[vm[pair_name(alpha_m[h], i)]] for t, h, i in parts_cache[u2]}
        invol_mor[name] = lookup(u2, v2)

    dom = InvolutiveGroupoid(carrier, invol_obj, invol_mor)
    pi = EquivariantFunctor(
        dom, B,
        {n: po.y for n, po in objects.items()},
        {n: pm.u for n, pm in morphisms.items()},
    )
    return DependentProduct(g, f, pi, objects, morphisms, tubes, obj_index, mor_index)


# ----------------------------------------------------------------------
# the adjunction g* ⊣ Π_g
# ----------------------------------------------------------------------
def pulled_back(g: EquivariantFunctor, h: EquivariantFunctor) -> tuple:
    """``g*h``: the projection ``A ×_B D -> A``, objects ``(z|x)``."""
    apex, p1, p2 = fiber_product(g, h)
    return apex, p1, p2


def homs_over_A(g, f, h) -> list[EquivariantFunctor]:
    """Equivariant ``v: A ×_B D -> C`` with ``f∘v = g*h``."""
    apex, p1, _ = pulled_back(g, h)
    obj_allowed, mor_allowed = _over_constraints(f, p1)
    if any(not s for s in obj_allowed.values()):
        return []
    return list(FunctorSearch(apex, f.dom, obj_allowed=obj_allowed, mor_allowed=mor_allowed))


def homs_over_B(h, P: DependentProduct) -> list[EquivariantFunctor]:
    """Equivariant ``k: D -> dom(Π_g f)`` with ``Π_g f∘k = h``."""
    obj_allowed, mor_allowed = _over_constraints(P.pi, h)
    if any(not s for s in obj_allowed.values()):
        return []
    return list(FunctorSearch(h.dom, P.dom, obj_allowed=obj_allowed, mor_allowed=mor_allowed))


def transpose_forward(P: DependentProduct, h: EquivariantFunctor, v: EquivariantFunctor) -> EquivariantFunctor:
    """The transpose ``D -> dom(Π_g f)`` of ``v: A ×_B D -> C``."""
    g = P.g
    A, B, D = g.dom, g.cod, h.dom
    sections: dict = {}
    on_obj = {}
    for x in D.objects:
        y = h.on_obj[x]
        s = {m: v.on_mor[pair_name(m, D.ident(x))] for m in A.mor_ids if g.on_mor[m] == B.ident(y)}
        sections[x] = s
        on_obj[x] = P.obj_index[(y, tuple(sorted(s.items())))]
    on_mor = {}
    for u in D.mor_ids:
        x, x2 = D.morphisms[u]
        hu = h.on_mor[u]
        w = {}
        for t, a, i in ((t, P.tubes[hu].to_total.on_mor[t], P.tubes[hu].to_interval.on_mor[t])
                        for t in P.tubes[hu].groupoid.mor_ids):
            if i == "1_0":
                w[t] = sections[x][a]
            elif i == "1_1":
                w[t] = sections[x2][a]
            elif i == "phi":
                w[t] = v.on_mor[pair_name(a, u)]
            else:
                w[t] = v.on_mor[pair_name(a, D.inv(u))]
        on_mor[u] = P.mor_index[(hu, tuple(sorted(w.items())))]
    return EquivariantFunctor(D, P.dom, on_obj, on_mor)


def transpose_backward(P: DependentProduct, h: EquivariantFunctor, k: EquivariantFunctor) -> EquivariantFunctor:
    """The transpose ``A ×_B D -> C`` of ``k: D -> dom(Π_g f)``."""
    g = P.g
    apex, _, _ = pulled_back(g, h)
    A, D = g.dom, h.dom
    C = P.f.dom
    on_mor = {}
    for t in A.mor_ids:
        for u in D.mor_ids:
            if g.on_mor[t] != h.on_mor[u]:
                continue
            pm = P.morphisms[k.on_mor[u]]
            on_mor[pair_name(t, u)] = pm.v_mor[pair_name(t, "phi")]
    on_obj = {}
    for x in D.objects:
        po = P.objects[k.on_obj[x]]
        so = po.s_obj
        for z in so:
            on_obj[pair_name(z, x)] = so[z]
    for nm in apex.objects:
        if nm not in on_obj:
            raise ConstructionDefect(f"transpose misses {nm}")
    return EquivariantFunctor(apex, C, on_obj, on_mor)


# ----------------------------------------------------------------------
# diagonals and the pullback functor on maps
# ----------------------------------------------------------------------
def diagonal(f: EquivariantFunctor) -> tuple[EquivariantFunctor, PullbackSquare]:
    """``Δ_f: A -> A ×_C A``, together with the square it lands in."""
    sq = pullback(f, f)
    A = f.dom
    d = EquivariantFunctor(
        A, sq.apex,
        {x: pair_name(x, x) for x in A.objects},
        {m: pair_name(m, m) for m in A.mor_ids},
    )
    return d, sq


def pullback_map(g: EquivariantFunctor, phi: EquivariantFunctor, over: EquivariantFunctor) -> EquivariantFunctor:
    """``g*φ: A ×_B X -> A ×_B Y`` for ``φ: X -> Y`` over ``B`` (``over: Y -> B``)."""
    _require_fibration(g, "g")
    a = compose_functors(over, phi)
    src, _, _ = fiber_product(g, a)
    dst, _, _ = fiber_product(g, over)
    A = g.dom
    on_obj, on_mor = {}, {}
    for z in A.objects:
        for x in phi.dom.objects:
            nm = pair_name(z, x)
            if nm in src.object_set:
                on_obj[nm] = pair_name(z, phi.on_obj[x])
    for t in A.mor_ids:
        for n in phi.dom.mor_ids:
            nm = pair_name(t, n)
            if nm in src.morphisms:
                on_mor[nm] = pair_name(t, phi.on_mor[n])
    return EquivariantFunctor(src, dst, on_obj, on_mor)
