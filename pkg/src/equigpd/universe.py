"""The universe of discrete groupoids with involution, and univalence.

Elements of ``U`` are triples ``(A, B, φ)`` of finite sets and a bijection;
morphisms are pairs of bijections ``(ρ, τ)`` with ``ψ∘ρ = τ∘φ``.  The
pointed version ``Ũ`` adds a chosen element of ``A`` and ``p: Ũ -> U``
forgets it.  Only finite sub-universes are ever built: every operation takes
an explicit :class:`SubUniverse`, and :func:`classify` extends it with the
fibers it needs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .budget import current_budget
from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    InvolutiveGroupoid,
    compose_functors,
    identity_functor,
    pair_name,
    validate_functor,
)
from .homotopy import is_rhe
from .modelstructure import arrow_groupoid, is_discrete_fibration, is_equivalence, is_fibration
from .search import is_isomorphism
from .ttfc import dependent_product, diagonal, pullback


class NotSmall(ValueError):
    """The map is not a discrete fibration, so no classifying map exists."""


Bijection = tuple  # sorted tuple of (source, target) pairs


def _set_name(A: frozenset) -> str:
    return "{" + ",".join(sorted(A)) + "}"


def _bij_name(phi: Bijection) -> str:
    return "[" + ",".join(f"{a}>{b}" for a, b in phi) + "]"


def _bij(d: dict) -> Bijection:
    return tuple(sorted(d.items()))


def _inv(phi: Bijection) -> Bijection:
    return tuple(sorted((b, a) for a, b in phi))


def _comp(psi: Bijection, phi: Bijection) -> Bijection:
    """``psi∘phi``."""
    p = dict(psi)
    return tuple(sorted((a, p[b]) for a, b in phi))


def bijections(A: frozenset, B: frozenset) -> list[Bijection]:
    if len(A) != len(B):
        return []
    a = sorted(A)
    return [tuple(zip(a, perm)) for perm in itertools.permutations(sorted(B))]


@dataclass(frozen=True, order=True)
class UniverseElement:
    A: frozenset
    B: frozenset
    phi: Bijection

    @property
    def name(self) -> str:
        return f"({_set_name(self.A)},{_set_name(self.B)},{_bij_name(self.phi)})"

    def flip(self) -> UniverseElement:
        return UniverseElement(self.B, self.A, _inv(self.phi))


@dataclass(frozen=True, order=True)
class UniverseMorphism:
    src: UniverseElement
    dst: UniverseElement
    rho: Bijection
    tau: Bijection

    @property
    def name(self) -> str:
        return f"<{_bij_name(self.rho)};{_bij_name(self.tau)}>:{self.src.name}>{self.dst.name}"

    def commutes(self) -> bool:
        return _comp(self.dst.phi, self.rho) == _comp(self.tau, self.src.phi)


def _morphisms_between(x: UniverseElement, y: UniverseElement) -> list[UniverseMorphism]:
    out = []
    for rho in bijections(x.A, y.A):
        # τ is forced: τ = ψ∘ρ∘φ⁻¹
        tau = _comp(_comp(y.phi, rho), _inv(x.phi))
        out.append(UniverseMorphism(x, y, rho, tau))
    return out


@dataclass
class SubUniverse:
    elements: tuple
    U: InvolutiveGroupoid
    Ut: InvolutiveGroupoid
    p: EquivariantFunctor
    by_name: dict = field(repr=False)
    mor_by_name: dict = field(repr=False)
    pointed_by_name: dict = field(repr=False)

    def element(self, name: str) -> UniverseElement:
        return self.by_name[name]

    def morphism(self, name: str) -> UniverseMorphism:
        return self.mor_by_name[name]

    def extended(self, extra: Iterable[UniverseElement]) -> SubUniverse:
        return subuniverse(set(self.elements) | set(extra))


def subuniverse(elements: Iterable[UniverseElement]) -> SubUniverse:
    """The full sub-universe on the given elements, closed under the involution."""
    elems = set(elements)
    elems |= {e.flip() for e in elems}
    elems = tuple(sorted(elems, key=lambda e: e.name))
    budget = current_budget()
    budget.check("max_objects", len(elems))
    for e in elems:
        budget.check("max_fiber", len(e.A))

    names = [e.name for e in elems]
    if len(set(names)) != len(names):
        raise ValueError("element names collide; choose seed identifiers without separators")
    by_name = dict(zip(names, elems))
    by_size: dict = {}
    for e in elems:
        by_size.setdefault(len(e.A), []).append(e)
    total = sum(len(g) ** 2 * max(1, _factorial(n)) for n, g in by_size.items())
    budget.check("max_morphisms", total)

    mors: dict = {}
    mor_by_name: dict = {}
    for group in by_size.values():
        for x in group:
            for y in group:
                for m in _morphisms_between(x, y):
                    mors[m.name] = (x.name, y.name)
                    mor_by_name[m.name] = m

    def compose_name(g, f):
        m2, m1 = mor_by_name[g], mor_by_name[f]
        return UniverseMorphism(m1.src, m2.dst, _comp(m2.rho, m1.rho), _comp(m2.tau, m1.tau)).name

    ident = {e.name: UniverseMorphism(e, e, _bij({a: a for a in e.A}), _bij({b: b for b in e.B})).name
             for e in elems}
    inverse = {n: UniverseMorphism(m.dst, m.src, _inv(m.rho), _inv(m.tau)).name for n, m in mor_by_name.items()}
    carrier = FiniteGroupoid(names, mors, ident, inverse, compose_name)
    upsilon = {e.name: e.flip().name for e in elems}
    upsilon_m = {n: UniverseMorphism(m.src.flip(), m.dst.flip(), m.tau, m.rho).name for n, m in mor_by_name.items()}
    U = InvolutiveGroupoid(carrier, upsilon, upsilon_m)

    # pointed version
    def pname(e, a):
        return f"({_set_name(e.A)},{_set_name(e.B)},{_bij_name(e.phi)},{a})"

    def pmname(m, a):
        return f"{m.name}@{a}"

    pointed = {}
    pobjs = []
    for e in elems:
        for a in sorted(e.A):
            pobjs.append(pname(e, a))
            pointed[pname(e, a)] = (e, a)
    pmors, pkey = {}, {}
    for n, m in mor_by_name.items():
        rho = dict(m.rho)
        for a in sorted(m.src.A):
            nm = pmname(m, a)
            pmors[nm] = (pname(m.src, a), pname(m.dst, rho[a]))
            pkey[nm] = (n, a)

    def pcompose(g, f):
        n2, _ = pkey[g]
        n1, a = pkey[f]
        return pmname(mor_by_name[compose_name(n2, n1)], a)

    pident = {P: pmname(mor_by_name[ident[e.name]], a) for P, (e, a) in pointed.items()}
    pinverse = {}
    for nm, (n, a) in pkey.items():
        m = mor_by_name[n]
        pinverse[nm] = pmname(mor_by_name[inverse[n]], dict(m.rho)[a])
    pcarrier = FiniteGroupoid(pobjs, pmors, pident, pinverse, pcompose)
    pups = {P: pname(e.flip(), dict(e.phi)[a]) for P, (e, a) in pointed.items()}
    pups_m = {}
    for nm, (n, a) in pkey.items():
        m = mor_by_name[n]
        pups_m[nm] = pmname(mor_by_name[upsilon_m[n]], dict(m.src.phi)[a])
    Ut = InvolutiveGroupoid(pcarrier, pups, pups_m)
    p = EquivariantFunctor(
        Ut, U,
        {P: e.name for P, (e, _) in pointed.items()},
        {nm: n for nm, (n, _) in pkey.items()},
    )
    return SubUniverse(elems, U, Ut, p, by_name, mor_by_name, pointed)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def realize_subuniverse(seeds: Iterable[Iterable[str]]) -> SubUniverse:
    """All ``(A, B, φ)`` with ``A``, ``B`` among the seed sets and ``φ`` a bijection."""
    sets = sorted({frozenset(map(str, s)) for s in seeds}, key=lambda s: (len(s), sorted(s)))
    if not sets:
        raise ValueError("at least one seed set is required")
    elems = [UniverseElement(A, B, phi) for A in sets for B in sets for phi in bijections(A, B)]
    return subuniverse(elems)


# ----------------------------------------------------------------------
# classification of small fibrations
# ----------------------------------------------------------------------
@dataclass
class Classification:
    g: EquivariantFunctor  # base -> U
    chi: EquivariantFunctor  # dom f -> B ×_U Ũ
    sub: SubUniverse
    square: object  # the pullback square of p along g

    def validate(self, f: EquivariantFunctor) -> bool:
        return (
            validate_functor(self.g).ok
            and validate_functor(self.chi).ok
            and is_isomorphism(self.chi)
            and compose_functors(self.square.proj1, self.chi) == f
        )


def classify(f: EquivariantFunctor, sub: Optional[SubUniverse] = None) -> Classification:
    """The classifying map of a discrete fibration and the comparison ``χ``."""
    ok, cl = is_discrete_fibration(f)
    if not ok:
        raise NotSmall("not small: the map is not a discrete fibration")
    A, B = f.dom, f.cod
    alpha, beta, beta_m = A.invol_obj, B.invol_obj, B.invol_mor
    budget = current_budget()
    fib = {x: frozenset(z for z in A.objects if f.on_obj[z] == x) for x in B.objects}
    for x in B.objects:
        budget.check("max_fiber", len(fib[x]))
    elem = {x: UniverseElement(fib[x], fib[beta[x]], _bij({z: alpha[z] for z in fib[x]})) for x in B.objects}
    sub = subuniverse(elem.values()) if sub is None else sub.extended(elem.values())

    def transport(sigma):
        return _bij({z: A.dst(cl.lift(sigma, z)) for z in fib[B.src(sigma)]})

    g_mor = {}
    for s in B.mor_ids:
        m = UniverseMorphism(elem[B.src(s)], elem[B.dst(s)], transport(s), transport(beta_m[s]))
        g_mor[s] = m.name
    g = EquivariantFunctor(B, sub.U, {x: elem[x].name for x in B.objects}, g_mor)
    sq = pullback(sub.p, g)

    def point_name(z):
        e = elem[f.on_obj[z]]
        return f"({_set_name(e.A)},{_set_name(e.B)},{_bij_name(e.phi)},{z})"

    chi = EquivariantFunctor(
        A, sq.apex,
        {z: pair_name(f.on_obj[z], point_name(z)) for z in A.objects},
        {s: pair_name(f.on_mor[s], f"{g_mor[f.on_mor[s]]}@{A.src(s)}") for s in A.mor_ids},
    )
    return Classification(g, chi, sub, sq)


# ----------------------------------------------------------------------
# universe axioms
# ----------------------------------------------------------------------
@dataclass
class AuditCheck:
    name: str
    ok: bool
    witness: Optional[str] = None


@dataclass
class AuditReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, ok, witness=None):
        self.checks.append(AuditCheck(name, ok, witness))


def audit_universe(sub: Optional[SubUniverse], samples: list) -> AuditReport:
    """Check composition, identities, dependent products and diagonals stay small."""
    rep = AuditReport()
    for k, f in enumerate(samples):
        if not is_discrete_fibration(f)[0]:
            raise ValueError(f"sample {k} is not a discrete fibration")
    for k, f in enumerate(samples):
        for G in (f.dom, f.cod):
            ok = is_discrete_fibration(identity_functor(G))[0]
            rep.add(f"identity[{k}]", ok, None if ok else "identity not discrete")
        d, _ = diagonal(f)
        ok = is_discrete_fibration(d)[0]
        rep.add(f"diagonal[{k}]", ok, None if ok else "diagonal not discrete")
        try:
            c = classify(f, sub)
            ok = c.validate(f)
            rep.add(f"classified[{k}]", ok, None if ok else "classification round trip failed")
        except NotSmall as e:
            rep.add(f"classified[{k}]", False, str(e))
    for i, f in enumerate(samples):
        for j, g in enumerate(samples):
            if f.cod != g.dom:
                continue
            comp = compose_functors(g, f)
            ok = is_discrete_fibration(comp)[0]
            rep.add(f"composite[{j}∘{i}]", ok, None if ok else "composite not discrete")
            P = dependent_product(g, f)
            ok = is_discrete_fibration(P.pi)[0]
            rep.add(f"pi[{j},{i}]", ok, None if ok else "dependent product not discrete")
    return rep


# ----------------------------------------------------------------------
# the equivalence fibration and univalence
# ----------------------------------------------------------------------
@dataclass
class EquivFibration:
    E: InvolutiveGroupoid
    proj: EquivariantFunctor
    unit: EquivariantFunctor
    sub: SubUniverse
    label: dict = field(repr=False)  # E object -> U morphism

    def triple(self, P: str) -> tuple:
        m = self.sub.morphism(self.label[P])
        return (m.src, m.dst, m)


def equiv_fibration(sub: SubUniverse) -> EquivFibration:
    """``E -> U × U``: objects are isomorphisms of ``U``, morphisms commuting squares."""
    U = sub.U
    arr = arrow_groupoid(U)
    from .core import product

    UU = product(U, U).apex
    proj = EquivariantFunctor(
        arr.groupoid, UU,
        {P: pair_name(U.src(u), U.dst(u)) for P, u in arr.label.items()},
        {n: pair_name(*ab) for n, ab in arr.parts.items()},
    )
    unit = EquivariantFunctor(
        U, arr.groupoid,
        {x: f"[{U.ident(x)}]" for x in U.objects},
        {m: arr.mor(f"[{U.ident(U.src(m))}]", m, f"[{U.ident(U.dst(m))}]") for m in U.mor_ids},
    )
    return EquivFibration(arr.groupoid, proj, unit, sub, arr.label)


@dataclass
class UnivalenceVerdict:
    verdict: bool
    witness: Optional[str]  # a fixed object of E outside the image of the unit
    triple: Optional[tuple]
    diagnosis: object
    unit_is_equivalence: bool
    proj_is_fibration: bool


def univalence_check(sub: SubUniverse) -> UnivalenceVerdict:
    ef = equiv_fibration(sub)
    ok, diag = is_rhe(ef.unit)
    witness = triple = None
    if not ok:
        image = set(ef.unit.on_obj.values())
        outside = [P for P in ef.E.fixed_objects if P not in image]
        if outside:
            witness = min(outside, key=lambda P: (ef.triple(P)[0].name, ef.triple(P)[1].name, P))
            triple = ef.triple(witness)
    return UnivalenceVerdict(
        ok, witness, triple, diag,
        is_equivalence(ef.unit.underlying),
        is_fibration(ef.proj)[0],
    )


# ----------------------------------------------------------------------
# the function extensionality counterexample
# ----------------------------------------------------------------------
@dataclass
class FunextReport:
    g_is_fibration: bool
    f_is_fibration: bool
    f_is_rhe: bool
    pi_objects: int
    pi_morphisms: int
    fixed_sections: list  # object maps of the fixed sections
    pi_is_rhe: bool
    diagnosis: object
    product: object = field(repr=False)

    @property
    def counterexample(self) -> bool:
        return self.g_is_fibration and self.f_is_fibration and self.f_is_rhe and not self.pi_is_rhe


def funext_instance() -> tuple[EquivariantFunctor, EquivariantFunctor]:
    """``g: S(1) -> 1`` and ``f: S(I) -> S(1)``."""
    from .core import point, terminal_map, trivial_involution
    from .modelstructure import S1, SI

    g = terminal_map(S1, trivial_involution(point()))
    f = EquivariantFunctor(
        SI, S1,
        {"0": "0", "1": "0", "0'": "0'", "1'": "0'"},
        {m: ("1_0'" if m.endswith("'") else "1_0") for m in SI.mor_ids},
    )
    return g, f


def funext_demo() -> FunextReport:
    g, f = funext_instance()
    P = dependent_product(g, f)
    ok, diag = is_rhe(P.pi)
    return FunextReport(
        g_is_fibration=is_fibration(g)[0],
        f_is_fibration=is_fibration(f)[0],
        f_is_rhe=is_rhe(f)[0],
        pi_objects=len(P.dom.objects),
        pi_morphisms=len(P.dom.morphisms),
        fixed_sections=[po.s_obj for po in P.fixed_sections()],
        pi_is_rhe=ok,
        diagnosis=diag,
        product=P,
    )
