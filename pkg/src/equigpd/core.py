"""Finite groupoids, Z/2-involutions and equivariant functors.

Objects and morphisms are opaque string identifiers.  Composition is a
table over composable pairs; ``compose(g, f)`` is "g after f" throughout.
Constructions that would produce large tables may hand in a composition
function instead, which is materialized on demand by :attr:`compose_table`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, NamedTuple, Union

Obj = str
Mor = str
ComposeSpec = Union[Mapping[tuple, str], Callable[[str, str], str]]


def pair_name(a: str, b: str) -> str:
    return f"({a}|{b})"


class FiniteGroupoid:
    """A finite groupoid stored as explicit tables.

    No laws are checked on construction; use :func:`validate`.
    """

    def __init__(
        self,
        objects: Iterable[Obj],
        morphisms: Mapping[Mor, tuple[Obj, Obj]],
        identity: Mapping[Obj, Mor],
        inverse: Mapping[Mor, Mor],
        compose: ComposeSpec,
    ):
        self.objects: tuple[Obj, ...] = tuple(sorted(objects))
        self.morphisms: dict[Mor, tuple[Obj, Obj]] = {m: tuple(morphisms[m]) for m in sorted(morphisms)}
        self.identity: dict[Obj, Mor] = dict(identity)
        self.inverse: dict[Mor, Mor] = dict(inverse)
        if callable(compose):
            self._compose_fn = compose
            self._compose_dict = None
        else:
            self._compose_fn = None
            self._compose_dict = dict(compose)

    # -- basic accessors -------------------------------------------------
    def src(self, m: Mor) -> Obj:
        return self.morphisms[m][0]

    def dst(self, m: Mor) -> Obj:
        return self.morphisms[m][1]

    def ident(self, x: Obj) -> Mor:
        return self.identity[x]

    def inv(self, m: Mor) -> Mor:
        return self.inverse[m]

    def compose(self, g: Mor, f: Mor) -> Mor:
        """``g`` after ``f``; requires ``dst(f) == src(g)``."""
        if self._compose_fn is not None:
            return self._compose_fn(g, f)
        return self._compose_dict[(g, f)]

    def compose_all(self, *ms: Mor) -> Mor:
        """Compose right to left: ``compose_all(h, g, f) = h∘g∘f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    @cached_property
    def compose_table(self) -> dict[tuple[Mor, Mor], Mor]:
        if self._compose_dict is not None:
            return self._compose_dict
        return {(g, f): self._compose_fn(g, f) for g, f in self.composable_pairs()}

    @cached_property
    def mor_ids(self) -> tuple[Mor, ...]:
        return tuple(self.morphisms)

    @cached_property
    def object_set(self) -> frozenset:
        return frozenset(self.objects)

    @cached_property
    def _hom_index(self) -> dict[tuple[Obj, Obj], tuple[Mor, ...]]:
        idx: dict[tuple[Obj, Obj], list[Mor]] = {}
        for m, sd in self.morphisms.items():
            idx.setdefault(sd, []).append(m)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def _out_index(self) -> dict[Obj, tuple[Mor, ...]]:
        idx: dict[Obj, list[Mor]] = {}
        for m, (s, _) in self.morphisms.items():
            idx.setdefault(s, []).append(m)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def _in_index(self) -> dict[Obj, tuple[Mor, ...]]:
        idx: dict[Obj, list[Mor]] = {}
        for m, (_, d) in self.morphisms.items():
            idx.setdefault(d, []).append(m)
        return {k: tuple(v) for k, v in idx.items()}

    def hom(self, x: Obj, y: Obj) -> tuple[Mor, ...]:
        return self._hom_index.get((x, y), ())

    def out_of(self, x: Obj) -> tuple[Mor, ...]:
        return self._out_index.get(x, ())

    def into(self, y: Obj) -> tuple[Mor, ...]:
        return self._in_index.get(y, ())

    def composable_pairs(self):
        for g in self.mor_ids:
            for f in self.into(self.morphisms[g][0]):
                yield g, f

    def is_identity(self, m: Mor) -> bool:
        s, d = self.morphisms[m]
        return s == d and self.identity.get(s) == m

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.inverse == other.inverse
            and self.compose_table == other.compose_table
        )

    def __hash__(self):
        return hash((self.objects, tuple(self.morphisms)))

    def __repr__(self):
        return f"FiniteGroupoid({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


class InvolutiveGroupoid:
    """A finite groupoid together with an involution functor."""

    def __init__(self, carrier: FiniteGroupoid, invol_obj: Mapping[Obj, Obj], invol_mor: Mapping[Mor, Mor]):
        self.carrier = carrier
        self.invol_obj: dict[Obj, Obj] = dict(invol_obj)
        self.invol_mor: dict[Mor, Mor] = dict(invol_mor)

    # delegation to the carrier keeps search and model-structure code
    # agnostic about whether an involution is present
    objects = property(lambda self: self.carrier.objects)
    morphisms = property(lambda self: self.carrier.morphisms)
    identity = property(lambda self: self.carrier.identity)
    inverse = property(lambda self: self.carrier.inverse)
    mor_ids = property(lambda self: self.carrier.mor_ids)
    object_set = property(lambda self: self.carrier.object_set)
    compose_table = property(lambda self: self.carrier.compose_table)

    def src(self, m):
        return self.carrier.morphisms[m][0]

    def dst(self, m):
        return self.carrier.morphisms[m][1]

    def ident(self, x):
        return self.carrier.identity[x]

    def inv(self, m):
        return self.carrier.inverse[m]

    def compose(self, g, f):
        return self.carrier.compose(g, f)

    def compose_all(self, *ms):
        return self.carrier.compose_all(*ms)

    def hom(self, x, y):
        return self.carrier.hom(x, y)

    def out_of(self, x):
        return self.carrier.out_of(x)

    def into(self, y):
        return self.carrier.into(y)

    def composable_pairs(self):
        return self.carrier.composable_pairs()

    def is_identity(self, m):
        return self.carrier.is_identity(m)

    @cached_property
    def fixed_objects(self) -> tuple[Obj, ...]:
        return tuple(x for x in self.objects if self.invol_obj.get(x) == x)

    @cached_property
    def fixed_morphisms(self) -> tuple[Mor, ...]:
        return tuple(m for m in self.mor_ids if self.invol_mor.get(m) == m)

    def orbit(self, x: Obj) -> tuple[Obj, ...]:
        y = self.invol_obj[x]
        return (x,) if y == x else tuple(sorted((x, y)))

    def __eq__(self, other):
        if not isinstance(other, InvolutiveGroupoid):
            return NotImplemented
        return self.carrier == other.carrier and self.invol_obj == other.invol_obj and self.invol_mor == other.invol_mor

    def __hash__(self):
        return hash(self.carrier)

    def __repr__(self):
        return (
            f"InvolutiveGroupoid({len(self.objects)} objects, {len(self.morphisms)} morphisms, "
            f"{len(self.fixed_objects)} fixed)"
        )


AnyGroupoid = Union[FiniteGroupoid, InvolutiveGroupoid]


class Functor:
    """A functor between finite groupoids given by its object and morphism maps."""

    def __init__(self, dom, cod, on_obj: Mapping[Obj, Obj], on_mor: Mapping[Mor, Mor]):
        self.dom = dom
        self.cod = cod
        self.on_obj: dict[Obj, Obj] = dict(on_obj)
        self.on_mor: dict[Mor, Mor] = dict(on_mor)

    def obj(self, x: Obj) -> Obj:
        return self.on_obj[x]

    def mor(self, m: Mor) -> Mor:
        return self.on_mor[m]

    def then(self, other: Functor) -> Functor:
        return compose_functors(other, self)

    @property
    def underlying(self) -> Functor:
        return self

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.on_obj == other.on_obj
            and self.on_mor == other.on_mor
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        return hash((tuple(sorted(self.on_obj.items())), len(self.on_mor)))

    def __repr__(self):
        return f"{type(self).__name__}({self.dom!r} -> {self.cod!r})"


class EquivariantFunctor(Functor):
    """A functor between involutive groupoids commuting with the involutions."""

    dom: InvolutiveGroupoid
    cod: InvolutiveGroupoid

    @property
    def underlying(self) -> Functor:
        return Functor(self.dom.carrier, self.cod.carrier, self.on_obj, self.on_mor)


def compose_functors(g: Functor, f: Functor) -> Functor:
    """``g∘f``."""
    cls = EquivariantFunctor if isinstance(f, EquivariantFunctor) and isinstance(g, EquivariantFunctor) else Functor
    return cls(
        f.dom,
        g.cod,
        {x: g.on_obj[y] for x, y in f.on_obj.items()},
        {m: g.on_mor[n] for m, n in f.on_mor.items()},
    )


def identity_functor(G: AnyGroupoid) -> Functor:
    cls = EquivariantFunctor if isinstance(G, InvolutiveGroupoid) else Functor
    return cls(G, G, {x: x for x in G.objects}, {m: m for m in G.mor_ids})


# ----------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Violation:
    law: str
    elements: tuple

    def __str__(self):
        return f"{self.law}: {', '.join(map(str, self.elements))}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, *elements) -> None:
        self.violations.append(Violation(law, tuple(elements)))

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def __bool__(self):
        return self.ok


def _validate_carrier(G: FiniteGroupoid, rep: ValidationReport) -> bool:
    """Group the groupoid laws; returns False if the tables are too broken to go on."""
    objs = set(G.objects)
    if len(objs) != len(G.objects):
        seen = set()
        for x in G.objects:
            if x in seen:
                rep.add("objects unique", x)
            seen.add(x)
    structural = True
    for m, (s, d) in G.morphisms.items():
        if s not in objs:
            rep.add("src", m, s)
            structural = False
        if d not in objs:
            rep.add("dst", m, d)
            structural = False
    for x in G.objects:
        e = G.identity.get(x)
        if e is None or e not in G.morphisms or G.morphisms[e] != (x, x):
            rep.add("identity", x)
            structural = False
    for x in G.identity:
        if x not in objs:
            rep.add("identity", x)
    if not structural:
        return False

    table_ok = True
    pairs = list(G.composable_pairs())
    composed: dict[tuple[Mor, Mor], Mor] = {}
    for g, f in pairs:
        try:
            h = G.compose(g, f)
        except (KeyError, ValueError, TypeError):
            rep.add("compose total", g, f)
            table_ok = False
            continue
        if h not in G.morphisms or G.morphisms[h] != (G.src(f), G.dst(g)):
            rep.add("compose typing", g, f, h)
            table_ok = False
            continue
        composed[(g, f)] = h
    if G._compose_dict is not None:
        for key in G._compose_dict:
            if not (isinstance(key, tuple) and len(key) == 2 and all(k in G.morphisms for k in key)) or \
                    G.morphisms[key[1]][1] != G.morphisms[key[0]][0]:
                rep.add("compose domain", key)

    for m, (s, d) in G.morphisms.items():
        if composed.get((G.identity[d], m), m) != m or composed.get((m, G.identity[s]), m) != m:
            rep.add("unit law", m)

    for m, (s, d) in G.morphisms.items():
        n = G.inverse.get(m)
        if n is None or n not in G.morphisms or G.morphisms[n] != (d, s):
            rep.add("inverse law", m)
            continue
        if composed.get((n, m)) != G.identity[s] or composed.get((m, n)) != G.identity[d]:
            rep.add("inverse law", m)

    if table_ok:
        into = G._in_index
        for (g, f), gf in composed.items():
            for e in into.get(G.src(f), ()):
                if composed[(gf, e)] != composed[(g, composed[(f, e)])]:
                    rep.add("associativity", g, f, e)
    return table_ok


def validate(G: AnyGroupoid) -> ValidationReport:
    """Check every groupoid law, and the involution laws when present."""
    rep = ValidationReport()
    carrier = G.carrier if isinstance(G, InvolutiveGroupoid) else G
    ok = _validate_carrier(carrier, rep)
    if isinstance(G, InvolutiveGroupoid) and ok:
        a, am = G.invol_obj, G.invol_mor
        total = True
        for x in G.objects:
            if a.get(x) not in carrier.object_set:
                rep.add("involution totality", x)
                total = False
        for m in G.mor_ids:
            if am.get(m) not in carrier.morphisms:
                rep.add("involution totality", m)
                total = False
        if total:
            for x in G.objects:
                if a[a[x]] != x:
                    rep.add("involution involutive", x)
                if am[G.ident(x)] != G.ident(a[x]):
                    rep.add("involution functor", G.ident(x))
            for m, (s, d) in G.morphisms.items():
                if am[am[m]] != m:
                    rep.add("involution involutive", m)
                if carrier.morphisms[am[m]] != (a[s], a[d]):
                    rep.add("involution functor", m)
            if not {v.law for v in rep.violations} & {"involution functor"}:
                for g, f in G.composable_pairs():
                    if am[G.compose(g, f)] != G.compose(am[g], am[f]):
                        rep.add("involution functor", g, f)
    return rep


def validate_functor(F: Functor) -> ValidationReport:
    """Functoriality, plus equivariance when ``F`` is an :class:`EquivariantFunctor`."""
    rep = ValidationReport()
    D, C = F.dom, F.cod
    for x in D.objects:
        if F.on_obj.get(x) not in C.object_set:
            rep.add("totality", x)
    for m in D.mor_ids:
        if F.on_mor.get(m) not in C.morphisms:
            rep.add("totality", m)
    if not rep.ok:
        return rep
    for m, (s, d) in D.morphisms.items():
        if C.morphisms[F.on_mor[m]] != (F.on_obj[s], F.on_obj[d]):
            rep.add("src/dst", m)
    for x in D.objects:
        if F.on_mor[D.ident(x)] != C.ident(F.on_obj[x]):
            rep.add("identity", x)
    if not rep.ok:
        return rep
    for g, f in D.composable_pairs():
        if F.on_mor[D.compose(g, f)] != C.compose(F.on_mor[g], F.on_mor[f]):
            rep.add("composition", g, f)
    if isinstance(F, EquivariantFunctor):
        for x in D.objects:
            if F.on_obj[D.invol_obj[x]] != C.invol_obj[F.on_obj[x]]:
                rep.add("equivariance", x)
        for m in D.mor_ids:
            if F.on_mor[D.invol_mor[m]] != C.invol_mor[F.on_mor[m]]:
                rep.add("equivariance", m)
    return rep


class InvalidStructure(ValueError):
    def __init__(self, report: ValidationReport, what: str = "structure"):
        self.report = report
        super().__init__(f"invalid {what}: " + "; ".join(map(str, report.violations[:5])))


def ensure_valid(G: AnyGroupoid) -> AnyGroupoid:
    rep = validate(G)
    if not rep.ok:
        raise InvalidStructure(rep, "groupoid")
    return G


# ----------------------------------------------------------------------
# standard groupoids
# ----------------------------------------------------------------------
def discrete(objects: Iterable[Obj], ident: Callable[[Obj], Mor] = lambda x: f"1_{x}") -> FiniteGroupoid:
    objects = list(objects)
    ids = {x: ident(x) for x in objects}
    mors = {ids[x]: (x, x) for x in objects}
    return FiniteGroupoid(objects, mors, ids, {e: e for e in mors}, {(e, e): e for e in mors})


def empty() -> FiniteGroupoid:
    return discrete([])


def point(name: Obj = "*") -> FiniteGroupoid:
    return discrete([name])


def interval() -> FiniteGroupoid:
    """Two objects ``0``, ``1`` and one isomorphism ``phi: 0 -> 1``."""
    mors = {"1_0": ("0", "0"), "1_1": ("1", "1"), "phi": ("0", "1"), "phi^-1": ("1", "0")}
    ident = {"0": "1_0", "1": "1_1"}
    inverse = {"1_0": "1_0", "1_1": "1_1", "phi": "phi^-1", "phi^-1": "phi"}
    comp = {}
    for m, (s, d) in mors.items():
        comp[(ident[d], m)] = m
        comp[(m, ident[s])] = m
    comp[("phi^-1", "phi")] = "1_0"
    comp[("phi", "phi^-1")] = "1_1"
    return FiniteGroupoid(["0", "1"], mors, ident, inverse, comp)


def cyclic_group(n: int, name: Obj = "*") -> FiniteGroupoid:
    """The one-object groupoid B(Z/n); ``g{k}`` is the k-th power of the generator."""
    idname = f"1_{name}"

    def el(k):
        k %= n
        return idname if k == 0 else f"g{k}"

    mors = {el(k): (name, name) for k in range(n)}
    comp = {(el(a), el(b)): el(a + b) for a in range(n) for b in range(n)}
    return FiniteGroupoid([name], mors, {name: idname}, {el(k): el(-k) for k in range(n)}, comp)


def bz2(name: Obj = "*") -> InvolutiveGroupoid:
    """B(Z/2) with the identity involution."""
    return trivial_involution(cyclic_group(2, name))


# ----------------------------------------------------------------------
# the basic functors between Gpd and Gpd^Z2
# ----------------------------------------------------------------------
def trivial_involution(G: FiniteGroupoid) -> InvolutiveGroupoid:
    return InvolutiveGroupoid(G, {x: x for x in G.objects}, {m: m for m in G.mor_ids})


def underlying(G: InvolutiveGroupoid) -> FiniteGroupoid:
    return G.carrier


def free_double(G: FiniteGroupoid) -> InvolutiveGroupoid:
    """``G ⊔ G`` with the swap; the second copy of ``x`` is named ``x'``."""
    ids = set(G.objects) | set(G.morphisms)
    suffix = "'"
    while any(x + suffix in ids for x in ids):
        suffix += "'"

    def p(x):
        return x + suffix

    objects = list(G.objects) + [p(x) for x in G.objects]
    mors = dict(G.morphisms)
    mors.update({p(m): (p(s), p(d)) for m, (s, d) in G.morphisms.items()})
    ident = dict(G.identity)
    ident.update({p(x): p(e) for x, e in G.identity.items()})
    inverse = dict(G.inverse)
    inverse.update({p(m): p(n) for m, n in G.inverse.items()})
    comp = dict(G.compose_table)
    comp.update({(p(g), p(f)): p(h) for (g, f), h in G.compose_table.items()})
    carrier = FiniteGroupoid(objects, mors, ident, inverse, comp)
    swap_o = {x: p(x) for x in G.objects} | {p(x): x for x in G.objects}
    swap_m = {m: p(m) for m in G.morphisms} | {p(m): m for m in G.morphisms}
    return InvolutiveGroupoid(carrier, swap_o, swap_m)


def subgroupoid(G: FiniteGroupoid, objects: Iterable[Obj], morphisms: Iterable[Mor]) -> FiniteGroupoid:
    """The subgroupoid on the given objects and morphisms (assumed closed)."""
    objects = set(objects)
    ms = set(morphisms)
    if G._compose_fn is not None:
        comp = G._compose_fn
    else:
        comp = {(g, f): h for (g, f), h in G._compose_dict.items() if g in ms and f in ms}
    return FiniteGroupoid(
        objects,
        {m: G.morphisms[m] for m in ms},
        {x: G.identity[x] for x in objects},
        {m: G.inverse[m] for m in ms},
        comp,
    )


def full_subgroupoid(G: AnyGroupoid, objects: Iterable[Obj]) -> AnyGroupoid:
    objects = set(objects)
    ms = [m for m, (s, d) in G.morphisms.items() if s in objects and d in objects]
    if isinstance(G, InvolutiveGroupoid):
        if any(G.invol_obj[x] not in objects for x in objects):
            raise ValueError("object set is not stable under the involution")
        carrier = subgroupoid(G.carrier, objects, ms)
        return InvolutiveGroupoid(
            carrier, {x: G.invol_obj[x] for x in objects}, {m: G.invol_mor[m] for m in ms}
        )
    return subgroupoid(G, objects, ms)


def inclusion(sub: AnyGroupoid, G: AnyGroupoid) -> Functor:
    cls = EquivariantFunctor if isinstance(G, InvolutiveGroupoid) else Functor
    return cls(sub, G, {x: x for x in sub.objects}, {m: m for m in sub.mor_ids})


def fixed_full(G: InvolutiveGroupoid) -> InvolutiveGroupoid:
    """The full subgroupoid on the fixed objects, with the restricted involution."""
    return full_subgroupoid(G, G.fixed_objects)


def fixed_strict(G: InvolutiveGroupoid) -> FiniteGroupoid:
    """Fixed objects and fixed morphisms."""
    fixed = set(G.fixed_objects)
    ms = [m for m in G.fixed_morphisms if G.src(m) in fixed and G.dst(m) in fixed]
    return subgroupoid(G.carrier, fixed, ms)


# ----------------------------------------------------------------------
# colimits and limits
# ----------------------------------------------------------------------
def components(G: AnyGroupoid) -> list[tuple[Obj, ...]]:
    """Connected components, each sorted, ordered by least object."""
    parent = {x: x for x in G.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, d in G.morphisms.values():
        rs, rd = find(s), find(d)
        if rs != rd:
            parent[max(rs, rd)] = min(rs, rd)
    groups: dict[Obj, list[Obj]] = {}
    for x in G.objects:
        groups.setdefault(find(x), []).append(x)
    return sorted((tuple(sorted(v)) for v in groups.values()), key=lambda c: c[0])


def disjoint_union(*parts: AnyGroupoid) -> AnyGroupoid:
    """Coproduct.  Identifiers are kept when disjoint, else tagged ``k.x``."""
    involutive = all(isinstance(p, InvolutiveGroupoid) for p in parts)
    names = [set(p.objects) | set(p.morphisms) for p in parts]
    clash = sum(len(n) for n in names) != len(set().union(*names)) if names else False

    def tag(k, x):
        return f"{k}.{x}" if clash else x

    objects, mors, ident, inverse, comp, io, im = [], {}, {}, {}, {}, {}, {}
    for k, P in enumerate(parts):
        objects += [tag(k, x) for x in P.objects]
        mors.update({tag(k, m): (tag(k, s), tag(k, d)) for m, (s, d) in P.morphisms.items()})
        ident.update({tag(k, x): tag(k, e) for x, e in P.identity.items()})
        inverse.update({tag(k, m): tag(k, n) for m, n in P.inverse.items()})
        comp.update({(tag(k, g), tag(k, f)): tag(k, h) for (g, f), h in P.compose_table.items()})
        if involutive:
            io.update({tag(k, x): tag(k, y) for x, y in P.invol_obj.items()})
            im.update({tag(k, m): tag(k, n) for m, n in P.invol_mor.items()})
    carrier = FiniteGroupoid(objects, mors, ident, inverse, comp)
    return InvolutiveGroupoid(carrier, io, im) if involutive else carrier


class FiberProduct(NamedTuple):
    apex: AnyGroupoid
    p1: Functor
    p2: Functor


def fiber_product(F: Functor, G: Functor) -> FiberProduct:
    """``dom F ×_Z dom G`` for ``F: X -> Z``, ``G: Y -> Z``; pairs named ``(x|y)``."""
    X, Y = F.dom, G.dom
    equivariant = isinstance(F, EquivariantFunctor) and isinstance(G, EquivariantFunctor)
    by_img_o: dict[Obj, list[Obj]] = {}
    for y in Y.objects:
        by_img_o.setdefault(G.on_obj[y], []).append(y)
    by_img_m: dict[Mor, list[Mor]] = {}
    for n in Y.mor_ids:
        by_img_m.setdefault(G.on_mor[n], []).append(n)
    objects, okey = [], {}
    for x in X.objects:
        for y in by_img_o.get(F.on_obj[x], ()):
            nm = pair_name(x, y)
            objects.append(nm)
            okey[(x, y)] = nm
    mors, mkey, mpair = {}, {}, {}
    for m in X.mor_ids:
        s, d = X.morphisms[m]
        for n in by_img_m.get(F.on_mor[m], ()):
            nm = pair_name(m, n)
            ys, yd = Y.morphisms[n]
            mors[nm] = (okey[(s, ys)], okey[(d, yd)])
            mkey[(m, n)] = nm
            mpair[nm] = (m, n)
    if len(okey) != len(set(objects)) or len(mkey) != len(mors):
        raise ValueError("identifier collision in fiber product names")
    ident = {okey[(x, y)]: mkey[(X.ident(x), Y.ident(y))] for (x, y) in okey}
    inverse = {nm: mkey[(X.inv(m), Y.inv(n))] for nm, (m, n) in mpair.items()}

    def compose(g, f):
        (m2, n2), (m1, n1) = mpair[g], mpair[f]
        return mkey[(X.compose(m2, m1), Y.compose(n2, n1))]

    carrier = FiniteGroupoid(objects, mors, ident, inverse, compose)
    p1o = {nm: x for (x, _), nm in okey.items()}
    p2o = {nm: y for (_, y), nm in okey.items()}
    p1m = {nm: m for nm, (m, _) in mpair.items()}
    p2m = {nm: n for nm, (_, n) in mpair.items()}
    if equivariant:
        io = {nm: okey[(X.invol_obj[x], Y.invol_obj[y])] for (x, y), nm in okey.items()}
        im = {nm: mkey[(X.invol_mor[m], Y.invol_mor[n])] for nm, (m, n) in mpair.items()}
        apex = InvolutiveGroupoid(carrier, io, im)
        return FiberProduct(apex, EquivariantFunctor(apex, X, p1o, p1m), EquivariantFunctor(apex, Y, p2o, p2m))
    return FiberProduct(carrier, Functor(carrier, X, p1o, p1m), Functor(carrier, Y, p2o, p2m))


def terminal_map(G: AnyGroupoid, terminal: AnyGroupoid | None = None) -> Functor:
    """The unique map ``G -> 1``."""
    if terminal is None:
        terminal = trivial_involution(point()) if isinstance(G, InvolutiveGroupoid) else point()
    (t,) = terminal.objects
    e = terminal.ident(t)
    cls = EquivariantFunctor if isinstance(G, InvolutiveGroupoid) else Functor
    return cls(G, terminal, {x: t for x in G.objects}, {m: e for m in G.mor_ids})


def product(G: AnyGroupoid, H: AnyGroupoid) -> FiberProduct:
    """``G × H`` with its two projections."""
    return fiber_product(terminal_map(G), terminal_map(H))


# ----------------------------------------------------------------------
# freely adjoining isomorphic copies of objects
# ----------------------------------------------------------------------
class AnchoredExtension(NamedTuple):
    groupoid: InvolutiveGroupoid
    inclusion: EquivariantFunctor
    retraction: EquivariantFunctor
    anchors: dict


def anchored_extension(
    X: InvolutiveGroupoid, anchors: Mapping[Obj, Obj], new_invol: Mapping[Obj, Obj]
) -> AnchoredExtension:
    """Adjoin objects ``n`` with ``Hom(a, b) := Hom(anchor a, anchor b)``.

    ``new_invol`` gives the involution on the new objects and must satisfy
    ``anchor(α n) = α(anchor n)``.  New morphisms are named ``<a|m|b>``.
    """
    anchor = {x: x for x in X.objects}
    for n, a in anchors.items():
        if n in anchor:
            raise ValueError(f"object {n!r} already present")
        anchor[n] = a
    invol = dict(X.invol_obj)
    invol.update(new_invol)
    for n in anchors:
        if anchor[invol[n]] != X.invol_obj[anchor[n]]:
            raise ValueError(f"anchor of {n!r} is not compatible with the involution")
    new = set(anchors)

    def name(a, m, b):
        return m if a not in new and b not in new else f"<{a}|{m}|{b}>"

    objects = sorted(anchor)
    mors, key = {}, {}
    for a in objects:
        for b in objects:
            for m in X.hom(anchor[a], anchor[b]):
                nm = name(a, m, b)
                mors[nm] = (a, b)
                key[nm] = (a, m, b)
    ident = {a: name(a, X.ident(anchor[a]), a) for a in objects}
    inverse = {nm: name(b, X.inv(m), a) for nm, (a, m, b) in key.items()}

    def compose(g, f):
        b, m2, c = key[g]
        a, m1, _ = key[f]
        return name(a, X.compose(m2, m1), c)

    carrier = FiniteGroupoid(objects, mors, ident, inverse, compose)
    im = {nm: name(invol[a], X.invol_mor[m], invol[b]) for nm, (a, m, b) in key.items()}
    G = InvolutiveGroupoid(carrier, invol, im)
    incl = EquivariantFunctor(X, G, {x: x for x in X.objects}, {m: m for m in X.mor_ids})
    retr = EquivariantFunctor(G, X, anchor, {nm: m for nm, (_, m, _) in key.items()})
    return AnchoredExtension(G, incl, retr, anchor)


def rename(G: AnyGroupoid, obj_names: Mapping[Obj, Obj], mor_names: Mapping[Mor, Mor] | None = None):
    """An isomorphic copy with renamed identifiers, and the isomorphism ``G -> copy``."""
    mor_names = dict(mor_names) if mor_names is not None else {m: m for m in G.mor_ids}
    o, mm = dict(obj_names), mor_names
    carrier = FiniteGroupoid(
        [o[x] for x in G.objects],
        {mm[m]: (o[s], o[d]) for m, (s, d) in G.morphisms.items()},
        {o[x]: mm[e] for x, e in G.identity.items()},
        {mm[m]: mm[n] for m, n in G.inverse.items()},
        {(mm[g], mm[f]): mm[h] for (g, f), h in G.compose_table.items()},
    )
    if isinstance(G, InvolutiveGroupoid):
        H = InvolutiveGroupoid(
            carrier,
            {o[x]: o[y] for x, y in G.invol_obj.items()},
            {mm[m]: mm[n] for m, n in G.invol_mor.items()},
        )
        return H, EquivariantFunctor(G, H, o, mm)
    return carrier, Functor(G, carrier, o, mm)
