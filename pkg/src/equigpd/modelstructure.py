"""Decision procedures for the projective model structure on involutive groupoids.

Fibrations are the equivariant functors whose underlying functor lifts
isomorphisms.  Acyclic cofibrations are decided by the fixed-point criterion:
injective on objects, an equivalence, and a bijection on fixed objects.  The
module also builds the canonical path object, the mapping-path factorization
and the cell decomposition of an acyclic cofibration into pushouts of the
generating map ``S(1) -> S(I)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .budget import current_budget
from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    Functor,
    InvolutiveGroupoid,
    anchored_extension,
    components,
    compose_functors,
    fiber_product,
    free_double,
    interval,
    pair_name,
    point,
    product,
)
from .search import first_functor


class ConstructionDefect(AssertionError):
    """A construction failed its own post-hoc certificate (should be unreachable)."""


# ----------------------------------------------------------------------
# fibrations
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Cleavage:
    """Chosen lifts: ``table[(u, x)]`` is a morphism out of ``x`` over ``u``."""

    table: dict

    def lift(self, u, x):
        return self.table[(u, x)]

    def __len__(self):
        return len(self.table)


def _lift_index(f: Functor) -> dict:
    idx: dict = {}
    for m in f.dom.mor_ids:
        idx.setdefault((f.on_mor[m], f.dom.src(m)), []).append(m)
    return idx


def _fibers(f: Functor) -> dict:
    fib: dict = {}
    for x in f.dom.objects:
        fib.setdefault(f.on_obj[x], []).append(x)
    return fib


def lifting_failure(f: Functor) -> Optional[tuple]:
    """A pair ``(u, x)`` with no lift of ``u`` at ``x``, or None."""
    idx = _lift_index(f)
    fib = _fibers(f)
    for u in f.cod.mor_ids:
        for x in fib.get(f.cod.src(u), ()):
            if (u, x) not in idx:
                return (u, x)
    return None


def is_fibration(f: Functor, *, reverse: bool = False) -> tuple[bool, Optional[Cleavage]]:
    """Iso-lifting test; the cleavage picks the least lift (greatest with ``reverse``)."""
    idx = _lift_index(f)
    fib = _fibers(f)
    table = {}
    for u in f.cod.mor_ids:
        for x in fib.get(f.cod.src(u), ()):
            lifts = idx.get((u, x))
            if not lifts:
                return False, None
            table[(u, x)] = lifts[-1] if reverse else lifts[0]
    return True, Cleavage(table)


def is_discrete_fibration(f: Functor) -> tuple[bool, Optional[Cleavage]]:
    """Exactly one lift for every base morphism ``u`` and object ``x`` over its source."""
    idx = _lift_index(f)
    fib = _fibers(f)
    table = {}
    for u in f.cod.mor_ids:
        for x in fib.get(f.cod.src(u), ()):
            lifts = idx.get((u, x), ())
            if len(lifts) != 1:
                return False, None
            table[(u, x)] = lifts[0]
    return True, Cleavage(table)


# ----------------------------------------------------------------------
# equivalences and the fixed-point clauses
# ----------------------------------------------------------------------
def equivalence_defect(f: Functor) -> Optional[tuple]:
    """Why the underlying functor is not an equivalence, or None if it is."""
    D, C = f.dom, f.cod
    for x in D.objects:
        for y in D.objects:
            hom = D.hom(x, y)
            imgs = {f.on_mor[m] for m in hom}
            if len(imgs) != len(hom):
                return ("not faithful", x, y)
            if len(imgs) != len(C.hom(f.on_obj[x], f.on_obj[y])):
                return ("not full", x, y)
    image = set(f.on_obj.values())
    for comp in components(C):
        if not image.intersection(comp):
            return ("not essentially surjective", comp[0])
    return None


def is_equivalence(f: Functor) -> bool:
    return equivalence_defect(f) is None


def is_injective_on_objects(f: Functor) -> bool:
    return len(set(f.on_obj.values())) == len(f.dom.objects)


def fixed_point_defect(f: EquivariantFunctor) -> Optional[tuple]:
    """Where ``f`` fails to biject fixed objects onto fixed objects."""
    A, B = f.dom, f.cod
    hit: dict = {}
    for x in A.fixed_objects:
        y = f.on_obj[x]
        if B.invol_obj[y] != y:
            return ("fixed object sent to non-fixed object", x)
        if y in hit:
            return ("two fixed objects with the same image", hit[y], x)
        hit[y] = x
    for y in B.fixed_objects:
        if y not in hit:
            return ("fixed object outside the image of fixed objects", y)
    return None


def fixed_point_bijection(f: EquivariantFunctor) -> bool:
    return fixed_point_defect(f) is None


def induces_strict_fixed_iso(f: EquivariantFunctor) -> bool:
    """Does ``f`` restrict to an isomorphism between fixed objects-and-morphisms subgroupoids?"""
    A, B = f.dom, f.cod
    fa, fb = set(A.fixed_objects), set(B.fixed_objects)
    ma = [m for m in A.fixed_morphisms if A.src(m) in fa and A.dst(m) in fa]
    mb = {m for m in B.fixed_morphisms if B.src(m) in fb and B.dst(m) in fb}
    objs = [f.on_obj[x] for x in fa]
    mors = [f.on_mor[m] for m in ma]
    return (
        len(set(objs)) == len(objs) and set(objs) == fb
        and len(set(mors)) == len(mors) and set(mors) == mb
    )


def induces_full_fixed_iso(f: EquivariantFunctor) -> bool:
    """Does ``f`` restrict to an isomorphism between the full fixed subgroupoids?"""
    A, B = f.dom, f.cod
    fa, fb = set(A.fixed_objects), set(B.fixed_objects)
    objs = [f.on_obj[x] for x in fa]
    if len(set(objs)) != len(objs) or set(objs) != fb:
        return False
    for x in fa:
        for y in fa:
            imgs = {f.on_mor[m] for m in A.hom(x, y)}
            if len(imgs) != len(A.hom(x, y)) or imgs != set(B.hom(f.on_obj[x], f.on_obj[y])):
                return False
    return True


def acyclic_cofibration_clauses(f: EquivariantFunctor) -> dict[str, bool]:
    """The three equivalent characterizations, each evaluated independently."""
    base = is_injective_on_objects(f) and is_equivalence(f)
    return {
        "fixed_point_bijection": base and fixed_point_bijection(f),
        "strict_fixed_iso": base and induces_strict_fixed_iso(f),
        "full_fixed_iso": base and induces_full_fixed_iso(f),
    }


@dataclass(frozen=True)
class AcyclicCofibrationCertificate:
    injective_on_objects: bool
    equivalence: bool
    fixed_point_bijection: bool
    witness: Optional[tuple] = None

    @property
    def verdict(self) -> bool:
        return self.injective_on_objects and self.equivalence and self.fixed_point_bijection

    def __bool__(self):
        return self.verdict


def is_acyclic_cofibration(f: EquivariantFunctor) -> AcyclicCofibrationCertificate:
    inj = is_injective_on_objects(f)
    eq_defect = equivalence_defect(f)
    fp_defect = fixed_point_defect(f)
    witness = None
    if not inj:
        seen: dict = {}
        for x in f.dom.objects:
            y = f.on_obj[x]
            if y in seen:
                witness = ("not injective on objects", seen[y], x)
                break
            seen[y] = x
    witness = witness or eq_defect or fp_defect
    return AcyclicCofibrationCertificate(inj, eq_defect is None, fp_defect is None, witness)


# ----------------------------------------------------------------------
# lifting problems
# ----------------------------------------------------------------------
@dataclass
class LiftingSquare:
    """``top: A -> X``, ``left: A -> B``, ``right: X -> Y``, ``bottom: B -> Y``."""

    left: EquivariantFunctor
    right: EquivariantFunctor
    top: EquivariantFunctor
    bottom: EquivariantFunctor

    def commutes(self) -> bool:
        A = self.left.dom
        r, t, b, l = self.right, self.top, self.bottom, self.left
        return all(r.on_obj[t.on_obj[x]] == b.on_obj[l.on_obj[x]] for x in A.objects) and all(
            r.on_mor[t.on_mor[m]] == b.on_mor[l.on_mor[m]] for m in A.mor_ids
        )

    def is_filler(self, d: Functor) -> bool:
        A, B = self.left.dom, self.left.cod
        return all(d.on_obj[self.left.on_obj[x]] == self.top.on_obj[x] for x in A.objects) and all(
            d.on_mor[self.left.on_mor[m]] == self.top.on_mor[m] for m in A.mor_ids
        ) and all(self.right.on_obj[d.on_obj[y]] == self.bottom.on_obj[y] for y in B.objects) and all(
            self.right.on_mor[d.on_mor[n]] == self.bottom.on_mor[n] for n in B.mor_ids
        )


def lifting_constraints(sq: LiftingSquare) -> tuple[dict, dict]:
    """Admissible images for a diagonal filler ``B -> X``, object- and morphism-wise."""
    X, B = sq.right.dom, sq.left.cod
    fib_o: dict = {}
    for x in X.objects:
        fib_o.setdefault(sq.right.on_obj[x], set()).add(x)
    fib_m: dict = {}
    for n in X.mor_ids:
        fib_m.setdefault(sq.right.on_mor[n], set()).add(n)
    obj_allowed = {b: set(fib_o.get(sq.bottom.on_obj[b], ())) for b in B.objects}
    mor_allowed = {m: set(fib_m.get(sq.bottom.on_mor[m], ())) for m in B.mor_ids}
    for a in sq.left.dom.objects:
        obj_allowed[sq.left.on_obj[a]] &= {sq.top.on_obj[a]}
    for m in sq.left.dom.mor_ids:
        mor_allowed[sq.left.on_mor[m]] &= {sq.top.on_mor[m]}
    return obj_allowed, mor_allowed


def solve_lifting(sq: LiftingSquare) -> Optional[EquivariantFunctor]:
    """A diagonal filler found by exhaustive search, or None if there is none."""
    budget = current_budget()
    budget.check_groupoid(sq.left.cod)
    budget.check_groupoid(sq.right.dom)
    if not sq.commutes():
        raise ValueError("lifting square does not commute")
    obj_allowed, mor_allowed = lifting_constraints(sq)
    if any(not s for s in obj_allowed.values()) or any(not s for s in mor_allowed.values()):
        return None
    d = first_functor(sq.left.cod, sq.right.dom, obj_allowed=obj_allowed, mor_allowed=mor_allowed)
    if d is not None and not sq.is_filler(d):
        raise ConstructionDefect("search returned a non-filler")
    return d


# ----------------------------------------------------------------------
# path objects
# ----------------------------------------------------------------------
class ArrowLike(NamedTuple):
    groupoid: InvolutiveGroupoid
    label: dict  # object -> underlying morphism of the base
    parts: dict  # morphism -> (a, b)
    mor: object  # (P, a, Q) -> morphism name


def _arrow_like(B: InvolutiveGroupoid, label: dict, invol: dict) -> ArrowLike:
    """Objects labelled by arrows of B; morphisms ``(a, b): P -> Q`` with ``b∘u_P = u_Q∘a``."""
    budget = current_budget()
    objects = sorted(label)
    budget.check("max_objects", len(objects))

    # only a is free: b = u_Q ∘ a ∘ u_P^-1
    def bpart(P, a, Q):
        return B.compose_all(label[Q], a, B.inv(label[P]))

    def mname(P, a, Q):
        return f"({a},{bpart(P, a, Q)}):{P}>{Q}"

    by_src: dict = {}
    for P in objects:
        by_src.setdefault(B.src(label[P]), []).append(P)
    total = sum(len(B.hom(x, y)) * len(by_src[x]) * len(by_src[y]) for x in by_src for y in by_src)
    budget.check("max_morphisms", total)
    mors, parts, key = {}, {}, {}
    for P in objects:
        x = B.src(label[P])
        for a in B.out_of(x):
            for Q in by_src.get(B.dst(a), ()):
                nm = mname(P, a, Q)
                mors[nm] = (P, Q)
                parts[nm] = (a, bpart(P, a, Q))
                key[nm] = (P, a, Q)
    ident = {P: mname(P, B.ident(B.src(label[P])), P) for P in objects}
    inverse = {nm: mname(Q, B.inv(a), P) for nm, (P, a, Q) in key.items()}

    def compose(g, f):
        _, a2, R = key[g]
        P, a1, _ = key[f]
        return mname(P, B.compose(a2, a1), R)

    carrier = FiniteGroupoid(objects, mors, ident, inverse, compose)
    invol_mor = {nm: mname(invol[P], B.invol_mor[a], invol[Q]) for nm, (P, a, Q) in key.items()}
    return ArrowLike(InvolutiveGroupoid(carrier, invol, invol_mor), label, parts, mname)


def arrow_groupoid(B: InvolutiveGroupoid) -> ArrowLike:
    """The groupoid of arrows of B and commuting squares, with ``[u] -> [α u]``."""
    label = {f"[{u}]": u for u in B.mor_ids}
    invol = {f"[{u}]": f"[{B.invol_mor[u]}]" for u in B.mor_ids}
    return _arrow_like(B, label, invol)


@dataclass
class PathObject:
    base: InvolutiveGroupoid
    PB: InvolutiveGroupoid
    w: EquivariantFunctor
    proj: EquivariantFunctor
    square: InvolutiveGroupoid
    label: dict = field(repr=False)  # PB object -> underlying morphism of B
    parts: dict = field(repr=False)  # PB morphism -> (a, b)
    mor: object = field(repr=False)  # (P, a, Q) -> PB morphism

    def ev(self, end: int) -> EquivariantFunctor:
        """Evaluation ``PB -> B`` at the source (0) or target (1)."""
        B = self.base
        pick = B.src if end == 0 else B.dst
        return EquivariantFunctor(
            self.PB, B,
            {Q: pick(self.label[Q]) for Q in self.PB.objects},
            {n: self.parts[n][end] for n in self.PB.mor_ids},
        )

    def objects_over(self, u: str) -> list[str]:
        return [P for P, v in self.label.items() if v == u]


def _path_object_names(B: InvolutiveGroupoid):
    label: dict = {}
    for u in B.mor_ids:
        if B.invol_mor[u] != u or B.is_identity(u):
            label[f"[{u}]"] = u
        else:
            label[f"[{u},+]"] = u
            label[f"[{u},-]"] = u
    return label


def path_object(B: InvolutiveGroupoid, *, check: bool = True) -> PathObject:
    """Canonical path object: arrows of B, with fixed non-identity arrows doubled.

    Objects are ``[u]`` for arrows ``u`` moved by the involution or identities at
    fixed objects, and ``[u,+]``, ``[u,-]`` for the other fixed arrows, which the
    involution swaps.  A morphism ``P -> Q`` is a pair ``(a, b)`` with
    ``b∘u_P = u_Q∘a``.
    """
    current_budget().check_groupoid(B)
    label = _path_object_names(B)
    invol = {}
    for P, u in label.items():
        if P.endswith(",+]"):
            invol[P] = P[:-3] + ",-]"
        elif P.endswith(",-]"):
            invol[P] = P[:-3] + ",+]"
        else:
            invol[P] = f"[{B.invol_mor[u]}]"
    PB, _, parts, mname = _arrow_like(B, label, invol)

    BB = product(B, B).apex
    w = EquivariantFunctor(
        B, PB,
        {x: f"[{B.ident(x)}]" for x in B.objects},
        {m: mname(f"[{B.ident(B.src(m))}]", m, f"[{B.ident(B.dst(m))}]") for m in B.mor_ids},
    )
    proj = EquivariantFunctor(
        PB, BB,
        {P: pair_name(B.src(u), B.dst(u)) for P, u in label.items()},
        {nm: pair_name(*ab) for nm, ab in parts.items()},
    )
    P = PathObject(B, PB, w, proj, BB, label, parts, mname)
    if check:
        if not is_acyclic_cofibration(w).verdict:
            raise ConstructionDefect("path object: w is not an acyclic cofibration")
        if not is_fibration(proj)[0]:
            raise ConstructionDefect("path object: projection is not a fibration")
        if not path_object_diagonal_ok(P):
            raise ConstructionDefect("path object: proj∘w is not the diagonal")
    return P


def path_object_diagonal_ok(P: PathObject) -> bool:
    B = P.base
    pw = compose_functors(P.proj, P.w)
    return all(pw.on_obj[x] == pair_name(x, x) for x in B.objects) and all(
        pw.on_mor[m] == pair_name(m, m) for m in B.mor_ids
    )


# ----------------------------------------------------------------------
# factorization
# ----------------------------------------------------------------------
class Factorization(NamedTuple):
    j: EquivariantFunctor
    q: EquivariantFunctor
    path: PathObject


def factorize(f: EquivariantFunctor, *, check: bool = True) -> Factorization:
    """``f = q∘j`` through the mapping-path groupoid ``A ×_B PB``."""
    A, B = f.dom, f.cod
    P = path_object(B, check=check)
    ev0 = P.ev(0)
    M, p1, p2 = fiber_product(f, ev0)
    j = EquivariantFunctor(
        A, M,
        {a: pair_name(a, P.w.on_obj[f.on_obj[a]]) for a in A.objects},
        {m: pair_name(m, P.w.on_mor[f.on_mor[m]]) for m in A.mor_ids},
    )
    ev1 = P.ev(1)
    q = compose_functors(ev1, p2)
    if check:
        if not is_acyclic_cofibration(j).verdict:
            raise ConstructionDefect("factorization: j is not an acyclic cofibration")
        if not is_fibration(q)[0]:
            raise ConstructionDefect("factorization: q is not a fibration")
        if compose_functors(q, j) != f:
            raise ConstructionDefect("factorization: q∘j != f")
    return Factorization(j, q, P)


# ----------------------------------------------------------------------
# pushouts of the generating acyclic cofibration
# ----------------------------------------------------------------------
S1 = free_double(point("0"))
SI = free_double(interval())


def generating_acyclic_cofibration() -> EquivariantFunctor:
    """``S(i): S(1) -> S(I)``."""
    return EquivariantFunctor(S1, SI, {"0": "0", "0'": "0'"}, {"1_0": "1_0", "1_0'": "1_0'"})


class NoTarget(ValueError):
    pass


def attaching_map(X: InvolutiveGroupoid, y: Optional[str] = None) -> EquivariantFunctor:
    """The map ``S(1) -> X`` sending ``0`` to ``y`` (the least object by default)."""
    if not X.objects:
        raise NoTarget("l has no target")
    y = X.objects[0] if y is None else y
    ay = X.invol_obj[y]
    return EquivariantFunctor(S1, X, {"0": y, "0'": ay}, {"1_0": X.ident(y), "1_0'": X.ident(ay)})


class CellAttachment(NamedTuple):
    groupoid: InvolutiveGroupoid
    inclusion: EquivariantFunctor
    corner: EquivariantFunctor  # S(I) -> X'
    new_objects: tuple
    retraction: EquivariantFunctor  # X' -> X, new objects onto their anchors


def _fresh(X, stem="c"):
    taken = set(X.objects) | set(X.morphisms)
    k = 0
    while True:
        n = f"{stem}{k}"
        if n not in taken and n + "'" not in taken:
            return n, n + "'"
        k += 1


def pushout_cell(l: EquivariantFunctor, names: Optional[tuple[str, str]] = None) -> CellAttachment:
    """Pushout of ``S(i)`` along ``l: S(1) -> X``: one new free orbit of objects."""
    if not (set(l.dom.objects) == {"0", "0'"} and l.dom.invol_obj["0"] == "0'"):
        raise ValueError("attaching map must have domain S(1)")
    X = l.cod
    y, ay = l.on_obj["0"], l.on_obj["0'"]
    n, n2 = names or _fresh(X)
    ext = anchored_extension(X, {n: y, n2: ay}, {n: n2, n2: n})
    G = ext.groupoid

    def m(a, mor, b):
        return f"<{a}|{mor}|{b}>" if a in (n, n2) or b in (n, n2) else mor

    corner = EquivariantFunctor(
        SI, G,
        {"0": y, "1": n, "0'": ay, "1'": n2},
        {
            "1_0": X.ident(y), "1_1": m(n, X.ident(y), n), "phi": m(y, X.ident(y), n),
            "phi^-1": m(n, X.ident(y), y),
            "1_0'": X.ident(ay), "1_1'": m(n2, X.ident(ay), n2), "phi'": m(ay, X.ident(ay), n2),
            "phi^-1'": m(n2, X.ident(ay), ay),
        },
    )
    return CellAttachment(G, ext.inclusion, corner, (n, n2), ext.retraction)


@dataclass(frozen=True)
class Cell:
    """Attach the orbit ``(x, β x)`` of the codomain through ``psi: anchor -> x``."""

    orbit: tuple
    anchor: str
    psi: str


def decompose_acyclic_cofibration(f: EquivariantFunctor) -> list[Cell]:
    cert = is_acyclic_cofibration(f)
    if not cert.verdict:
        raise ValueError(f"not an acyclic cofibration: {cert.witness}")
    B = f.cod
    present = sorted(set(f.on_obj.values()))
    missing = sorted(set(B.objects) - set(present))
    cells = []
    done = set()
    for x in missing:
        if x in done:
            continue
        bx = B.invol_obj[x]
        done |= {x, bx}
        for y in present:
            hom = B.hom(y, x)
            if hom:
                cells.append(Cell((x, bx), y, hom[0]))
                break
        else:
            raise ConstructionDefect(f"no anchor for {x}")
        present = sorted(set(present) | {x, bx})
    return cells


class Replay(NamedTuple):
    groupoid: InvolutiveGroupoid
    inclusion: EquivariantFunctor
    comparison: EquivariantFunctor  # groupoid -> cod f, an isomorphism under dom f


def replay_cells(f: EquivariantFunctor, cells: list[Cell]) -> Replay:
    """Rebuild ``cod f`` from ``dom f`` by successive pushouts of ``S(i)``."""
    A, B = f.dom, f.cod
    X = A
    incl = EquivariantFunctor(A, A, {x: x for x in A.objects}, {m: m for m in A.mor_ids})
    e_obj, e_mor = dict(f.on_obj), dict(f.on_mor)
    for cell in cells:
        back = {v: k for k, v in e_obj.items()}
        y = back[cell.anchor]
        step = pushout_cell(attaching_map(X, y))
        G = step.groupoid
        n, n2 = step.new_objects
        x, bx = cell.orbit
        psi_of = {n: cell.psi, n2: B.invol_mor[cell.psi]}
        new_e_obj = dict(e_obj)
        new_e_obj[n], new_e_obj[n2] = x, bx
        r = step.retraction.on_mor
        new_e_mor = {}
        for mm, (s, d) in G.morphisms.items():
            core = e_mor[r[mm]]
            if s in psi_of:
                core = B.compose(core, B.inv(psi_of[s]))
            if d in psi_of:
                core = B.compose(psi_of[d], core)
            new_e_mor[mm] = core
        e_obj, e_mor = new_e_obj, new_e_mor
        incl = compose_functors(step.inclusion, incl)
        X = G
    return Replay(X, incl, EquivariantFunctor(X, B, e_obj, e_mor))
