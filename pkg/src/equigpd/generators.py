"""Random and exhaustive sources of involutive groupoids and maps.

Connected components are presented as a codiscrete groupoid on ``n`` objects
times a small abelian group ``G``; a self-conjugate component carries the
involution ``(i, g, j) -> (σi, t_i θ(g) t_j⁻¹, σj)`` with ``σ`` an involution
of the objects and ``θ`` an automorphism of order at most two.  Paired
components are a component together with a free copy.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import (
    EquivariantFunctor,
    FiniteGroupoid,
    InvolutiveGroupoid,
    compose_functors,
    disjoint_union,
    empty,
    identity_functor,
    rename,
    validate,
)
from .modelstructure import attaching_map, is_fibration, path_object, pushout_cell
from .search import FunctorSearch
from .ttfc import pullback
from .universe import realize_subuniverse


# ----------------------------------------------------------------------
# small abelian groups
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Group:
    name: str
    elements: tuple
    mul: dict  # (g, h) -> gh

    @property
    def e(self):
        return self.elements[0]

    def inv(self, g):
        return next(h for h in self.elements if self.mul[g, h] == self.e)

    def automorphisms(self) -> list[dict]:
        out = []
        rest = self.elements[1:]
        for perm in itertools.permutations(rest):
            th = {self.e: self.e, **dict(zip(rest, perm))}
            if all(th[self.mul[g, h]] == self.mul[th[g], th[h]] for g in self.elements for h in self.elements):
                out.append(th)
        return out

    def automorphisms2(self) -> list[dict]:
        """Automorphisms ``θ`` with ``θ² = 1``."""
        return [th for th in self.automorphisms() if all(th[th[g]] == g for g in self.elements)]


def cyclic(n: int) -> Group:
    els = tuple(str(k) for k in range(n))
    return Group(f"Z{n}", els, {(a, b): str((int(a) + int(b)) % n) for a in els for b in els})


def klein() -> Group:
    els = ("0", "a", "b", "c")
    idx = {"0": 0, "a": 1, "b": 2, "c": 3}
    back = {v: k for k, v in idx.items()}
    return Group("V4", els, {(x, y): back[idx[x] ^ idx[y]] for x in els for y in els})


GROUPS = (cyclic(1), cyclic(2), cyclic(3), cyclic(4), klein())


# ----------------------------------------------------------------------
# component specifications
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ComponentSpec:
    """A connected component, or a pair of them swapped by the involution."""

    n: int
    group: Group
    paired: bool = False
    sigma: tuple = ()  # object involution as a tuple of images
    theta: tuple = ()  # sorted (g, θ(g)) pairs
    twist: tuple = ()  # t_i per object

    @property
    def size(self) -> int:
        return 2 * self.n if self.paired else self.n


def _codiscrete_times(prefix: str, n: int, G: Group):
    objs = [f"{prefix}{i}" for i in range(n)]

    def mname(i, g, j):
        return f"{objs[i]}.{g}.{objs[j]}" if (i, j) != (0, 0) or len(objs) > 1 else f"{prefix}.{g}"

    mors, key = {}, {}
    for i in range(n):
        for j in range(n):
            for g in G.elements:
                nm = mname(i, g, j)
                mors[nm] = (objs[i], objs[j])
                key[nm] = (i, g, j)
    ident = {objs[i]: mname(i, G.e, i) for i in range(n)}
    inverse = {nm: mname(j, G.inv(g), i) for nm, (i, g, j) in key.items()}
    comp = {}
    for g_nm, (j, b, k) in key.items():
        for f_nm, (i, a, j2) in key.items():
            if j2 == j:
                # (j,b,k)∘(i,a,j) = (i, ba, k)
                comp[g_nm, f_nm] = mname(i, G.mul[b, a], k)
    return FiniteGroupoid(objs, mors, ident, inverse, comp), objs, key, mname


def build_component(spec: ComponentSpec, prefix: str) -> InvolutiveGroupoid:
    G = spec.group
    if spec.paired:
        C, objs, key, mname = _codiscrete_times(prefix, spec.n, G)
        D, objs2, _, mname2 = _codiscrete_times(prefix + "'", spec.n, G)
        objects = list(C.objects) + list(D.objects)
        mors = {**C.morphisms, **D.morphisms}
        ident = {**C.identity, **D.identity}
        inverse = {**C.inverse, **D.inverse}
        comp = {**C.compose_table, **D.compose_table}
        carrier = FiniteGroupoid(objects, mors, ident, inverse, comp)
        io = {**dict(zip(objs, objs2)), **dict(zip(objs2, objs))}
        im = {}
        for nm, (i, g, j) in key.items():
            im[nm] = mname2(i, g, j)
            im[mname2(i, g, j)] = nm
        return InvolutiveGroupoid(carrier, io, im)
    C, objs, key, mname = _codiscrete_times(prefix, spec.n, G)
    sigma, theta, t = spec.sigma, dict(spec.theta), spec.twist
    io = {objs[i]: objs[sigma[i]] for i in range(spec.n)}
    im = {}
    for nm, (i, g, j) in key.items():
        h = G.mul[G.mul[t[i], theta[g]], G.inv(t[j])]
        im[nm] = mname(sigma[i], h, sigma[j])
    return InvolutiveGroupoid(C, io, im)


def build_groupoid(specs: list[ComponentSpec]) -> InvolutiveGroupoid:
    parts = [build_component(s, chr(ord("a") + k)) for k, s in enumerate(specs)]
    if not parts:
        return empty()
    return parts[0] if len(parts) == 1 else disjoint_union(*parts)


def _object_involutions(n: int, fixed_first: bool = True) -> list[tuple]:
    """Representatives of involutions on ``n`` points: the first ``2k`` swapped in pairs."""
    out = []
    for k in range(n // 2 + 1):
        s = list(range(n))
        for p in range(k):
            s[2 * p], s[2 * p + 1] = 2 * p + 1, 2 * p
        out.append(tuple(s))
    return out


def _twists(G: Group, sigma: tuple, theta: dict) -> list[tuple]:
    """Twist vectors making the involution strict, up to natural isomorphism.

    Squaring the involution multiplies by ``t_{σi} θ(t_i)``, which must be one
    constant ``c`` with ``θ(c) = c``.  Conjugating by a natural isomorphism
    normalizes a swapped pair to ``(e, c)`` and moves the twist at a fixed
    object within its class ``t ~ s t θ(s)⁻¹``.
    """
    fixed = [i for i in range(len(sigma)) if sigma[i] == i]
    out = []
    for c in G.elements:
        if theta[c] != c:
            continue
        reps, seen = [], set()
        for t in G.elements:
            if G.mul[t, theta[t]] != c:
                continue
            cls = frozenset(G.mul[G.mul[s, t], G.inv(theta[s])] for s in G.elements)
            if cls not in seen:
                seen.add(cls)
                reps.append(t)
        if fixed and not reps:
            continue
        for choice in itertools.combinations_with_replacement(reps, len(fixed)):
            t = [None] * len(sigma)
            for i, ti in zip(fixed, choice):
                t[i] = ti
            for i in range(len(sigma)):
                if sigma[i] > i:
                    t[i], t[sigma[i]] = G.e, c
            out.append(tuple(t))
    return out


def _canonical(G: Group, sigma: tuple, theta: dict, t: tuple, autos: list[dict]) -> tuple:
    """The least relabelling of the involution by group automorphisms and fixed-object permutations."""
    n = len(sigma)
    fixed = [i for i in range(n) if sigma[i] == i]
    table = {(i, g, j): (sigma[i], G.mul[G.mul[t[i], theta[g]], G.inv(t[j])], sigma[j])
             for i in range(n) for j in range(n) for g in G.elements}
    best = None
    for a in autos:
        for perm in itertools.permutations(fixed):
            pi = list(range(n))
            for i, k in zip(fixed, perm):
                pi[i] = k
            key = tuple(sorted(((pi[i], a[g], pi[j]), (pi[x], a[h], pi[y]))
                               for (i, g, j), (x, h, y) in table.items()))
            if best is None or key < best:
                best = key
    return best


@functools.lru_cache(maxsize=None)
def component_specs(max_objects: int, max_hom: int, dedupe: bool = True) -> tuple:
    """Every component shape within the bounds, one per relabelling class when ``dedupe``."""
    out = []
    for G in GROUPS:
        if len(G.elements) > max_hom:
            continue
        autos = G.automorphisms()
        for n in range(1, max_objects + 1):
            if 2 * n <= max_objects:
                out.append(ComponentSpec(n, G, paired=True))
            for sigma in _object_involutions(n):
                seen = set()
                for th in G.automorphisms2():
                    for t in _twists(G, sigma, th):
                        if dedupe:
                            key = _canonical(G, sigma, th, t, autos)
                            if key in seen:
                                continue
                            seen.add(key)
                        out.append(ComponentSpec(n, G, False, sigma, tuple(sorted(th.items())), t))
    return tuple(out)


def enumerate_involutive_groupoids(max_objects: int = 4, max_hom: int = 4) -> Iterator[InvolutiveGroupoid]:
    """Every groupoid built from multisets of component shapes within the bounds."""
    specs = component_specs(max_objects, max_hom)

    def rec(start, room):
        yield []
        for k in range(start, len(specs)):
            s = specs[k]
            if s.size <= room:
                for rest in rec(k, room - s.size):
                    yield [s] + rest

    for combo in rec(0, max_objects):
        if combo:
            yield build_groupoid(combo)


def random_involutive_groupoid(rng: random.Random, max_objects: int = 4, max_hom: int = 4,
                               min_objects: int = 1) -> InvolutiveGroupoid:
    specs = component_specs(max_objects, max_hom, dedupe=False)
    while True:
        target = rng.randint(min_objects, max_objects)
        combo, room = [], target
        while room > 0:
            fit = [s for s in specs if s.size <= room]
            s = rng.choice(fit)
            combo.append(s)
            room -= s.size
        G = build_groupoid(combo)
        if validate(G).ok:
            return G


# ----------------------------------------------------------------------
# random maps
# ----------------------------------------------------------------------
def random_functor(rng: random.Random, A: InvolutiveGroupoid, B: InvolutiveGroupoid,
                   **kw) -> Optional[EquivariantFunctor]:
    """A functor drawn by randomized depth-first search (not uniform)."""
    return next(iter(FunctorSearch(A, B, equivariant=True, rng=rng, **kw)), None)


def random_equivariant_functor(rng: random.Random, max_objects: int = 6, max_hom: int = 4,
                               tries: int = 50) -> EquivariantFunctor:
    for _ in range(tries):
        A = random_involutive_groupoid(rng, max_objects, max_hom)
        B = random_involutive_groupoid(rng, max_objects, max_hom)
        F = random_functor(rng, A, B)
        if F is not None:
            return F
    raise RuntimeError("no functor found")


def random_fibration(rng: random.Random, B: Optional[InvolutiveGroupoid] = None, max_objects: int = 4,
                     max_hom: int = 4, tries: int = 200) -> EquivariantFunctor:
    """A random fibration, drawn by rejection from random functors."""
    for _ in range(tries):
        base = B if B is not None else random_involutive_groupoid(rng, max_objects, max_hom)
        E = random_involutive_groupoid(rng, max_objects, max_hom)
        F = random_functor(rng, E, base)
        if F is not None and is_fibration(F)[0]:
            return F
    raise RuntimeError("no fibration found")


def random_acyclic_cofibration(rng: random.Random, max_objects: int = 3, max_hom: int = 2) -> EquivariantFunctor:
    """Composites of cell attachments and path-object sections."""
    X = random_involutive_groupoid(rng, max_objects, max_hom)
    kind = rng.randrange(3)
    if kind == 0:
        step = pushout_cell(attaching_map(X, rng.choice(sorted(X.objects))))
        w = step.inclusion
        if rng.random() < 0.5:
            Y = step.groupoid
            w = compose_functors(pushout_cell(attaching_map(Y, rng.choice(sorted(Y.objects)))).inclusion, w)
        return w
    if kind == 1:
        return path_object(X, check=False).w
    return identity_functor(X)


def random_discrete_fibration(rng: random.Random, base: Optional[InvolutiveGroupoid] = None,
                              max_objects: int = 3, max_hom: int = 2) -> EquivariantFunctor:
    """Pull the universal discrete fibration back along a random map into a small universe."""
    seeds = rng.choice([[["0"]], [["0", "1"]], [["0"], ["1"]], [[], ["0"]], [["0"], ["0", "1"]]])
    sub = realize_subuniverse(seeds)
    while True:
        B = base if base is not None else random_involutive_groupoid(rng, max_objects, max_hom)
        g = random_functor(rng, B, sub.U)
        if g is not None:
            break
        if base is not None:
            raise RuntimeError("no map into the universe")
    sq = pullback(sub.p, g)
    E = sq.apex
    on = {x: f"e{k}" for k, x in enumerate(E.objects)}
    om = {m: f"u{k}" for k, m in enumerate(E.mor_ids)}
    E2, _ = rename(E, on, om)
    return EquivariantFunctor(
        E2, B,
        {on[x]: sq.proj1.on_obj[x] for x in E.objects},
        {om[m]: sq.proj1.on_mor[m] for m in E.mor_ids},
    )


def random_adjunction_triple(rng: random.Random, max_objects: int = 3, max_hom: int = 2,
                             tries: int = 200) -> tuple:
    """``(g, f, h)`` with ``g: A -> B`` and ``f: C -> A`` fibrations and ``h: D -> B`` any map."""
    for _ in range(tries):
        g = random_fibration(rng, max_objects=max_objects, max_hom=max_hom)
        try:
            f = random_fibration(rng, B=g.dom, max_objects=max_objects, max_hom=max_hom, tries=20)
        except RuntimeError:
            continue
        D = random_involutive_groupoid(rng, max_objects, max_hom)
        h = random_functor(rng, D, g.cod)
        if h is not None:
            return g, f, h
    raise RuntimeError("no triple found")
