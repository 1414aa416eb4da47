"""Finite categories: functors, presheaves, fibration predicates, and the
constructions tying presheaves to discrete fibrations.

Conventions used throughout:
  - morphisms are indices with source/target/identity tables; ``comp[g][f]``
    is g after f when defined and -1 otherwise;
  - hom-sets are listed in increasing morphism-index order;
  - every constructed category documents its object and morphism order, so
    rebuilding from equal inputs gives equal tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import require
from .finset import FinSetMap, FinSetObj, compose, identity, pullback
from .unionfind import UnionFind


@dataclass(frozen=True)
class FinCat:
    """A finite category with eagerly checked laws.

    Invalid tables are a construction error, so downstream operations may
    assume lawfulness.
    """

    objects: FinSetObj
    morphisms: FinSetObj
    src: FinSetMap
    tgt: FinSetMap
    ident: FinSetMap
    comp: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        o, m = self.objects, self.morphisms
        require(self.src.dom == m and self.src.cod == o, "cat-src-typing",
                "src must map morphisms to objects")
        require(self.tgt.dom == m and self.tgt.cod == o, "cat-tgt-typing",
                "tgt must map morphisms to objects")
        require(self.ident.dom == o and self.ident.cod == m, "cat-ident-typing",
                "ident must map objects to morphisms")
        for x in o.elements:
            i = self.ident(x)
            require(self.src(i) == x and self.tgt(i) == x, "cat-ident-endo",
                    f"identity of object {x} is not an endomorphism at {x}")
        require(len(self.comp) == m.size, "cat-comp-shape",
                "composition table needs one row per morphism")
        by_src: list[list[int]] = [[] for _ in o.elements]
        for f in m.elements:
            by_src[self.src(f)].append(f)
        for g in m.elements:
            row = self.comp[g]
            require(len(row) == m.size, "cat-comp-shape",
                    "composition table rows must cover all morphisms")
            for f in m.elements:
                c = row[f]
                if self.tgt(f) != self.src(g):
                    require(c == -1, "cat-comp-partial",
                            f"composite defined for non-composable pair ({g}, {f})")
                else:
                    require(0 <= c < m.size, "cat-comp-total",
                            f"composable pair ({g}, {f}) has no composite")
                    require(self.src(c) == self.src(f) and self.tgt(c) == self.tgt(g),
                            "cat-comp-typing",
                            f"composite of ({g}, {f}) has wrong boundary")
        for f in m.elements:
            require(self.comp[self.ident(self.tgt(f))][f] == f, "cat-unit",
                    f"left unit law fails at morphism {f}")
            require(self.comp[f][self.ident(self.src(f))] == f, "cat-unit",
                    f"right unit law fails at morphism {f}")
        for f in m.elements:
            for g in by_src[self.tgt(f)]:
                gf = self.comp[g][f]
                for h in by_src[self.tgt(g)]:
                    require(self.comp[h][gf] == self.comp[self.comp[h][g]][f],
                            "cat-assoc", f"associativity fails on ({h}, {g}, {f})")
        object.__setattr__(self, "_by_src", tuple(tuple(r) for r in by_src))

    @property
    def objs(self) -> range:
        return self.objects.elements

    @property
    def mors(self) -> range:
        return self.morphisms.elements

    def compose(self, g: int, f: int) -> int:
        require(self.tgt(f) == self.src(g), "cat-compose-boundary",
                f"morphisms {g} and {f} are not composable")
        return self.comp[g][f]

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(f for f in self.mors if self.src(f) == x and self.tgt(f) == y)

    def out_of(self, x: int) -> tuple[int, ...]:
        return self._by_src[x]

    def is_identity(self, f: int) -> bool:
        return self.ident(self.src(f)) == f

    def inverse_of(self, f: int) -> int | None:
        for g in self.hom(self.tgt(f), self.src(f)):
            if (self.comp[g][f] == self.ident(self.src(f))
                    and self.comp[f][g] == self.ident(self.tgt(f))):
                return g
        return None

    def is_iso(self, f: int) -> bool:
        return self.inverse_of(f) is not None


def discrete_cat(n: int) -> FinCat:
    o = FinSetObj(n)
    table = tuple(tuple(i if i == j else -1 for j in range(n)) for i in range(n))
    return FinCat(o, FinSetObj(n), identity(o), identity(o), identity(o), table)


def terminal_cat() -> FinCat:
    return discrete_cat(1)


def ordinal2() -> FinCat:
    """Two objects 0, 1 and a single non-identity arrow 2: 0 -> 1."""
    o, m = FinSetObj(2), FinSetObj(3)
    src = FinSetMap(m, o, (0, 1, 0))
    tgt = FinSetMap(m, o, (0, 1, 1))
    ident = FinSetMap(o, m, (0, 1))
    comp = ((0, -1, -1), (-1, 1, 2), (2, -1, -1))
    return FinCat(o, m, src, tgt, ident, comp)


def monoid_cat(table: tuple[tuple[int, ...], ...], unit: int) -> FinCat:
    """One-object category whose morphisms multiply by ``table[g][f]`` = g∘f."""
    n = len(table)
    o, m = FinSetObj(1), FinSetObj(n)
    return FinCat(o, m, FinSetMap(m, o, (0,) * n), FinSetMap(m, o, (0,) * n),
                  FinSetMap(o, m, (unit,)), tuple(tuple(r) for r in table))


def opposite_cat(c: FinCat) -> FinCat:
    comp = tuple(tuple(c.comp[f][g] for f in c.mors) for g in c.mors)
    return FinCat(c.objects, c.morphisms, c.tgt, c.src, c.ident, comp)


def product_cat(a: FinCat, b: FinCat) -> FinCat:
    """Objects and morphisms are pairs, enumerated with the first factor major."""
    no, nm = b.objects.size, b.morphisms.size
    o = FinSetObj(a.objects.size * no)
    m = FinSetObj(a.morphisms.size * nm)
    src = FinSetMap(m, o, tuple(a.src(f) * no + b.src(g)
                                for f in a.mors for g in b.mors))
    tgt = FinSetMap(m, o, tuple(a.tgt(f) * no + b.tgt(g)
                                for f in a.mors for g in b.mors))
    ident = FinSetMap(o, m, tuple(a.ident(x) * nm + b.ident(y)
                                  for x in a.objs for y in b.objs))
    comp = []
    for f1 in a.mors:
        for g1 in b.mors:
            row = []
            for f2 in a.mors:
                for g2 in b.mors:
                    c1, c2 = a.comp[f1][f2], b.comp[g1][g2]
                    row.append(-1 if c1 < 0 or c2 < 0 else c1 * nm + c2)
            comp.append(tuple(row))
    return FinCat(o, m, src, tgt, ident, tuple(comp))


@dataclass(frozen=True)
class Functor:
    dom: FinCat
    cod: FinCat
    omap: tuple[int, ...]
    mmap: tuple[int, ...]

    def __post_init__(self) -> None:
        a, b = self.dom, self.cod
        require(len(self.omap) == a.objects.size, "functor-omap",
                "object table length mismatch")
        require(len(self.mmap) == a.morphisms.size, "functor-mmap",
                "morphism table length mismatch")
        require(all(0 <= x < b.objects.size for x in self.omap), "functor-omap",
                "object image out of range")
        require(all(0 <= f < b.morphisms.size for f in self.mmap), "functor-mmap",
                "morphism image out of range")
        for f in a.mors:
            require(b.src(self.mmap[f]) == self.omap[a.src(f)]
                    and b.tgt(self.mmap[f]) == self.omap[a.tgt(f)],
                    "functor-boundary", f"image of morphism {f} has wrong boundary")
        for x in a.objs:
            require(self.mmap[a.ident(x)] == b.ident(self.omap[x]),
                    "functor-ident", f"identity at {x} not preserved")
        for f in a.mors:
            for g in a.out_of(a.tgt(f)):
                require(self.mmap[a.comp[g][f]] == b.comp[self.mmap[g]][self.mmap[f]],
                        "functor-comp", f"composition not preserved on ({g}, {f})")

    def on_obj(self, x: int) -> int:
        return self.omap[x]

    def on_mor(self, f: int) -> int:
        return self.mmap[f]


def identity_functor(c: FinCat) -> Functor:
    return Functor(c, c, tuple(c.objs), tuple(c.mors))


def compose_functors(g: Functor, f: Functor) -> Functor:
    require(f.cod == g.dom, "functor-compose-boundary",
            "functors are not composable")
    return Functor(f.dom, g.cod, tuple(g.omap[x] for x in f.omap),
                   tuple(g.mmap[m] for m in f.mmap))


def constant_functor(dom: FinCat, cod: FinCat, x: int) -> Functor:
    return Functor(dom, cod, (x,) * dom.objects.size,
                   (cod.ident(x),) * dom.morphisms.size)


def is_functor_iso(f: Functor) -> bool:
    return (len(set(f.omap)) == f.cod.objects.size == len(f.omap)
            and len(set(f.mmap)) == f.cod.morphisms.size == len(f.mmap))


@dataclass(frozen=True)
class NatTrans:
    dom: Functor
    cod: Functor
    components: tuple[int, ...]

    def __post_init__(self) -> None:
        f, g = self.dom, self.cod
        require(f.dom == g.dom and f.cod == g.cod, "nat-parallel",
                "natural transformations live between parallel functors")
        a, b = f.dom, f.cod
        require(len(self.components) == a.objects.size, "nat-components",
                "one component per object required")
        for x in a.objs:
            c = self.components[x]
            require(b.src(c) == f.omap[x] and b.tgt(c) == g.omap[x],
                    "nat-typing", f"component at {x} has wrong boundary")
        for m in a.mors:
            x, y = a.src(m), a.tgt(m)
            require(b.comp[self.components[y]][f.mmap[m]]
                    == b.comp[g.mmap[m]][self.components[x]],
                    "nat-square", f"naturality fails at morphism {m}")


@dataclass(frozen=True)
class Presheaf:
    """Contravariant Set-valued functor: ``act[m]`` maps the value at tgt(m)
    to the value at src(m)."""

    base: FinCat
    at: tuple[FinSetObj, ...]
    act: tuple[FinSetMap, ...]

    def __post_init__(self) -> None:
        c = self.base
        require(len(self.at) == c.objects.size, "presheaf-at",
                "one value set per object required")
        require(len(self.act) == c.morphisms.size, "presheaf-act",
                "one action per morphism required")
        for m in c.mors:
            require(self.act[m].dom == self.at[c.tgt(m)]
                    and self.act[m].cod == self.at[c.src(m)],
                    "presheaf-boundary", f"action of morphism {m} mistyped")
        for x in c.objs:
            require(self.act[c.ident(x)] == identity(self.at[x]),
                    "presheaf-ident", f"identity action at {x} not the identity")
        for f in c.mors:
            for g in c.out_of(c.tgt(f)):
                require(self.act[c.comp[g][f]] == compose(self.act[f], self.act[g]),
                        "presheaf-comp",
                        f"contravariant functoriality fails on ({g}, {f})")


def representable(c: FinCat, b: int) -> Presheaf:
    """The presheaf x -> hom(x, b), acting by precomposition."""
    homs = [c.hom(x, b) for x in c.objs]
    at = tuple(FinSetObj(len(h)) for h in homs)
    act = []
    for m in c.mors:
        x, y = c.src(m), c.tgt(m)
        act.append(FinSetMap(at[y], at[x], tuple(
            homs[x].index(c.comp[h][m]) for h in homs[y])))
    return Presheaf(c, at, tuple(act))


def constant_presheaf(c: FinCat, size: int) -> Presheaf:
    v = FinSetObj(size)
    return Presheaf(c, (v,) * c.objects.size,
                    (identity(v),) * c.morphisms.size)


@dataclass(frozen=True)
class Comma:
    """A comma category with its projections and the connecting transformation.

    Objects are triples (a, b, phi: F a -> G b) ordered lexicographically;
    morphisms are tuples (source index, target index, u, v) in lexicographic
    order, where (u, v) is a pair making the evident square commute.
    """

    cat: FinCat
    proj1: Functor
    proj2: Functor
    transform: NatTrans
    objects_data: tuple[tuple[int, int, int], ...]
    morphisms_data: tuple[tuple[int, int, int, int], ...]

    def object_index(self, a: int, b: int, phi: int) -> int:
        return self.objects_data.index((a, b, phi))

    def morphism_index(self, si: int, ti: int, u: int, v: int) -> int:
        return self.morphisms_data.index((si, ti, u, v))


def comma(f: Functor, g: Functor, iso_only: bool = False) -> Comma:
    """The comma category of f: A -> C and g: B -> C; with ``iso_only`` the
    connecting morphism phi is required to be invertible (iso-comma)."""
    require(f.cod == g.cod, "comma-boundary", "functors must share a codomain")
    a_cat, b_cat, c_cat = f.dom, g.dom, f.cod
    objects = [(a, b, phi)
               for a in a_cat.objs for b in b_cat.objs
               for phi in c_cat.hom(f.omap[a], g.omap[b])
               if not iso_only or c_cat.is_iso(phi)]
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = []
    for si, (a, b, phi) in enumerate(objects):
        for ti, (a2, b2, phi2) in enumerate(objects):
            for u in a_cat.hom(a, a2):
                for v in b_cat.hom(b, b2):
                    if (c_cat.comp[g.mmap[v]][phi]
                            == c_cat.comp[phi2][f.mmap[u]]):
                        morphisms.append((si, ti, u, v))
    mor_index = {m: i for i, m in enumerate(morphisms)}
    o = FinSetObj(len(objects))
    m = FinSetObj(len(morphisms))
    src = FinSetMap(m, o, tuple(s for s, _, _, _ in morphisms))
    tgt = FinSetMap(m, o, tuple(t for _, t, _, _ in morphisms))
    ident = FinSetMap(o, m, tuple(
        mor_index[(i, i, a_cat.ident(a), b_cat.ident(b))]
        for i, (a, b, _) in enumerate(objects)))
    comp_rows = []
    for s2, t2, u2, v2 in morphisms:
        row = []
        for s1, t1, u1, v1 in morphisms:
            if t1 != s2:
                row.append(-1)
            else:
                row.append(mor_index[(s1, t2, a_cat.comp[u2][u1],
                                      b_cat.comp[v2][v1])])
        comp_rows.append(tuple(row))
    cat = FinCat(o, m, src, tgt, ident, tuple(comp_rows))
    proj1 = Functor(cat, a_cat, tuple(a for a, _, _ in objects),
                    tuple(u for _, _, u, _ in morphisms))
    proj2 = Functor(cat, b_cat, tuple(b for _, b, _ in objects),
                    tuple(v for _, _, _, v in morphisms))
    transform = NatTrans(compose_functors(f, proj1), compose_functors(g, proj2),
                         tuple(phi for _, _, phi in objects))
    return Comma(cat, proj1, proj2, transform,
                 tuple(objects), tuple(morphisms))


def iso_comma(f: Functor, g: Functor) -> Comma:
    return comma(f, g, iso_only=True)


def arrow_category(c: FinCat) -> Comma:
    """The category of morphisms of c and commuting squares between them."""
    return comma(identity_functor(c), identity_functor(c))


def is_cartesian(p: Functor, chi: int) -> bool:
    """Whether chi is cartesian for p: for every object k, the square sending
    psi: k -> src(chi) to (p psi, chi∘psi) is a pullback of hom-sets."""
    e_cat, b_cat = p.dom, p.cod
    e1, e = e_cat.src(chi), e_cat.tgt(chi)
    pk_of = p.omap
    for k in e_cat.objs:
        top = e_cat.hom(k, e1)
        right = e_cat.hom(k, e)
        bot1 = b_cat.hom(pk_of[k], pk_of[e1])
        bot0 = b_cat.hom(pk_of[k], pk_of[e])
        o_top = FinSetObj(len(top))
        o_right = FinSetObj(len(right))
        o_bot1 = FinSetObj(len(bot1))
        o_bot0 = FinSetObj(len(bot0))
        post = FinSetMap(o_bot1, o_bot0, tuple(
            bot0.index(b_cat.comp[p.mmap[chi]][gamma]) for gamma in bot1))
        down = FinSetMap(o_right, o_bot0, tuple(
            bot0.index(p.mmap[phi]) for phi in right))
        pb = pullback(post, down)
        c1 = FinSetMap(o_top, o_bot1, tuple(
            bot1.index(p.mmap[psi]) for psi in top))
        c2 = FinSetMap(o_top, o_right, tuple(
            right.index(e_cat.comp[chi][psi]) for psi in top))
        if not pb.mediate(c1, c2).is_bijective:
            return False
    return True


def _lifts(p: Functor, e: int, beta: int, up_to_iso: bool) -> bool:
    e_cat, b_cat = p.dom, p.cod
    for chi in e_cat.mors:
        if e_cat.tgt(chi) != e:
            continue
        if up_to_iso:
            for iota in b_cat.hom(b_cat.src(beta), p.omap[e_cat.src(chi)]):
                if b_cat.is_iso(iota) and b_cat.comp[p.mmap[chi]][iota] == beta:
                    return True
        elif p.mmap[chi] == beta:
            return True
    return False


def is_groupoid_fibration(p: Functor) -> bool:
    """Every morphism downstairs lifts up to isomorphism, and every morphism
    upstairs is cartesian."""
    b_cat = p.cod
    for e in p.dom.objs:
        for beta in b_cat.mors:
            if b_cat.tgt(beta) == p.omap[e] and not _lifts(p, e, beta, True):
                return False
    return all(is_cartesian(p, chi) for chi in p.dom.mors)


def is_groupoid_fibration_strict(p: Functor) -> bool:
    """The variant demanding on-the-nose lifts p(chi) = beta; differs from the
    canonical predicate only through non-skeletal bases."""
    b_cat = p.cod
    for e in p.dom.objs:
        for beta in b_cat.mors:
            if b_cat.tgt(beta) == p.omap[e] and not _lifts(p, e, beta, False):
                return False
    return all(is_cartesian(p, chi) for chi in p.dom.mors)


def is_er_fibration(p: Functor) -> bool:
    """Groupoid fibration whose vertical endomorphisms are identities."""
    e_cat = p.dom
    for xi in e_cat.mors:
        if (e_cat.src(xi) == e_cat.tgt(xi)
                and p.dom.is_identity(xi) is False
                and p.cod.is_identity(p.mmap[xi])):
            return False
    return is_groupoid_fibration(p)


def is_discrete_fibration(p: Functor) -> bool:
    """Unique lifts: each morphism downstairs with a given codomain object
    upstairs lifts to exactly one morphism."""
    e_cat, b_cat = p.dom, p.cod
    for e in e_cat.objs:
        for beta in b_cat.mors:
            if b_cat.tgt(beta) != p.omap[e]:
                continue
            lifts = [chi for chi in e_cat.mors
                     if e_cat.tgt(chi) == e and p.mmap[chi] == beta]
            if len(lifts) != 1:
                return False
    return True


def are_isomorphic_objects(c: FinCat, x: int, y: int) -> bool:
    return any(c.is_iso(f) for f in c.hom(x, y))


def is_equivalence(f: Functor) -> bool:
    a, b = f.dom, f.cod
    for x in a.objs:
        for y in a.objs:
            imgs = [f.mmap[m] for m in a.hom(x, y)]
            if len(set(imgs)) != len(imgs):
                return False
            if sorted(imgs) != sorted(b.hom(f.omap[x], f.omap[y])):
                return False
    for z in b.objs:
        if not any(are_isomorphic_objects(b, z, f.omap[x]) for x in a.objs):
            return False
    return True


def gfib_via_cotensor(p: Functor) -> bool:
    """Groupoid-fibration test through the arrow category: the canonical
    comparison from E-squared to the comma of the base under p must be an
    equivalence."""
    e2 = arrow_category(p.dom)
    bp = comma(identity_functor(p.cod), p)
    omap = tuple(
        bp.object_index(p.omap[a], b, p.mmap[phi])
        for a, b, phi in e2.objects_data)
    mmap = tuple(
        bp.morphism_index(omap[si], omap[ti], p.mmap[u], v)
        for si, ti, u, v in e2.morphisms_data)
    return is_equivalence(Functor(e2.cat, bp.cat, omap, mmap))


@dataclass(frozen=True)
class ElementsCat:
    """The category of elements of a presheaf with its projection functor.

    Objects are pairs (base object, element) listed base-major; morphisms are
    pairs (base morphism beta, target element t') listed beta-major, running
    from (src beta, act[beta](t')) to (tgt beta, t').
    """

    proj: Functor
    objects_data: tuple[tuple[int, int], ...]
    morphisms_data: tuple[tuple[int, int], ...]

    @property
    def cat(self) -> FinCat:
        return self.proj.dom

    def object_index(self, b: int, t: int) -> int:
        return self.objects_data.index((b, t))


def elements(p: Presheaf) -> ElementsCat:
    base = p.base
    objects = [(b, t) for b in base.objs for t in p.at[b].elements]
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = [(beta, t2) for beta in base.mors
                 for t2 in p.at[base.tgt(beta)].elements]
    mor_index = {m: i for i, m in enumerate(morphisms)}
    o = FinSetObj(len(objects))
    m = FinSetObj(len(morphisms))
    src = FinSetMap(m, o, tuple(
        obj_index[(base.src(beta), p.act[beta](t2))] for beta, t2 in morphisms))
    tgt = FinSetMap(m, o, tuple(
        obj_index[(base.tgt(beta), t2)] for beta, t2 in morphisms))
    ident = FinSetMap(o, m, tuple(
        mor_index[(base.ident(b), t)] for b, t in objects))
    comp_rows = []
    for beta2, t2 in morphisms:
        row = []
        for beta1, t1 in morphisms:
            if base.tgt(beta1) != base.src(beta2) or t1 != p.act[beta2](t2):
                row.append(-1)
            else:
                row.append(mor_index[(base.comp[beta2][beta1], t2)])
        comp_rows.append(tuple(row))
    cat = FinCat(o, m, src, tgt, ident, tuple(comp_rows))
    proj = Functor(cat, base, tuple(b for b, _ in objects),
                   tuple(beta for beta, _ in morphisms))
    return ElementsCat(proj, tuple(objects), tuple(morphisms))


def fibers(p: Functor) -> Presheaf:
    """The presheaf of fibers of a discrete fibration: values are the objects
    over each base object (in object order) and actions take an element to
    the source of its unique lift."""
    require(is_discrete_fibration(p), "not-discrete-fibration",
            "fibers only exist for a discrete fibration")
    e_cat, b_cat = p.dom, p.cod
    fiber_objs = [tuple(e for e in e_cat.objs if p.omap[e] == b)
                  for b in b_cat.objs]
    position = {}
    for b in b_cat.objs:
        for i, e in enumerate(fiber_objs[b]):
            position[e] = i
    at = tuple(FinSetObj(len(f)) for f in fiber_objs)
    act = []
    for beta in b_cat.mors:
        b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
        table = []
        for e2 in fiber_objs[b2]:
            lift = [chi for chi in e_cat.mors
                    if e_cat.tgt(chi) == e2 and p.mmap[chi] == beta]
            table.append(position[e_cat.src(lift[0])])
        act.append(FinSetMap(at[b2], at[b1], tuple(table)))
    return Presheaf(b_cat, at, tuple(act))


def comprehensive_factorization(g: Functor) -> tuple[Functor, Functor]:
    """Factor g as a final functor j followed by a discrete fibration s.

    The fiber of s over x is the set of connected components of the comma of
    x under g, computed by union-find and ordered by smallest member (e, psi).
    """
    f_cat, x_cat = g.dom, g.cod
    classes_at: list[list[list[tuple[int, int]]]] = []
    class_index: list[dict[tuple[int, int], int]] = []
    for x in x_cat.objs:
        uf = UnionFind()
        for e in f_cat.objs:
            for psi in x_cat.hom(x, g.omap[e]):
                uf.add((e, psi))
        for phi in f_cat.mors:
            e1, e2 = f_cat.src(phi), f_cat.tgt(phi)
            for psi in x_cat.hom(x, g.omap[e1]):
                uf.unite((e1, psi), (e2, x_cat.comp[g.mmap[phi]][psi]))
        cls = uf.classes()
        classes_at.append(cls)
        class_index.append({member: i for i, c in enumerate(cls) for member in c})
    at = tuple(FinSetObj(len(c)) for c in classes_at)
    act = []
    for gamma in x_cat.mors:
        x1, x2 = x_cat.src(gamma), x_cat.tgt(gamma)
        table = []
        for c in classes_at[x2]:
            e, psi = c[0]
            table.append(class_index[x1][(e, x_cat.comp[psi][gamma])])
        act.append(FinSetMap(at[x2], at[x1], tuple(table)))
    p = Presheaf(x_cat, at, tuple(act))
    el = elements(p)
    s = el.proj
    j_omap = tuple(
        el.object_index(g.omap[e],
                        class_index[g.omap[e]][(e, x_cat.ident(g.omap[e]))])
        for e in f_cat.objs)
    mor_index = {m: i for i, m in enumerate(el.morphisms_data)}
    j_mmap = []
    for phi in f_cat.mors:
        e2 = f_cat.tgt(phi)
        x2 = g.omap[e2]
        j_mmap.append(mor_index[(g.mmap[phi],
                                 class_index[x2][(e2, x_cat.ident(x2))])])
    j = Functor(f_cat, el.cat, j_omap, tuple(j_mmap))
    return j, s


def is_final(j: Functor) -> bool:
    """Whether every comma of an object of the codomain under j is nonempty
    and connected."""
    f_cat, x_cat = j.dom, j.cod
    for x in x_cat.objs:
        uf = UnionFind()
        count = 0
        for e in f_cat.objs:
            for psi in x_cat.hom(x, j.omap[e]):
                uf.add((e, psi))
                count += 1
        if count == 0:
            return False
        for phi in f_cat.mors:
            e1, e2 = f_cat.src(phi), f_cat.tgt(phi)
            for psi in x_cat.hom(x, j.omap[e1]):
                uf.unite((e1, psi), (e2, x_cat.comp[j.mmap[phi]][psi]))
        if len(uf.classes()) != 1:
            return False
    return True


def presheaf_iso(p: Presheaf, q: Presheaf) -> tuple[FinSetMap, ...] | None:
    """Search for a natural isomorphism between presheaves on the same base;
    returns its components or None."""
    require(p.base == q.base, "presheaf-iso-base",
            "presheaves must share a base category")
    base = p.base
    if any(p.at[x].size != q.at[x].size for x in base.objs):
        return None
    components: list[FinSetMap | None] = [None] * base.objects.size

    def natural_so_far(upto: int) -> bool:
        for m in base.mors:
            x, y = base.src(m), base.tgt(m)
            if x <= upto and y <= upto:
                lhs = compose(components[x], p.act[m])
                rhs = compose(q.act[m], components[y])
                if lhs != rhs:
                    return False
        return True

    def assign(x: int) -> bool:
        if x == base.objects.size:
            return True
        for perm in itertools.permutations(q.at[x].elements):
            components[x] = FinSetMap(p.at[x], q.at[x], perm)
            if natural_so_far(x) and assign(x + 1):
                return True
        components[x] = None
        return False

    if assign(0):
        return tuple(components)  # type: ignore[arg-type]
    return None


def all_functors(a: FinCat, b: FinCat,
                 limit: int | None = None) -> Iterator[Functor]:
    """Enumerate functors a -> b in a deterministic order, by backtracking
    over object images and then morphism images."""
    produced = 0
    non_ident = [f for f in a.mors if not a.is_identity(f)]
    for omap in itertools.product(b.objs, repeat=a.objects.size):
        mmap: list[int | None] = [None] * a.morphisms.size
        for x in a.objs:
            mmap[a.ident(x)] = b.ident(omap[x])

        def consistent(just: int) -> bool:
            for f in a.mors:
                if mmap[f] is None:
                    continue
                for g in a.out_of(a.tgt(f)):
                    if mmap[g] is None:
                        continue
                    c = a.comp[g][f]
                    if mmap[c] is not None and (
                            b.comp[mmap[g]][mmap[f]] != mmap[c]):
                        return False
            return True

        def assign(i: int):
            nonlocal produced
            if limit is not None and produced >= limit:
                return
            if i == len(non_ident):
                yield Functor(a, b, omap, tuple(mmap))  # type: ignore[arg-type]
                produced += 1
                return
            f = non_ident[i]
            for w in b.hom(omap[a.src(f)], omap[a.tgt(f)]):
                mmap[f] = w
                if consistent(f):
                    yield from assign(i + 1)
                    if limit is not None and produced >= limit:
                        mmap[f] = None
                        return
            mmap[f] = None

        yield from assign(0)
        if limit is not None and produced >= limit:
            return


def pi0_classes(c: FinCat) -> list[list[int]]:
    """Connected components of the undirected morphism graph, each sorted,
    ordered by smallest object."""
    uf = UnionFind()
    for x in c.objs:
        uf.add(x)
    for m in c.mors:
        uf.unite(c.src(m), c.tgt(m))
    return uf.classes()
