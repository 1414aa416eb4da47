"""Profunctors between finite categories and polynomials over them.

A profunctor from A to B assigns a finite set to every pair (object of B,
object of A), with a contravariant B-action and a covariant A-action.
Composition is computed as a coend: a sum over middle objects quotiented
by the zigzag relation, carried out with union-find on concrete triples.
Right liftings are computed as ends: sets of naturally varying families
of maps.  A polynomial has a profunctor as its lifter leg and a discrete
fibration as its neat leg; composition of polynomials follows the
tabulation of the lifted presheaf of fibers, with the induced connecting
module given by an explicit splitting-family formula that the
construction re-validates on every run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import require
from .fincat import (
    ElementsCat,
    FinCat,
    Functor,
    Presheaf,
    compose_functors,
    comprehensive_factorization,
    elements,
    fibers,
    identity_functor,
    is_discrete_fibration,
    opposite_cat,
    ordinal2,
    presheaf_iso,
    product_cat,
    terminal_cat,
)
from .finset import FinSetMap, FinSetObj, compose, identity
from .unionfind import UnionFind


@dataclass(frozen=True)
class Profunctor:
    """A two-sided module: ``at[b][a]`` is the value set, ``lact[beta][a]``
    restricts along a tgt-category morphism (contravariantly) and
    ``ract[alpha][b]`` pushes along a src-category morphism (covariantly).
    All bifunctoriality equations are checked at construction."""

    src: FinCat
    tgt: FinCat
    at: tuple[tuple[FinSetObj, ...], ...]
    lact: tuple[tuple[FinSetMap, ...], ...]
    ract: tuple[tuple[FinSetMap, ...], ...]

    def __post_init__(self) -> None:
        a_cat, b_cat = self.src, self.tgt
        na, nb = a_cat.objects.size, b_cat.objects.size
        require(len(self.at) == nb
                and all(len(row) == na for row in self.at),
                "prof-shape", "value table must be tgt-major")
        require(len(self.lact) == b_cat.morphisms.size
                and all(len(row) == na for row in self.lact),
                "prof-shape", "one left action per tgt morphism and object")
        require(len(self.ract) == a_cat.morphisms.size
                and all(len(row) == nb for row in self.ract),
                "prof-shape", "one right action per src morphism and object")
        for beta in b_cat.mors:
            b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
            for a in a_cat.objs:
                f = self.lact[beta][a]
                require(f.dom == self.at[b2][a] and f.cod == self.at[b1][a],
                        "prof-typing",
                        f"left action of {beta} at {a} mistyped")
        for alpha in a_cat.mors:
            a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
            for b in b_cat.objs:
                f = self.ract[alpha][b]
                require(f.dom == self.at[b][a1] and f.cod == self.at[b][a2],
                        "prof-typing",
                        f"right action of {alpha} at {b} mistyped")
        for b in b_cat.objs:
            for a in a_cat.objs:
                require(self.lact[b_cat.ident(b)][a] == identity(self.at[b][a]),
                        "prof-ident", f"left identity action fails at ({b}, {a})")
                require(self.ract[a_cat.ident(a)][b] == identity(self.at[b][a]),
                        "prof-ident", f"right identity action fails at ({b}, {a})")
        for b1 in b_cat.mors:
            for b2 in b_cat.out_of(b_cat.tgt(b1)):
                comp = b_cat.comp[b2][b1]
                for a in a_cat.objs:
                    require(self.lact[comp][a]
                            == compose(self.lact[b1][a], self.lact[b2][a]),
                            "prof-comp",
                            f"left action not functorial on ({b2}, {b1})")
        for a1 in a_cat.mors:
            for a2 in a_cat.out_of(a_cat.tgt(a1)):
                comp = a_cat.comp[a2][a1]
                for b in b_cat.objs:
                    require(self.ract[comp][b]
                            == compose(self.ract[a2][b], self.ract[a1][b]),
                            "prof-comp",
                            f"right action not functorial on ({a2}, {a1})")
        for beta in b_cat.mors:
            b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
            for alpha in a_cat.mors:
                a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
                require(compose(self.ract[alpha][b1], self.lact[beta][a1])
                        == compose(self.lact[beta][a2], self.ract[alpha][b2]),
                        "prof-interchange",
                        f"actions of {beta} and {alpha} do not commute")

    def value(self, b: int, a: int) -> FinSetObj:
        return self.at[b][a]


def prof_from_presheaf(a: FinCat, b: FinCat, psh: Presheaf) -> Profunctor:
    """Unpack a presheaf on B x A^op into a profunctor A -> B."""
    na, nma = a.objects.size, a.morphisms.size
    require(psh.base == product_cat(b, opposite_cat(a)), "prof-from-presheaf",
            "presheaf must live on the product with the opposite")
    at = tuple(tuple(psh.at[bo * na + ao] for ao in a.objs) for bo in b.objs)
    lact = tuple(tuple(psh.act[beta * nma + a.ident(ao)] for ao in a.objs)
                 for beta in b.mors)
    ract = tuple(tuple(psh.act[b.ident(bo) * nma + alpha] for bo in b.objs)
                 for alpha in a.mors)
    return Profunctor(a, b, at, lact, ract)


def presheaf_as_module(p: Presheaf) -> Profunctor:
    """A presheaf on C viewed as a module from the terminal category."""
    one = terminal_cat()
    at = tuple((p.at[c],) for c in p.base.objs)
    lact = tuple((p.act[gamma],) for gamma in p.base.mors)
    ract = (tuple(identity(p.at[c]) for c in p.base.objs),)
    return Profunctor(one, p.base, at, lact, ract)


def module_as_presheaf(m: Profunctor) -> Presheaf:
    require(m.src == terminal_cat(), "module-psh-src",
            "only modules out of the terminal category are presheaves")
    return Presheaf(m.tgt, tuple(m.at[b][0] for b in m.tgt.objs),
                    tuple(m.lact[beta][0] for beta in m.tgt.mors))


def graph_module(f: Functor) -> Profunctor:
    """The covariant embedding of a functor: value at (b, a) is the
    hom-set from b to the image of a."""
    a_cat, b_cat = f.dom, f.cod
    homs = tuple(tuple(b_cat.hom(b, f.omap[a]) for a in a_cat.objs)
                 for b in b_cat.objs)
    at = tuple(tuple(FinSetObj(len(h)) for h in row) for row in homs)
    lact = []
    for beta in b_cat.mors:
        b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
        lact.append(tuple(
            FinSetMap(at[b2][a], at[b1][a],
                      tuple(homs[b1][a].index(b_cat.comp[g][beta])
                            for g in homs[b2][a]))
            for a in a_cat.objs))
    ract = []
    for alpha in a_cat.mors:
        a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
        ract.append(tuple(
            FinSetMap(at[b][a1], at[b][a2],
                      tuple(homs[b][a2].index(b_cat.comp[f.mmap[alpha]][g])
                            for g in homs[b][a1]))
            for b in b_cat.objs))
    return Profunctor(a_cat, b_cat, at, tuple(lact), tuple(ract))


def cograph_module(f: Functor) -> Profunctor:
    """The contravariant embedding: a module from the codomain back to the
    domain, valued in hom-sets out of the image."""
    a_cat, b_cat = f.dom, f.cod
    homs = tuple(tuple(b_cat.hom(f.omap[a], b) for b in b_cat.objs)
                 for a in a_cat.objs)
    at = tuple(tuple(FinSetObj(len(h)) for h in row) for row in homs)
    lact = []
    for alpha in a_cat.mors:
        a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
        lact.append(tuple(
            FinSetMap(at[a2][b], at[a1][b],
                      tuple(homs[a1][b].index(b_cat.comp[g][f.mmap[alpha]])
                            for g in homs[a2][b]))
            for b in b_cat.objs))
    ract = []
    for beta in b_cat.mors:
        b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
        ract.append(tuple(
            FinSetMap(at[a][b1], at[a][b2],
                      tuple(homs[a][b2].index(b_cat.comp[beta][g])
                            for g in homs[a][b1]))
            for a in a_cat.objs))
    return Profunctor(b_cat, a_cat, at, tuple(lact), tuple(ract))


def identity_module(c: FinCat) -> Profunctor:
    return graph_module(identity_functor(c))


@dataclass(frozen=True)
class ProfMorphism:
    """A morphism of parallel profunctors: one map per value set, natural
    for both actions."""

    source: Profunctor
    target: Profunctor
    h: tuple[tuple[FinSetMap, ...], ...]

    def __post_init__(self) -> None:
        m, n = self.source, self.target
        require(m.src == n.src and m.tgt == n.tgt, "profmor-parallel",
                "profunctor morphisms need parallel boundaries")
        a_cat, b_cat = m.src, m.tgt
        for b in b_cat.objs:
            for a in a_cat.objs:
                f = self.h[b][a]
                require(f.dom == m.at[b][a] and f.cod == n.at[b][a],
                        "profmor-typing", f"component at ({b}, {a}) mistyped")
        for beta in b_cat.mors:
            b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
            for a in a_cat.objs:
                require(compose(self.h[b1][a], m.lact[beta][a])
                        == compose(n.lact[beta][a], self.h[b2][a]),
                        "profmor-natural",
                        f"left naturality fails at ({beta}, {a})")
        for alpha in a_cat.mors:
            a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
            for b in b_cat.objs:
                require(compose(self.h[b][a2], m.ract[alpha][b])
                        == compose(n.ract[alpha][b], self.h[b][a1]),
                        "profmor-natural",
                        f"right naturality fails at ({alpha}, {b})")

    @property
    def is_invertible(self) -> bool:
        return all(len(set(f.table)) == f.cod.size == f.dom.size
                   for row in self.h for f in row)


def prof_id(m: Profunctor) -> ProfMorphism:
    return ProfMorphism(m, m, tuple(
        tuple(identity(m.at[b][a]) for a in m.src.objs)
        for b in m.tgt.objs))


def prof_vcomp(b: ProfMorphism, a: ProfMorphism) -> ProfMorphism:
    require(a.target == b.source, "profmor-vcomp",
            "morphisms do not meet at a common profunctor")
    return ProfMorphism(a.source, b.target, tuple(
        tuple(compose(b.h[bo][ao], a.h[bo][ao]) for ao in a.source.src.objs)
        for bo in a.source.tgt.objs))


def prof_invert(c: ProfMorphism) -> ProfMorphism:
    require(c.is_invertible, "profmor-invert",
            "only componentwise bijections invert")
    inv = []
    for row in c.h:
        out = []
        for f in row:
            table = [0] * f.cod.size
            for i in f.dom.elements:
                table[f(i)] = i
            out.append(FinSetMap(f.cod, f.dom, tuple(table)))
        inv.append(tuple(out))
    return ProfMorphism(c.target, c.source, tuple(inv))


def _coend_cell(n: Profunctor, m: Profunctor, c: int, a: int):
    """Classes of triples (middle object, element of m, element of n) at
    one value cell, with the zigzag quotient; returns (reps, index)."""
    b_cat = m.tgt
    uf = UnionFind()
    for b in b_cat.objs:
        for x in m.at[b][a].elements:
            for y in n.at[c][b].elements:
                uf.add((b, x, y))
    for beta in b_cat.mors:
        b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
        for x2 in m.at[b2][a].elements:
            for y1 in n.at[c][b1].elements:
                uf.unite((b1, m.lact[beta][a](x2), y1),
                         (b2, x2, n.ract[beta][c](y1)))
    classes = uf.classes()
    reps = [cls[0] for cls in classes]
    index = {member: i for i, cls in enumerate(classes) for member in cls}
    return reps, index


def prof_compose(n: Profunctor, m: Profunctor) -> Profunctor:
    """Coend composite.  Actions are computed on class representatives and
    checked to be independent of the choice on every member."""
    require(m.tgt == n.src, "prof-compose-boundary",
            "middle categories do not match")
    a_cat, b_cat, c_cat = m.src, m.tgt, n.tgt
    cells = {}
    for c in c_cat.objs:
        for a in a_cat.objs:
            cells[(c, a)] = _coend_cell(n, m, c, a)
    at = tuple(tuple(FinSetObj(len(cells[(c, a)][0])) for a in a_cat.objs)
               for c in c_cat.objs)

    def push(table_of, c_from, a_from, c_to, a_to, move):
        reps, index = cells[(c_from, a_from)]
        _, index_to = cells[(c_to, a_to)]
        table = []
        for i, rep in enumerate(reps):
            images = {index_to[move(t)]
                      for t, j in index.items() if j == i}
            require(len(images) == 1, "coend-welldef",
                    "induced action depends on the representative")
            table.append(images.pop())
        return FinSetMap(at[c_from][a_from], at[c_to][a_to], tuple(table))

    lact = []
    for gamma in c_cat.mors:
        c1, c2 = c_cat.src(gamma), c_cat.tgt(gamma)
        lact.append(tuple(
            push(None, c2, a, c1, a,
                 lambda t, g=gamma: (t[0], t[1], n.lact[g][t[0]](t[2])))
            for a in a_cat.objs))
    ract = []
    for alpha in a_cat.mors:
        a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
        ract.append(tuple(
            push(None, c, a1, c, a2,
                 lambda t, al=alpha: (t[0], m.ract[al][t[0]](t[1]), t[2]))
            for c in c_cat.objs))
    return Profunctor(a_cat, c_cat, at, tuple(lact), tuple(ract))


@dataclass(frozen=True)
class CoendElement:
    """One class of the coend at a value cell: the smallest member as the
    canonical representative, and the class id."""

    rep: tuple[int, int, int]
    class_id: int


def coend_elements(n: Profunctor, m: Profunctor,
                   c: int, a: int) -> tuple[CoendElement, ...]:
    reps, _ = _coend_cell(n, m, c, a)
    return tuple(CoendElement(rep, i) for i, rep in enumerate(reps))


def prof_whisker_left(n: Profunctor, cell: ProfMorphism) -> ProfMorphism:
    """Compose a morphism of modules with n on the outside: descends to
    coend classes."""
    v, v2 = cell.source, cell.target
    require(v.tgt == n.src, "profmor-whisker",
            "whiskering requires composable boundaries")
    left, right = prof_compose(n, v), prof_compose(n, v2)
    a_cat, c_cat = v.src, n.tgt
    h = []
    for c in c_cat.objs:
        row = []
        for a in a_cat.objs:
            reps, index = _coend_cell(n, v, c, a)
            _, index2 = _coend_cell(n, v2, c, a)
            table = []
            for i, rep in enumerate(reps):
                images = {index2[(t[0], cell.h[t[0]][a](t[1]), t[2])]
                          for t, j in index.items() if j == i}
                require(len(images) == 1, "coend-welldef",
                        "whiskered map depends on the representative")
                table.append(images.pop())
            row.append(FinSetMap(left.at[c][a], right.at[c][a], tuple(table)))
        h.append(tuple(row))
    return ProfMorphism(left, right, tuple(h))


def _search_prof_maps(m: Profunctor, n: Profunctor):
    """Backtracking over value cells in tgt-major order; each candidate
    component is checked against every naturality equation whose other
    cell is already assigned."""
    a_cat, b_cat = m.src, m.tgt
    order = [(b, a) for b in b_cat.objs for a in a_cat.objs]
    pos = {cell: i for i, cell in enumerate(order)}
    checks = [[] for _ in order]
    for beta in b_cat.mors:
        b1, b2 = b_cat.src(beta), b_cat.tgt(beta)
        for a in a_cat.objs:
            later = max(pos[(b1, a)], pos[(b2, a)])
            checks[later].append(("l", beta, a))
    for alpha in a_cat.mors:
        a1, a2 = a_cat.src(alpha), a_cat.tgt(alpha)
        for b in b_cat.objs:
            later = max(pos[(b, a1)], pos[(b, a2)])
            checks[later].append(("r", alpha, b))
    assigned: dict[tuple[int, int], FinSetMap] = {}

    def ok(i):
        for kind, mor, other in checks[i]:
            if kind == "l":
                b1, b2, a = m.tgt.src(mor), m.tgt.tgt(mor), other
                h1, h2 = assigned[(b1, a)], assigned[(b2, a)]
                if compose(h1, m.lact[mor][a]) != compose(n.lact[mor][a], h2):
                    return False
            else:
                a1, a2, b = m.src.src(mor), m.src.tgt(mor), other
                h1, h2 = assigned[(b, a1)], assigned[(b, a2)]
                if compose(h2, m.ract[mor][b]) != compose(n.ract[mor][b], h1):
                    return False
        return True

    def rec(i):
        if i == len(order):
            yield tuple(tuple(assigned[(b, a)] for a in a_cat.objs)
                        for b in b_cat.objs)
            return
        b, a = order[i]
        dom, cod = m.at[b][a], n.at[b][a]
        for table in itertools.product(range(cod.size), repeat=dom.size):
            assigned[order[i]] = FinSetMap(dom, cod, table)
            if ok(i):
                yield from rec(i + 1)
        assigned.pop(order[i], None)

    yield from rec(0)


def enumerate_prof_morphisms(m: Profunctor, n: Profunctor):
    for h in _search_prof_maps(m, n):
        yield ProfMorphism(m, n, h)


def _prof_element_ops(m: Profunctor):
    """Flatten a profunctor into one element set with a partial unary
    operation per non-identity morphism of either boundary."""
    ids = {}
    cell_of = []
    ncells = 0
    for b in m.tgt.objs:
        for a in m.src.objs:
            for i in m.at[b][a].elements:
                ids[(b, a, i)] = len(cell_of)
                cell_of.append(ncells)
            ncells += 1
    ops = []
    for beta in m.tgt.mors:
        if m.tgt.is_identity(beta):
            continue
        b1, b2 = m.tgt.src(beta), m.tgt.tgt(beta)
        ops.append({ids[(b2, a, i)]: ids[(b1, a, m.lact[beta][a](i))]
                    for a in m.src.objs for i in m.at[b2][a].elements})
    for alpha in m.src.mors:
        if m.src.is_identity(alpha):
            continue
        a1, a2 = m.src.src(alpha), m.src.tgt(alpha)
        ops.append({ids[(b, a1, i)]: ids[(b, a2, m.ract[alpha][b](i))]
                    for b in m.tgt.objs for i in m.at[b][a1].elements})
    return ids, cell_of, ops


def prof_iso(m: Profunctor, n: Profunctor) -> ProfMorphism | None:
    """Search for an invertible morphism by assigning elements one at a
    time and closing under both actions, so each guess propagates through
    every equation it touches."""
    if m.src != n.src or m.tgt != n.tgt:
        return None
    for b in m.tgt.objs:
        for a in m.src.objs:
            if m.at[b][a].size != n.at[b][a].size:
                return None
    ids_m, cell_m, ops_m = _prof_element_ops(m)
    ids_n, cell_n, ops_n = _prof_element_ops(n)
    total = len(cell_m)
    ncells = m.tgt.objects.size * m.src.objects.size
    by_cell_n: list[list[int]] = [[] for _ in range(ncells)]
    for g in range(total):
        by_cell_n[cell_n[g]].append(g)
    assign = [-1] * total
    used = [False] * total

    def close(x, trail):
        stack = [x]
        while stack:
            v = stack.pop()
            w = assign[v]
            for om, on in zip(ops_m, ops_n):
                if v not in om:
                    continue
                v2, w2 = om[v], on[w]
                if assign[v2] == -1:
                    if used[w2]:
                        return False
                    assign[v2] = w2
                    used[w2] = True
                    trail.append(v2)
                    stack.append(v2)
                elif assign[v2] != w2:
                    return False
        return True

    def rec(start):
        x = start
        while x < total and assign[x] != -1:
            x += 1
        if x == total:
            return True
        for y in by_cell_n[cell_m[x]]:
            if used[y]:
                continue
            trail = [x]
            assign[x] = y
            used[y] = True
            if close(x, trail) and rec(x + 1):
                return True
            for v in trail:
                used[assign[v]] = False
                assign[v] = -1
        return False

    if not rec(0):
        return None
    h = []
    for b in m.tgt.objs:
        row = []
        for a in m.src.objs:
            local_n = {ids_n[(b, a, i)]: i for i in n.at[b][a].elements}
            row.append(FinSetMap(m.at[b][a], n.at[b][a],
                                 tuple(local_n[assign[ids_m[(b, a, i)]]]
                                       for i in m.at[b][a].elements)))
        h.append(tuple(row))
    return ProfMorphism(m, n, tuple(h))


def _natural_families(n: Profunctor, u: Profunctor, s: int, k: int):
    """All families of maps n(y, s) -> u(y, k) natural in y, in
    lexicographic order of their tables."""
    y_cat = n.tgt
    yobjs = list(y_cat.objs)
    mors_at = [[] for _ in yobjs]
    for psi in y_cat.mors:
        if y_cat.is_identity(psi):
            continue
        mors_at[max(y_cat.src(psi), y_cat.tgt(psi))].append(psi)
    acc: list[tuple[int, ...]] = []

    def rec(i):
        if i == len(yobjs):
            yield tuple(acc)
            return
        y = yobjs[i]
        dom = n.at[y][s].size
        cod = u.at[y][k].size
        for table in itertools.product(range(cod), repeat=dom):
            acc.append(table)
            good = True
            for psi in mors_at[y]:
                y1, y2 = y_cat.src(psi), y_cat.tgt(psi)
                t1, t2 = acc[y1], acc[y2]
                for v in range(n.at[y2][s].size):
                    if t1[n.lact[psi][s](v)] != u.lact[psi][k](t2[v]):
                        good = False
                        break
                if not good:
                    break
            if good:
                yield from rec(i + 1)
            acc.pop()

    yield from rec(0)


@dataclass(frozen=True)
class RifModData:
    """A right lifting together with its concrete elements: families[s][k]
    lists the natural families the value set at (s, k) enumerates."""

    prof: Profunctor
    families: tuple[tuple[tuple[tuple[tuple[int, ...], ...], ...], ...], ...]


def rif_mod_data(n: Profunctor, u: Profunctor) -> RifModData:
    require(n.tgt == u.tgt, "rif-mod-boundary",
            "lifter and target must share their codomain")
    s_cat, k_cat, y_cat = n.src, u.src, n.tgt
    fams = tuple(tuple(tuple(_natural_families(n, u, s, k))
                       for k in k_cat.objs)
                 for s in s_cat.objs)
    index = tuple(tuple({f: i for i, f in enumerate(fams[s][k])}
                        for k in k_cat.objs)
                  for s in s_cat.objs)
    at = tuple(tuple(FinSetObj(len(fams[s][k])) for k in k_cat.objs)
               for s in s_cat.objs)
    lact = []
    for sigma in s_cat.mors:
        s1, s2 = s_cat.src(sigma), s_cat.tgt(sigma)
        row = []
        for k in k_cat.objs:
            table = []
            for fam in fams[s2][k]:
                moved = tuple(
                    tuple(fam[y][n.ract[sigma][y](v)]
                          for v in range(n.at[y][s1].size))
                    for y in y_cat.objs)
                table.append(index[s1][k][moved])
            row.append(FinSetMap(at[s2][k], at[s1][k], tuple(table)))
        lact.append(tuple(row))
    ract = []
    for kappa in k_cat.mors:
        k1, k2 = k_cat.src(kappa), k_cat.tgt(kappa)
        row = []
        for s in s_cat.objs:
            table = []
            for fam in fams[s][k1]:
                moved = tuple(
                    tuple(u.ract[kappa][y](fam[y][v])
                          for v in range(n.at[y][s].size))
                    for y in y_cat.objs)
                table.append(index[s][k2][moved])
            row.append(FinSetMap(at[s][k1], at[s][k2], tuple(table)))
        ract.append(tuple(row))
    return RifModData(Profunctor(k_cat, s_cat, at, tuple(lact), tuple(ract)),
                      fams)


def rif_mod(n: Profunctor, u: Profunctor) -> Profunctor:
    return rif_mod_data(n, u).prof


def rif_mod_counit(n: Profunctor, u: Profunctor,
                   data: RifModData | None = None) -> ProfMorphism:
    """Evaluation morphism from the composite of the lifter with the
    lifting down to the target."""
    if data is None:
        data = rif_mod_data(n, u)
    comp = prof_compose(n, data.prof)
    k_cat, y_cat = u.src, u.tgt
    h = []
    for y in y_cat.objs:
        row = []
        for k in k_cat.objs:
            reps, index = _coend_cell(n, data.prof, y, k)
            values = []
            for i, rep in enumerate(reps):
                images = {data.families[t[0]][k][t[1]][y][t[2]]
                          for t, j in index.items() if j == i}
                require(len(images) == 1, "coend-welldef",
                        "counit depends on the representative")
                values.append(images.pop())
            row.append(FinSetMap(comp.at[y][k], u.at[y][k], tuple(values)))
        h.append(tuple(row))
    return ProfMorphism(comp, u, tuple(h))


@dataclass(frozen=True)
class ModTabulation:
    """The category of elements of a presheaf with projection and the
    witnessing isomorphism between the fibers of the projection and the
    presheaf itself."""

    el: ElementsCat
    p: Functor
    rho: tuple[FinSetMap, ...]


def tabulate_mod(u: Presheaf) -> ModTabulation:
    el = elements(u)
    rho = presheaf_iso(fibers(el.proj), u)
    require(rho is not None, "tabulate-comma",
            "projection fibers must realize the presheaf")
    return ModTabulation(el, el.proj, rho)


def fiber_presheaf(p: Functor) -> Presheaf:
    """The presheaf a discrete fibration classifies, fiber by fiber."""
    return fibers(p)


@dataclass(frozen=True)
class ModPolynomial:
    """A polynomial between finite categories: profunctor lifter leg out
    of the apex, discrete fibration neat leg."""

    X: FinCat
    Y: FinCat
    S: FinCat
    m: Profunctor
    p: Functor

    def __post_init__(self) -> None:
        require(self.m.src == self.S and self.m.tgt == self.X,
                "modpoly-typing", "lifter must be a module S -> X")
        require(self.p.dom == self.S and self.p.cod == self.Y,
                "modpoly-typing", "neat leg must be a functor S -> Y")
        require(is_discrete_fibration(self.p), "modpoly-neat",
                "neat leg must be a discrete fibration")


def identity_polymod(x: FinCat) -> ModPolynomial:
    return ModPolynomial(x, x, x, identity_module(x), identity_functor(x))


def fiberwise_module(p: Functor, v: Profunctor) -> Profunctor:
    """Sum of v's values over the fibers of a discrete fibration, with the
    left action through unique lifts.  This is the closed form that the
    coend along the graph module collapses to."""
    require(is_discrete_fibration(p), "fiberwise-dfib",
            "fiberwise sums need a discrete fibration")
    require(v.tgt == p.dom, "fiberwise-boundary",
            "module must land in the domain of the fibration")
    s_cat, y_cat, k_cat = p.dom, p.cod, v.src
    fiber_objs = tuple(tuple(s for s in s_cat.objs if p.omap[s] == y)
                       for y in y_cat.objs)
    elems = {}
    for y in y_cat.objs:
        for k in k_cat.objs:
            elems[(y, k)] = [(s, i) for s in fiber_objs[y]
                             for i in v.at[s][k].elements]
    at = tuple(tuple(FinSetObj(len(elems[(y, k)])) for k in k_cat.objs)
               for y in y_cat.objs)

    def lift(psi, s2):
        for sigma in s_cat.mors:
            if p.mmap[sigma] == psi and s_cat.tgt(sigma) == s2:
                return sigma
        raise AssertionError("discrete fibration without a lift")

    lact = []
    for psi in y_cat.mors:
        y1, y2 = y_cat.src(psi), y_cat.tgt(psi)
        row = []
        for k in k_cat.objs:
            table = []
            for s2, i in elems[(y2, k)]:
                sigma = lift(psi, s2)
                s1 = s_cat.src(sigma)
                table.append(elems[(y1, k)].index(
                    (s1, v.lact[sigma][k](i))))
            row.append(FinSetMap(at[y2][k], at[y1][k], tuple(table)))
        lact.append(tuple(row))
    ract = []
    for kappa in k_cat.mors:
        k1, k2 = k_cat.src(kappa), k_cat.tgt(kappa)
        row = []
        for y in y_cat.objs:
            table = [elems[(y, k2)].index((s, v.ract[kappa][s](i)))
                     for s, i in elems[(y, k1)]]
            row.append(FinSetMap(at[y][k1], at[y][k2], tuple(table)))
        ract.append(tuple(row))
    return Profunctor(k_cat, y_cat, at, tuple(lact), tuple(ract))


@dataclass(frozen=True)
class DfibCollapse:
    """The fiberwise sum together with the canonical comparison from the
    coend route, verified invertible."""

    fiberwise: Profunctor
    compare: ProfMorphism


def dfib_collapse(p: Functor, v: Profunctor) -> DfibCollapse:
    fw = fiberwise_module(p, v)
    composite = prof_compose(graph_module(p), v)
    s_cat, y_cat, k_cat = p.dom, p.cod, v.src
    fiber_objs = tuple(tuple(s for s in s_cat.objs if p.omap[s] == y)
                       for y in y_cat.objs)
    elems = {(y, k): [(s, i) for s in fiber_objs[y]
                      for i in v.at[s][k].elements]
             for y in y_cat.objs for k in k_cat.objs}
    gm = graph_module(p)
    h = []
    for y in y_cat.objs:
        row = []
        for k in k_cat.objs:
            reps, index = _coend_cell(gm, v, y, k)
            table = []
            for i, rep in enumerate(reps):
                images = set()
                for t, j in index.items():
                    if j != i:
                        continue
                    s, x, gpos = t
                    gamma = y_cat.hom(y, p.omap[s])[gpos]
                    sigma = next(sg for sg in s_cat.mors
                                 if p.mmap[sg] == gamma
                                 and s_cat.tgt(sg) == s)
                    images.add(elems[(y, k)].index(
                        (s_cat.src(sigma), v.lact[sigma][k](x))))
                require(len(images) == 1, "coend-welldef",
                        "collapse depends on the representative")
                table.append(images.pop())
            row.append(FinSetMap(composite.at[y][k], fw.at[y][k],
                                 tuple(table)))
        h.append(tuple(row))
    compare = ProfMorphism(composite, fw, tuple(h))
    require(compare.is_invertible, "dfib-collapse-iso",
            "coend route must collapse bijectively onto the fiberwise sum")
    return DfibCollapse(fw, compare)


@dataclass(frozen=True)
class PolymodParts:
    """Composite polynomial with the intermediate construction data."""

    poly: ModPolynomial
    z: Presheaf
    rif: RifModData
    tab: ModTabulation
    n: Profunctor
    r: Functor


def polymod_parts(q: ModPolynomial, p: ModPolynomial) -> PolymodParts:
    """Composite of polynomials: tabulate the lifting of the fiber
    presheaf through q's lifter, then connect with the splitting-family
    module.  The square witness with the two graph modules is verified on
    every run."""
    require(p.Y == q.X, "polymod-compose-boundary",
            "middle categories do not match")
    c_cat, t_cat, z_cat = q.X, q.S, p.S
    z = fiber_presheaf(p.p)
    rd = rif_mod_data(q.m, presheaf_as_module(z))
    tab = tabulate_mod(module_as_presheaf(rd.prof))
    y_cat = tab.el.cat
    fiber_pos = {}
    for c in c_cat.objs:
        for i, zo in enumerate(s for s in z_cat.objs if p.p.omap[s] == c):
            fiber_pos[zo] = i
    cell_elems = {}
    for zo in z_cat.objs:
        c = p.p.omap[zo]
        for yo, (t, xi_i) in enumerate(tab.el.objects_data):
            xi = rd.families[t][0]
            cell_elems[(zo, yo)] = [
                mu for mu in q.m.at[c][t].elements
                if xi[xi_i][c][mu] == fiber_pos[zo]]
    at = tuple(tuple(FinSetObj(len(cell_elems[(zo, yo)]))
                     for yo in range(y_cat.objects.size))
               for zo in z_cat.objs)
    lact = []
    for zeta in z_cat.mors:
        z1, z2 = z_cat.src(zeta), z_cat.tgt(zeta)
        gamma = p.p.mmap[zeta]
        row = []
        for yo, (t, _) in enumerate(tab.el.objects_data):
            table = [cell_elems[(z1, yo)].index(q.m.lact[gamma][t](mu))
                     for mu in cell_elems[(z2, yo)]]
            row.append(FinSetMap(at[z2][yo], at[z1][yo], tuple(table)))
        lact.append(tuple(row))
    ract = []
    for ym, (phi, _) in enumerate(tab.el.morphisms_data):
        yo1 = tab.el.cat.src(ym)
        yo2 = tab.el.cat.tgt(ym)
        row = []
        for zo in z_cat.objs:
            c = p.p.omap[zo]
            table = [cell_elems[(zo, yo2)].index(q.m.ract[phi][c](mu))
                     for mu in cell_elems[(zo, yo1)]]
            row.append(FinSetMap(at[zo][yo1], at[zo][yo2], tuple(table)))
        ract.append(tuple(row))
    n = Profunctor(y_cat, z_cat, at, tuple(lact), tuple(ract))
    r = tab.p
    require(prof_iso(prof_compose(graph_module(p.p), n),
                     prof_compose(q.m, graph_module(r))) is not None,
            "polymod-square",
            "induced module must fill the square with the graph modules")
    poly = ModPolynomial(p.X, q.Y, y_cat, prof_compose(p.m, n),
                         compose_functors(q.p, r))
    return PolymodParts(poly, z, rd, tab, n, r)


def compose_polymod(q: ModPolynomial, p: ModPolynomial) -> ModPolynomial:
    return polymod_parts(q, p).poly


def hK_mod(k: FinCat, p: ModPolynomial, u: Profunctor) -> Profunctor:
    """Hom-action on modules out of K, by the fiberwise sum of natural
    family sets over the neat fibration."""
    require(u.src == k and u.tgt == p.X, "hK-mod-boundary",
            "u must be a module K -> X")
    return fiberwise_module(p.p, rif_mod(p.m, u))


def hK_mod_via_lifting(k: FinCat, p: ModPolynomial,
                       u: Profunctor) -> Profunctor:
    """The same action computed through the coend with the graph module
    of the neat leg; kept separate as an independent route."""
    require(u.src == k and u.tgt == p.X, "hK-mod-boundary",
            "u must be a module K -> X")
    return prof_compose(graph_module(p.p), rif_mod(p.m, u))


def cotensor2_mod(a: FinCat) -> tuple[FinCat, Profunctor]:
    """The cotensor of a category with the arrow: the product of the
    opposite arrow category with a, together with the graph module of the
    second projection."""
    op2 = opposite_cat(ordinal2())
    cot = product_cat(op2, a)
    na, nma = a.objects.size, a.morphisms.size
    pr2 = Functor(cot, a,
                  tuple(o % na for o in cot.objs),
                  tuple(mi % nma for mi in cot.mors))
    return cot, graph_module(pr2)


def decompose_cotensor_module(m: Profunctor,
                              a: FinCat) -> tuple[Profunctor, Profunctor,
                                                  ProfMorphism]:
    """Split a module into the cotensor into its two ends and the
    connecting morphism carried by the arrow direction."""
    cot, _ = cotensor2_mod(a)
    require(m.tgt == cot, "cotensor-decompose",
            "module must land in the cotensor")
    na, nma = a.objects.size, a.morphisms.size
    k_cat = m.src

    def end(i):
        at = tuple(tuple(m.at[i * na + ao][k] for k in k_cat.objs)
                   for ao in a.objs)
        lact = tuple(tuple(m.lact[i * nma + alpha][k] for k in k_cat.objs)
                     for alpha in a.mors)
        ract = tuple(tuple(m.ract[kappa][i * na + ao] for ao in a.objs)
                     for kappa in k_cat.mors)
        return Profunctor(k_cat, a, at, lact, ract)

    m0, m1 = end(0), end(1)
    theta = ProfMorphism(m0, m1, tuple(
        tuple(m.lact[2 * nma + a.ident(ao)][k] for k in k_cat.objs)
        for ao in a.objs))
    return m0, m1, theta


def build_cotensor_module(m0: Profunctor, m1: Profunctor,
                          theta: ProfMorphism) -> Profunctor:
    """Inverse of the decomposition: reassemble the module into the
    cotensor from an arrow of modules."""
    require(theta.source == m0 and theta.target == m1, "cotensor-build",
            "connecting morphism must run from the first end to the second")
    a, k_cat = m0.tgt, m0.src
    cot, _ = cotensor2_mod(a)
    na, nma = a.objects.size, a.morphisms.size
    ends = (m0, m1)
    at = tuple(tuple(ends[o // na].at[o % na][k] for k in k_cat.objs)
               for o in cot.objs)
    lact = []
    for mi in cot.mors:
        j, alpha = mi // nma, mi % nma
        if j < 2:
            lact.append(tuple(ends[j].lact[alpha][k] for k in k_cat.objs))
        else:
            ta = a.tgt(alpha)
            lact.append(tuple(
                compose(m1.lact[alpha][k], theta.h[ta][k])
                for k in k_cat.objs))
    ract = tuple(tuple(ends[o // na].ract[kappa][o % na] for o in cot.objs)
                 for kappa in k_cat.mors)
    return Profunctor(k_cat, cot, at, tuple(lact), ract)


def psh_on_dfib(g: Functor, r: Functor) -> Functor:
    """Push a discrete fibration forward along a functor by taking the
    discrete-fibration part of the comprehensive factorization of the
    composite."""
    require(is_discrete_fibration(r), "psh-dfib-input",
            "only discrete fibrations are pushed forward")
    require(r.cod == g.dom, "psh-dfib-boundary",
            "fibration must land in the domain of the functor")
    return comprehensive_factorization(compose_functors(g, r))[1]
