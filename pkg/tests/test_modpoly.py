"""Profunctor calculus and polynomial composition between categories."""

import itertools
import random

import pytest

from polyspan.errors import InvariantViolation
from polyspan.fincat import (
    FinCat,
    Functor,
    comma,
    compose_functors,
    constant_functor,
    constant_presheaf,
    discrete_cat,
    elements,
    fibers,
    identity_functor,
    is_discrete_fibration,
    monoid_cat,
    opposite_cat,
    ordinal2,
    pi0_classes,
    presheaf_iso,
    product_cat,
    representable,
    terminal_cat,
)
from polyspan.finset import FinSetMap, FinSetObj, identity
from polyspan.gen import (
    preorder_cat,
    rand_composable_modpolys,
    rand_dfib,
    rand_fincat,
    rand_functor,
    rand_hk_case,
    rand_modpoly,
    rand_poly,
    rand_presheaf,
    rand_profunctor,
)
from polyspan.modpoly import (
    CoendElement,
    ModPolynomial,
    Profunctor,
    ProfMorphism,
    build_cotensor_module,
    coend_elements,
    cograph_module,
    compose_polymod,
    cotensor2_mod,
    decompose_cotensor_module,
    dfib_collapse,
    enumerate_prof_morphisms,
    fiber_presheaf,
    fiberwise_module,
    graph_module,
    hK_mod,
    hK_mod_via_lifting,
    identity_module,
    identity_polymod,
    module_as_presheaf,
    polymod_parts,
    presheaf_as_module,
    prof_compose,
    prof_from_presheaf,
    prof_id,
    prof_invert,
    prof_iso,
    prof_vcomp,
    prof_whisker_left,
    psh_on_dfib,
    rif_mod,
    rif_mod_counit,
    rif_mod_data,
    tabulate_mod,
)
from polyspan.polyset import Polynomial, compose_poly, are_isomorphic_poly, hK_span
from polyspan.spans import Span


def max_cell(m):
    return max((m.at[b][a].size for b in m.tgt.objs for a in m.src.objs),
               default=0)


def cell_sizes(m):
    return tuple(tuple(m.at[b][a].size for a in m.src.objs)
                 for b in m.tgt.objs)


def discrete_prof(na, nb, sizes):
    """A profunctor between discrete categories from a size matrix
    sizes[b][a]; all actions are identities."""
    a_cat, b_cat = discrete_cat(na), discrete_cat(nb)
    at = tuple(tuple(FinSetObj(sizes[b][a]) for a in range(na))
               for b in range(nb))
    lact = tuple(tuple(identity(at[b][a]) for a in range(na))
                 for b in range(nb))
    ract = tuple(tuple(identity(at[b][a]) for b in range(nb))
                 for a in range(na))
    return Profunctor(a_cat, b_cat, at, lact, ract)


def embed_poly(p: Polynomial) -> ModPolynomial:
    """A set-level polynomial as a polynomial over discrete categories."""
    x, s = discrete_cat(p.X.size), discrete_cat(p.S.size)
    y = discrete_cat(p.Y.size)
    cells = [[sum(1 for e in p.E.elements
                  if p.m1(e) == xo and p.m2(e) == so)
              for so in range(p.S.size)] for xo in range(p.X.size)]
    m = discrete_prof(p.S.size, p.X.size, cells)
    neat = Functor(s, y, tuple(p.p.table), tuple(p.p.table))
    return ModPolynomial(x, y, s, m, neat)


def decode_poly(mp: ModPolynomial) -> Polynomial:
    """Back from discrete categories to sets; block order is S-major so
    equal inputs decode equally."""
    xs, ss = mp.X.objects.size, mp.S.objects.size
    ys = mp.Y.objects.size
    m1, m2 = [], []
    for so in range(ss):
        for xo in range(xs):
            n = mp.m.at[xo][so].size
            m1.extend([xo] * n)
            m2.extend([so] * n)
    e = FinSetObj(len(m1))
    return Polynomial(FinSetObj(xs), e, FinSetObj(ss), FinSetObj(ys),
                      FinSetMap(e, FinSetObj(xs), tuple(m1)),
                      FinSetMap(e, FinSetObj(ss), tuple(m2)),
                      FinSetMap(FinSetObj(ss), FinSetObj(ys),
                                tuple(mp.p.omap)))


def span_as_prof(s: Span) -> Profunctor:
    """A span of sets as a profunctor between discrete categories."""
    sizes = [[sum(1 for v in s.apex.elements
                  if s.left_leg(v) == ko and s.right_leg(v) == xo)
              for ko in range(s.left_foot.size)]
             for xo in range(s.right_foot.size)]
    return discrete_prof(s.left_foot.size, s.right_foot.size, sizes)


def naive_nat_count(n, u, s, k):
    """Count natural families by filtering the full product space; an
    independent route around the incremental backtracking."""
    y_cat = n.tgt
    spaces = [list(itertools.product(range(u.at[y][k].size),
                                     repeat=n.at[y][s].size))
              for y in y_cat.objs]
    count = 0
    for fam in itertools.product(*spaces):
        if all(fam[y_cat.src(psi)][n.lact[psi][s](v)]
               == u.lact[psi][k](fam[y_cat.tgt(psi)][v])
               for psi in y_cat.mors
               for v in range(n.at[y_cat.tgt(psi)][s].size)):
            count += 1
    return count


def small_profunctor(rng, src, tgt, cap=2):
    return rand_profunctor(rng, src, tgt, parts_max=1, max_cell=cap)


def morphism_space(m, n):
    """Size of the full function-space search between parallel modules."""
    total = 1
    for b in m.tgt.objs:
        for a in m.src.objs:
            total *= max(1, n.at[b][a].size) ** m.at[b][a].size
            if total > 10 ** 9:
                return total
    return total


class TestProfunctor:
    def test_identity_module_on_arrow(self):
        m = identity_module(ordinal2())
        assert cell_sizes(m) == ((1, 1), (0, 1))

    def test_lact_functoriality_enforced(self):
        z3 = monoid_cat(((0, 1, 2), (1, 2, 0), (2, 0, 1)), 0)
        cell = FinSetObj(3)
        rot1 = FinSetMap(cell, cell, (1, 2, 0))
        ident = identity(cell)
        with pytest.raises(InvariantViolation, match="prof-comp"):
            Profunctor(terminal_cat(), z3, ((cell,),),
                       ((ident,), (rot1,), (rot1,)),
                       ((ident,),))

    def test_interchange_enforced(self):
        z2 = monoid_cat(((0, 1), (1, 0)), 0)
        cell = FinSetObj(3)
        ident = identity(cell)
        lperm = FinSetMap(cell, cell, (1, 0, 2))
        rperm = FinSetMap(cell, cell, (0, 2, 1))
        with pytest.raises(InvariantViolation, match="prof-interchange"):
            Profunctor(z2, z2, ((cell,),),
                       ((ident,), (lperm,)),
                       ((ident,), (rperm,)))

    def test_cell_typing_enforced(self):
        o2 = ordinal2()
        good = identity_module(o2)
        bad_at = tuple(tuple(FinSetObj(s.size + 1) for s in row)
                       for row in good.at)
        with pytest.raises(InvariantViolation):
            Profunctor(o2, o2, bad_at, good.lact, good.ract)

    def test_graph_of_identity_is_hom(self):
        o2 = ordinal2()
        g = graph_module(identity_functor(o2))
        assert cell_sizes(g) == ((1, 1), (0, 1))
        # the arrow acts by precomposition on the upper hom-set
        assert g.lact[2][1].table == (0,)

    def test_cograph_transposes_graph(self):
        o2 = ordinal2()
        top = constant_functor(terminal_cat(), o2, 1)
        g = graph_module(top)
        cg = cograph_module(top)
        # maps into the image of 1 versus maps out of it
        assert cell_sizes(g) == ((1,), (1,))
        assert cell_sizes(cg) == ((0, 1),)

    def test_presheaf_module_roundtrip(self):
        rng = random.Random(40)
        for _ in range(10):
            c = rand_fincat(rng)
            p = rand_presheaf(rng, c)
            back = module_as_presheaf(presheaf_as_module(p))
            assert back == p

    def test_prof_from_presheaf_values(self):
        o2 = ordinal2()
        base = product_cat(o2, opposite_cat(o2))
        psh = representable(base, 3)
        m = prof_from_presheaf(o2, o2, psh)
        for b in o2.objs:
            for a in o2.objs:
                assert m.at[b][a].size == psh.at[b * 2 + a].size


class TestProfCompose:
    def test_discrete_is_matrix_product(self):
        rng = random.Random(41)
        for _ in range(15):
            na, nb, nc = (rng.randint(1, 3) for _ in range(3))
            m = discrete_prof(na, nb, [[rng.randint(0, 3) for _ in range(na)]
                                       for _ in range(nb)])
            n = discrete_prof(nb, nc, [[rng.randint(0, 3) for _ in range(nb)]
                                       for _ in range(nc)])
            comp = prof_compose(n, m)
            for c in range(nc):
                for a in range(na):
                    want = sum(m.at[b][a].size * n.at[c][b].size
                               for b in range(nb))
                    assert comp.at[c][a].size == want

    def test_arrow_glues_summands(self):
        """A connecting morphism in the middle category merges the two
        middle-object summands into one coend class."""
        o2 = ordinal2()
        one = FinSetObj(1)
        m = Profunctor(terminal_cat(), o2,
                       ((one,), (one,)),
                       ((identity(one),), (identity(one),),
                        (FinSetMap(one, one, (0,)),)),
                       ((identity(one), identity(one)),))
        n = Profunctor(o2, terminal_cat(),
                       ((one, one),),
                       ((identity(one), identity(one)),),
                       ((identity(one),), (identity(one),),
                        (FinSetMap(one, one, (0,)),)))
        comp = prof_compose(n, m)
        assert comp.at[0][0].size == 1
        els = coend_elements(n, m, 0, 0)
        assert els == (CoendElement((0, 0, 0), 0),)

    def test_unit_laws(self):
        rng = random.Random(42)
        for _ in range(12):
            a, b = rand_fincat(rng), rand_fincat(rng)
            m = small_profunctor(rng, a, b)
            left = prof_compose(identity_module(b), m)
            right = prof_compose(m, identity_module(a))
            assert prof_iso(left, m) is not None
            assert prof_iso(right, m) is not None

    def test_associativity_up_to_iso(self):
        rng = random.Random(43)
        done = 0
        while done < 10:
            a, b = rand_fincat(rng), rand_fincat(rng)
            c, d = rand_fincat(rng), rand_fincat(rng)
            m = small_profunctor(rng, a, b)
            n = small_profunctor(rng, b, c)
            o = small_profunctor(rng, c, d)
            lhs = prof_compose(prof_compose(o, n), m)
            rhs = prof_compose(o, prof_compose(n, m))
            assert prof_iso(lhs, rhs) is not None
            done += 1

    def test_graph_is_functorial(self):
        rng = random.Random(44)
        done = 0
        while done < 10:
            a, b, c = rand_fincat(rng), rand_fincat(rng), rand_fincat(rng)
            f = rand_functor(rng, a, b)
            g = rand_functor(rng, b, c)
            if f is None or g is None:
                continue
            lhs = graph_module(compose_functors(g, f))
            rhs = prof_compose(graph_module(g), graph_module(f))
            assert prof_iso(lhs, rhs) is not None
            lhs2 = cograph_module(compose_functors(g, f))
            rhs2 = prof_compose(cograph_module(f), cograph_module(g))
            assert prof_iso(lhs2, rhs2) is not None
            done += 1

    def test_whisker_left_descends(self):
        o2 = ordinal2()
        n = identity_module(o2)
        u = presheaf_as_module(representable(o2, 1))
        cell = prof_id(u)
        w = prof_whisker_left(n, cell)
        assert w.source == prof_compose(n, u)
        assert w.is_invertible


class TestRifMod:
    def test_identity_lifter_recovers_target(self):
        """Lifting through the identity module is the target itself."""
        rng = random.Random(45)
        for _ in range(8):
            y = rand_fincat(rng)
            k = rand_fincat(rng, max_objs=2)
            u = small_profunctor(rng, k, y)
            r = rif_mod(identity_module(y), u)
            assert prof_iso(r, u) is not None

    def test_discrete_section_counts(self):
        rng = random.Random(46)
        for _ in range(10):
            ns, ny, nk = (rng.randint(1, 3) for _ in range(3))
            n = discrete_prof(ns, ny, [[rng.randint(0, 2) for _ in range(ns)]
                                       for _ in range(ny)])
            u = discrete_prof(nk, ny, [[rng.randint(0, 2) for _ in range(nk)]
                                       for _ in range(ny)])
            r = rif_mod(n, u)
            for s in range(ns):
                for k in range(nk):
                    want = 1
                    for y in range(ny):
                        want *= u.at[y][k].size ** n.at[y][s].size
                    assert r.at[s][k].size == want

    def test_empty_lifter_gives_singletons(self):
        o2 = ordinal2()
        zero = FinSetObj(0)
        zmap = FinSetMap(zero, zero, ())
        n = Profunctor(terminal_cat(), o2,
                       ((zero,), (zero,)),
                       ((zmap,), (zmap,), (zmap,)),
                       ((zmap, zmap),))
        u = presheaf_as_module(representable(o2, 1))
        r = rif_mod(n, u)
        assert cell_sizes(r) == ((1,),)

    def test_counit_and_transpose_bijection(self):
        """Morphisms v => rif(n, u) correspond to morphisms n∘v => u by
        whiskering and the evaluation counit."""
        rng = random.Random(47)
        done = 0
        while done < 4:
            y = rand_fincat(rng, max_objs=2, max_mors=6)
            k = terminal_cat()
            s = rand_fincat(rng, max_objs=2, max_mors=6)
            n = small_profunctor(rng, s, y, cap=1)
            u = small_profunctor(rng, k, y, cap=1)
            v = small_profunctor(rng, k, s, cap=1)
            data = rif_mod_data(n, u)
            if max_cell(data.prof) > 3:
                continue
            if morphism_space(v, data.prof) > 5000:
                continue
            counit = rif_mod_counit(n, u, data)
            into_rif = list(enumerate_prof_morphisms(v, data.prof))
            nv = prof_compose(n, v)
            into_u = list(enumerate_prof_morphisms(nv, u))
            images = set()
            for psi in into_rif:
                t = prof_vcomp(counit, prof_whisker_left(n, psi))
                images.add(t.h)
            assert len(images) == len(into_rif)
            assert images == {mo.h for mo in into_u}
            done += 1


class TestTabulate:
    def test_representable_tabulates_to_slice(self):
        o2 = ordinal2()
        tab = tabulate_mod(representable(o2, 1))
        # two points over the base: the arrow and the upper identity
        assert tab.el.cat.objects.size == 2
        assert is_discrete_fibration(tab.p)

    def test_constant_singleton_recovers_base(self):
        c = preorder_cat(3, [(0, 1), (1, 2)])
        tab = tabulate_mod(constant_presheaf(c, 1))
        assert tab.el.cat.objects.size == c.objects.size
        assert tab.el.cat.morphisms.size == c.morphisms.size

    def test_empty_presheaf(self):
        o2 = ordinal2()
        tab = tabulate_mod(constant_presheaf(o2, 0))
        assert tab.el.cat.objects.size == 0

    def test_witness_matches_fibers(self):
        rng = random.Random(48)
        for _ in range(10):
            c = rand_fincat(rng)
            u = rand_presheaf(rng, c)
            tab = tabulate_mod(u)
            assert presheaf_iso(fibers(tab.p), u) is not None


class TestFiberwise:
    def test_collapse_agrees_with_coend(self):
        rng = random.Random(49)
        done = 0
        while done < 10:
            y = rand_fincat(rng)
            k = rand_fincat(rng, max_objs=2)
            p = rand_dfib(rng, y)
            v = small_profunctor(rng, k, p.dom)
            dc = dfib_collapse(p, v)
            assert dc.compare.is_invertible
            other = prof_compose(graph_module(p), v)
            assert prof_iso(other, dc.fiberwise) is not None
            done += 1

    def test_fiberwise_sizes_are_fiber_sums(self):
        rng = random.Random(50)
        y = rand_fincat(rng)
        p = rand_dfib(rng, y)
        k = terminal_cat()
        v = small_profunctor(rng, k, p.dom)
        fw = fiberwise_module(p, v)
        for yo in y.objs:
            want = sum(v.at[s][0].size for s in p.dom.objs
                       if p.omap[s] == yo)
            assert fw.at[yo][0].size == want

    def test_fiber_presheaf_delegates(self):
        rng = random.Random(64)
        p = rand_dfib(rng, rand_fincat(rng))
        assert fiber_presheaf(p) == fibers(p)


class TestComposePolymod:
    def test_identity_composite_is_identity_shaped(self):
        o2 = ordinal2()
        parts = polymod_parts(identity_polymod(o2), identity_polymod(o2))
        assert prof_iso(parts.poly.m, identity_module(o2)) is not None
        assert parts.poly.p.omap == (0, 1)

    def test_boundary_mismatch_rejected(self):
        with pytest.raises(InvariantViolation, match="polymod-compose"):
            compose_polymod(identity_polymod(ordinal2()),
                            identity_polymod(terminal_cat()))

    def test_identity_absorbs_on_either_side(self):
        """Composing with the identity polynomial changes nothing that the
        hom-action can see."""
        rng = random.Random(51)
        one = terminal_cat()
        done = 0
        while done < 6:
            case = rand_hk_case(rng)
            if case is None:
                continue
            k, p, q, u = case
            left = compose_polymod(identity_polymod(p.Y), p)
            assert left.X == p.X and left.Y == p.Y
            a = hK_mod(k, left, u)
            b = hK_mod(k, p, u)
            assert prof_iso(a, b) is not None
            right = compose_polymod(p, identity_polymod(p.X))
            c = hK_mod(k, right, u)
            assert prof_iso(c, b) is not None
            done += 1

    def test_square_witness_recomputable(self):
        rng = random.Random(52)
        pair = None
        while pair is None:
            pair = rand_composable_modpolys(rng)
        p, q = pair
        parts = polymod_parts(q, p)
        lhs = prof_compose(graph_module(p.p), parts.n)
        rhs = prof_compose(q.m, graph_module(parts.r))
        assert prof_iso(lhs, rhs) is not None

    def test_discrete_reduction_matches_set_composition(self):
        rng = random.Random(53)
        for _ in range(10):
            x = FinSetObj(rng.randint(1, 3))
            y = FinSetObj(rng.randint(1, 3))
            z = FinSetObj(rng.randint(1, 3))
            p = rand_poly(rng, x, y, smax=3, emax=2)
            q = rand_poly(rng, y, z, smax=3, emax=2)
            direct = compose_poly(q, p)
            lifted = compose_polymod(embed_poly(q), embed_poly(p))
            assert are_isomorphic_poly(decode_poly(lifted), direct)


class TestHKMod:
    def test_identity_polynomial_acts_trivially(self):
        rng = random.Random(54)
        for _ in range(8):
            x = rand_fincat(rng)
            k = rand_fincat(rng, max_objs=2)
            u = small_profunctor(rng, k, x)
            out = hK_mod(k, identity_polymod(x), u)
            assert prof_iso(out, u) is not None

    def test_both_routes_agree(self):
        rng = random.Random(55)
        done = 0
        while done < 15:
            case = rand_hk_case(rng)
            if case is None:
                continue
            k, p, q, u = case
            a = hK_mod(k, p, u)
            b = hK_mod_via_lifting(k, p, u)
            assert prof_iso(a, b) is not None
            done += 1

    def test_pseudofunctorial_through_composites(self):
        rng = random.Random(56)
        done = 0
        while done < 12:
            case = rand_hk_case(rng)
            if case is None:
                continue
            k, p, q, u = case
            qp = compose_polymod(q, p)
            lhs = hK_mod(k, qp, u)
            rhs = hK_mod(k, q, hK_mod(k, p, u))
            assert prof_iso(lhs, rhs) is not None
            done += 1

    def test_terminal_k_counts_natural_families(self):
        """Over the one-object shape the action computes, fiber by fiber,
        the number of natural families out of each lifter column."""
        rng = random.Random(57)
        one = terminal_cat()
        done = 0
        while done < 8:
            y = rand_fincat(rng)
            x = rand_fincat(rng)
            p = rand_modpoly(rng, x, y, max_cell=2)
            u = small_profunctor(rng, one, x)
            out = hK_mod(one, p, u)
            for yo in y.objs:
                want = sum(naive_nat_count(p.m, u, s, 0)
                           for s in p.S.objs if p.p.omap[s] == yo)
                assert out.at[yo][0].size == want
            done += 1

    def test_discrete_reduction_matches_span_action(self):
        rng = random.Random(58)
        for _ in range(10):
            x = FinSetObj(rng.randint(1, 3))
            y = FinSetObj(rng.randint(1, 3))
            kset = FinSetObj(rng.randint(1, 2))
            p = rand_poly(rng, x, y, smax=3, emax=2)
            apex = FinSetObj(rng.randint(0, 4))
            u_span = Span(kset, x, apex,
                          FinSetMap(apex, kset,
                                    tuple(rng.randrange(kset.size)
                                          for _ in apex.elements)),
                          FinSetMap(apex, x,
                                    tuple(rng.randrange(x.size)
                                          for _ in apex.elements)))
            out_span = hK_span(kset, p, u_span)
            out_mod = hK_mod(discrete_cat(kset.size), embed_poly(p),
                             span_as_prof(u_span))
            for yo in range(y.size):
                for ko in range(kset.size):
                    want = sum(1 for v in out_span.apex.elements
                               if out_span.left_leg(v) == ko
                               and out_span.right_leg(v) == yo)
                    assert out_mod.at[yo][ko].size == want


class TestCotensor:
    def test_terminal_base_gives_opposite_arrow(self):
        cot, c = cotensor2_mod(terminal_cat())
        assert cot.objects.size == 2
        assert cot.morphisms.size == 3
        # the one non-identity arrow runs from the 1-end to the 0-end
        assert cot.src(2) == 1 and cot.tgt(2) == 0
        assert cell_sizes(c) == ((1, 1),)

    def test_discrete_base_gives_disjoint_copies(self):
        a = discrete_cat(3)
        cot, _ = cotensor2_mod(a)
        classes = pi0_classes(cot)
        assert len(classes) == 3
        assert all(len(cls) == 2 for cls in classes)

    def test_roundtrips_both_ways(self):
        rng = random.Random(59)
        done = 0
        while done < 12:
            a = rand_fincat(rng, max_objs=2, max_mors=6)
            k = rand_fincat(rng, max_objs=2, max_mors=6)
            cot, _ = cotensor2_mod(a)
            m = small_profunctor(rng, k, cot)
            m0, m1, theta = decompose_cotensor_module(m, a)
            assert build_cotensor_module(m0, m1, theta) == m
            m0b, m1b, thetab = decompose_cotensor_module(
                build_cotensor_module(m0, m1, theta), a)
            assert (m0b, m1b, thetab) == (m0, m1, theta)
            done += 1


class TestPshOnDfib:
    def test_composite_with_dfib_is_plain_composition(self):
        rng = random.Random(60)
        done = 0
        while done < 8:
            e = rand_fincat(rng)
            g = rand_dfib(rng, e)
            r = rand_dfib(rng, g.dom)
            out = psh_on_dfib(g, r)
            assert out.cod == e
            assert presheaf_iso(fibers(out),
                                fibers(compose_functors(g, r))) is not None
            done += 1

    def test_groupoid_collapses_to_components(self):
        z2 = monoid_cat(((0, 1), (1, 0)), 0)
        bang = constant_functor(z2, terminal_cat(), 0)
        out = psh_on_dfib(bang, identity_functor(z2))
        assert fibers(out).at[0].size == 1

    def test_discrete_counts_objects(self):
        d3 = discrete_cat(3)
        bang = constant_functor(d3, terminal_cat(), 0)
        out = psh_on_dfib(bang, identity_functor(d3))
        assert fibers(out).at[0].size == 3

    def test_yoneda_slice_pushes_to_representable(self):
        """Pushing the slice over an element forward along the projection
        lands on the representable at its base point."""
        rng = random.Random(61)
        done = 0
        while done < 5:
            x = rand_fincat(rng)
            psh = rand_presheaf(rng, x)
            el = elements(psh)
            if el.cat.objects.size == 0:
                continue
            e = rng.randrange(el.cat.objects.size)
            slice_cat = comma(identity_functor(el.cat),
                              constant_functor(terminal_cat(), el.cat, e))
            out = psh_on_dfib(el.proj, slice_cat.proj1)
            want = representable(x, el.proj.omap[e])
            assert presheaf_iso(fibers(out), want) is not None
            done += 1

    def test_pullback_square_exchanges_pushforwards(self):
        """For a strict pullback of a discrete fibration, pushing over the
        top then down equals pushing down then over the bottom."""
        rng = random.Random(62)
        done = 0
        while done < 6:
            xcat = rand_fincat(rng)
            ycat = rand_fincat(rng)
            g = rand_functor(rng, ycat, xcat)
            if g is None:
                continue
            p = rand_dfib(rng, xcat)
            fobjs = [(a, d) for a in ycat.objs for d in p.dom.objs
                     if g.omap[a] == p.omap[d]]
            fmors = [(al, dl) for al in ycat.mors for dl in p.dom.mors
                     if g.mmap[al] == p.mmap[dl]]
            oindex = {o: i for i, o in enumerate(fobjs)}
            mindex = {m: i for i, m in enumerate(fmors)}
            o = FinSetObj(len(fobjs))
            m = FinSetObj(len(fmors))
            src = FinSetMap(m, o, tuple(
                oindex[(ycat.src(al), p.dom.src(dl))] for al, dl in fmors))
            tgt = FinSetMap(m, o, tuple(
                oindex[(ycat.tgt(al), p.dom.tgt(dl))] for al, dl in fmors))
            ident = FinSetMap(o, m, tuple(
                mindex[(ycat.ident(a), p.dom.ident(d))] for a, d in fobjs))
            comp = tuple(tuple(
                mindex[(ycat.comp[fmors[gi][0]][fmors[fi][0]],
                        p.dom.comp[fmors[gi][1]][fmors[fi][1]])]
                if tgt(fi) == src(gi) else -1
                for fi in range(len(fmors))) for gi in range(len(fmors)))
            fcat = FinCat(o, m, src, tgt, ident, comp)
            top = Functor(fcat, p.dom, tuple(d for _, d in fobjs),
                          tuple(dl for _, dl in fmors))
            down = Functor(fcat, ycat, tuple(a for a, _ in fobjs),
                           tuple(al for al, _ in fmors))
            assert is_discrete_fibration(down)
            r = rand_dfib(rng, fcat)
            path1 = compose_functors(p, psh_on_dfib(top, r))
            path2 = psh_on_dfib(g, compose_functors(down, r))
            assert presheaf_iso(fibers(path1), fibers(path2)) is not None
            done += 1


class TestKleisliCorrespondence:
    def test_module_and_fiberwise_iso_sets_biject(self):
        """The iso-set between a composite through a point and a lifted
        fiber module matches the iso-set of the collapsed presheaf forms,
        transported through the two canonical comparisons."""
        rng = random.Random(63)
        done = 0
        while done < 4:
            c = rand_fincat(rng, max_objs=2, max_mors=6)
            b = rand_fincat(rng, max_objs=2, max_mors=6)
            m = small_profunctor(rng, b, c, cap=2)
            b0 = rng.randrange(b.objects.size)
            t = constant_functor(terminal_cat(), b, b0)
            pz = rand_dfib(rng, c)
            h = small_profunctor(rng, terminal_cat(), pz.dom, cap=2)
            a1 = prof_compose(m, graph_module(t))
            a2 = prof_compose(graph_module(pz), h)
            if max_cell(a1) > 3 or max_cell(a2) > 3:
                continue
            if morphism_space(a1, a2) > 20000:
                continue
            # canonical collapse of a1 onto the column of m at b0
            b1_prof = Profunctor(
                terminal_cat(), c,
                tuple((m.at[co][b0],) for co in c.objs),
                tuple((m.lact[gamma][b0],) for gamma in c.mors),
                (tuple(identity(m.at[co][b0]) for co in c.objs),))
            cy_h = []
            for co in c.objs:
                els = coend_elements(m, graph_module(t), co, 0)
                table = []
                for el in els:
                    bmid, gpos, xval = el.rep
                    gamma = b.hom(bmid, b0)[gpos]
                    table.append(m.ract[gamma][co](xval))
                cy_h.append((FinSetMap(a1.at[co][0], b1_prof.at[co][0],
                                       tuple(table)),))
            cy = ProfMorphism(a1, b1_prof, tuple(cy_h))
            assert cy.is_invertible
            dc = dfib_collapse(pz, h)
            theta_set = [mo for mo in enumerate_prof_morphisms(a1, a2)
                         if mo.is_invertible]
            phi_set = [mo for mo in
                       enumerate_prof_morphisms(b1_prof, dc.fiberwise)
                       if mo.is_invertible]
            transported = set()
            for theta in theta_set:
                phi = prof_vcomp(dc.compare,
                                 prof_vcomp(theta, prof_invert(cy)))
                transported.add(phi.h)
            assert len(transported) == len(theta_set)
            assert transported == {mo.h for mo in phi_set}
            done += 1
