#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bocskit/ainfmod.hpp"
#include "helpers.hpp"

using namespace bocskit;
using namespace testutil;

namespace {

struct Fx {
    AlgPtr a;
    BocsPtr bar;
    bocskit::Rng rng{20177};

    Fx() : a(dg3()), bar(bar_construct(a, 4)) {}
};

} // namespace

TEST_CASE("module conditions: zero, regular module, n=1 and closed loops") {
    Fx fx;
    auto sp = gen_space(fx.rng, fx.a->space()->base(), 3, -1, 2, false, "m");
    AInfModule zero(fx.a, sp, 2);
    CHECK(check_module_all(zero));

    // regular module over an associative algebra: n=3 is action associativity
    auto reg = regular_module(fx.a);
    CHECK(check_module_all(*reg));

    // n = 1 reduces to (m^M_1)^2 = 0
    AInfModule cm(fx.a, sp, 1);
    cm.set_op(1, gen_square_zero(fx.rng, sp, 70));
    CHECK(check_module(cm, 1));
    CHECK(check_module_all(cm));

    for (int i = 0; i < 4; ++i) {
        auto m = gen_module(fx.rng, fx.a, 6);
        CHECK(check_module_all(*m));
    }
}

TEST_CASE("composition and differential: units, delta of identity, dg laws") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 5);
    auto id = ModMorphism::identity(m);
    auto gm = gen_mod_morphism(fx.rng, m);
    CHECK(check_mod_morphism_all(gm.f));
    CHECK(compose_mod(gm.f, ModMorphism::identity(m)).equal_upto(gm.f, 6));
    CHECK(compose_mod(ModMorphism::identity(gm.tgt), gm.f).equal_upto(gm.f, 6));
    CHECK((compose_mod(gm.f, id).f(1) == gm.f.f(1)));
    CHECK(delta_inf(id).zero_upto(6));
    // delta_inf squares to zero and satisfies Leibniz on random families
    for (int i = 0; i < 3; ++i) {
        ModMorphism r{m, m, (int)fx.rng.pick(-1, 1), {}};
        for (int n = 1; n <= 3; ++n) {
            HomMap c(m->mpower(n - 1), m->space(), r.deg + 1 - n);
            for (auto [row, col] :
                 admissible_slots(*m->mpower(n - 1), *m->space(), r.deg + 1 - n))
                if (fx.rng.chance(40)) c.set(row, col, fx.rng.scalar(m->field(), 2));
            r.slot(n) = c;
        }
        CHECK(delta_inf(delta_inf(r)).zero_upto(6));
        ModMorphism s{m, m, (int)fx.rng.pick(-1, 1), {}};
        for (int n = 1; n <= 2; ++n) {
            HomMap c(m->mpower(n - 1), m->space(), s.deg + 1 - n);
            for (auto [row, col] :
                 admissible_slots(*m->mpower(n - 1), *m->space(), s.deg + 1 - n))
                if (fx.rng.chance(40)) c.set(row, col, fx.rng.scalar(m->field(), 2));
            s.slot(n) = c;
        }
        auto lhs = delta_inf(compose_mod(s, r, 6), 6);
        auto rhs = compose_mod(delta_inf(s), r, 6) +
                   compose_mod(s, delta_inf(r), 6).scaled(
                       sign_scalar(m->field(), s.deg));
        CHECK(lhs.equal_upto(rhs, 6));
    }
}

TEST_CASE("module homotopies: trivial and operator-built partner") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 5);
    auto id = ModMorphism::identity(m);
    ModHomotopy h0{m, m, {}};
    CHECK(check_mod_homotopy_all(h0, id, id));

    ModHomotopy h{m, m, {}};
    HomMap h1(m->space(), m->space(), -1);
    for (auto [row, col] : admissible_slots(*m->space(), *m->space(), -1))
        if (fx.rng.chance(50)) h1.set(row, col, fx.rng.scalar(m->field(), 2));
    h.slot(1) = h1;
    ModMorphism hm{m, m, -1, {}};
    hm.slot(1) = h1;
    ModMorphism mN = structure_family(m);
    ModMorphism g{m, m, 0, {}};
    for (int n = 1; n <= 6; ++n)
        g.slot(n) = id.f(n) - delta_inf(hm, n).f(n) - compose_mod(mN, hm, n).f(n) -
                    compose_mod(hm, mN, n).f(n);
    CHECK(check_mod_morphism_all(g));
    CHECK(check_mod_homotopy_all(h, id, g));
}

TEST_CASE("bridge: identity, complexes, round trip, functoriality") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 5);
    TwistedModule tw = to_twisted(*m, fx.bar);
    CHECK(check_mc(tw));

    GModMorphism gid = bridge_morphism(ModMorphism::identity(m), fx.bar);
    CHECK(gid == gmod_identity(fx.bar, tw.m));

    auto [sp, d0] = gen_contractible_complex(fx.rng, fx.a->space()->base(), 2, -1, 1, "c");
    AInfModule cm(fx.a, sp, 1);
    cm.set_op(1, d0);
    TwistedModule ctw = to_twisted(cm, fx.bar);
    CHECK(ctw.u.f1_is_zero());
    CHECK(!ctw.u.f0().is_zero());

    AInfModule back = from_twisted(tw, fx.a, m->arity_bound());
    for (int n = 1; n <= m->arity_bound(); ++n) CHECK(back.op(n) == m->op(n));

    auto gm = gen_mod_morphism(fx.rng, m);
    auto gm2 = gen_mod_morphism(fx.rng, gm.tgt);
    auto big = compose_mod(gm2.f, gm.f, fx.bar->levels() + 1);
    GModMorphism lhs = bridge_morphism(big, fx.bar);
    GModMorphism rhs = compose(bridge_morphism(gm2.f, fx.bar),
                               bridge_morphism(gm.f, fx.bar));
    CHECK(lhs == rhs);
    GModMorphism dl = bridge_morphism(delta_inf(gm.f, fx.bar->levels() + 1), fx.bar);
    GModMorphism dr = hat_delta(bridge_morphism(gm.f, fx.bar));
    CHECK(dl == dr);

    TwistedModule src = to_twisted(*gm.src, fx.bar);
    TwistedModule tgt = to_twisted(*gm.tgt, fx.bar);
    CHECK(check_twisted_morphism(bridge_morphism(gm.f, fx.bar), src, tgt));
}

TEST_CASE("module condition is equivalent to Maurer-Cartan under the bridge") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 4);
    CHECK(check_module_all(*m));
    CHECK(check_mc(to_twisted(*m, fx.bar)));

    AInfModule bad(fx.a, m->space(), std::max(2, m->arity_bound()));
    for (int n = 1; n <= m->arity_bound(); ++n)
        if (!m->op(n).is_zero()) bad.set_op(n, m->op(n));
    auto slots2 = admissible_slots(*bad.mpower(1), *bad.space(), 0);
    bool corrupted = false;
    for (auto [row, col] : slots2) {
        HomMap op2 = bad.op(2);
        op2.add(row, col, Scalar::one(fx.a->field()));
        bad.set_op(2, op2);
        if (!check_module_all(bad).ok) {
            corrupted = true;
            break;
        }
    }
    REQUIRE(corrupted);
    CHECK(!check_mc(to_twisted(bad, fx.bar)).ok);
}

TEST_CASE("shift and J on modules, commuting with the bridge") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 4);
    auto sh = shift_mod(m);
    CHECK(check_module_all(*sh.shifted));
    CHECK(sh.shifted->op(1) ==
          -(sh.sigma.after(m->op(1)).after(inverse_bijection(sh.sigma))));
    auto sh2 = shift_mod(sh.shifted);
    HomMap twice = sh2.sigma.after(sh.sigma);
    CHECK(sh2.shifted->op(1) ==
          twice.after(m->op(1)).after(solve_splitting(twice).section));

    auto jd = jfun_mod(m);
    CHECK(check_module_all(*jd.j));
    CHECK(check_mod_morphism_all(jd.alpha));
    CHECK(check_mod_morphism_all(jd.beta));

    TwistedModule tw = to_twisted(*m, fx.bar);
    auto ts = shift_twisted(tw);
    TwistedModule msh = to_twisted(*sh.shifted, fx.bar);
    CHECK(ts.shifted.m->same_as(*msh.m));
    CHECK(ts.shifted.u == msh.u);

    JData jtw = jfun(tw);
    TwistedModule mj = to_twisted(*jd.j, fx.bar);
    CHECK(jtw.j.m->same_as(*mj.m));
    CHECK(jtw.j.u == mj.u);
}

TEST_CASE("Psi: strict morphisms act wordwise; commuting restriction square") {
    Fx fx;
    auto fgen = gen_alg_morphism(fx.rng, fx.a);
    auto bar_b = bar_construct(fgen.tgt, fx.bar->levels());
    BocsMorphism psi = psi_of_morphism(fgen, fx.bar, bar_b); // checked inside

    AlgMorphism strict{fgen.src, fgen.tgt, {}};
    strict.slot(1) = fgen.f(1);
    BocsMorphism psis = psi_of_morphism(strict, fx.bar, bar_b);
    for (int c = 0; c < fx.bar->cbar()->dim(); ++c) {
        int n = (int)fx.bar->word(c).size();
        for (const auto& [row, v] : psis.map.apply_basis(c))
            CHECK((int)bar_b->word(row).size() == n);
    }

    auto mb = gen_module(fx.rng, fgen.tgt, 4);
    AInfModule ra = restrict_mod(fgen, *mb);
    for (int n = 1; n <= 2 * fgen.src->arity_bound(); ++n) CHECK(check_module(ra, n));
    TwistedModule lhs = to_twisted(ra, fx.bar);
    TwistedModule rhs = restrict_twisted(psi, to_twisted(*mb, bar_b));
    CHECK(lhs.u == rhs.u);

    auto gmor = gen_mod_morphism(fx.rng, mb);
    auto rsrc = std::make_shared<AInfModule>(restrict_mod(fgen, *gmor.src));
    auto rtgt = std::make_shared<AInfModule>(restrict_mod(fgen, *gmor.tgt));
    ModMorphism rf =
        restrict_mod_morphism(fgen, gmor.f, rsrc, rtgt, fx.bar->levels() + 1);
    for (int n = 1; n <= 2 * fgen.src->arity_bound(); ++n)
        CHECK(check_mod_morphism(rf, n));
    GModMorphism sq_lhs = bridge_morphism(rf, fx.bar);
    GModMorphism sq_rhs = restrict_along(psi, bridge_morphism(gmor.f, bar_b));
    CHECK(sq_lhs == sq_rhs);

    auto ida = AlgMorphism::identity(fx.a);
    auto ma = gen_module(fx.rng, fx.a, 4);
    AInfModule same = restrict_mod(ida, *ma);
    for (int n = 1; n <= ma->arity_bound(); ++n) CHECK(same.op(n) == ma->op(n));
}

TEST_CASE("Delta: coderivation, boundary compatibility, homotopy transport") {
    Fx fx;
    auto pair = gen_homotopic_pair(fx.rng, fx.a);
    auto bar_b = bar_construct(pair.f.tgt, fx.bar->levels());
    BocsMorphism phi = psi_of_morphism(pair.f, fx.bar, bar_b);
    BocsMorphism psi = psi_of_morphism(pair.g, fx.bar, bar_b);

    AlgHomotopy zero{pair.f.src, pair.f.tgt, {}};
    zero.slot(1);
    CHECK(delta_coderivation(zero, pair.f, pair.g, fx.bar, bar_b).is_zero());

    HomMap dh = delta_coderivation(pair.h, pair.f, pair.g, fx.bar, bar_b);
    CHECK(check_phi_psi_coderivation(phi, psi, dh));

    std::vector<HomMap> diff;
    for (int i = 1; i <= std::max(pair.f.bound(), pair.g.bound()); ++i)
        diff.push_back(pair.f.f(i) - pair.g.f(i));
    HomMap dfg = delta_coderivation_family(diff, 0, pair.f, pair.g, fx.bar, bar_b);
    CHECK(dfg == phi.map - psi.map);

    AlgMorphism hb = homotopy_boundary(pair.h, pair.f, pair.g);
    std::vector<HomMap> hbc;
    for (int i = 1; i <= hb.bound(); ++i) hbc.push_back(hb.f(i));
    HomMap lhs = delta_coderivation_family(hbc, 0, pair.f, pair.g, fx.bar, bar_b);
    HomMap rhs = bar_b->delta().after(dh) + dh.after(fx.bar->delta());
    CHECK(lhs == rhs);

    BocsHomotopy bh{phi, psi, dh};
    CHECK(check_bocs_homotopy(bh));

    auto mb = gen_module(fx.rng, pair.f.tgt, 4);
    TwistedModule mu = to_twisted(*mb, bar_b);
    GModMorphism eta = restriction_equivalence_witness(bh, mu);
    CHECK(eta.f0() == HomMap::identity(mu.m));
    auto gmor = gen_mod_morphism(fx.rng, mb);
    TwistedModule nu = to_twisted(*gmor.tgt, bar_b);
    auto nat = restriction_naturality(bh, bridge_morphism(gmor.f, bar_b), mu, nu);
    CHECK(nat.defect.deg() == 0);

    // derivation identities of R_h on a composable pair over bar_b
    GModMorphism u = bridge_morphism(gmor.f, bar_b);
    auto gmor2 = gen_mod_morphism(fx.rng, gmor.tgt);
    GModMorphism v = bridge_morphism(gmor2.f, bar_b);
    GModMorphism dlhs = restrict_homotopy(bh, compose(v, u));
    GModMorphism drhs =
        compose(restrict_homotopy(bh, v), restrict_along(phi, u)) +
        compose(restrict_along(psi, v), restrict_homotopy(bh, u))
            .scaled(sign_scalar(v.field(), v.deg()));
    CHECK(dlhs == drhs);
    // the first component of R_h always vanishes
    CHECK(restrict_homotopy(bh, u).f0().is_zero());
}

TEST_CASE("homology and quasi-isomorphisms of modules") {
    Fx fx;
    auto m = gen_module(fx.rng, fx.a, 4);
    CHECK(is_quasi_iso(ModMorphism::identity(m)));

    auto sp = gen_space(fx.rng, fx.a->space()->base(), 2, 0, 1, false, "q");
    AInfModule tgt0(fx.a, sp, 1);
    tgt0.set_op(1, gen_square_zero(fx.rng, sp, 50));
    auto tgt = std::make_shared<AInfModule>(tgt0);
    bocskit::Rng crng(33);
    auto [csp, cu0] = gen_contractible_complex(crng, fx.a->space()->base(), 1, 0, 1, "ac");
    SumSpace ds = direct_sum(tgt->space(), csp);
    auto sum = std::make_shared<AInfModule>(fx.a, ds.sum, 1);
    sum->set_op(1, ds.in1.after(tgt->op(1)).after(ds.pr1) +
                       ds.in2.after(cu0).after(ds.pr2));
    ModMorphism proj{sum, tgt, 0, {}};
    proj.slot(1) = ds.pr1;
    CHECK(check_mod_morphism_all(proj));
    CHECK(is_quasi_iso(proj));
    auto inv = mod_homotopy_inverse(proj, fx.bar);
    CHECK(check_mod_morphism_all(inv.g));
    CHECK(check_mod_homotopy_all(inv.h_fg, compose_mod(proj, inv.g),
                                 ModMorphism::identity(tgt)));
    CHECK(check_mod_homotopy_all(inv.h_gf, compose_mod(inv.g, proj),
                                 ModMorphism::identity(sum)));

    ModMorphism zf = ModMorphism::zero(sum, tgt, 0);
    if (!module_homology(*sum).empty())
        CHECK_THROWS_AS(mod_homotopy_inverse(zf, fx.bar), BocsError);
}
