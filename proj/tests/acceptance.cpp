// Acceptance suite: one pass/fail line per criterion, all tolerances zero.

#include "bocskit/ainfmod.hpp"
#include "bocskit/io.hpp"
#include "bocskit/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

using namespace bocskit;

namespace {

int failures = 0;

void criterion(int idx, const std::string& name, const std::function<bool()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("%s criterion %2d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", idx,
                name.c_str(), (long long)dt, err.empty() ? "" : " -- ", err.c_str());
    if (!ok) ++failures;
}

Field field_for(uint64_t seed) {
    return seed % 2 ? Field::rationals() : Field::fp(32003);
}

GenSpec spec_for(uint64_t seed, int arity = 3, int max_dim = 6) {
    GenSpec s;
    s.seed = seed;
    s.field = field_for(seed);
    s.idempotents = seed % 5 == 0 ? 2 : 1;
    s.arity_bound = arity;
    s.max_dim = max_dim;
    return s;
}

/* random operation family of arity <= 3 with no Stasheff constraint */
AInfAlgebra raw_family(Rng& rng, Field f) {
    BaseRing base{f, 1};
    auto sp = gen_space(rng, base, (int)rng.pick(2, 4), -1, 2, true, "r");
    AInfAlgebra a(sp, 3);
    for (int n = 1; n <= 3; ++n) {
        HomMap op(a.power(n), sp, 2 - n);
        for (auto [row, col] : admissible_slots(*a.power(n), *sp, 2 - n))
            if (rng.chance(50)) op.set(row, col, rng.scalar(f, 3));
        a.set_op(n, op);
    }
    return a;
}

bool c1_sign_translation() {
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        if (seed <= 50) {
            Rng rng(seed * 31 + 7);
            AInfAlgebra a = raw_family(rng, field_for(seed));
            // sign_translate verifies Z'_n = (-1)^{n(n-1)/2} Z_n for n <= 6
            AInfAlgebra b = sign_translate(a);
            for (int n = 1; n <= 6; ++n) {
                long e = (long)n * (n - 1) / 2;
                if (!(stasheff_defect_primed(b, n) ==
                      stasheff_defect(a, n).scaled(sign_scalar(a.field(), (int)(e % 2)))))
                    return false;
            }
        } else {
            auto a = gen_dg_algebra(spec_for(seed));
            AInfAlgebra b = sign_translate(*a);
            for (int n = 1; n <= 6; ++n)
                if (!stasheff_defect_primed(b, n).is_zero()) return false;
        }
    }
    return true;
}

bool c2_bar_soundness() {
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed));
        auto b = bar_construct(a, 5); // throws StasheffViolation if delta^2 != 0
        if (!check_bocs_axioms(*b)) return false;
        if (!b->delta().after(b->delta()).is_zero()) return false;
    }
    return true;
}

bool c3_dg_category_laws() {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 3, 4));
        auto b = bar_construct(a, 4);
        Rng rng(seed * 101 + 3);
        BaseRing base = a->space()->base();
        auto m = gen_space(rng, base, 3, -1, 2, false, "m");
        auto n = gen_space(rng, base, 3, -1, 2, false, "n");
        auto l = gen_space(rng, base, 2, -1, 2, false, "l");
        if (!hat_delta(gmod_identity(b, m)).is_zero()) return false;
        for (int trial = 0; trial < 10; ++trial) {
            int d1 = (int)rng.pick(-1, 1), d2 = (int)rng.pick(-1, 1),
                d3 = (int)rng.pick(-1, 1);
            auto f = gen_gmod_morphism(rng, b, m, n, d1, 50);
            auto g = gen_gmod_morphism(rng, b, n, l, d2, 50);
            auto h = gen_gmod_morphism(rng, b, l, m, d3, 50);
            if (!(compose(h, compose(g, f)) == compose(compose(h, g), f))) return false;
            if (!hat_delta(hat_delta(f)).is_zero()) return false;
            auto leib = hat_delta(compose(g, f)) - compose(hat_delta(g), f) -
                        compose(g, hat_delta(f)).scaled(sign_scalar(f.field(), d2));
            if (!leib.is_zero()) return false;
        }
    }
    return true;
}

bool c4_inversion() {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 5);
        Rng rng(seed * 77 + 5);
        auto m = gen_space(rng, a->space()->base(), 3, -1, 1, false, "m");
        auto idm = gmod_identity(b, m);
        for (int trial = 0; trial < 10; ++trial) {
            auto f = gen_gmod_automorphism(rng, b, m, 50);
            auto g = invert(f);
            if (!(compose(g, f) == idm) || !(compose(f, g) == idm)) return false;
        }
        // singular first component raises NotInvertible
        auto bad = gen_gmod_morphism(rng, b, m, m, 0, 50);
        bad.set_f0(HomMap(m, m, 0));
        try {
            invert(bad);
            return false;
        } catch (const BocsError& e) {
            if (e.kind() != Err::NotInvertible) return false;
        }
    }
    return true;
}

bool c5_idempotent_splitting() {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 3);
        Rng rng(seed * 13 + 1);
        auto gi = gen_twisted_idempotent(rng, b, 50);
        auto sd = split_idempotent(gi.e, gi.total); // h e h^{-1} = diag(I,0) verified
        if (!check_mc(sd.part1) || !check_mc(sd.part2)) return false;
        GModMorphism proj = compose(sd.sum.in1, sd.sum.pr1);
        if (!(compose(compose(sd.iso, gi.e), sd.iso_inv) == proj)) return false;
    }
    return true;
}

bool c6_conflation_straightening() {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 3);
        Rng rng(seed * 17 + 11);
        auto conf = gen_conflation(rng, b, 50);
        auto st = straighten_conflation(conf.f, conf.g, conf.sub, conf.total, conf.quot);
        if (!st.left.f1_is_zero() || !st.right.f1_is_zero()) return false;
        if (!(st.left.f0() == conf.f.f0()) || !(st.right.f0() == conf.g.f0()))
            return false;
    }
    return true;
}

bool c7_frobenius_data() {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 3);
        Rng rng(seed * 19 + 23);
        auto m = gen_space(rng, a->space()->base(), (int)rng.pick(1, 2), -1, 1, false,
                           "m");
        auto n = gen_space(rng, a->space()->base(), (int)rng.pick(1, 2), -1, 1, false,
                           "n");
        TwistedModule mu = gen_mc_random(rng, b, m, 50);
        TwistedModule nv = gen_mc_random(rng, b, n, 50);
        JData jm = jfun(mu); // MC + conflation shape verified inside
        JData jn = jfun(nv);
        if (!compose(jm.beta, jm.alpha).is_zero()) return false;
        // first components of (alpha, beta) are split exact
        if (rank(jm.alpha.f0()) != m->dim() || rank(jm.beta.f0()) != m->dim())
            return false;
        // eta round trips on both sides
        GModMorphism f1 = gen_gmod_morphism(rng, b, m, n, 0, 50);
        GModMorphism lift = eta1_complete(f1, mu, nv, jn);
        if (!(eta1_extract(jn, lift) == f1)) return false;
        GModMorphism g2 = gen_gmod_morphism(rng, b, jm.sh.shifted.m, n, 0, 50);
        GModMorphism colift = eta2_complete(g2, mu, nv, jm);
        if (!(eta2_extract(jm, colift) == g2)) return false;
        // complete-after-extract is the identity on genuine twisted morphisms
        GModMorphism wit = gen_gmod_morphism(rng, b, m, n, -1, 50);
        GModMorphism nullf =
            hat_delta(wit) + compose(nv.u, wit) + compose(wit, mu.u);
        GModMorphism into_j = compose(jn.alpha, nullf); // twisted M -> J(N)
        if (!(eta1_complete(eta1_extract(jn, into_j), mu, nv, jn) == into_j))
            return false;
        // null-homotopic <-> factors through J, both directions constructed
        GModMorphism through = factor_through_j(nullf, wit, mu, nv, jm);
        if (!(compose(through, jm.alpha) == nullf)) return false;
        GModMorphism wit2 = witness_from_factorization(through, jm);
        GModMorphism zero(b, m, n, 0);
        if (!check_homotopy(wit2, nullf, zero, mu, nv)) return false;
    }
    return true;
}

bool c8_nullhomotopy_theorem() {
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 4);
        Rng rng(seed * 41 + 9);
        TwistedModule mu = gen_acyclic_twisted(rng, b, (int)rng.pick(1, 2), 50);
        GModMorphism h = nullhomotopy(mu); // defining identity re-checked inside
        GModMorphism idm = gmod_identity(b, mu.m);
        if (!check_homotopy(h, idm, idm - idm, mu, mu)) return false;
    }
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed + 100, 2, 3));
        auto b = bar_construct(a, 4);
        Rng rng(seed * 43 + 3);
        // a basis vector in an isolated degree guarantees nonzero homology
        BaseRing base = a->space()->base();
        std::vector<BasisElem> basis{{"iso", 10, 0, 0}};
        for (int i = 0; i < 3; ++i)
            basis.push_back({"w" + std::to_string(i), (int)rng.pick(-1, 1), 0,
                             (int)rng.pick(0, base.n - 1)});
        auto sp = GradedSpace::make(base, false, basis);
        TwistedModule mu = gen_mc(rng, b, sp, gen_square_zero(rng, sp, 50), 50);
        try {
            nullhomotopy(mu);
            return false;
        } catch (const BocsError& e) {
            if (e.kind() != Err::NotAcyclic) return false;
            // the witness names a genuinely nonzero homology degree
            auto h = complex_homology(mu.u.f0());
            if (h.empty()) return false;
            std::string expect = "H^" + std::to_string(h.begin()->first.first);
            if (std::string(e.what()).find(expect) == std::string::npos) return false;
        }
    }
    return true;
}

bool c9_quasi_iso_homotopy_equivalence() {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto bar = bar_construct(a, 3);
        Rng rng(seed * 47 + 13);
        // target module, plus a contractible summand, transported
        auto tsp = gen_space(rng, a->space()->base(), (int)rng.pick(1, 2), 0, 1, false,
                             "t");
        auto t0 = std::make_shared<AInfModule>(a, tsp, 1);
        t0->set_op(1, gen_square_zero(rng, tsp, 50));
        auto [csp, cu0] =
            gen_contractible_complex(rng, a->space()->base(), 1, 0, 1, "c");
        SumSpace ds = direct_sum(tsp, csp);
        auto sum = std::make_shared<AInfModule>(a, ds.sum, 1);
        sum->set_op(1, ds.in1.after(t0->op(1)).after(ds.pr1) +
                           ds.in2.after(cu0).after(ds.pr2));
        ModMorphism proj{sum, t0, 0, {}};
        proj.slot(1) = ds.pr1;
        if (!is_quasi_iso(proj)) return false;
        auto inv = mod_homotopy_inverse(proj, bar);
        if (!check_mod_homotopy_all(inv.h_fg, compose_mod(proj, inv.g),
                                    ModMorphism::identity(t0)))
            return false;
        if (!check_mod_homotopy_all(inv.h_gf, compose_mod(inv.g, proj),
                                    ModMorphism::identity(sum)))
            return false;
    }
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed + 60, 2, 3));
        auto bar = bar_construct(a, 3);
        Rng rng(seed * 53 + 29);
        // zero map out of a module with nonzero homology in an isolated degree
        BaseRing base = a->space()->base();
        auto sp = GradedSpace::make(base, false, {{"iso", 10, 0, 0}, {"y", 0, 0, 0}});
        auto m0 = std::make_shared<AInfModule>(a, sp, 1);
        auto n0 = std::make_shared<AInfModule>(
            a, GradedSpace::make(base, false, {{"z", 0, 0, 0}}), 1);
        ModMorphism zf = ModMorphism::zero(m0, n0, 0);
        try {
            mod_homotopy_inverse(zf, bar);
            return false;
        } catch (const BocsError& e) {
            if (e.kind() != Err::NotQuasiIso) return false;
        }
    }
    return true;
}

bool c10_bridge_fidelity() {
    int corrupt_seen = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto bar = bar_construct(a, 3);
        Rng rng(seed * 59 + 31);
        auto m = gen_module(rng, a, 4);
        auto gm = gen_mod_morphism(rng, m);
        auto gm2 = gen_mod_morphism(rng, gm.tgt);
        auto big = compose_mod(gm2.f, gm.f, bar->levels() + 1);
        if (!(bridge_morphism(big, bar) ==
              compose(bridge_morphism(gm2.f, bar), bridge_morphism(gm.f, bar))))
            return false;
        if (!(bridge_morphism(delta_inf(gm.f, bar->levels() + 1), bar) ==
              hat_delta(bridge_morphism(gm.f, bar))))
            return false;
        // check_module <=> check_mc (valid and corrupted)
        if (!check_module_all(*m) || !check_mc(to_twisted(*m, bar))) return false;
        AInfModule bad(a, m->space(), std::max(2, m->arity_bound()));
        for (int n = 1; n <= m->arity_bound(); ++n)
            if (!m->op(n).is_zero()) bad.set_op(n, m->op(n));
        auto slots = admissible_slots(*bad.mpower(1), *bad.space(), 0);
        for (auto [row, col] : slots) {
            HomMap op2 = bad.op(2);
            op2.add(row, col, Scalar::one(a->field()));
            bad.set_op(2, op2);
            bool mod_ok = check_module_all(bad).ok;
            bool mc_ok = check_mc(to_twisted(bad, bar)).ok;
            if (mod_ok != mc_ok) return false;
            if (!mod_ok) {
                ++corrupt_seen;
                break;
            }
        }
    }
    // the negative direction must be genuinely exercised
    return corrupt_seen >= 20;
}

bool c11_restriction_coherence() {
    // commuting square on 50 instances
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        Rng rng(seed * 61 + 37);
        AlgMorphism phi = gen_alg_morphism(rng, a);
        // levels must cover the support of the restricted structure family
        auto bar_a = bar_construct(phi.src, 4);
        auto bar_b = bar_construct(phi.tgt, 4);
        BocsMorphism psi = psi_of_morphism(phi, bar_a, bar_b);
        auto mb = gen_module(rng, phi.tgt, 4);
        AInfModule ra = restrict_mod(phi, *mb);
        // conditions are exact through the phi-verified horizon
        for (int n = 1; n <= 2 * phi.src->arity_bound(); ++n)
            if (!check_module(ra, n)) return false;
        if (!(to_twisted(ra, bar_a).u ==
              restrict_twisted(psi, to_twisted(*mb, bar_b)).u))
            return false;
        auto gmor = gen_mod_morphism(rng, mb);
        auto rsrc = std::make_shared<AInfModule>(restrict_mod(phi, *gmor.src));
        auto rtgt = std::make_shared<AInfModule>(restrict_mod(phi, *gmor.tgt));
        ModMorphism rf =
            restrict_mod_morphism(phi, gmor.f, rsrc, rtgt, bar_a->levels() + 1);
        if (!(bridge_morphism(rf, bar_a) ==
              restrict_along(psi, bridge_morphism(gmor.f, bar_b))))
            return false;
    }
    // Delta boundary identity on 50 instances (arbitrary h families)
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed + 17, 2, 3));
        Rng rng(seed * 67 + 41);
        AlgMorphism f = gen_alg_morphism(rng, a);
        AlgMorphism g = gen_alg_morphism(rng, a);
        // force shared endpoints: reuse f's target structure for g
        g = compose_alg_morphisms(f, AlgMorphism::identity(a));
        auto bar_a = bar_construct(a, 3);
        auto bar_b = bar_construct(f.tgt, 3);
        AlgHomotopy h{a, f.tgt, {}};
        for (int n = 1; n <= 2; ++n) {
            HomMap hn(a->power(n), f.tgt->space(), -n);
            for (auto [row, col] : admissible_slots(*a->power(n), *f.tgt->space(), -n))
                if (rng.chance(40)) hn.set(row, col, rng.scalar(a->field(), 2));
            h.slot(n) = hn;
        }
        HomMap dh = delta_coderivation(h, f, g, bar_a, bar_b);
        AlgMorphism hb = homotopy_boundary(h, f, g);
        std::vector<HomMap> hbc;
        for (int i = 1; i <= hb.bound(); ++i) hbc.push_back(hb.f(i));
        HomMap lhs = delta_coderivation_family(hbc, 0, f, g, bar_a, bar_b);
        HomMap rhs = bar_b->delta().after(dh) + dh.after(bar_a->delta());
        if (!(lhs == rhs)) return false;
    }
    // homotopic phi ~ psi: eta iso with null-homotopic naturality defect
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed + 29, 2, 3));
        Rng rng(seed * 71 + 43);
        auto pair = gen_homotopic_pair(rng, a);
        auto bar_a = bar_construct(a, 3);
        auto bar_b = bar_construct(pair.f.tgt, 3);
        BocsMorphism phi = psi_of_morphism(pair.f, bar_a, bar_b);
        BocsMorphism psi = psi_of_morphism(pair.g, bar_a, bar_b);
        BocsHomotopy bh{phi, psi, delta_coderivation(pair.h, pair.f, pair.g, bar_a,
                                                     bar_b)};
        if (!check_bocs_homotopy(bh)) return false;
        auto mb = gen_module(rng, pair.f.tgt, 3);
        TwistedModule mu = to_twisted(*mb, bar_b);
        GModMorphism eta = restriction_equivalence_witness(bh, mu);
        if (!(eta.f0() == HomMap::identity(mu.m))) return false;
        auto gmor = gen_mod_morphism(rng, mb);
        TwistedModule nu = to_twisted(*gmor.tgt, bar_b);
        restriction_naturality(bh, bridge_morphism(gmor.f, bar_b), mu, nu);
    }
    return true;
}

bool c12_dual_path() {
    // Stasheff family (valid and raw), 100 seeds
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        if (seed % 2) {
            auto a = gen_dg_algebra(spec_for(seed, 3, 4));
            for (int n = 1; n <= 6; ++n)
                if (!(brute_stasheff_defect(*a, n) == stasheff_defect(*a, n)))
                    return false;
        } else {
            Rng rng(seed * 73 + 47);
            AInfAlgebra a = raw_family(rng, field_for(seed));
            for (int n = 1; n <= 5; ++n)
                if (!(brute_stasheff_defect(a, n) == stasheff_defect(a, n)))
                    return false;
        }
    }
    // morphism family, 100 seeds
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        Rng rng(seed * 79 + 53);
        AlgMorphism f = AlgMorphism::identity(a);
        for (int n = 2; n <= 3; ++n) {
            HomMap c(a->power(n), a->space(), 1 - n);
            for (auto [row, col] : admissible_slots(*a->power(n), *a->space(), 1 - n))
                if (rng.chance(50)) c.set(row, col, rng.scalar(a->field(), 2));
            f.slot(n) = c;
        }
        for (int n = 1; n <= 4; ++n)
            if (!(brute_morphism_defect(f, n) == morphism_defect(f, n))) return false;
    }
    // GMod-B composition against the full M (x) C tensor view, 100 seeds
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto a = gen_dg_algebra(spec_for(seed, 2, 3));
        auto b = bar_construct(a, 3);
        Rng rng(seed * 83 + 59);
        auto m = gen_space(rng, a->space()->base(), 2, -1, 1, false, "m");
        auto n = gen_space(rng, a->space()->base(), 2, -1, 1, false, "n");
        auto l = gen_space(rng, a->space()->base(), 2, -1, 1, false, "l");
        auto f = gen_gmod_morphism(rng, b, m, n, (int)rng.pick(-1, 1), 50);
        auto g = gen_gmod_morphism(rng, b, n, l, (int)rng.pick(-1, 1), 50);
        if (!(compose(g, f) == brute_compose_gmod(g, f))) return false;
    }
    return true;
}

} // namespace

int main() {
    std::printf("acceptance suite (exact arithmetic, tolerance 0)\n");
    criterion(1, "sign-translation lemma, 100 seeds, n <= 6", c1_sign_translation);
    criterion(2, "bar construction soundness at L = 5, 100 seeds", c2_bar_soundness);
    criterion(3, "dg-category laws, 100 random triples", c3_dg_category_laws);
    criterion(4, "inversion with two-sided exactness at L = 5", c4_inversion);
    criterion(5, "idempotent splitting, 50 twisted idempotents", c5_idempotent_splitting);
    criterion(6, "conflation straightening, 50 pairs", c6_conflation_straightening);
    criterion(7, "Frobenius data (J, eta, alpha/beta, factorization), 50 modules",
              c7_frobenius_data);
    criterion(8, "null-homotopy theorem, 30 acyclic + 30 non-acyclic",
              c8_nullhomotopy_theorem);
    criterion(9, "quasi-iso <=> homotopy equivalence, 20 + 10 instances",
              c9_quasi_iso_homotopy_equivalence);
    criterion(10, "bridge fidelity (functoriality, differential, MC <=> module)",
              c10_bridge_fidelity);
    criterion(11, "restriction coherence (squares, Delta boundary, eta)",
              c11_restriction_coherence);
    criterion(12, "dual-path oracle agreement, 100 seeds per family", c12_dual_path);
    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
