#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bocskit/ainfmod.hpp"
#include "bocskit/oracles.hpp"
#include "helpers.hpp"

using namespace bocskit;
using namespace testutil;

TEST_CASE("generated algebras always satisfy Stasheff, across fields and rings") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        GenSpec spec;
        spec.seed = seed;
        spec.field = seed % 2 ? Field::rationals() : Field::fp(10007);
        spec.idempotents = seed % 3 == 0 ? 2 : 1;
        auto a = gen_dg_algebra(spec);
        CHECK(check_stasheff_all(*a));
        CHECK(a->space()->dim() <= spec.max_dim);
    }
}

TEST_CASE("the m3 path of the generator produces nonzero m3 instances") {
    int with_m3 = 0;
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        GenSpec spec;
        spec.seed = seed * 7 + 1;
        auto a = gen_dg_algebra(spec);
        if (!a->m(3).is_zero()) ++with_m3;
    }
    CHECK(with_m3 > 0);
}

TEST_CASE("dual path: brute Stasheff defect agrees with the HomMap engine") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        GenSpec spec;
        spec.seed = seed;
        auto a = gen_dg_algebra(spec);
        for (int n = 1; n <= 2 * a->arity_bound(); ++n)
            CHECK(brute_stasheff_defect(*a, n) == stasheff_defect(*a, n));
    }
    // dual path on operations that do NOT satisfy Stasheff (nonzero defects)
    bocskit::Rng rng(5);
    auto sp = GradedSpace::make(qring(), true,
                                {{"p", 0, 0, 0}, {"q", 1, 0, 0}, {"r", 2, 0, 0}});
    for (int trial = 0; trial < 5; ++trial) {
        AInfAlgebra a(sp, 3);
        for (int n = 1; n <= 3; ++n) {
            HomMap op(a.power(n), sp, 2 - n);
            for (auto [row, col] : admissible_slots(*a.power(n), *sp, 2 - n))
                if (rng.chance(60)) op.set(row, col, rng.scalar(Field::rationals(), 3));
            a.set_op(n, op);
        }
        bool some_nonzero = false;
        for (int n = 1; n <= 6; ++n) {
            HomMap d = stasheff_defect(a, n);
            CHECK(brute_stasheff_defect(a, n) == d);
            some_nonzero = some_nonzero || !d.is_zero();
        }
        CHECK(some_nonzero);
    }
}

TEST_CASE("dual path: brute morphism defect agrees with the engine") {
    bocskit::Rng rng(17);
    auto a = dg3();
    for (int trial = 0; trial < 5; ++trial) {
        AlgMorphism f = AlgMorphism::identity(a);
        for (int n = 2; n <= 3; ++n) {
            HomMap c(a->power(n), a->space(), 1 - n);
            for (auto [row, col] : admissible_slots(*a->power(n), *a->space(), 1 - n))
                if (rng.chance(50)) c.set(row, col, rng.scalar(a->field(), 2));
            f.slot(n) = c;
        }
        for (int n = 1; n <= 5; ++n)
            CHECK(brute_morphism_defect(f, n) == morphism_defect(f, n));
    }
}

TEST_CASE("a deliberately broken sign yields a localized nonzero defect") {
    auto a = dg3();
    AInfAlgebra bad(a->space(), 2);
    bad.set_op(1, a->m(1));
    // flip the sign of a single structure constant: x*e becomes -x
    HomMap m2 = a->m(2);
    auto sq = a->power(2);
    int row = a->space()->index_of("x"), col = sq->index_of("x|e");
    m2.set(row, col, -m2.at(row, col));
    bad.set_op(2, m2);
    HomMap d2 = stasheff_defect(bad, 2);
    CHECK(!d2.is_zero());
    CHECK(brute_stasheff_defect(bad, 2) == d2);
    CHECK(!check_stasheff(bad, 3).ok);
    CHECK(brute_stasheff_defect(bad, 3) == stasheff_defect(bad, 3));
}

TEST_CASE("gen_mc solves layer by layer; restriction to a complex is the base") {
    bocskit::Rng rng(900);
    auto a = dg3();
    auto b = bar_construct(a, 3);
    for (int i = 0; i < 4; ++i) {
        auto sp = gen_space(rng, a->space()->base(), 3, -1, 2, false, "m");
        HomMap u0 = gen_square_zero(rng, sp, 50);
        TwistedModule mu = gen_mc(rng, b, sp, u0, 60);
        CHECK(check_mc(mu));
        CHECK(mu.u.f0() == u0);
    }
}

TEST_CASE("generators for morphisms, homotopic pairs and modules close the loop") {
    bocskit::Rng rng(321);
    auto a = dg3();
    for (int i = 0; i < 3; ++i) {
        AlgMorphism f = gen_alg_morphism(rng, a);
        CHECK(check_alg_morphism_all(f));
        auto pair = gen_homotopic_pair(rng, a);
        CHECK(check_alg_morphism_all(pair.f));
        CHECK(check_alg_morphism_all(pair.g));
        CHECK(check_alg_homotopy_all(pair.h, pair.f, pair.g));
        auto m = gen_module(rng, a, 5);
        CHECK(check_module_all(*m));
        auto gm = gen_mod_morphism(rng, m);
        CHECK(check_mod_morphism_all(gm.f));
    }
    // at least some generated morphisms have nontrivial higher components
    int higher = 0;
    for (int i = 0; i < 6; ++i) {
        AlgMorphism f = gen_alg_morphism(rng, a);
        if (f.bound() >= 2 && !f.f(2).is_zero()) ++higher;
    }
    CHECK(higher > 0);
}
