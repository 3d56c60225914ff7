#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bocskit/bocs.hpp"
#include "helpers.hpp"

using namespace bocskit;
using namespace testutil;

TEST_CASE("bar of the zero algebra: delta = 0, mubar = word splits") {
    auto sp = GradedSpace::make(qring(), true, {{"u", 0, 0, 0}, {"v", 1, 0, 0}});
    auto a = std::make_shared<AInfAlgebra>(sp, 2);
    auto b = bar_construct(a, 3);
    CHECK(b->delta().is_zero());
    CHECK(check_bocs_axioms(*b));
    int c = b->cbar()->index_of("u|v|u");
    REQUIRE(c >= 0);
    auto mu = b->mubar(c);
    CHECK(mu.size() == 2);
    for (const auto& t : mu) {
        CHECK(t.coef.is_one());
        CHECK(b->layer(t.c1) + b->layer(t.c2) == 3);
    }
}

TEST_CASE("mubar(c) = 0 on layer 1 and iterate_comult vanishes by triangularity") {
    auto a = dg3();
    auto b = bar_construct(a, 4);
    for (int i = 0; i < b->cbar()->dim(); ++i) {
        if (b->layer(i) == 1) CHECK(b->mubar(i).empty());
        auto t0 = iterate_comult(*b, 0, i);
        CHECK(t0.size() == 1);
        CHECK(t0.begin()->first == std::vector<int>{i});
        auto tn = iterate_comult(*b, b->layer(i), i);
        CHECK(tn.empty());
    }
    int c = -1;
    for (int i = 0; i < b->cbar()->dim(); ++i)
        if (b->layer(i) == 3) { c = i; break; }
    REQUIRE(c >= 0);
    auto t2 = iterate_comult(*b, 2, c);
    CHECK(t2.size() == 1);
    CHECK(t2.begin()->first.size() == 3);
}

TEST_CASE("bar of a dg-algebra satisfies all bocs axioms; delta^2 = 0 iff Stasheff") {
    auto a = dg3();
    auto b = bar_construct(a, 4);
    CHECK(check_bocs_axioms(*b));
    CHECK(b->delta().after(b->delta()).is_zero());
    for (const auto& [rc, v] : b->delta().entries())
        if (b->layer(rc.second) == 1) CHECK(b->layer(rc.first) == 1);

    auto sp = a->space();
    auto sq = GradedSpace::tensor({sp, sp});
    auto bad = std::make_shared<AInfAlgebra>(sp, 2);
    HomMap m2(sq, sp, 0);
    Scalar one = Scalar::one(a->field());
    m2.set(sp->index_of("e"), sq->index_of("e|e"), one);
    m2.set(sp->index_of("x"), sq->index_of("x|e"), one);
    m2.set(sp->index_of("x"), sq->index_of("x|x"), one);
    bad->set_op(2, m2);
    CHECK_THROWS_AS(bar_construct(bad, 3), BocsError);
}

TEST_CASE("bar of the m3-only algebra passes the axioms") {
    auto a = m3_only();
    auto b = bar_construct(a, 4);
    CHECK(check_bocs_axioms(*b));
}

TEST_CASE("associative algebra in degree 1: delta nonzero, axioms hold") {
    Field F = Field::rationals();
    auto sp = GradedSpace::make({F, 1}, true, {{"p", 1, 0, 0}, {"q", 2, 0, 0}});
    auto a = std::make_shared<AInfAlgebra>(sp, 2);
    auto sq = GradedSpace::tensor({sp, sp});
    HomMap m2(sq, sp, 0);
    // p*p = q, everything else 0: associative since (pp)p = qp = 0 = p(pp)
    m2.set(sp->index_of("q"), sq->index_of("p|p"), Scalar::one(F));
    a->set_op(2, m2);
    REQUIRE(check_stasheff_all(*a));
    auto b = bar_construct(a, 3);
    CHECK(check_bocs_axioms(*b));
    CHECK(!b->delta().is_zero());
}

TEST_CASE("hand-authored triangular bocs; triangularity violations rejected") {
    Field F = Field::rationals();
    auto c = GradedSpace::make({F, 1}, true,
                               {{"g1", 0, 0, 0}, {"g2", 0, 0, 0}, {"h2", 1, 0, 0}});
    std::vector<int> lay(3);
    lay[c->index_of("g1")] = 1;
    lay[c->index_of("g2")] = 2;
    lay[c->index_of("h2")] = 2;
    auto b = std::make_shared<Bocs>(c, lay, 2);
    b->set_mubar_term(c->index_of("g2"), Scalar::one(F), c->index_of("g1"),
                      c->index_of("g1"));
    HomMap d(c, c, 1);
    d.set(c->index_of("h2"), c->index_of("g2"), Scalar::one(F));
    CHECK_NOTHROW(b->set_delta(d));
    CHECK(check_bocs_axioms(*b));
    CHECK_THROWS_AS(
        b->set_mubar_term(c->index_of("g2"), Scalar::one(F), c->index_of("g2"),
                          c->index_of("g1")),
        BocsError);
}

TEST_CASE("layer_split: kernel, complements and dimension bookkeeping") {
    auto a = dg3();
    auto b = bar_construct(a, 3);
    auto ls = layer_split(*b);
    const auto& c = *b->cbar();
    for (int lvl = 1; lvl <= b->levels(); ++lvl) {
        size_t at = 0;
        for (int i = 0; i < c.dim(); ++i)
            if (b->layer(i) == lvl) ++at;
        CHECK(at == ls.v[lvl - 1].size() + ls.w[lvl - 1].size());
        for (const auto& v : ls.v[lvl - 1]) {
            CHECK(vec_is_zero(b->delta().apply(v)));
            const auto& first = c.at(v.begin()->first);
            for (const auto& [i, s] : v) {
                CHECK(c.at(i).deg == first.deg);
                CHECK(c.at(i).lid == first.lid);
                CHECK(c.at(i).rid == first.rid);
            }
        }
    }
    auto sp = GradedSpace::make(qring(), true, {{"u", 0, 0, 0}});
    auto za = std::make_shared<AInfAlgebra>(sp, 1);
    auto zb = bar_construct(za, 3);
    auto zls = layer_split(*zb);
    for (int lvl = 1; lvl <= 3; ++lvl) CHECK(zls.w[lvl - 1].empty());
}

TEST_CASE("bocs morphisms: identity passes, broken square fails") {
    auto a = dg3();
    auto b = bar_construct(a, 3);
    auto id = BocsMorphism::identity(b);
    CHECK(check_bocs_morphism(id));
    BocsMorphism badm = id;
    int c2 = -1;
    for (int i = 0; i < b->cbar()->dim(); ++i)
        if (b->layer(i) == 2) { c2 = i; break; }
    REQUIRE(c2 >= 0);
    badm.map.set(c2, c2, Scalar(a->field(), 2));
    CHECK(!check_bocs_morphism(badm).ok);
}

TEST_CASE("zero homotopy relates equal morphisms") {
    auto a = dg3();
    auto b = bar_construct(a, 3);
    auto id = BocsMorphism::identity(b);
    BocsHomotopy hh{id, id, HomMap(b->cbar(), b->cbar(), -1)};
    CHECK(check_bocs_homotopy(hh));
}

TEST_CASE("hat translation round trip") {
    auto a = dg3();
    auto a1 = GradedSpace::shifted(a->space());
    for (int s = 1; s <= 2; ++s) {
        std::vector<SpacePtr> shf((size_t)s, a1);
        HomMap mh = hat_translate(a->m(s), shf, a1);
        CHECK(mh.deg() == 1);
        std::vector<SpacePtr> unshf((size_t)s, a->space());
        HomMap back = unhat_translate(mh, unshf, a->space());
        CHECK(back == a->m(s));
    }
}
