#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bocskit/io.hpp"
#include "bocskit/oracles.hpp"
#include "helpers.hpp"

#include <cstdlib>
#include <fstream>

using namespace bocskit;
using namespace testutil;

namespace {

Json fixture_doc() {
    Json doc;
    doc["format"] = 1;
    doc["field"] = "q";
    doc["base_ring"] = 1;
    doc["level"] = 3;
    auto a = dg3();
    put_structure(doc, "A", algebra_to_json(*a));
    Json bar;
    bar["type"] = "bar_bocs";
    bar["algebra"] = "A";
    bar["level"] = 3;
    put_structure(doc, "B", bar);
    return doc;
}

} // namespace

TEST_CASE("workspace load: algebra, bar bocs, and structural failures") {
    Json doc = fixture_doc();
    Workspace w = load_workspace(doc);
    REQUIRE(w.algebras.count("A"));
    REQUIRE(w.bocses.count("B"));
    CHECK(check_stasheff_all(*w.algebras.at("A")));
    CHECK(w.bocses.at("B")->levels() == 3);
    CHECK(w.type_of("A") == "ainf_algebra");

    Json bad = doc;
    bad["format"] = 99;
    CHECK_THROWS_AS(load_workspace(bad), BocsError);
    Json bad2 = doc;
    bad2["field"] = "fp:15"; // not prime
    CHECK_THROWS_AS(load_workspace(bad2), BocsError);
}

TEST_CASE("algebra serialization round-trips bit-exactly") {
    auto a = dg3();
    Json j = algebra_to_json(*a);
    Json doc;
    doc["format"] = 1;
    doc["field"] = "q";
    doc["base_ring"] = 1;
    put_structure(doc, "A", j);
    Workspace w = load_workspace(doc);
    const auto& b = *w.algebras.at("A");
    for (int n = 1; n <= a->arity_bound(); ++n) CHECK(b.m(n) == a->m(n));
    // deterministic dump
    CHECK(dump_workspace(doc) == dump_workspace(doc));
}

TEST_CASE("twisted module and morphism serialization round trip") {
    bocskit::Rng rng(88);
    auto a = dg3();
    auto bar = bar_construct(a, 3);
    auto sp = gen_space(rng, a->space()->base(), 3, -1, 1, false, "m");
    TwistedModule mu = gen_mc_random(rng, bar, sp, 60);

    Json doc = fixture_doc();
    put_structure(doc, "M", twisted_to_json(mu, "B"));
    Workspace w = load_workspace(doc);
    REQUIRE(w.twisted.count("M"));
    CHECK(check_mc(w.twisted.at("M").mu));
    CHECK(w.twisted.at("M").mu.u == mu.u);
}

TEST_CASE("corrupted sign in a stored morphism is caught with a witness") {
    auto a = dg3();
    Json doc = fixture_doc();
    // identity morphism A -> A with one sign flipped in f1
    Json fm;
    fm["type"] = "alg_morphism";
    fm["source"] = "A";
    fm["target"] = "A";
    Json comps;
    Json f1 = Json::array();
    for (const auto& b : a->space()->basis())
        f1.push_back(Json{b.label, Json::array({b.label}),
                          b.label == "x" ? "-1" : "1"});
    comps["1"] = f1;
    fm["comps"] = comps;
    put_structure(doc, "f", fm);
    Workspace w = load_workspace(doc);
    auto r = check_alg_morphism_all(w.alg_morphisms.at("f").f);
    CHECK(!r.ok);
    CHECK(!r.witness.empty());
}

#ifdef BOCSKIT_CLI_PATH
TEST_CASE("command line: check and construct round trip") {
    std::string cli = BOCSKIT_CLI_PATH;
    {
        std::ofstream out("io_fixture.json");
        out << dump_workspace(fixture_doc());
    }
    CHECK(std::system((cli + " check --input io_fixture.json --target A --what stasheff"
                             " > io_check.txt")
                          .c_str()) == 0);
    // construct the bar bocs, then check its axioms from the written file
    CHECK(std::system((cli + " construct --input io_fixture.json --op bar --target A"
                             " --name B2 --level 3 --output io_out.json")
                          .c_str()) == 0);
    CHECK(std::system((cli + " check --input io_out.json --target B2 --what bocs"
                             " > io_check2.txt")
                          .c_str()) == 0);
    // deterministic construct output
    CHECK(std::system((cli + " construct --input io_fixture.json --op bar --target A"
                             " --name B2 --level 3 --output io_out2.json")
                          .c_str()) == 0);
    std::ifstream a1("io_out.json"), a2("io_out2.json");
    std::string s1((std::istreambuf_iterator<char>(a1)),
                   std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(a2)),
                   std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    // unknown target exits with 2
    int rc = std::system(
        (cli + " check --input io_fixture.json --target nosuch --what stasheff"
               " 2> /dev/null")
            .c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
#endif
