#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bocskit/scalar.hpp"

using namespace bocskit;

TEST_CASE("rational arithmetic is exact and normalized") {
    Field Q = Field::rationals();
    CHECK(Scalar(Q, 1, 2) + Scalar(Q, 1, 3) == Scalar(Q, 5, 6));
    CHECK(Scalar(Q, 2, 4) == Scalar(Q, 1, 2));
    CHECK(Scalar(Q, 2, 4).str() == "1/2");
    CHECK((Scalar(Q, 7) * Scalar(Q, 0)).is_zero());
    CHECK(Scalar(Q, -3, 6).str() == "-1/2");
}

TEST_CASE("prime field arithmetic") {
    Field F7 = Field::fp(7);
    CHECK(Scalar(F7, 3) * Scalar(F7, 5) == Scalar(F7, 1));
    CHECK(Scalar(F7, 3).inverse() == Scalar(F7, 5));
    CHECK((Scalar(F7, 4) + Scalar(F7, 3)).is_zero());
    CHECK_THROWS_AS(Scalar(F7, 1) / Scalar(F7, 0), BocsError);
    CHECK_THROWS_AS(Field::fp(6), BocsError);
}

TEST_CASE("field mismatch is rejected") {
    CHECK_THROWS_AS(Scalar(Field::rationals(), 1) + Scalar(Field::fp(5), 1), BocsError);
}

TEST_CASE("parse/print round trip") {
    Field Q = Field::rationals();
    Field F11 = Field::fp(11);
    for (const char* s : {"0", "5", "-3", "1/2", "-7/3", "22/7"}) {
        Scalar v = Scalar::parse(Q, s);
        CHECK(Scalar::parse(Q, v.str()) == v);
    }
    Scalar r = Scalar::parse(F11, "9 mod 11");
    CHECK(r == Scalar(F11, -2));
    CHECK(Scalar::parse(F11, r.str()) == r);
    CHECK(Scalar::parse(F11, "1/2") == Scalar(F11, 6));
    CHECK_THROWS_AS(Scalar::parse(Q, "2 mod 7"), BocsError);
    CHECK_THROWS_AS(Scalar::parse(Q, "abc"), BocsError);
}

TEST_CASE("field axioms on deterministic samples") {
    for (Field F : {Field::rationals(), Field::fp(10007)}) {
        long seed = 12345;
        auto next = [&seed]() { return seed = (seed * 1103515245 + 12345) % 1000; };
        for (int i = 0; i < 200; ++i) {
            Scalar a(F, next() - 500, 1 + next() % 40);
            Scalar b(F, next() - 500, 1 + next() % 40);
            Scalar c(F, next() - 500, 1 + next() % 40);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(F));
        }
    }
}
