#pragma once

// Shared fixtures: small exactly-verified algebras and deterministic rng.

#include "bocskit/ainf.hpp"

namespace testutil {

using namespace bocskit;

inline BaseRing qring(int n = 1) { return {Field::rationals(), n}; }

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed ? seed : 1) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    long pick(long lo, long hi) { return lo + (long)(next() % (uint64_t)(hi - lo + 1)); }
    Scalar scalar(Field f, long span = 4) {
        long num = pick(-span, span);
        if (f.kind == FieldKind::Rational) return Scalar(f, num, pick(1, 3));
        return Scalar(f, num);
    }
};

/* k[x]/(x^2) with a unit: basis e, x in degree 0; associative, m_2 only. */
inline std::shared_ptr<AInfAlgebra> dual_numbers(Field F = Field::rationals()) {
    auto sp = GradedSpace::make({F, 1}, true, {{"e", 0, 0, 0}, {"x", 0, 0, 0}});
    auto a = std::make_shared<AInfAlgebra>(sp, 2);
    auto sq = GradedSpace::tensor({sp, sp});
    HomMap m2(sq, sp, 0);
    Scalar one = Scalar::one(F);
    int e = sp->index_of("e"), x = sp->index_of("x");
    m2.set(e, sq->index_of("e|e"), one);
    m2.set(x, sq->index_of("e|x"), one);
    m2.set(x, sq->index_of("x|e"), one);
    a->set_op(2, m2);
    return a;
}

/* Three-dimensional dg-algebra: e unit-like, x deg 0, y deg 1, m1(x) = y,
 * xx = xy = yx = yy = 0. Satisfies Leibniz and associativity. */
inline std::shared_ptr<AInfAlgebra> dg3(Field F = Field::rationals()) {
    auto sp = GradedSpace::make({F, 1}, true,
                                {{"e", 0, 0, 0}, {"x", 0, 0, 0}, {"y", 1, 0, 0}});
    auto a = std::make_shared<AInfAlgebra>(sp, 2);
    Scalar one = Scalar::one(F);
    int e = sp->index_of("e"), x = sp->index_of("x"), y = sp->index_of("y");
    HomMap m1(sp, sp, 1);
    m1.set(y, x, one);
    auto sq = GradedSpace::tensor({sp, sp});
    HomMap m2(sq, sp, 0);
    m2.set(e, sq->index_of("e|e"), one);
    m2.set(x, sq->index_of("e|x"), one);
    m2.set(x, sq->index_of("x|e"), one);
    m2.set(y, sq->index_of("e|y"), one);
    m2.set(y, sq->index_of("y|e"), one);
    a->set_op(1, m1);
    a->set_op(2, m2);
    return a;
}

/* Two-dimensional A-infinity algebra with only m_3: m_3(x,x,x) = y,
 * |x| = 0, |y| = -1. All Stasheff identities hold. */
inline std::shared_ptr<AInfAlgebra> m3_only(Field F = Field::rationals()) {
    auto sp = GradedSpace::make({F, 1}, true, {{"x", 0, 0, 0}, {"y", -1, 0, 0}});
    auto a = std::make_shared<AInfAlgebra>(sp, 3);
    auto cb = a->power(3);
    HomMap m3(cb, sp, -1);
    m3.set(sp->index_of("y"), cb->index_of("x|x|x"), Scalar::one(F));
    a->set_op(3, m3);
    return a;
}

} // namespace testutil
