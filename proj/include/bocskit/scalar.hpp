#pragma once

#include "bocskit/error.hpp"

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace bocskit {

enum class FieldKind { Rational, Fp };

/* Descriptor of the ground field: Q, or F_p for prime p < 2^31. */
struct Field {
    FieldKind kind = FieldKind::Rational;
    long p = 0;

    static Field rationals() { return {FieldKind::Rational, 0}; }
    static Field fp(long p);

    bool operator==(const Field&) const = default;
    std::string str() const;
};

bool is_prime(long p);

/* Exact field element. Rationals are kept normalized by mpq_class;
 * F_p residues lie in [0, p). All arithmetic is exact. */
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(Field f) : f_(f) {}
    Scalar(Field f, long num, long den = 1);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, 1); }
    static Scalar from_mpq(Field f, const mpq_class& q);

    Field field() const { return f_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /* "p/q", "p", or "r mod p"; round-trips with parse(). */
    std::string str() const;
    static Scalar parse(Field f, const std::string& text);

    const mpq_class& rat() const { return q_; }
    long residue() const { return r_; }

private:
    void check_same(const Scalar& o) const;

    Field f_;
    mpq_class q_ = 0; // FieldKind::Rational
    long r_ = 0;      // FieldKind::Fp
};

inline Scalar sign_scalar(Field f, int parity) {
    return parity % 2 ? Scalar(f, -1) : Scalar(f, 1);
}

} // namespace bocskit
