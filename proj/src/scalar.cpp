#include "bocskit/scalar.hpp"

#include <cctype>

namespace bocskit {

const char* err_name(Err e) {
    switch (e) {
        case Err::DivisionByZero: return "DivisionByZero";
        case Err::FieldMismatch: return "FieldMismatch";
        case Err::IdempotentMismatch: return "IdempotentMismatch";
        case Err::EmptyPartition: return "EmptyPartition";
        case Err::TranslationDefectMismatch: return "TranslationDefectMismatch";
        case Err::AlgebraMismatch: return "AlgebraMismatch";
        case Err::StasheffViolation: return "StasheffViolation";
        case Err::TriangularityViolation: return "TriangularityViolation";
        case Err::TruncationMismatch: return "TruncationMismatch";
        case Err::ModuleMismatch: return "ModuleMismatch";
        case Err::NotInvertible: return "NotInvertible";
        case Err::NotABocsMorphism: return "NotABocsMorphism";
        case Err::NotAHomotopy: return "NotAHomotopy";
        case Err::NotIdempotent: return "NotIdempotent";
        case Err::NotAcyclic: return "NotAcyclic";
        case Err::ChainMapDefect: return "ChainMapDefect";
        case Err::NotComposableToZero: return "NotComposableToZero";
        case Err::NotExactOnComponents: return "NotExactOnComponents";
        case Err::NotQuasiIso: return "NotQuasiIso";
        case Err::NotAnAlgMorphism: return "NotAnAlgMorphism";
        case Err::NotAComplex: return "NotAComplex";
        case Err::TruncationTooSmall: return "TruncationTooSmall";
        case Err::FormulationMismatch: return "FormulationMismatch";
        case Err::GenerationFailed: return "GenerationFailed";
        case Err::ParseError: return "ParseError";
        case Err::UnknownTarget: return "UnknownTarget";
    }
    return "UnknownError";
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Field Field::fp(long p) {
    if (p < 2 || p > (1L << 31) || !is_prime(p))
        throw BocsError(Err::ParseError, "not a prime <= 2^31: " + std::to_string(p));
    return {FieldKind::Fp, p};
}

std::string Field::str() const {
    return kind == FieldKind::Rational ? "q" : "fp:" + std::to_string(p);
}

static long mod_norm(long v, long p) {
    long r = v % p;
    return r < 0 ? r + p : r;
}

/* a^(p-2) mod p */
static long mod_inv(long a, long p) {
    if (a % p == 0) throw BocsError(Err::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
    long r = 1, b = mod_norm(a, p), e = p - 2;
    while (e) {
        if (e & 1) r = (long)((__int128)r * b % p);
        b = (long)((__int128)b * b % p);
        e >>= 1;
    }
    return r;
}

Scalar::Scalar(Field f, long num, long den) : f_(f) {
    if (den == 0) throw BocsError(Err::DivisionByZero, "zero denominator");
    if (f_.kind == FieldKind::Rational) {
        q_ = mpq_class(num, den);
        q_.canonicalize();
    } else {
        r_ = (long)((__int128)mod_norm(num, f_.p) * mod_inv(den, f_.p) % f_.p);
    }
}

Scalar Scalar::from_mpq(Field f, const mpq_class& q) {
    Scalar s(f);
    mpq_class c = q;
    c.canonicalize();
    if (f.kind == FieldKind::Rational) {
        s.q_ = c;
    } else {
        mpz_class num = c.get_num() % f.p, den = c.get_den() % f.p;
        s.r_ = (long)((__int128)mod_norm(num.get_si(), f.p) * mod_inv(den.get_si(), f.p) % f.p);
    }
    return s;
}

void Scalar::check_same(const Scalar& o) const {
    if (!(f_ == o.f_)) throw BocsError(Err::FieldMismatch, f_.str() + " vs " + o.f_.str());
}

bool Scalar::is_zero() const {
    return f_.kind == FieldKind::Rational ? q_ == 0 : r_ == 0;
}

bool Scalar::is_one() const {
    return f_.kind == FieldKind::Rational ? q_ == 1 : r_ == 1;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar s(f_);
    if (f_.kind == FieldKind::Rational) s.q_ = q_ + o.q_;
    else s.r_ = mod_norm(r_ + o.r_, f_.p);
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(o);
    Scalar s(f_);
    if (f_.kind == FieldKind::Rational) s.q_ = q_ - o.q_;
    else s.r_ = mod_norm(r_ - o.r_, f_.p);
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    Scalar s(f_);
    if (f_.kind == FieldKind::Rational) s.q_ = q_ * o.q_;
    else s.r_ = (long)((__int128)r_ * o.r_ % f_.p);
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_same(o);
    if (o.is_zero()) throw BocsError(Err::DivisionByZero, "division by zero");
    Scalar s(f_);
    if (f_.kind == FieldKind::Rational) s.q_ = q_ / o.q_;
    else s.r_ = (long)((__int128)r_ * mod_inv(o.r_, f_.p) % f_.p);
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s(f_);
    if (f_.kind == FieldKind::Rational) s.q_ = -q_;
    else s.r_ = mod_norm(-r_, f_.p);
    return s;
}

Scalar Scalar::inverse() const {
    return Scalar::one(f_) / *this;
}

bool Scalar::operator==(const Scalar& o) const {
    check_same(o);
    return f_.kind == FieldKind::Rational ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const {
    if (f_.kind == FieldKind::Rational) return q_.get_str();
    return std::to_string(r_) + " mod " + std::to_string(f_.p);
}

Scalar Scalar::parse(Field f, const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace((unsigned char)c)) t += c;
    auto mod_pos = t.find("mod");
    try {
        if (mod_pos != std::string::npos) {
            long r = std::stol(t.substr(0, mod_pos));
            long p = std::stol(t.substr(mod_pos + 3));
            if (f.kind != FieldKind::Fp || f.p != p)
                throw BocsError(Err::FieldMismatch, "scalar '" + text + "' not in " + f.str());
            return Scalar(f, r);
        }
        mpq_class q(t); // handles "p/q" and "p", arbitrary precision
        if (q.get_den() == 0) throw BocsError(Err::DivisionByZero, "zero denominator in '" + text + "'");
        return from_mpq(f, q);
    } catch (const BocsError&) {
        throw;
    } catch (const std::exception&) {
        throw BocsError(Err::ParseError, "bad scalar literal '" + text + "'");
    }
}

} // namespace bocskit
