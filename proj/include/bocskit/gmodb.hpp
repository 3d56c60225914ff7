#pragma once

#include "bocskit/bocs.hpp"

namespace bocskit {

/* Morphism M -> N of graded right B-modules in component form:
 * f0 : M -> N of degree d, and per basis element c of Cbar a k-linear block
 * f1(c) : M e_{lid c} -> N e_{rid c} of degree d + |c|. The M (x) C view
 * f(m (x) c) = f1(c)[m], f(m (x) 1) = f0(m) is computed on demand. */
class GModMorphism {
public:
    GModMorphism() = default;
    GModMorphism(BocsPtr b, SpacePtr dom, SpacePtr cod, int deg);

    const BocsPtr& bocs() const { return bocs_; }
    const SpacePtr& dom() const { return dom_; }
    const SpacePtr& cod() const { return cod_; }
    int deg() const { return deg_; }
    Field field() const { return dom_->base().field; }

    const HomMap& f0() const { return f0_; }
    void set_f0(HomMap m);
    HomMap f1(int c) const; // zero block if absent
    void set_f1(int c, HomMap m);
    void add_f1(int c, const HomMap& m);
    const std::map<int, HomMap>& f1_blocks() const { return f1_; }
    bool f1_is_zero() const;
    bool is_zero() const { return f0_.is_zero() && f1_is_zero(); }

    GModMorphism operator+(const GModMorphism& o) const;
    GModMorphism operator-(const GModMorphism& o) const;
    GModMorphism operator-() const;
    GModMorphism scaled(const Scalar& c) const;
    bool operator==(const GModMorphism& o) const;

    /* f(m (x) c); c = -1 stands for the counit slot 1 in C = S (+) Cbar. */
    SparseVec eval(int m, int c) const;

    std::string describe() const;

private:
    HomMap zero_block(int c) const;
    BocsPtr bocs_;
    SpacePtr dom_, cod_;
    int deg_ = 0;
    HomMap f0_;
    std::map<int, HomMap> f1_;
};

/* identity (id_M, 0) */
GModMorphism gmod_identity(const BocsPtr& b, const SpacePtr& m);
/* canonical embedding L(h) = (h, 0) of a GMod-S morphism */
GModMorphism embed(const BocsPtr& b, const HomMap& h);

/* composition g*f: (g*f)0 = g0 f0,
 * (g*f)1(c) = g1(c) f0 + g0 f1(c) + sum g1(c2) f1(c1) over mubar(c). */
GModMorphism compose(const GModMorphism& g, const GModMorphism& f);

/* differential: hat_delta(f)0 = 0,
 * hat_delta(f)1(c)[m] = (-1)^{|f|+|m|+1} f1(delta c)[m]. */
GModMorphism hat_delta(const GModMorphism& f);

bool f0_invertible(const GModMorphism& f);

/* two-sided inverse of a degree-0 morphism with invertible first component,
 * via the terminating geometric series; throws NotInvertible otherwise. */
GModMorphism invert(const GModMorphism& f);

/* sum_{n>=1} (-1)^n u^{*n} for u with u0 = 0 (locally nilpotent, terminates
 * at the bocs level count). */
GModMorphism alternating_geometric_series(const GModMorphism& u);

/* restriction R_psi(f) = f(id (x) psi) along a bocs morphism; verifies psi. */
GModMorphism restrict_along(const BocsMorphism& psi, const GModMorphism& f);
GModMorphism restrict_along_unchecked(const BocsMorphism& psi, const GModMorphism& f);

/* R_h(u) = (-1)^{|u|} u(id (x) h) along a bocs homotopy; verifies h. */
GModMorphism restrict_homotopy(const BocsHomotopy& h, const GModMorphism& u);
GModMorphism restrict_homotopy_unchecked(const BocsPtr& src, const HomMap& h,
                                         const GModMorphism& u);

/* direct sums with relabelled summands ("0:" / "1:") */
struct SumSpace {
    SpacePtr sum;
    HomMap in1, in2; // summand -> sum
    HomMap pr1, pr2; // sum -> summand
};
SumSpace direct_sum(const SpacePtr& a, const SpacePtr& b);

} // namespace bocskit
