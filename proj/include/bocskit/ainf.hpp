#pragma once

#include "bocskit/hommap.hpp"

namespace bocskit {

/* A_infinity-algebra over S: a graded S-S-bimodule A with operations
 * m_n : A^{(x)n} -> A of degree 2-n, truncated at arity_bound, subject to
 * the Stasheff identities S_n. */
class AInfAlgebra {
public:
    AInfAlgebra(SpacePtr space, int arity_bound);

    const SpacePtr& space() const { return space_; }
    int arity_bound() const { return arity_; }
    Field field() const { return space_->base().field; }

    SpacePtr power(int n) const; // A^{(x)n}, cached
    const HomMap& m(int n) const; // zero beyond arity_bound
    void set_op(int n, HomMap op);

private:
    SpacePtr space_;
    int arity_;
    std::vector<HomMap> ops_;
    mutable std::vector<SpacePtr> powers_;
    mutable std::map<int, HomMap> zeros_;
};

using AlgPtr = std::shared_ptr<const AInfAlgebra>;

/* Morphism of A_infinity-algebras: components f_n : A^{(x)n} -> B of degree
 * 1-n with Sigma_n = Sigma'_n. */
struct AlgMorphism {
    AlgPtr src, tgt;
    std::vector<HomMap> comps; // comps[n-1] = f_n; zero beyond the stored bound

    HomMap f(int n) const;
    int bound() const { return (int)comps.size(); }
    static AlgMorphism identity(const AlgPtr& a);
    static AlgMorphism zero(const AlgPtr& a, const AlgPtr& b);
    HomMap& slot(int n); // grows comps with zero maps up to n
    bool equal_upto(const AlgMorphism& o, int n) const;
};

/* Homotopy family between algebra morphisms: h_n : A^{(x)n} -> B, degree -n. */
struct AlgHomotopy {
    AlgPtr src, tgt;
    std::vector<HomMap> comps;

    HomMap h(int n) const;
    int bound() const { return (int)comps.size(); }
    HomMap& slot(int n);
};

/* sgn(i_1,...,i_r) = (r-1)(i_1-1) + (r-2)(i_2-1) + ... + (i_{r-1}-1), mod 2. */
int sgn_parity(const std::vector<int>& parts);

/* All ordered tuples of positive integers summing to n. */
std::vector<std::vector<int>> compositions(int n);

/* Stasheff defect Z_n = sum (-1)^{r+st} m_{r+1+t}(id^r (x) m_s (x) id^t). */
HomMap stasheff_defect(const AInfAlgebra& a, int n);
/* Primed defect Z'_n = sum (-1)^{rs+t} m_{r+1+t}(id^r (x) m_s (x) id^t). */
HomMap stasheff_defect_primed(const AInfAlgebra& a, int n);

CheckResult check_stasheff(const AInfAlgebra& a, int n);
CheckResult check_stasheff_all(const AInfAlgebra& a);

/* A' with m'_n = (-1)^{n(n-1)/2} m_n; verifies Z'_n = (-1)^{n(n-1)/2} Z_n
 * for all n <= 2*arity_bound and throws TranslationDefectMismatch if not. */
AInfAlgebra sign_translate(const AInfAlgebra& a);

/* Source-side sum Sigma_n and target-side sum Sigma'_n of the morphism
 * condition; the morphism holds iff they agree for all n. */
HomMap morphism_defect(const AlgMorphism& f, int n);
CheckResult check_alg_morphism(const AlgMorphism& f, int n);
CheckResult check_alg_morphism_all(const AlgMorphism& f);

/* Composite up to component level `upto` (defaults to max of the bounds). */
AlgMorphism compose_alg_morphisms(const AlgMorphism& g, const AlgMorphism& f, int upto = 0);

/* H(h)_n and H_{f,g}(h)_n of the algebra homotopy condition
 * f_n - g_n = H(h)_n + H_{f,g}(h)_n. */
HomMap homotopy_h_part(const AlgHomotopy& h, int n);
HomMap homotopy_fg_part(const AlgHomotopy& h, const AlgMorphism& f, const AlgMorphism& g,
                        int n);
CheckResult check_alg_homotopy(const AlgHomotopy& h, const AlgMorphism& f,
                               const AlgMorphism& g, int n);
CheckResult check_alg_homotopy_all(const AlgHomotopy& h, const AlgMorphism& f,
                                   const AlgMorphism& g);

/* h^(.) := H(h) + H_{f,g}(h) as a degree-0 family (the image of h under the
 * boundary of the homotopy relation). */
AlgMorphism homotopy_boundary(const AlgHomotopy& h, const AlgMorphism& f,
                              const AlgMorphism& g);

} // namespace bocskit
