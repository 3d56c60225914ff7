#pragma once

#include "bocskit/gmodb.hpp"

namespace bocskit {

/* Twisted graded B-module: (M, u) with |u| = 1 and the Maurer-Cartan
 * equation hat_delta(u) + u*u = 0 on all stored layers. */
struct TwistedModule {
    BocsPtr bocs;
    SpacePtr m;
    GModMorphism u;

    static TwistedModule make(const BocsPtr& b, const SpacePtr& m, GModMorphism u);
};

CheckResult check_mc(const TwistedModule& mu);
/* hat_delta(f) + v*f - (-1)^{|f|} f*u = 0 */
CheckResult check_twisted_morphism(const GModMorphism& f, const TwistedModule& src,
                                   const TwistedModule& tgt);
/* f - g = hat_delta(h) + v*h + h*u for degree-0 f, g and |h| = -1 */
CheckResult check_homotopy(const GModMorphism& h, const GModMorphism& f,
                           const GModMorphism& g, const TwistedModule& src,
                           const TwistedModule& tgt);

/* direct sum (M1 (+) M2, diag(u1, u2)) with the strict injections/projections */
struct TwistedSum {
    TwistedModule sum;
    GModMorphism in1, in2, pr1, pr2;
};
TwistedSum twisted_direct_sum(const TwistedModule& a, const TwistedModule& b);

/* unique v with h : (M,u) -> (N,v) an isomorphism in TGMod-B:
 * v = (-1)^{|h|} h*u*h^{-1} - hat_delta(h)*h^{-1} */
TwistedModule transport(const GModMorphism& h, const TwistedModule& mu);

/* shift T(M,u) = (M[1], -u[1]); carries the canonical sigma along */
struct ShiftData {
    TwistedModule shifted;
    GModMorphism sigma;     // (M,u) -> T(M,u), degree -1, strict
    GModMorphism sigma_inv; // degree +1
};
ShiftData shift_twisted(const TwistedModule& mu);
/* T(f) = sigma_N * f * sigma_M^{-1} */
GModMorphism shift_morphism(const ShiftData& sm, const ShiftData& sn,
                            const GModMorphism& f);

/* J(M,u) = (M (+) M[1], [[u, sigma^{-1}], [0, u[1]]]), with the natural
 * conflation  M --alpha--> J(M) --beta--> T(M). */
struct JData {
    TwistedModule j;
    ShiftData sh;
    GModMorphism in1, in2, pr1, pr2; // strict summand maps (not twisted unless noted)
    GModMorphism alpha;              // = eta1^{-1}(I_M), equals (I,0)^t
    GModMorphism beta;               // = eta2^{-1}(I_{M[1]}), equals (0,I)
};
JData jfun(const TwistedModule& mu);

/* eta_1 completion: f1 : M -> N lifts to (f1, f2)^t : (M,u) -> J(N,v) */
GModMorphism eta1_complete(const GModMorphism& f1, const TwistedModule& mu,
                           const TwistedModule& nv, const JData& jn);
GModMorphism eta1_extract(const JData& jn, const GModMorphism& f); // = f1
/* eta_2 completion: g2 : M[1] -> N lifts to (g1, g2) : J(M,u) -> (N,v) */
GModMorphism eta2_complete(const GModMorphism& g2, const TwistedModule& mu,
                           const TwistedModule& nv, const JData& jm);
GModMorphism eta2_extract(const JData& jm, const GModMorphism& g); // = g2

/* null-homotopic f factors through J: h : J(M,u) -> (N,v) with h*alpha = f */
GModMorphism factor_through_j(const GModMorphism& f, const GModMorphism& witness,
                              const TwistedModule& mu, const TwistedModule& nv,
                              const JData& jm);
/* converse: extract a null-homotopy witness from a factorization */
GModMorphism witness_from_factorization(const GModMorphism& through_j,
                                        const JData& jm);

/* homology of the underlying complex (M, u0), per (degree, idempotent) */
std::map<std::pair<int, int>, int> complex_homology(const HomMap& u0);
CheckResult check_acyclic(const HomMap& u0);
/* does f0 induce isomorphisms on homology in every degree? */
CheckResult quasi_iso_check(const HomMap& f0, const HomMap& uM, const HomMap& uN);

/* contraction h with I = hat_delta(h) + u*h + h*u, built layer by layer;
 * requires (M, u0) acyclic (NotAcyclic otherwise). */
GModMorphism nullhomotopy(const TwistedModule& mu);

/* splitting of a twisted idempotent e = e*e */
struct SplitIdem {
    GModMorphism iso;     // h : (M,u) -> (M1 (+) M2, diag(v1,v2))
    GModMorphism iso_inv;
    TwistedModule part1, part2; // e-image and complement
    TwistedSum sum;
};
SplitIdem split_idempotent(const GModMorphism& e, const TwistedModule& mu);

/* conflation straightening: h with (h*f)^1 = 0, (g*h^{-1})^1 = 0 and the
 * transported middle structure */
struct Straightened {
    GModMorphism h, h_inv; // automorphism of E
    TwistedModule middle;  // (E, u'_E)
    GModMorphism left;     // h*f, strict
    GModMorphism right;    // g*h^{-1}, strict
};
Straightened straighten_conflation(const GModMorphism& f, const GModMorphism& g,
                                   const TwistedModule& mu, const TwistedModule& ev,
                                   const TwistedModule& nw);

/* mapping cone C_f = (M[1] (+) N, [[-u_M[1], 0], [f sigma^{-1}, u_N]]) with
 * the conflation N -> C_f -> M[1]. */
struct ConeData {
    TwistedModule cone;
    ShiftData sh;        // shift data of (M, u_M)
    GModMorphism into;   // N -> C_f, strict inclusion
    GModMorphism onto;   // C_f -> M[1], strict projection
    GModMorphism in1, in2, pr1, pr2;
};
ConeData cone(const GModMorphism& f, const TwistedModule& mu, const TwistedModule& nv);

/* homotopy inverse of a morphism whose first component is a quasi-isomorphism */
struct HomotopyInverse {
    GModMorphism g;    // (N,v) -> (M,u)
    GModMorphism h_fg; // homotopy f*g -> I_N
    GModMorphism h_gf; // homotopy g*f -> I_M
};
HomotopyInverse homotopy_inverse(const GModMorphism& f, const TwistedModule& mu,
                                 const TwistedModule& nv);

/* eta_{(M,u)} = I_M + R_h(u) : R_phi(M,u) -> R_psi(M,u), an isomorphism with
 * identity first component; verified to be a twisted morphism. */
GModMorphism restriction_equivalence_witness(const BocsHomotopy& hh,
                                             const TwistedModule& mu);
/* naturality defect D = eta_N * R_phi(f) - R_psi(f) * eta_M together with its
 * explicit null-homotopy witness R_h(f); the check is run before returning */
struct NaturalityData {
    GModMorphism defect;
    GModMorphism witness;
};
NaturalityData restriction_naturality(const BocsHomotopy& hh, const GModMorphism& f,
                                      const TwistedModule& mu, const TwistedModule& nv);

/* restriction of twisted modules along a bocs morphism */
TwistedModule restrict_twisted(const BocsMorphism& psi, const TwistedModule& mu);

} // namespace bocskit
