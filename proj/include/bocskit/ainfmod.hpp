#pragma once

#include "bocskit/oracles.hpp"
#include "bocskit/twisted.hpp"

namespace bocskit {

/* Right A-infinity module over A: operations m^M_n : M (x) A^{(x)(n-1)} -> M
 * of degree 2-n, subject to Sigma_n^+ + Sigma_n^0 = 0. */
class AInfModule {
public:
    AInfModule(AlgPtr alg, SpacePtr m, int arity_bound);

    const AlgPtr& alg() const { return alg_; }
    const SpacePtr& space() const { return m_; }
    int arity_bound() const { return arity_; }
    Field field() const { return m_->base().field; }

    SpacePtr mpower(int k) const; // M (x) A^{(x)k}; k = 0 gives M
    const HomMap& op(int n) const;
    void set_op(int n, HomMap op);

private:
    AlgPtr alg_;
    SpacePtr m_;
    int arity_;
    std::vector<HomMap> ops_;
    mutable std::vector<SpacePtr> mpowers_;
    mutable std::map<int, HomMap> zeros_;
};

using ModPtr = std::shared_ptr<const AInfModule>;

/* Homogeneous degree-d morphism in GMod-A: components f_n of degree d+1-n. */
struct ModMorphism {
    ModPtr src, tgt;
    int deg = 0;
    std::vector<HomMap> comps;

    HomMap f(int n) const;
    HomMap& slot(int n);
    int bound() const { return (int)comps.size(); }
    static ModMorphism identity(const ModPtr& m);
    static ModMorphism zero(const ModPtr& a, const ModPtr& b, int deg);
    ModMorphism operator+(const ModMorphism& o) const;
    ModMorphism operator-(const ModMorphism& o) const;
    ModMorphism scaled(const Scalar& c) const;
    bool equal_upto(const ModMorphism& o, int n) const;
    bool zero_upto(int n) const;
};

/* the structure family m^M as a degree-1 endomorphism in GMod-A */
ModMorphism structure_family(const ModPtr& m);

CheckResult check_module(const AInfModule& m, int n);
CheckResult check_module_all(const AInfModule& m);

/* (g o f)_n = sum (-1)^{(|f|+r+1)s} g_{1+s}(f_r (x) id^{(x)s}) */
ModMorphism compose_mod(const ModMorphism& g, const ModMorphism& f, int upto = 0);
/* delta_inf(f)_n = sum (-1)^{|f|+r+st+1} f_{n-s+1}(id^r (x) m_s (x) id^t) */
ModMorphism delta_inf(const ModMorphism& f, int upto = 0);

/* degree-d module morphism condition, evaluated through the operator route
 * delta_inf(f) + m^N o f - (-1)^{|f|} f o m^M and through the three classical
 * sums; FormulationMismatch if the two routes ever disagree. */
CheckResult check_mod_morphism(const ModMorphism& f, int n);
CheckResult check_mod_morphism_all(const ModMorphism& f);

struct ModHomotopy {
    ModPtr src, tgt;
    std::vector<HomMap> comps; // h_n of degree -n

    HomMap h(int n) const;
    HomMap& slot(int n);
    int bound() const { return (int)comps.size(); }
};

/* f_n - g_n = H^(1) + H^(2) + H^(3), cross-checked against
 * f - g = delta_inf(h) + m^N o h + h o m^M. */
CheckResult check_mod_homotopy(const ModHomotopy& h, const ModMorphism& f,
                               const ModMorphism& g, int n);
CheckResult check_mod_homotopy_all(const ModHomotopy& h, const ModMorphism& f,
                                   const ModMorphism& g);

/* ---- the bridge G : GMod-A -> GMod-B_A ------------------------------- */

/* bar bocs compatible with this algebra (same shifted atom) */
bool bar_matches(const BocsPtr& b, const AInfAlgebra& a);

TwistedModule to_twisted(const AInfModule& m, const BocsPtr& bar);
AInfModule from_twisted(const TwistedModule& mu, const AlgPtr& alg, int arity_bound);
GModMorphism bridge_morphism(const ModMorphism& f, const BocsPtr& bar);
ModMorphism unbridge_morphism(const GModMorphism& f, const ModPtr& src,
                              const ModPtr& tgt);

/* ---- shift and J on the module side ----------------------------------- */

struct ModShift {
    ModPtr shifted;
    HomMap sigma; // M -> M[1]
};
ModShift shift_mod(const ModPtr& m);

struct ModJ {
    ModPtr j;
    ModShift sh;
    HomMap in1, in2, pr1, pr2; // strict summand maps on the underlying spaces
    ModMorphism alpha, beta;   // strict conflation maps
};
ModJ jfun_mod(const ModPtr& m);

/* ---- restriction along A-infinity morphisms --------------------------- */

/* Psi(phi) : B_A -> B_B with Psi(phi)_n = sum phi_{i_1} (x) ... (x) phi_{i_r}
 * (hat-translated); verified to be a morphism of dg bocses. */
BocsMorphism psi_of_morphism(const AlgMorphism& phi, const BocsPtr& bar_src,
                             const BocsPtr& bar_tgt);

/* Delta(h) for a degree-d component family {p_n : A^{(x)n} -> B} of degrees
 * d+1-n: the Psi(f)-Psi(g)-coderivation with word components
 * phi_{i_1} (x) .. (x) p_s (x) .. (x) psi_{j_t} (hat-translated). */
HomMap delta_coderivation_family(const std::vector<HomMap>& comps, int d,
                                 const AlgMorphism& f, const AlgMorphism& g,
                                 const BocsPtr& bar_src, const BocsPtr& bar_tgt);
HomMap delta_coderivation(const AlgHomotopy& h, const AlgMorphism& f,
                          const AlgMorphism& g, const BocsPtr& bar_src,
                          const BocsPtr& bar_tgt);

/* phi -(x)- psi coderivation condition for a candidate xi (no boundary part) */
CheckResult check_phi_psi_coderivation(const BocsMorphism& phi, const BocsMorphism& psi,
                                       const HomMap& xi);

/* R_phi on modules and morphisms over the target algebra. The morphism
 * version stores components up to `upto` (0 = the full support bound capped
 * at the checking horizon; pass bar level + 1 for bridge work). */
AInfModule restrict_mod(const AlgMorphism& phi, const AInfModule& m);
ModMorphism restrict_mod_morphism(const AlgMorphism& phi, const ModMorphism& f,
                                  const ModPtr& rsrc, const ModPtr& rtgt,
                                  int upto = 0);

/* ---- homology ---------------------------------------------------------- */

std::map<std::pair<int, int>, int> module_homology(const AInfModule& m);
CheckResult is_quasi_iso(const ModMorphism& f);

/* homotopy inverse through the bridge: cone + nullhomotopy on the twisted
 * side, translated back to module data. */
struct ModHomotopyInverse {
    ModMorphism g;
    ModHomotopy h_fg, h_gf;
};
ModHomotopyInverse mod_homotopy_inverse(const ModMorphism& f, const BocsPtr& bar);

/* ---- oracle helpers ---------------------------------------------------- */

/* the regular module A over itself */
ModPtr regular_module(const AlgPtr& a);
/* random exactly-valid module: transported regular/complex pieces */
ModPtr gen_module(Rng& rng, const AlgPtr& a, int max_dim);
/* random strict-plus-solved morphism between a module and its transport */
struct GenModMor {
    ModPtr src, tgt;
    ModMorphism f;
};
GenModMor gen_mod_morphism(Rng& rng, const ModPtr& m);
/* random valid A-infinity algebra morphism: transport along a basis change,
 * higher components solved level by level (GenerationFailed on obstruction) */
AlgMorphism gen_alg_morphism(Rng& rng, const AlgPtr& a);
/* homotopic pair (f, g, h) built by perturbing f with a random h family */
struct GenHomotopicPair {
    AlgMorphism f, g;
    AlgHomotopy h;
};
GenHomotopicPair gen_homotopic_pair(Rng& rng, const AlgPtr& a);

} // namespace bocskit
