#pragma once

#include "bocskit/twisted.hpp"

namespace bocskit {

/* Deterministic generation parameters. Dimensions stay small so that
 * brute-force expansion over all basis tensors is feasible. */
struct GenSpec {
    uint64_t seed = 1;
    Field field = Field::rationals();
    int idempotents = 1;
    int max_dim = 6;
    int arity_bound = 3;
    int level = 4;
    int density_pct = 60;
};

/* xorshift64; self-contained so results are reproducible across platforms. */
class Rng {
public:
    explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        s_ ^= s_ << 13;
        s_ ^= s_ >> 7;
        s_ ^= s_ << 17;
        return s_;
    }
    long pick(long lo, long hi) { return lo + (long)(next() % (uint64_t)(hi - lo + 1)); }
    bool chance(int pct) { return pick(0, 99) < pct; }
    Scalar scalar(Field f, long span = 4) {
        long num = pick(-span, span);
        if (f.kind == FieldKind::Rational) return Scalar(f, num, pick(1, 3));
        return Scalar(f, num);
    }
    Scalar nonzero_scalar(Field f, long span = 4) {
        Scalar s = scalar(f, span);
        while (s.is_zero()) s = scalar(f, span);
        return s;
    }

private:
    uint64_t s_;
};

SpacePtr gen_space(Rng& rng, const BaseRing& base, int dim, int min_deg, int max_deg,
                   bool bimodule, const std::string& prefix);

/* Random block-invertible degree-0 map M -> M. */
HomMap gen_invertible_map(Rng& rng, const SpacePtr& m);

/* Random degree-1 map with square zero (staircase construction). */
HomMap gen_square_zero(Rng& rng, const SpacePtr& m, int density_pct);

/* A_infinity-algebras produced by transporting exactly-verified seed
 * structures along random basis changes; optional m3 solved against the
 * linear Stasheff constraints. Always passes check_stasheff (closed loop);
 * throws GenerationFailed if the seed family cannot be realized. */
AlgPtr gen_dg_algebra(const GenSpec& spec);

/* transport of structure along a degree-0 bimodule isomorphism */
AlgPtr transport_algebra(const AlgPtr& a, const HomMap& p);

/* Random morphism in GMod-B between M and N with the given degree. */
GModMorphism gen_gmod_morphism(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                               const SpacePtr& n, int deg, int density_pct);
/* Random degree-0 automorphism of M in GMod-B (invertible f0 plus noise). */
GModMorphism gen_gmod_automorphism(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                                   int density_pct);

/* contractible complex: paired basis b_i -> b'_i with the identity matrix */
std::pair<SpacePtr, HomMap> gen_contractible_complex(Rng& rng, const BaseRing& base,
                                                     int pairs, int min_deg, int max_deg,
                                                     const std::string& prefix);

/* extend a square-zero u0 to a full Maurer-Cartan element, solving the
 * layer-lvl component equations as exact linear systems (the quadratic term
 * only involves lower layers by triangularity); GenerationFailed if some
 * layer system is inconsistent. */
TwistedModule gen_mc(Rng& rng, const BocsPtr& b, const SpacePtr& m, const HomMap& u0,
                     int density_pct);
/* random square-zero u0 plus layerwise extension (with retries) */
TwistedModule gen_mc_random(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                            int density_pct);
/* acyclic underlying complex, then extended and transported */
TwistedModule gen_acyclic_twisted(Rng& rng, const BocsPtr& b, int pairs,
                                  int density_pct);

/* idempotent conjugated from diag(I,0) on a twisted direct sum */
struct GenIdem {
    TwistedModule total;
    GModMorphism e;
};
GenIdem gen_twisted_idempotent(Rng& rng, const BocsPtr& b, int density_pct);

/* componentwise short-exact composable pair with g*f = 0 */
struct GenConf {
    TwistedModule sub, total, quot;
    GModMorphism f, g;
};
GenConf gen_conflation(Rng& rng, const BocsPtr& b, int density_pct);

/* quasi-isomorphism: projection off a contractible summand, transported */
struct GenQI {
    TwistedModule src, tgt;
    GModMorphism f;
};
GenQI gen_quasi_iso(Rng& rng, const BocsPtr& b, int density_pct);

/* --- independent brute-force evaluation paths ------------------------- */

/* (id^r (x) g (x) id^t) applied to a basis word of A^{(x)n}, evaluated
 * pointwise with explicit Koszul signs (no HomMap tensor machinery). */
SparseVec brute_apply_slot(const AInfAlgebra& a, const HomMap& g, int r, int s, int n,
                           int word_index);

/* Stasheff defect of S_n evaluated word-by-word. */
HomMap brute_stasheff_defect(const AInfAlgebra& a, int n);

/* Morphism defect Sigma_n - Sigma'_n evaluated word-by-word. */
HomMap brute_morphism_defect(const AlgMorphism& f, int n);

/* Homotopy defect f_n - g_n - H(h)_n - H_{f,g}(h)_n evaluated word-by-word,
 * with the composite sgn exponent computed per partition. */
HomMap brute_alg_homotopy_defect(const AlgHomotopy& h, const AlgMorphism& f,
                                 const AlgMorphism& g, int n);

/* Composite g*f in GMod-B computed through the M (x) C tensor view
 * f(m (x) mu(c)) with the full counital comultiplication. */
GModMorphism brute_compose_gmod(const GModMorphism& g, const GModMorphism& f);

/* hat_delta evaluated element-by-element from delta and the f1 blocks. */
GModMorphism brute_hat_delta(const GModMorphism& f);

} // namespace bocskit
