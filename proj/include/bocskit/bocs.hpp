#pragma once

#include "bocskit/ainf.hpp"

namespace bocskit {

/* Term of a reduced comultiplication: coef * (c1 (x) c2). */
struct MubarTerm {
    Scalar coef;
    int c1, c2;
};

/* Triangular differential graded S-bocs, C = S (+) Cbar, presented by a
 * filtration-adapted homogeneous basis of Cbar: basis element i carries a
 * layer index in [1, levels], Cbar_i = span of elements with layer <= i.
 * The reduced comultiplication strictly lowers layers, the differential
 * preserves them. Counit and unit are implicit in the normal form. */
class Bocs {
public:
    Bocs(SpacePtr cbar, std::vector<int> layers, int levels);

    const SpacePtr& cbar() const { return cbar_; }
    int levels() const { return levels_; }
    int layer(int i) const { return layers_[i]; }
    const std::vector<int>& layers() const { return layers_; }
    Field field() const { return cbar_->base().field; }
    const BaseRing& base() const { return cbar_->base(); }

    void set_mubar_term(int c, const Scalar& coef, int c1, int c2);
    void set_delta(HomMap d);
    const std::vector<MubarTerm>& mubar(int c) const { return mu_[c]; }
    const HomMap& delta() const { return delta_; }

    /* content equality (same basis, layers, mubar, delta) */
    bool same_as(const Bocs& o) const;

    /* bar-construction metadata; empty for hand-authored bocses */
    bool is_bar() const { return (bool)alg_; }
    const AlgPtr& algebra() const { return alg_; }
    const SpacePtr& shifted_atom() const { return a1_; }
    const std::vector<int>& word(int i) const { return words_[i]; }
    int word_index(const std::vector<int>& w) const;
    SpacePtr shifted_power(int n) const; // A[1]^{(x)n}, cached

private:
    friend std::shared_ptr<Bocs> bar_construct_impl(const AlgPtr&, int);
    SpacePtr cbar_;
    std::vector<int> layers_;
    int levels_;
    std::vector<std::vector<MubarTerm>> mu_;
    HomMap delta_;
    // bar metadata
    AlgPtr alg_;
    SpacePtr a1_;
    std::vector<std::vector<int>> words_;
    std::map<std::vector<int>, int> by_word_;
    mutable std::vector<SpacePtr> a1_powers_;
};

using BocsPtr = std::shared_ptr<const Bocs>;

/* Tensor S-coalgebra T_S(A[1]) truncated at word length L, with the
 * differential induced by {m_n} via hat(m_s) sigma^{(x)s} = sigma m_s.
 * Throws StasheffViolation if delta^2 != 0 on some word. */
BocsPtr bar_construct(const AlgPtr& a, int L);

/* hat-translation g -> sigma_Y g (sigma_X (x) sigma^{(x)n})^{-1} along the
 * canonical degree -1 shifts; inputs are the unshifted map and the shifted
 * domain/codomain spaces. */
HomMap hat_translate(const HomMap& g, const std::vector<SpacePtr>& dom_shifted,
                     const SpacePtr& cod_shifted);
/* Inverse translation: recover g from hat(g). */
HomMap unhat_translate(const HomMap& ghat, const std::vector<SpacePtr>& dom_unshifted,
                       const SpacePtr& cod_unshifted);

/* Inverse of a map whose matrix has exactly one entry per row and column. */
HomMap inverse_bijection(const HomMap& f);

/* New space spanned by the given basis indices (same labels), with the
 * inclusion and projection maps. */
struct Subspace {
    SpacePtr space;
    HomMap incl; // sub -> ambient
    HomMap proj; // ambient -> sub
};
Subspace subspace(const SpacePtr& ambient, const std::vector<int>& indices,
                  bool as_bimodule = true);

CheckResult check_bocs_axioms(const Bocs& b);

/* mubar^n(c) as a sparse sum of (n+1)-fold tensors of basis indices. */
std::map<std::vector<int>, Scalar> iterate_comult(const Bocs& b, int n, int c);

/* Per layer i+1: bases of V_{i+1} in Z(Cbar_{i+1}) with
 * Cbar_i + Z(Cbar_{i+1}) = Cbar_i (+) V_{i+1}, and of a complement W_{i+1},
 * split along (degree, idempotent pair) blocks. Z(Cbar_{i+1}) is
 * ker(delta) restricted to the layer. */
struct LayerSplit {
    std::vector<std::vector<SparseVec>> v; // v[i] spans V_{i+1}, i = 0..L-1
    std::vector<std::vector<SparseVec>> w; // w[i] spans W_{i+1}
    std::vector<std::vector<SparseVec>> z; // z[i] spans Z(Cbar_{i+1})
};
LayerSplit layer_split(const Bocs& b);

/* Degree-0 morphism of dg bocses Cbar_A -> Cbar_B (unit extension implicit),
 * required to respect the layer filtrations. */
struct BocsMorphism {
    BocsPtr src, tgt;
    HomMap map;

    static BocsMorphism identity(const BocsPtr& b);
};

CheckResult check_bocs_morphism(const BocsMorphism& psi);

/* Homotopy of bocs morphisms phi -> psi: degree -1 bimodule map h with
 * mubar_B h = (phi (x) h + h (x) psi) mubar_A and phi - psi = delta_B h +
 * h delta_A (h(1) = 0 is implicit in the reduced presentation). */
struct BocsHomotopy {
    BocsMorphism phi, psi;
    HomMap h;
};

CheckResult check_bocs_homotopy(const BocsHomotopy& hh);

} // namespace bocskit
