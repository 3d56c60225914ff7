#pragma once

#include "bocskit/scalar.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bocskit {

/* S = k^n, the product of n copies of the ground field. */
struct BaseRing {
    Field field;
    int n = 1;

    bool operator==(const BaseRing&) const = default;
};

/* Homogeneous basis element. `rid` is the right idempotent index in [0, n);
 * `lid` the left one (meaningful for bimodules, 0 for right modules). */
struct BasisElem {
    std::string label;
    int deg = 0;
    int lid = 0;
    int rid = 0;

    bool operator==(const BasisElem&) const = default;
};

class GradedSpace;
using SpacePtr = std::shared_ptr<const GradedSpace>;

/* Finite-support Z-graded right S-module or S-S-bimodule with an ordered
 * homogeneous basis. Basis order is canonical: (deg, lid, rid, label).
 * Tensor products are flat: a product space remembers its atomic factors
 * and, per basis element, the word of atom basis indices. */
class GradedSpace {
public:
    GradedSpace(BaseRing base, bool bimodule, std::vector<BasisElem> basis,
                std::string name = {});

    const BaseRing& base() const { return base_; }
    bool bimodule() const { return bimodule_; }
    int dim() const { return (int)basis_.size(); }
    const BasisElem& at(int i) const { return basis_[i]; }
    const std::vector<BasisElem>& basis() const { return basis_; }
    const std::string& name() const { return name_; }
    int index_of(const std::string& label) const; // -1 if absent

    // tensor structure
    const std::vector<SpacePtr>& atoms() const { return atoms_; }
    const std::vector<int>& word(int i) const { return words_[i]; }
    int index_of_word(const std::vector<int>& w) const; // -1 if absent
    bool is_product() const { return atoms_.size() > 1; }

    uint64_t content_hash() const { return hash_; }
    bool same_as(const GradedSpace& o) const;

    static SpacePtr make(BaseRing base, bool bimodule, std::vector<BasisElem> basis,
                         std::string name = {});
    /* Flat tensor product over S: adjacent idempotents contracted. */
    static SpacePtr tensor(const std::vector<SpacePtr>& factors);
    /* M[k]: degree j basis elements move to degree j-k; labels unchanged. */
    static SpacePtr shifted(const SpacePtr& m, int k = 1);

private:
    friend SpacePtr tensor_impl(const std::vector<SpacePtr>&);
    BaseRing base_;
    bool bimodule_ = false;
    std::vector<BasisElem> basis_;
    std::string name_;
    std::vector<SpacePtr> atoms_;        // empty for atomic space
    std::vector<std::vector<int>> words_; // per basis element, atom indices
    std::map<std::string, int> by_label_;
    std::map<std::vector<int>, int> by_word_;
    uint64_t hash_ = 0;
    void finish();
};

/* Sparse vector over a space's basis. */
using SparseVec = std::map<int, Scalar>;

SparseVec vec_add(const SparseVec& a, const SparseVec& b);
SparseVec vec_scale(const Scalar& c, const SparseVec& a);
bool vec_is_zero(const SparseVec& a);

} // namespace bocskit
