#pragma once

#include "bocskit/graded.hpp"

#include <functional>
#include <optional>

namespace bocskit {

/* Homogeneous linear map of fixed degree between graded spaces, stored as a
 * sparse matrix of exact scalars. Entries are constrained to homogeneity
 * (deg cod = deg dom + deg) and idempotent compatibility: right-module maps
 * preserve rid, bimodule maps preserve (lid, rid). */
class HomMap {
public:
    HomMap() = default;
    /* s_linear = false admits plain k-linear blocks (used for the f1(c)
     * components of GMod-B morphisms, which shift idempotents). */
    HomMap(SpacePtr dom, SpacePtr cod, int deg, bool s_linear = true);

    static HomMap identity(const SpacePtr& m);
    /* sigma_M : M -> M[1], degree -1, identity on labels. */
    static HomMap shift_iso(const SpacePtr& m, const SpacePtr& m1);

    const SpacePtr& dom() const { return dom_; }
    const SpacePtr& cod() const { return cod_; }
    int deg() const { return deg_; }
    Field field() const { return dom_->base().field; }

    void set(int row, int col, const Scalar& v);
    void add(int row, int col, const Scalar& v);
    Scalar at(int row, int col) const;
    const std::map<std::pair<int, int>, Scalar>& entries() const { return m_; }
    size_t nnz() const { return m_.size(); }
    bool is_zero() const { return m_.empty(); }

    HomMap operator+(const HomMap& o) const;
    HomMap operator-(const HomMap& o) const;
    HomMap operator-() const;
    HomMap scaled(const Scalar& c) const;
    /* this after g (matrix product, no signs). */
    HomMap after(const HomMap& g) const;
    /* entry-wise sign (-1)^{deg of domain basis element}. */
    HomMap precompose_parity() const;

    SparseVec apply(const SparseVec& x) const;
    SparseVec apply_basis(int col) const;
    /* per-column views; one pass over the entries */
    std::vector<SparseVec> columns() const;

    bool operator==(const HomMap& o) const;

    /* First (row, col, value) with nonzero value, for failure witnesses. */
    std::string describe_entry() const;

    bool s_linear() const { return s_linear_; }

private:
    void check_entry(int row, int col) const;
    SpacePtr dom_, cod_;
    int deg_ = 0;
    bool s_linear_ = true;
    std::map<std::pair<int, int>, Scalar> m_;
};

/* Tensor product of maps with the Koszul sign rule
 * [f(x)g](x(x)y) = (-1)^{|g||x|} f(x)(x)g(y), extended n-fold. */
HomMap tensor_many(const std::vector<const HomMap*>& fs);
inline HomMap tensor2(const HomMap& f, const HomMap& g) { return tensor_many({&f, &g}); }

/* Exact kernel/image/splitting data of a homogeneous map, by row reduction
 * with pivot order = canonical basis order. Since S is semisimple every
 * homogeneous map splits. */
struct Splitting {
    std::vector<SparseVec> ker_basis; // in dom coordinates
    std::vector<SparseVec> im_basis;  // in cod coordinates (echelonized)
    HomMap section;                   // cod -> dom, f*section = proj_im
    HomMap proj_im;                   // cod -> cod, projection onto im f
    HomMap proj_ker;                  // dom -> dom, projection onto ker f
    int rank = 0;
    std::map<int, int> rank_by_deg; // keyed by dom degree
};

Splitting solve_splitting(const HomMap& f);

int rank(const HomMap& f);

/* Solve f(x) = b; empty optional if b is not in the image. */
std::optional<SparseVec> solve(const HomMap& f, const SparseVec& b);

/* Solve op(X) = rhs for a HomMap X: dom -> cod of degree deg, where op is
 * linear in X. Unknowns are the admissible matrix slots of X. */
std::optional<HomMap> solve_linear_operator(
    const std::function<HomMap(const HomMap&)>& op, const SpacePtr& dom,
    const SpacePtr& cod, int deg, const HomMap& rhs);

/* Kernel basis of a linear operator on maps over the given unknown slots. */
std::vector<HomMap> kernel_of_linear_operator(
    const std::function<HomMap(const HomMap&)>& op, const SpacePtr& dom,
    const SpacePtr& cod, int deg, bool s_linear,
    const std::vector<std::pair<int, int>>& slots);

/* Basis slots (row, col) admissible for a map dom -> cod of degree deg. */
std::vector<std::pair<int, int>> admissible_slots(const GradedSpace& dom,
                                                  const GradedSpace& cod, int deg,
                                                  bool s_linear = true);

} // namespace bocskit
