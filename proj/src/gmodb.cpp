#include "bocskit/gmodb.hpp"

namespace bocskit {

GModMorphism::GModMorphism(BocsPtr b, SpacePtr dom, SpacePtr cod, int deg)
    : bocs_(std::move(b)), dom_(std::move(dom)), cod_(std::move(cod)), deg_(deg),
      f0_(dom_, cod_, deg_) {}

HomMap GModMorphism::zero_block(int c) const {
    return HomMap(dom_, cod_, deg_ + bocs_->cbar()->at(c).deg, false);
}

void GModMorphism::set_f0(HomMap m) {
    if (m.deg() != deg_ || !m.dom()->same_as(*dom_) || !m.cod()->same_as(*cod_))
        throw BocsError(Err::ModuleMismatch, "f0 has wrong shape");
    f0_ = std::move(m);
}

HomMap GModMorphism::f1(int c) const {
    auto it = f1_.find(c);
    return it == f1_.end() ? zero_block(c) : it->second;
}

void GModMorphism::set_f1(int c, HomMap m) {
    const auto& cb = bocs_->cbar()->at(c);
    if (m.deg() != deg_ + cb.deg || !m.dom()->same_as(*dom_) || !m.cod()->same_as(*cod_))
        throw BocsError(Err::ModuleMismatch, "f1(" + cb.label + ") has wrong shape");
    // block rule: f1(c) maps M e_{lid c} into N e_{rid c}
    for (const auto& [rc, v] : m.entries())
        if (dom_->at(rc.second).rid != cb.lid || cod_->at(rc.first).rid != cb.rid)
            throw BocsError(Err::IdempotentMismatch,
                            "f1(" + cb.label + ") breaks the idempotent block rule");
    if (m.is_zero())
        f1_.erase(c);
    else
        f1_[c] = std::move(m);
}

void GModMorphism::add_f1(int c, const HomMap& m) {
    if (m.is_zero()) return;
    auto it = f1_.find(c);
    if (it == f1_.end()) {
        set_f1(c, zero_block(c) + m);
    } else {
        HomMap s = it->second + m;
        if (s.is_zero())
            f1_.erase(it);
        else
            it->second = std::move(s);
    }
}

bool GModMorphism::f1_is_zero() const {
    for (const auto& [c, m] : f1_)
        if (!m.is_zero()) return false;
    return true;
}

static bool same_bocs(const BocsPtr& a, const BocsPtr& b) {
    return a.get() == b.get() || (a && b && a->same_as(*b));
}

static void check_parallel(const GModMorphism& a, const GModMorphism& b) {
    if (!same_bocs(a.bocs(), b.bocs()) || !a.dom()->same_as(*b.dom()) ||
        !a.cod()->same_as(*b.cod()) || a.deg() != b.deg())
        throw BocsError(Err::ModuleMismatch, "morphisms are not parallel");
}

GModMorphism GModMorphism::operator+(const GModMorphism& o) const {
    check_parallel(*this, o);
    GModMorphism r = *this;
    r.f0_ = f0_ + o.f0_;
    for (const auto& [c, m] : o.f1_) r.add_f1(c, m);
    return r;
}

GModMorphism GModMorphism::operator-(const GModMorphism& o) const {
    return *this + (-o);
}

GModMorphism GModMorphism::operator-() const {
    GModMorphism r = *this;
    r.f0_ = -r.f0_;
    for (auto& [c, m] : r.f1_) m = -m;
    return r;
}

GModMorphism GModMorphism::scaled(const Scalar& s) const {
    GModMorphism r(bocs_, dom_, cod_, deg_);
    if (s.is_zero()) return r;
    r.f0_ = f0_.scaled(s);
    for (const auto& [c, m] : f1_) r.f1_[c] = m.scaled(s);
    return r;
}

bool GModMorphism::operator==(const GModMorphism& o) const {
    check_parallel(*this, o);
    return (*this - o).is_zero();
}

SparseVec GModMorphism::eval(int m, int c) const {
    SparseVec x{{m, Scalar::one(field())}};
    if (c < 0) return f0_.apply(x);
    return f1(c).apply(x);
}

std::string GModMorphism::describe() const {
    if (!f0_.is_zero()) return "f0: " + f0_.describe_entry();
    for (const auto& [c, m] : f1_)
        if (!m.is_zero())
            return "f1(" + bocs_->cbar()->at(c).label + "): " + m.describe_entry();
    return "0";
}

GModMorphism gmod_identity(const BocsPtr& b, const SpacePtr& m) {
    GModMorphism r(b, m, m, 0);
    r.set_f0(HomMap::identity(m));
    return r;
}

GModMorphism embed(const BocsPtr& b, const HomMap& h) {
    GModMorphism r(b, h.dom(), h.cod(), h.deg());
    r.set_f0(h);
    return r;
}

GModMorphism compose(const GModMorphism& g, const GModMorphism& f) {
    if (!same_bocs(g.bocs(), f.bocs()))
        throw BocsError(Err::TruncationMismatch, "morphisms over different bocses");
    if (!g.dom()->same_as(*f.cod()))
        throw BocsError(Err::ModuleMismatch, "compose: codomain/domain mismatch");
    const Bocs& b = *f.bocs();
    GModMorphism r(f.bocs(), f.dom(), g.cod(), f.deg() + g.deg());
    r.set_f0(g.f0().after(f.f0()));
    // (g*f)1(c) = g1(c) f0 + g0 f1(c) + sum g1(c2) f1(c1), mubar(c) = sum c1 (x) c2
    for (const auto& [c, gm] : g.f1_blocks()) r.add_f1(c, gm.after(f.f0()));
    for (const auto& [c, fm] : f.f1_blocks()) r.add_f1(c, g.f0().after(fm));
    if (!g.f1_blocks().empty() && !f.f1_blocks().empty())
        for (int c = 0; c < b.cbar()->dim(); ++c)
            for (const auto& t : b.mubar(c)) {
                auto g2 = g.f1_blocks().find(t.c2);
                if (g2 == g.f1_blocks().end()) continue;
                auto f1 = f.f1_blocks().find(t.c1);
                if (f1 == f.f1_blocks().end()) continue;
                r.add_f1(c, g2->second.after(f1->second).scaled(t.coef));
            }
    return r;
}

GModMorphism hat_delta(const GModMorphism& f) {
    const Bocs& b = *f.bocs();
    GModMorphism r(f.bocs(), f.dom(), f.cod(), f.deg() + 1);
    Scalar sgn_f = sign_scalar(f.field(), f.deg() + 1);
    auto dcols = b.delta().columns();
    for (int c = 0; c < b.cbar()->dim(); ++c) {
        const SparseVec& dc = dcols[c];
        if (dc.empty()) continue;
        HomMap acc(f.dom(), f.cod(), f.deg() + 1 + b.cbar()->at(c).deg, false);
        bool any = false;
        for (const auto& [cp, v] : dc) {
            auto it = f.f1_blocks().find(cp);
            if (it == f.f1_blocks().end()) continue;
            acc = acc + it->second.precompose_parity().scaled(v * sgn_f);
            any = true;
        }
        if (any) r.add_f1(c, acc);
    }
    return r;
}

bool f0_invertible(const GModMorphism& f) {
    if (f.dom()->dim() != f.cod()->dim()) return false;
    return rank(f.f0()) == f.dom()->dim();
}

GModMorphism alternating_geometric_series(const GModMorphism& u) {
    if (!u.f0().is_zero())
        throw BocsError(Err::NotInvertible, "series requires vanishing first component");
    GModMorphism acc(u.bocs(), u.dom(), u.cod(), u.deg());
    GModMorphism pw = u;
    // (u^{*n})1 vanishes on Cbar_i for n > i, so the series stops at the level count
    for (int n = 1; n <= u.bocs()->levels(); ++n) {
        acc = (n % 2) ? acc - pw : acc + pw;
        if (n < u.bocs()->levels()) pw = compose(pw, u);
    }
    return acc;
}

GModMorphism invert(const GModMorphism& f) {
    // any homogeneous degree: composing with (f0)^{-1} reduces to degree 0
    if (f.dom()->dim() != f.cod()->dim())
        throw BocsError(Err::NotInvertible, "f0 singular (dimension mismatch)");
    auto sp = solve_splitting(f.f0());
    if (!sp.ker_basis.empty() || sp.rank != f.cod()->dim()) {
        std::string w = "f0 singular";
        if (!sp.ker_basis.empty()) {
            int i = sp.ker_basis.front().begin()->first;
            const auto& b = f.dom()->at(i);
            w += " (kernel meets degree " + std::to_string(b.deg) + ", idempotent " +
                 std::to_string(b.rid) + ")";
        }
        throw BocsError(Err::NotInvertible, w);
    }
    GModMorphism g0 = embed(f.bocs(), sp.section); // (f0^{-1}, 0)
    GModMorphism v = compose(g0, f);               // (id, v1)
    GModMorphism vinv =
        gmod_identity(f.bocs(), f.dom()) +
        alternating_geometric_series(v - gmod_identity(f.bocs(), f.dom()));
    return compose(vinv, g0);
}

GModMorphism restrict_along_unchecked(const BocsMorphism& psi, const GModMorphism& f) {
    GModMorphism r(psi.src, f.dom(), f.cod(), f.deg());
    r.set_f0(f.f0());
    const auto& ca = *psi.src->cbar();
    auto pcols = psi.map.columns();
    for (int c = 0; c < ca.dim(); ++c) {
        const SparseVec& img = pcols[c];
        if (img.empty()) continue;
        HomMap acc(f.dom(), f.cod(), f.deg() + ca.at(c).deg, false);
        bool any = false;
        for (const auto& [cp, v] : img) {
            auto it = f.f1_blocks().find(cp);
            if (it == f.f1_blocks().end()) continue;
            acc = acc + it->second.scaled(v);
            any = true;
        }
        if (any) r.add_f1(c, acc);
    }
    return r;
}

GModMorphism restrict_along(const BocsMorphism& psi, const GModMorphism& f) {
    if (f.bocs().get() != psi.tgt.get())
        throw BocsError(Err::ModuleMismatch, "morphism is not over the target bocs");
    if (auto r = check_bocs_morphism(psi); !r)
        throw BocsError(Err::NotABocsMorphism, r.witness);
    return restrict_along_unchecked(psi, f);
}

GModMorphism restrict_homotopy_unchecked(const BocsPtr& src, const HomMap& h,
                                         const GModMorphism& u) {
    // R_h(u) = (-1)^{|u|} u(id (x) h); the first component vanishes, h(1) = 0
    GModMorphism r(src, u.dom(), u.cod(), u.deg() - 1);
    Scalar sg = sign_scalar(u.field(), u.deg());
    const auto& ca = *src->cbar();
    auto hcols = h.columns();
    for (int c = 0; c < ca.dim(); ++c) {
        const SparseVec& img = hcols[c];
        if (img.empty()) continue;
        HomMap acc(u.dom(), u.cod(), u.deg() - 1 + ca.at(c).deg, false);
        bool any = false;
        for (const auto& [cp, v] : img) {
            auto it = u.f1_blocks().find(cp);
            if (it == u.f1_blocks().end()) continue;
            acc = acc + it->second.scaled(v * sg);
            any = true;
        }
        if (any) r.add_f1(c, acc);
    }
    return r;
}

GModMorphism restrict_homotopy(const BocsHomotopy& hh, const GModMorphism& u) {
    if (u.bocs().get() != hh.phi.tgt.get())
        throw BocsError(Err::ModuleMismatch, "morphism is not over the target bocs");
    if (auto r = check_bocs_homotopy(hh); !r) throw BocsError(Err::NotAHomotopy, r.witness);
    GModMorphism out = restrict_homotopy_unchecked(hh.phi.src, hh.h, u);
    // R_phi(u) - R_psi(u) = hat_delta_A R_h(u) + R_h(hat_delta_B u)
    GModMorphism lhs = restrict_along_unchecked(hh.phi, u) -
                       restrict_along_unchecked(hh.psi, u);
    GModMorphism rhs =
        hat_delta(out) + restrict_homotopy_unchecked(hh.phi.src, hh.h, hat_delta(u));
    if (!(lhs == rhs))
        throw BocsError(Err::NotAHomotopy, "derivation identity fails for R_h");
    return out;
}

SumSpace direct_sum(const SpacePtr& a, const SpacePtr& b) {
    if (!(a->base() == b->base()) || a->bimodule() != b->bimodule())
        throw BocsError(Err::ModuleMismatch, "direct sum of incompatible spaces");
    std::vector<BasisElem> basis;
    for (const auto& e : a->basis()) basis.push_back({"0:" + e.label, e.deg, e.lid, e.rid});
    for (const auto& e : b->basis()) basis.push_back({"1:" + e.label, e.deg, e.lid, e.rid});
    auto sum = GradedSpace::make(a->base(), a->bimodule(), basis);
    SumSpace out{sum, HomMap(a, sum, 0), HomMap(b, sum, 0), HomMap(sum, a, 0),
                 HomMap(sum, b, 0)};
    Scalar one = Scalar::one(a->base().field);
    for (int i = 0; i < a->dim(); ++i) {
        int j = sum->index_of("0:" + a->at(i).label);
        out.in1.set(j, i, one);
        out.pr1.set(i, j, one);
    }
    for (int i = 0; i < b->dim(); ++i) {
        int j = sum->index_of("1:" + b->at(i).label);
        out.in2.set(j, i, one);
        out.pr2.set(i, j, one);
    }
    return out;
}

} // namespace bocskit
