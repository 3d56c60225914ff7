#include "bocskit/graded.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace bocskit {

GradedSpace::GradedSpace(BaseRing base, bool bimodule, std::vector<BasisElem> basis,
                         std::string name)
    : base_(base), bimodule_(bimodule), basis_(std::move(basis)), name_(std::move(name)) {
    std::stable_sort(basis_.begin(), basis_.end(), [](const BasisElem& a, const BasisElem& b) {
        return std::tie(a.deg, a.lid, a.rid, a.label) < std::tie(b.deg, b.lid, b.rid, b.label);
    });
    finish();
}

void GradedSpace::finish() {
    by_label_.clear();
    by_word_.clear();
    std::set<std::string> seen;
    for (int i = 0; i < (int)basis_.size(); ++i) {
        const auto& b = basis_[i];
        if (b.rid < 0 || b.rid >= base_.n || b.lid < 0 || b.lid >= base_.n)
            throw BocsError(Err::IdempotentMismatch,
                            "idempotent index out of range on '" + b.label + "'");
        if (!seen.insert(b.label).second)
            throw BocsError(Err::ParseError, "duplicate basis label '" + b.label + "'");
        by_label_[b.label] = i;
    }
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) { h = (h ^ v) * 1099511628211ull; };
    mix(bimodule_);
    mix((uint64_t)base_.n);
    for (const auto& b : basis_) {
        for (char c : b.label) mix((uint64_t)(unsigned char)c);
        mix((uint64_t)(int64_t)b.deg);
        mix((uint64_t)b.lid);
        mix((uint64_t)b.rid);
    }
    hash_ = h;
}

int GradedSpace::index_of(const std::string& label) const {
    auto it = by_label_.find(label);
    return it == by_label_.end() ? -1 : it->second;
}

int GradedSpace::index_of_word(const std::vector<int>& w) const {
    auto it = by_word_.find(w);
    return it == by_word_.end() ? -1 : it->second;
}

bool GradedSpace::same_as(const GradedSpace& o) const {
    if (this == &o) return true;
    return hash_ == o.hash_ && bimodule_ == o.bimodule_ && base_ == o.base_ &&
           basis_ == o.basis_;
}

SpacePtr GradedSpace::make(BaseRing base, bool bimodule, std::vector<BasisElem> basis,
                           std::string name) {
    return std::make_shared<GradedSpace>(base, bimodule, std::move(basis), std::move(name));
}

SpacePtr GradedSpace::tensor(const std::vector<SpacePtr>& factors) {
    if (factors.empty()) throw BocsError(Err::ParseError, "empty tensor product");
    // flatten into atoms
    std::vector<SpacePtr> atoms;
    for (const auto& f : factors) {
        if (f->is_product())
            atoms.insert(atoms.end(), f->atoms().begin(), f->atoms().end());
        else
            atoms.push_back(f);
    }
    if (atoms.size() == 1) return atoms[0];
    const BaseRing& base = atoms[0]->base();
    for (const auto& a : atoms)
        if (!(a->base() == base))
            throw BocsError(Err::FieldMismatch, "tensor factors over different base rings");
    for (size_t i = 1; i < atoms.size(); ++i)
        if (!atoms[i]->bimodule())
            throw BocsError(Err::IdempotentMismatch,
                            "tensor: only the first factor may be a right module");

    auto space = std::make_shared<GradedSpace>(base, atoms[0]->bimodule(),
                                               std::vector<BasisElem>{});
    auto* s = const_cast<GradedSpace*>(space.get());
    s->atoms_ = atoms;

    // enumerate contracted words e_t x e_s (x) e_s y e_r ...
    std::vector<BasisElem> basis;
    std::vector<std::vector<int>> words;
    std::vector<int> cur((size_t)atoms.size(), 0);
    std::vector<int> widx;
    std::string label;
    std::function<void(size_t, int, int, int)> rec = [&](size_t k, int deg, int lid, int rid) {
        if (k == atoms.size()) {
            basis.push_back({label, deg, lid, rid});
            words.push_back(widx);
            return;
        }
        const auto& at = *atoms[k];
        for (int i = 0; i < at.dim(); ++i) {
            const auto& b = at.at(i);
            if (k > 0 && b.lid != rid) continue;
            size_t keep = label.size();
            if (k > 0) label += '|';
            label += b.label;
            widx.push_back(i);
            rec(k + 1, deg + b.deg, k == 0 ? b.lid : lid, b.rid);
            widx.pop_back();
            label.resize(keep);
        }
    };
    rec(0, 0, 0, 0);
    s->basis_ = std::move(basis);
    s->words_ = std::move(words);
    std::vector<int> order(s->basis_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& x = s->basis_[a];
        const auto& y = s->basis_[b];
        return std::tie(x.deg, x.lid, x.rid, x.label) < std::tie(y.deg, y.lid, y.rid, y.label);
    });
    std::vector<BasisElem> sb(order.size());
    std::vector<std::vector<int>> sw(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        sb[i] = s->basis_[order[i]];
        sw[i] = s->words_[order[i]];
    }
    s->basis_ = std::move(sb);
    s->words_ = std::move(sw);
    s->finish();
    for (size_t i = 0; i < s->words_.size(); ++i) s->by_word_[s->words_[i]] = (int)i;
    return space;
}

SpacePtr GradedSpace::shifted(const SpacePtr& m, int k) {
    auto basis = m->basis();
    for (auto& b : basis) b.deg -= k;
    auto sp = std::make_shared<GradedSpace>(m->base(), m->bimodule(), std::move(basis),
                                            m->name());
    if (m->is_product()) {
        // shifting a product space is not needed; shift atoms instead
        throw BocsError(Err::ParseError, "shift of a tensor product space");
    }
    return sp;
}

SparseVec vec_add(const SparseVec& a, const SparseVec& b) {
    SparseVec r = a;
    for (const auto& [i, v] : b) {
        auto it = r.find(i);
        if (it == r.end()) {
            r.emplace(i, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

SparseVec vec_scale(const Scalar& c, const SparseVec& a) {
    SparseVec r;
    if (c.is_zero()) return r;
    for (const auto& [i, v] : a) r.emplace(i, c * v);
    return r;
}

bool vec_is_zero(const SparseVec& a) {
    for (const auto& [i, v] : a)
        if (!v.is_zero()) return false;
    return true;
}

} // namespace bocskit
