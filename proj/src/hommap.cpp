#include "bocskit/hommap.hpp"

#include <algorithm>

namespace bocskit {

HomMap::HomMap(SpacePtr dom, SpacePtr cod, int deg, bool s_linear)
    : dom_(std::move(dom)), cod_(std::move(cod)), deg_(deg), s_linear_(s_linear) {
    if (!(dom_->base() == cod_->base()))
        throw BocsError(Err::FieldMismatch, "map between different base rings");
}

HomMap HomMap::identity(const SpacePtr& m) {
    HomMap f(m, m, 0);
    Scalar one = Scalar::one(m->base().field);
    for (int i = 0; i < m->dim(); ++i) f.m_[{i, i}] = one;
    return f;
}

HomMap HomMap::shift_iso(const SpacePtr& m, const SpacePtr& m1) {
    HomMap f(m, m1, -1);
    Scalar one = Scalar::one(m->base().field);
    for (int i = 0; i < m->dim(); ++i) {
        int j = m1->index_of(m->at(i).label);
        if (j < 0 || m1->at(j).deg != m->at(i).deg - 1)
            throw BocsError(Err::ParseError, "shift_iso: target is not M[1]");
        f.m_[{j, i}] = one;
    }
    return f;
}

void HomMap::check_entry(int row, int col) const {
    const auto& d = dom_->at(col);
    const auto& c = cod_->at(row);
    if (c.deg != d.deg + deg_)
        throw BocsError(Err::ParseError, "inhomogeneous entry " + c.label + " <- " + d.label +
                                             " in degree-" + std::to_string(deg_) + " map");
    if (s_linear_ &&
        (c.rid != d.rid || (dom_->bimodule() && cod_->bimodule() && c.lid != d.lid)))
        throw BocsError(Err::IdempotentMismatch,
                        "entry " + c.label + " <- " + d.label + " breaks S-linearity");
}

void HomMap::set(int row, int col, const Scalar& v) {
    check_entry(row, col);
    if (v.is_zero())
        m_.erase({row, col});
    else
        m_[{row, col}] = v;
}

void HomMap::add(int row, int col, const Scalar& v) {
    if (v.is_zero()) return;
    check_entry(row, col);
    auto it = m_.find({row, col});
    if (it == m_.end()) {
        m_.emplace(std::make_pair(row, col), v);
    } else {
        it->second += v;
        if (it->second.is_zero()) m_.erase(it);
    }
}

Scalar HomMap::at(int row, int col) const {
    auto it = m_.find({row, col});
    return it == m_.end() ? Scalar::zero(field()) : it->second;
}

static void check_parallel(const HomMap& a, const HomMap& b) {
    if (!a.dom()->same_as(*b.dom()) || !a.cod()->same_as(*b.cod()) || a.deg() != b.deg())
        throw BocsError(Err::ModuleMismatch, "maps are not parallel");
}

HomMap HomMap::operator+(const HomMap& o) const {
    check_parallel(*this, o);
    HomMap r = *this;
    for (const auto& [rc, v] : o.m_) {
        auto it = r.m_.find(rc);
        if (it == r.m_.end()) {
            r.m_.emplace(rc, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) r.m_.erase(it);
        }
    }
    return r;
}

HomMap HomMap::operator-(const HomMap& o) const { return *this + (-o); }

HomMap HomMap::operator-() const {
    HomMap r = *this;
    for (auto& [rc, v] : r.m_) v = -v;
    return r;
}

HomMap HomMap::scaled(const Scalar& c) const {
    HomMap r(dom_, cod_, deg_, s_linear_);
    if (c.is_zero()) return r;
    r.m_ = m_;
    for (auto& [rc, v] : r.m_) v = v * c;
    return r;
}

HomMap HomMap::after(const HomMap& g) const {
    if (!dom_->same_as(*g.cod()))
        throw BocsError(Err::ModuleMismatch, "composition domain mismatch");
    HomMap r(g.dom(), cod_, deg_ + g.deg(), s_linear_ && g.s_linear_);
    // index own entries by column
    std::map<int, std::vector<std::pair<int, Scalar>>> by_col;
    for (const auto& [rc, v] : m_) by_col[rc.second].push_back({rc.first, v});
    for (const auto& [rc, v] : g.m_) {
        auto it = by_col.find(rc.first);
        if (it == by_col.end()) continue;
        for (const auto& [row, w] : it->second) r.add(row, rc.second, w * v);
    }
    return r;
}

HomMap HomMap::precompose_parity() const {
    HomMap r = *this;
    for (auto& [rc, v] : r.m_)
        if (dom_->at(rc.second).deg & 1) v = -v;
    return r;
}

SparseVec HomMap::apply(const SparseVec& x) const {
    SparseVec r;
    std::map<int, std::vector<std::pair<int, Scalar>>> by_col;
    for (const auto& [rc, v] : m_) by_col[rc.second].push_back({rc.first, v});
    for (const auto& [c, xv] : x) {
        auto it = by_col.find(c);
        if (it == by_col.end()) continue;
        for (const auto& [row, w] : it->second) {
            auto jt = r.find(row);
            if (jt == r.end()) {
                r.emplace(row, w * xv);
            } else {
                jt->second += w * xv;
                if (jt->second.is_zero()) r.erase(jt);
            }
        }
    }
    return r;
}

SparseVec HomMap::apply_basis(int col) const {
    SparseVec r;
    for (const auto& [rc, v] : m_)
        if (rc.second == col) r.emplace(rc.first, v);
    return r;
}

std::vector<SparseVec> HomMap::columns() const {
    std::vector<SparseVec> cols(dom_->dim());
    for (const auto& [rc, v] : m_) cols[rc.second].emplace(rc.first, v);
    return cols;
}

bool HomMap::operator==(const HomMap& o) const {
    check_parallel(*this, o);
    return m_ == o.m_;
}

std::string HomMap::describe_entry() const {
    if (m_.empty()) return "0";
    const auto& [rc, v] = *m_.begin();
    return cod_->at(rc.first).label + " <- " + dom_->at(rc.second).label + " : " + v.str();
}

HomMap tensor_many(const std::vector<const HomMap*>& fs) {
    if (fs.empty()) throw BocsError(Err::ParseError, "empty tensor of maps");
    if (fs.size() == 1) return *fs[0];
    std::vector<SpacePtr> doms, cods;
    int deg = 0;
    for (const auto* f : fs) {
        doms.push_back(f->dom());
        cods.push_back(f->cod());
        deg += f->deg();
    }
    SpacePtr dom = GradedSpace::tensor(doms);
    SpacePtr cod = GradedSpace::tensor(cods);
    HomMap r(dom, cod, deg);
    Field F = r.field();

    // per factor: atom count and column-indexed entries
    std::vector<int> arity;
    std::vector<std::map<int, std::vector<std::pair<int, Scalar>>>> cols(fs.size());
    for (size_t k = 0; k < fs.size(); ++k) {
        arity.push_back(fs[k]->dom()->is_product() ? (int)fs[k]->dom()->atoms().size() : 1);
        for (const auto& [rc, v] : fs[k]->entries()) cols[k][rc.second].push_back({rc.first, v});
    }

    std::vector<int> sub, wbuf;
    for (int col = 0; col < dom->dim(); ++col) {
        const std::vector<int>* w;
        if (dom->is_product()) {
            w = &dom->word(col);
        } else {
            wbuf = {col};
            w = &wbuf;
        }
        // split word into per-factor columns, record Koszul sign
        std::vector<int> fcol(fs.size());
        std::vector<int> fdeg(fs.size());
        size_t pos = 0;
        bool dead = false;
        for (size_t k = 0; k < fs.size() && !dead; ++k) {
            sub.assign(w->begin() + pos, w->begin() + pos + arity[k]);
            pos += arity[k];
            int d = 0;
            for (size_t j = 0; j < sub.size(); ++j) {
                const auto& at = fs[k]->dom()->is_product() ? *fs[k]->dom()->atoms()[j]
                                                            : *fs[k]->dom();
                d += at.at(sub[j]).deg;
            }
            fdeg[k] = d;
            int c = fs[k]->dom()->is_product() ? fs[k]->dom()->index_of_word(sub) : sub[0];
            if (c < 0 || !cols[k].count(c)) dead = true;
            fcol[k] = c;
        }
        if (dead) continue;
        int parity = 0;
        {
            int suffix_map_deg = 0;
            for (size_t k = fs.size(); k-- > 0;) {
                parity += suffix_map_deg * fdeg[k];
                suffix_map_deg += fs[k]->deg();
            }
        }
        // expand the product of factor columns
        std::vector<std::pair<std::vector<int>, Scalar>> acc = {
            {std::vector<int>{}, sign_scalar(F, parity)}};
        std::vector<int> rbuf;
        for (size_t k = 0; k < fs.size(); ++k) {
            std::vector<std::pair<std::vector<int>, Scalar>> next;
            for (const auto& [row, v] : cols[k].at(fcol[k])) {
                const std::vector<int>* rw;
                if (fs[k]->cod()->is_product()) {
                    rw = &fs[k]->cod()->word(row);
                } else {
                    rbuf = {row};
                    rw = &rbuf;
                }
                for (const auto& [pw, pv] : acc) {
                    auto nw = pw;
                    nw.insert(nw.end(), rw->begin(), rw->end());
                    next.push_back({std::move(nw), pv * v});
                }
            }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        for (const auto& [rw, v] : acc) {
            int row = cod->is_product() ? cod->index_of_word(rw) : rw[0];
            if (row < 0)
                throw BocsError(Err::IdempotentMismatch, "tensor image word not in codomain");
            r.add(row, col, v);
        }
    }
    return r;
}

/* Row-reduction core shared by the splitting routines. Pairs (image vector,
 * preimage) are kept echelonized by leading row. */
namespace {
std::vector<SparseVec> columns_of(const HomMap& f) {
    std::vector<SparseVec> cols(f.dom()->dim());
    for (const auto& [rc, v] : f.entries()) cols[rc.second].emplace(rc.first, v);
    return cols;
}

struct Eliminator {
    Field F;
    std::map<int, std::pair<SparseVec, SparseVec>> pivots; // leading row -> (im, pre)

    int leading(const SparseVec& v) const { return v.empty() ? -1 : v.begin()->first; }

    // reduce v (and trailing preimage u) against recorded pivots
    void reduce(SparseVec& v, SparseVec& u) const {
        while (!v.empty()) {
            auto it = pivots.find(v.begin()->first);
            if (it == pivots.end()) break;
            Scalar c = v.begin()->second / it->second.first.begin()->second;
            v = vec_add(v, vec_scale(-c, it->second.first));
            u = vec_add(u, vec_scale(-c, it->second.second));
        }
    }
    // full reduction (not just leading entries); used for projections
    SparseVec coords_against(SparseVec v, SparseVec* coeffs_out) const {
        // returns residue after eliminating all pivot rows; coefficients per pivot row
        for (auto& [lead, p] : pivots) {
            auto it = v.find(lead);
            if (it == v.end()) continue;
            Scalar c = it->second / p.first.begin()->second;
            v = vec_add(v, vec_scale(-c, p.first));
            if (coeffs_out) (*coeffs_out)[lead] = c;
        }
        return v;
    }
};
} // namespace

Splitting solve_splitting(const HomMap& f) {
    Field F = f.field();
    const auto& dom = *f.dom();
    const auto& cod = *f.cod();
    Eliminator el{F, {}};
    Splitting out;
    out.section = HomMap(f.cod(), f.dom(), -f.deg(), f.s_linear());
    out.proj_im = HomMap(f.cod(), f.cod(), 0, f.s_linear());
    out.proj_ker = HomMap(f.dom(), f.dom(), 0, f.s_linear());

    auto cols = columns_of(f);
    for (int j = 0; j < dom.dim(); ++j) {
        SparseVec v = cols[j];
        SparseVec u{{j, Scalar::one(F)}};
        el.reduce(v, u);
        if (vec_is_zero(v)) {
            out.ker_basis.push_back(u);
        } else {
            el.pivots[v.begin()->first] = {v, u};
            ++out.rank;
            ++out.rank_by_deg[dom.at(j).deg];
        }
    }
    for (const auto& [lead, p] : el.pivots) out.im_basis.push_back(p.first);

    // proj_im and section: express each codomain basis vector against the image
    for (int r = 0; r < cod.dim(); ++r) {
        SparseVec coeffs;
        SparseVec e{{r, Scalar::one(F)}};
        el.coords_against(e, &coeffs);
        for (const auto& [lead, c] : coeffs) {
            const auto& [imv, prev] = el.pivots.at(lead);
            for (const auto& [row, w] : imv) out.proj_im.add(row, r, c * w);
            for (const auto& [row, w] : prev) out.section.add(row, r, c * w);
        }
    }
    // proj_ker = id - section*f
    out.proj_ker = HomMap::identity(f.dom()) - out.section.after(f);
    return out;
}

int rank(const HomMap& f) {
    Eliminator el{f.field(), {}};
    auto cols = columns_of(f);
    int r = 0;
    for (int j = 0; j < f.dom()->dim(); ++j) {
        SparseVec v = cols[j], u;
        el.reduce(v, u);
        if (!vec_is_zero(v)) {
            el.pivots[v.begin()->first] = {v, u};
            ++r;
        }
    }
    return r;
}

std::optional<SparseVec> solve(const HomMap& f, const SparseVec& b) {
    Eliminator el{f.field(), {}};
    auto cols = columns_of(f);
    for (int j = 0; j < f.dom()->dim(); ++j) {
        SparseVec v = cols[j];
        SparseVec u{{j, Scalar::one(f.field())}};
        el.reduce(v, u);
        if (!vec_is_zero(v)) el.pivots[v.begin()->first] = {v, u};
    }
    SparseVec x, rest = b;
    for (const auto& [lead, p] : el.pivots) {
        auto it = rest.find(lead);
        if (it == rest.end()) continue;
        Scalar c = it->second / p.first.begin()->second;
        rest = vec_add(rest, vec_scale(-c, p.first));
        x = vec_add(x, vec_scale(c, p.second));
    }
    if (!vec_is_zero(rest)) return std::nullopt;
    return x;
}

std::vector<std::pair<int, int>> admissible_slots(const GradedSpace& dom,
                                                  const GradedSpace& cod, int deg,
                                                  bool s_linear) {
    std::vector<std::pair<int, int>> slots;
    bool bi = dom.bimodule() && cod.bimodule();
    for (int c = 0; c < dom.dim(); ++c)
        for (int r = 0; r < cod.dim(); ++r) {
            if (cod.at(r).deg != dom.at(c).deg + deg) continue;
            if (s_linear && cod.at(r).rid != dom.at(c).rid) continue;
            if (s_linear && bi && cod.at(r).lid != dom.at(c).lid) continue;
            slots.push_back({r, c});
        }
    return slots;
}

std::vector<HomMap> kernel_of_linear_operator(
    const std::function<HomMap(const HomMap&)>& op, const SpacePtr& dom,
    const SpacePtr& cod, int deg, bool s_linear,
    const std::vector<std::pair<int, int>>& slots) {
    Field F = dom->base().field;
    std::map<std::pair<int, int>, int> flat;
    auto flat_key = [&flat](const std::pair<int, int>& rc) {
        auto it = flat.find(rc);
        if (it == flat.end()) it = flat.emplace(rc, (int)flat.size()).first;
        return it->second;
    };
    Eliminator el{F, {}};
    std::vector<SparseVec> kernel_coords;
    for (size_t s = 0; s < slots.size(); ++s) {
        HomMap e(dom, cod, deg, s_linear);
        e.set(slots[s].first, slots[s].second, Scalar::one(F));
        HomMap img = op(e);
        SparseVec v;
        for (const auto& [rc, val] : img.entries()) v[flat_key(rc)] = val;
        SparseVec u{{(int)s, Scalar::one(F)}};
        el.reduce(v, u);
        if (vec_is_zero(v))
            kernel_coords.push_back(u);
        else
            el.pivots[v.begin()->first] = {v, u};
    }
    std::vector<HomMap> out;
    for (const auto& k : kernel_coords) {
        HomMap x(dom, cod, deg, s_linear);
        for (const auto& [s, c] : k) x.add(slots[s].first, slots[s].second, c);
        out.push_back(std::move(x));
    }
    return out;
}

std::optional<HomMap> solve_linear_operator(
    const std::function<HomMap(const HomMap&)>& op, const SpacePtr& dom,
    const SpacePtr& cod, int deg, const HomMap& rhs) {
    Field F = dom->base().field;
    auto slots = admissible_slots(*dom, *cod, deg);
    // columns of the big system: op(E_slot) flattened by result entries
    HomMap zero(dom, cod, deg);
    HomMap base = op(zero);
    std::map<std::pair<int, int>, int> flat; // result slot -> dense index
    auto flat_key = [&flat](const std::pair<int, int>& rc) {
        auto it = flat.find(rc);
        if (it == flat.end()) it = flat.emplace(rc, (int)flat.size()).first;
        return it->second;
    };
    // pre-assign result slots in canonical order so indices are stable
    for (auto rc : admissible_slots(*rhs.dom(), *rhs.cod(), rhs.deg())) flat_key(rc);
    Eliminator el{F, {}};
    for (size_t s = 0; s < slots.size(); ++s) {
        HomMap e(dom, cod, deg);
        e.set(slots[s].first, slots[s].second, Scalar::one(F));
        HomMap img = op(e) - base; // strip affine part if any
        SparseVec v;
        for (const auto& [rc, val] : img.entries()) v[flat_key(rc)] = val;
        SparseVec u{{(int)s, Scalar::one(F)}};
        el.reduce(v, u);
        if (!vec_is_zero(v)) el.pivots[v.begin()->first] = {v, u};
    }
    SparseVec target;
    HomMap goal = rhs - base;
    for (const auto& [rc, val] : goal.entries()) target[flat_key(rc)] = val;
    SparseVec x, rest = target;
    for (const auto& [lead, p] : el.pivots) {
        auto it = rest.find(lead);
        if (it == rest.end()) continue;
        Scalar c = it->second / p.first.begin()->second;
        rest = vec_add(rest, vec_scale(-c, p.first));
        x = vec_add(x, vec_scale(c, p.second));
    }
    if (!vec_is_zero(rest)) return std::nullopt;
    HomMap X(dom, cod, deg);
    for (const auto& [s, c] : x) X.add(slots[s].first, slots[s].second, c);
    return X;
}

} // namespace bocskit
