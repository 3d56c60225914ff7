#include "bocskit/ainfmod.hpp"

#include <algorithm>
#include <array>

namespace bocskit {

AInfModule::AInfModule(AlgPtr alg, SpacePtr m, int arity_bound)
    : alg_(std::move(alg)), m_(std::move(m)), arity_(arity_bound) {
    if (arity_ < 1) throw BocsError(Err::ParseError, "module arity_bound must be >= 1");
}

SpacePtr AInfModule::mpower(int k) const {
    if (k < 0) throw BocsError(Err::ParseError, "negative tensor power");
    while ((int)mpowers_.size() < k + 1) {
        if (mpowers_.empty())
            mpowers_.push_back(m_);
        else
            mpowers_.push_back(GradedSpace::tensor({mpowers_.back(), alg_->space()}));
    }
    return mpowers_[k];
}

const HomMap& AInfModule::op(int n) const {
    if (n >= 1 && n <= (int)ops_.size()) return ops_[n - 1];
    auto it = zeros_.find(n);
    if (it == zeros_.end())
        it = zeros_.emplace(n, HomMap(mpower(n - 1), m_, 2 - n)).first;
    return it->second;
}

void AInfModule::set_op(int n, HomMap op) {
    if (n > arity_) throw BocsError(Err::ParseError, "operation beyond arity_bound");
    if (op.deg() != 2 - n || !op.dom()->same_as(*mpower(n - 1)) ||
        !op.cod()->same_as(*m_))
        throw BocsError(Err::ModuleMismatch, "m^M_" + std::to_string(n) + " has wrong shape");
    while ((int)ops_.size() < n) {
        int k = (int)ops_.size() + 1;
        ops_.push_back(HomMap(mpower(k - 1), m_, 2 - k));
    }
    ops_[n - 1] = std::move(op);
}

HomMap ModMorphism::f(int n) const {
    if (n >= 1 && n <= (int)comps.size()) return comps[n - 1];
    return HomMap(src->mpower(n - 1), tgt->space(), deg + 1 - n);
}

HomMap& ModMorphism::slot(int n) {
    while ((int)comps.size() < n) {
        int k = (int)comps.size() + 1;
        comps.push_back(HomMap(src->mpower(k - 1), tgt->space(), deg + 1 - k));
    }
    return comps[n - 1];
}

ModMorphism ModMorphism::identity(const ModPtr& m) {
    ModMorphism r{m, m, 0, {}};
    r.slot(1) = HomMap::identity(m->space());
    return r;
}

ModMorphism ModMorphism::zero(const ModPtr& a, const ModPtr& b, int deg) {
    ModMorphism r{a, b, deg, {}};
    r.slot(1);
    return r;
}

ModMorphism ModMorphism::operator+(const ModMorphism& o) const {
    ModMorphism r = *this;
    for (int n = 1; n <= std::max(bound(), o.bound()); ++n) r.slot(n) = f(n) + o.f(n);
    return r;
}

ModMorphism ModMorphism::operator-(const ModMorphism& o) const {
    ModMorphism r = *this;
    for (int n = 1; n <= std::max(bound(), o.bound()); ++n) r.slot(n) = f(n) - o.f(n);
    return r;
}

ModMorphism ModMorphism::scaled(const Scalar& c) const {
    ModMorphism r = *this;
    for (auto& m : r.comps) m = m.scaled(c);
    return r;
}

bool ModMorphism::equal_upto(const ModMorphism& o, int n) const {
    for (int k = 1; k <= n; ++k)
        if (!(f(k) == o.f(k))) return false;
    return true;
}

bool ModMorphism::zero_upto(int n) const {
    for (int k = 1; k <= n; ++k)
        if (!f(k).is_zero()) return false;
    return true;
}

ModMorphism structure_family(const ModPtr& m) {
    ModMorphism r{m, m, 1, {}};
    for (int n = 1; n <= m->arity_bound(); ++n) r.slot(n) = m->op(n);
    return r;
}

HomMap ModHomotopy::h(int n) const {
    if (n >= 1 && n <= (int)comps.size()) return comps[n - 1];
    return HomMap(src->mpower(n - 1), tgt->space(), -n);
}

HomMap& ModHomotopy::slot(int n) {
    while ((int)comps.size() < n) {
        int k = (int)comps.size() + 1;
        comps.push_back(HomMap(src->mpower(k - 1), tgt->space(), -k));
    }
    return comps[n - 1];
}

/* sum over r+s+t = n (r >= 1, s >= 1, t >= 0) of
 * sign(r,s,t) outer_{r+1+t}(id_M (x) id^{r-1} (x) m_s (x) id^t) */
static HomMap module_plus_sum(const AInfModule& m, int n, const SpacePtr& out_space,
                              int out_deg, const std::function<HomMap(int)>& outer,
                              const std::function<int(int, int, int)>& parity) {
    const AInfAlgebra& a = *m.alg();
    HomMap acc(m.mpower(n - 1), out_space, out_deg);
    for (int s = 1; s <= std::min(n - 1, a.arity_bound()); ++s) {
        const HomMap& ms = a.m(s);
        if (ms.is_zero()) continue;
        for (int r = 1; r + s <= n; ++r) {
            int t = n - r - s;
            HomMap fo = outer(r + 1 + t);
            if (fo.is_zero()) continue;
            std::vector<const HomMap*> factors;
            HomMap idr = HomMap::identity(m.mpower(r - 1));
            factors.push_back(&idr);
            factors.push_back(&ms);
            HomMap idt;
            if (t > 0) {
                idt = HomMap::identity(a.power(t));
                factors.push_back(&idt);
            }
            acc = acc + fo.after(tensor_many(factors))
                            .scaled(sign_scalar(m.field(), parity(r, s, t)));
        }
    }
    return acc;
}

/* sum over s+t = n (s >= 1, t >= 0) of sign(s,t) outer_{1+t}(mid_s (x) id^t) */
static HomMap module_zero_sum(const AInfModule& m, int n, const SpacePtr& out_space,
                              int out_deg, const std::function<HomMap(int)>& outer,
                              const std::function<HomMap(int)>& mid,
                              const std::function<int(int, int)>& parity) {
    const AInfAlgebra& a = *m.alg();
    HomMap acc(m.mpower(n - 1), out_space, out_deg);
    for (int s = 1; s <= n; ++s) {
        int t = n - s;
        HomMap ms = mid(s);
        if (ms.is_zero()) continue;
        HomMap fo = outer(1 + t);
        if (fo.is_zero()) continue;
        std::vector<const HomMap*> factors;
        factors.push_back(&ms);
        HomMap idt;
        if (t > 0) {
            idt = HomMap::identity(a.power(t));
            factors.push_back(&idt);
        }
        acc = acc +
              fo.after(tensor_many(factors)).scaled(sign_scalar(m.field(), parity(s, t)));
    }
    return acc;
}

CheckResult check_module(const AInfModule& m, int n) {
    HomMap plus = module_plus_sum(
        m, n, m.space(), 3 - n, [&](int k) { return m.op(k); },
        [](int r, int s, int t) { return r + s * t; });
    HomMap zero = module_zero_sum(
        m, n, m.space(), 3 - n, [&](int k) { return m.op(k); },
        [&](int s) { return m.op(s); }, [](int s, int t) { return s * t; });
    HomMap d = plus + zero;
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("module condition fails at n=" + std::to_string(n) + ": " +
                             d.describe_entry());
}

CheckResult check_module_all(const AInfModule& m) {
    int bound = std::max(m.arity_bound(), m.alg()->arity_bound());
    for (int n = 1; n <= 2 * bound; ++n)
        if (auto r = check_module(m, n); !r) return r;
    return CheckResult::pass();
}

ModMorphism compose_mod(const ModMorphism& g, const ModMorphism& f, int upto) {
    if (!f.tgt->space()->same_as(*g.src->space()))
        throw BocsError(Err::ModuleMismatch, "compose_mod: endpoint mismatch");
    if (upto <= 0) {
        int horizon = 2 * std::max({f.src->arity_bound(), g.tgt->arity_bound(),
                                    f.src->alg()->arity_bound()});
        upto = std::min(f.bound() + g.bound() - 1,
                        std::max({horizon, f.bound(), g.bound()}));
    }
    ModMorphism out{f.src, g.tgt, f.deg + g.deg, {}};
    const AInfAlgebra& a = *f.src->alg();
    for (int n = 1; n <= upto; ++n) {
        HomMap acc(f.src->mpower(n - 1), g.tgt->space(), out.deg + 1 - n);
        for (int r = 1; r <= n; ++r) {
            int s = n - r;
            HomMap fr = f.f(r);
            if (fr.is_zero()) continue;
            HomMap gs = g.f(1 + s);
            if (gs.is_zero()) continue;
            std::vector<const HomMap*> factors{&fr};
            HomMap ids;
            if (s > 0) {
                ids = HomMap::identity(a.power(s));
                factors.push_back(&ids);
            }
            int parity = (f.deg + r + 1) * s;
            acc = acc + gs.after(tensor_many(factors))
                            .scaled(sign_scalar(f.src->field(), parity));
        }
        out.slot(n) = acc;
    }
    return out;
}

ModMorphism delta_inf(const ModMorphism& f, int upto) {
    if (upto <= 0)
        upto = std::max(f.bound(),
                        2 * std::max(f.src->arity_bound(), f.src->alg()->arity_bound()));
    ModMorphism out{f.src, f.tgt, f.deg + 1, {}};
    for (int n = 1; n <= upto; ++n) {
        out.slot(n) = module_plus_sum(
            *f.src, n, f.tgt->space(), f.deg + 2 - n, [&](int k) { return f.f(k); },
            [&](int r, int s, int t) { return f.deg + r + s * t + 1; });
    }
    return out;
}

/* the three classical sums of the degree-d morphism condition */
static HomMap mod_morphism_defect_sums(const ModMorphism& f, int n) {
    const AInfModule& sm = *f.src;
    const AInfModule& tm = *f.tgt;
    HomMap plus = module_plus_sum(
        sm, n, tm.space(), f.deg + 2 - n, [&](int k) { return f.f(k); },
        [&](int r, int s, int t) { return f.deg + r + s * t; });
    HomMap zero = module_zero_sum(
        sm, n, tm.space(), f.deg + 2 - n, [&](int k) { return f.f(k); },
        [&](int s) { return sm.op(s); }, [&](int s, int t) { return f.deg + s * t; });
    HomMap minus = module_zero_sum(
        sm, n, tm.space(), f.deg + 2 - n, [&](int k) { return tm.op(k); },
        [&](int s) { return f.f(s); },
        [&](int r, int s) { return (f.deg + r + 1) * s + 1; });
    return plus + zero + minus;
}

CheckResult check_mod_morphism(const ModMorphism& f, int n) {
    HomMap sums = mod_morphism_defect_sums(f, n);
    // operator route: delta_inf(f) + m^N o f - (-1)^{|f|} f o m^M = -sums
    ModMorphism mN = structure_family(f.tgt);
    ModMorphism mM = structure_family(f.src);
    HomMap op = delta_inf(f, n).f(n) + compose_mod(mN, f, n).f(n) -
                compose_mod(f, mM, n).f(n).scaled(sign_scalar(f.src->field(), f.deg));
    if (!(op == -sums))
        throw BocsError(Err::FormulationMismatch,
                        "operator and classical sums disagree at n=" + std::to_string(n));
    if (sums.is_zero()) return CheckResult::pass();
    return CheckResult::fail("morphism condition fails at n=" + std::to_string(n) + ": " +
                             sums.describe_entry());
}

CheckResult check_mod_morphism_all(const ModMorphism& f) {
    int bound = std::max({f.src->arity_bound(), f.tgt->arity_bound(),
                          f.src->alg()->arity_bound()});
    for (int n = 1; n <= 2 * bound; ++n)
        if (auto r = check_mod_morphism(f, n); !r) return r;
    return CheckResult::pass();
}

CheckResult check_mod_homotopy(const ModHomotopy& h, const ModMorphism& f,
                               const ModMorphism& g, int n) {
    const AInfModule& sm = *f.src;
    const AInfModule& tm = *f.tgt;
    // H1 = sum (-1)^{rs} m^N_{1+s}(h_r (x) id^s)
    HomMap h1 = module_zero_sum(
        sm, n, tm.space(), 1 - n, [&](int k) { return tm.op(k); },
        [&](int s) { return h.h(s); }, [](int r, int s) { return r * s; });
    // H2 = sum (-1)^{st} h_{1+t}(m^M_s (x) id^t)
    HomMap h2 = module_zero_sum(
        sm, n, tm.space(), 1 - n, [&](int k) { return h.h(k); },
        [&](int s) { return sm.op(s); }, [](int s, int t) { return s * t; });
    // H3 = sum (-1)^{r+st} h_{r+1+t}(id^r (x) m_s (x) id^t)
    HomMap h3 = module_plus_sum(
        sm, n, tm.space(), 1 - n, [&](int k) { return h.h(k); },
        [](int r, int s, int t) { return r + s * t; });
    HomMap classical = f.f(n) - g.f(n) - h1 - h2 - h3;
    // operator route
    ModMorphism hm{f.src, f.tgt, -1, {}};
    for (int k = 1; k <= h.bound(); ++k) hm.slot(k) = h.h(k);
    ModMorphism mN = structure_family(f.tgt);
    ModMorphism mM = structure_family(f.src);
    HomMap op = f.f(n) - g.f(n) - delta_inf(hm, n).f(n) - compose_mod(mN, hm, n).f(n) -
                compose_mod(hm, mM, n).f(n);
    if (!(classical == op))
        throw BocsError(Err::FormulationMismatch,
                        "homotopy formulations disagree at n=" + std::to_string(n));
    if (classical.is_zero()) return CheckResult::pass();
    return CheckResult::fail("homotopy condition fails at n=" + std::to_string(n) + ": " +
                             classical.describe_entry());
}

CheckResult check_mod_homotopy_all(const ModHomotopy& h, const ModMorphism& f,
                                   const ModMorphism& g) {
    int bound = std::max({f.src->arity_bound(), f.tgt->arity_bound(),
                          f.src->alg()->arity_bound()});
    for (int n = 1; n <= 2 * bound; ++n)
        if (auto r = check_mod_homotopy(h, f, g, n); !r) return r;
    return CheckResult::pass();
}

/* ---- bridge ------------------------------------------------------------ */

bool bar_matches(const BocsPtr& b, const AInfAlgebra& a) {
    return b->is_bar() && b->algebra()->space()->same_as(*a.space());
}

/* pack hat components into (f0, f1-per-word) form */
static GModMorphism pack_hats(const BocsPtr& bar, const SpacePtr& m1, const SpacePtr& n1,
                              int deg, const std::vector<HomMap>& hats) {
    GModMorphism out(bar, m1, n1, deg);
    if (!hats.empty()) out.set_f0(hats[0]);
    for (int n = 1; n < (int)hats.size(); ++n) {
        const HomMap& hn = hats[n];
        if (hn.is_zero()) continue;
        std::map<int, HomMap> blocks;
        const auto& prod = *hn.dom();
        for (const auto& [rc, v] : hn.entries()) {
            const auto& w = prod.word(rc.second);
            std::vector<int> cw(w.begin() + 1, w.end());
            int c = bar->word_index(cw);
            if (c < 0) throw BocsError(Err::TruncationTooSmall, "bar level too small");
            auto it = blocks.find(c);
            if (it == blocks.end())
                it = blocks
                         .emplace(c, HomMap(m1, n1, deg + bar->cbar()->at(c).deg, false))
                         .first;
            it->second.add(rc.first, w[0], v);
        }
        for (auto& [c, blk] : blocks) out.add_f1(c, blk);
    }
    return out;
}

/* assemble the product-space hat component of word length n */
static HomMap unpack_hat(const BocsPtr& bar, const GModMorphism& f, int n) {
    if (n == 0) return f.f0();
    std::vector<SpacePtr> factors{f.dom()};
    for (int i = 0; i < n; ++i) factors.push_back(bar->shifted_atom());
    SpacePtr prod = GradedSpace::tensor(factors);
    HomMap out(prod, f.cod(), f.deg());
    for (const auto& [c, blk] : f.f1_blocks()) {
        const auto& w = bar->word(c);
        if ((int)w.size() != n) continue;
        for (const auto& [rc, v] : blk.entries()) {
            std::vector<int> pw{rc.second};
            pw.insert(pw.end(), w.begin(), w.end());
            int col = prod->index_of_word(pw);
            if (col < 0) throw BocsError(Err::IdempotentMismatch, "hat word escape");
            out.add(rc.first, col, v);
        }
    }
    return out;
}

TwistedModule to_twisted(const AInfModule& m, const BocsPtr& bar) {
    if (!bar_matches(bar, *m.alg()))
        throw BocsError(Err::ModuleMismatch, "bocs is not the bar of this algebra");
    if (bar->levels() < m.arity_bound() - 1)
        throw BocsError(Err::TruncationTooSmall,
                        "bar level must be >= module arity_bound - 1");
    SpacePtr m1 = GradedSpace::shifted(m.space());
    std::vector<HomMap> hats;
    for (int n = 0; n <= std::min(bar->levels(), m.arity_bound() - 1); ++n) {
        std::vector<SpacePtr> shifted{m1};
        for (int i = 0; i < n; ++i) shifted.push_back(bar->shifted_atom());
        hats.push_back(hat_translate(m.op(n + 1), shifted, m1));
    }
    GModMorphism u = pack_hats(bar, m1, m1, 1, hats);
    return TwistedModule{bar, m1, u};
}

AInfModule from_twisted(const TwistedModule& mu, const AlgPtr& alg, int arity_bound) {
    const BocsPtr& bar = mu.bocs;
    if (!bar_matches(bar, *alg))
        throw BocsError(Err::ModuleMismatch, "bocs is not the bar of this algebra");
    SpacePtr m = GradedSpace::shifted(mu.m, -1);
    AInfModule out(alg, m, arity_bound);
    for (int n = 0; n < arity_bound && n <= bar->levels(); ++n) {
        HomMap hat = unpack_hat(bar, mu.u, n);
        if (hat.is_zero() && n > 0) continue;
        std::vector<SpacePtr> unshifted{m};
        for (int i = 0; i < n; ++i) unshifted.push_back(alg->space());
        out.set_op(n + 1, unhat_translate(hat, unshifted, m));
    }
    return out;
}

GModMorphism bridge_morphism(const ModMorphism& f, const BocsPtr& bar) {
    if (!bar_matches(bar, *f.src->alg()))
        throw BocsError(Err::ModuleMismatch, "bocs is not the bar of this algebra");
    SpacePtr m1 = GradedSpace::shifted(f.src->space());
    SpacePtr n1 = GradedSpace::shifted(f.tgt->space());
    std::vector<HomMap> hats;
    for (int n = 0; n <= std::min(bar->levels(), f.bound() - 1); ++n) {
        std::vector<SpacePtr> shifted{m1};
        for (int i = 0; i < n; ++i) shifted.push_back(bar->shifted_atom());
        hats.push_back(hat_translate(f.f(n + 1), shifted, n1));
    }
    return pack_hats(bar, m1, n1, f.deg, hats);
}

ModMorphism unbridge_morphism(const GModMorphism& f, const ModPtr& src,
                              const ModPtr& tgt) {
    const BocsPtr& bar = f.bocs();
    ModMorphism out{src, tgt, f.deg(), {}};
    for (int n = 0; n <= bar->levels(); ++n) {
        HomMap hat = unpack_hat(bar, f, n);
        std::vector<SpacePtr> unshifted{src->space()};
        for (int i = 0; i < n; ++i) unshifted.push_back(src->alg()->space());
        out.slot(n + 1) = unhat_translate(hat, unshifted, tgt->space());
    }
    return out;
}

/* ---- shift and J ------------------------------------------------------- */

ModShift shift_mod(const ModPtr& m) {
    SpacePtr m1 = GradedSpace::shifted(m->space());
    HomMap sigma = HomMap::shift_iso(m->space(), m1);
    HomMap sigma_inv = inverse_bijection(sigma);
    auto out = std::make_shared<AInfModule>(m->alg(), m1, m->arity_bound());
    const AInfAlgebra& a = *m->alg();
    for (int n = 1; n <= m->arity_bound(); ++n) {
        if (m->op(n).is_zero()) continue;
        HomMap t = sigma_inv;
        if (n > 1) {
            HomMap ida = HomMap::identity(a.power(n - 1));
            t = tensor_many({&sigma_inv, &ida});
        }
        out->set_op(n,
                    sigma.after(m->op(n)).after(t).scaled(sign_scalar(m->field(), n)));
    }
    return {out, sigma};
}

ModJ jfun_mod(const ModPtr& m) {
    ModJ out{nullptr, shift_mod(m), {}, {}, {}, {}, {}, {}};
    const AInfAlgebra& a = *m->alg();
    SumSpace ds = direct_sum(m->space(), out.sh.shifted->space());
    auto j = std::make_shared<AInfModule>(m->alg(), ds.sum, m->arity_bound());
    HomMap sigma_inv = inverse_bijection(out.sh.sigma);
    for (int n = 1; n <= m->arity_bound(); ++n) {
        HomMap acc(j->mpower(n - 1), ds.sum, 2 - n);
        for (int side = 0; side < 2; ++side) {
            const HomMap& opn = side == 0 ? m->op(n) : out.sh.shifted->op(n);
            if (opn.is_zero()) continue;
            const HomMap& in = side == 0 ? ds.in1 : ds.in2;
            const HomMap& pr = side == 0 ? ds.pr1 : ds.pr2;
            HomMap t = pr;
            if (n > 1) {
                HomMap ida = HomMap::identity(a.power(n - 1));
                t = tensor_many({&pr, &ida});
            }
            acc = acc + in.after(opn).after(t);
        }
        if (n == 1) acc = acc + ds.in1.after(sigma_inv).after(ds.pr2);
        if (!acc.is_zero()) j->set_op(n, acc);
    }
    out.j = j;
    out.in1 = ds.in1;
    out.in2 = ds.in2;
    out.pr1 = ds.pr1;
    out.pr2 = ds.pr2;
    out.alpha = ModMorphism{m, j, 0, {}};
    out.alpha.slot(1) = ds.in1;
    out.beta = ModMorphism{j, out.sh.shifted, 0, {}};
    out.beta.slot(1) = ds.pr2;
    return out;
}

/* ---- Psi and Delta ------------------------------------------------------ */

BocsMorphism psi_of_morphism(const AlgMorphism& phi, const BocsPtr& bar_src,
                             const BocsPtr& bar_tgt) {
    if (auto r = check_alg_morphism_all(phi); !r)
        throw BocsError(Err::NotAnAlgMorphism, r.witness);
    if (!bar_matches(bar_src, *phi.src) || !bar_matches(bar_tgt, *phi.tgt))
        throw BocsError(Err::ModuleMismatch, "bars do not match the morphism");
    SpacePtr a1 = bar_src->shifted_atom();
    SpacePtr b1 = bar_tgt->shifted_atom();
    std::vector<std::map<int, std::vector<std::pair<int, Scalar>>>> cols;
    for (int i = 1; i <= phi.bound(); ++i) {
        HomMap h = hat_translate(phi.f(i), std::vector<SpacePtr>((size_t)i, a1), b1);
        std::map<int, std::vector<std::pair<int, Scalar>>> ci;
        for (const auto& [rc, v] : h.entries()) ci[rc.second].push_back({rc.first, v});
        cols.push_back(std::move(ci));
    }

    HomMap psi(bar_src->cbar(), bar_tgt->cbar(), 0);
    for (int c = 0; c < bar_src->cbar()->dim(); ++c) {
        const auto& w = bar_src->word(c);
        int n = (int)w.size();
        for (const auto& parts : compositions(n)) {
            bool dead = false;
            for (int i : parts)
                if (i > phi.bound()) dead = true;
            if (dead) continue;
            // all hat components have degree 0: no Koszul signs
            std::vector<std::pair<std::vector<int>, Scalar>> acc = {
                {{}, Scalar::one(phi.src->field())}};
            size_t pos = 0;
            for (int len : parts) {
                std::vector<int> seg(w.begin() + pos, w.begin() + pos + len);
                pos += len;
                int col =
                    len == 1 ? seg[0] : bar_src->shifted_power(len)->index_of_word(seg);
                std::vector<std::pair<std::vector<int>, Scalar>> next;
                if (col >= 0) {
                    auto it = cols[len - 1].find(col);
                    if (it != cols[len - 1].end())
                        for (const auto& [row, v] : it->second)
                            for (const auto& [pw, pv] : acc) {
                                auto nw = pw;
                                nw.push_back(row);
                                next.push_back({nw, pv * v});
                            }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            for (const auto& [bw, v] : acc) {
                int row = bar_tgt->word_index(bw);
                if (row < 0)
                    throw BocsError(Err::TruncationTooSmall, "target bar level too small");
                psi.add(row, c, v);
            }
        }
    }
    BocsMorphism out{bar_src, bar_tgt, psi};
    if (auto r = check_bocs_morphism(out); !r)
        throw BocsError(Err::ChainMapDefect,
                        "Psi(phi) is not a bocs morphism: " + r.witness);
    return out;
}

HomMap delta_coderivation_family(const std::vector<HomMap>& comps, int d,
                                 const AlgMorphism& f, const AlgMorphism& g,
                                 const BocsPtr& bar_src, const BocsPtr& bar_tgt) {
    SpacePtr a1 = bar_src->shifted_atom();
    SpacePtr b1 = bar_tgt->shifted_atom();
    Field F = f.src->field();
    auto hat_cols = [&](const HomMap& p, int i) {
        HomMap h = hat_translate(p, std::vector<SpacePtr>((size_t)i, a1), b1);
        std::map<int, std::vector<std::pair<int, Scalar>>> ci;
        for (const auto& [rc, v] : h.entries()) ci[rc.second].push_back({rc.first, v});
        return ci;
    };
    std::vector<std::map<int, std::vector<std::pair<int, Scalar>>>> fh, gh, ph;
    for (int i = 1; i <= f.bound(); ++i) fh.push_back(hat_cols(f.f(i), i));
    for (int i = 1; i <= g.bound(); ++i) gh.push_back(hat_cols(g.f(i), i));
    for (int i = 1; i <= (int)comps.size(); ++i) ph.push_back(hat_cols(comps[i - 1], i));

    HomMap xi(bar_src->cbar(), bar_tgt->cbar(), d);
    for (int c = 0; c < bar_src->cbar()->dim(); ++c) {
        const auto& w = bar_src->word(c);
        int n = (int)w.size();
        for (int left = 0; left <= n - 1; ++left) {
            std::vector<std::vector<int>> lefts =
                left == 0 ? std::vector<std::vector<int>>{{}} : compositions(left);
            int pre_deg = 0;
            for (int i = 0; i < left; ++i) pre_deg += a1->at(w[i]).deg;
            for (int s = 1; left + s <= n; ++s) {
                if (s > (int)ph.size()) continue;
                int rest = n - left - s;
                std::vector<std::vector<int>> rights =
                    rest == 0 ? std::vector<std::vector<int>>{{}} : compositions(rest);
                // the degree-d middle slot crosses the shifted prefix
                Scalar ks = sign_scalar(F, d * pre_deg);
                for (const auto& iv : lefts) {
                    bool deadl = false;
                    for (int i : iv)
                        if (i > f.bound()) deadl = true;
                    if (deadl) continue;
                    for (const auto& jv : rights) {
                        bool dead = false;
                        for (int j : jv)
                            if (j > g.bound()) dead = true;
                        if (dead) continue;
                        std::vector<std::pair<std::vector<int>, Scalar>> acc = {{{}, ks}};
                        size_t pos = 0;
                        auto push_segment =
                            [&](const std::map<int, std::vector<std::pair<int, Scalar>>>&
                                    colmap,
                                int len) {
                                std::vector<int> seg(w.begin() + pos,
                                                     w.begin() + pos + len);
                                pos += len;
                                int col = len == 1
                                              ? seg[0]
                                              : bar_src->shifted_power(len)
                                                    ->index_of_word(seg);
                                std::vector<std::pair<std::vector<int>, Scalar>> next;
                                auto it = col < 0 ? colmap.end() : colmap.find(col);
                                if (it != colmap.end())
                                    for (const auto& [row, v] : it->second)
                                        for (const auto& [pw, pv] : acc) {
                                            auto nw = pw;
                                            nw.push_back(row);
                                            next.push_back({nw, pv * v});
                                        }
                                acc = std::move(next);
                            };
                        for (int i : iv) {
                            if (acc.empty()) break;
                            push_segment(fh[i - 1], i);
                        }
                        if (!acc.empty()) push_segment(ph[s - 1], s);
                        for (int j : jv) {
                            if (acc.empty()) break;
                            push_segment(gh[j - 1], j);
                        }
                        for (const auto& [bw, v] : acc) {
                            int row = bar_tgt->word_index(bw);
                            if (row < 0)
                                throw BocsError(Err::TruncationTooSmall,
                                                "target bar level too small");
                            xi.add(row, c, v);
                        }
                    }
                }
            }
        }
    }
    return xi;
}

HomMap delta_coderivation(const AlgHomotopy& h, const AlgMorphism& f,
                          const AlgMorphism& g, const BocsPtr& bar_src,
                          const BocsPtr& bar_tgt) {
    std::vector<HomMap> comps;
    for (int i = 1; i <= h.bound(); ++i) comps.push_back(h.h(i));
    return delta_coderivation_family(comps, -1, f, g, bar_src, bar_tgt);
}

CheckResult check_phi_psi_coderivation(const BocsMorphism& phi, const BocsMorphism& psi,
                                       const HomMap& xi) {
    const auto& a = *phi.src;
    const auto& b = *phi.tgt;
    auto xicols = xi.columns();
    auto phicols = phi.map.columns();
    auto psicols = psi.map.columns();
    for (int i = 0; i < a.cbar()->dim(); ++i) {
        std::map<std::array<int, 2>, Scalar> lhs, rhs;
        auto add2 = [](std::map<std::array<int, 2>, Scalar>& m, std::array<int, 2> k,
                       const Scalar& v) {
            auto it = m.find(k);
            if (it == m.end()) {
                if (!v.is_zero()) m.emplace(k, v);
            } else {
                it->second += v;
                if (it->second.is_zero()) m.erase(it);
            }
        };
        for (const auto& [j, v] : xicols[i])
            for (const auto& t : b.mubar(j)) add2(lhs, {t.c1, t.c2}, v * t.coef);
        for (const auto& t : a.mubar(i)) {
            // (phi (x) xi)(c1 (x) c2) = (-1)^{|xi||c1|} phi(c1) (x) xi(c2)
            Scalar sg = sign_scalar(xi.field(), xi.deg() * a.cbar()->at(t.c1).deg);
            for (const auto& [j1, v1] : phicols[t.c1])
                for (const auto& [j2, v2] : xicols[t.c2])
                    add2(rhs, {j1, j2}, t.coef * v1 * v2 * sg);
            for (const auto& [j1, v1] : xicols[t.c1])
                for (const auto& [j2, v2] : psicols[t.c2])
                    add2(rhs, {j1, j2}, t.coef * v1 * v2);
        }
        if (lhs != rhs)
            return CheckResult::fail("coderivation condition fails on " +
                                     a.cbar()->at(i).label);
    }
    return CheckResult::pass();
}

/* ---- restriction -------------------------------------------------------- */

static HomMap restrict_component(const AlgMorphism& phi, const SpacePtr& dom_mpower,
                                 const SpacePtr& m_space,
                                 const std::function<HomMap(int)>& f, int fdeg,
                                 const SpacePtr& out_space, int n) {
    // sum over i_1+...+i_r = n-1 of (-1)^{sgn} f_{r+1}(id_M (x) phi_{i_1} (x) ...)
    Field F = phi.src->field();
    if (n == 1) return f(1);
    HomMap acc(dom_mpower, out_space, fdeg + 1 - n);
    HomMap idm = HomMap::identity(m_space);
    for (const auto& parts : compositions(n - 1)) {
        int r = (int)parts.size();
        HomMap fr = f(r + 1);
        if (fr.is_zero()) continue;
        std::vector<HomMap> fac{idm};
        bool dead = false;
        for (int i : parts) {
            fac.push_back(phi.f(i));
            if (fac.back().is_zero()) dead = true;
        }
        if (dead) continue;
        std::vector<const HomMap*> ptrs;
        for (const auto& x : fac) ptrs.push_back(&x);
        acc = acc +
              fr.after(tensor_many(ptrs)).scaled(sign_scalar(F, sgn_parity(parts)));
    }
    return acc;
}

AInfModule restrict_mod(const AlgMorphism& phi, const AInfModule& m) {
    if (auto r = check_alg_morphism_all(phi); !r)
        throw BocsError(Err::NotAnAlgMorphism, r.witness);
    if (!m.alg()->space()->same_as(*phi.tgt->space()))
        throw BocsError(Err::ModuleMismatch, "module is not over the target algebra");
    // exact support bound: R(m^M)_n uses m^M_{r+1} with r parts of size <= bound(phi)
    int cap = 1 + (m.arity_bound() - 1) * std::max(phi.bound(), 1);
    AInfModule out(phi.src, m.space(), cap);
    for (int n = 1; n <= cap; ++n) {
        HomMap rn = restrict_component(
            phi, out.mpower(n - 1), m.space(), [&](int k) { return m.op(k); }, 1,
            m.space(), n);
        if (!rn.is_zero()) out.set_op(n, rn);
    }
    return out;
}

ModMorphism restrict_mod_morphism(const AlgMorphism& phi, const ModMorphism& f,
                                  const ModPtr& rsrc, const ModPtr& rtgt, int upto) {
    ModMorphism out{rsrc, rtgt, f.deg, {}};
    int support = 1 + (f.bound() - 1) * std::max(phi.bound(), 1);
    int cap = upto > 0 ? std::min(upto, support)
                       : std::min(support, std::max(2 * phi.src->arity_bound(),
                                                    f.bound()));
    for (int n = 1; n <= cap; ++n)
        out.slot(n) = restrict_component(
            phi, rsrc->mpower(n - 1), rsrc->space(), [&](int k) { return f.f(k); },
            f.deg, rtgt->space(), n);
    return out;
}

/* ---- homology ----------------------------------------------------------- */

std::map<std::pair<int, int>, int> module_homology(const AInfModule& m) {
    return complex_homology(m.op(1));
}

CheckResult is_quasi_iso(const ModMorphism& f) {
    if (f.deg != 0) return CheckResult::fail("quasi-isomorphisms have degree 0");
    return quasi_iso_check(f.f(1), f.src->op(1), f.tgt->op(1));
}

ModHomotopyInverse mod_homotopy_inverse(const ModMorphism& f, const BocsPtr& bar) {
    if (auto r = is_quasi_iso(f); !r) throw BocsError(Err::NotQuasiIso, r.witness);
    TwistedModule mu = to_twisted(*f.src, bar);
    TwistedModule nv = to_twisted(*f.tgt, bar);
    GModMorphism bf = bridge_morphism(f, bar);
    HomotopyInverse hi = homotopy_inverse(bf, mu, nv);
    ModHomotopyInverse out{unbridge_morphism(hi.g, f.tgt, f.src), {}, {}};
    ModMorphism wfg = unbridge_morphism(hi.h_fg, f.tgt, f.tgt);
    ModMorphism wgf = unbridge_morphism(hi.h_gf, f.src, f.src);
    out.h_fg = ModHomotopy{f.tgt, f.tgt, wfg.comps};
    out.h_gf = ModHomotopy{f.src, f.src, wgf.comps};
    return out;
}

/* ---- module-side oracles ------------------------------------------------ */

ModPtr regular_module(const AlgPtr& a) {
    // forget the left structure: same labels on a right-module copy of A
    std::vector<BasisElem> basis;
    for (const auto& b : a->space()->basis()) basis.push_back({b.label, b.deg, 0, b.rid});
    auto sp = GradedSpace::make(a->space()->base(), false, basis);
    auto m = std::make_shared<AInfModule>(a, sp, a->arity_bound());
    for (int n = 1; n <= a->arity_bound(); ++n) {
        if (a->m(n).is_zero()) continue;
        HomMap op(m->mpower(n - 1), sp, 2 - n);
        const auto& adom = *a->power(n);
        for (const auto& [rc, v] : a->m(n).entries()) {
            int row = sp->index_of(a->space()->at(rc.first).label);
            std::vector<int> w =
                adom.is_product() ? adom.word(rc.second) : std::vector<int>{rc.second};
            int col;
            if (n == 1) {
                col = sp->index_of(a->space()->at(w[0]).label);
            } else {
                std::vector<int> mw{sp->index_of(a->space()->at(w[0]).label)};
                mw.insert(mw.end(), w.begin() + 1, w.end());
                col = m->mpower(n - 1)->index_of_word(mw);
            }
            if (row < 0 || col < 0)
                throw BocsError(Err::ModuleMismatch, "regular module relabelling failed");
            op.add(row, col, v);
        }
        m->set_op(n, op);
    }
    return m;
}

static ModPtr transport_module(const ModPtr& m, const HomMap& q) {
    auto out = std::make_shared<AInfModule>(m->alg(), m->space(), m->arity_bound());
    HomMap qinv = solve_splitting(q).section;
    const AInfAlgebra& a = *m->alg();
    for (int n = 1; n <= m->arity_bound(); ++n) {
        if (m->op(n).is_zero()) continue;
        HomMap t = qinv;
        if (n > 1) {
            HomMap ida = HomMap::identity(a.power(n - 1));
            t = tensor_many({&qinv, &ida});
        }
        out->set_op(n, q.after(m->op(n)).after(t));
    }
    return out;
}

static ModPtr direct_sum_modules(const ModPtr& x, const ModPtr& y) {
    SumSpace ds = direct_sum(x->space(), y->space());
    int arity = std::max(x->arity_bound(), y->arity_bound());
    auto out = std::make_shared<AInfModule>(x->alg(), ds.sum, arity);
    const AInfAlgebra& a = *x->alg();
    for (int n = 1; n <= arity; ++n) {
        HomMap acc(out->mpower(n - 1), ds.sum, 2 - n);
        for (int side = 0; side < 2; ++side) {
            const AInfModule& src = side == 0 ? *x : *y;
            if (n > src.arity_bound() || src.op(n).is_zero()) continue;
            const HomMap& in = side == 0 ? ds.in1 : ds.in2;
            const HomMap& pr = side == 0 ? ds.pr1 : ds.pr2;
            HomMap t = pr;
            if (n > 1) {
                HomMap ida = HomMap::identity(a.power(n - 1));
                t = tensor_many({&pr, &ida});
            }
            acc = acc + in.after(src.op(n)).after(t);
        }
        if (!acc.is_zero()) out->set_op(n, acc);
    }
    return out;
}

ModPtr gen_module(Rng& rng, const AlgPtr& a, int max_dim) {
    ModPtr base;
    if (rng.chance(60) && a->space()->dim() <= max_dim) {
        base = regular_module(a);
    } else {
        auto sp = gen_space(rng, a->space()->base(),
                            (int)rng.pick(1, std::max(1, max_dim / 2)), -1, 2, false,
                            "gm");
        auto cm = std::make_shared<AInfModule>(a, sp, 1);
        cm->set_op(1, gen_square_zero(rng, sp, 60));
        base = cm;
    }
    if (rng.chance(40) && base->space()->dim() + 2 <= max_dim) {
        auto sp = gen_space(rng, a->space()->base(), 2, -1, 2, false, "gx");
        auto cm = std::make_shared<AInfModule>(a, sp, 1);
        cm->set_op(1, gen_square_zero(rng, sp, 60));
        base = direct_sum_modules(base, cm);
    }
    return transport_module(base, gen_invertible_map(rng, base->space()));
}

GenModMor gen_mod_morphism(Rng& rng, const ModPtr& m) {
    HomMap q = gen_invertible_map(rng, m->space());
    ModPtr tgt = transport_module(m, q);
    GenModMor out{m, tgt, ModMorphism{m, tgt, 0, {}}};
    out.f.slot(1) = q;
    int horizon = 2 * std::max(m->arity_bound(), m->alg()->arity_bound());
    // perturb with a level-2 kernel element, then re-solve the higher levels
    for (int n = 2; n <= horizon; ++n) {
        auto op = [&](const HomMap& x) {
            ModMorphism cand = out.f;
            cand.slot(n) = x;
            return mod_morphism_defect_sums(cand, n);
        };
        HomMap zero(m->mpower(n - 1), tgt->space(), 1 - n);
        HomMap base = op(zero);
        auto sol = solve_linear_operator([&](const HomMap& x) { return op(x) - base; },
                                         m->mpower(n - 1), tgt->space(), 1 - n, -base);
        if (!sol) {
            out.f.comps.resize(1); // strict transport is always valid
            return out;
        }
        HomMap pick = *sol;
        if (n == 2) {
            auto ker = kernel_of_linear_operator(
                [&](const HomMap& x) { return op(x) - base; }, m->mpower(n - 1),
                tgt->space(), 1 - n, true,
                admissible_slots(*m->mpower(n - 1), *tgt->space(), 1 - n));
            for (const auto& k : ker)
                if (rng.chance(50)) pick = pick + k.scaled(rng.scalar(m->field(), 2));
        }
        out.f.slot(n) = pick;
    }
    return out;
}

AlgMorphism gen_alg_morphism(Rng& rng, const AlgPtr& a) {
    HomMap p = gen_invertible_map(rng, a->space());
    AlgPtr b = transport_algebra(a, p);
    AlgMorphism f{a, b, {}};
    f.slot(1) = p;
    int horizon = 2 * a->arity_bound();
    for (int n = 2; n <= horizon; ++n) {
        auto op = [&](const HomMap& x) {
            AlgMorphism cand = f;
            cand.slot(n) = x;
            return morphism_defect(cand, n);
        };
        HomMap zero(a->power(n), b->space(), 1 - n);
        HomMap base = op(zero);
        auto sol = solve_linear_operator([&](const HomMap& x) { return op(x) - base; },
                                         a->power(n), b->space(), 1 - n, -base);
        if (!sol) {
            f.comps.resize(1);
            return f;
        }
        HomMap pick = *sol;
        if (n == 2) {
            auto ker = kernel_of_linear_operator(
                [&](const HomMap& x) { return op(x) - base; }, a->power(n), b->space(),
                1 - n, true, admissible_slots(*a->power(n), *b->space(), 1 - n));
            for (const auto& k : ker)
                if (rng.chance(50)) pick = pick + k.scaled(rng.scalar(a->field(), 2));
        }
        f.slot(n) = pick;
    }
    return f;
}

GenHomotopicPair gen_homotopic_pair(Rng& rng, const AlgPtr& a) {
    AlgMorphism f = gen_alg_morphism(rng, a);
    int horizon = 2 * a->arity_bound();
    for (int attempt = 0; attempt < 3; ++attempt) {
        AlgHomotopy h{f.src, f.tgt, {}};
        int hb = attempt == 0 ? 2 : 1;
        for (int n = 1; n <= hb; ++n) {
            HomMap hn(a->power(n), f.tgt->space(), -n);
            for (auto [row, col] : admissible_slots(*a->power(n), *f.tgt->space(), -n))
                if (rng.chance(40)) hn.set(row, col, rng.scalar(a->field(), 2));
            h.slot(n) = hn;
        }
        AlgMorphism g{f.src, f.tgt, {}};
        for (int n = 1; n <= horizon; ++n)
            g.slot(n) = f.f(n) - homotopy_h_part(h, n) - homotopy_fg_part(h, f, g, n);
        if (check_alg_morphism_all(g) && check_alg_homotopy_all(h, f, g))
            return {f, g, h};
    }
    AlgHomotopy h0{f.src, f.tgt, {}};
    h0.slot(1);
    return {f, f, h0};
}

} // namespace bocskit
