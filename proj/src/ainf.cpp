#include "bocskit/ainf.hpp"

namespace bocskit {

AInfAlgebra::AInfAlgebra(SpacePtr space, int arity_bound)
    : space_(std::move(space)), arity_(arity_bound) {
    if (!space_->bimodule())
        throw BocsError(Err::ModuleMismatch, "A-infinity algebra needs an S-S-bimodule");
    if (arity_ < 1) throw BocsError(Err::ParseError, "arity_bound must be >= 1");
}

SpacePtr AInfAlgebra::power(int n) const {
    if (n < 1) throw BocsError(Err::ParseError, "tensor power must be >= 1");
    while ((int)powers_.size() < n) {
        if (powers_.empty())
            powers_.push_back(space_);
        else
            powers_.push_back(GradedSpace::tensor({powers_.back(), space_}));
    }
    return powers_[n - 1];
}

const HomMap& AInfAlgebra::m(int n) const {
    if (n >= 1 && n <= (int)ops_.size()) return ops_[n - 1];
    auto it = zeros_.find(n);
    if (it == zeros_.end())
        it = zeros_.emplace(n, HomMap(power(n), space_, 2 - n)).first;
    return it->second;
}

void AInfAlgebra::set_op(int n, HomMap op) {
    if (n > arity_) throw BocsError(Err::ParseError, "operation beyond arity_bound");
    if (op.deg() != 2 - n || !op.dom()->same_as(*power(n)) || !op.cod()->same_as(*space_))
        throw BocsError(Err::ModuleMismatch,
                        "m_" + std::to_string(n) + " must be A^(x)" + std::to_string(n) +
                            " -> A of degree " + std::to_string(2 - n));
    while ((int)ops_.size() < n) {
        int k = (int)ops_.size() + 1;
        ops_.push_back(HomMap(power(k), space_, 2 - k));
    }
    ops_[n - 1] = std::move(op);
    zeros_.clear();
}

HomMap AlgMorphism::f(int n) const {
    if (n >= 1 && n <= (int)comps.size()) return comps[n - 1];
    return HomMap(src->power(n), tgt->space(), 1 - n);
}

HomMap& AlgMorphism::slot(int n) {
    while ((int)comps.size() < n) {
        int k = (int)comps.size() + 1;
        comps.push_back(HomMap(src->power(k), tgt->space(), 1 - k));
    }
    return comps[n - 1];
}

AlgMorphism AlgMorphism::identity(const AlgPtr& a) {
    AlgMorphism r{a, a, {}};
    r.slot(1) = HomMap::identity(a->space());
    return r;
}

AlgMorphism AlgMorphism::zero(const AlgPtr& a, const AlgPtr& b) {
    AlgMorphism r{a, b, {}};
    r.slot(1);
    return r;
}

bool AlgMorphism::equal_upto(const AlgMorphism& o, int n) const {
    for (int k = 1; k <= n; ++k)
        if (!(f(k) == o.f(k))) return false;
    return true;
}

HomMap AlgHomotopy::h(int n) const {
    if (n >= 1 && n <= (int)comps.size()) return comps[n - 1];
    return HomMap(src->power(n), tgt->space(), -n);
}

HomMap& AlgHomotopy::slot(int n) {
    while ((int)comps.size() < n) {
        int k = (int)comps.size() + 1;
        comps.push_back(HomMap(src->power(k), tgt->space(), -k));
    }
    return comps[n - 1];
}

int sgn_parity(const std::vector<int>& parts) {
    if (parts.empty()) throw BocsError(Err::EmptyPartition, "sgn of empty partition");
    int r = (int)parts.size();
    long s = 0;
    for (int u = 1; u <= r - 1; ++u) s += (long)(r - u) * (parts[u - 1] - 1);
    return (int)(((s % 2) + 2) % 2);
}

std::vector<std::vector<int>> compositions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int rest) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int i = 1; i <= rest; ++i) {
            cur.push_back(i);
            rec(rest - i);
            cur.pop_back();
        }
    };
    rec(n);
    return out;
}

/* sum over r+s+t=n, s>=1 of sign(r,s,t) * outer_{r+1+t}(id^r (x) mid_s (x) id^t). */
static HomMap stasheff_like_sum(const AInfAlgebra& a, int n, const SpacePtr& out_space,
                                int out_deg,
                                const std::function<HomMap(int)>& outer,
                                const std::function<HomMap(int)>& mid,
                                const std::function<int(int, int, int)>& parity) {
    HomMap acc(a.power(n), out_space, out_deg);
    for (int s = 1; s <= n; ++s) {
        HomMap ms = mid(s);
        if (ms.is_zero()) continue;
        for (int r = 0; r + s <= n; ++r) {
            int t = n - r - s;
            HomMap fo = outer(r + 1 + t);
            if (fo.is_zero()) continue;
            std::vector<const HomMap*> factors;
            HomMap idr, idt;
            if (r > 0) {
                idr = HomMap::identity(a.power(r));
                factors.push_back(&idr);
            }
            factors.push_back(&ms);
            if (t > 0) {
                idt = HomMap::identity(a.power(t));
                factors.push_back(&idt);
            }
            HomMap term = fo.after(tensor_many(factors));
            acc = acc + term.scaled(sign_scalar(a.field(), parity(r, s, t)));
        }
    }
    return acc;
}

HomMap stasheff_defect(const AInfAlgebra& a, int n) {
    return stasheff_like_sum(
        a, n, a.space(), 3 - n, [&](int k) { return a.m(k); },
        [&](int s) { return a.m(s); },
        [](int r, int s, int t) { return r + s * t; });
}

HomMap stasheff_defect_primed(const AInfAlgebra& a, int n) {
    return stasheff_like_sum(
        a, n, a.space(), 3 - n, [&](int k) { return a.m(k); },
        [&](int s) { return a.m(s); },
        [](int r, int s, int t) { return r * s + t; });
}

CheckResult check_stasheff(const AInfAlgebra& a, int n) {
    HomMap z = stasheff_defect(a, n);
    if (z.is_zero()) return CheckResult::pass();
    return CheckResult::fail("S_" + std::to_string(n) + " fails at " + z.describe_entry());
}

CheckResult check_stasheff_all(const AInfAlgebra& a) {
    for (int n = 1; n <= 2 * a.arity_bound(); ++n)
        if (auto r = check_stasheff(a, n); !r) return r;
    return CheckResult::pass();
}

AInfAlgebra sign_translate(const AInfAlgebra& a) {
    AInfAlgebra b(a.space(), a.arity_bound());
    for (int n = 1; n <= a.arity_bound(); ++n) {
        long e = (long)n * (n - 1) / 2;
        b.set_op(n, a.m(n).scaled(sign_scalar(a.field(), (int)(e % 2))));
    }
    for (int n = 1; n <= 2 * a.arity_bound(); ++n) {
        long e = (long)n * (n - 1) / 2;
        HomMap zp = stasheff_defect_primed(b, n);
        HomMap z = stasheff_defect(a, n).scaled(sign_scalar(a.field(), (int)(e % 2)));
        if (!(zp == z))
            throw BocsError(Err::TranslationDefectMismatch,
                            "Z'_" + std::to_string(n) + " != (-1)^{n(n-1)/2} Z_n");
    }
    return b;
}

HomMap morphism_defect(const AlgMorphism& fm, int n) {
    const AInfAlgebra& a = *fm.src;
    const AInfAlgebra& b = *fm.tgt;
    // source side
    HomMap sum = stasheff_like_sum(
        a, n, b.space(), 2 - n, [&](int k) { return fm.f(k); },
        [&](int s) { return a.m(s); },
        [](int r, int s, int t) { return r + s * t; });
    // target side: m'_r (f_{i_1} (x) ... (x) f_{i_r}) over partitions of n
    for (const auto& parts : compositions(n)) {
        int r = (int)parts.size();
        HomMap outer = b.m(r);
        if (outer.is_zero()) continue;
        std::vector<HomMap> fs;
        bool dead = false;
        for (int i : parts) {
            fs.push_back(fm.f(i));
            if (fs.back().is_zero()) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        std::vector<const HomMap*> ptrs;
        for (const auto& x : fs) ptrs.push_back(&x);
        HomMap term = outer.after(tensor_many(ptrs));
        sum = sum - term.scaled(sign_scalar(a.field(), sgn_parity(parts)));
    }
    return sum;
}

CheckResult check_alg_morphism(const AlgMorphism& f, int n) {
    HomMap d = morphism_defect(f, n);
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("morphism condition fails at n=" + std::to_string(n) + ": " +
                             d.describe_entry());
}

CheckResult check_alg_morphism_all(const AlgMorphism& f) {
    int bound = std::max(f.src->arity_bound(), f.tgt->arity_bound());
    for (int n = 1; n <= 2 * bound; ++n)
        if (auto r = check_alg_morphism(f, n); !r) return r;
    return CheckResult::pass();
}

AlgMorphism compose_alg_morphisms(const AlgMorphism& g, const AlgMorphism& f, int upto) {
    if (!f.tgt->space()->same_as(*g.src->space()))
        throw BocsError(Err::AlgebraMismatch, "compose: target of f is not source of g");
    if (upto <= 0) {
        // exact support bound of the composite, capped at the checking horizon
        int horizon = 2 * std::max({f.src->arity_bound(), f.tgt->arity_bound(),
                                    g.tgt->arity_bound()});
        upto = std::min(f.bound() * g.bound(),
                        std::max({horizon, f.bound(), g.bound()}));
    }
    AlgMorphism r{f.src, g.tgt, {}};
    for (int n = 1; n <= upto; ++n) {
        HomMap acc(f.src->power(n), g.tgt->space(), 1 - n);
        for (const auto& parts : compositions(n)) {
            int s = (int)parts.size();
            HomMap gs = g.f(s);
            if (gs.is_zero()) continue;
            std::vector<HomMap> fs;
            bool dead = false;
            for (int i : parts) {
                fs.push_back(f.f(i));
                if (fs.back().is_zero()) {
                    dead = true;
                    break;
                }
            }
            if (dead) continue;
            std::vector<const HomMap*> ptrs;
            for (const auto& x : fs) ptrs.push_back(&x);
            acc = acc + gs.after(tensor_many(ptrs))
                            .scaled(sign_scalar(acc.field(), sgn_parity(parts)));
        }
        r.slot(n) = acc;
    }
    return r;
}

HomMap homotopy_h_part(const AlgHomotopy& h, int n) {
    const AInfAlgebra& a = *h.src;
    return stasheff_like_sum(
        a, n, h.tgt->space(), 1 - n, [&](int k) { return h.h(k); },
        [&](int s) { return a.m(s); },
        [](int r, int s, int t) { return r + s * t; });
}

HomMap homotopy_fg_part(const AlgHomotopy& h, const AlgMorphism& f, const AlgMorphism& g,
                        int n) {
    const AInfAlgebra& a = *h.src;
    const AInfAlgebra& b = *h.tgt;
    HomMap acc(a.power(n), b.space(), 1 - n);
    // i_1+...+i_r + s + j_1+...+j_t = n with middle factor h_s
    for (int left = 0; left <= n - 1; ++left) {
        std::vector<std::vector<int>> lefts;
        if (left == 0)
            lefts.push_back({});
        else
            lefts = compositions(left);
        for (const auto& iv : lefts) {
            for (int s = 1; left + s <= n; ++s) {
                int rest = n - left - s;
                std::vector<std::vector<int>> rights;
                if (rest == 0)
                    rights.push_back({});
                else
                    rights = compositions(rest);
                HomMap hs = h.h(s);
                if (hs.is_zero()) continue;
                for (const auto& jv : rights) {
                    int rr = (int)iv.size(), tt = (int)jv.size();
                    HomMap outer = b.m(rr + 1 + tt);
                    if (outer.is_zero()) continue;
                    std::vector<HomMap> fac;
                    bool dead = false;
                    for (int i : iv) {
                        fac.push_back(f.f(i));
                        if (fac.back().is_zero()) dead = true;
                    }
                    fac.push_back(hs);
                    for (int j : jv) {
                        fac.push_back(g.f(j));
                        if (fac.back().is_zero()) dead = true;
                    }
                    if (dead) continue;
                    // sgn = r(t+1) + st + sum_{u<r}(r-u)(1-i_u) + t sum_u i_u
                    //       + sum_{v<t}(t-v)(1-j_v)
                    long sg = (long)rr * (tt + 1) + (long)s * tt;
                    for (int u = 1; u <= rr - 1; ++u) sg += (long)(rr - u) * (1 - iv[u - 1]);
                    long si = 0;
                    for (int x : iv) si += x;
                    sg += (long)tt * si;
                    for (int v = 1; v <= tt - 1; ++v) sg += (long)(tt - v) * (1 - jv[v - 1]);
                    std::vector<const HomMap*> ptrs;
                    for (const auto& x : fac) ptrs.push_back(&x);
                    acc = acc + outer.after(tensor_many(ptrs))
                                    .scaled(sign_scalar(acc.field(),
                                                        (int)(((sg % 2) + 2) % 2)));
                }
            }
        }
    }
    return acc;
}

CheckResult check_alg_homotopy(const AlgHomotopy& h, const AlgMorphism& f,
                               const AlgMorphism& g, int n) {
    HomMap d = f.f(n) - g.f(n) - homotopy_h_part(h, n) - homotopy_fg_part(h, f, g, n);
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("homotopy condition fails at n=" + std::to_string(n) + ": " +
                             d.describe_entry());
}

CheckResult check_alg_homotopy_all(const AlgHomotopy& h, const AlgMorphism& f,
                                   const AlgMorphism& g) {
    int bound = std::max(f.src->arity_bound(), f.tgt->arity_bound());
    for (int n = 1; n <= 2 * bound; ++n)
        if (auto r = check_alg_homotopy(h, f, g, n); !r) return r;
    return CheckResult::pass();
}

AlgMorphism homotopy_boundary(const AlgHomotopy& h, const AlgMorphism& f,
                              const AlgMorphism& g) {
    AlgMorphism r{h.src, h.tgt, {}};
    int upto = std::max({f.bound(), g.bound(), h.bound()});
    for (int n = 1; n <= upto; ++n)
        r.slot(n) = homotopy_h_part(h, n) + homotopy_fg_part(h, f, g, n);
    return r;
}

} // namespace bocskit
