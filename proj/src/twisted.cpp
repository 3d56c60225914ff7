#include "bocskit/twisted.hpp"

#include <algorithm>
#include <set>

namespace bocskit {

TwistedModule TwistedModule::make(const BocsPtr& b, const SpacePtr& m, GModMorphism u) {
    if (u.deg() != 1 || !u.dom()->same_as(*m) || !u.cod()->same_as(*m))
        throw BocsError(Err::ModuleMismatch, "u must be an endomorphism of degree 1");
    return {b, m, std::move(u)};
}

CheckResult check_mc(const TwistedModule& mu) {
    GModMorphism d = hat_delta(mu.u) + compose(mu.u, mu.u);
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("Maurer-Cartan fails at " + d.describe());
}

CheckResult check_twisted_morphism(const GModMorphism& f, const TwistedModule& src,
                                   const TwistedModule& tgt) {
    GModMorphism d = hat_delta(f) + compose(tgt.u, f) -
                     compose(f, src.u).scaled(sign_scalar(f.field(), f.deg()));
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("twisted morphism condition fails at " + d.describe());
}

CheckResult check_homotopy(const GModMorphism& h, const GModMorphism& f,
                           const GModMorphism& g, const TwistedModule& src,
                           const TwistedModule& tgt) {
    if (h.deg() != -1) return CheckResult::fail("homotopy must have degree -1");
    GModMorphism d = f - g - hat_delta(h) - compose(tgt.u, h) - compose(h, src.u);
    if (d.is_zero()) return CheckResult::pass();
    return CheckResult::fail("homotopy condition fails at " + d.describe());
}

TwistedSum twisted_direct_sum(const TwistedModule& a, const TwistedModule& b) {
    SumSpace ds = direct_sum(a.m, b.m);
    GModMorphism i1 = embed(a.bocs, ds.in1), i2 = embed(a.bocs, ds.in2);
    GModMorphism p1 = embed(a.bocs, ds.pr1), p2 = embed(a.bocs, ds.pr2);
    GModMorphism u = compose(compose(i1, a.u), p1) + compose(compose(i2, b.u), p2);
    return {TwistedModule{a.bocs, ds.sum, u}, i1, i2, p1, p2};
}

TwistedModule transport(const GModMorphism& h, const TwistedModule& mu) {
    GModMorphism hinv = invert(h);
    GModMorphism v =
        compose(compose(h, mu.u), hinv).scaled(sign_scalar(h.field(), h.deg())) -
        compose(hat_delta(h), hinv);
    TwistedModule out{mu.bocs, h.cod(), v};
    if (auto r = check_mc(out); !r)
        throw BocsError(Err::ChainMapDefect, "transported structure fails MC: " + r.witness);
    return out;
}

ShiftData shift_twisted(const TwistedModule& mu) {
    SpacePtr m1 = GradedSpace::shifted(mu.m);
    HomMap sig = HomMap::shift_iso(mu.m, m1);
    GModMorphism sigma = embed(mu.bocs, sig);
    GModMorphism sigma_inv = embed(mu.bocs, inverse_bijection(sig));
    GModMorphism u1 = compose(compose(sigma, mu.u), sigma_inv);
    return {TwistedModule{mu.bocs, m1, -u1}, sigma, sigma_inv};
}

GModMorphism shift_morphism(const ShiftData& sm, const ShiftData& sn,
                            const GModMorphism& f) {
    return compose(compose(sn.sigma, f), sm.sigma_inv);
}

JData jfun(const TwistedModule& mu) {
    JData out{TwistedModule{}, shift_twisted(mu), {}, {}, {}, {}, {}, {}};
    SumSpace ds = direct_sum(mu.m, out.sh.shifted.m);
    out.in1 = embed(mu.bocs, ds.in1);
    out.in2 = embed(mu.bocs, ds.in2);
    out.pr1 = embed(mu.bocs, ds.pr1);
    out.pr2 = embed(mu.bocs, ds.pr2);
    GModMorphism uj = compose(compose(out.in1, mu.u), out.pr1) +
                      compose(compose(out.in1, out.sh.sigma_inv), out.pr2) +
                      compose(compose(out.in2, out.sh.shifted.u), out.pr2);
    out.j = TwistedModule{mu.bocs, ds.sum, uj};
    if (auto r = check_mc(out.j); !r)
        throw BocsError(Err::ChainMapDefect, "J(M,u) fails MC: " + r.witness);
    out.alpha = eta1_complete(gmod_identity(mu.bocs, mu.m), mu, mu, out);
    out.beta = eta2_complete(gmod_identity(mu.bocs, out.sh.shifted.m), mu,
                             out.sh.shifted, out);
    if (!compose(out.beta, out.alpha).is_zero() || !(out.alpha.f0() == ds.in1) ||
        !(out.beta.f0() == ds.pr2))
        throw BocsError(Err::ChainMapDefect, "J conflation data broken");
    return out;
}

GModMorphism eta1_complete(const GModMorphism& f1, const TwistedModule& mu,
                           const TwistedModule& nv, const JData& jn) {
    // f2 = sigma_N*f1*u_M - sigma_N*hat_delta(f1) - sigma_N*u_N*f1
    const GModMorphism& sg = jn.sh.sigma;
    GModMorphism f2 =
        compose(sg, compose(f1, mu.u) - hat_delta(f1) - compose(nv.u, f1));
    GModMorphism f = compose(jn.in1, f1) + compose(jn.in2, f2);
    if (auto r = check_twisted_morphism(f, mu, jn.j); !r)
        throw BocsError(Err::ChainMapDefect, "eta1 completion not twisted: " + r.witness);
    return f;
}

GModMorphism eta1_extract(const JData& jn, const GModMorphism& f) {
    return compose(jn.pr1, f);
}

GModMorphism eta2_complete(const GModMorphism& g2, const TwistedModule& mu,
                           const TwistedModule& nv, const JData& jm) {
    if (!mu.m->same_as(*jm.sh.sigma.dom()) || !g2.dom()->same_as(*jm.sh.shifted.m))
        throw BocsError(Err::ModuleMismatch, "eta2: J data does not match (M,u)");
    // g1 = hat_delta(g2)*sigma_M + u_N*g2*sigma_M - g2*u_{M[1]}*sigma_M
    const GModMorphism& sg = jm.sh.sigma;
    GModMorphism g1 =
        compose(hat_delta(g2) + compose(nv.u, g2) - compose(g2, jm.sh.shifted.u), sg);
    GModMorphism g = compose(g1, jm.pr1) + compose(g2, jm.pr2);
    if (auto r = check_twisted_morphism(g, jm.j, nv); !r)
        throw BocsError(Err::ChainMapDefect, "eta2 completion not twisted: " + r.witness);
    return g;
}

GModMorphism eta2_extract(const JData& jm, const GModMorphism& g) {
    return compose(g, jm.in2);
}

GModMorphism factor_through_j(const GModMorphism& f, const GModMorphism& witness,
                              const TwistedModule& mu, const TwistedModule& nv,
                              const JData& jm) {
    GModMorphism zero(f.bocs(), f.dom(), f.cod(), f.deg());
    if (auto r = check_homotopy(witness, f, zero, mu, nv); !r)
        throw BocsError(Err::NotAHomotopy, r.witness);
    GModMorphism h2 = compose(witness, jm.sh.sigma_inv); // M[1] -> N, degree 0
    GModMorphism through = eta2_complete(h2, mu, nv, jm);
    if (!(compose(through, jm.alpha) == f))
        throw BocsError(Err::ChainMapDefect, "factorization does not recover f");
    return through;
}

GModMorphism witness_from_factorization(const GModMorphism& through_j, const JData& jm) {
    return compose(eta2_extract(jm, through_j), jm.sh.sigma);
}

std::map<std::pair<int, int>, int> complex_homology(const HomMap& u0) {
    if (!u0.after(u0).is_zero())
        throw BocsError(Err::NotAComplex, "u0 squared is nonzero");
    auto sp = solve_splitting(u0);
    std::map<std::pair<int, int>, int> h;
    for (const auto& k : sp.ker_basis) {
        const auto& b = u0.dom()->at(k.begin()->first);
        ++h[{b.deg, b.rid}];
    }
    for (const auto& v : sp.im_basis) {
        const auto& b = u0.cod()->at(v.begin()->first);
        --h[{b.deg, b.rid}];
    }
    for (auto it = h.begin(); it != h.end();)
        it = it->second == 0 ? h.erase(it) : std::next(it);
    return h;
}

CheckResult check_acyclic(const HomMap& u0) {
    auto h = complex_homology(u0);
    if (h.empty()) return CheckResult::pass();
    auto [key, dim] = *h.begin();
    return CheckResult::fail("H^" + std::to_string(key.first) + " has dimension " +
                             std::to_string(dim) + " at idempotent " +
                             std::to_string(key.second));
}

namespace {

/* solve x = sum coords_i * col_i for explicitly given columns */
struct VecSolver {
    Field f;
    std::map<int, std::pair<SparseVec, SparseVec>> pivots; // lead -> (col, coords)
    int ncols = 0;

    explicit VecSolver(Field field) : f(field) {}
    void add_col(const SparseVec& v) {
        SparseVec vv = v;
        SparseVec u{{ncols++, Scalar::one(f)}};
        reduce(vv, u);
        if (!vec_is_zero(vv)) pivots[vv.begin()->first] = {vv, u};
    }
    void reduce(SparseVec& v, SparseVec& u) const {
        while (!v.empty()) {
            auto it = pivots.find(v.begin()->first);
            if (it == pivots.end()) break;
            Scalar c = v.begin()->second / it->second.first.begin()->second;
            v = vec_add(v, vec_scale(-c, it->second.first));
            u = vec_add(u, vec_scale(-c, it->second.second));
        }
    }
    std::optional<SparseVec> solve(const SparseVec& x) const {
        SparseVec rest = x, coords;
        for (const auto& [lead, p] : pivots) {
            auto it = rest.find(lead);
            if (it == rest.end()) continue;
            Scalar c = it->second / p.first.begin()->second;
            rest = vec_add(rest, vec_scale(-c, p.first));
            coords = vec_add(coords, vec_scale(c, p.second));
        }
        if (!vec_is_zero(rest)) return std::nullopt;
        return coords;
    }
};

/* f1 evaluated on a homogeneous Cbar vector */
HomMap blockval(const GModMorphism& f, const SparseVec& c) {
    int deg = f.bocs()->cbar()->at(c.begin()->first).deg;
    HomMap acc(f.dom(), f.cod(), f.deg() + deg, false);
    for (const auto& [i, v] : c) acc = acc + f.f1(i).scaled(v);
    return acc;
}

/* (f1 . g1)(c) = sum f1(c2) g1(c1) over mubar(c), extended linearly */
HomMap dotvec(const GModMorphism& f, const GModMorphism& g, const SparseVec& c) {
    const Bocs& b = *f.bocs();
    int deg = b.cbar()->at(c.begin()->first).deg;
    HomMap acc(g.dom(), f.cod(), f.deg() + g.deg() + deg, false);
    for (const auto& [i, v] : c)
        for (const auto& t : b.mubar(i)) {
            auto f2 = f.f1_blocks().find(t.c2);
            if (f2 == f.f1_blocks().end()) continue;
            auto g1 = g.f1_blocks().find(t.c1);
            if (g1 == g.f1_blocks().end()) continue;
            acc = acc + f2->second.after(g1->second).scaled(v * t.coef);
        }
    return acc;
}

} // namespace

GModMorphism nullhomotopy(const TwistedModule& mu) {
    const Bocs& b = *mu.bocs;
    Field F = mu.u.field();
    const HomMap& u0 = mu.u.f0();
    if (!u0.after(u0).is_zero())
        throw BocsError(Err::NotAComplex, "(u0)^2 != 0");
    if (auto r = check_acyclic(u0); !r) throw BocsError(Err::NotAcyclic, r.witness);

    auto sp = solve_splitting(u0);
    // contraction: invert u0 on im = ker along the pivot complement X, so that
    // id = u0 h0 + h0 u0 holds exactly (acyclicity makes im = ker)
    HomMap h0 = sp.section.after(sp.proj_ker);
    if (!(u0.after(h0) + h0.after(u0) == HomMap::identity(mu.m)))
        throw BocsError(Err::ChainMapDefect, "contraction identity failed");

    GModMorphism h(mu.bocs, mu.m, mu.m, -1);
    h.set_f0(h0);

    LayerSplit ls = layer_split(b);
    for (int lvl = 1; lvl <= b.levels(); ++lvl) {
        const auto& vs = ls.v[lvl - 1];
        const auto& ws = ls.w[lvl - 1];
        // kernel-part basis vectors: contract the attached chain maps
        std::vector<HomMap> vass;
        for (const auto& zc : vs) {
            HomMap uz = blockval(mu.u, zc);
            HomMap fc = uz.after(h0) + h0.after(uz) + dotvec(mu.u, h, zc) +
                        dotvec(h, mu.u, zc);
            if (!(u0.after(fc) == fc.after(u0)))
                throw BocsError(Err::ChainMapDefect,
                                "V-step chain defect at level " + std::to_string(lvl));
            vass.push_back(h0.after(fc).scaled(Scalar(F, -1)));
        }
        // evaluator for the extension on Cbar_{lvl-1} (+) V
        VecSolver hsolve(F);
        std::vector<HomMap> hvals;
        for (int i = 0; i < b.cbar()->dim(); ++i) {
            if (b.layer(i) > lvl - 1) continue;
            hsolve.add_col(SparseVec{{i, Scalar::one(F)}});
            hvals.push_back(h.f1(i));
        }
        for (size_t j = 0; j < vs.size(); ++j) {
            hsolve.add_col(vs[j]);
            hvals.push_back(vass[j]);
        }
        auto hhat = [&](const SparseVec& x, int valdeg) {
            HomMap acc(mu.m, mu.m, valdeg, false);
            if (vec_is_zero(x)) return acc;
            auto coords = hsolve.solve(x);
            if (!coords)
                throw BocsError(Err::ChainMapDefect, "delta escapes Cbar (+) Z");
            for (const auto& [j, c] : *coords) acc = acc + hvals[j].scaled(c);
            return acc;
        };
        // new-layer complement: include the d-hat correction, then contract
        std::vector<HomMap> wass;
        for (const auto& wc : ws) {
            int idx = wc.begin()->first;
            SparseVec dvec = b.delta().apply_basis(idx);
            int cdeg = b.cbar()->at(idx).deg;
            HomMap hd = hhat(dvec, cdeg);       // hhat(delta c), degree -1 + (cdeg+1)
            HomMap dh = hd.precompose_parity(); // (-1)^{|m|} hhat(delta c)[m]
            HomMap uw = blockval(mu.u, wc);
            HomMap gc = dh + uw.after(h0) + h0.after(uw) + dotvec(mu.u, h, wc) +
                        dotvec(h, mu.u, wc);
            if (!(u0.after(gc) == gc.after(u0)))
                throw BocsError(Err::ChainMapDefect,
                                "W-step chain defect at level " + std::to_string(lvl));
            wass.push_back(h0.after(gc).scaled(Scalar(F, -1)));
        }
        // express the new standard-basis blocks through the adapted basis
        VecSolver full(F);
        std::vector<HomMap> fvals;
        for (int i = 0; i < b.cbar()->dim(); ++i) {
            if (b.layer(i) > lvl - 1) continue;
            full.add_col(SparseVec{{i, Scalar::one(F)}});
            fvals.push_back(h.f1(i));
        }
        for (size_t j = 0; j < vs.size(); ++j) {
            full.add_col(vs[j]);
            fvals.push_back(vass[j]);
        }
        for (size_t j = 0; j < ws.size(); ++j) {
            full.add_col(ws[j]);
            fvals.push_back(wass[j]);
        }
        for (int i = 0; i < b.cbar()->dim(); ++i) {
            if (b.layer(i) != lvl) continue;
            auto coords = full.solve(SparseVec{{i, Scalar::one(F)}});
            if (!coords)
                throw BocsError(Err::ChainMapDefect, "adapted basis is not spanning");
            HomMap acc(mu.m, mu.m, -1 + b.cbar()->at(i).deg, false);
            for (const auto& [j, c] : *coords) acc = acc + fvals[j].scaled(c);
            h.set_f1(i, acc);
        }
    }
    GModMorphism defect = gmod_identity(mu.bocs, mu.m) - hat_delta(h) -
                          compose(mu.u, h) - compose(h, mu.u);
    if (!defect.is_zero())
        throw BocsError(Err::ChainMapDefect,
                        "nullhomotopy identity fails: " + defect.describe());
    return h;
}

namespace {
/* new abstract space spanned by homogeneous vectors, with inclusion */
struct SpanSpace {
    SpacePtr sp;
    HomMap incl;
};

SpanSpace span_space(const SpacePtr& amb, const std::vector<SparseVec>& vecs,
                     const std::string& prefix) {
    std::vector<BasisElem> basis;
    for (size_t i = 0; i < vecs.size(); ++i) {
        const auto& b = amb->at(vecs[i].begin()->first);
        basis.push_back({prefix + std::to_string(i), b.deg, 0, b.rid});
    }
    auto sp = GradedSpace::make(amb->base(), false, basis);
    HomMap incl(sp, amb, 0);
    for (size_t i = 0; i < vecs.size(); ++i) {
        int col = sp->index_of(prefix + std::to_string(i));
        for (const auto& [row, v] : vecs[i]) incl.set(row, col, v);
    }
    return {sp, incl};
}
} // namespace

SplitIdem split_idempotent(const GModMorphism& e, const TwistedModule& mu) {
    if (e.deg() != 0) throw BocsError(Err::NotIdempotent, "idempotent must have degree 0");
    if (!(compose(e, e) == e)) throw BocsError(Err::NotIdempotent, "e*e != e");
    if (auto r = check_twisted_morphism(e, mu, mu); !r)
        throw BocsError(Err::NotIdempotent, "e is not a twisted endomorphism: " + r.witness);
    const Bocs& b = *mu.bocs;
    Field F = e.field();

    // kill the f1 components layer by layer with h_{i+1}^1(c) = e_i^1(c)(1 - 2e^0)
    GModMorphism ecur = e;
    GModMorphism htot = gmod_identity(mu.bocs, mu.m);
    HomMap e0 = e.f0();
    for (int i = 1; i <= b.levels(); ++i) {
        HomMap f0i = HomMap::identity(mu.m) - e0.scaled(Scalar(F, 2));
        GModMorphism hi = gmod_identity(mu.bocs, mu.m);
        for (const auto& [c, blk] : ecur.f1_blocks()) hi.add_f1(c, blk.after(f0i));
        ecur = compose(compose(hi, ecur), invert(hi));
        htot = compose(hi, htot);
    }
    if (!ecur.f1_is_zero())
        throw BocsError(Err::ChainMapDefect, "idempotent straightening failed");
    if (!(ecur.f0() == e0))
        throw BocsError(Err::ChainMapDefect, "idempotent first component drifted");

    // split e0 in GMod-S: M = im(e0) (+) ker(e0)
    auto sp = solve_splitting(e0);
    SpanSpace m1 = span_space(mu.m, sp.im_basis, "p");
    SpanSpace m2 = span_space(mu.m, sp.ker_basis, "q");
    SumSpace ds = direct_sum(m1.sp, m2.sp);
    HomMap qinv = m1.incl.after(ds.pr1) + m2.incl.after(ds.pr2);
    auto qsp = solve_splitting(qinv);
    if (qsp.rank != mu.m->dim() || !qsp.ker_basis.empty())
        throw BocsError(Err::ChainMapDefect, "image and kernel do not span M");
    HomMap q = qsp.section;
    GModMorphism iso = compose(embed(mu.bocs, q), htot);
    GModMorphism iso_inv = invert(iso);

    GModMorphism conj = compose(compose(iso, e), iso_inv);
    GModMorphism diag = embed(mu.bocs, ds.in1.after(ds.pr1));
    if (!(conj == diag))
        throw BocsError(Err::ChainMapDefect, "h*e*h^{-1} is not diag(I,0)");

    TwistedModule total = transport(iso, mu);
    GModMorphism i1 = embed(mu.bocs, ds.in1), i2 = embed(mu.bocs, ds.in2);
    GModMorphism p1 = embed(mu.bocs, ds.pr1), p2 = embed(mu.bocs, ds.pr2);
    if (!compose(compose(p2, total.u), i1).is_zero() ||
        !compose(compose(p1, total.u), i2).is_zero())
        throw BocsError(Err::ChainMapDefect, "transported u is not block diagonal");
    TwistedModule part1{mu.bocs, m1.sp, compose(compose(p1, total.u), i1)};
    TwistedModule part2{mu.bocs, m2.sp, compose(compose(p2, total.u), i2)};
    if (auto r = check_mc(part1); !r) throw BocsError(Err::ChainMapDefect, r.witness);
    if (auto r = check_mc(part2); !r) throw BocsError(Err::ChainMapDefect, r.witness);
    TwistedSum sum = twisted_direct_sum(part1, part2);
    return {iso, iso_inv, part1, part2, sum};
}

Straightened straighten_conflation(const GModMorphism& f, const GModMorphism& g,
                                   const TwistedModule& mu, const TwistedModule& ev,
                                   const TwistedModule& nw) {
    if (!compose(g, f).is_zero())
        throw BocsError(Err::NotComposableToZero, "g*f != 0");
    auto spf = solve_splitting(f.f0());
    auto spg = solve_splitting(g.f0());
    if (!spf.ker_basis.empty())
        throw BocsError(Err::NotExactOnComponents, "f0 is not injective");
    if (spg.rank != nw.m->dim())
        throw BocsError(Err::NotExactOnComponents, "g0 is not surjective");
    if (spf.rank + spg.rank != ev.m->dim() || !g.f0().after(f.f0()).is_zero())
        throw BocsError(Err::NotExactOnComponents, "components are not short exact");
    if (auto r = check_twisted_morphism(f, mu, ev); !r)
        throw BocsError(Err::NotExactOnComponents, "f not twisted: " + r.witness);
    if (auto r = check_twisted_morphism(g, ev, nw); !r)
        throw BocsError(Err::NotExactOnComponents, "g not twisted: " + r.witness);

    // Step 1: u = (0,f^1)*(p,0) with p f0 = id, then h1 = I + sum (-1)^n u^n
    GModMorphism funder = f;
    funder.set_f0(HomMap(f.dom(), f.cod(), f.deg()));
    GModMorphism p = embed(f.bocs(), spf.section);
    GModMorphism u1 = compose(funder, p);
    GModMorphism id_e = gmod_identity(ev.bocs, ev.m);
    GModMorphism h1 = id_e + alternating_geometric_series(u1);
    GModMorphism f1 = compose(h1, f);
    GModMorphism g1 = compose(g, id_e + u1); // h1^{-1} = I + u1
    if (!f1.f1_is_zero())
        throw BocsError(Err::ChainMapDefect, "step 1 failed to straighten f");

    // Step 2: u = (s,0)*(0,g^1) with g0 s = id, then h2 = I + sum (-1)^n u^n
    GModMorphism gunder = g1;
    gunder.set_f0(HomMap(g.dom(), g.cod(), g.deg()));
    GModMorphism s = embed(g.bocs(), spg.section);
    GModMorphism u2 = compose(s, gunder);
    GModMorphism h2 = id_e + alternating_geometric_series(u2);
    GModMorphism h2inv = id_e + u2;
    if (!(compose(h2, h2inv) == id_e))
        throw BocsError(Err::ChainMapDefect, "series inverse identity failed");
    GModMorphism h = compose(h2inv, h1);
    GModMorphism hinv = invert(h);
    GModMorphism left = compose(h, f);
    GModMorphism right = compose(g, hinv);
    if (!left.f1_is_zero() || !right.f1_is_zero())
        throw BocsError(Err::ChainMapDefect, "straightening failed");
    if (!(left.f0() == f.f0()) || !(right.f0() == g.f0()))
        throw BocsError(Err::ChainMapDefect, "first components changed");
    TwistedModule middle = transport(h, ev);
    if (auto r = check_twisted_morphism(left, mu, middle); !r)
        throw BocsError(Err::ChainMapDefect, r.witness);
    if (auto r = check_twisted_morphism(right, middle, nw); !r)
        throw BocsError(Err::ChainMapDefect, r.witness);
    return {h, hinv, middle, left, right};
}

ConeData cone(const GModMorphism& f, const TwistedModule& mu, const TwistedModule& nv) {
    if (f.deg() != 0) throw BocsError(Err::ModuleMismatch, "cone needs degree 0");
    if (auto r = check_twisted_morphism(f, mu, nv); !r)
        throw BocsError(Err::ModuleMismatch, "cone input not twisted: " + r.witness);
    ConeData out{TwistedModule{}, shift_twisted(mu), {}, {}, {}, {}, {}, {}};
    SumSpace ds = direct_sum(out.sh.shifted.m, nv.m);
    out.in1 = embed(mu.bocs, ds.in1);
    out.in2 = embed(mu.bocs, ds.in2);
    out.pr1 = embed(mu.bocs, ds.pr1);
    out.pr2 = embed(mu.bocs, ds.pr2);
    GModMorphism x = compose(f, out.sh.sigma_inv); // M[1] -> N, degree 1
    GModMorphism w = compose(compose(out.in1, out.sh.shifted.u), out.pr1) +
                     compose(compose(out.in2, x), out.pr1) +
                     compose(compose(out.in2, nv.u), out.pr2);
    out.cone = TwistedModule{mu.bocs, ds.sum, w};
    if (auto r = check_mc(out.cone); !r)
        throw BocsError(Err::ChainMapDefect, "cone fails MC: " + r.witness);
    out.into = out.in2;
    out.onto = out.pr1;
    if (auto r = check_twisted_morphism(out.into, nv, out.cone); !r)
        throw BocsError(Err::ChainMapDefect, "cone inclusion not twisted: " + r.witness);
    if (auto r = check_twisted_morphism(out.onto, out.cone, out.sh.shifted); !r)
        throw BocsError(Err::ChainMapDefect, "cone projection not twisted: " + r.witness);
    if (!compose(out.onto, out.into).is_zero())
        throw BocsError(Err::ChainMapDefect, "cone conflation not composable to zero");
    return out;
}

namespace {
/* homology classes of a complex at a fixed degree, with coordinates */
struct HQuot {
    std::map<int, SparseVec> bd; // boundary echelon by leading row
    std::vector<SparseVec> reps; // echelonized representatives
    std::map<int, int> rep_by_lead;

    SparseVec reduce_bd(SparseVec v) const {
        for (const auto& [lead, w] : bd) {
            auto it = v.find(lead);
            if (it == v.end()) continue;
            v = vec_add(v, vec_scale(-(it->second / w.begin()->second), w));
        }
        return v;
    }
    void add_boundary(const SparseVec& v) {
        SparseVec vv = reduce_bd(v);
        if (!vec_is_zero(vv)) bd.emplace(vv.begin()->first, vv);
    }
    void add_cycle(const SparseVec& v) {
        SparseVec vv = reduce_bd(v);
        while (!vec_is_zero(vv)) {
            auto it = rep_by_lead.find(vv.begin()->first);
            if (it == rep_by_lead.end()) break;
            const auto& r = reps[it->second];
            vv = vec_add(vv, vec_scale(-(vv.begin()->second / r.begin()->second), r));
        }
        if (!vec_is_zero(vv)) {
            rep_by_lead[vv.begin()->first] = (int)reps.size();
            reps.push_back(vv);
        }
    }
    std::optional<SparseVec> express(SparseVec v) const {
        v = reduce_bd(v);
        SparseVec coords;
        while (!vec_is_zero(v)) {
            auto it = rep_by_lead.find(v.begin()->first);
            if (it == rep_by_lead.end()) return std::nullopt;
            const auto& r = reps[it->second];
            Scalar c = v.begin()->second / r.begin()->second;
            v = vec_add(v, vec_scale(-c, r));
            coords = vec_add(coords, SparseVec{{it->second, c}});
        }
        return coords;
    }
};
} // namespace

CheckResult quasi_iso_check(const HomMap& f0, const HomMap& uM, const HomMap& uN) {
    auto spM = solve_splitting(uM);
    auto spN = solve_splitting(uN);
    std::map<int, HQuot> hm, hn;
    for (const auto& v : spM.im_basis)
        hm[uM.dom()->at(v.begin()->first).deg].add_boundary(v);
    for (const auto& v : spM.ker_basis)
        hm[uM.dom()->at(v.begin()->first).deg].add_cycle(v);
    for (const auto& v : spN.im_basis)
        hn[uN.dom()->at(v.begin()->first).deg].add_boundary(v);
    for (const auto& v : spN.ker_basis)
        hn[uN.dom()->at(v.begin()->first).deg].add_cycle(v);
    std::set<int> degs;
    for (const auto& [d, q] : hm)
        if (!q.reps.empty()) degs.insert(d);
    for (const auto& [d, q] : hn)
        if (!q.reps.empty()) degs.insert(d);
    for (int d : degs) {
        size_t dm = hm.count(d) ? hm.at(d).reps.size() : 0;
        size_t dn = hn.count(d) ? hn.at(d).reps.size() : 0;
        if (dm != dn)
            return CheckResult::fail("H^" + std::to_string(d) + " dimensions differ (" +
                                     std::to_string(dm) + " vs " + std::to_string(dn) +
                                     ")");
        if (dm == 0) continue;
        std::map<int, SparseVec> ech;
        int rk = 0;
        for (const auto& rep : hm.at(d).reps) {
            auto img = hn.at(d).express(f0.apply(rep));
            if (!img)
                return CheckResult::fail("H^" + std::to_string(d) +
                                         ": image is not a cycle class");
            SparseVec v = *img;
            while (!vec_is_zero(v)) {
                auto it = ech.find(v.begin()->first);
                if (it == ech.end()) break;
                v = vec_add(
                    v, vec_scale(-(v.begin()->second / it->second.begin()->second),
                                 it->second));
            }
            if (!vec_is_zero(v)) {
                ech.emplace(v.begin()->first, v);
                ++rk;
            }
        }
        if (rk != (int)dm)
            return CheckResult::fail("H^" + std::to_string(d) + " map not bijective");
    }
    return CheckResult::pass();
}

HomotopyInverse homotopy_inverse(const GModMorphism& f, const TwistedModule& mu,
                                 const TwistedModule& nv) {
    if (auto r = quasi_iso_check(f.f0(), mu.u.f0(), nv.u.f0()); !r)
        throw BocsError(Err::NotQuasiIso, r.witness);
    ConeData cd = cone(f, mu, nv);
    GModMorphism big_h = nullhomotopy(cd.cone);
    GModMorphism h11 = compose(compose(cd.pr1, big_h), cd.in1);
    GModMorphism h12 = compose(compose(cd.pr1, big_h), cd.in2);
    GModMorphism h22 = compose(compose(cd.pr2, big_h), cd.in2);
    HomotopyInverse out{compose(cd.sh.sigma_inv, h12), -h22,
                        compose(cd.sh.sigma_inv, compose(h11, cd.sh.sigma))};
    if (auto r = check_twisted_morphism(out.g, nv, mu); !r)
        throw BocsError(Err::ChainMapDefect, "inverse not twisted: " + r.witness);
    if (auto r = check_homotopy(out.h_fg, compose(f, out.g),
                                gmod_identity(nv.bocs, nv.m), nv, nv);
        !r)
        throw BocsError(Err::ChainMapDefect, "f*g homotopy failed: " + r.witness);
    if (auto r = check_homotopy(out.h_gf, compose(out.g, f),
                                gmod_identity(mu.bocs, mu.m), mu, mu);
        !r)
        throw BocsError(Err::ChainMapDefect, "g*f homotopy failed: " + r.witness);
    return out;
}

TwistedModule restrict_twisted(const BocsMorphism& psi, const TwistedModule& mu) {
    TwistedModule out{psi.src, mu.m, restrict_along(psi, mu.u)};
    if (auto r = check_mc(out); !r)
        throw BocsError(Err::ChainMapDefect, "restricted module fails MC: " + r.witness);
    return out;
}

GModMorphism restriction_equivalence_witness(const BocsHomotopy& hh,
                                             const TwistedModule& mu) {
    if (auto r = check_bocs_homotopy(hh); !r) throw BocsError(Err::NotAHomotopy, r.witness);
    GModMorphism rh = restrict_homotopy_unchecked(hh.phi.src, hh.h, mu.u);
    GModMorphism eta = gmod_identity(hh.phi.src, mu.m) + rh;
    TwistedModule rphi{hh.phi.src, mu.m, restrict_along_unchecked(hh.phi, mu.u)};
    TwistedModule rpsi{hh.phi.src, mu.m, restrict_along_unchecked(hh.psi, mu.u)};
    if (auto r = check_twisted_morphism(eta, rphi, rpsi); !r)
        throw BocsError(Err::ChainMapDefect, "eta is not twisted: " + r.witness);
    if (!f0_invertible(eta))
        throw BocsError(Err::ChainMapDefect, "eta first component not invertible");
    return eta;
}

NaturalityData restriction_naturality(const BocsHomotopy& hh, const GModMorphism& f,
                                      const TwistedModule& mu, const TwistedModule& nv) {
    if (auto r = check_bocs_homotopy(hh); !r) throw BocsError(Err::NotAHomotopy, r.witness);
    GModMorphism eta_m = restriction_equivalence_witness(hh, mu);
    GModMorphism eta_n = restriction_equivalence_witness(hh, nv);
    GModMorphism rphi_f = restrict_along_unchecked(hh.phi, f);
    GModMorphism rpsi_f = restrict_along_unchecked(hh.psi, f);
    GModMorphism defect = compose(eta_n, rphi_f) - compose(rpsi_f, eta_m);
    GModMorphism witness = restrict_homotopy_unchecked(hh.phi.src, hh.h, f);
    TwistedModule rphi_m{hh.phi.src, mu.m, restrict_along_unchecked(hh.phi, mu.u)};
    TwistedModule rpsi_n{hh.phi.src, nv.m, restrict_along_unchecked(hh.psi, nv.u)};
    GModMorphism zero(hh.phi.src, mu.m, nv.m, defect.deg());
    if (auto r = check_homotopy(witness, defect, zero, rphi_m, rpsi_n); !r)
        throw BocsError(Err::ChainMapDefect, "naturality witness failed: " + r.witness);
    return {defect, witness};
}

} // namespace bocskit
