#include "bocskit/oracles.hpp"

#include <algorithm>

namespace bocskit {

SpacePtr gen_space(Rng& rng, const BaseRing& base, int dim, int min_deg, int max_deg,
                   bool bimodule, const std::string& prefix) {
    std::vector<BasisElem> basis;
    for (int i = 0; i < dim; ++i)
        basis.push_back({prefix + std::to_string(i), (int)rng.pick(min_deg, max_deg),
                         bimodule ? (int)rng.pick(0, base.n - 1) : 0,
                         (int)rng.pick(0, base.n - 1)});
    return GradedSpace::make(base, bimodule, basis);
}

HomMap gen_invertible_map(Rng& rng, const SpacePtr& m) {
    // per block: L * D * U with unitriangular L, U and nonzero diagonal D
    std::map<std::tuple<int, int, int>, std::vector<int>> blocks;
    for (int i = 0; i < m->dim(); ++i) {
        const auto& b = m->at(i);
        blocks[{b.deg, b.lid, b.rid}].push_back(i);
    }
    Field F = m->base().field;
    HomMap out(m, m, 0);
    for (const auto& [key, idx] : blocks) {
        int k = (int)idx.size();
        std::vector<std::vector<Scalar>> a(k, std::vector<Scalar>(k, Scalar::zero(F)));
        for (int i = 0; i < k; ++i) a[i][i] = rng.nonzero_scalar(F, 3);
        // L * D
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < i; ++j)
                if (rng.chance(45)) a[i][j] = rng.scalar(F, 2) * a[j][j];
        // (L*D) * U
        for (int j = k - 1; j >= 0; --j)
            for (int jj = j + 1; jj < k; ++jj)
                if (rng.chance(45)) {
                    Scalar u = rng.scalar(F, 2);
                    for (int i = 0; i < k; ++i) a[i][jj] += a[i][j] * u;
                }
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (!a[i][j].is_zero()) out.set(idx[i], idx[j], a[i][j]);
    }
    return out;
}

HomMap gen_square_zero(Rng& rng, const SpacePtr& m, int density_pct) {
    // staircase: entries only from "source" to "non-source" indices
    std::vector<bool> source(m->dim());
    for (int i = 0; i < m->dim(); ++i) source[i] = rng.chance(50);
    HomMap d(m, m, 1);
    bool bi = m->bimodule();
    for (int i = 0; i < m->dim(); ++i) {
        if (!source[i]) continue;
        for (int j = 0; j < m->dim(); ++j) {
            if (source[j]) continue;
            const auto& bi_ = m->at(i);
            const auto& bj = m->at(j);
            if (bj.deg != bi_.deg + 1 || bj.rid != bi_.rid || (bi && bj.lid != bi_.lid))
                continue;
            if (rng.chance(density_pct)) d.set(j, i, rng.nonzero_scalar(m->base().field, 3));
        }
    }
    return d;
}

/* ---- exactly-verified seed algebras ---------------------------------- */
namespace {

AlgPtr seed_matrix_units(Rng& rng, const BaseRing& base, int arity) {
    // basis b_{t,s} for idempotent pairs t <= s, product = path concatenation,
    // degrees from a random weight vector so m_2 is homogeneous of degree 0
    std::vector<int> w(base.n);
    for (auto& x : w) x = (int)rng.pick(-1, 1);
    std::vector<BasisElem> basis;
    for (int t = 0; t < base.n; ++t)
        for (int s = t; s < base.n; ++s)
            basis.push_back({"u" + std::to_string(t) + std::to_string(s), w[s] - w[t], t, s});
    auto sp = GradedSpace::make(base, true, basis);
    auto a = std::make_shared<AInfAlgebra>(sp, std::max(arity, 2));
    auto sq = a->power(2);
    HomMap m2(sq, sp, 0);
    Scalar one = Scalar::one(base.field);
    for (int t = 0; t < base.n; ++t)
        for (int s = t; s < base.n; ++s)
            for (int r = s; r < base.n; ++r) {
                std::string l1 = "u" + std::to_string(t) + std::to_string(s);
                std::string l2 = "u" + std::to_string(s) + std::to_string(r);
                std::string lo = "u" + std::to_string(t) + std::to_string(r);
                int col = sq->index_of(l1 + "|" + l2);
                if (col >= 0) m2.set(sp->index_of(lo), col, one);
            }
    a->set_op(2, m2);
    return a;
}

AlgPtr seed_truncated_poly(Rng& rng, const BaseRing& base, int arity, int max_dim) {
    int nn = (int)rng.pick(2, std::max(2, std::min(4, max_dim)));
    int d = (int)rng.pick(0, 1) * 2; // generator degree 0 or 2 keeps signs tame
    int e = (int)rng.pick(0, base.n - 1);
    std::vector<BasisElem> basis;
    for (int i = 1; i <= nn; ++i)
        basis.push_back({"t" + std::to_string(i), i * d, e, e});
    auto sp = GradedSpace::make(base, true, basis);
    auto a = std::make_shared<AInfAlgebra>(sp, std::max(arity, 2));
    auto sq = a->power(2);
    HomMap m2(sq, sp, 0);
    Scalar one = Scalar::one(base.field);
    for (int i = 1; i <= nn; ++i)
        for (int j = 1; j <= nn; ++j)
            if (i + j <= nn) {
                int col = sq->index_of("t" + std::to_string(i) + "|t" + std::to_string(j));
                if (col >= 0) m2.set(sp->index_of("t" + std::to_string(i + j)), col, one);
            }
    a->set_op(2, m2);
    return a;
}

AlgPtr seed_unital_dg(Rng& rng, const BaseRing& base, int arity) {
    // e, x, y on one idempotent: e acts as a unit, m1(x) = y, all other
    // products vanish; satisfies Leibniz and associativity
    int ee = (int)rng.pick(0, base.n - 1);
    int dx = (int)rng.pick(-1, 1);
    auto sp = GradedSpace::make(
        base, true, {{"e", 0, ee, ee}, {"x", dx, ee, ee}, {"y", dx + 1, ee, ee}});
    auto a = std::make_shared<AInfAlgebra>(sp, std::max(arity, 2));
    Scalar one = Scalar::one(base.field);
    HomMap m1(sp, sp, 1);
    m1.set(sp->index_of("y"), sp->index_of("x"), one);
    auto sq = a->power(2);
    HomMap m2(sq, sp, 0);
    m2.set(sp->index_of("e"), sq->index_of("e|e"), one);
    m2.set(sp->index_of("x"), sq->index_of("e|x"), one);
    m2.set(sp->index_of("x"), sq->index_of("x|e"), one);
    m2.set(sp->index_of("y"), sq->index_of("e|y"), one);
    m2.set(sp->index_of("y"), sq->index_of("y|e"), one);
    a->set_op(1, m1);
    a->set_op(2, m2);
    return a;
}

AlgPtr seed_m3(Rng& rng, const BaseRing& base, int arity) {
    int ee = (int)rng.pick(0, base.n - 1);
    int dx = (int)rng.pick(0, 1);
    auto sp = GradedSpace::make(base, true,
                                {{"x", dx, ee, ee}, {"y", 3 * dx - 1, ee, ee}});
    auto a = std::make_shared<AInfAlgebra>(sp, std::max(arity, 3));
    auto cb = a->power(3);
    HomMap m3(cb, sp, -1);
    m3.set(sp->index_of("y"), cb->index_of("x|x|x"), rng.nonzero_scalar(base.field, 2));
    a->set_op(3, m3);
    return a;
}

AlgPtr seed_complex(Rng& rng, const BaseRing& base, int arity, int dim) {
    auto sp = gen_space(rng, base, dim, -1, 2, true, "c");
    auto a = std::make_shared<AInfAlgebra>(sp, arity);
    HomMap d = gen_square_zero(rng, sp, 60);
    a->set_op(1, d);
    return a;
}

AlgPtr direct_sum_algebras(const AlgPtr& x, const AlgPtr& y, int arity) {
    SumSpace ds = direct_sum(x->space(), y->space());
    auto a = std::make_shared<AInfAlgebra>(ds.sum, arity);
    for (int n = 1; n <= arity; ++n) {
        HomMap mn(a->power(n), ds.sum, 2 - n);
        bool any = false;
        for (int side = 0; side < 2; ++side) {
            const AInfAlgebra& src = side == 0 ? *x : *y;
            const HomMap& in = side == 0 ? ds.in1 : ds.in2;
            if (n > src.arity_bound() || src.m(n).is_zero()) continue;
            any = true;
            for (const auto& [rc, v] : src.m(n).entries()) {
                std::vector<int> word;
                if (n == 1) {
                    word = {rc.second};
                } else {
                    word = src.power(n)->word(rc.second);
                }
                // map letters through the inclusion (a plain relabelling)
                std::vector<int> sword;
                for (int l : word)
                    sword.push_back(in.apply_basis(l).begin()->first);
                int col = n == 1 ? sword[0] : a->power(n)->index_of_word(sword);
                int row = in.apply_basis(rc.first).begin()->first;
                mn.add(row, col, v);
            }
        }
        if (any) a->set_op(n, mn);
    }
    return a;
}


/* interaction terms of S_3 and S_4 that are linear in a candidate m_3 */
HomMap m3_linear_obstruction(const AInfAlgebra& a, const HomMap& x, int n) {
    // terms of S_n with exactly one slot occupied by x (arity 3 candidate)
    HomMap acc(a.power(n), a.space(), 3 - n);
    Field F = a.field();
    for (int s = 1; s <= std::min(n, a.arity_bound()); ++s)
        for (int r = 0; r + s <= n; ++r) {
            int t = n - r - s;
            int outer = r + 1 + t;
            // x as the middle factor
            if (s == 3 && outer <= a.arity_bound() && !a.m(outer).is_zero()) {
                std::vector<const HomMap*> fac;
                HomMap idr, idt;
                if (r > 0) { idr = HomMap::identity(a.power(r)); fac.push_back(&idr); }
                fac.push_back(&x);
                if (t > 0) { idt = HomMap::identity(a.power(t)); fac.push_back(&idt); }
                acc = acc + a.m(outer).after(tensor_many(fac))
                                .scaled(sign_scalar(F, r + s * t));
            }
            // x as the outer factor
            if (outer == 3 && s <= a.arity_bound() && s != 3 && !a.m(s).is_zero()) {
                std::vector<const HomMap*> fac;
                HomMap idr, idt, ms = a.m(s);
                if (r > 0) { idr = HomMap::identity(a.power(r)); fac.push_back(&idr); }
                fac.push_back(&ms);
                if (t > 0) { idt = HomMap::identity(a.power(t)); fac.push_back(&idt); }
                acc = acc + x.after(tensor_many(fac)).scaled(sign_scalar(F, r + s * t));
            }
        }
    return acc;
}

} // namespace

AlgPtr gen_dg_algebra(const GenSpec& spec) {
    Rng rng(spec.seed);
    BaseRing base{spec.field, spec.idempotents};
    for (int attempt = 0; attempt < 8; ++attempt) {
        AlgPtr a;
        int kind = (int)rng.pick(0, 5);
        switch (kind) {
            case 0: a = seed_matrix_units(rng, base, spec.arity_bound); break;
            case 1: a = seed_truncated_poly(rng, base, spec.arity_bound, spec.max_dim); break;
            case 2: a = seed_unital_dg(rng, base, spec.arity_bound); break;
            case 3:
                a = spec.arity_bound >= 3 ? seed_m3(rng, base, spec.arity_bound)
                                          : seed_unital_dg(rng, base, spec.arity_bound);
                break;
            case 4: a = seed_complex(rng, base, spec.arity_bound,
                                     (int)rng.pick(2, std::max(2, spec.max_dim - 1)));
                break;
            default: {
                AlgPtr x = seed_unital_dg(rng, base, spec.arity_bound);
                AlgPtr y = spec.arity_bound >= 3
                               ? seed_m3(rng, base, spec.arity_bound)
                               : seed_complex(rng, base, spec.arity_bound, 2);
                a = direct_sum_algebras(x, y, spec.arity_bound);
                break;
            }
        }
        if (a->space()->dim() > spec.max_dim) continue;
        // transport along a random basis change
        a = transport_algebra(a, gen_invertible_map(rng, a->space()));

        // optional m_3 perturbation against the linear Stasheff constraints
        if (spec.arity_bound >= 3 && a->m(3).is_zero() && rng.chance(40)) {
            auto op3 = [&](const HomMap& x) { return m3_linear_obstruction(*a, x, 3); };
            auto op4 = [&](const HomMap& x) { return m3_linear_obstruction(*a, x, 4); };
            auto slots = admissible_slots(*a->power(3), *a->space(), -1);
            auto k3 = kernel_of_linear_operator(op3, a->power(3), a->space(), -1, true,
                                                slots);
            std::vector<HomMap> joint;
            for (const auto& k : k3)
                if (op4(k).is_zero()) joint.push_back(k);
            for (int tries = 0; tries < 4 && !joint.empty(); ++tries) {
                HomMap cand(a->power(3), a->space(), -1);
                for (const auto& k : joint)
                    if (rng.chance(60)) cand = cand + k.scaled(rng.scalar(spec.field, 2));
                if (cand.is_zero()) continue;
                auto b = std::make_shared<AInfAlgebra>(a->space(), a->arity_bound());
                for (int n = 1; n <= 2; ++n)
                    if (!a->m(n).is_zero()) b->set_op(n, a->m(n));
                b->set_op(3, cand);
                if (check_stasheff_all(*b)) {
                    a = b;
                    break;
                }
            }
        }
        if (check_stasheff_all(*a)) return a;
    }
    throw BocsError(Err::GenerationFailed, "no valid algebra at this seed");
}

GModMorphism gen_gmod_morphism(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                               const SpacePtr& n, int deg, int density_pct) {
    GModMorphism f(b, m, n, deg);
    HomMap f0(m, n, deg);
    for (auto [r, c] : admissible_slots(*m, *n, deg))
        if (rng.chance(density_pct)) f0.set(r, c, rng.scalar(m->base().field, 3));
    f.set_f0(f0);
    const auto& cb = *b->cbar();
    for (int c = 0; c < cb.dim(); ++c) {
        if (!rng.chance(density_pct)) continue;
        const auto& ce = cb.at(c);
        HomMap blk(m, n, deg + ce.deg, false);
        bool any = false;
        for (auto [row, col] : admissible_slots(*m, *n, deg + ce.deg, false)) {
            if (m->at(col).rid != ce.lid || n->at(row).rid != ce.rid) continue;
            if (rng.chance(density_pct)) {
                blk.set(row, col, rng.scalar(m->base().field, 3));
                any = true;
            }
        }
        if (any) f.set_f1(c, blk);
    }
    return f;
}

GModMorphism gen_gmod_automorphism(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                                   int density_pct) {
    GModMorphism f = gen_gmod_morphism(rng, b, m, m, 0, density_pct);
    f.set_f0(gen_invertible_map(rng, m));
    return f;
}

AlgPtr transport_algebra(const AlgPtr& x, const HomMap& p) {
    auto a = std::make_shared<AInfAlgebra>(x->space(), x->arity_bound());
    HomMap pinv = solve_splitting(p).section;
    for (int n = 1; n <= x->arity_bound(); ++n) {
        if (x->m(n).is_zero()) continue;
        std::vector<const HomMap*> ptrs((size_t)n, &pinv);
        HomMap big = n == 1 ? pinv : tensor_many(ptrs);
        a->set_op(n, p.after(x->m(n)).after(big));
    }
    return a;
}

/* ---- twisted-side generators ------------------------------------------ */

std::pair<SpacePtr, HomMap> gen_contractible_complex(Rng& rng, const BaseRing& base,
                                                     int pairs, int min_deg, int max_deg,
                                                     const std::string& prefix) {
    std::vector<BasisElem> basis;
    for (int i = 0; i < pairs; ++i) {
        int d = (int)rng.pick(min_deg, max_deg);
        int r = (int)rng.pick(0, base.n - 1);
        basis.push_back({prefix + "s" + std::to_string(i), d, 0, r});
        basis.push_back({prefix + "t" + std::to_string(i), d + 1, 0, r});
    }
    auto sp = GradedSpace::make(base, false, basis);
    HomMap u0(sp, sp, 1);
    for (int i = 0; i < pairs; ++i)
        u0.set(sp->index_of(prefix + "t" + std::to_string(i)),
               sp->index_of(prefix + "s" + std::to_string(i)), Scalar::one(base.field));
    return {sp, u0};
}

static TwistedModule gen_mc_impl(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                                 const HomMap& u0, int density_pct, bool randomize) {
    Field F = m->base().field;
    if (!u0.after(u0).is_zero())
        throw BocsError(Err::GenerationFailed, "u0 is not square zero");
    GModMorphism u(b, m, m, 1);
    u.set_f0(u0);
    const auto& cb = *b->cbar();
    for (int lvl = 1; lvl <= b->levels(); ++lvl) {
        // unknowns: all admissible block slots of the new layer
        struct Unk {
            int c, row, col;
        };
        std::vector<Unk> unk;
        std::map<std::tuple<int, int, int>, int> eqidx;
        auto eq = [&eqidx](int c, int row, int col) {
            auto key = std::make_tuple(c, row, col);
            auto it = eqidx.find(key);
            if (it == eqidx.end()) it = eqidx.emplace(key, (int)eqidx.size()).first;
            return it->second;
        };
        std::vector<int> layer_cs;
        for (int c = 0; c < cb.dim(); ++c)
            if (b->layer(c) == lvl) layer_cs.push_back(c);
        for (int c : layer_cs)
            for (auto [row, col] : admissible_slots(*m, *m, 1 + cb.at(c).deg, false)) {
                if (m->at(col).rid != cb.at(c).lid || m->at(row).rid != cb.at(c).rid)
                    continue;
                unk.push_back({c, row, col});
            }
        // linear system: for each equation block c:
        //   (-1)^{|m_col|} u1(delta c) + u0 u1(c) + u1(c) u0 = rhs(c)
        std::map<int, std::pair<SparseVec, SparseVec>> pivots;
        std::vector<SparseVec> kernel;
        auto reduce = [&pivots](SparseVec& v, SparseVec& w) {
            while (!v.empty()) {
                auto it = pivots.find(v.begin()->first);
                if (it == pivots.end()) break;
                Scalar c = v.begin()->second / it->second.first.begin()->second;
                v = vec_add(v, vec_scale(-c, it->second.first));
                w = vec_add(w, vec_scale(-c, it->second.second));
            }
        };
        auto dcols = b->delta().columns();
        std::map<int, std::vector<std::pair<int, Scalar>>> delta_into;
        for (int c : layer_cs)
            for (const auto& [cp, v] : dcols[c])
                if (b->layer(cp) == lvl) delta_into[cp].push_back({c, v});
        for (size_t k = 0; k < unk.size(); ++k) {
            SparseVec colv;
            auto addv = [&colv](int idx, const Scalar& v) {
                if (v.is_zero()) return;
                auto it = colv.find(idx);
                if (it == colv.end()) {
                    colv.emplace(idx, v);
                } else {
                    it->second += v;
                    if (it->second.is_zero()) colv.erase(it);
                }
            };
            const auto& x = unk[k];
            // u0 u1(c) term: rows u0(row') <- row
            for (const auto& [rc, v] : u0.entries())
                if (rc.second == x.row) addv(eq(x.c, rc.first, x.col), v);
            // u1(c) u0 term: columns
            for (const auto& [rc, v] : u0.entries())
                if (rc.first == x.col) addv(eq(x.c, x.row, rc.second), v);
            // delta contribution: unknown block at x.c appears in the equation
            // of every same-layer c' with delta(c') containing x.c
            auto it = delta_into.find(x.c);
            if (it != delta_into.end())
                for (const auto& [cprime, v] : it->second) {
                    Scalar sg = sign_scalar(F, m->at(x.col).deg);
                    addv(eq(cprime, x.row, x.col), sg * v);
                }
            SparseVec w{{(int)k, Scalar::one(F)}};
            reduce(colv, w);
            if (vec_is_zero(colv))
                kernel.push_back(w);
            else
                pivots[colv.begin()->first] = {colv, w};
        }
        // right-hand side: -(u1.u1)(c) - (-1)^{|m|} u1(lower part of delta c)
        SparseVec rhs;
        auto addr = [&rhs](int idx, const Scalar& v) {
            if (v.is_zero()) return;
            auto it = rhs.find(idx);
            if (it == rhs.end()) {
                rhs.emplace(idx, v);
            } else {
                it->second += v;
                if (it->second.is_zero()) rhs.erase(it);
            }
        };
        for (int c : layer_cs) {
            for (const auto& t : b->mubar(c)) {
                auto u2 = u.f1_blocks().find(t.c2);
                if (u2 == u.f1_blocks().end()) continue;
                auto u1b = u.f1_blocks().find(t.c1);
                if (u1b == u.f1_blocks().end()) continue;
                HomMap q = u2->second.after(u1b->second).scaled(t.coef);
                for (const auto& [rc, v] : q.entries()) addr(eq(c, rc.first, rc.second), -v);
            }
            for (const auto& [cp, v] : dcols[c]) {
                if (b->layer(cp) == lvl) continue; // unknown side
                auto ub = u.f1_blocks().find(cp);
                if (ub == u.f1_blocks().end()) continue;
                for (const auto& [rc, w] : ub->second.entries()) {
                    Scalar sg = sign_scalar(F, m->at(rc.second).deg);
                    addr(eq(c, rc.first, rc.second), -(sg * v * w));
                }
            }
        }
        // solve
        SparseVec sol, rest = rhs;
        for (const auto& [lead, p] : pivots) {
            auto it = rest.find(lead);
            if (it == rest.end()) continue;
            Scalar c = it->second / p.first.begin()->second;
            rest = vec_add(rest, vec_scale(-c, p.first));
            sol = vec_add(sol, vec_scale(c, p.second));
        }
        if (!vec_is_zero(rest))
            throw BocsError(Err::GenerationFailed,
                            "MC layer system inconsistent at level " + std::to_string(lvl));
        if (randomize)
            for (const auto& kv : kernel)
                if (rng.chance(density_pct))
                    sol = vec_add(sol, vec_scale(rng.scalar(F, 2), kv));
        std::map<int, HomMap> blocks;
        for (const auto& [k, v] : sol) {
            const auto& x = unk[k];
            auto it = blocks.find(x.c);
            if (it == blocks.end())
                it = blocks.emplace(x.c, HomMap(m, m, 1 + cb.at(x.c).deg, false)).first;
            it->second.add(x.row, x.col, v);
        }
        for (const auto& [c, blk] : blocks) u.set_f1(c, blk);
    }
    TwistedModule out{b, m, u};
    if (auto r = check_mc(out); !r)
        throw BocsError(Err::GenerationFailed, "layer solve left MC broken: " + r.witness);
    return out;
}

TwistedModule gen_mc(Rng& rng, const BocsPtr& b, const SpacePtr& m, const HomMap& u0,
                     int density_pct) {
    try {
        return gen_mc_impl(rng, b, m, u0, density_pct, true);
    } catch (const BocsError& e) {
        if (e.kind() != Err::GenerationFailed) throw;
    }
    // retry with the particular solutions only; the strict extension u1 = 0
    // saturates every layer equation when that also fails
    try {
        return gen_mc_impl(rng, b, m, u0, density_pct, false);
    } catch (const BocsError& e) {
        if (e.kind() != Err::GenerationFailed) throw;
    }
    GModMorphism u(b, m, m, 1);
    u.set_f0(u0);
    TwistedModule out{b, m, u};
    if (auto r = check_mc(out); !r)
        throw BocsError(Err::GenerationFailed, "strict fallback fails MC: " + r.witness);
    return out;
}

TwistedModule gen_mc_random(Rng& rng, const BocsPtr& b, const SpacePtr& m,
                            int density_pct) {
    HomMap u0 = gen_square_zero(rng, m, 50);
    TwistedModule mu = gen_mc(rng, b, m, u0, density_pct);
    // transport along a random automorphism for richer f1 components
    GModMorphism h = gen_gmod_automorphism(rng, b, m, density_pct);
    return transport(h, mu);
}

TwistedModule gen_acyclic_twisted(Rng& rng, const BocsPtr& b, int pairs,
                                  int density_pct) {
    auto [sp, u0] = gen_contractible_complex(rng, b->base(), pairs, -1, 1, "a");
    TwistedModule mu = gen_mc(rng, b, sp, u0, density_pct);
    GModMorphism h = gen_gmod_automorphism(rng, b, sp, density_pct);
    return transport(h, mu);
}

GenIdem gen_twisted_idempotent(Rng& rng, const BocsPtr& b, int density_pct) {
    auto m1 = gen_space(rng, b->base(), (int)rng.pick(1, 2), -1, 1, false, "x");
    auto m2 = gen_space(rng, b->base(), (int)rng.pick(1, 2), -1, 1, false, "y");
    TwistedModule p1 = gen_mc_random(rng, b, m1, density_pct);
    TwistedModule p2 = gen_mc_random(rng, b, m2, density_pct);
    TwistedSum ds = twisted_direct_sum(p1, p2);
    GModMorphism e0 = compose(ds.in1, ds.pr1); // diag(I, 0)
    GModMorphism h = gen_gmod_automorphism(rng, b, ds.sum.m, density_pct);
    TwistedModule total = transport(h, ds.sum);
    GModMorphism e = compose(compose(h, e0), invert(h));
    return {total, e};
}

GenConf gen_conflation(Rng& rng, const BocsPtr& b, int density_pct) {
    auto m1 = gen_space(rng, b->base(), (int)rng.pick(1, 2), -1, 1, false, "x");
    auto m2 = gen_space(rng, b->base(), (int)rng.pick(1, 2), -1, 1, false, "y");
    TwistedModule sub = gen_mc_random(rng, b, m1, density_pct);
    TwistedModule quot = gen_mc_random(rng, b, m2, density_pct);
    TwistedSum ds = twisted_direct_sum(sub, quot);
    GModMorphism h = gen_gmod_automorphism(rng, b, ds.sum.m, density_pct);
    TwistedModule total = transport(h, ds.sum);
    GModMorphism f = compose(h, ds.in1);
    GModMorphism g = compose(ds.pr2, invert(h));
    return {sub, total, quot, f, g};
}

GenQI gen_quasi_iso(Rng& rng, const BocsPtr& b, int density_pct) {
    auto mn = gen_space(rng, b->base(), (int)rng.pick(1, 2), -1, 1, false, "n");
    TwistedModule tgt = gen_mc_random(rng, b, mn, density_pct);
    TwistedModule cacy = gen_acyclic_twisted(rng, b, (int)rng.pick(1, 2), density_pct);
    TwistedSum ds = twisted_direct_sum(tgt, cacy);
    GModMorphism h = gen_gmod_automorphism(rng, b, ds.sum.m, density_pct);
    TwistedModule src = transport(h, ds.sum);
    // projection off the contractible summand is a quasi-isomorphism
    GModMorphism f = compose(ds.pr1, invert(h));
    return {src, tgt, f};
}

/* ---- brute-force evaluation paths ------------------------------------ */

SparseVec brute_apply_slot(const AInfAlgebra& a, const HomMap& g, int r, int s, int n,
                           int word_index) {
    SparseVec out;
    const auto& pw = *a.power(n);
    std::vector<int> w =
        pw.is_product() ? pw.word(word_index) : std::vector<int>{word_index};
    int pre_deg = 0;
    for (int i = 0; i < r; ++i) pre_deg += a.space()->at(w[i]).deg;
    std::vector<int> mid(w.begin() + r, w.begin() + r + s);
    int col = s == 1 ? mid[0] : a.power(s)->index_of_word(mid);
    if (col < 0) return out;
    Field F = a.field();
    Scalar sg = (g.deg() * pre_deg) % 2 ? Scalar(F, -1) : Scalar(F, 1);
    int t = n - r - s;
    for (const auto& [rc, v] : g.entries()) {
        if (rc.second != col) continue;
        std::vector<int> nw(w.begin(), w.begin() + r);
        nw.push_back(rc.first);
        nw.insert(nw.end(), w.begin() + r + s, w.end());
        int out_n = r + 1 + t;
        int idx = out_n == 1 ? nw[0] : a.power(out_n)->index_of_word(nw);
        if (idx < 0) throw BocsError(Err::IdempotentMismatch, "brute slot escape");
        auto it = out.find(idx);
        Scalar add = v * sg;
        if (it == out.end()) {
            out.emplace(idx, add);
        } else {
            it->second += add;
            if (it->second.is_zero()) out.erase(it);
        }
    }
    return out;
}

namespace {
std::map<int, std::vector<std::pair<int, Scalar>>> cols_of(const HomMap& f) {
    std::map<int, std::vector<std::pair<int, Scalar>>> m;
    for (const auto& [rc, v] : f.entries()) m[rc.second].push_back({rc.first, v});
    return m;
}
} // namespace

HomMap brute_stasheff_defect(const AInfAlgebra& a, int n) {
    HomMap acc(a.power(n), a.space(), 3 - n);
    Field F = a.field();
    std::map<int, std::map<int, std::vector<std::pair<int, Scalar>>>> outer_cols;
    for (int k = 1; k <= n; ++k) outer_cols[k] = cols_of(a.m(k));
    for (int w = 0; w < a.power(n)->dim(); ++w) {
        for (int s = 1; s <= std::min(n, a.arity_bound()); ++s) {
            if (a.m(s).is_zero()) continue;
            for (int r = 0; r + s <= n; ++r) {
                int t = n - r - s;
                if (a.m(r + 1 + t).is_zero()) continue;
                SparseVec inner = brute_apply_slot(a, a.m(s), r, s, n, w);
                Scalar sg = sign_scalar(F, r + s * t);
                const auto& oc = outer_cols[r + 1 + t];
                for (const auto& [idx, v] : inner) {
                    auto it = oc.find(idx);
                    if (it == oc.end()) continue;
                    for (const auto& [row, mv] : it->second)
                        acc.add(row, w, sg * v * mv);
                }
            }
        }
    }
    return acc;
}

HomMap brute_morphism_defect(const AlgMorphism& fm, int n) {
    const AInfAlgebra& a = *fm.src;
    const AInfAlgebra& b = *fm.tgt;
    Field F = a.field();
    HomMap acc(a.power(n), b.space(), 2 - n);
    // source side: f_{r+1+t} (id^r (x) m_s (x) id^t)
    std::map<int, std::map<int, std::vector<std::pair<int, Scalar>>>> fcols;
    for (int k = 1; k <= n; ++k) fcols[k] = cols_of(fm.f(k));
    for (int w = 0; w < a.power(n)->dim(); ++w)
        for (int s = 1; s <= std::min(n, a.arity_bound()); ++s) {
            if (a.m(s).is_zero()) continue;
            for (int r = 0; r + s <= n; ++r) {
                int t = n - r - s;
                if (fcols[r + 1 + t].empty()) continue;
                SparseVec inner = brute_apply_slot(a, a.m(s), r, s, n, w);
                Scalar sg = sign_scalar(F, r + s * t);
                const auto& oc = fcols[r + 1 + t];
                for (const auto& [idx, v] : inner) {
                    auto it = oc.find(idx);
                    if (it == oc.end()) continue;
                    for (const auto& [row, mv] : it->second)
                        acc.add(row, w, sg * v * mv);
                }
            }
        }
    // target side: m'_r (f_{i_1} (x) ... (x) f_{i_r}) on each word
    for (const auto& parts : compositions(n)) {
        int r = (int)parts.size();
        if (b.m(r).is_zero()) continue;
        std::vector<HomMap> fs;
        bool dead = false;
        for (int i : parts) {
            fs.push_back(fm.f(i));
            if (fs.back().is_zero()) dead = true;
        }
        if (dead) continue;
        Scalar outer_sign = sign_scalar(F, sgn_parity(parts));
        auto bcols = cols_of(b.m(r));
        for (int w = 0; w < a.power(n)->dim(); ++w) {
            std::vector<int> wbuf;
            if (a.power(n)->is_product())
                wbuf = a.power(n)->word(w);
            else
                wbuf = {w};
            const auto& word = wbuf;
            // evaluate the tensor of f's pointwise with explicit Koszul signs
            std::vector<std::pair<std::vector<int>, Scalar>> acc2 = {
                {{}, Scalar::one(F)}};
            int pos = 0;
            int deg_before = 0;
            for (int j = 0; j < r && !acc2.empty(); ++j) {
                int len = parts[j];
                std::vector<int> seg(word.begin() + pos, word.begin() + pos + len);
                int segdeg = 0;
                for (int l : seg) segdeg += a.space()->at(l).deg;
                int col = len == 1 ? seg[0] : a.power(len)->index_of_word(seg);
                std::vector<std::pair<std::vector<int>, Scalar>> next;
                if (col >= 0) {
                    Scalar ks = sign_scalar(F, fs[j].deg() * deg_before);
                    for (const auto& [rc, v] : fs[j].entries()) {
                        if (rc.second != col) continue;
                        for (const auto& [pw, pv] : acc2) {
                            auto nw = pw;
                            nw.push_back(rc.first);
                            next.push_back({nw, pv * v * ks});
                        }
                    }
                }
                acc2 = std::move(next);
                pos += len;
                deg_before += segdeg;
            }
            for (const auto& [bw, v] : acc2) {
                int col = r == 1 ? bw[0] : b.power(r)->index_of_word(bw);
                if (col < 0) continue;
                auto it = bcols.find(col);
                if (it == bcols.end()) continue;
                for (const auto& [row, mv] : it->second)
                    acc.add(row, w, -(outer_sign * v * mv));
            }
        }
    }
    return acc;
}

HomMap brute_alg_homotopy_defect(const AlgHomotopy& h, const AlgMorphism& fm,
                                 const AlgMorphism& gm, int n) {
    const AInfAlgebra& a = *h.src;
    const AInfAlgebra& b = *h.tgt;
    Field F = a.field();
    HomMap acc = fm.f(n) - gm.f(n);
    // H(h)_n = sum (-1)^{r+st} h_{r+1+t}(id^r (x) m_s (x) id^t)
    std::map<int, std::map<int, std::vector<std::pair<int, Scalar>>>> hcols;
    for (int k = 1; k <= n; ++k) hcols[k] = cols_of(h.h(k));
    for (int w = 0; w < a.power(n)->dim(); ++w)
        for (int s = 1; s <= std::min(n, a.arity_bound()); ++s) {
            if (a.m(s).is_zero()) continue;
            for (int r = 0; r + s <= n; ++r) {
                int t = n - r - s;
                if (hcols[r + 1 + t].empty()) continue;
                SparseVec inner = brute_apply_slot(a, a.m(s), r, s, n, w);
                Scalar sg = sign_scalar(F, r + s * t);
                const auto& oc = hcols[r + 1 + t];
                for (const auto& [idx, v] : inner) {
                    auto it = oc.find(idx);
                    if (it == oc.end()) continue;
                    for (const auto& [row, mv] : it->second) acc.add(row, w, -(sg * v * mv));
                }
            }
        }
    // H_{f,g}(h)_n = sum (-1)^{sgn} m^B_{r+1+t}(f_{i_1} (x)...(x) h_s (x)...(x) g_{j_t})
    std::map<int, std::map<int, std::vector<std::pair<int, Scalar>>>> bcols;
    for (int k = 1; k <= n; ++k) bcols[k] = cols_of(b.m(k));
    for (int left = 0; left <= n - 1; ++left) {
        std::vector<std::vector<int>> lefts =
            left == 0 ? std::vector<std::vector<int>>{{}} : compositions(left);
        for (int s = 1; left + s <= n; ++s) {
            int rest = n - left - s;
            std::vector<std::vector<int>> rights =
                rest == 0 ? std::vector<std::vector<int>>{{}} : compositions(rest);
            if (h.h(s).is_zero()) continue;
            for (const auto& iv : lefts)
                for (const auto& jv : rights) {
                    int rr = (int)iv.size(), tt = (int)jv.size();
                    if (b.m(rr + 1 + tt).is_zero()) continue;
                    // composite sgn exponent of the homotopy identity
                    long sgexp = (long)rr * (tt + 1) + (long)s * tt;
                    for (int u = 1; u <= rr - 1; ++u)
                        sgexp += (long)(rr - u) * (1 - iv[u - 1]);
                    long si = 0;
                    for (int x : iv) si += x;
                    sgexp += (long)tt * si;
                    for (int v = 1; v <= tt - 1; ++v)
                        sgexp += (long)(tt - v) * (1 - jv[v - 1]);
                    Scalar outer_sign = sign_scalar(F, (int)(((sgexp % 2) + 2) % 2));
                    // factor sequence: f_{i...}, h_s, g_{j...}
                    std::vector<std::pair<const HomMap, int>> chain;
                    std::vector<HomMap> maps;
                    std::vector<int> lens;
                    for (int i : iv) {
                        maps.push_back(fm.f(i));
                        lens.push_back(i);
                    }
                    maps.push_back(h.h(s));
                    lens.push_back(s);
                    for (int j : jv) {
                        maps.push_back(gm.f(j));
                        lens.push_back(j);
                    }
                    bool dead = false;
                    for (const auto& mp : maps)
                        if (mp.is_zero()) dead = true;
                    if (dead) continue;
                    std::vector<std::map<int, std::vector<std::pair<int, Scalar>>>> mcols;
                    for (const auto& mp : maps) mcols.push_back(cols_of(mp));
                    for (int w = 0; w < a.power(n)->dim(); ++w) {
                        std::vector<int> wbuf;
                        if (a.power(n)->is_product())
                            wbuf = a.power(n)->word(w);
                        else
                            wbuf = {w};
                        // evaluate the tensor pointwise with Koszul signs
                        std::vector<std::pair<std::vector<int>, Scalar>> acc2 = {
                            {{}, outer_sign}};
                        int pos = 0, deg_before = 0;
                        for (size_t k = 0; k < maps.size() && !acc2.empty(); ++k) {
                            int len = lens[k];
                            std::vector<int> seg(wbuf.begin() + pos,
                                                 wbuf.begin() + pos + len);
                            int segdeg = 0;
                            for (int l : seg) segdeg += a.space()->at(l).deg;
                            int col = len == 1 ? seg[0]
                                               : a.power(len)->index_of_word(seg);
                            std::vector<std::pair<std::vector<int>, Scalar>> next;
                            if (col >= 0) {
                                auto it = mcols[k].find(col);
                                if (it != mcols[k].end()) {
                                    Scalar ks =
                                        sign_scalar(F, maps[k].deg() * deg_before);
                                    for (const auto& [row, v] : it->second)
                                        for (const auto& [pw, pv] : acc2) {
                                            auto nw = pw;
                                            nw.push_back(row);
                                            next.push_back({nw, pv * v * ks});
                                        }
                                }
                            }
                            acc2 = std::move(next);
                            pos += len;
                            deg_before += segdeg;
                        }
                        for (const auto& [bw, v] : acc2) {
                            int col = (int)bw.size() == 1
                                          ? bw[0]
                                          : b.power((int)bw.size())->index_of_word(bw);
                            if (col < 0) continue;
                            auto it = bcols[rr + 1 + tt].find(col);
                            if (it == bcols[rr + 1 + tt].end()) continue;
                            for (const auto& [row, mv] : it->second)
                                acc.add(row, w, -(v * mv));
                        }
                    }
                }
        }
    }
    return acc;
}

GModMorphism brute_hat_delta(const GModMorphism& f) {
    // hat_delta(f)^1(c)[m] = (-1)^{|f|+|m|+1} f^1(delta c)[m], element by element
    const Bocs& b = *f.bocs();
    Field F = f.field();
    GModMorphism out(f.bocs(), f.dom(), f.cod(), f.deg() + 1);
    auto dcols = b.delta().columns();
    for (int c = 0; c < b.cbar()->dim(); ++c) {
        if (dcols[c].empty()) continue;
        HomMap blk(f.dom(), f.cod(), f.deg() + 1 + b.cbar()->at(c).deg, false);
        bool any = false;
        for (int m = 0; m < f.dom()->dim(); ++m) {
            Scalar sg = sign_scalar(F, f.deg() + f.dom()->at(m).deg + 1);
            for (const auto& [cp, v] : dcols[c])
                for (const auto& [row, w] : f.eval(m, cp)) {
                    blk.add(row, m, sg * v * w);
                    any = true;
                }
        }
        if (any) out.add_f1(c, blk);
    }
    return out;
}

GModMorphism brute_compose_gmod(const GModMorphism& g, const GModMorphism& f) {
    // evaluate g (f (x) id_C)(id_M (x) mu) on every m (x) c with the full
    // counital comultiplication mu(c) = mubar(c) + 1 (x) c + c (x) 1
    const Bocs& b = *f.bocs();
    GModMorphism r(f.bocs(), f.dom(), g.cod(), f.deg() + g.deg());
    Field F = f.field();
    // c = -1 (unit slot): g(f(m (x) 1) (x) 1)
    HomMap f0c(f.dom(), g.cod(), f.deg() + g.deg());
    for (int m = 0; m < f.dom()->dim(); ++m) {
        SparseVec fm = f.eval(m, -1);
        for (const auto& [k, v] : fm)
            for (const auto& [k2, v2] : g.eval(k, -1)) f0c.add(k2, m, v * v2);
    }
    r.set_f0(f0c);
    for (int c = 0; c < b.cbar()->dim(); ++c) {
        HomMap blk(f.dom(), g.cod(), f.deg() + g.deg() + b.cbar()->at(c).deg, false);
        bool any = false;
        for (int m = 0; m < f.dom()->dim(); ++m) {
            SparseVec out;
            auto accum = [&](const SparseVec& x, const Scalar& sc) {
                for (const auto& [k, v] : x) {
                    auto it = out.find(k);
                    Scalar add = v * sc;
                    if (add.is_zero()) continue;
                    if (it == out.end()) {
                        out.emplace(k, add);
                    } else {
                        it->second += add;
                        if (it->second.is_zero()) out.erase(it);
                    }
                }
            };
            Scalar one = Scalar::one(F);
            // 1 (x) c : g(f(m (x) 1) (x) c) = g1(c)[f0 m]
            for (const auto& [k, v] : f.eval(m, -1)) accum(g.eval(k, c), v);
            // c (x) 1 : g(f(m (x) c) (x) 1) = g0[f1(c) m]
            for (const auto& [k, v] : f.eval(m, c)) accum(g.eval(k, -1), v);
            // mubar terms
            for (const auto& t : b.mubar(c))
                for (const auto& [k, v] : f.eval(m, t.c1))
                    accum(g.eval(k, t.c2), v * t.coef);
            for (const auto& [k, v] : out) {
                blk.add(k, m, v);
                any = true;
            }
        }
        if (any) r.set_f1(c, blk);
    }
    return r;
}

} // namespace bocskit
