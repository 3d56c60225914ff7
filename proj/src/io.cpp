#include "bocskit/io.hpp"

#include <fstream>

namespace bocskit {

bool Workspace::has(const std::string& name) const { return !type_of(name).empty(); }

std::string Workspace::type_of(const std::string& name) const {
    if (spaces.count(name)) return "graded_module";
    if (algebras.count(name)) return "ainf_algebra";
    if (modules.count(name)) return "ainf_module";
    if (bocses.count(name)) return "bocs";
    if (alg_morphisms.count(name)) return "alg_morphism";
    if (alg_homotopies.count(name)) return "alg_homotopy";
    if (mod_morphisms.count(name)) return "mod_morphism";
    if (mod_homotopies.count(name)) return "mod_homotopy";
    if (twisted.count(name)) return "twisted_module";
    if (twisted_morphisms.count(name)) return "twisted_morphism";
    if (homotopies1.count(name)) return "homotopy1";
    if (bocs_morphisms.count(name)) return "bocs_morphism";
    if (bocs_homotopies.count(name)) return "bocs_homotopy";
    if (gmod_morphisms.count(name)) return "gmod_morphism";
    return "";
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw BocsError(Err::ParseError, msg); }

SpacePtr parse_space(const Json& j, const BaseRing& base) {
    if (!j.contains("basis")) bad("space needs a basis array");
    std::vector<BasisElem> basis;
    for (const auto& e : j.at("basis")) {
        if (!e.is_array() || e.size() < 2) bad("basis element must be [label, deg, ...]");
        BasisElem b;
        b.label = e.at(0).get<std::string>();
        b.deg = e.at(1).get<int>();
        b.lid = e.size() > 2 ? e.at(2).get<int>() : 0;
        b.rid = e.size() > 3 ? e.at(3).get<int>() : b.lid;
        basis.push_back(b);
    }
    bool bi = j.value("bimodule", false);
    return GradedSpace::make(base, bi, basis);
}

/* matrix entries as [row_label, col_label, coef] */
HomMap parse_hommap(const Json& j, const SpacePtr& dom, const SpacePtr& cod, int deg,
                    Field f, bool s_linear = true) {
    HomMap out(dom, cod, deg, s_linear);
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3) bad("matrix entry must be [row, col, coef]");
        int row = cod->index_of(e.at(0).get<std::string>());
        int col = dom->index_of(e.at(1).get<std::string>());
        if (row < 0 || col < 0) bad("unknown basis label in matrix entry");
        out.add(row, col, Scalar::parse(f, e.at(2).get<std::string>()));
    }
    return out;
}

/* operation entries as [out_label, [in labels...], coef] on a product space */
HomMap parse_op(const Json& j, const SpacePtr& dom, const SpacePtr& cod, int deg,
                Field f) {
    HomMap out(dom, cod, deg);
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3)
            bad("operation entry must be [out, [in...], coef]");
        int row = cod->index_of(e.at(0).get<std::string>());
        if (row < 0) bad("unknown output label");
        int col;
        if (dom->is_product()) {
            std::vector<int> w;
            size_t k = 0;
            for (const auto& lab : e.at(1)) {
                const auto& atom = dom->atoms()[k++];
                int i = atom->index_of(lab.get<std::string>());
                if (i < 0) bad("unknown input label " + lab.get<std::string>());
                w.push_back(i);
            }
            col = dom->index_of_word(w);
        } else {
            if (e.at(1).size() != 1) bad("operation arity mismatch");
            col = dom->index_of(e.at(1).at(0).get<std::string>());
        }
        if (col < 0) bad("input word not in the domain (idempotent mismatch?)");
        out.add(row, col, Scalar::parse(f, e.at(2).get<std::string>()));
    }
    return out;
}

} // namespace

Workspace load_workspace(const Json& doc) {
    Workspace w;
    w.doc = doc;
    if (doc.value("format", 0) != 1) bad("unsupported or missing format (expect 1)");
    std::string fs = doc.value("field", "q");
    if (fs == "q")
        w.field = Field::rationals();
    else if (fs.rfind("fp:", 0) == 0)
        w.field = Field::fp(std::stol(fs.substr(3)));
    else
        bad("field must be 'q' or 'fp:P'");
    w.base_n = doc.value("base_ring", 1);
    if (w.base_n < 1) bad("base_ring must be >= 1");
    w.level = doc.value("level", 4);
    BaseRing base{w.field, w.base_n};
    if (!doc.contains("structures")) return w;
    const Json& st = doc.at("structures");

    // two passes: spaces/algebras/bocses first, then dependents
    for (auto it = st.begin(); it != st.end(); ++it) {
        const std::string& name = it.key();
        const Json& j = it.value();
        std::string type = j.value("type", "");
        if (type == "graded_module") {
            w.spaces[name] = parse_space(j, base);
        } else if (type == "ainf_algebra") {
            auto sp = parse_space(j.at("space"), base);
            if (!sp->bimodule()) {
                // algebras live on bimodules; re-parse with the flag forced
                Json fixed = j.at("space");
                fixed["bimodule"] = true;
                sp = parse_space(fixed, base);
            }
            auto a = std::make_shared<AInfAlgebra>(sp, j.value("arity_bound", 4));
            if (j.contains("ops"))
                for (auto op = j.at("ops").begin(); op != j.at("ops").end(); ++op) {
                    int n = std::stoi(op.key());
                    a->set_op(n, parse_op(op.value(), a->power(n), sp, 2 - n, w.field));
                }
            w.algebras[name] = a;
        }
    }
    for (auto it = st.begin(); it != st.end(); ++it) {
        const std::string& name = it.key();
        const Json& j = it.value();
        std::string type = j.value("type", "");
        if (type == "bocs") {
            auto sp = parse_space(j.at("space"), base);
            std::vector<int> layers(sp->dim(), 1);
            if (j.contains("layers"))
                for (const auto& e : j.at("layers")) {
                    int i = sp->index_of(e.at(0).get<std::string>());
                    if (i < 0) bad("unknown label in layers");
                    layers[i] = e.at(1).get<int>();
                }
            int lv = j.value("levels", 1);
            auto b = std::make_shared<Bocs>(sp, layers, lv);
            if (j.contains("mubar"))
                for (const auto& e : j.at("mubar")) {
                    int c = sp->index_of(e.at(0).get<std::string>());
                    int c1 = sp->index_of(e.at(1).get<std::string>());
                    int c2 = sp->index_of(e.at(2).get<std::string>());
                    if (c < 0 || c1 < 0 || c2 < 0) bad("unknown label in mubar");
                    b->set_mubar_term(c, Scalar::parse(w.field, e.at(3).get<std::string>()),
                                      c1, c2);
                }
            if (j.contains("delta"))
                b->set_delta(parse_hommap(j.at("delta"), sp, sp, 1, w.field));
            w.bocses[name] = b;
        } else if (type == "bar_bocs") {
            auto a = w.algebras.find(j.at("algebra").get<std::string>());
            if (a == w.algebras.end()) bad("bar_bocs refers to unknown algebra");
            w.bocses[name] = bar_construct(a->second, j.value("level", w.level));
        } else if (type == "ainf_module") {
            auto a = w.algebras.find(j.at("algebra").get<std::string>());
            if (a == w.algebras.end()) bad("ainf_module refers to unknown algebra");
            auto sp = parse_space(j.at("space"), base);
            auto m = std::make_shared<AInfModule>(a->second, sp,
                                                  j.value("arity_bound", 4));
            if (j.contains("ops"))
                for (auto op = j.at("ops").begin(); op != j.at("ops").end(); ++op) {
                    int n = std::stoi(op.key());
                    m->set_op(n,
                              parse_op(op.value(), m->mpower(n - 1), sp, 2 - n, w.field));
                }
            w.modules[name] = m;
        }
    }
    // third pass: morphisms and twisted structures
    for (auto it = st.begin(); it != st.end(); ++it) {
        const std::string& name = it.key();
        const Json& j = it.value();
        std::string type = j.value("type", "");
        if (type == "alg_morphism") {
            auto s = w.algebras.find(j.at("source").get<std::string>());
            auto t = w.algebras.find(j.at("target").get<std::string>());
            if (s == w.algebras.end() || t == w.algebras.end())
                bad("alg_morphism endpoints unknown");
            AlgMorphism f{s->second, t->second, {}};
            for (auto c = j.at("comps").begin(); c != j.at("comps").end(); ++c) {
                int n = std::stoi(c.key());
                f.slot(n) = parse_op(c.value(), s->second->power(n), t->second->space(),
                                     1 - n, w.field);
            }
            w.alg_morphisms[name] = {j.at("source"), j.at("target"), f};
        } else if (type == "alg_homotopy") {
            auto fm = w.alg_morphisms.find(j.at("from").get<std::string>());
            auto to = w.alg_morphisms.find(j.at("to").get<std::string>());
            if (fm == w.alg_morphisms.end() || to == w.alg_morphisms.end())
                bad("alg_homotopy endpoints unknown");
            AlgHomotopy h{fm->second.f.src, fm->second.f.tgt, {}};
            for (auto c = j.at("comps").begin(); c != j.at("comps").end(); ++c) {
                int n = std::stoi(c.key());
                h.slot(n) = parse_op(c.value(), h.src->power(n), h.tgt->space(), -n,
                                     w.field);
            }
            w.alg_homotopies[name] = {j.at("from"), j.at("to"), h};
        } else if (type == "mod_morphism") {
            auto s = w.modules.find(j.at("source").get<std::string>());
            auto t = w.modules.find(j.at("target").get<std::string>());
            if (s == w.modules.end() || t == w.modules.end())
                bad("mod_morphism endpoints unknown");
            ModMorphism f{s->second, t->second, j.value("degree", 0), {}};
            for (auto c = j.at("comps").begin(); c != j.at("comps").end(); ++c) {
                int n = std::stoi(c.key());
                f.slot(n) = parse_op(c.value(), s->second->mpower(n - 1),
                                     t->second->space(), f.deg + 1 - n, w.field);
            }
            w.mod_morphisms[name] = {j.at("source"), j.at("target"), f};
        } else if (type == "mod_homotopy") {
            auto fm = w.mod_morphisms.find(j.at("from").get<std::string>());
            auto to = w.mod_morphisms.find(j.at("to").get<std::string>());
            if (fm == w.mod_morphisms.end() || to == w.mod_morphisms.end())
                bad("mod_homotopy endpoints unknown");
            ModHomotopy h{fm->second.f.src, fm->second.f.tgt, {}};
            for (auto c = j.at("comps").begin(); c != j.at("comps").end(); ++c) {
                int n = std::stoi(c.key());
                h.slot(n) = parse_op(c.value(), h.src->mpower(n - 1), h.tgt->space(), -n,
                                     w.field);
            }
            w.mod_homotopies[name] = {fm->second.src, fm->second.tgt, j.at("from"),
                                      j.at("to"), h};
        } else if (type == "bocs_morphism") {
            auto s = w.bocses.find(j.at("source").get<std::string>());
            auto t = w.bocses.find(j.at("target").get<std::string>());
            if (s == w.bocses.end() || t == w.bocses.end())
                bad("bocs_morphism endpoints unknown");
            HomMap map = parse_hommap(j.at("map"), s->second->cbar(), t->second->cbar(),
                                      0, w.field);
            w.bocs_morphisms[name] = {j.at("source"), j.at("target"),
                                      BocsMorphism{s->second, t->second, map}};
        } else if (type == "bocs_homotopy") {
            auto p = w.bocs_morphisms.find(j.at("phi").get<std::string>());
            auto q = w.bocs_morphisms.find(j.at("psi").get<std::string>());
            if (p == w.bocs_morphisms.end() || q == w.bocs_morphisms.end())
                bad("bocs_homotopy endpoints unknown");
            HomMap h = parse_hommap(j.at("h"), p->second.psi.src->cbar(),
                                    p->second.psi.tgt->cbar(), -1, w.field);
            w.bocs_homotopies[name] = {
                j.at("phi"), j.at("psi"),
                BocsHomotopy{p->second.psi, q->second.psi, h}};
        }
    }
    // fourth pass: gmod morphisms, twisted modules and their morphisms
    auto parse_gmod = [&](const Json& j, const BocsPtr& b, const SpacePtr& dom,
                          const SpacePtr& cod, int deg) {
        GModMorphism f(b, dom, cod, deg);
        if (j.contains("f0"))
            f.set_f0(parse_hommap(j.at("f0"), dom, cod, deg, w.field));
        if (j.contains("f1"))
            for (auto c = j.at("f1").begin(); c != j.at("f1").end(); ++c) {
                int ci = b->cbar()->index_of(c.key());
                if (ci < 0) bad("unknown Cbar label " + c.key());
                f.set_f1(ci, parse_hommap(c.value(), dom, cod,
                                          deg + b->cbar()->at(ci).deg, w.field, false));
            }
        return f;
    };
    for (auto it = st.begin(); it != st.end(); ++it) {
        const std::string& name = it.key();
        const Json& j = it.value();
        std::string type = j.value("type", "");
        if (type == "twisted_module") {
            auto b = w.bocses.find(j.at("bocs").get<std::string>());
            if (b == w.bocses.end()) bad("twisted_module refers to unknown bocs");
            auto sp = parse_space(j.at("space"), base);
            GModMorphism u = parse_gmod(j.at("u"), b->second, sp, sp, 1);
            w.twisted[name] = {j.at("bocs"),
                               TwistedModule{b->second, sp, u}};
        } else if (type == "gmod_morphism") {
            auto b = w.bocses.find(j.at("bocs").get<std::string>());
            if (b == w.bocses.end()) bad("gmod_morphism refers to unknown bocs");
            auto dom = parse_space(j.at("source_space"), base);
            auto cod = parse_space(j.at("target_space"), base);
            int deg = j.value("degree", 0);
            w.gmod_morphisms[name] = {j.at("bocs"),
                                      parse_gmod(j, b->second, dom, cod, deg)};
        }
    }
    for (auto it = st.begin(); it != st.end(); ++it) {
        const std::string& name = it.key();
        const Json& j = it.value();
        std::string type = j.value("type", "");
        if (type == "twisted_morphism" || type == "homotopy1") {
            auto s = w.twisted.find(j.at("source").get<std::string>());
            auto t = w.twisted.find(j.at("target").get<std::string>());
            if (s == w.twisted.end() || t == w.twisted.end())
                bad(type + " endpoints unknown");
            int deg = j.value("degree", type == "homotopy1" ? -1 : 0);
            GModMorphism f = parse_gmod(j.at("morphism"), s->second.mu.bocs,
                                        s->second.mu.m, t->second.mu.m, deg);
            if (type == "twisted_morphism")
                w.twisted_morphisms[name] = {j.at("source"), j.at("target"), f};
            else
                w.homotopies1[name] = {j.at("source"), j.at("target"),
                                       j.value("from", ""), j.value("to", ""), f};
        }
    }
    return w;
}

Workspace load_workspace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BocsError(Err::ParseError, "cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw BocsError(Err::ParseError, std::string("invalid JSON: ") + e.what());
    }
    return load_workspace(doc);
}

Json space_to_json(const GradedSpace& sp) {
    Json j;
    j["bimodule"] = sp.bimodule();
    Json basis = Json::array();
    for (const auto& b : sp.basis()) basis.push_back(Json{b.label, b.deg, b.lid, b.rid});
    j["basis"] = basis;
    return j;
}

Json hommap_to_json(const HomMap& f) {
    Json out = Json::array();
    for (const auto& [rc, v] : f.entries())
        out.push_back(Json{f.cod()->at(rc.first).label, f.dom()->at(rc.second).label,
                           v.str()});
    return out;
}

static Json op_to_json(const HomMap& f) {
    Json out = Json::array();
    for (const auto& [rc, v] : f.entries()) {
        Json word = Json::array();
        if (f.dom()->is_product()) {
            const auto& w = f.dom()->word(rc.second);
            for (size_t k = 0; k < w.size(); ++k)
                word.push_back(f.dom()->atoms()[k]->at(w[k]).label);
        } else {
            word.push_back(f.dom()->at(rc.second).label);
        }
        out.push_back(Json{f.cod()->at(rc.first).label, word, v.str()});
    }
    return out;
}

Json algebra_to_json(const AInfAlgebra& a) {
    Json j;
    j["type"] = "ainf_algebra";
    j["arity_bound"] = a.arity_bound();
    j["space"] = space_to_json(*a.space());
    Json ops;
    for (int n = 1; n <= a.arity_bound(); ++n)
        if (!a.m(n).is_zero()) ops[std::to_string(n)] = op_to_json(a.m(n));
    j["ops"] = ops;
    return j;
}

Json module_to_json(const AInfModule& m, const std::string& algebra_name) {
    Json j;
    j["type"] = "ainf_module";
    j["algebra"] = algebra_name;
    j["arity_bound"] = m.arity_bound();
    j["space"] = space_to_json(*m.space());
    Json ops;
    for (int n = 1; n <= m.arity_bound(); ++n)
        if (!m.op(n).is_zero()) ops[std::to_string(n)] = op_to_json(m.op(n));
    j["ops"] = ops;
    return j;
}

Json bocs_to_json(const Bocs& b) {
    Json j;
    j["type"] = "bocs";
    j["levels"] = b.levels();
    j["space"] = space_to_json(*b.cbar());
    Json layers = Json::array();
    for (int i = 0; i < b.cbar()->dim(); ++i)
        layers.push_back(Json{b.cbar()->at(i).label, b.layer(i)});
    j["layers"] = layers;
    Json mu = Json::array();
    for (int c = 0; c < b.cbar()->dim(); ++c)
        for (const auto& t : b.mubar(c))
            mu.push_back(Json{b.cbar()->at(c).label, b.cbar()->at(t.c1).label,
                              b.cbar()->at(t.c2).label, t.coef.str()});
    j["mubar"] = mu;
    j["delta"] = hommap_to_json(b.delta());
    return j;
}

Json gmod_to_json(const GModMorphism& f, const std::string& bocs_name) {
    Json j;
    j["type"] = "gmod_morphism";
    j["bocs"] = bocs_name;
    j["degree"] = f.deg();
    j["source_space"] = space_to_json(*f.dom());
    j["target_space"] = space_to_json(*f.cod());
    j["f0"] = hommap_to_json(f.f0());
    Json f1;
    for (const auto& [c, blk] : f.f1_blocks())
        if (!blk.is_zero()) f1[f.bocs()->cbar()->at(c).label] = hommap_to_json(blk);
    j["f1"] = f1;
    return j;
}

Json twisted_to_json(const TwistedModule& mu, const std::string& bocs_name) {
    Json j;
    j["type"] = "twisted_module";
    j["bocs"] = bocs_name;
    j["space"] = space_to_json(*mu.m);
    Json u;
    u["f0"] = hommap_to_json(mu.u.f0());
    Json f1;
    for (const auto& [c, blk] : mu.u.f1_blocks())
        if (!blk.is_zero()) f1[mu.bocs->cbar()->at(c).label] = hommap_to_json(blk);
    u["f1"] = f1;
    j["u"] = u;
    return j;
}

void put_structure(Json& doc, const std::string& name, Json body) {
    doc["structures"][name] = std::move(body);
}

std::string dump_workspace(const Json& doc) { return doc.dump(1) + "\n"; }

} // namespace bocskit
