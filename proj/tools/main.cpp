// bocskit: exact checks and constructions for A-infinity algebras, dg bocses
// and twisted modules. Exit codes: 0 pass, 1 identity failure, 2 error.

#include "bocskit/io.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

using namespace bocskit;

namespace {

struct Report {
    bool json = false;
    Json lines = Json::array();
    bool all_ok = true;

    void add(const std::string& what, bool ok, const std::string& witness = "") {
        all_ok = all_ok && ok;
        if (json) {
            Json l;
            l["check"] = what;
            l["ok"] = ok;
            if (!ok) l["witness"] = witness;
            lines.push_back(l);
        } else {
            std::cout << "  " << what << ": " << (ok ? "pass" : "FAIL");
            if (!ok && !witness.empty()) std::cout << "  [" << witness << "]";
            std::cout << "\n";
        }
    }
    int finish(const std::string& command) {
        if (json) {
            Json out;
            out["command"] = command;
            out["results"] = lines;
            out["ok"] = all_ok;
            std::cout << out.dump(1) << "\n";
        } else {
            std::cout << "result: " << (all_ok ? "pass" : "fail") << "\n";
        }
        return all_ok ? 0 : 1;
    }
};

/* layer-wise Maurer-Cartan report */
void report_mc(Report& rep, const TwistedModule& mu) {
    GModMorphism d = hat_delta(mu.u) + compose(mu.u, mu.u);
    bool ok0 = d.f0().is_zero();
    rep.add("mc layer 0 (u0 squared)", ok0, ok0 ? "" : d.f0().describe_entry());
    for (int lvl = 1; lvl <= mu.bocs->levels(); ++lvl) {
        bool ok = true;
        std::string wit;
        for (const auto& [c, blk] : d.f1_blocks()) {
            if (mu.bocs->layer(c) != lvl || blk.is_zero()) continue;
            ok = false;
            wit = "f1(" + mu.bocs->cbar()->at(c).label + "): " + blk.describe_entry();
            break;
        }
        rep.add("mc layer " + std::to_string(lvl), ok, wit);
    }
}

int cmd_check(const Workspace& w, const std::string& target, const std::string& what,
              bool as_json) {
    Report rep;
    rep.json = as_json;
    if (!as_json) std::cout << "check " << what << " " << target << "\n";
    if (what == "stasheff") {
        auto it = w.algebras.find(target);
        if (it == w.algebras.end()) throw BocsError(Err::UnknownTarget, target);
        for (int n = 1; n <= 2 * it->second->arity_bound(); ++n) {
            auto r = check_stasheff(*it->second, n);
            rep.add("S_" + std::to_string(n), r.ok, r.witness);
        }
    } else if (what == "bocs") {
        auto it = w.bocses.find(target);
        if (it == w.bocses.end()) throw BocsError(Err::UnknownTarget, target);
        auto r = check_bocs_axioms(*it->second);
        rep.add("coalgebra axioms", r.ok, r.witness);
    } else if (what == "mc") {
        auto it = w.twisted.find(target);
        if (it == w.twisted.end()) throw BocsError(Err::UnknownTarget, target);
        report_mc(rep, it->second.mu);
    } else if (what == "module") {
        auto it = w.modules.find(target);
        if (it == w.modules.end()) throw BocsError(Err::UnknownTarget, target);
        int bound = std::max(it->second->arity_bound(),
                             it->second->alg()->arity_bound());
        for (int n = 1; n <= 2 * bound; ++n) {
            auto r = check_module(*it->second, n);
            rep.add("n=" + std::to_string(n), r.ok, r.witness);
        }
    } else if (what == "morphism") {
        if (auto it = w.alg_morphisms.find(target); it != w.alg_morphisms.end()) {
            const auto& f = it->second.f;
            int bound = std::max(f.src->arity_bound(), f.tgt->arity_bound());
            for (int n = 1; n <= 2 * bound; ++n) {
                auto r = check_alg_morphism(f, n);
                rep.add("n=" + std::to_string(n), r.ok, r.witness);
            }
        } else if (auto mt = w.mod_morphisms.find(target); mt != w.mod_morphisms.end()) {
            const auto& f = mt->second.f;
            int bound = std::max({f.src->arity_bound(), f.tgt->arity_bound(),
                                  f.src->alg()->arity_bound()});
            for (int n = 1; n <= 2 * bound; ++n) {
                auto r = check_mod_morphism(f, n);
                rep.add("n=" + std::to_string(n), r.ok, r.witness);
            }
        } else if (auto tt = w.twisted_morphisms.find(target);
                   tt != w.twisted_morphisms.end()) {
            const auto& src = w.twisted.at(tt->second.src).mu;
            const auto& tgt = w.twisted.at(tt->second.tgt).mu;
            auto r = check_twisted_morphism(tt->second.f, src, tgt);
            rep.add("twisted condition", r.ok, r.witness);
        } else if (auto bt = w.bocs_morphisms.find(target);
                   bt != w.bocs_morphisms.end()) {
            auto r = check_bocs_morphism(bt->second.psi);
            rep.add("bocs morphism condition", r.ok, r.witness);
        } else {
            throw BocsError(Err::UnknownTarget, target);
        }
    } else if (what == "homotopy") {
        if (auto it = w.alg_homotopies.find(target); it != w.alg_homotopies.end()) {
            const auto& f = w.alg_morphisms.at(it->second.from).f;
            const auto& g = w.alg_morphisms.at(it->second.to).f;
            int bound = std::max(f.src->arity_bound(), f.tgt->arity_bound());
            for (int n = 1; n <= 2 * bound; ++n) {
                auto r = check_alg_homotopy(it->second.h, f, g, n);
                rep.add("n=" + std::to_string(n), r.ok, r.witness);
            }
        } else if (auto mt = w.mod_homotopies.find(target);
                   mt != w.mod_homotopies.end()) {
            const auto& f = w.mod_morphisms.at(mt->second.from).f;
            const auto& g = w.mod_morphisms.at(mt->second.to).f;
            int bound = std::max({f.src->arity_bound(), f.tgt->arity_bound(),
                                  f.src->alg()->arity_bound()});
            for (int n = 1; n <= 2 * bound; ++n) {
                auto r = check_mod_homotopy(mt->second.h, f, g, n);
                rep.add("n=" + std::to_string(n), r.ok, r.witness);
            }
        } else if (auto ht = w.homotopies1.find(target); ht != w.homotopies1.end()) {
            const auto& src = w.twisted.at(ht->second.src).mu;
            const auto& tgt = w.twisted.at(ht->second.tgt).mu;
            // endpoints may be named twisted morphisms or the symbolic
            // "identity" / "zero" (the contraction convention)
            auto resolve = [&](const std::string& n) {
                if (n.empty() || n == "zero")
                    return GModMorphism(src.bocs, src.m, tgt.m, 0);
                if (n == "identity") {
                    if (!src.m->same_as(*tgt.m))
                        throw BocsError(Err::ParseError,
                                        "identity endpoint needs equal modules");
                    return gmod_identity(src.bocs, src.m);
                }
                return w.twisted_morphisms.at(n).f;
            };
            auto r = check_homotopy(ht->second.h, resolve(ht->second.from),
                                    resolve(ht->second.to), src, tgt);
            rep.add("homotopy condition", r.ok, r.witness);
        } else if (auto bt = w.bocs_homotopies.find(target);
                   bt != w.bocs_homotopies.end()) {
            auto r = check_bocs_homotopy(bt->second.h);
            rep.add("bocs homotopy condition", r.ok, r.witness);
        } else {
            throw BocsError(Err::UnknownTarget, target);
        }
    } else {
        throw BocsError(Err::ParseError, "unknown check kind '" + what + "'");
    }
    return rep.finish("check " + what + " " + target);
}

std::string fresh_name(const Workspace& w, const Json& doc, std::string base) {
    auto taken = [&](const std::string& n) {
        return w.has(n) || (doc.contains("structures") && doc["structures"].contains(n));
    };
    if (!taken(base)) return base;
    for (int i = 2;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (!taken(cand)) return cand;
    }
}

int cmd_construct(Workspace& w, const std::string& op, const std::string& target,
                  const std::string& via, const std::string& outname, int level,
                  const std::string& output) {
    Json doc = w.doc;
    auto name_for = [&](const std::string& suffix) {
        return fresh_name(w, doc, outname.empty() ? target + "_" + suffix : outname);
    };
    // multi-output constructions always carry the part suffix
    auto part_name = [&](const std::string& suffix) {
        return fresh_name(w, doc, (outname.empty() ? target : outname) + "_" + suffix);
    };
    if (op == "bar") {
        auto it = w.algebras.find(target);
        if (it == w.algebras.end()) throw BocsError(Err::UnknownTarget, target);
        auto b = bar_construct(it->second, level > 0 ? level : w.level);
        if (auto r = check_bocs_axioms(*b); !r)
            throw BocsError(Err::StasheffViolation, r.witness);
        Json body;
        body["type"] = "bar_bocs";
        body["algebra"] = target;
        body["level"] = b->levels();
        put_structure(doc, name_for("bar"), body);
    } else if (op == "invert") {
        auto it = w.twisted_morphisms.find(target);
        if (it == w.twisted_morphisms.end()) throw BocsError(Err::UnknownTarget, target);
        const auto& src = w.twisted.at(it->second.src).mu;
        const auto& tgt = w.twisted.at(it->second.tgt).mu;
        GModMorphism inv = invert(it->second.f);
        if (auto r = check_twisted_morphism(inv, tgt, src); !r)
            throw BocsError(Err::NotInvertible, "inverse fails re-check: " + r.witness);
        Json body = gmod_to_json(inv, w.twisted.at(it->second.src).bocs);
        body["type"] = "twisted_morphism";
        body["source"] = it->second.tgt;
        body["target"] = it->second.src;
        body["morphism"] = Json{{"f0", body["f0"]}, {"f1", body["f1"]}};
        body.erase("f0");
        body.erase("f1");
        body.erase("source_space");
        body.erase("target_space");
        put_structure(doc, name_for("inv"), body);
    } else if (op == "split-idem") {
        auto it = w.twisted_morphisms.find(target);
        if (it == w.twisted_morphisms.end()) throw BocsError(Err::UnknownTarget, target);
        const auto& mu = w.twisted.at(it->second.src).mu;
        auto sd = split_idempotent(it->second.f, mu);
        const std::string& bn = w.twisted.at(it->second.src).bocs;
        put_structure(doc, part_name("part1"), twisted_to_json(sd.part1, bn));
        put_structure(doc, part_name("part2"), twisted_to_json(sd.part2, bn));
    } else if (op == "nullhomotopy") {
        auto it = w.twisted.find(target);
        if (it == w.twisted.end()) throw BocsError(Err::UnknownTarget, target);
        GModMorphism h = nullhomotopy(it->second.mu);
        GModMorphism idm = gmod_identity(it->second.mu.bocs, it->second.mu.m);
        if (auto r = check_homotopy(h, idm, idm - idm, it->second.mu, it->second.mu); !r)
            throw BocsError(Err::ChainMapDefect, r.witness);
        Json body = gmod_to_json(h, it->second.bocs);
        body["type"] = "homotopy1";
        body["source"] = target;
        body["target"] = target;
        body["from"] = "identity";
        body["to"] = "zero";
        body["degree"] = -1;
        body["morphism"] = Json{{"f0", body["f0"]}, {"f1", body["f1"]}};
        body.erase("f0");
        body.erase("f1");
        body.erase("source_space");
        body.erase("target_space");
        put_structure(doc, name_for("contraction"), body);
    } else if (op == "cone") {
        auto it = w.twisted_morphisms.find(target);
        if (it == w.twisted_morphisms.end()) throw BocsError(Err::UnknownTarget, target);
        const auto& src = w.twisted.at(it->second.src).mu;
        const auto& tgt = w.twisted.at(it->second.tgt).mu;
        ConeData cd = cone(it->second.f, src, tgt);
        put_structure(doc, name_for("cone"),
                      twisted_to_json(cd.cone, w.twisted.at(it->second.src).bocs));
    } else if (op == "homotopy-inverse") {
        auto it = w.twisted_morphisms.find(target);
        if (it == w.twisted_morphisms.end()) throw BocsError(Err::UnknownTarget, target);
        const auto& src = w.twisted.at(it->second.src).mu;
        const auto& tgt = w.twisted.at(it->second.tgt).mu;
        HomotopyInverse hi = homotopy_inverse(it->second.f, src, tgt);
        Json body = gmod_to_json(hi.g, w.twisted.at(it->second.src).bocs);
        body["type"] = "twisted_morphism";
        body["source"] = it->second.tgt;
        body["target"] = it->second.src;
        body["morphism"] = Json{{"f0", body["f0"]}, {"f1", body["f1"]}};
        body.erase("f0");
        body.erase("f1");
        body.erase("source_space");
        body.erase("target_space");
        put_structure(doc, name_for("hinv"), body);
    } else if (op == "shift") {
        if (auto it = w.twisted.find(target); it != w.twisted.end()) {
            auto sd = shift_twisted(it->second.mu);
            if (auto r = check_mc(sd.shifted); !r)
                throw BocsError(Err::ChainMapDefect, r.witness);
            put_structure(doc, name_for("shift"),
                          twisted_to_json(sd.shifted, it->second.bocs));
        } else if (auto mt = w.modules.find(target); mt != w.modules.end()) {
            auto sd = shift_mod(mt->second);
            if (auto r = check_module_all(*sd.shifted); !r)
                throw BocsError(Err::ChainMapDefect, r.witness);
            Json body = module_to_json(*sd.shifted, doc["structures"][target]["algebra"]);
            put_structure(doc, name_for("shift"), body);
        } else {
            throw BocsError(Err::UnknownTarget, target);
        }
    } else if (op == "jfun") {
        if (auto it = w.twisted.find(target); it != w.twisted.end()) {
            JData jd = jfun(it->second.mu);
            put_structure(doc, name_for("J"), twisted_to_json(jd.j, it->second.bocs));
        } else if (auto mt = w.modules.find(target); mt != w.modules.end()) {
            ModJ jd = jfun_mod(mt->second);
            if (auto r = check_module_all(*jd.j); !r)
                throw BocsError(Err::ChainMapDefect, r.witness);
            put_structure(doc, name_for("J"),
                          module_to_json(*jd.j, doc["structures"][target]["algebra"]));
        } else {
            throw BocsError(Err::UnknownTarget, target);
        }
    } else if (op == "transport") {
        auto it = w.twisted.find(target);
        if (it == w.twisted.end()) throw BocsError(Err::UnknownTarget, target);
        auto ht = w.gmod_morphisms.find(via);
        if (ht == w.gmod_morphisms.end())
            throw BocsError(Err::UnknownTarget, "transport needs --via morphism");
        TwistedModule moved = transport(ht->second.f, it->second.mu);
        put_structure(doc, name_for("transport"),
                      twisted_to_json(moved, it->second.bocs));
    } else if (op == "restrict") {
        auto psi = w.bocs_morphisms.find(via);
        if (psi == w.bocs_morphisms.end())
            throw BocsError(Err::UnknownTarget, "restrict needs --via bocs morphism");
        if (auto it = w.twisted.find(target); it != w.twisted.end()) {
            TwistedModule r = restrict_twisted(psi->second.psi, it->second.mu);
            put_structure(doc, name_for("restrict"),
                          twisted_to_json(r, psi->second.src));
        } else if (auto tm = w.twisted_morphisms.find(target);
                   tm != w.twisted_morphisms.end()) {
            GModMorphism r = restrict_along(psi->second.psi, tm->second.f);
            // re-verify against the restricted endpoints before writing
            TwistedModule rs =
                restrict_twisted(psi->second.psi, w.twisted.at(tm->second.src).mu);
            TwistedModule rt =
                restrict_twisted(psi->second.psi, w.twisted.at(tm->second.tgt).mu);
            if (auto c = check_twisted_morphism(r, rs, rt); !c)
                throw BocsError(Err::ChainMapDefect, c.witness);
            put_structure(doc, part_name("src"), twisted_to_json(rs, psi->second.src));
            put_structure(doc, part_name("tgt"), twisted_to_json(rt, psi->second.src));
            Json body = gmod_to_json(r, psi->second.src);
            put_structure(doc, name_for("restrict"), body);
        } else {
            throw BocsError(Err::UnknownTarget, target);
        }
    } else {
        throw BocsError(Err::ParseError, "unknown construct op '" + op + "'");
    }

    std::string text = dump_workspace(doc);
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) throw BocsError(Err::ParseError, "cannot write " + output);
        out << text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations with A-infinity algebras, dg bocses and "
                 "twisted modules"};
    app.require_subcommand(1);

    std::string input, output, target, what, op, via, report = "text", name, field;
    int level = 0;

    auto* check = app.add_subcommand("check", "verify identities of a structure");
    check->add_option("--input", input, "workspace file")->required();
    check->add_option("--target", target, "structure name")->required();
    check->add_option("--what", what,
                      "stasheff|bocs|mc|morphism|homotopy|module")
        ->required();
    check->add_option("--field", field, "expected field (q or fp:P)");
    check->add_option("--report", report, "text|json");

    auto* construct = app.add_subcommand("construct", "run a constructive procedure");
    construct->add_option("--input", input, "workspace file")->required();
    construct->add_option("--op", op,
                          "bar|invert|split-idem|nullhomotopy|cone|homotopy-inverse|"
                          "shift|jfun|restrict|transport")
        ->required();
    construct->add_option("--target", target, "structure name")->required();
    construct->add_option("--via", via, "auxiliary morphism/homotopy name");
    construct->add_option("--name", name, "name for the constructed structure");
    construct->add_option("--level", level, "truncation level override");
    construct->add_option("--field", field, "expected field (q or fp:P)");
    construct->add_option("--output", output, "output file ('-' for stdout)");
    construct->add_option("--report", report, "text|json");

    CLI11_PARSE(app, argc, argv);

    try {
        Workspace w = load_workspace_file(input);
        if (!field.empty() && w.field.str() != field)
            throw BocsError(Err::FieldMismatch,
                            "workspace is over " + w.field.str() + ", not " + field);
        if (check->parsed()) return cmd_check(w, target, what, report == "json");
        return cmd_construct(w, op, target, via, name, level, output);
    } catch (const BocsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        bool identity_failure = e.kind() == Err::StasheffViolation;
        return identity_failure ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
