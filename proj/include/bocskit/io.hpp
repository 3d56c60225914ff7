#pragma once

#include "bocskit/ainfmod.hpp"

#include <nlohmann/json.hpp>

namespace bocskit {

using Json = nlohmann::ordered_json;

/* Named morphism-like structures keep their endpoint names so that checks
 * and constructions can resolve them. */
struct NamedAlgMorphism {
    std::string src, tgt;
    AlgMorphism f;
};
struct NamedAlgHomotopy {
    std::string from, to; // names of alg morphisms
    AlgHomotopy h;
};
struct NamedModMorphism {
    std::string src, tgt;
    ModMorphism f;
};
struct NamedModHomotopy {
    std::string src, tgt, from, to;
    ModHomotopy h;
};
struct NamedTwisted {
    std::string bocs;
    TwistedModule mu;
};
struct NamedTwistedMorphism {
    std::string src, tgt; // twisted module names
    GModMorphism f;
};
struct NamedHomotopy1 {
    std::string src, tgt, from, to;
    GModMorphism h;
};
struct NamedBocsMorphism {
    std::string src, tgt;
    BocsMorphism psi;
};
struct NamedBocsHomotopy {
    std::string phi, psi; // bocs morphism names
    BocsHomotopy h;
};
struct NamedGModMorphism {
    std::string bocs;
    GModMorphism f;
};

/* Parsed document: one exact field, one base ring, structures by name. */
struct Workspace {
    Field field = Field::rationals();
    int base_n = 1;
    int level = 4;

    std::map<std::string, SpacePtr> spaces;
    std::map<std::string, AlgPtr> algebras;
    std::map<std::string, ModPtr> modules;
    std::map<std::string, BocsPtr> bocses;
    std::map<std::string, NamedAlgMorphism> alg_morphisms;
    std::map<std::string, NamedAlgHomotopy> alg_homotopies;
    std::map<std::string, NamedModMorphism> mod_morphisms;
    std::map<std::string, NamedModHomotopy> mod_homotopies;
    std::map<std::string, NamedTwisted> twisted;
    std::map<std::string, NamedTwistedMorphism> twisted_morphisms;
    std::map<std::string, NamedHomotopy1> homotopies1;
    std::map<std::string, NamedBocsMorphism> bocs_morphisms;
    std::map<std::string, NamedBocsHomotopy> bocs_homotopies;
    std::map<std::string, NamedGModMorphism> gmod_morphisms;

    Json doc; // original document, for pass-through output

    bool has(const std::string& name) const;
    std::string type_of(const std::string& name) const;
};

Workspace load_workspace(const Json& doc);
Workspace load_workspace_file(const std::string& path);

/* serialization of individual structures (deterministic field order) */
Json space_to_json(const GradedSpace& sp);
Json hommap_to_json(const HomMap& f);
Json algebra_to_json(const AInfAlgebra& a);
Json module_to_json(const AInfModule& m, const std::string& algebra_name);
Json bocs_to_json(const Bocs& b);
Json gmod_to_json(const GModMorphism& f, const std::string& bocs_name);
Json twisted_to_json(const TwistedModule& mu, const std::string& bocs_name);

/* append a structure to a document's "structures" object */
void put_structure(Json& doc, const std::string& name, Json body);

std::string dump_workspace(const Json& doc);

} // namespace bocskit
