#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "charp/cech.hpp"
#include "charp/polytext.hpp"

namespace charp {

using json = nlohmann::json;

// Serialized cochain: one entry per nonzero component, numerators as
// canonical polynomial strings over named variables.
struct CochainRecord {
    struct Comp {
        Subset subset;
        std::string numerator;
        std::vector<int> exponents;
    };
    int level = 0;
    std::vector<Comp> comps;
};

struct ZRecord {
    std::string var;
    Subset subset;
    std::string relation;
};

struct RhoRecord {
    std::string var;
    Subset subset;
    std::string relation;
    std::string identity;
};

struct ConstancyRecord {
    Subset subset;
    std::string relation;
};

// Everything needed to rebuild the killing extension and recheck each
// identity from scratch. No field is advisory: the verifier consumes
// all of them.
struct KillCertificate {
    long p = 0;
    std::string ringHash;
    std::string orderTag;
    std::string signTag;
    long degree = 0;
    CochainRecord cls;
    int s = 0;
    std::vector<std::string> lower;
    CochainRecord beta;
    std::vector<ZRecord> zStage;
    CochainRecord corrected;
    std::vector<RhoRecord> rhoStage;
    std::vector<ConstancyRecord> constancy;
    CochainRecord eta;
};

struct TrivializationCertificate {
    long p = 0;
    std::string ringHash;
    std::vector<std::string> parameters;
    std::string witness;
    std::vector<std::pair<std::string, std::string>> towerLevels; // (var, relation)
    std::vector<std::string> towerAux;
    std::vector<std::string> cofactors;
};

inline const char* kCertFormat = "charp-cert-1";
inline const char* kOrderTag = "grevlex";
inline const char* kSignTag = "alternating-drop";

namespace certio {

inline const json& need(const json& j, const char* key) {
    if (!j.is_object()) fail_verify("malformed certificate: expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail_verify(std::string("malformed certificate: missing key `") + key + "`");
    return *it;
}

inline std::string need_string(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_string()) fail_verify(std::string("malformed certificate: `") + key + "` is not a string");
    return v.get<std::string>();
}

inline long need_integer(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer()) fail_verify(std::string("malformed certificate: `") + key + "` is not an integer");
    return v.get<long>();
}

inline const json& need_array(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_array()) fail_verify(std::string("malformed certificate: `") + key + "` is not an array");
    return v;
}

inline void check_keys(const json& j, std::vector<std::string> allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            fail_verify("malformed certificate: unknown key `" + it.key() + "` in " + where);
    }
}

inline Subset subset_from(const json& v, const char* where) {
    if (!v.is_array()) fail_verify(std::string("malformed certificate: subset in ") + where + " is not an array");
    Subset out;
    for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<long>() < 0)
            fail_verify(std::string("malformed certificate: bad subset entry in ") + where);
        out.push_back(static_cast<std::size_t>(e.get<long>()));
    }
    return out;
}

inline json subset_to(const Subset& s) {
    json a = json::array();
    for (auto v : s) a.push_back(v);
    return a;
}

inline json cochain_to(const CochainRecord& c) {
    json comps = json::array();
    for (const auto& k : c.comps) {
        json e = json::array();
        for (int x : k.exponents) e.push_back(x);
        comps.push_back({{"subset", subset_to(k.subset)},
                         {"numerator", k.numerator},
                         {"exponents", e}});
    }
    return {{"level", c.level}, {"components", comps}};
}

inline CochainRecord cochain_from(const json& j, const char* where) {
    CochainRecord out;
    check_keys(j, {"level", "components"}, where);
    out.level = static_cast<int>(need_integer(j, "level"));
    for (const auto& comp : need_array(j, "components")) {
        check_keys(comp, {"subset", "numerator", "exponents"}, where);
        CochainRecord::Comp c;
        c.subset = subset_from(need(comp, "subset"), where);
        c.numerator = need_string(comp, "numerator");
        for (const auto& e : need_array(comp, "exponents")) {
            if (!e.is_number_integer() || e.get<long>() < 0)
                fail_verify(std::string("malformed certificate: bad exponent in ") + where);
            c.exponents.push_back(static_cast<int>(e.get<long>()));
        }
        out.comps.push_back(std::move(c));
    }
    return out;
}

} // namespace certio

inline json to_json(const KillCertificate& c) {
    json zs = json::array();
    for (const auto& z : c.zStage)
        zs.push_back({{"var", z.var}, {"subset", certio::subset_to(z.subset)}, {"relation", z.relation}});
    json rs = json::array();
    for (const auto& r : c.rhoStage)
        rs.push_back({{"var", r.var},
                      {"subset", certio::subset_to(r.subset)},
                      {"relation", r.relation},
                      {"identity", r.identity}});
    json cs = json::array();
    for (const auto& k : c.constancy)
        cs.push_back({{"subset", certio::subset_to(k.subset)}, {"relation", k.relation}});
    json lower = json::array();
    for (const auto& l : c.lower) lower.push_back(l);
    return {{"format", kCertFormat},
            {"kind", "kill"},
            {"p", c.p},
            {"ringHash", c.ringHash},
            {"convention", {{"order", c.orderTag}, {"sign", c.signTag}}},
            {"degree", c.degree},
            {"class", certio::cochain_to(c.cls)},
            {"relation", {{"s", c.s}, {"lower", lower}}},
            {"beta", certio::cochain_to(c.beta)},
            {"zStage", zs},
            {"corrected", certio::cochain_to(c.corrected)},
            {"rhoStage", rs},
            {"constancy", cs},
            {"eta", certio::cochain_to(c.eta)}};
}

inline KillCertificate kill_certificate_from_json(const json& j) {
    using namespace certio;
    KillCertificate out;
    check_keys(j, {"format", "kind", "p", "ringHash", "convention", "degree", "class",
                   "relation", "beta", "zStage", "corrected", "rhoStage", "constancy", "eta"},
               "certificate");
    if (need_string(j, "format") != kCertFormat)
        fail_verify("malformed certificate: unsupported format");
    if (need_string(j, "kind") != "kill")
        fail_verify("malformed certificate: kind is not `kill`");
    out.p = need_integer(j, "p");
    out.ringHash = need_string(j, "ringHash");
    const json& conv = need(j, "convention");
    check_keys(conv, {"order", "sign"}, "convention");
    out.orderTag = need_string(conv, "order");
    out.signTag = need_string(conv, "sign");
    out.degree = need_integer(j, "degree");
    out.cls = cochain_from(need(j, "class"), "class");
    const json& rel = need(j, "relation");
    check_keys(rel, {"s", "lower"}, "relation");
    out.s = static_cast<int>(need_integer(rel, "s"));
    for (const auto& l : need_array(rel, "lower")) {
        if (!l.is_string()) fail_verify("malformed certificate: relation coefficient is not a string");
        out.lower.push_back(l.get<std::string>());
    }
    out.beta = cochain_from(need(j, "beta"), "beta");
    for (const auto& z : need_array(j, "zStage")) {
        check_keys(z, {"var", "subset", "relation"}, "zStage");
        out.zStage.push_back({need_string(z, "var"), subset_from(need(z, "subset"), "zStage"),
                              need_string(z, "relation")});
    }
    out.corrected = cochain_from(need(j, "corrected"), "corrected");
    for (const auto& r : need_array(j, "rhoStage")) {
        check_keys(r, {"var", "subset", "relation", "identity"}, "rhoStage");
        out.rhoStage.push_back({need_string(r, "var"), subset_from(need(r, "subset"), "rhoStage"),
                                need_string(r, "relation"), need_string(r, "identity")});
    }
    for (const auto& k : need_array(j, "constancy")) {
        check_keys(k, {"subset", "relation"}, "constancy");
        out.constancy.push_back({subset_from(need(k, "subset"), "constancy"),
                                 need_string(k, "relation")});
    }
    out.eta = cochain_from(need(j, "eta"), "eta");
    return out;
}

inline json to_json(const TrivializationCertificate& c) {
    json params = json::array();
    for (const auto& s : c.parameters) params.push_back(s);
    json levels = json::array();
    for (const auto& [var, rel] : c.towerLevels)
        levels.push_back({{"var", var}, {"relation", rel}});
    json aux = json::array();
    for (const auto& a : c.towerAux) aux.push_back(a);
    json cof = json::array();
    for (const auto& s : c.cofactors) cof.push_back(s);
    return {{"format", kCertFormat},
            {"kind", "trivialize"},
            {"p", c.p},
            {"ringHash", c.ringHash},
            {"parameters", params},
            {"witness", c.witness},
            {"tower", {{"levels", levels}, {"aux", aux}}},
            {"cofactors", cof}};
}

inline TrivializationCertificate trivialization_from_json(const json& j) {
    using namespace certio;
    TrivializationCertificate out;
    check_keys(j, {"format", "kind", "p", "ringHash", "parameters", "witness", "tower", "cofactors"},
               "certificate");
    if (need_string(j, "format") != kCertFormat)
        fail_verify("malformed certificate: unsupported format");
    if (need_string(j, "kind") != "trivialize")
        fail_verify("malformed certificate: kind is not `trivialize`");
    out.p = need_integer(j, "p");
    out.ringHash = need_string(j, "ringHash");
    for (const auto& s : need_array(j, "parameters")) {
        if (!s.is_string()) fail_verify("malformed certificate: parameter is not a string");
        out.parameters.push_back(s.get<std::string>());
    }
    out.witness = need_string(j, "witness");
    const json& tower = need(j, "tower");
    check_keys(tower, {"levels", "aux"}, "tower");
    for (const auto& l : need_array(tower, "levels")) {
        check_keys(l, {"var", "relation"}, "tower levels");
        out.towerLevels.push_back({need_string(l, "var"), need_string(l, "relation")});
    }
    for (const auto& a : need_array(tower, "aux")) {
        if (!a.is_string()) fail_verify("malformed certificate: aux relation is not a string");
        out.towerAux.push_back(a.get<std::string>());
    }
    for (const auto& s : need_array(j, "cofactors")) {
        if (!s.is_string()) fail_verify("malformed certificate: cofactor is not a string");
        out.cofactors.push_back(s.get<std::string>());
    }
    return out;
}

// Stable on-disk form: keys sorted, two-space indent, trailing newline.
inline std::string certificate_text(const json& j) { return j.dump(2) + "\n"; }

} // namespace charp
