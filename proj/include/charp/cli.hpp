#pragma once
// Command drivers behind the `charp` binary. Header-only so the test
// suite can call run_command in-process and capture both streams.
//
// Exit codes: 0 OK, 2 precondition, 3 budget, 4 verify-fail, 5 parse,
// 1 internal (a bug on our side, never an input problem).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "charp/kill.hpp"

namespace charp {

namespace cli_detail {

inline const char* category_name(errc c) {
    switch (c) {
        case errc::parse: return "parse";
        case errc::precondition: return "precondition";
        case errc::budget: return "budget";
        case errc::verify_fail: return "verify-fail";
        case errc::internal: return "internal";
    }
    return "internal";
}

inline int category_exit(errc c) {
    switch (c) {
        case errc::parse: return 5;
        case errc::precondition: return 2;
        case errc::budget: return 3;
        case errc::verify_fail: return 4;
        case errc::internal: return 1;
    }
    return 1;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_parse("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail_internal("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) fail_internal("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        fail_internal("cannot move " + tmp + " into place");
}

inline std::pair<long, long> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos)
        fail_parse("bad degree range `" + s + "`; expected A..B");
    try {
        std::size_t used = 0;
        long lo = std::stol(s.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument(s);
        long hi = std::stol(s.substr(dots + 2), &used);
        if (used != s.size() - dots - 2) throw std::invalid_argument(s);
        if (lo > hi) fail_parse("empty degree range `" + s + "`");
        return {lo, hi};
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail_parse("bad degree range `" + s + "`; expected A..B");
    }
}

struct BudgetFlags {
    long pairCap = -1;
    int expCap = -1;
    int koszulCap = -1;
    int guardW = -1;
};

inline void add_budget_flags(CLI::App* cmd, BudgetFlags& f) {
    cmd->add_option("--pair-cap", f.pairCap, "s-pair budget for basis completion");
    cmd->add_option("--exp-cap", f.expCap, "denominator exponent budget");
    cmd->add_option("--koszul-cap", f.koszulCap, "stabilization levels tried");
    cmd->add_option("--guard", f.guardW, "zero-run width ending a degree scan");
}

inline Budgets make_budgets(const BudgetFlags& f) {
    Budgets b;
    if (const char* ms = std::getenv("CHARP_KILL_BUDGET_MS")) b = Budgets::with_deadline_ms(std::atol(ms));
    if (f.pairCap >= 0) b.pair_cap = f.pairCap;
    if (f.expCap >= 0) b.exp_cap = f.expCap;
    if (f.koszulCap >= 0) b.koszul_cap = f.koszulCap;
    if (f.guardW >= 0) b.guard = f.guardW;
    return b;
}

inline RingFile load_ring(const std::string& path) { return parse_ring(read_file(path)); }

inline json class_json(const Cochain& c, const std::vector<std::string>& vars, long degree) {
    json j = certio::cochain_to(detail::record_cochain(c, vars));
    j["degree"] = degree;
    return j;
}

inline ClassHandle class_from_text(const std::string& text, const RingPresentation& pres,
                                   std::size_t d) {
    try {
        json j = json::parse(text);
        certio::check_keys(j, {"degree", "level", "components"}, "class file");
        long degree = certio::need_integer(j, "degree");
        json sub = {{"level", j.at("level")}, {"components", j.at("components")}};
        CochainRecord rec = certio::cochain_from(sub, "class file");
        return {detail::cochain_from_record(rec, pres.vars, d, "class file"), degree, {}};
    } catch (const json::exception& e) {
        fail_parse(std::string("class file is not well-formed JSON: ") + e.what());
    } catch (const error& e) {
        if (e.category() == errc::verify_fail) fail_parse(e.what());
        throw;
    }
}

// first nonzero graded piece near degree zero, scanning up then down
inline ClassHandle auto_class(const CechComplex& C, int i) {
    const int G = std::max(1, C.ring().budgets().guard);
    for (int dir : {0, 1}) {
        int zeros = 0;
        for (long step = 0; step < 64; ++step) {
            long t = dir == 0 ? step : -1 - step;
            CohomologyPiece piece = lc_graded_piece(C, i, t);
            if (piece.dimension == 0) {
                if (++zeros >= G) break;
                continue;
            }
            return {piece.basis.front(), t, {}};
        }
    }
    fail_pre("no nonzero graded class found near degree zero; pass --class");
}

inline std::string tower_text(long p, const RingTower& T, const RingPresentation& base) {
    return serialize_ring(p, {T.all_vars(), T.combined().generators(), base.cech});
}

inline VerifyOutcome verify_any(const std::string& text, const RingPresentation& pres,
                                const Budgets& bud) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        return {false, std::string("malformed certificate: not JSON (") + e.what() + ")"};
    }
    std::string kind =
        j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "kill") return verify_certificate(j, pres, bud);
    if (kind == "trivialize") return verify_trivialization(j, pres, bud);
    if (kind != "kill-all") return {false, "malformed certificate: unknown kind"};

    try {
        certio::check_keys(j, {"format", "kind", "p", "ringHash", "degrees", "certificates"},
                           "bundle");
        if (certio::need_string(j, "format") != kCertFormat)
            fail_verify("certificate format is not recognized");
        long p = certio::need_integer(j, "p");
        if (p != static_cast<long>(FpContext::modulus()))
            fail_verify("certificate was issued at a different characteristic");
        if (certio::need_string(j, "ringHash") != ring_hash(p, pres))
            fail_verify("certificate belongs to a different ring");
        const json& degrees = certio::need_array(j, "degrees");
        const json& certs = certio::need_array(j, "certificates");
        if (degrees.size() != certs.size())
            fail_verify("malformed certificate: degree list does not match certificate list");
        for (std::size_t k = 0; k < certs.size(); ++k) {
            if (!degrees[k].is_number_integer() ||
                degrees[k].get<long>() != certio::need_integer(certs[k], "degree"))
                fail_verify("malformed certificate: degree list does not match certificate list");
            VerifyOutcome r = verify_certificate(certs[k], pres, bud);
            if (!r.ok) return {false, "certificate " + std::to_string(k) + ": " + r.detail};
        }
        return {};
    } catch (const error& e) {
        return {false, e.what()};
    }
}

} // namespace cli_detail

inline int run_command(std::vector<std::string> args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    using namespace cli_detail;

    CLI::App app{"graded local cohomology, Frobenius relations, and killing towers"};
    app.require_subcommand(1);

    std::string ringPath, degrees, classFile, outFile, paramList, witnessText, certPath;
    int level = 0;
    bool autoClass = false;
    BudgetFlags flags;

    auto* cHilbert = app.add_subcommand("hilbert", "graded dimensions of the presented ring");
    cHilbert->add_option("ring", ringPath)->required();
    cHilbert->add_option("--degrees", degrees, "range A..B")->required();

    auto* cLc = app.add_subcommand("lc", "graded local cohomology table with basis classes");
    cLc->add_option("ring", ringPath)->required();
    cLc->add_option("--i", level, "cohomological level")->required();
    cLc->add_option("--degrees", degrees, "range A..B")->required();
    add_budget_flags(cLc, flags);

    auto* cFrob = app.add_subcommand("frob", "Frobenius relation satisfied by a class");
    cFrob->add_option("ring", ringPath)->required();
    cFrob->add_option("--i", level, "cohomological level")->required();
    cFrob->add_option("--class", classFile, "class file (JSON: degree, level, components)");
    cFrob->add_flag("--auto", autoClass, "scan for the first nonzero class near degree 0");
    add_budget_flags(cFrob, flags);

    auto* cKill = app.add_subcommand("kill", "build a tower killing classes, emit a certificate");
    cKill->add_option("ring", ringPath)->required();
    cKill->add_option("--i", level, "cohomological level")->required();
    cKill->add_option("--class", classFile, "kill one class instead of the whole level");
    cKill->add_option("--out", outFile, "certificate file (default cert.kc)");
    add_budget_flags(cKill, flags);

    auto* cTriv = app.add_subcommand("trivialize", "transfer a multiplier relation to a tower");
    cTriv->add_option("ring", ringPath)->required();
    cTriv->add_option("--params", paramList, "comma list of parameter variables")->required();
    cTriv->add_option("--witness", witnessText, "witness polynomial")->required();
    cTriv->add_option("--out", outFile, "certificate file (default cert.tc)");
    add_budget_flags(cTriv, flags);

    auto* cVerify = app.add_subcommand("verify", "recheck a certificate against a ring");
    cVerify->add_option("cert", certPath)->required();
    cVerify->add_option("ring", ringPath)->required();
    add_budget_flags(cVerify, flags);

    std::vector<const char*> argv{"charp"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error (parse): " << e.what() << "\n";
        return 5;
    }

    try {
        if (cHilbert->parsed()) {
            RingFile rf = load_ring(ringPath);
            auto [lo, hi] = parse_range(degrees);
            IdealPresentation I(rf.pres.nvars(), rf.pres.ideal);
            for (long t = lo; t <= hi; ++t) out << t << " " << hilbert_function(I, t) << "\n";
        } else if (cLc->parsed()) {
            RingFile rf = load_ring(ringPath);
            auto [lo, hi] = parse_range(degrees);
            RingTower R(rf.pres, make_budgets(flags));
            CechComplex C(R);
            for (long t = lo; t <= hi; ++t) {
                CohomologyPiece piece = lc_graded_piece(C, level, t);
                out << t << " " << piece.dimension << "\n";
                for (const auto& b : piece.basis)
                    out << "  " << class_json(b, rf.pres.vars, t).dump() << "\n";
            }
        } else if (cFrob->parsed()) {
            RingFile rf = load_ring(ringPath);
            if (classFile.empty() && !autoClass) fail_parse("pass --class FILE or --auto");
            RingTower R(rf.pres, make_budgets(flags));
            CechComplex C(R);
            ClassHandle h = classFile.empty()
                                ? auto_class(C, level)
                                : class_from_text(read_file(classFile), rf.pres, C.d());
            if (h.cocycle.level != level) fail_pre("--i does not match the class level");
            FrobeniusRelation rel = find_relation(C, h);
            out << "degree = " << h.internalDegree << "\n";
            out << "s = " << rel.g.s << "\n";
            for (int j = 0; j < rel.g.s; ++j)
                out << "c" << j << " = " << poly_to_string(rel.g.lowerCoeffs[j], rf.pres.vars)
                    << "\n";
            out << "beta = "
                << certio::cochain_to(detail::record_cochain(rel.beta, rf.pres.vars)).dump()
                << "\n";
            out << "exponent = " << rel.exponent << "\n";
        } else if (cKill->parsed()) {
            RingFile rf = load_ring(ringPath);
            Budgets bud = make_budgets(flags);
            if (outFile.empty()) outFile = "cert.kc";
            if (!classFile.empty()) {
                RingTower R(rf.pres, bud);
                CechComplex C(R);
                ClassHandle h = class_from_text(read_file(classFile), rf.pres, C.d());
                if (h.cocycle.level != level) fail_pre("--i does not match the class level");
                KillResult kr = kill_class(C, h);
                atomic_write(outFile, certificate_text(to_json(kr.cert)));
                out << tower_text(rf.p, kr.tower, rf.pres);
            } else {
                KillAllResult ka = kill_all(rf.pres, level, bud);
                json bundle = {{"format", kCertFormat},
                               {"kind", "kill-all"},
                               {"p", rf.p},
                               {"ringHash", ring_hash(rf.p, rf.pres)},
                               {"degrees", ka.killedDegrees},
                               {"certificates", json::array()}};
                for (const auto& c : ka.certs) bundle["certificates"].push_back(to_json(c));
                atomic_write(outFile, certificate_text(bundle));
                out << tower_text(rf.p, ka.tower, rf.pres);
            }
            out << "wrote " << outFile << "\n";
        } else if (cTriv->parsed()) {
            RingFile rf = load_ring(ringPath);
            if (outFile.empty()) outFile = "cert.tc";
            Poly w = parse_poly(witnessText, rf.pres.vars);
            std::vector<std::string> params = detail::split_commas(paramList);
            TrivializeResult res = trivialize_relation(rf.pres, params, w, make_budgets(flags));
            atomic_write(outFile, certificate_text(to_json(res.cert)));
            out << tower_text(rf.p, res.tower, rf.pres);
            for (std::size_t j = 0; j < res.cofactors.size(); ++j)
                out << "cofactor " << params[j] << " = "
                    << poly_to_string(res.cofactors[j], res.tower.all_vars()) << "\n";
            out << "wrote " << outFile << "\n";
        } else if (cVerify->parsed()) {
            RingFile rf = load_ring(ringPath);
            VerifyOutcome rep = verify_any(read_file(certPath), rf.pres, make_budgets(flags));
            if (!rep.ok) {
                out << "FAIL: " << rep.detail << "\n";
                return 4;
            }
            out << "OK\n";
        }
        return 0;
    } catch (const error& e) {
        err << "error (" << category_name(e.category()) << "): " << e.what() << "\n";
        return category_exit(e.category());
    }
}

} // namespace charp
