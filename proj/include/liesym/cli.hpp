#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liesym/corpus.hpp"

namespace liesym::cli {

namespace detail {

inline std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

/// "name(arg1,arg2)" -> declaration of an unknown function.
inline std::pair<std::string, std::vector<std::string>> parse_unknown_decl(
    const std::string& text) {
    std::size_t open = text.find('(');
    std::size_t close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw EngineError("unknown-function declaration must look like name(x,y)");
    std::string name = text.substr(0, open);
    std::vector<std::string> args = split_list(text.substr(open + 1, close - open - 1));
    if (name.empty() || args.empty())
        throw EngineError("unknown-function declaration must look like name(x,y)");
    return {name, args};
}

inline ContextPtr make_context(const std::vector<std::string>& vars, const std::string& dep,
                               const std::vector<std::string>& params,
                               const std::vector<std::string>& unknown_decls) {
    std::vector<std::pair<std::string, std::vector<std::string>>> fns;
    for (const auto& d : unknown_decls) fns.push_back(parse_unknown_decl(d));
    return std::make_shared<Context>(Context::make(vars, dep, params, fns));
}

struct LoadedPDE {
    ContextPtr ctx;
    SemilinearPDE pde;
};

/// PDE document: `vars:`, `dep:`, `params:`, `unknowns:` (semicolon-separated
/// declarations) and `eq:` lines; '#' starts a comment.
inline LoadedPDE load_pde_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EngineError("cannot open PDE file '" + path + "'");
    std::vector<std::string> vars, params, unknowns;
    std::string dep = "u", eq;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        std::string value = line.substr(colon + 1);
        if (key == "vars")
            vars = split_list(value);
        else if (key == "dep") {
            dep = value;
            dep.erase(std::remove_if(dep.begin(), dep.end(), ::isspace), dep.end());
        } else if (key == "params")
            params = split_list(value);
        else if (key == "unknowns") {
            std::stringstream ss(value);
            std::string piece;
            while (std::getline(ss, piece, ';')) {
                piece.erase(std::remove_if(piece.begin(), piece.end(), ::isspace),
                            piece.end());
                if (!piece.empty()) unknowns.push_back(piece);
            }
        } else if (key == "eq")
            eq = value;
    }
    if (vars.empty()) throw EngineError("PDE file is missing a vars: line");
    if (eq.empty()) throw EngineError("PDE file is missing an eq: line");
    ContextPtr ctx = make_context(vars, dep, params, unknowns);
    return {ctx, solve_principal(parse_expr(eq, *ctx), ctx)};
}

/// `builtin:<id>` resolves to the arbitrary-f corpus equation for the
/// family; `builtin:<id>:<f_case>` picks a specific case.
inline LoadedPDE load_pde(const std::string& spec) {
    if (spec.rfind("builtin:", 0) != 0) return load_pde_file(spec);
    std::string rest = spec.substr(8);
    std::string id = rest, f_case = "arbitrary";
    std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
        id = rest.substr(0, colon);
        f_case = rest.substr(colon + 1);
    }
    for (const auto& e : load_corpus()) {
        if (e.id != id || e.f_case != f_case) continue;
        return {e.base_context(), e.build()};
    }
    throw EngineError("no builtin equation '" + id + "' with case '" + f_case + "'");
}

inline nlohmann::ordered_json certificate_json(const Certificate& c) {
    nlohmann::ordered_json j;
    j["claim"] = c.claim_text();
    j["unknowns"] = nlohmann::ordered_json::array();
    for (const auto& a : c.unknown_atoms) j["unknowns"].push_back(atom_to_string(a, *c.ctx));
    j["witness"] = nlohmann::ordered_json::array();
    for (const auto& w : c.witness)
        j["witness"].push_back({{"monomial", w.source.to_string(*c.ctx)},
                                {"equation", w.eq.to_string(*c.ctx)}});
    j["trace"] = nlohmann::ordered_json::array();
    for (const auto& [r, col] : c.trace) j["trace"].push_back({r, col});
    j["rank"] = c.rank;
    return j;
}

}  // namespace detail

/// Entry point shared by the binary and the in-process tests. Exit codes:
/// 0 success / symmetry / corpus pass, 1 verification or corpus mismatch,
/// 2 usage or input errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact Lie point symmetry engine for semilinear PDEs"};
    app.require_subcommand(1);

    // shared context flags
    std::vector<std::string> vars, params, unknowns;
    std::string dep = "u";
    auto add_ctx_flags = [&](CLI::App* cmd, bool vars_required) {
        auto* v = cmd->add_option("--vars", vars, "independent variables, comma separated");
        if (vars_required) v->required();
        cmd->add_option("--dep", dep, "dependent variable (default u)");
        cmd->add_option("--params", params, "parameters, comma separated");
        cmd->add_option("--unknown", unknowns,
                        "declare an unknown function, e.g. f(u); repeatable");
    };
    auto flag_context = [&]() {
        std::vector<std::string> vs;
        for (const auto& v : vars)
            for (const auto& piece : detail::split_list(v)) vs.push_back(piece);
        std::vector<std::string> ps;
        for (const auto& p : params)
            for (const auto& piece : detail::split_list(p)) ps.push_back(piece);
        return detail::make_context(vs, dep, ps, unknowns);
    };

    // parse
    std::string expr_text;
    auto* cmd_parse = app.add_subcommand("parse", "echo the canonical form of an expression");
    add_ctx_flags(cmd_parse, true);
    cmd_parse->add_option("expr", expr_text, "expression text")->required();

    // prolong
    int order = 1;
    std::string field_text;
    auto* cmd_prolong =
        app.add_subcommand("prolong", "print the prolongation coefficient table");
    add_ctx_flags(cmd_prolong, true);
    cmd_prolong->add_option("--order", order, "prolongation order")->required();
    cmd_prolong->add_option("--field", field_text, "vector field \"xi1; ...; eta\"")
        ->required();

    // determine
    std::string pde_spec, ansatz = "full", det_format = "text";
    auto* cmd_det = app.add_subcommand("determine", "print the determining system");
    cmd_det->add_option("--pde", pde_spec, "PDE file or builtin:<id>[:<f_case>]")->required();
    cmd_det->add_option("--ansatz", ansatz, "full | reduced")
        ->check(CLI::IsMember({"full", "reduced"}));
    cmd_det->add_option("--format", det_format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    // analyze
    std::string emit_cert;
    auto* cmd_an = app.add_subcommand(
        "analyze", "predict and certify the structure of the symmetry coefficients");
    cmd_an->add_option("--pde", pde_spec, "PDE file or builtin:<id>[:<f_case>]")->required();
    cmd_an->add_option("--emit-certificate", emit_cert,
                       "write witness equations and traces to this file ('-' = stdout)");

    // verify
    std::string generator_text;
    std::vector<std::string> conditions;
    auto* cmd_ver = app.add_subcommand("verify", "decide whether a generator is a symmetry");
    cmd_ver->add_option("--pde", pde_spec, "PDE file or builtin:<id>[:<f_case>]")->required();
    cmd_ver->add_option("--generator", generator_text, "components \"xi1; ...; eta\"")
        ->required();
    cmd_ver->add_option("--condition", conditions,
                        "side condition \"lhs-><rhs>\"; repeatable");
    cmd_ver->add_option("--unknown", unknowns,
                        "declare an unknown function used by the generator; repeatable");

    // corpus run
    auto* cmd_corpus = app.add_subcommand("corpus", "built-in classification catalog");
    std::string filter, format = "text";
    bool parallel = false;
    auto* cmd_run = cmd_corpus->add_subcommand("run", "run the full regression");
    cmd_run->add_option("--filter", filter, "substring filter on entry id / f-case");
    cmd_run->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_run->add_flag("--parallel", parallel, "verify entries concurrently");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_parse->parsed()) {
            ContextPtr ctx = flag_context();
            out << parse_expr(expr_text, *ctx).to_string(*ctx) << "\n";
            return 0;
        }
        if (cmd_prolong->parsed()) {
            ContextPtr ctx = flag_context();
            VectorField field = VectorField::parse(field_text, ctx);
            ProlongedField p = prolong(field, order);
            for (const auto& [idx, coeff] : p.coeffs) {
                std::string name = "eta[";
                for (std::size_t i = 0; i < idx.axes().size(); ++i)
                    name += (i ? "," : "") +
                            ctx->indep_vars()[static_cast<std::size_t>(idx.axes()[i])];
                out << name << "] = " << coeff.to_string(*ctx) << "\n";
            }
            return 0;
        }
        if (cmd_det->parsed()) {
            detail::LoadedPDE l = detail::load_pde(pde_spec);
            DeterminingSystem sys = determining_system(
                l.pde, ansatz == "full" ? Ansatz::Full : Ansatz::ThmReduced);
            if (det_format == "json") {
                nlohmann::ordered_json doc;
                doc["pde"] = l.pde.full.to_string(*l.ctx);
                doc["ansatz"] = ansatz;
                doc["unknowns"] = sys.unknowns;
                doc["equations"] = nlohmann::ordered_json::array();
                for (const auto& d : sys.equations)
                    doc["equations"].push_back({{"monomial", d.source.to_string(*sys.ctx)},
                                                {"equation", d.eq.to_string(*sys.ctx)}});
                out << doc.dump(2) << "\n";
            } else {
                out << sys.to_string();
            }
            return 0;
        }
        if (cmd_an->parsed()) {
            detail::LoadedPDE l = detail::load_pde(pde_spec);
            StructurePrediction pred = predict_structure(l.pde);
            out << "semilinear: yes (order " << pred.order << ")\n";
            out << "xi components independent of u: " << (pred.xi_independent_of_u ? "yes" : "no")
                << "\n";
            out << "f linear in order-" << pred.order - 1
                << " derivatives: " << (pred.f_subprincipal_linear ? "yes" : "no") << "\n";
            out << "eta affine in u: " << (pred.eta_affine_in_u ? "yes" : "no") << "\n";
            nlohmann::ordered_json certs = nlohmann::ordered_json::array();
            int bad = 0;
            {
                Certificate c = certify_xi_u(l.pde);
                bool ok = replay_certificate(c);
                out << "certificate xi_u = 0: " << (ok ? "ok" : "REPLAY FAILED") << " (rank "
                    << c.rank << ", " << c.witness.size() << " witness equations)\n";
                if (!ok) ++bad;
                certs.push_back(detail::certificate_json(c));
            }
            if (pred.eta_affine_in_u) {
                Certificate c = certify_eta_uu(l.pde);
                bool ok = replay_certificate(c);
                out << "certificate eta_uu = 0: " << (ok ? "ok" : "REPLAY FAILED")
                    << " (rank " << c.rank << ", " << c.witness.size()
                    << " witness equations)\n";
                if (!ok) ++bad;
                certs.push_back(detail::certificate_json(c));
            }
            if (!emit_cert.empty()) {
                nlohmann::ordered_json doc;
                doc["pde"] = l.pde.full.to_string(*l.ctx);
                doc["certificates"] = certs;
                if (emit_cert == "-") {
                    out << doc.dump(2) << "\n";
                } else {
                    std::ofstream f(emit_cert);
                    if (!f) throw EngineError("cannot write '" + emit_cert + "'");
                    f << doc.dump(2) << "\n";
                }
            }
            return bad == 0 ? 0 : 1;
        }
        if (cmd_ver->parsed()) {
            detail::LoadedPDE l = detail::load_pde(pde_spec);
            auto ctx = std::make_shared<Context>(*l.ctx);
            for (const auto& d : unknowns) {
                auto [name, fargs] = detail::parse_unknown_decl(d);
                ctx->add_unknown(name, fargs);
            }
            SemilinearPDE pde = solve_principal(l.pde.full, ctx);
            VectorField field = VectorField::parse(generator_text, ctx);
            std::vector<SideCondition> conds;
            for (const auto& c : conditions) conds.push_back(SideCondition::parse(c, *ctx));
            VerificationReport rep = is_symmetry(field, pde, conds);
            if (rep.symmetry) {
                out << "symmetry\n";
                return 0;
            }
            out << "not-symmetry\nresidual: " << rep.residual.to_string(*ctx) << "\n";
            return 1;
        }
        if (cmd_run->parsed()) {
            RunReport report = run_corpus(filter, parallel);
            if (format == "json")
                out << report.to_json().dump(2) << "\n";
            else
                out << report.to_text();
            return report.pass ? 0 : 1;
        }
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

inline int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    return run(std::move(args), out, err);
}

}  // namespace liesym::cli
