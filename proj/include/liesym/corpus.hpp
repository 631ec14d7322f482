#pragma once

#include <chrono>
#include <future>
#include <string>
#include <vector>

#include <json.hpp>

#include "liesym/verify.hpp"

namespace liesym {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class Expected { ConfirmsPaper, ContradictsPaper };

inline const char* to_cstr(Expected e) {
    return e == Expected::ConfirmsPaper ? "confirms-paper" : "contradicts-paper";
}

/// One candidate generator of a corpus equation: components in the
/// vector-field text form, any unknown functions those components use, and
/// side conditions defining the family.
struct GeneratorSpec {
    std::string name;
    std::string components;
    std::vector<std::pair<std::string, std::vector<std::string>>> unknowns;
    std::vector<std::string> conditions;
    Expected expected = Expected::ConfirmsPaper;
};

/// A classification catalog row: one equation with one choice of f, plus the
/// generators the catalog lists for it. Entries whose source display needed
/// normalizing keep the original form in paper_text.
struct CorpusEntry {
    std::string id;
    std::string f_case;
    std::string paper_anchor;
    std::vector<std::string> vars;
    std::vector<std::string> params;
    bool declares_f = false;
    std::string pde_text;
    std::string paper_text;
    std::vector<GeneratorSpec> generators;

    ContextPtr base_context() const {
        std::vector<std::pair<std::string, std::vector<std::string>>> fns;
        if (declares_f) fns.push_back({"f", {"u"}});
        return std::make_shared<Context>(Context::make(vars, "u", params, fns));
    }

    SemilinearPDE build() const {
        ContextPtr ctx = base_context();
        return solve_principal(parse_expr(pde_text, *ctx), ctx);
    }

    ContextPtr generator_context(const GeneratorSpec& g) const {
        auto ctx = std::make_shared<Context>(*base_context());
        for (const auto& [name, args] : g.unknowns) ctx->add_unknown(name, args);
        return ctx;
    }
};

namespace corpus_detail {

inline GeneratorSpec gen(std::string name, std::string components,
                         Expected e = Expected::ConfirmsPaper) {
    return {std::move(name), std::move(components), {}, {}, e};
}

inline GeneratorSpec fam(std::string name, std::string components,
                         std::vector<std::pair<std::string, std::vector<std::string>>> fns,
                         std::vector<std::string> conds) {
    return {std::move(name), std::move(components), std::move(fns), std::move(conds),
            Expected::ConfirmsPaper};
}

inline std::string laplacian(const std::vector<std::string>& vs) {
    std::string s;
    for (const auto& v : vs) s += (s.empty() ? "" : " + ") + ("u[" + v + "," + v + "]");
    return s;
}

inline std::string bilaplacian(const std::vector<std::string>& vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i; j < vs.size(); ++j) {
            std::string term = "u[" + vs[i] + "," + vs[i] + "," + vs[j] + "," + vs[j] + "]";
            s += (s.empty() ? "" : " + ") + std::string(i == j ? "" : "2*") + term;
        }
    return s;
}

inline std::string bilaplacian_rule(const std::vector<std::string>& vs,
                                    const std::string& fn, const std::string& extra) {
    // orient the pure fourth derivative in the first variable
    std::string lhs = fn + "[" + vs[0] + "," + vs[0] + "," + vs[0] + "," + vs[0] + "]";
    std::string rest;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i; j < vs.size(); ++j) {
            if (i == 0 && j == 0) continue;
            rest += " - " + std::string(i == j ? "" : "2*") + fn + "[" + vs[i] + "," + vs[i] +
                    "," + vs[j] + "," + vs[j] + "]";
        }
    return lhs + "->" + (rest.empty() ? "0" : rest.substr(3).insert(0, "-")) + extra;
}

/// Conformal generators (2 x^i x^j - |x|^2 d^ij) d_j + eta, with
/// eta = weight * x^i * u for the power-law family and eta = shift * x^i for
/// the exponential one.
inline std::string conformal_components(const std::vector<std::string>& vs, std::size_t i,
                                        const std::string& eta) {
    std::string s;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (j == i) {
            std::string diag = vs[i] + "^2";
            for (std::size_t l = 0; l < vs.size(); ++l)
                if (l != i) diag += " - " + vs[l] + "^2";
            s += diag + "; ";
        } else {
            s += "2*" + vs[i] + "*" + vs[j] + "; ";
        }
    }
    return s + eta;
}

inline void poisson2d(std::vector<CorpusEntry>& out) {
    const std::vector<std::string> xy = {"x", "y"};
    const std::string lap = laplacian(xy);
    const std::vector<std::pair<std::string, std::vector<std::string>>> cr_fns = {
        {"xi1", xy}, {"xi2", xy}};
    const std::vector<std::string> cr = {"xi1[x]->xi2[y]", "xi1[y]->-xi2[x]"};

    out.push_back({"poisson2d", "arbitrary", "catalog:poisson2d/arbitrary", xy, {}, true,
                   lap + " + f(u)", "",
                   {gen("Y1", "1; 0; 0"), gen("Y2", "0; 1; 0"), gen("Y3", "y; -x; 0")}});
    out.push_back(
        {"poisson2d", "zero", "catalog:poisson2d/f=0", xy, {}, false, lap, "",
         {fam("Y_(xi1,xi2)", "xi1(x,y); xi2(x,y); 0", cr_fns, cr),
          gen("Y4", "0; 0; u"),
          fam("W_beta", "0; 0; beta(x,y)", {{"beta", xy}}, {"beta[x,x]->-beta[y,y]"})}});
    out.push_back({"poisson2d", "linear", "catalog:poisson2d/f=k*u", xy, {"k"}, false,
                   lap + " + k*u", "",
                   {gen("Y4", "0; 0; u"),
                    fam("W_beta", "0; 0; beta(x,y)", {{"beta", xy}},
                        {"beta[x,x]->-beta[y,y]-k*beta(x,y)"})}});
    out.push_back({"poisson2d", "power", "catalog:poisson2d/f=k*u^p", xy, {"k", "p"}, false,
                   lap + " + k*u^p", "",
                   {gen("Y5", "x; y; 2/(1-p)*u")}});
    out.push_back({"poisson2d", "exponential", "catalog:poisson2d/f=k*exp(u)", xy, {"k"},
                   false, lap + " + k*exp(u)", "",
                   {fam("Y^e_(xi1,xi2)", "xi1(x,y); xi2(x,y); -2*xi1[x]", cr_fns, cr)}});
}

inline void polyharmonic(std::vector<CorpusEntry>& out) {
    const std::vector<std::string> xyz = {"x", "y", "z"};
    const std::string lap3 = laplacian(xyz);
    const std::string bil3 = bilaplacian(xyz);

    std::vector<GeneratorSpec> euclid = {
        gen("X1", "1; 0; 0; 0"),      gen("X2", "0; 1; 0; 0"),
        gen("X3", "0; 0; 1; 0"),      gen("X12", "y; -x; 0; 0"),
        gen("X13", "z; 0; -x; 0"),    gen("X23", "0; z; -y; 0")};

    auto conf3 = [&](const std::string& weight) {
        std::vector<GeneratorSpec> gs;
        for (std::size_t i = 0; i < 3; ++i)
            gs.push_back(gen("Y" + std::to_string(i + 1),
                             conformal_components(xyz, i, weight + "*" + xyz[i] + "*u")));
        return gs;
    };

    // m = 1, n = 3: -Lap(u) = f(u), written Lap(u) + f(u) = 0
    out.push_back({"polyharmonic-m1n3", "arbitrary", "catalog:polyharmonic/m=1,n=3/arbitrary",
                   xyz, {}, true, lap3 + " + f(u)", "", euclid});
    {
        std::vector<GeneratorSpec> gs = conf3("-1");  // 2m - n = -1
        gs.push_back(gen("U", "0; 0; 0; u"));
        gs.push_back(fam("W_beta", "0; 0; 0; beta(x,y,z)", {{"beta", xyz}},
                         {"beta[x,x]->-beta[y,y]-beta[z,z]"}));
        out.push_back({"polyharmonic-m1n3", "zero", "catalog:polyharmonic/m=1,n=3/f=0", xyz,
                       {}, false, lap3, "", gs});
    }
    out.push_back({"polyharmonic-m1n3", "power", "catalog:polyharmonic/m=1,n=3/f=u^p", xyz,
                   {"p"}, false, lap3 + " + u^p", "",
                   {gen("D_pm", "x; y; z; 2/(1-p)*u")}});
    out.push_back({"polyharmonic-m1n3", "power(5)",
                   "catalog:polyharmonic/m=1,n=3/critical p=5", xyz, {}, false,
                   lap3 + " + u^5", "", conf3("-1")});
    out.push_back({"polyharmonic-m1n3", "exponential",
                   "catalog:polyharmonic/m=1,n=3/f=exp(u)", xyz, {}, false,
                   lap3 + " + exp(u)", "",
                   {gen("W", "x; y; z; -2")}});

    // m = 2, n = 3: Lap^2(u) = f(u)
    out.push_back({"polyharmonic-m2n3", "arbitrary", "catalog:polyharmonic/m=2,n=3/arbitrary",
                   xyz, {}, true, bil3 + " - f(u)", "", euclid});
    {
        std::vector<GeneratorSpec> gs = conf3("1");  // 2m - n = 1
        gs.push_back(gen("U", "0; 0; 0; u"));
        gs.push_back(fam("W_beta", "0; 0; 0; beta(x,y,z)", {{"beta", xyz}},
                         {bilaplacian_rule(xyz, "beta", "")}));
        out.push_back({"polyharmonic-m2n3", "zero", "catalog:polyharmonic/m=2,n=3/f=0", xyz,
                       {}, false, bil3, "", gs});
    }
    out.push_back({"polyharmonic-m2n3", "power", "catalog:polyharmonic/m=2,n=3/f=u^p", xyz,
                   {"p"}, false, bil3 + " - u^p", "",
                   {gen("D_pm", "x; y; z; 4/(1-p)*u")}});
    out.push_back({"polyharmonic-m2n3", "exponential",
                   "catalog:polyharmonic/m=2,n=3/f=exp(u)", xyz, {}, false,
                   bil3 + " - exp(u)", "",
                   {gen("W", "x; y; z; -4")}});

    // n = 2m conformal extensions of the exponential case. The catalog lists
    // the eta component as the constant -4m; that fails verification, and the
    // pattern of the power-law family gives -4m*x^i, which checks out. The
    // corpus carries the corrected form.
    {
        const std::vector<std::string> xy = {"x", "y"};
        std::vector<GeneratorSpec> gs = {gen("W", "x; y; -2")};
        for (std::size_t i = 0; i < 2; ++i)
            gs.push_back(gen("E" + std::to_string(i + 1),
                             conformal_components(xy, i, "-4*" + xy[i])));
        out.push_back({"polyharmonic-m1n2", "exponential",
                       "catalog:polyharmonic/m=1,n=2/f=exp(u)", xy, {}, false,
                       laplacian(xy) + " + exp(u)",
                       "source lists E_i with eta = -4m; corpus uses eta = -4m*x^i", gs});
    }
    {
        const std::vector<std::string> v4 = {"x", "y", "z", "w"};
        std::vector<GeneratorSpec> gs = {gen("W", "x; y; z; w; -4")};
        for (std::size_t i = 0; i < 4; ++i)
            gs.push_back(gen("E" + std::to_string(i + 1),
                             conformal_components(v4, i, "-8*" + v4[i])));
        out.push_back({"polyharmonic-m2n4", "exponential",
                       "catalog:polyharmonic/m=2,n=4/f=exp(u)", v4, {}, false,
                       bilaplacian(v4) + " - exp(u)",
                       "source lists E_i with eta = -4m; corpus uses eta = -4m*x^i", gs});
    }
}

inline void wave(std::vector<CorpusEntry>& out) {
    const std::vector<std::string> tx = {"t", "x"};
    const std::string lhs = "u[t,t] - u[x,x]";
    const std::vector<std::pair<std::string, std::vector<std::string>>> kilh_fns = {
        {"xi", tx}, {"phi", tx}};
    const std::vector<std::string> kilh = {"xi[x]->phi[t]", "xi[t]->phi[x]"};

    out.push_back({"wave", "arbitrary", "catalog:wave/arbitrary", tx, {}, true,
                   lhs + " - f(u)", "",
                   {{"W1", "t; x; 0", {}, {}, Expected::ContradictsPaper},
                    gen("W2", "1; 0; 0"), gen("W3", "0; 1; 0")}});
    out.push_back({"wave", "zero", "catalog:wave/f=0", tx, {}, false, lhs, "",
                   {gen("W1", "t; x; 0"),
                    fam("W_(xi,phi)", "phi(t,x); xi(t,x); 0", kilh_fns, kilh),
                    gen("U", "0; 0; u"),
                    fam("W_beta", "0; 0; beta(t,x)", {{"beta", tx}},
                        {"beta[t,t]->beta[x,x]"})}});
    out.push_back({"wave", "linear", "catalog:wave/f=u", tx, {}, false, lhs + " - u", "",
                   {gen("U", "0; 0; u"),
                    fam("W_beta", "0; 0; beta(t,x)", {{"beta", tx}},
                        {"beta[t,t]->beta[x,x]+beta(t,x)"})}});
    out.push_back({"wave", "power", "catalog:wave/f=u^p", tx, {"p"}, false,
                   lhs + " - u^p", "",
                   {gen("D_p", "t; x; 2/(1-p)*u")}});
    out.push_back({"wave", "exponential", "catalog:wave/f=exp(u)", tx, {}, false,
                   lhs + " - exp(u)", "",
                   {fam("W^e_(xi,phi)", "phi(t,x); xi(t,x); -2*xi[x]", kilh_fns, kilh)}});
}

inline void heat(std::vector<CorpusEntry>& out) {
    const std::vector<std::string> tx = {"t", "x"};
    const std::string lhs = "u[t] - u[x,x]";

    out.push_back({"heat", "arbitrary", "catalog:heat/arbitrary", tx, {}, true,
                   lhs + " - f(u)", "",
                   {gen("H0", "1; 0; 0"), gen("H1", "0; 1; 0")}});
    out.push_back({"heat", "zero", "catalog:heat/f=0", tx, {}, false, lhs, "",
                   {gen("H2", "0; 2*t; -x*u"), gen("H_u", "0; 0; u"),
                    gen("H3", "2*t; x; 0"), gen("H4", "4*t^2; 4*t*x; -(x^2+2*t)*u"),
                    fam("H_beta", "0; 0; beta(t,x)", {{"beta", tx}},
                        {"beta[t]->beta[x,x]"})}});
    out.push_back({"heat", "linear", "catalog:heat/f=u", tx, {}, false, lhs + " - u",
                   "source lists H_beta with beta[t] - beta[x,x] = 0; the family needs "
                   "beta to solve the equation itself",
                   {gen("H2", "0; 2*t; -x*u"), gen("H_u", "0; 0; u"),
                    gen("H5", "2*t; x; 2*t*u"),
                    gen("H6", "t^2; t*x; (t^2 - x^2/4 - t/2)*u"),
                    fam("H_beta", "0; 0; beta(t,x)", {{"beta", tx}},
                        {"beta[t]->beta[x,x]+beta(t,x)"})}});
    out.push_back({"heat", "power", "catalog:heat/f=u^p", tx, {"p"}, false, lhs + " - u^p",
                   "",
                   {gen("H^d_p", "2*t; x; 2/(1-p)*u")}});
    out.push_back({"heat", "quadratic", "catalog:heat/f=u^2", tx, {}, false, lhs + " - u^2",
                   "",
                   {gen("H^d_2", "2*t; x; -2*u"),
                    {"H7", "t^2; t*x; -2*t*u - 1", {}, {}, Expected::ContradictsPaper}}});
    out.push_back({"heat", "exponential", "catalog:heat/f=exp(u)", tx, {}, false,
                   lhs + " - exp(u)", "",
                   {gen("H8", "2*t; x; -2")}});
}

inline void kohn_laplace(std::vector<CorpusEntry>& out) {
    const std::vector<std::string> xyt = {"x", "y", "t"};
    const std::string op =
        "u[x,x] + u[y,y] + 4*(x^2+y^2)*u[t,t] + 4*y*u[x,t] - 4*x*u[y,t]";
    const std::string sublap_rule =
        "beta[x,x]->-beta[y,y]-4*(x^2+y^2)*beta[t,t]-4*y*beta[x,t]+4*x*beta[y,t]";

    std::vector<GeneratorSpec> gf = {gen("T", "0; 0; 1; 0"), gen("R", "y; -x; 0; 0"),
                                     gen("X~", "1; 0; -2*y; 0"), gen("Y~", "0; 1; 2*x; 0")};
    std::vector<GeneratorSpec> vcrit = {
        gen("V1", "x*t - x^2*y - y^3; y*t + x^3 + x*y^2; t^2 - (x^2+y^2)^2; -t*u"),
        gen("V2", "t - 4*x*y; 3*x^2 - y^2; -(2*y*t + 2*x^3 + 2*x*y^2); 2*y*u"),
        gen("V3", "x^2 - 3*y^2; t + 4*x*y; 2*x*t - 2*x^2*y - 2*y^3; -2*x*u")};

    out.push_back({"kohn-laplace", "arbitrary", "catalog:kohn-laplace/arbitrary", xyt, {},
                   true, op + " + f(u)", "", gf});
    {
        std::vector<GeneratorSpec> gs = vcrit;
        gs.push_back(gen("Z", "x; y; 2*t; 0"));
        gs.push_back(gen("U", "0; 0; 0; u"));
        gs.push_back(fam("W_beta", "0; 0; 0; beta(x,y,t)", {{"beta", xyt}}, {sublap_rule}));
        out.push_back({"kohn-laplace", "zero", "catalog:kohn-laplace/f=0", xyt, {}, false,
                       op, "", gs});
    }
    out.push_back({"kohn-laplace", "linear", "catalog:kohn-laplace/f=u", xyt, {}, false,
                   op + " + u", "",
                   {gen("U", "0; 0; 0; u"),
                    fam("W_beta", "0; 0; 0; beta(x,y,t)", {{"beta", xyt}},
                        {sublap_rule + "-beta(x,y,t)"})}});
    out.push_back({"kohn-laplace", "power", "catalog:kohn-laplace/f=u^p", xyt, {"p"}, false,
                   op + " + u^p", "",
                   {gen("D_p", "x; y; 2*t; 2/(1-p)*u")}});
    out.push_back({"kohn-laplace", "exponential", "catalog:kohn-laplace/f=exp(u)", xyt, {},
                   false, op + " + exp(u)", "",
                   {gen("E", "x; y; 2*t; -2")}});
    {
        std::vector<GeneratorSpec> gs = vcrit;
        gs.push_back(gen("D_3", "x; y; 2*t; -u"));
        out.push_back({"kohn-laplace", "cubic", "catalog:kohn-laplace/f=u^3", xyt, {}, false,
                       op + " + u^3", "", gs});
    }
}

}  // namespace corpus_detail

inline std::vector<CorpusEntry> load_corpus() {
    std::vector<CorpusEntry> out;
    corpus_detail::poisson2d(out);
    corpus_detail::polyharmonic(out);
    corpus_detail::wave(out);
    corpus_detail::heat(out);
    corpus_detail::kohn_laplace(out);
    return out;
}

// ---------------------------------------------------------------------------
// regression runner

struct GeneratorResult {
    std::string name;
    bool symmetry = false;
    Expected expected = Expected::ConfirmsPaper;
    bool matches = false;
    std::string residual_text;
    std::string error;
};

struct CertificateSummary {
    std::string claim;
    bool ok = false;
    int rank = 0;
    std::string detail;
};

struct EntryResult {
    std::string id;
    std::string f_case;
    std::string paper_anchor;
    StructurePrediction prediction;
    std::vector<CertificateSummary> certificates;
    std::vector<GeneratorResult> generators;
    bool pass = false;
    double wall_ms = 0.0;
};

struct RunReport {
    std::string engine_version = kEngineVersion;
    std::vector<EntryResult> entries;
    bool pass = true;
    double wall_ms = 0.0;

    std::string to_text() const {
        std::string s;
        for (const auto& e : entries) {
            s += "== " + e.id + " [" + e.f_case + "]  (" + e.paper_anchor + ")\n";
            s += "   prediction: semilinear=" + std::string(e.prediction.semilinear ? "yes" : "no") +
                 " order=" + std::to_string(e.prediction.order) +
                 " xi_u=0:" + (e.prediction.xi_independent_of_u ? "yes" : "no") +
                 " f-sublinear:" + (e.prediction.f_subprincipal_linear ? "yes" : "no") +
                 " eta-affine:" + (e.prediction.eta_affine_in_u ? "yes" : "no") + "\n";
            for (const auto& c : e.certificates)
                s += "   certificate " + c.claim + ": " + (c.ok ? "ok" : "FAILED") +
                     " (rank " + std::to_string(c.rank) + ")" +
                     (c.detail.empty() ? "" : " " + c.detail) + "\n";
            for (const auto& g : e.generators) {
                s += "   " + g.name + ": " +
                     (g.error.empty() ? (g.symmetry ? "symmetry" : "not-symmetry")
                                      : "error: " + g.error) +
                     " (expected " + to_cstr(g.expected) + ") " +
                     (g.matches ? "[ok]" : "[MISMATCH]");
                if (!g.symmetry && g.error.empty() && !g.residual_text.empty())
                    s += "  residual: " + g.residual_text;
                s += "\n";
            }
            s += std::string("   entry: ") + (e.pass ? "pass" : "FAIL") + "\n";
        }
        s += std::string("overall: ") + (pass ? "pass" : "FAIL") + "\n";
        return s;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["engine_version"] = engine_version;
        j["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : entries) {
            nlohmann::ordered_json je;
            je["id"] = e.id;
            je["f_case"] = e.f_case;
            je["paper_anchor"] = e.paper_anchor;
            je["prediction"] = {{"semilinear", e.prediction.semilinear},
                                {"order", e.prediction.order},
                                {"xi_independent_of_u", e.prediction.xi_independent_of_u},
                                {"f_subprincipal_linear", e.prediction.f_subprincipal_linear},
                                {"eta_affine_in_u", e.prediction.eta_affine_in_u}};
            je["certificates"] = nlohmann::ordered_json::array();
            for (const auto& c : e.certificates)
                je["certificates"].push_back(
                    {{"claim", c.claim}, {"ok", c.ok}, {"rank", c.rank}});
            je["generators"] = nlohmann::ordered_json::array();
            for (const auto& g : e.generators)
                je["generators"].push_back(
                    {{"name", g.name},
                     {"verdict", g.error.empty()
                                     ? (g.symmetry ? "symmetry" : "not-symmetry")
                                     : "error"},
                     {"expected", to_cstr(g.expected)},
                     {"residual_text", g.residual_text}});
            je["pass"] = e.pass;
            je["wall_ms"] = e.wall_ms;
            j["entries"].push_back(std::move(je));
        }
        j["pass"] = pass;
        j["wall_ms"] = wall_ms;
        return j;
    }
};

inline EntryResult run_entry(const CorpusEntry& entry) {
    auto t0 = std::chrono::steady_clock::now();
    EntryResult r;
    r.id = entry.id;
    r.f_case = entry.f_case;
    r.paper_anchor = entry.paper_anchor;
    r.pass = true;

    SemilinearPDE pde = entry.build();
    r.prediction = predict_structure(pde);

    try {
        Certificate c = certify_xi_u(pde);
        r.certificates.push_back({"xi_u = 0", replay_certificate(c), c.rank, ""});
    } catch (const EngineError& err) {
        r.certificates.push_back({"xi_u = 0", false, 0, err.what()});
    }
    if (r.prediction.eta_affine_in_u) {
        try {
            Certificate c = certify_eta_uu(pde);
            r.certificates.push_back({"eta_uu = 0", replay_certificate(c), c.rank, ""});
        } catch (const EngineError& err) {
            r.certificates.push_back({"eta_uu = 0", false, 0, err.what()});
        }
    }
    for (const auto& c : r.certificates)
        if (!c.ok) r.pass = false;

    for (const auto& g : entry.generators) {
        GeneratorResult gr;
        gr.name = g.name;
        gr.expected = g.expected;
        try {
            ContextPtr gctx = entry.generator_context(g);
            SemilinearPDE gp = solve_principal(parse_expr(entry.pde_text, *gctx), gctx);
            VectorField field = VectorField::parse(g.components, gctx);
            std::vector<SideCondition> conds;
            for (const auto& ct : g.conditions)
                conds.push_back(SideCondition::parse(ct, *gctx));
            VerificationReport rep = is_symmetry(field, gp, conds);
            gr.symmetry = rep.symmetry;
            if (!rep.symmetry) gr.residual_text = rep.residual.to_string(*gctx);
            bool expected_sym = g.expected == Expected::ConfirmsPaper;
            gr.matches = gr.symmetry == expected_sym;
        } catch (const EngineError& err) {
            gr.error = err.what();
            gr.matches = false;
        }
        if (!gr.matches) r.pass = false;
        r.generators.push_back(std::move(gr));
    }

    auto t1 = std::chrono::steady_clock::now();
    r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

inline bool entry_matches_filter(const CorpusEntry& e, const std::string& filter) {
    if (filter.empty()) return true;
    return e.id.find(filter) != std::string::npos ||
           e.f_case.find(filter) != std::string::npos ||
           (e.id + ":" + e.f_case).find(filter) != std::string::npos;
}

/// Runs every selected entry: prediction, certifications, and each generator
/// against its expected tag. Entries are independent, so the parallel path
/// fans out per entry and reassembles the report in corpus order.
inline RunReport run_corpus(const std::vector<CorpusEntry>& entries,
                            const std::string& filter = "", bool parallel = false) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    std::vector<const CorpusEntry*> selected;
    for (const auto& e : entries)
        if (entry_matches_filter(e, filter)) selected.push_back(&e);

    if (parallel) {
        std::vector<std::future<EntryResult>> futs;
        for (const auto* e : selected)
            futs.push_back(std::async(std::launch::async, [e] { return run_entry(*e); }));
        for (auto& f : futs) report.entries.push_back(f.get());
    } else {
        for (const auto* e : selected) report.entries.push_back(run_entry(*e));
    }
    for (const auto& e : report.entries)
        if (!e.pass) report.pass = false;
    auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

inline RunReport run_corpus(const std::string& filter = "", bool parallel = false) {
    return run_corpus(load_corpus(), filter, parallel);
}

}  // namespace liesym
