#pragma once

#include <map>
#include <string>
#include <vector>

#include "liesym/jet.hpp"

namespace liesym {

/// True when the expression depends on independent variables (and parameters)
/// only: no jet atoms, no unknown functions of u, nested payloads included.
inline bool is_x_only(const Expr& e, const Context& ctx) {
    bool ok = true;
    e.for_each_atom([&](const Atom& a) {
        if (is_jet(a)) ok = false;
        if (const auto* u = std::get_if<UnknownDerivAtom>(&a))
            if (!ctx.unknown_is_x_only(u->fn)) ok = false;
    });
    return ok;
}

/// Divides by a pure coefficient or a single invertible monomial.
inline Expr divide_by_principal(const Expr& e, const Expr& d) {
    if (d.is_zero()) throw EngineError("non-invertible principal coefficient");
    if (d.is_coefficient()) return e * d.coefficient_value().inverse();
    if (d.term_count() == 1) return e * d.pow_int(-1);
    throw EngineError("non-invertible principal coefficient");
}

/// Decomposition of a semilinear equation F = sum_K A_K(x) u_K + f, together
/// with the principal order-m derivative that gets eliminated when the
/// symmetry condition is restricted to the solution manifold.
struct SemilinearPDE {
    ContextPtr ctx;
    int order = 0;
    std::map<MultiIndex, Expr> A;
    Expr f;
    MultiIndex principal;
    Expr full;
};

/// Splits F into the semilinear decomposition. The principal derivative is
/// the graded-lex greatest order-m index whose coefficient is constant, then
/// the greatest with a single-monomial coefficient, then the greatest.
inline SemilinearPDE solve_principal(const Expr& full, ContextPtr ctx) {
    int m = full.jet_order();
    if (m < 1) throw EngineError("no principal: expression contains no derivative of u");

    std::map<Monomial, Expr, MonomialLess> parts;
    try {
        parts = full.collect([m](const Atom& a) {
            return is_jet(a) && jet_order_of(a) == static_cast<std::size_t>(m);
        });
    } catch (const EngineError&) {
        throw EngineError("not semilinear: an order-" + std::to_string(m) +
                          " derivative occurs inside a power or exponential");
    }

    SemilinearPDE p;
    p.ctx = std::move(ctx);
    p.order = m;
    p.full = full;
    for (const auto& [mono, coeff] : parts) {
        if (mono.empty()) {
            p.f = coeff;
            continue;
        }
        const auto& fs = mono.factors();
        if (fs.size() != 1 || fs[0].second != 1)
            throw EngineError("not semilinear: order-" + std::to_string(m) +
                              " derivatives occur nonlinearly");
        if (!is_x_only(coeff, *p.ctx))
            throw EngineError(
                "not semilinear: a leading coefficient depends on u or its derivatives");
        p.A.emplace(std::get<JetAtom>(fs[0].first).index, coeff);
    }
    if (p.A.empty()) throw EngineError("no principal: all leading coefficients vanish");

    for (auto it = p.A.rbegin(); it != p.A.rend(); ++it)
        if (it->second.is_coefficient()) {
            p.principal = it->first;
            return p;
        }
    for (auto it = p.A.rbegin(); it != p.A.rend(); ++it)
        if (it->second.term_count() == 1) {
            p.principal = it->first;
            return p;
        }
    p.principal = p.A.rbegin()->first;
    return p;
}

/// What u_principal equals on the solution manifold F = 0.
inline Expr principal_rhs(const SemilinearPDE& p) {
    Expr numer = p.A.at(p.principal) * Expr::jet(p.principal) - p.full;
    return divide_by_principal(numer, p.A.at(p.principal));
}

/// S^(m)F with no manifold restriction; the certification argument matches
/// its jet-monomial coefficients against lambda(x,u) F directly.
inline Expr symmetry_action(const VectorField& s, const SemilinearPDE& p) {
    if (!s.ctx->compatible_with(*p.ctx))
        throw EngineError("generator and equation use different variables");
    return apply_prolonged(prolong(s, p.order), p.full);
}

/// S^(m)F restricted to the solution manifold: apply the prolonged generator,
/// then eliminate the principal derivative. Since F is affine in u_principal
/// the result vanishes identically iff S is a Lie point symmetry; the
/// multiplier lambda stays implicit.
inline Expr symmetry_residual(const VectorField& s, const SemilinearPDE& p) {
    Expr r = symmetry_action(s, p);
    return r.substitute(JetAtom{p.principal}, principal_rhs(p));
}

enum class Ansatz { Full, ThmReduced };

/// Generic symmetry built over an extended context: unknown components
/// xi^i(x,u), eta(x,u) for the full ansatz, or xi^i(x) with
/// eta = alpha(x) u + beta(x) for the theorem-reduced one.
struct GenericAnsatz {
    ContextPtr ctx;
    Ansatz kind = Ansatz::Full;
    std::vector<std::string> xi_names;
    std::string eta_name;    // full ansatz
    std::string alpha_name;  // reduced ansatz
    std::string beta_name;   // reduced ansatz
    std::vector<Expr> xi;
    Expr eta;

    VectorField field() const { return VectorField(ctx, xi, eta); }
};

inline GenericAnsatz make_generic_ansatz(const SemilinearPDE& p, Ansatz kind) {
    auto ctx = std::make_shared<Context>(*p.ctx);
    GenericAnsatz g;
    g.kind = kind;
    std::vector<std::string> xz = ctx->indep_vars();
    std::vector<std::string> xu = xz;
    xu.push_back(ctx->dep_var());

    for (std::size_t i = 0; i < ctx->dim(); ++i) {
        std::string name = ctx->fresh_name("xi" + std::to_string(i + 1));
        ctx->add_unknown(name, kind == Ansatz::Full ? xu : xz);
        g.xi_names.push_back(name);
        g.xi.push_back(Expr::unknown(name));
    }
    if (kind == Ansatz::Full) {
        g.eta_name = ctx->fresh_name("eta");
        ctx->add_unknown(g.eta_name, xu);
        g.eta = Expr::unknown(g.eta_name);
    } else {
        g.alpha_name = ctx->fresh_name("alpha");
        g.beta_name = ctx->fresh_name("beta");
        ctx->add_unknown(g.alpha_name, xz);
        ctx->add_unknown(g.beta_name, xz);
        g.eta = Expr::unknown(g.alpha_name) * Expr::jet(MultiIndex{}) +
                Expr::unknown(g.beta_name);
    }
    g.ctx = ctx;
    return g;
}

struct DeterminingEquation {
    Monomial source;  // the jet monomial the equation was collected from
    Expr eq;
};

/// Finite list of expressions in x, u and unknown-function atoms, each
/// required to vanish identically. No equation contains a jet atom of order
/// >= 1 and none is identically zero.
struct DeterminingSystem {
    ContextPtr ctx;
    Ansatz ansatz = Ansatz::Full;
    std::vector<std::string> xi_names;
    std::string eta_name;
    std::string alpha_name;
    std::string beta_name;
    std::vector<std::string> unknowns;
    std::vector<DeterminingEquation> equations;

    std::string to_string() const {
        std::string s;
        int i = 1;
        for (const auto& d : equations)
            s += std::to_string(i++) + ". " + d.source.to_string(*ctx) + " : " +
                 d.eq.to_string(*ctx) + " = 0\n";
        return s;
    }
};

namespace detail {

inline Expr scale_to_unit_lead(const Expr& e) {
    if (e.is_zero()) return e;
    return e * e.terms().begin()->second.inverse();
}

/// Dedup up to coefficient-field scaling, preserving first provenance.
inline void append_equations(std::vector<DeterminingEquation>& out,
                             const std::map<Monomial, Expr, MonomialLess>& parts) {
    for (const auto& [mono, eq] : parts) {
        if (eq.is_zero()) continue;
        Expr norm = scale_to_unit_lead(eq);
        bool seen = false;
        for (const auto& d : out)
            if (d.eq == norm) {
                seen = true;
                break;
            }
        if (!seen) out.push_back({mono, norm});
    }
}

/// Splits one u-free-unknowns equation by powers of u. Falls back to the
/// unsplit equation when u occurs inside an exponential or symbolic power
/// (classifying systems with concrete nonlinear f).
inline void split_by_u(const Monomial& source, const Expr& eq,
                       std::map<Monomial, Expr, MonomialLess>& out) {
    std::map<Monomial, Expr, MonomialLess> sub;
    try {
        sub = eq.collect([](const Atom& a) { return is_jet(a); });
    } catch (const EngineError&) {
        out[source] += eq;
        return;
    }
    for (const auto& [umono, coeff] : sub) {
        std::vector<Monomial::Factor> fs = source.factors();
        const auto& extra = umono.factors();
        fs.insert(fs.end(), extra.begin(), extra.end());
        out[Monomial(std::move(fs))] += coeff;
    }
}

}  // namespace detail

/// Builds the determining system: impose F = 0 by principal elimination,
/// apply the generic prolonged symmetry, and split the residual by jet
/// monomials. With the theorem-reduced ansatz the unknowns are u-free, so
/// equations are additionally split by powers of u where that stays
/// polynomial. Unknown functions inside f stay in the coefficients: the
/// result is a classifying system that must hold identically in f.
inline DeterminingSystem determining_system(const SemilinearPDE& p, Ansatz kind) {
    GenericAnsatz g = make_generic_ansatz(p, kind);
    Expr residual = symmetry_residual(g.field(), p);

    auto parts = residual.collect(
        [](const Atom& a) { return is_jet(a) && jet_order_of(a) >= 1; });

    DeterminingSystem sys;
    sys.ctx = g.ctx;
    sys.ansatz = kind;
    sys.xi_names = g.xi_names;
    sys.eta_name = g.eta_name;
    sys.alpha_name = g.alpha_name;
    sys.beta_name = g.beta_name;
    sys.unknowns = g.xi_names;
    if (kind == Ansatz::Full) {
        sys.unknowns.push_back(g.eta_name);
    } else {
        sys.unknowns.push_back(g.alpha_name);
        sys.unknowns.push_back(g.beta_name);
        std::map<Monomial, Expr, MonomialLess> split;
        for (const auto& [mono, eq] : parts) detail::split_by_u(mono, eq, split);
        parts = std::move(split);
    }
    detail::append_equations(sys.equations, parts);
    return sys;
}

}  // namespace liesym
