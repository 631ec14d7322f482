#pragma once

#include <map>
#include <string>
#include <vector>

#include "liesym/context.hpp"
#include "liesym/expr.hpp"
#include "liesym/parser.hpp"

namespace liesym {

/// Total derivative D_i: the partial in x^i plus the chain rule through u and
/// every jet atom present, each jet coordinate u_K contributing u_{K+i}. The
/// K = 0 term is always taken: unknown functions of u depend on u without u
/// appearing as an atom.
inline Expr total_derivative(const Expr& e, int axis, const Context& ctx) {
    Expr r = e.diff(IndepVarAtom{axis}, ctx);
    std::vector<MultiIndex> ks = e.jet_indices();
    if (ks.empty() || !ks.front().empty()) ks.insert(ks.begin(), MultiIndex{});
    for (const MultiIndex& k : ks) {
        Expr d = e.diff(JetAtom{k}, ctx);
        if (!d.is_zero()) r += Expr::jet(k.appended(axis)) * d;
    }
    return r;
}

/// Infinitesimal generator xi^i(x,u) d/dx^i + eta(x,u) d/du. Components are
/// expressions in the base variables only (jet atoms of order >= 1 rejected).
struct VectorField {
    ContextPtr ctx;
    std::vector<Expr> xi;
    Expr eta;

    VectorField(ContextPtr c, std::vector<Expr> xi_, Expr eta_)
        : ctx(std::move(c)), xi(std::move(xi_)), eta(std::move(eta_)) {
        if (xi.size() != ctx->dim())
            throw EngineError("vector field needs " + std::to_string(ctx->dim()) +
                              " xi components, got " + std::to_string(xi.size()));
        for (const auto& comp : xi)
            if (comp.jet_order() >= 1)
                throw EngineError("vector-field component depends on derivatives of u");
        if (eta.jet_order() >= 1)
            throw EngineError("vector-field component depends on derivatives of u");
    }

    /// Text form "xi1; xi2; ...; eta" with components ordered like
    /// Context::indep_vars.
    static VectorField parse(std::string_view text, ContextPtr ctx) {
        std::vector<Expr> comps = parse_components(text, *ctx);
        if (comps.size() != ctx->dim() + 1)
            throw EngineError("vector field text needs " + std::to_string(ctx->dim() + 1) +
                              " components, got " + std::to_string(comps.size()));
        Expr eta = comps.back();
        comps.pop_back();
        return VectorField(std::move(ctx), std::move(comps), std::move(eta));
    }

    /// Action on a base-space function: xi^i g_i + eta g_u.
    Expr apply_to(const Expr& g) const {
        Expr r;
        for (std::size_t i = 0; i < xi.size(); ++i)
            r += xi[i] * g.diff(IndepVarAtom{static_cast<int>(i)}, *ctx);
        r += eta * g.diff(JetAtom{MultiIndex{}}, *ctx);
        return r;
    }

    VectorField scaled(const RationalFunction& c) const {
        std::vector<Expr> nxi;
        for (const auto& comp : xi) nxi.push_back(comp * c);
        return VectorField(ctx, std::move(nxi), eta * c);
    }

    std::string to_string() const {
        std::string s;
        for (const auto& comp : xi) s += comp.to_string(*ctx) + "; ";
        return s + eta.to_string(*ctx);
    }
};

/// Generator prolonged to a jet order: the eta^(k) coefficients for every
/// sorted multi-index of order 1..m. Coefficients are computed once per
/// sorted index by recursing on the largest axis,
///
///   eta^(1)_i = D_i eta - (D_i xi^j) u_j
///   eta^(k)_{K+i} = D_i eta^(k-1)_K - (D_i xi^j) u_{K+j}
///
/// and are part of the value.
struct ProlongedField {
    VectorField base;
    int order;
    std::map<MultiIndex, Expr> coeffs;
};

inline ProlongedField prolong(const VectorField& s, int m) {
    if (m < 1) throw EngineError("prolongation order must be >= 1");
    const Context& ctx = *s.ctx;
    int n = static_cast<int>(ctx.dim());
    ProlongedField p{s, m, {}};

    // D_i xi^j, reused across every coefficient
    std::vector<std::vector<Expr>> dxi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            dxi[static_cast<std::size_t>(i)].push_back(
                total_derivative(s.xi[static_cast<std::size_t>(j)], i, ctx));

    for (int k = 1; k <= m; ++k) {
        for (const MultiIndex& idx : MultiIndex::all_of_order(n, k)) {
            int i = idx.last();
            Expr c;
            if (k == 1)
                c = total_derivative(s.eta, i, ctx);
            else
                c = total_derivative(p.coeffs.at(idx.without_last()), i, ctx);
            MultiIndex rest = idx.without_last();
            for (int j = 0; j < n; ++j)
                c -= dxi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                     Expr::jet(rest.appended(j));
            p.coeffs.emplace(idx, std::move(c));
        }
    }
    return p;
}

/// Applies the prolonged generator to a jet-space expression:
///   xi^i dF/dx^i + eta dF/du + sum_K eta^(K) dF/du_K,
/// with jet atoms treated as independent coordinates and the chain rule
/// running through unknown-function atoms.
inline Expr apply_prolonged(const ProlongedField& p, const Expr& f) {
    if (f.jet_order() > p.order)
        throw EngineError("expression has jet order " + std::to_string(f.jet_order()) +
                          " but the field is prolonged to order " + std::to_string(p.order));
    const Context& ctx = *p.base.ctx;
    Expr r;
    for (std::size_t i = 0; i < p.base.xi.size(); ++i)
        r += p.base.xi[i] * f.diff(IndepVarAtom{static_cast<int>(i)}, ctx);
    r += p.base.eta * f.diff(JetAtom{MultiIndex{}}, ctx);
    for (const auto& [k, coeff] : p.coeffs) {
        Expr d = f.diff(JetAtom{k}, ctx);
        if (!d.is_zero()) r += coeff * d;
    }
    return r;
}

}  // namespace liesym
