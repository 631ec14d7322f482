#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liesym/detsys.hpp"

namespace liesym {

/// Structural consequences of semilinearity for the symmetry coefficients:
/// xi depends on x only, and when the order exceeds one and f is linear in
/// its order-(m-1) derivatives, eta is affine in u.
struct StructurePrediction {
    bool semilinear = false;
    bool xi_independent_of_u = false;
    bool f_subprincipal_linear = false;
    bool eta_affine_in_u = false;
    int order = 0;
};

/// True when f = a^J(x) u_J + h with |J| = m-1 and h of jet order <= m-2.
inline bool f_subprincipal_linear(const SemilinearPDE& p) {
    std::size_t k = static_cast<std::size_t>(p.order - 1);
    std::map<Monomial, Expr, MonomialLess> parts;
    try {
        parts = p.f.collect(
            [k](const Atom& a) { return is_jet(a) && jet_order_of(a) == k; });
    } catch (const EngineError&) {
        return false;
    }
    for (const auto& [mono, coeff] : parts) {
        if (mono.empty()) continue;
        const auto& fs = mono.factors();
        if (fs.size() != 1 || fs[0].second != 1) return false;
        if (!is_x_only(coeff, *p.ctx)) return false;
    }
    return true;
}

inline StructurePrediction predict_structure(const Expr& full, ContextPtr ctx) {
    StructurePrediction s;
    SemilinearPDE p;
    try {
        p = solve_principal(full, std::move(ctx));
    } catch (const EngineError&) {
        return s;
    }
    s.semilinear = true;
    s.order = p.order;
    s.xi_independent_of_u = true;
    s.f_subprincipal_linear = p.order > 1 ? f_subprincipal_linear(p) : false;
    s.eta_affine_in_u = p.order > 1 && s.f_subprincipal_linear;
    return s;
}

inline StructurePrediction predict_structure(const SemilinearPDE& p) {
    StructurePrediction s;
    s.semilinear = true;
    s.order = p.order;
    s.xi_independent_of_u = true;
    s.f_subprincipal_linear = p.order > 1 ? f_subprincipal_linear(p) : false;
    s.eta_affine_in_u = p.order > 1 && s.f_subprincipal_linear;
    return s;
}

enum class CertClaim { XiUZero, EtaUUZero };

/// Replayable witness that a set of derivative atoms is forced to vanish:
/// the extracted coefficient equations, the unknown atoms, and the ordered
/// pivots of the exact linear elimination that reached full rank.
struct Certificate {
    CertClaim claim = CertClaim::XiUZero;
    ContextPtr ctx;
    std::vector<Atom> unknown_atoms;
    std::vector<DeterminingEquation> witness;
    std::vector<std::pair<int, int>> trace;  // (witness row, unknown column)
    int rank = 0;

    std::string claim_text() const {
        return claim == CertClaim::XiUZero ? "xi_u = 0" : "eta_uu = 0";
    }

    std::string to_string() const {
        std::string s = "claim: " + claim_text() + "\nunknowns:";
        for (const auto& a : unknown_atoms) s += " " + atom_to_string(a, *ctx);
        s += "\nwitness equations (" + std::to_string(witness.size()) + "):\n";
        for (const auto& w : witness)
            s += "  " + w.source.to_string(*ctx) + " : " + w.eq.to_string(*ctx) + " = 0\n";
        s += "elimination trace:";
        for (const auto& [r, c] : trace)
            s += " (eq " + std::to_string(r + 1) + " -> " +
                 atom_to_string(unknown_atoms[static_cast<std::size_t>(c)], *ctx) + ")";
        s += "\nrank: " + std::to_string(rank) + " of " +
             std::to_string(unknown_atoms.size()) + "\n";
        return s;
    }
};

namespace detail {

/// Maps x-only expressions into the field Q(params)(x), with any x-only
/// unknown-function atom treated as a fresh transcendental.
struct CoefficientField {
    const Context& ctx;
    std::vector<std::string> names;
    std::vector<Atom> extras;

    explicit CoefficientField(const Context& c) : ctx(c) {
        names = c.params();
        for (const auto& v : c.indep_vars()) names.push_back(v);
    }

    int id_of_axis(int axis) const {
        return static_cast<int>(ctx.params().size()) + axis;
    }

    int id_of_extra(const Atom& a) {
        for (std::size_t i = 0; i < extras.size(); ++i)
            if (atom_cmp(extras[i], a) == 0)
                return static_cast<int>(names.size() - extras.size() + i);
        extras.push_back(a);
        names.push_back(atom_to_string(a, ctx));
        return static_cast<int>(names.size()) - 1;
    }

    RationalFunction convert_monomial(const Monomial& m, const RationalFunction& c) {
        RationalFunction r = c;
        for (const auto& [a, mult] : m.factors()) {
            int id;
            if (const auto* iv = std::get_if<IndepVarAtom>(&a))
                id = id_of_axis(iv->axis);
            else if (std::holds_alternative<UnknownDerivAtom>(a))
                id = id_of_extra(a);
            else
                throw EngineError("certification failed: unsupported coefficient atom");
            r *= RationalFunction::variable(id).pow_int(mult);
        }
        return r;
    }
};

/// Row-reduces in place following first-nonzero pivoting; returns the pivot
/// list. Rows keep their original ids for the certificate trace.
inline std::vector<std::pair<int, int>> eliminate(
    std::vector<std::vector<RationalFunction>>& rows, std::size_t ncols, int& rank) {
    std::vector<std::pair<int, int>> pivots;
    std::vector<bool> used(rows.size(), false);
    rank = 0;
    for (std::size_t col = 0; col < ncols; ++col) {
        std::size_t pick = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!used[r] && !rows[r][col].is_zero()) {
                pick = r;
                break;
            }
        if (pick == rows.size()) continue;
        used[pick] = true;
        RationalFunction inv = rows[pick][col].inverse();
        for (auto& x : rows[pick]) x *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pick || rows[r][col].is_zero()) continue;
            RationalFunction factor = rows[r][col];
            for (std::size_t c = 0; c < ncols; ++c)
                rows[r][c] -= factor * rows[pick][c];
        }
        pivots.push_back({static_cast<int>(pick), static_cast<int>(col)});
        ++rank;
    }
    return pivots;
}

/// Is this a product u_j * u_K with one atom of order 1 and one of order k?
/// For k = 1 this includes the square u_j^2.
inline bool is_pair_monomial(const Monomial& m, std::size_t k) {
    const auto& fs = m.factors();
    if (k == 1) {
        if (fs.size() == 1)
            return fs[0].second == 2 && is_jet(fs[0].first) &&
                   jet_order_of(fs[0].first) == 1;
        if (fs.size() == 2)
            return fs[0].second == 1 && fs[1].second == 1 && is_jet(fs[0].first) &&
                   is_jet(fs[1].first) && jet_order_of(fs[0].first) == 1 &&
                   jet_order_of(fs[1].first) == 1;
        return false;
    }
    if (fs.size() != 2 || fs[0].second != 1 || fs[1].second != 1) return false;
    if (!is_jet(fs[0].first) || !is_jet(fs[1].first)) return false;
    std::size_t o1 = jet_order_of(fs[0].first), o2 = jet_order_of(fs[1].first);
    return (o1 == 1 && o2 == k) || (o1 == k && o2 == 1);
}

inline std::vector<std::vector<RationalFunction>> pair_matrix(
    const std::vector<DeterminingEquation>& witness, const std::vector<Atom>& unknowns,
    CoefficientField& field) {
    std::vector<std::vector<RationalFunction>> rows;
    for (const auto& w : witness) {
        std::vector<RationalFunction> row(unknowns.size());
        for (const auto& [mono, c] : w.eq.terms()) {
            int which = -1;
            std::vector<Monomial::Factor> rest;
            for (const auto& [a, mult] : mono.factors()) {
                bool matched = false;
                for (std::size_t ui = 0; ui < unknowns.size(); ++ui) {
                    if (atom_cmp(a, unknowns[ui]) == 0) {
                        if (mult != 1 || which >= 0)
                            throw EngineError(
                                "certification failed: equation is not linear in the "
                                "unknown derivatives");
                        which = static_cast<int>(ui);
                        matched = true;
                        break;
                    }
                }
                if (!matched) rest.push_back({a, mult});
            }
            if (which < 0)
                throw EngineError(
                    "certification failed: equation contains a term free of the unknown "
                    "derivatives");
            row[static_cast<std::size_t>(which)] +=
                field.convert_monomial(Monomial(std::move(rest)), c);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Certificate certify_pairs(const SemilinearPDE& p, CertClaim claim) {
    GenericAnsatz g = make_generic_ansatz(p, Ansatz::Full);
    Expr raw = symmetry_action(g.field(), p);

    std::vector<Atom> unknowns;
    std::size_t k;
    if (claim == CertClaim::XiUZero) {
        k = static_cast<std::size_t>(p.order);
        for (const auto& name : g.xi_names)
            unknowns.push_back(UnknownDerivAtom{name, {g.ctx->dep_var()}});
    } else {
        k = static_cast<std::size_t>(p.order - 1);
        unknowns.push_back(
            UnknownDerivAtom{g.eta_name, {g.ctx->dep_var(), g.ctx->dep_var()}});
        // the eta_uu argument rests on xi_u = 0 already being certified
        std::vector<Atom> kill;
        raw.for_each_atom([&](const Atom& a) {
            const auto* u = std::get_if<UnknownDerivAtom>(&a);
            if (!u) return;
            if (std::find(g.xi_names.begin(), g.xi_names.end(), u->fn) == g.xi_names.end())
                return;
            if (std::find(u->args.begin(), u->args.end(), g.ctx->dep_var()) == u->args.end())
                return;
            for (const auto& seen : kill)
                if (atom_cmp(seen, a) == 0) return;
            kill.push_back(a);
        });
        for (const auto& a : kill) raw = raw.substitute(a, Expr());
    }

    auto parts =
        raw.collect([](const Atom& a) { return is_jet(a) && jet_order_of(a) >= 1; });

    Certificate cert;
    cert.claim = claim;
    cert.ctx = g.ctx;
    cert.unknown_atoms = unknowns;
    for (const auto& [mono, eq] : parts) {
        if (!is_pair_monomial(mono, k) || eq.is_zero()) continue;
        cert.witness.push_back({mono, eq});
    }
    if (cert.witness.empty())
        throw EngineError("certification failed: no coefficient equations of the required "
                          "shape were produced");

    CoefficientField field(*g.ctx);
    auto rows = pair_matrix(cert.witness, unknowns, field);
    cert.trace = eliminate(rows, unknowns.size(), cert.rank);
    if (cert.rank != static_cast<int>(unknowns.size())) {
        std::string missing;
        for (std::size_t c = 0; c < unknowns.size(); ++c) {
            bool has = false;
            for (const auto& [r, cc] : cert.trace)
                if (cc == static_cast<int>(c)) has = true;
            if (!has) missing += " " + atom_to_string(unknowns[c], *g.ctx);
        }
        throw EngineError("certification failed: unconstrained unknowns:" + missing);
    }
    return cert;
}

}  // namespace detail

/// Certifies xi^i_u = 0 from the coefficient equations of the monomials
/// u_j u_K with |K| = m, by exact linear elimination over the field of
/// rational functions in x. Those coefficients must vanish for any symmetry
/// because lambda(x,u) F contains no such monomial.
inline Certificate certify_xi_u(const SemilinearPDE& p) {
    return detail::certify_pairs(p, CertClaim::XiUZero);
}

/// Certifies eta_uu = 0 (order > 1 and f sub-principally linear) from the
/// u_j u_K coefficients with |K| = m-1, after imposing xi_u = 0.
inline Certificate certify_eta_uu(const SemilinearPDE& p) {
    if (p.order <= 1)
        throw EngineError("precondition violated: eta_uu certification needs order > 1");
    if (!f_subprincipal_linear(p))
        throw EngineError(
            "precondition violated: f is not linear in its order-(m-1) derivatives");
    return detail::certify_pairs(p, CertClaim::EtaUUZero);
}

/// Re-runs the recorded elimination over the stored witness equations and
/// checks that it still pins every unknown, with no pivot degeneracy.
inline bool replay_certificate(const Certificate& cert) {
    detail::CoefficientField field(*cert.ctx);
    std::vector<std::vector<RationalFunction>> rows;
    try {
        rows = detail::pair_matrix(cert.witness, cert.unknown_atoms, field);
    } catch (const EngineError&) {
        return false;
    }
    std::vector<bool> pivoted(cert.unknown_atoms.size(), false);
    for (const auto& [r, c] : cert.trace) {
        if (r < 0 || static_cast<std::size_t>(r) >= rows.size()) return false;
        if (c < 0 || static_cast<std::size_t>(c) >= cert.unknown_atoms.size()) return false;
        auto& row = rows[static_cast<std::size_t>(r)];
        if (row[static_cast<std::size_t>(c)].is_zero()) return false;
        RationalFunction inv = row[static_cast<std::size_t>(c)].inverse();
        for (auto& x : row) x *= inv;
        for (std::size_t rr = 0; rr < rows.size(); ++rr) {
            if (rr == static_cast<std::size_t>(r)) continue;
            RationalFunction factor = rows[rr][static_cast<std::size_t>(c)];
            if (factor.is_zero()) continue;
            for (std::size_t cc = 0; cc < row.size(); ++cc)
                rows[rr][cc] -= factor * row[cc];
        }
        pivoted[static_cast<std::size_t>(c)] = true;
    }
    for (bool b : pivoted)
        if (!b) return false;
    return true;
}

/// Imposes the certified structure on a full-ansatz determining system:
/// xi-derivatives in u vanish and eta collapses to alpha(x) u + beta(x).
/// Equations that become trivial are dropped; the rest are re-split by
/// powers of u where that stays polynomial.
inline DeterminingSystem ansatz_reduce(const DeterminingSystem& d, const SemilinearPDE& p) {
    StructurePrediction pred = predict_structure(p);
    if (!pred.semilinear || d.ansatz == Ansatz::ThmReduced) return d;

    auto ctx = std::make_shared<Context>(*d.ctx);
    DeterminingSystem out;
    out.ansatz = Ansatz::ThmReduced;
    out.xi_names = d.xi_names;
    out.unknowns = d.xi_names;

    std::string alpha, beta;
    if (pred.eta_affine_in_u) {
        alpha = ctx->fresh_name("alpha");
        ctx->add_unknown(alpha, ctx->indep_vars());
        beta = ctx->fresh_name("beta");
        ctx->add_unknown(beta, ctx->indep_vars());
        out.alpha_name = alpha;
        out.beta_name = beta;
        out.unknowns.push_back(alpha);
        out.unknowns.push_back(beta);
    } else {
        out.eta_name = d.eta_name;
        out.unknowns.push_back(d.eta_name);
    }
    out.ctx = ctx;

    std::map<Monomial, Expr, MonomialLess> parts;
    for (const auto& deq : d.equations) {
        Expr e = deq.eq;
        // xi^i_u and all higher u-derivatives vanish
        std::vector<Atom> subs;
        e.for_each_atom([&](const Atom& a) {
            const auto* u = std::get_if<UnknownDerivAtom>(&a);
            if (!u) return;
            bool is_xi =
                std::find(d.xi_names.begin(), d.xi_names.end(), u->fn) != d.xi_names.end();
            bool has_u =
                std::find(u->args.begin(), u->args.end(), ctx->dep_var()) != u->args.end();
            if (is_xi && has_u) {
                for (const auto& seen : subs)
                    if (atom_cmp(seen, a) == 0) return;
                subs.push_back(a);
            }
        });
        for (const auto& a : subs) e = e.substitute(a, Expr());

        if (pred.eta_affine_in_u) {
            std::vector<UnknownDerivAtom> etas;
            e.for_each_atom([&](const Atom& a) {
                const auto* u = std::get_if<UnknownDerivAtom>(&a);
                if (!u || u->fn != d.eta_name) return;
                for (const auto& seen : etas)
                    if (atom_cmp(Atom(seen), a) == 0) return;
                etas.push_back(*u);
            });
            for (const auto& ed : etas) {
                std::vector<std::string> xargs;
                int ucount = 0;
                for (const auto& arg : ed.args) {
                    if (arg == ctx->dep_var())
                        ++ucount;
                    else
                        xargs.push_back(arg);
                }
                Expr repl;
                if (ucount == 0)
                    repl = Expr::unknown(alpha, xargs) * Expr::jet(MultiIndex{}) +
                           Expr::unknown(beta, xargs);
                else if (ucount == 1)
                    repl = Expr::unknown(alpha, xargs);
                e = e.substitute(ed, repl);
            }
            detail::split_by_u(deq.source, e, parts);
        } else {
            parts[deq.source] += e;
        }
    }
    detail::append_equations(out.equations, parts);
    return out;
}

}  // namespace liesym
