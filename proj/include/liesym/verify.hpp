#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "liesym/detsys.hpp"
#include "liesym/theorem.hpp"

namespace liesym {

/// An oriented constraint on unknown functions, lhs -> rhs, e.g.
/// beta[x,x] -> -beta[y,y] for Laplace(beta) = 0. The lhs must not occur in
/// the rhs, and no lhs may be a derivative of another lhs.
struct SideCondition {
    UnknownDerivAtom lhs;
    Expr rhs;

    /// Text form "<lhs>-><rhs>" in the expression grammar.
    static SideCondition parse(std::string_view text, const Context& ctx) {
        std::size_t arrow = text.find("->");
        if (arrow == std::string_view::npos)
            throw EngineError("side condition must have the form lhs->rhs");
        Expr l = parse_expr(text.substr(0, arrow), ctx);
        Expr r = parse_expr(text.substr(arrow + 2), ctx);
        if (l.term_count() != 1)
            throw EngineError("side-condition lhs must be a single derivative atom");
        const auto& [mono, c] = *l.terms().begin();
        if (!c.is_one() || mono.factors().size() != 1 || mono.factors()[0].second != 1 ||
            !std::holds_alternative<UnknownDerivAtom>(mono.factors()[0].first))
            throw EngineError("side-condition lhs must be a single derivative atom");
        const auto& atom = std::get<UnknownDerivAtom>(mono.factors()[0].first);
        if (r.contains_atom_if([&](const Atom& a) { return atom_cmp(a, atom) == 0; }))
            throw EngineError("side-condition lhs occurs in its own rhs");
        return {atom, r};
    }

    std::string to_string(const Context& ctx) const {
        return atom_to_string(lhs, ctx) + " -> " + rhs.to_string(ctx);
    }
};

/// Rewrite system obtained by closing side conditions under total
/// differentiation up to a derivative order. Rules stay in solved form: no
/// lhs atom occurs in any rhs, so reduction is a straight substitution pass
/// and normal forms are unique. When two derivation paths disagree on one
/// atom, the difference is oriented into a derived rule; an unorientable
/// nonzero difference reports conflicting conditions.
class ConstraintClosure {
public:
    static ConstraintClosure build(const std::vector<SideCondition>& conds, int max_order,
                                   const Context& ctx) {
        for (std::size_t i = 0; i < conds.size(); ++i)
            for (std::size_t j = 0; j < conds.size(); ++j) {
                if (i == j || conds[i].lhs.fn != conds[j].lhs.fn) continue;
                if (multiset_contains(conds[j].lhs.args, conds[i].lhs.args))
                    throw EngineError("conditions are not orientable: " + conds[j].lhs.fn +
                                      " derivatives overlap");
            }

        ConstraintClosure c;
        c.max_order_ = max_order;
        // each pending equation carries the atom its derivation rule would
        // naturally solve for; orientation falls back to the largest atom
        std::deque<std::pair<Expr, Atom>> pending;
        for (const auto& sc : conds)
            pending.push_back({Expr::atom(sc.lhs) - sc.rhs, sc.lhs});

        while (!pending.empty()) {
            auto [raw, suggested] = pending.front();
            pending.pop_front();
            Expr eq = c.reduce(raw);
            if (eq.is_zero()) continue;

            Atom pivot;
            Expr coeff;
            if (!pick_pivot(eq, suggested, pivot, coeff))
                throw EngineError("conflicting conditions: a derived constraint cannot "
                                  "be oriented");
            Expr rest = eq - coeff * Expr::atom(pivot);
            Expr rhs = divide_by_principal(-rest, coeff);

            // keep every rhs reduced with respect to the new rule
            for (auto& [l, r] : c.rules_) r = r.substitute(pivot, rhs);
            c.rules_.emplace_back(pivot, rhs);

            const auto& u = std::get<UnknownDerivAtom>(pivot);
            if (static_cast<int>(u.args.size()) < max_order) {
                for (const auto& argname : ctx.unknown_args(u.fn)) {
                    std::vector<std::string> args = u.args;
                    args.push_back(argname);
                    std::sort(args.begin(), args.end());
                    UnknownDerivAtom lhs{u.fn, args};
                    pending.push_back(
                        {Expr::atom(lhs) - rhs.diff(argname, ctx), Atom(lhs)});
                }
            }
        }
        return c;
    }

    Expr reduce(Expr e) const {
        for (int pass = 0; pass < 4; ++pass) {
            bool changed = false;
            for (const auto& rule : rules_) {
                const Atom& lhs = rule.first;
                if (e.contains_atom_if([&](const Atom& a) { return atom_cmp(a, lhs) == 0; })) {
                    e = e.substitute(lhs, rule.second);
                    changed = true;
                }
            }
            if (!changed) return e;
        }
        return e;
    }

    const std::vector<std::pair<Atom, Expr>>& rules() const { return rules_; }
    int max_order() const { return max_order_; }

private:
    std::vector<std::pair<Atom, Expr>> rules_;
    int max_order_ = 0;

    static bool multiset_contains(const std::vector<std::string>& big,
                                  const std::vector<std::string>& small) {
        // both sorted
        std::size_t i = 0;
        for (const auto& s : small) {
            while (i < big.size() && big[i] < s) ++i;
            if (i >= big.size() || big[i] != s) return false;
            ++i;
        }
        return true;
    }

    /// Prefers the suggested atom (the differentiated lhs of the parent
    /// rule); otherwise the largest unknown-derivative atom that occurs
    /// linearly with an invertible total coefficient.
    static bool pick_pivot(const Expr& eq, const Atom& suggested, Atom& pivot, Expr& coeff) {
        std::vector<Atom> candidates;
        eq.for_each_atom(
            [&](const Atom& a) {
                if (!std::holds_alternative<UnknownDerivAtom>(a)) return;
                for (const auto& seen : candidates)
                    if (atom_cmp(seen, a) == 0) return;
                candidates.push_back(a);
            },
            /*nested=*/false);
        std::sort(candidates.begin(), candidates.end(),
                  [&](const Atom& a, const Atom& b) {
                      bool sa = atom_cmp(a, suggested) == 0;
                      bool sb = atom_cmp(b, suggested) == 0;
                      if (sa != sb) return sa;
                      return atom_cmp(a, b) > 0;
                  });
        for (const auto& a : candidates) {
            bool linear = true;
            Expr c;
            for (const auto& [mono, k] : eq.terms()) {
                std::vector<Monomial::Factor> rest;
                int mult = 0;
                for (const auto& [atom_, m] : mono.factors()) {
                    if (atom_cmp(atom_, a) == 0)
                        mult = m;
                    else
                        rest.push_back({atom_, m});
                }
                if (mult == 0) continue;
                if (mult != 1) {
                    linear = false;
                    break;
                }
                c += Expr::term(k, std::move(rest));
            }
            if (!linear || c.is_zero()) continue;
            if (c.contains_atom_if([&](const Atom& x) { return atom_cmp(x, a) == 0; }))
                continue;
            if (c.is_coefficient() || c.term_count() == 1) {
                pivot = a;
                coeff = c;
                return true;
            }
        }
        return false;
    }
};

/// Outcome of a symmetry check. The verdict is exactly is_zero(residual);
/// a nonzero residual is the actionable diagnostic and is reported raw. The
/// checked generator and equation ride along for reporting.
struct VerificationReport {
    bool symmetry = false;
    Expr residual;
    std::vector<SideCondition> conditions_used;
    std::vector<Expr> generator_components;
    Expr pde;
};

inline constexpr int kMaxClosureOrder = 12;

/// Decides whether S generates a Lie point symmetry of P, possibly modulo
/// side conditions on unknown functions (a generator family is verified for
/// every solution of the side system at once). With a symbolic unknown f in
/// P, a positive verdict means: a symmetry for every f.
inline VerificationReport is_symmetry(const VectorField& s, const SemilinearPDE& p,
                                      const std::vector<SideCondition>& conds = {}) {
    Expr r = symmetry_residual(s, p);
    if (!conds.empty()) {
        std::vector<std::string> fns;
        for (const auto& sc : conds) {
            fns.push_back(sc.lhs.fn);
            sc.rhs.for_each_atom([&](const Atom& a) {
                if (const auto* u = std::get_if<UnknownDerivAtom>(&a)) fns.push_back(u->fn);
            });
        }
        int needed = 0;
        r.for_each_atom([&](const Atom& a) {
            const auto* u = std::get_if<UnknownDerivAtom>(&a);
            if (!u) return;
            if (std::find(fns.begin(), fns.end(), u->fn) != fns.end())
                needed = std::max(needed, static_cast<int>(u->args.size()));
        });
        if (needed > kMaxClosureOrder)
            throw EngineError("insufficient closure order: residual needs order " +
                              std::to_string(needed));
        ConstraintClosure closure = ConstraintClosure::build(conds, needed, *s.ctx);
        r = closure.reduce(r);
    }
    std::vector<Expr> components = s.xi;
    components.push_back(s.eta);
    return {r.is_zero(), r, conds, std::move(components), p.full};
}

/// Commutator [S1,S2]: components S1(xi2^i) - S2(xi1^i) and
/// S1(eta2) - S2(eta1), the generators acting as first-order operators on
/// (x, u)-space.
inline VectorField lie_bracket(const VectorField& s1, const VectorField& s2) {
    if (!s1.ctx->compatible_with(*s2.ctx))
        throw EngineError("bracket of fields over different variables");
    std::vector<Expr> xi;
    for (std::size_t i = 0; i < s1.xi.size(); ++i)
        xi.push_back(s1.apply_to(s2.xi[i]) - s2.apply_to(s1.xi[i]));
    Expr eta = s1.apply_to(s2.eta) - s2.apply_to(s1.eta);
    return VectorField(s1.ctx, std::move(xi), std::move(eta));
}

}  // namespace liesym
