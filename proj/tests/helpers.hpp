#pragma once

#include <random>
#include <string>
#include <vector>

#include "liesym/liesym.hpp"

namespace liesym::testing {

inline ContextPtr plane_ctx() {
    return std::make_shared<Context>(
        Context::make({"x", "y"}, "u", {"k", "p"}, {{"f", {"u"}}}));
}

inline ContextPtr heat_ctx() {
    return std::make_shared<Context>(Context::make({"t", "x"}, "u", {}, {{"f", {"u"}}}));
}

inline Expr parse(const std::string& text, const Context& ctx) {
    return parse_expr(text, ctx);
}

/// Seeded generator of small random expressions over the plane context:
/// sums of products of atoms from a fixed pool with small rational
/// coefficients. Reproducible across runs.
class RandomExprs {
public:
    explicit RandomExprs(unsigned seed) : rng_(seed) {}

    Expr next(const Context& ctx) {
        static const char* pool[] = {"x",      "y",      "u",      "u[x]",  "u[y]",
                                     "u[x,x]", "u[x,y]", "f(u)",   "f[u]",  "exp(u)",
                                     "u^p",    "k",      "x*u[y]", "u*u[x]"};
        int terms = 1 + static_cast<int>(rng_() % 3);
        Expr e;
        for (int t = 0; t < terms; ++t) {
            int num = static_cast<int>(rng_() % 7) - 3;
            if (num == 0) num = 1;
            int den = 1 + static_cast<int>(rng_() % 3);
            Expr term{RationalFunction(Rat(num, den))};
            int factors = 1 + static_cast<int>(rng_() % 2);
            for (int f = 0; f < factors; ++f)
                term *= parse_expr(pool[rng_() % (sizeof(pool) / sizeof(pool[0]))], ctx);
            e += term;
        }
        return e;
    }

    /// A differentiation direction: an independent variable, u, or a jet atom.
    Atom next_direction() {
        switch (rng_() % 5) {
            case 0: return IndepVarAtom{0};
            case 1: return IndepVarAtom{1};
            case 2: return JetAtom{MultiIndex{}};
            case 3: return JetAtom{MultiIndex({0})};
            default: return JetAtom{MultiIndex({0, 1})};
        }
    }

    std::size_t pick(std::size_t n) { return rng_() % n; }

private:
    std::mt19937 rng_;
};

/// Substitutes concrete generator components into a determining-system
/// equation: every unknown-derivative atom of the ansatz functions is
/// replaced by the corresponding derivative of the concrete expression.
inline Expr substitute_ansatz(const Expr& eq, const Context& ctx,
                              const std::vector<std::pair<std::string, Expr>>& values) {
    Expr out = eq;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<UnknownDerivAtom> targets;
        out.for_each_atom([&](const Atom& a) {
            const auto* ud = std::get_if<UnknownDerivAtom>(&a);
            if (!ud) return;
            for (const auto& [name, value] : values)
                if (ud->fn == name) {
                    for (const auto& seen : targets)
                        if (atom_cmp(Atom(seen), a) == 0) return;
                    targets.push_back(*ud);
                    return;
                }
        });
        for (const auto& t : targets) {
            Expr value;
            for (const auto& [name, v] : values)
                if (name == t.fn) value = v;
            for (const auto& arg : t.args) value = value.diff(arg, ctx);
            out = out.substitute(t, value);
            changed = true;
        }
    }
    return out;
}

}  // namespace liesym::testing
