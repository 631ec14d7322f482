#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "liesym/context.hpp"
#include "liesym/errors.hpp"
#include "liesym/multi_index.hpp"
#include "liesym/rational_function.hpp"

namespace liesym {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Atom kinds. The variant order doubles as the canonical kind rank:
/// independent variables < jet atoms (the empty index is u itself)
/// < unknown-function derivatives < symbolic powers < exponentials.
/// Parameter atoms are transient - construction folds them into the
/// coefficient field - so their rank never shows up in a stored monomial.
struct IndepVarAtom {
    int axis;
};
struct JetAtom {
    MultiIndex index;
};
struct ParamAtom {
    int id;
};
struct UnknownDerivAtom {
    std::string fn;
    std::vector<std::string> args;  // sorted multiset of argument names
};
struct PowerAtom {
    ExprPtr base;              // canonical, never a bare unit atom of Power/Exp kind
    RationalFunction exponent;  // never a plain integer
};
struct ExpAtom {
    ExprPtr arg;  // canonical, never zero
};

using Atom =
    std::variant<IndepVarAtom, JetAtom, ParamAtom, UnknownDerivAtom, PowerAtom, ExpAtom>;

int atom_cmp(const Atom& a, const Atom& b);
int expr_cmp(const Expr& a, const Expr& b);

inline bool is_jet(const Atom& a) { return std::holds_alternative<JetAtom>(a); }
inline std::size_t jet_order_of(const Atom& a) { return std::get<JetAtom>(a).index.order(); }

/// Commutative product of atoms to integer powers. Multiplicities are
/// non-zero; negative multiplicities (Laurent factors) arise from division by
/// single monomials. Power/Exp factors always carry multiplicity one.
class Monomial {
public:
    using Factor = std::pair<Atom, int>;

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    static int cmp(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) { return cmp(a, b) == 0; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return cmp(a, b) < 0; }

    std::string to_string(const Context& ctx) const;

private:
    std::vector<Factor> factors_;
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::cmp(a, b) < 0;
    }
};

/// Canonical sparse polynomial: monomials over atoms with coefficients in
/// Q(params). Values are immutable in spirit; every operation returns a new
/// canonical Expr, and structural equality decides value equality within the
/// supported class (exp factors with distinct arguments and opaque symbolic
/// powers are treated as algebraically independent).
class Expr {
public:
    using Terms = std::map<Monomial, RationalFunction, MonomialLess>;

    Expr() = default;
    Expr(long long c) : Expr(RationalFunction(c)) {}
    explicit Expr(const RationalFunction& c) {
        if (!c.is_zero()) terms_.emplace(Monomial(), c);
    }

    static Expr atom(Atom a) { return term(RationalFunction(1), {{std::move(a), 1}}); }
    static Expr indep(int axis) { return atom(IndepVarAtom{axis}); }
    static Expr jet(MultiIndex idx) { return atom(JetAtom{std::move(idx)}); }
    static Expr unknown(std::string fn, std::vector<std::string> deriv_args = {});

    /// Builds coeff * prod(atom^mult) in canonical form. Parameter atoms fold
    /// into the coefficient, same-base powers merge, exp factors merge by
    /// argument addition, and integer powers of compound bases expand; the
    /// result is therefore a general Expr.
    static Expr term(RationalFunction coeff, std::vector<Monomial::Factor> factors);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_coefficient() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    RationalFunction coefficient_value() const {
        if (terms_.empty()) return RationalFunction(0);
        if (!is_coefficient()) throw EngineError("expression is not a pure coefficient");
        return terms_.begin()->second;
    }

    Expr& operator+=(const Expr& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Expr& operator-=(const Expr& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator-(const Expr& a) {
        Expr r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend Expr operator*(const Expr& a, const Expr& b);
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

    friend Expr operator*(const Expr& a, const RationalFunction& c) {
        if (c.is_zero()) return {};
        Expr r;
        for (const auto& [m, k] : a.terms_) r.terms_.emplace(m, k * c);
        return r;
    }
    friend Expr operator*(const RationalFunction& c, const Expr& a) { return a * c; }

    friend bool operator==(const Expr& a, const Expr& b) { return expr_cmp(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return expr_cmp(a, b) != 0; }

    /// Integer power. Negative powers require a single-monomial value.
    Expr pow_int(long long n) const;

    /// b^e for a symbolic (non-integer) exponent; folds nested powers and
    /// exponentials.
    static Expr pow_symbolic(const Expr& base, const RationalFunction& e);

    /// exp(arg); exp(0) folds to 1.
    static Expr exp(const Expr& arg);

    /// Exact partial derivative. Jet atoms are mutually independent
    /// coordinates; unknown-function atoms differentiate by extending their
    /// argument multiset.
    Expr diff(const Atom& v, const Context& ctx) const;
    Expr diff(const std::string& name, const Context& ctx) const;

    /// Replaces every occurrence of a jet or unknown-derivative atom,
    /// including occurrences inside exp arguments and power bases.
    Expr substitute(const Atom& target, const Expr& replacement) const;

    /// Splits e into sum(carrier-monomial * coefficient) where coefficients
    /// contain no carrier atoms. A carrier atom inside an exp argument or a
    /// symbolic-power payload, or to a negative power, is not polynomial and
    /// raises an error.
    std::map<Monomial, Expr, MonomialLess> collect(
        const std::function<bool(const Atom&)>& carrier) const;

    /// Visits every atom; with nested=true also walks exp arguments and
    /// power bases.
    void for_each_atom(const std::function<void(const Atom&)>& f, bool nested = true) const;
    bool contains_atom_if(const std::function<bool(const Atom&)>& pred,
                          bool nested = true) const;

    /// Max jet order present (nested payloads included); 0 when only u or no
    /// jet atom occurs, -1 when none at all.
    int jet_order() const;

    std::vector<MultiIndex> jet_indices() const;

    /// Rebuilds the canonical form from scratch (used by the idempotence
    /// property test).
    Expr renormalized() const;

    std::string to_string(const Context& ctx) const;

private:
    Terms terms_;

    void add_term(const Monomial& m, const RationalFunction& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    static bool is_unit_single_atom(const Expr& e, Atom& out);
};

// ---------------------------------------------------------------------------
// ordering

inline int atom_cmp(const Atom& a, const Atom& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    switch (a.index()) {
        case 0: {
            int x = std::get<IndepVarAtom>(a).axis, y = std::get<IndepVarAtom>(b).axis;
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case 1:
            return MultiIndex::cmp(std::get<JetAtom>(a).index, std::get<JetAtom>(b).index);
        case 2: {
            int x = std::get<ParamAtom>(a).id, y = std::get<ParamAtom>(b).id;
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case 3: {
            const auto& x = std::get<UnknownDerivAtom>(a);
            const auto& y = std::get<UnknownDerivAtom>(b);
            if (x.fn != y.fn) return x.fn < y.fn ? -1 : 1;
            if (x.args != y.args) return x.args < y.args ? -1 : 1;
            return 0;
        }
        case 4: {
            const auto& x = std::get<PowerAtom>(a);
            const auto& y = std::get<PowerAtom>(b);
            int c = expr_cmp(*x.base, *y.base);
            if (c != 0) return c;
            return RationalFunction::cmp(x.exponent, y.exponent);
        }
        default: {
            const auto& x = std::get<ExpAtom>(a);
            const auto& y = std::get<ExpAtom>(b);
            return expr_cmp(*x.arg, *y.arg);
        }
    }
}

inline int Monomial::cmp(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = atom_cmp(a.factors_[i].first, b.factors_[i].first);
        if (c != 0) return c;
        if (a.factors_[i].second != b.factors_[i].second)
            return a.factors_[i].second < b.factors_[i].second ? -1 : 1;
    }
    if (a.factors_.size() != b.factors_.size())
        return a.factors_.size() < b.factors_.size() ? -1 : 1;
    return 0;
}

inline int expr_cmp(const Expr& a, const Expr& b) {
    auto i = a.terms().begin(), j = b.terms().begin();
    for (; i != a.terms().end() && j != b.terms().end(); ++i, ++j) {
        int c = Monomial::cmp(i->first, j->first);
        if (c != 0) return c;
        c = RationalFunction::cmp(i->second, j->second);
        if (c != 0) return c;
    }
    if (i != a.terms().end()) return 1;
    if (j != b.terms().end()) return -1;
    return 0;
}

// ---------------------------------------------------------------------------
// construction

inline Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end(), [](const Factor& x, const Factor& y) {
        return atom_cmp(x.first, y.first) < 0;
    });
    std::vector<Factor> merged;
    for (auto& f : factors_) {
        if (f.second == 0) continue;
        if (!merged.empty() && atom_cmp(merged.back().first, f.first) == 0) {
            merged.back().second += f.second;
            if (merged.back().second == 0) merged.pop_back();
        } else {
            merged.push_back(std::move(f));
        }
    }
    factors_ = std::move(merged);
}

inline Expr Expr::unknown(std::string fn, std::vector<std::string> deriv_args) {
    std::sort(deriv_args.begin(), deriv_args.end());
    return atom(UnknownDerivAtom{std::move(fn), std::move(deriv_args)});
}

inline bool Expr::is_unit_single_atom(const Expr& e, Atom& out) {
    if (e.terms_.size() != 1) return false;
    const auto& [m, c] = *e.terms_.begin();
    if (!c.is_one() || m.factors().size() != 1 || m.factors()[0].second != 1) return false;
    out = m.factors()[0].first;
    return true;
}

inline Expr Expr::term(RationalFunction coeff, std::vector<Monomial::Factor> factors) {
    if (coeff.is_zero()) return {};

    bool special = false;
    for (const auto& [a, m] : factors)
        if (std::holds_alternative<ParamAtom>(a) || std::holds_alternative<PowerAtom>(a) ||
            std::holds_alternative<ExpAtom>(a)) {
            special = true;
            break;
        }
    if (!special) {
        Monomial mono(std::move(factors));
        Expr r;
        r.terms_.emplace(std::move(mono), std::move(coeff));
        return r;
    }

    std::vector<Monomial::Factor> plain;
    std::map<Expr, RationalFunction, bool (*)(const Expr&, const Expr&)> sym_pows(
        [](const Expr& x, const Expr& y) { return expr_cmp(x, y) < 0; });
    Expr exp_arg;

    for (auto& [a, m] : factors) {
        if (m == 0) continue;
        if (std::holds_alternative<ParamAtom>(a)) {
            coeff *= RationalFunction::variable(std::get<ParamAtom>(a).id).pow_int(m);
        } else if (std::holds_alternative<PowerAtom>(a)) {
            const auto& p = std::get<PowerAtom>(a);
            sym_pows[*p.base] += RationalFunction(m) * p.exponent;
        } else if (std::holds_alternative<ExpAtom>(a)) {
            exp_arg += RationalFunction(m) * *std::get<ExpAtom>(a).arg;
        } else {
            plain.push_back({std::move(a), m});
        }
    }

    Monomial plain_mono(std::move(plain));
    std::vector<Monomial::Factor> out = plain_mono.factors();
    std::vector<Expr> expansions;

    for (auto& [base, e] : sym_pows) {
        RationalFunction exponent = e;
        Atom base_atom;
        bool unit = is_unit_single_atom(base, base_atom);
        if (unit) {
            // absorb a plain occurrence of the same base into the exponent
            for (auto it = out.begin(); it != out.end(); ++it) {
                if (atom_cmp(it->first, base_atom) == 0) {
                    exponent += RationalFunction(it->second);
                    out.erase(it);
                    break;
                }
            }
        }
        if (exponent.is_zero()) continue;
        if (exponent.is_integer()) {
            long long n = exponent.integer_value();
            if (unit)
                out.push_back({base_atom, static_cast<int>(n)});
            else
                expansions.push_back(base.pow_int(n));
        } else if (unit && std::holds_alternative<ExpAtom>(base_atom)) {
            exp_arg += exponent * *std::get<ExpAtom>(base_atom).arg;
        } else if (unit && std::holds_alternative<PowerAtom>(base_atom)) {
            const auto& inner = std::get<PowerAtom>(base_atom);
            expansions.push_back(pow_symbolic(*inner.base, inner.exponent * exponent));
        } else {
            out.push_back({PowerAtom{std::make_shared<Expr>(base), exponent}, 1});
        }
    }

    if (!exp_arg.is_zero())
        out.push_back({ExpAtom{std::make_shared<Expr>(std::move(exp_arg))}, 1});

    Expr r;
    r.terms_.emplace(Monomial(std::move(out)), std::move(coeff));
    for (const auto& e : expansions) r = r * e;
    return r;
}

inline Expr operator*(const Expr& a, const Expr& b) {
    Expr r;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            std::vector<Monomial::Factor> fs = ma.factors();
            fs.insert(fs.end(), mb.factors().begin(), mb.factors().end());
            r += Expr::term(ca * cb, std::move(fs));
        }
    }
    return r;
}

inline Expr Expr::pow_int(long long n) const {
    if (n == 0) return Expr(1);
    Expr base = *this;
    if (n < 0) {
        if (terms_.size() != 1)
            throw EngineError("negative power of a non-monomial expression");
        const auto& [m, c] = *terms_.begin();
        std::vector<Monomial::Factor> inv;
        for (const auto& [a, k] : m.factors()) inv.push_back({a, -k});
        base = term(c.inverse(), std::move(inv));
        n = -n;
    }
    Expr r(1);
    unsigned long long k = static_cast<unsigned long long>(n);
    while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

inline Expr Expr::pow_symbolic(const Expr& base, const RationalFunction& e) {
    if (e.is_zero()) return Expr(1);
    if (e.is_integer()) return base.pow_int(e.integer_value());
    if (base.is_zero()) return {};
    Atom a;
    if (is_unit_single_atom(base, a)) {
        if (std::holds_alternative<ExpAtom>(a)) return exp(e * *std::get<ExpAtom>(a).arg);
        if (std::holds_alternative<PowerAtom>(a)) {
            const auto& p = std::get<PowerAtom>(a);
            return pow_symbolic(*p.base, p.exponent * e);
        }
        return term(RationalFunction(1), {{PowerAtom{std::make_shared<Expr>(base), e}, 1}});
    }
    if (base.terms().size() == 1) {
        // single monomial with a non-unit shape: u^2^p etc. handled via term()
        const auto& [m, c] = *base.terms().begin();
        if (c.is_one() && m.factors().size() == 1) {
            const auto& [atom_, mult] = m.factors()[0];
            return term(RationalFunction(1),
                        {{PowerAtom{std::make_shared<Expr>(Expr::atom(atom_)),
                                    e * RationalFunction(mult)},
                          1}});
        }
    }
    return term(RationalFunction(1), {{PowerAtom{std::make_shared<Expr>(base), e}, 1}});
}

inline Expr Expr::exp(const Expr& arg) {
    if (arg.is_zero()) return Expr(1);
    return term(RationalFunction(1), {{ExpAtom{std::make_shared<Expr>(arg)}, 1}});
}

// ---------------------------------------------------------------------------
// calculus

namespace detail {

inline std::optional<std::string> arg_name_of(const Atom& v, const Context& ctx) {
    if (std::holds_alternative<IndepVarAtom>(v))
        return ctx.indep_vars().at(static_cast<std::size_t>(std::get<IndepVarAtom>(v).axis));
    if (std::holds_alternative<JetAtom>(v) && std::get<JetAtom>(v).index.empty())
        return ctx.dep_var();
    return std::nullopt;
}

}  // namespace detail

inline Expr atom_derivative(const Atom& a, const Atom& v, const Context& ctx) {
    switch (a.index()) {
        case 0:
            return std::holds_alternative<IndepVarAtom>(v) &&
                           std::get<IndepVarAtom>(a).axis == std::get<IndepVarAtom>(v).axis
                       ? Expr(1)
                       : Expr();
        case 1:
            return std::holds_alternative<JetAtom>(v) &&
                           std::get<JetAtom>(a).index == std::get<JetAtom>(v).index
                       ? Expr(1)
                       : Expr();
        case 2:
            return Expr();  // parameter atoms fold into coefficients before this
        case 3: {
            const auto& u = std::get<UnknownDerivAtom>(a);
            auto name = detail::arg_name_of(v, ctx);
            if (!name) return Expr();
            const auto& declared = ctx.unknown_args(u.fn);
            if (std::find(declared.begin(), declared.end(), *name) == declared.end())
                return Expr();
            std::vector<std::string> args = u.args;
            args.push_back(*name);
            return Expr::unknown(u.fn, std::move(args));
        }
        case 4: {
            const auto& p = std::get<PowerAtom>(a);
            if (std::holds_alternative<ParamAtom>(v)) {
                int id = std::get<ParamAtom>(v).id;
                if (!p.exponent.derivative(id).is_zero())
                    throw EngineError(
                        "derivative of a symbolic power with respect to an exponent "
                        "parameter is outside the expression class");
            }
            Expr db = p.base->diff(v, ctx);
            if (db.is_zero()) return {};
            return Expr::pow_symbolic(*p.base, p.exponent - RationalFunction(1)) * p.exponent *
                   db;
        }
        default: {
            const auto& x = std::get<ExpAtom>(a);
            Expr da = x.arg->diff(v, ctx);
            if (da.is_zero()) return {};
            return da * Expr::atom(a);
        }
    }
}

inline Expr Expr::diff(const Atom& v, const Context& ctx) const {
    Expr out;
    const ParamAtom* vp = std::get_if<ParamAtom>(&v);
    for (const auto& [mono, c] : terms_) {
        if (vp) {
            RationalFunction dc = c.derivative(vp->id);
            if (!dc.is_zero()) out += term(dc, mono.factors());
        }
        const auto& fs = mono.factors();
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Expr da = atom_derivative(fs[i].first, v, ctx);
            if (da.is_zero()) continue;
            std::vector<Monomial::Factor> rest;
            rest.reserve(fs.size());
            for (std::size_t j = 0; j < fs.size(); ++j) {
                if (j == i) {
                    if (fs[j].second != 1) rest.push_back({fs[j].first, fs[j].second - 1});
                } else {
                    rest.push_back(fs[j]);
                }
            }
            out += term(c * RationalFunction(fs[i].second), std::move(rest)) * da;
        }
    }
    return out;
}

inline Expr Expr::diff(const std::string& name, const Context& ctx) const {
    int axis = ctx.axis_of(name);
    if (axis >= 0) return diff(IndepVarAtom{axis}, ctx);
    if (ctx.is_dep(name)) return diff(JetAtom{MultiIndex{}}, ctx);
    int pid = ctx.param_id(name);
    if (pid >= 0) return diff(ParamAtom{pid}, ctx);
    throw EngineError("cannot differentiate with respect to '" + name + "'");
}

inline void Expr::for_each_atom(const std::function<void(const Atom&)>& f, bool nested) const {
    for (const auto& [mono, c] : terms_) {
        for (const auto& [a, m] : mono.factors()) {
            f(a);
            if (!nested) continue;
            if (const auto* p = std::get_if<PowerAtom>(&a)) p->base->for_each_atom(f, true);
            if (const auto* x = std::get_if<ExpAtom>(&a)) x->arg->for_each_atom(f, true);
        }
    }
}

inline bool Expr::contains_atom_if(const std::function<bool(const Atom&)>& pred,
                                   bool nested) const {
    bool found = false;
    for_each_atom(
        [&](const Atom& a) {
            if (pred(a)) found = true;
        },
        nested);
    return found;
}

inline Expr Expr::substitute(const Atom& target, const Expr& replacement) const {
    if (!std::holds_alternative<JetAtom>(target) &&
        !std::holds_alternative<UnknownDerivAtom>(target))
        throw EngineError("substitute: target must be a jet or unknown-derivative atom");
    Expr out;
    for (const auto& [mono, c] : terms_) {
        bool touched = false;
        for (const auto& [a, m] : mono.factors()) {
            if (atom_cmp(a, target) == 0) {
                touched = true;
                break;
            }
            if (const auto* p = std::get_if<PowerAtom>(&a)) {
                if (p->base->contains_atom_if(
                        [&](const Atom& x) { return atom_cmp(x, target) == 0; })) {
                    touched = true;
                    break;
                }
            }
            if (const auto* x = std::get_if<ExpAtom>(&a)) {
                if (x->arg->contains_atom_if(
                        [&](const Atom& y) { return atom_cmp(y, target) == 0; })) {
                    touched = true;
                    break;
                }
            }
        }
        if (!touched) {
            out.add_term(mono, c);
            continue;
        }
        Expr piece{c};
        for (const auto& [a, m] : mono.factors()) {
            if (atom_cmp(a, target) == 0) {
                piece *= replacement.pow_int(m);
            } else if (const auto* p = std::get_if<PowerAtom>(&a)) {
                Expr nb = p->base->substitute(target, replacement);
                piece *= pow_symbolic(nb, p->exponent * RationalFunction(m));
            } else if (const auto* x = std::get_if<ExpAtom>(&a)) {
                Expr na = x->arg->substitute(target, replacement);
                piece *= exp(na).pow_int(m);
            } else {
                piece *= term(RationalFunction(1), {{a, m}});
            }
        }
        out += piece;
    }
    return out;
}

inline std::map<Monomial, Expr, MonomialLess> Expr::collect(
    const std::function<bool(const Atom&)>& carrier) const {
    std::map<Monomial, Expr, MonomialLess> out;
    for (const auto& [mono, c] : terms_) {
        std::vector<Monomial::Factor> car, rest;
        for (const auto& [a, m] : mono.factors()) {
            if (carrier(a)) {
                if (m < 0) throw EngineError("non-polynomial carrier");
                car.push_back({a, m});
                continue;
            }
            const Expr* payload = nullptr;
            if (const auto* p = std::get_if<PowerAtom>(&a)) payload = p->base.get();
            if (const auto* x = std::get_if<ExpAtom>(&a)) payload = x->arg.get();
            if (payload && payload->contains_atom_if(carrier))
                throw EngineError("non-polynomial carrier");
            rest.push_back({a, m});
        }
        out[Monomial(std::move(car))] += term(c, std::move(rest));
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

inline int Expr::jet_order() const {
    int best = -1;
    for_each_atom([&](const Atom& a) {
        if (is_jet(a)) best = std::max(best, static_cast<int>(jet_order_of(a)));
    });
    return best;
}

inline std::vector<MultiIndex> Expr::jet_indices() const {
    std::vector<MultiIndex> out;
    for_each_atom([&](const Atom& a) {
        if (!is_jet(a)) return;
        const auto& idx = std::get<JetAtom>(a).index;
        for (const auto& k : out)
            if (k == idx) return;
        out.push_back(idx);
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline Expr Expr::renormalized() const {
    Expr r;
    for (const auto& [m, c] : terms_) {
        std::vector<Monomial::Factor> fs;
        for (const auto& [a, mult] : m.factors()) {
            if (const auto* p = std::get_if<PowerAtom>(&a)) {
                fs.push_back({PowerAtom{std::make_shared<Expr>(p->base->renormalized()),
                                        p->exponent},
                              mult});
            } else if (const auto* x = std::get_if<ExpAtom>(&a)) {
                fs.push_back(
                    {ExpAtom{std::make_shared<Expr>(x->arg->renormalized())}, mult});
            } else {
                fs.push_back({a, mult});
            }
        }
        r += term(c, std::move(fs));
    }
    return r;
}

// ---------------------------------------------------------------------------
// printing

namespace detail {

inline std::string exponent_to_string(const RationalFunction& e,
                                      const std::vector<std::string>& params) {
    // bare parameter or bare integer prints without parentheses
    if (e.is_integer()) return std::to_string(e.integer_value());
    const ParamPoly& n = e.num();
    if (e.den().is_constant() && e.den().constant_value() == 1 && n.term_count() == 1 &&
        n.leading_coeff() == 1 && n.leading_key().size() == 1 &&
        n.leading_key()[0].second == 1)
        return params.at(static_cast<std::size_t>(n.leading_key()[0].first));
    return "(" + e.to_string(params) + ")";
}

}  // namespace detail

inline std::string atom_to_string(const Atom& a, const Context& ctx) {
    switch (a.index()) {
        case 0:
            return ctx.indep_vars().at(
                static_cast<std::size_t>(std::get<IndepVarAtom>(a).axis));
        case 1: {
            const auto& idx = std::get<JetAtom>(a).index;
            if (idx.empty()) return ctx.dep_var();
            std::string s = ctx.dep_var() + "[";
            for (std::size_t i = 0; i < idx.axes().size(); ++i) {
                if (i) s += ",";
                s += ctx.indep_vars().at(static_cast<std::size_t>(idx.axes()[i]));
            }
            return s + "]";
        }
        case 2:
            return ctx.params().at(static_cast<std::size_t>(std::get<ParamAtom>(a).id));
        case 3: {
            const auto& u = std::get<UnknownDerivAtom>(a);
            if (u.args.empty()) {
                std::string s = u.fn + "(";
                const auto& declared = ctx.unknown_args(u.fn);
                for (std::size_t i = 0; i < declared.size(); ++i) {
                    if (i) s += ",";
                    s += declared[i];
                }
                return s + ")";
            }
            std::string s = u.fn + "[";
            for (std::size_t i = 0; i < u.args.size(); ++i) {
                if (i) s += ",";
                s += u.args[i];
            }
            return s + "]";
        }
        case 4: {
            const auto& p = std::get<PowerAtom>(a);
            std::string b;
            // unit single atoms print bare, everything else parenthesized
            if (p.base->term_count() == 1) {
                const auto& [m, c] = *p.base->terms().begin();
                if (c.is_one() && m.factors().size() == 1 && m.factors()[0].second == 1 &&
                    !std::holds_alternative<PowerAtom>(m.factors()[0].first) &&
                    !std::holds_alternative<ExpAtom>(m.factors()[0].first)) {
                    b = atom_to_string(m.factors()[0].first, ctx);
                } else {
                    b = "(" + p.base->to_string(ctx) + ")";
                }
            } else {
                b = "(" + p.base->to_string(ctx) + ")";
            }
            return b + "^" + detail::exponent_to_string(p.exponent, ctx.params());
        }
        default:
            return "exp(" + std::get<ExpAtom>(a).arg->to_string(ctx) + ")";
    }
}

inline std::string Monomial::to_string(const Context& ctx) const {
    if (factors_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += "*";
        s += atom_to_string(factors_[i].first, ctx);
        if (factors_[i].second != 1) s += "^" + std::to_string(factors_[i].second);
    }
    return s;
}

inline std::string Expr::to_string(const Context& ctx) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        bool neg = c.leading_negative();
        RationalFunction mag = neg ? -c : c;
        std::string body;
        if (mono.empty())
            body = mag.to_string(ctx.params(), false);
        else if (mag.is_one())
            body = mono.to_string(ctx);
        else
            body = mag.to_string(ctx.params(), true) + "*" + mono.to_string(ctx);
        if (first) {
            s = (neg ? "-" : "") + body;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + body;
        }
    }
    return s;
}

}  // namespace liesym
