#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liesym/errors.hpp"
#include "liesym/rational.hpp"

namespace liesym {

/// Sparse multivariate polynomial over Q. Variables are identified by small
/// non-negative ids; the surrounding code maps ids to parameter names (and,
/// for the certification solver, to independent-variable names).
///
/// Monomial keys are sorted (id, exponent>0) vectors ordered graded-lex, so
/// the map's last entry is the leading term.
class ParamPoly {
public:
    using Key = std::vector<std::pair<int, int>>;

    struct KeyLess {
        static int cmp(const Key& a, const Key& b) {
            long long da = 0, db = 0;
            for (const auto& [v, e] : a) da += e;
            for (const auto& [v, e] : b) db += e;
            if (da != db) return da < db ? -1 : 1;
            // lex with variables ordered by ascending id; higher exponent on
            // the smaller variable wins
            std::size_t i = 0, j = 0;
            while (i < a.size() || j < b.size()) {
                int va = i < a.size() ? a[i].first : INT32_MAX;
                int vb = j < b.size() ? b[j].first : INT32_MAX;
                int v = std::min(va, vb);
                int ea = (va == v) ? a[i].second : 0;
                int eb = (vb == v) ? b[j].second : 0;
                if (ea != eb) return ea < eb ? -1 : 1;
                if (va == v) ++i;
                if (vb == v) ++j;
            }
            return 0;
        }
        bool operator()(const Key& a, const Key& b) const { return cmp(a, b) < 0; }
    };

    using Terms = std::map<Key, Rat, KeyLess>;

    ParamPoly() = default;
    explicit ParamPoly(const Rat& c) {
        if (c != 0) terms_[{}] = c;
    }
    explicit ParamPoly(long long c) : ParamPoly(Rat(c)) {}

    static ParamPoly variable(int id, int exp = 1) {
        ParamPoly p;
        if (exp != 0)
            p.terms_[{{id, exp}}] = 1;
        else
            p.terms_[{}] = 1;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        if (!is_constant()) throw EngineError("ParamPoly: not a constant");
        return terms_.begin()->second;
    }

    const Terms& terms() const { return terms_; }

    const Key& leading_key() const { return terms_.rbegin()->first; }
    const Rat& leading_coeff() const { return terms_.rbegin()->second; }

    ParamPoly& operator+=(const ParamPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    ParamPoly& operator-=(const ParamPoly& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator-(const ParamPoly& a) {
        ParamPoly r;
        for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
        return r;
    }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        ParamPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(mul_keys(ka, kb), ca * cb);
        return r;
    }
    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }
    ParamPoly& operator*=(const Rat& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    ParamPoly pow(unsigned n) const {
        ParamPoly r(1);
        ParamPoly base = *this;
        while (n) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return cmp(a, b) != 0; }

    static int cmp(const ParamPoly& a, const ParamPoly& b) {
        auto i = a.terms_.begin(), j = b.terms_.begin();
        for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
            int c = KeyLess::cmp(i->first, j->first);
            if (c != 0) return c;
            if (i->second != j->second) return i->second < j->second ? -1 : 1;
        }
        if (i != a.terms_.end()) return 1;
        if (j != b.terms_.end()) return -1;
        return 0;
    }

    int degree(int var) const {
        int d = 0;
        for (const auto& [k, c] : terms_)
            for (const auto& [v, e] : k)
                if (v == var) d = std::max(d, e);
        return d;
    }

    std::vector<int> variables() const {
        std::vector<int> vs;
        for (const auto& [k, c] : terms_)
            for (const auto& [v, e] : k)
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        return vs;
    }

    /// Coefficient of var^deg, as a polynomial in the remaining variables.
    ParamPoly coeff_of(int var, int deg) const {
        ParamPoly r;
        for (const auto& [k, c] : terms_) {
            int e = 0;
            Key rest;
            for (const auto& [v, ex] : k) {
                if (v == var)
                    e = ex;
                else
                    rest.push_back({v, ex});
            }
            if (e == deg) r.add_term(rest, c);
        }
        return r;
    }

    ParamPoly derivative(int var) const {
        ParamPoly r;
        for (const auto& [k, c] : terms_) {
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k[i].first != var) continue;
                Key nk = k;
                int e = nk[i].second;
                if (e == 1)
                    nk.erase(nk.begin() + i);
                else
                    nk[i].second = e - 1;
                r.add_term(nk, c * e);
            }
        }
        return r;
    }

    /// Exact division; throws if the division leaves a remainder.
    static ParamPoly exact_div(const ParamPoly& a, const ParamPoly& b) {
        if (b.is_zero()) throw EngineError("ParamPoly: division by zero");
        if (a.is_zero()) return {};
        ParamPoly q, r = a;
        while (!r.is_zero()) {
            Key t;
            if (!div_keys(r.leading_key(), b.leading_key(), t))
                throw EngineError("ParamPoly: inexact division");
            Rat c = r.leading_coeff() / b.leading_coeff();
            ParamPoly m;
            m.terms_[t] = c;
            q += m;
            r -= m * b;
        }
        return q;
    }

    /// Monic gcd over Q[vars].
    static ParamPoly gcd(const ParamPoly& a, const ParamPoly& b) {
        if (a.is_zero()) return monic(b);
        if (b.is_zero()) return monic(a);
        if (a.is_constant() || b.is_constant()) return ParamPoly(1);
        std::vector<int> vs = a.variables();
        for (int v : b.variables())
            if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
        int v = *std::min_element(vs.begin(), vs.end());

        ParamPoly ca = content(a, v), cb = content(b, v);
        ParamPoly pa = exact_div(a, ca), pb = exact_div(b, cb);
        ParamPoly cg = gcd(ca, cb);

        if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
        while (!pb.is_zero() && pb.degree(v) > 0) {
            ParamPoly r = prem(pa, pb, v);
            pa = pb;
            pb = r.is_zero() ? r : exact_div(r, content(r, v));
        }
        ParamPoly g = pb.is_zero() ? pa : ParamPoly(1);
        return monic(cg * g);
    }

    static ParamPoly monic(const ParamPoly& p) {
        if (p.is_zero()) return p;
        ParamPoly r = p;
        Rat lc = p.leading_coeff();
        for (auto& [k, c] : r.terms_) c /= lc;
        return r;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        // print leading term first: iterate descending
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rat c = it->second;
            std::string mono;
            for (const auto& [v, e] : it->first) {
                if (!mono.empty()) mono += "*";
                mono += names.at(static_cast<std::size_t>(v));
                if (e != 1) mono += "^" + std::to_string(e);
            }
            bool neg = c < 0;
            Rat mag = neg ? Rat(-c) : c;
            std::string piece;
            if (mono.empty())
                piece = rat_to_string(mag);
            else if (mag == 1)
                piece = mono;
            else
                piece = rat_to_string(mag) + "*" + mono;
            if (first) {
                s = (neg ? "-" : "") + piece;
                first = false;
            } else {
                s += (neg ? " - " : " + ") + piece;
            }
        }
        return s;
    }

    std::size_t term_count() const { return terms_.size(); }

private:
    Terms terms_;

    void add_term(const Key& k, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static Key mul_keys(const Key& a, const Key& b) {
        Key r;
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int va = i < a.size() ? a[i].first : INT32_MAX;
            int vb = j < b.size() ? b[j].first : INT32_MAX;
            if (va < vb) {
                r.push_back(a[i++]);
            } else if (vb < va) {
                r.push_back(b[j++]);
            } else {
                int e = a[i].second + b[j].second;
                if (e != 0) r.push_back({va, e});
                ++i, ++j;
            }
        }
        return r;
    }

    // componentwise a - b; false if any exponent would go negative
    static bool div_keys(const Key& a, const Key& b, Key& out) {
        out.clear();
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int va = i < a.size() ? a[i].first : INT32_MAX;
            int vb = j < b.size() ? b[j].first : INT32_MAX;
            if (va < vb) {
                out.push_back(a[i++]);
            } else if (vb < va) {
                return false;
            } else {
                int e = a[i].second - b[j].second;
                if (e < 0) return false;
                if (e > 0) out.push_back({va, e});
                ++i, ++j;
            }
        }
        return true;
    }

    /// gcd of the univariate-in-v coefficient polynomials.
    static ParamPoly content(const ParamPoly& p, int v) {
        ParamPoly g;
        for (int d = 0; d <= p.degree(v); ++d) {
            ParamPoly c = p.coeff_of(v, d);
            if (c.is_zero()) continue;
            g = g.is_zero() ? monic(c) : gcd(g, c);
            if (g.is_constant()) return ParamPoly(1);
        }
        return g.is_zero() ? ParamPoly(1) : g;
    }

    /// Pseudo-remainder of a by b with respect to v.
    static ParamPoly prem(const ParamPoly& a, const ParamPoly& b, int v) {
        int db = b.degree(v);
        ParamPoly lb = b.coeff_of(v, db);
        ParamPoly r = a;
        int e = a.degree(v) - db + 1;
        while (!r.is_zero() && r.degree(v) >= db) {
            int dr = r.degree(v);
            ParamPoly lr = r.coeff_of(v, dr);
            r = lb * r - lr * b * ParamPoly::variable(v, dr - db);
            --e;
        }
        for (; e > 0; --e) r *= lb;
        return r;
    }
};

}  // namespace liesym
