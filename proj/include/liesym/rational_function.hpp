#pragma once

#include <string>
#include <vector>

#include "liesym/param_poly.hpp"

namespace liesym {

/// Element of Q(p1, ..., pk): a reduced fraction of ParamPolys with a monic
/// denominator. Zero is represented as 0/1; equality is structural.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(1) {}
    RationalFunction(long long n) : num_(n), den_(1) {}
    explicit RationalFunction(const Rat& r) : num_(r), den_(1) {}
    explicit RationalFunction(ParamPoly n) : num_(std::move(n)), den_(1) {}
    RationalFunction(ParamPoly n, ParamPoly d) : num_(std::move(n)), den_(std::move(d)) {
        normalize();
    }

    static RationalFunction variable(int id) {
        return RationalFunction(ParamPoly::variable(id));
    }

    const ParamPoly& num() const { return num_; }
    const ParamPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_constant() && num_ == den_; }

    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    Rat rational_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_integer() const { return is_rational() && rat_is_integer(rational_value()); }
    long long integer_value() const { return rat_to_int(rational_value()); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw EngineError("coefficient division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction inverse() const {
        if (is_zero()) throw EngineError("coefficient division by zero");
        return {den_, num_};
    }

    RationalFunction pow_int(long long n) const {
        if (n == 0) return RationalFunction(1);
        RationalFunction base = n < 0 ? inverse() : *this;
        unsigned long long k = n < 0 ? static_cast<unsigned long long>(-n)
                                     : static_cast<unsigned long long>(n);
        RationalFunction r(1);
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    RationalFunction derivative(int var) const {
        return {num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_};
    }

    static int cmp(const RationalFunction& a, const RationalFunction& b) {
        int c = ParamPoly::cmp(a.num_, b.num_);
        if (c != 0) return c;
        return ParamPoly::cmp(a.den_, b.den_);
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return cmp(a, b) == 0;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return cmp(a, b) != 0;
    }

    /// True when the printed leading term of the numerator is negative; used
    /// by the expression printer to fold signs into "a - b" layout.
    bool leading_negative() const { return !num_.is_zero() && num_.leading_coeff() < 0; }

    /// Renders within the expression grammar. `as_factor` requests a string
    /// safe to juxtapose with "*monomial" (parenthesized when needed).
    std::string to_string(const std::vector<std::string>& names, bool as_factor = false) const {
        std::string n = num_.to_string(names);
        bool n_atomic = num_.term_count() <= 1;
        if (den_.is_constant() && den_.constant_value() == 1) {
            if (as_factor && !n_atomic) return "(" + n + ")";
            return n;
        }
        std::string d = den_.to_string(names);
        bool d_atomic = den_.term_count() == 1 && den_.leading_key().size() <= 1 &&
                        (den_.leading_key().empty() || den_.leading_coeff() == 1) &&
                        (den_.leading_key().empty() || den_.leading_key()[0].second == 1);
        if (!n_atomic) n = "(" + n + ")";
        if (!d_atomic) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    ParamPoly num_, den_;

    void normalize() {
        if (den_.is_zero()) throw EngineError("coefficient division by zero");
        if (num_.is_zero()) {
            den_ = ParamPoly(1);
            return;
        }
        ParamPoly g = ParamPoly::gcd(num_, den_);
        if (!g.is_constant() || g.constant_value() != 1) {
            num_ = ParamPoly::exact_div(num_, g);
            den_ = ParamPoly::exact_div(den_, g);
        }
        Rat lc = den_.leading_coeff();
        if (lc != 1) {
            num_ *= Rat(1) / lc;
            den_ *= Rat(1) / lc;
        }
    }
};

}  // namespace liesym
