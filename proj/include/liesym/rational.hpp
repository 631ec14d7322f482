#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace liesym {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

/// Narrowing conversion used for exponents; the engine never needs powers
/// outside this range.
inline long long rat_to_int(const Rat& r) {
    if (!rat_is_integer(r)) throw std::invalid_argument("rat_to_int: not an integer");
    return numerator(r).convert_to<long long>();
}

}  // namespace liesym
