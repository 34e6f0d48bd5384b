#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace mwf {

/// Exact rational arithmetic used for every symbolic coefficient.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "12", "-3/4" or a finite decimal such as "0.25" into an exact value.
Rational parse_rational(std::string_view text);

}  // namespace mwf
