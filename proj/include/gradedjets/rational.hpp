#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace gradedjets {

/// Exact arbitrary-precision scalars used for every coefficient in the engine.
/// Rational is always kept in lowest terms with a positive denominator.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

} // namespace gradedjets
