#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace starfactor {

// Exact nonnegative counts and rationals. Backed by Boost.Multiprecision.
using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const BigCount& value) { return value.convert_to<double>(); }
inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline std::string to_string(const BigCount& value) { return value.str(); }
inline std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

// (2m)! / (m! 2^m) = (2m-1)!!, the number of perfect matchings of 2m points.
BigCount matchings_count(std::uint64_t m);

BigCount factorial(std::uint64_t n);

}  // namespace starfactor
