#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace permcycles {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// 50 decimal digits; used where double cancellation would swamp tiny
// total-variation distances.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

HighFloat to_high(const Rational& q);
inline HighFloat to_high(double x) { return HighFloat(x); }

double to_double(const Rational& q);
inline double to_double(double x) { return x; }

/// Natural log of a positive rational without converting it to double first
/// (values like 1/1000! underflow a double but not this).
long double log_rational(const Rational& q);

BigInt factorial(std::size_t m);

/// "num/den" (or "num" when den == 1).
std::string to_string(const Rational& q);

/// Parse "num/den" or "num".
Rational parse_rational(const std::string& text);

}  // namespace permcycles
