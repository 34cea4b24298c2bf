#include "permcycles/numeric.hpp"

#include <cmath>
#include <gmp.h>

#include "permcycles/errors.hpp"

namespace permcycles {

namespace {

long double log_abs(const BigInt& z) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.backend().data());
  return std::log(static_cast<long double>(std::fabs(mantissa))) +
         static_cast<long double>(exponent) * std::log(2.0L);
}

}  // namespace

HighFloat to_high(const Rational& q) {
  // cpp_bin_float has no direct constructor from a GMP rational; go through
  // the decimal integer strings, which is exact.
  const HighFloat num(boost::multiprecision::numerator(q).str());
  const HighFloat den(boost::multiprecision::denominator(q).str());
  return num / den;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

long double log_rational(const Rational& q) {
  detail::require(q > 0, "log_rational: argument must be positive");
  return log_abs(boost::multiprecision::numerator(q)) -
         log_abs(boost::multiprecision::denominator(q));
}

BigInt factorial(std::size_t m) {
  BigInt result;
  mpz_fac_ui(result.backend().data(), static_cast<unsigned long>(m));
  return result;
}

std::string to_string(const Rational& q) { return q.str(); }

Rational parse_rational(const std::string& text) {
  try {
    return Rational(text);
  } catch (const std::exception&) {
    throw DomainError("not a rational number: '" + text + "'");
  }
}

}  // namespace permcycles
