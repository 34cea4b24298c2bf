#include "permcycles/count_table.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "permcycles/config.hpp"
#include "permcycles/errors.hpp"

namespace permcycles {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

long double log_add(long double x, long double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  if (x < y) std::swap(x, y);
  return x + std::log1p(std::exp(y - x));
}

// Running sum of exp(log values) kept against the largest value seen, so it
// only ever adds non-negative terms.
class LogAccumulator {
 public:
  void add(long double log_term) {
    if (log_term == kNegInf) return;
    if (empty_ || log_term > ref_) {
      sum_ = empty_ ? 1.0L : sum_ * std::exp(ref_ - log_term) + 1.0L;
      ref_ = log_term;
      empty_ = false;
    } else {
      sum_ += std::exp(log_term - ref_);
    }
  }
  long double log_sum() const { return empty_ ? kNegInf : ref_ + std::log(sum_); }
  void clear() { empty_ = true; sum_ = 0; ref_ = 0; }

 private:
  bool empty_ = true;
  long double ref_ = 0;
  long double sum_ = 0;
};

std::size_t checked_lower(std::size_t d, std::size_t r) {
  detail::require(d < r, "restricted_table: need d < r (no cycle length fits in (d, r])");
  return d;
}

}  // namespace

CycleLengthTable::CycleLengthTable(std::size_t n_max, std::size_t lo, std::size_t hi,
                                   TableMode mode)
    : lo_(lo), hi_(hi), mode_(mode) {
  detail::require(hi >= 1, "cycle length table: upper bound must be >= 1");
  detail::require(lo < hi, "cycle length table: need lower < upper");
  log_.assign(n_max + 1, kNegInf);
  if (mode == TableMode::exact) {
    if (n_max > exact_mode_cap()) {
      throw ResourceError("exact table for n_max = " + std::to_string(n_max) +
                          " exceeds the exact-mode cap of " + std::to_string(exact_mode_cap()));
    }
    exact_.assign(n_max + 1, Rational(0));
    build_exact();
  } else {
    build_log_double();
  }
}

void CycleLengthTable::build_exact() {
  const std::size_t n_max = log_.size() - 1;
  exact_[0] = 1;
  log_[0] = 0;
  // window(m) = sum_{j = max(0, m-hi)}^{m-lo-1} f[j]
  Rational window = 0;
  for (std::size_t m = 1; m <= n_max; ++m) {
    if (m >= lo_ + 1) window += exact_[m - lo_ - 1];
    if (m >= hi_ + 1) window -= exact_[m - hi_ - 1];
    exact_[m] = window / m;
    log_[m] = exact_[m] > 0 ? log_rational(exact_[m]) : kNegInf;
  }
}

void CycleLengthTable::build_log_double() {
  const std::size_t n_max = log_.size() - 1;
  const std::size_t block = hi_ - lo_;  // window length
  log_[0] = 0;

  // The window [a, b] spans at most two consecutive blocks of length `block`.
  // The older block contributes a precomputed suffix sum, the newer one a
  // running prefix sum, so no subtraction is ever performed.
  std::vector<long double> prev_suffix;  // log suffix sums of the last full block
  std::size_t prev_start = 0;
  LogAccumulator prefix;
  std::size_t cur_block = 0;

  for (std::size_t m = 1; m <= n_max; ++m) {
    if (m < lo_ + 1) continue;  // no admissible cycle length fits
    const std::size_t b = m - lo_ - 1;
    const std::size_t a = m > hi_ ? m - hi_ : 0;

    if (b / block != cur_block) {
      cur_block = b / block;
      prev_start = (cur_block - 1) * block;
      prev_suffix.assign(block, kNegInf);
      long double running = kNegInf;
      for (std::size_t i = block; i-- > 0;) {
        running = log_add(running, log_[prev_start + i]);
        prev_suffix[i] = running;
      }
      prefix.clear();
    }
    prefix.add(log_[b]);

    long double log_window = prefix.log_sum();
    if (a / block != cur_block) log_window = log_add(prev_suffix[a - prev_start], log_window);
    log_[m] = log_window == kNegInf ? kNegInf
                                    : log_window - std::log(static_cast<long double>(m));
  }
}

void CycleLengthTable::check_index(std::size_t m) const {
  if (m >= log_.size()) {
    throw DomainError("table index " + std::to_string(m) + " beyond n_max = " +
                      std::to_string(log_.size() - 1));
  }
}

const Rational& CycleLengthTable::exact(std::size_t m) const {
  if (!is_exact()) throw DomainError("table was not built in exact mode");
  check_index(m);
  return exact_[m];
}

BigInt CycleLengthTable::count(std::size_t m) const {
  const Rational scaled = exact(m) * factorial(m);
  return boost::multiprecision::numerator(scaled);
}

double CycleLengthTable::value(std::size_t m) const {
  check_index(m);
  if (is_exact()) return to_double(exact_[m]);
  return static_cast<double>(std::exp(log_[m]));
}

long double CycleLengthTable::log_value(std::size_t m) const {
  check_index(m);
  return log_[m];
}

CountTable::CountTable(std::size_t n_max, std::size_t r, TableMode mode)
    : CycleLengthTable(n_max, 0, r, mode) {}

RestrictedCountTable::RestrictedCountTable(std::size_t d, std::size_t r, std::size_t n_max,
                                           TableMode mode)
    : CycleLengthTable(n_max, checked_lower(d, r), r, mode) {}

}  // namespace permcycles
