#pragma once

#include <cstddef>
#include <vector>

#include "permcycles/numeric.hpp"

namespace permcycles {

enum class TableMode { exact, log_double };

/// f[m] = (number of permutations of m elements whose cycle lengths all lie
/// in (lo, hi]) / m!, for m = 0..n_max, with f[0] = 1.
///
/// Built from m * f[m] = sum_{k=lo+1}^{min(m,hi)} f[m-k] in O(n_max) steps.
/// Exact mode keeps rationals (and rejects n_max above exact_mode_cap());
/// log_double mode keeps log f[m] in long double so that values far below
/// the double range stay usable.
class CycleLengthTable {
 public:
  CycleLengthTable(std::size_t n_max, std::size_t lo, std::size_t hi, TableMode mode);

  std::size_t n_max() const noexcept { return log_.size() - 1; }
  std::size_t lower() const noexcept { return lo_; }
  std::size_t upper() const noexcept { return hi_; }
  TableMode mode() const noexcept { return mode_; }
  bool is_exact() const noexcept { return mode_ == TableMode::exact; }

  const Rational& exact(std::size_t m) const;
  BigInt count(std::size_t m) const;  // m! * f[m], exact mode only
  double value(std::size_t m) const;  // underflows to 0 for tiny entries
  long double log_value(std::size_t m) const;  // -inf for zero entries

 private:
  void build_exact();
  void build_log_double();
  void check_index(std::size_t m) const;

  std::size_t lo_;
  std::size_t hi_;
  TableMode mode_;
  std::vector<Rational> exact_;
  std::vector<long double> log_;
};

/// nu(m, r) = |S_m^r| / m!.
class CountTable : public CycleLengthTable {
 public:
  CountTable(std::size_t n_max, std::size_t r, TableMode mode);
  std::size_t r() const noexcept { return upper(); }
};

/// mu(m) for cycle lengths confined to (d, r]; requires d < r.
class RestrictedCountTable : public CycleLengthTable {
 public:
  RestrictedCountTable(std::size_t d, std::size_t r, std::size_t n_max, TableMode mode);
  std::size_t d() const noexcept { return lower(); }
  std::size_t r() const noexcept { return upper(); }
};

inline CountTable nu_table(std::size_t n_max, std::size_t r, TableMode mode) {
  return CountTable(n_max, r, mode);
}

inline RestrictedCountTable restricted_table(std::size_t d, std::size_t r, std::size_t n_max,
                                             TableMode mode) {
  return RestrictedCountTable(d, r, n_max, mode);
}

}  // namespace permcycles
