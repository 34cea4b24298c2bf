#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "permcycles/count_table.hpp"
#include "permcycles/numeric.hpp"
#include "permcycles/permutation.hpp"

namespace permcycles {

/// Finitely supported law on count vectors. Entries are kept sorted
/// lexicographically by count vector and carry strictly positive mass.
template <class P>
struct SparsePmf {
  std::size_t d = 0;
  std::vector<std::pair<CountsVector, P>> entries;

  P total_mass() const {
    P total = 0;
    for (const auto& [c, p] : entries) total += p;
    return total;
  }

  const P* find(const CountsVector& c) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), c,
                               [](const auto& e, const CountsVector& key) { return e.first < key; });
    if (it == entries.end() || it->first != c) return nullptr;
    return &it->second;
  }

  std::size_t support_size() const noexcept { return entries.size(); }
};

using ExactPmf = SparsePmf<Rational>;
using DoublePmf = SparsePmf<double>;

/// Table value in the requested arithmetic: Rational needs an exact table.
template <class P>
P table_value(const CycleLengthTable& table, std::size_t m);

/// P[L(C_1) = k] = nu(n-k, r) / (n nu(n, r)) for k = 1..r (index k-1).
template <class P>
std::vector<P> first_element_cycle_length_pmf(std::size_t n, std::size_t r,
                                              const CountTable& table);

/// Tables needed by joint_pmf; mu is absent when d >= r (then no cycle length
/// lies in (d, r] and mu(m) = [m == 0]).
struct JointTables {
  CountTable nu;
  std::optional<RestrictedCountTable> mu;

  static JointTables build(std::size_t n, std::size_t r, std::size_t d, TableMode mode);
};

/// Exact law of (W_1, ..., W_d) on S_n^r:
///   P[W = c] = prod_j (1/j)^{c_j} / c_j!  *  mu(n - sum_j j c_j) / nu(n, r).
/// Enumerates every c with sum_j j c_j <= n in lexicographic order.
/// Throws ResourceError if that grid is larger than `cap`.
template <class P>
SparsePmf<P> joint_pmf(std::size_t n, std::size_t r, std::size_t d, const JointTables& tables,
                       std::size_t cap);

template <class P>
SparsePmf<P> joint_pmf(std::size_t n, std::size_t r, std::size_t d);

/// Number of count vectors c in N^{min(d,r)} with sum_j j c_j <= n,
/// saturating at `limit + 1`.
std::size_t joint_grid_size(std::size_t n, std::size_t r, std::size_t d, std::size_t limit);

/// E[W_k] = nu(n-k, r) / (k nu(n, r)); zero when r < k <= n.
template <class P>
P expected_count(std::size_t n, std::size_t r, std::size_t k, const CountTable& table);

inline constexpr std::size_t kBruteForceCap = 10;

/// Enumerates all n! permutations; exact and slow, used as the oracle.
ExactPmf brute_force_pmf(std::size_t n, std::size_t r, std::size_t d,
                         std::size_t n_cap = kBruteForceCap);

/// Compares nu(n-k, r)/nu(n, r) with exp((k/r) xi(u)).
struct NuRatioReport {
  std::size_t n, r, k;
  double u;
  double xi;
  double exact_ratio;
  double predicted;
  double relative_gap;  // |exact / predicted - 1|
  double envelope;      // u log(u+1) / r, the scale of the error term
  bool in_regime;       // sqrt(n log n) <= r <= n
};

NuRatioReport nu_ratio_check(std::size_t n, std::size_t r, std::size_t k, const CountTable& table);

/// nu(n, r) against the Dickman function at u = n/r.
struct DickmanTrackingReport {
  std::size_t n, r;
  double u;
  double nu;
  double rho;
  double relative_error;  // |nu / rho - 1|
  double envelope;        // u log(u+1) / r
};

DickmanTrackingReport dickman_tracking(std::size_t n, std::size_t r, const CountTable& table);

/// True when sqrt(n log n) <= r <= n.
bool in_long_cycle_regime(std::size_t n, std::size_t r);

}  // namespace permcycles
