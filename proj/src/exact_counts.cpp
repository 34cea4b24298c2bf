#include "permcycles/exact_counts.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "permcycles/config.hpp"
#include "permcycles/dickman.hpp"
#include "permcycles/errors.hpp"

namespace permcycles {

namespace {

void check_table(const CountTable& table, std::size_t n, std::size_t r) {
  detail::require(table.r() == r, "count table was built for a different r");
  detail::require(table.n_max() >= n, "count table does not cover m = 0..n");
}

}  // namespace

template <>
Rational table_value<Rational>(const CycleLengthTable& table, std::size_t m) {
  return table.exact(m);
}

template <>
double table_value<double>(const CycleLengthTable& table, std::size_t m) {
  return table.value(m);
}

template <class P>
std::vector<P> first_element_cycle_length_pmf(std::size_t n, std::size_t r,
                                              const CountTable& table) {
  detail::require(r >= 1 && r <= n, "first_element_cycle_length_pmf: need 1 <= r <= n");
  check_table(table, n, r);
  std::vector<P> pmf(r);
  if constexpr (std::is_same_v<P, Rational>) {
    const Rational denom = table.exact(n) * n;
    for (std::size_t k = 1; k <= r; ++k) pmf[k - 1] = table.exact(n - k) / denom;
  } else {
    const long double log_denom = table.log_value(n) + std::log(static_cast<long double>(n));
    for (std::size_t k = 1; k <= r; ++k) {
      pmf[k - 1] = static_cast<double>(std::exp(table.log_value(n - k) - log_denom));
    }
  }
  return pmf;
}

JointTables JointTables::build(std::size_t n, std::size_t r, std::size_t d, TableMode mode) {
  JointTables tables{CountTable(n, r, mode), std::nullopt};
  if (d < r) tables.mu.emplace(d, r, n, mode);
  return tables;
}

std::size_t joint_grid_size(std::size_t n, std::size_t r, std::size_t d, std::size_t limit) {
  const std::size_t parts = std::min(d, r);
  const std::size_t ceiling = limit + 1;
  // ways[s] = number of ways to write s with parts 1..parts (saturating).
  std::vector<std::size_t> ways(n + 1, 0);
  ways[0] = 1;
  for (std::size_t j = 1; j <= parts; ++j) {
    for (std::size_t s = j; s <= n; ++s) ways[s] = std::min(ceiling, ways[s] + ways[s - j]);
  }
  std::size_t total = 0;
  for (const std::size_t w : ways) total = std::min(ceiling, total + w);
  return total;
}

template <class P>
SparsePmf<P> joint_pmf(std::size_t n, std::size_t r, std::size_t d, const JointTables& tables,
                       std::size_t cap) {
  detail::require(r >= 1 && r <= n, "joint_pmf: need 1 <= r <= n");
  detail::require(d >= 1 && d <= n, "joint_pmf: need 1 <= d <= n");
  check_table(tables.nu, n, r);
  detail::require(tables.mu.has_value() == (d < r), "joint_pmf: restricted table mismatch");
  if (tables.mu) {
    detail::require(tables.mu->d() == d && tables.mu->r() == r && tables.mu->n_max() >= n,
                    "joint_pmf: restricted table built for different parameters");
  }

  const std::size_t grid = joint_grid_size(n, r, d, cap);
  if (grid > cap) {
    throw ResourceError("joint_pmf support grid has more than " + std::to_string(cap) +
                        " count vectors (support cap); n = " + std::to_string(n) +
                        ", d = " + std::to_string(d));
  }

  const std::size_t parts = std::min(d, r);
  SparsePmf<P> pmf;
  pmf.d = d;
  pmf.entries.reserve(grid);

  CountsVector current;
  current.counts.assign(d, 0);

  if constexpr (std::is_same_v<P, Rational>) {
    const Rational nu_n = tables.nu.exact(n);
    std::function<void(std::size_t, std::size_t, const Rational&)> recurse =
        [&](std::size_t j, std::size_t used, const Rational& weight) {
          if (j > parts) {
            const std::size_t rest = n - used;
            const Rational mu = tables.mu ? tables.mu->exact(rest) : Rational(rest == 0 ? 1 : 0);
            if (mu > 0) pmf.entries.emplace_back(current, weight * mu / nu_n);
            return;
          }
          Rational w = weight;
          for (std::size_t c = 0; used + c * j <= n; ++c) {
            if (c > 0) w /= static_cast<unsigned long>(j * c);
            current.counts[j - 1] = static_cast<std::uint32_t>(c);
            recurse(j + 1, used + c * j, w);
          }
          current.counts[j - 1] = 0;
        };
    recurse(1, 0, Rational(1));
  } else {
    const long double log_nu_n = tables.nu.log_value(n);
    std::function<void(std::size_t, std::size_t, long double)> recurse =
        [&](std::size_t j, std::size_t used, long double log_weight) {
          if (j > parts) {
            const std::size_t rest = n - used;
            long double log_mu;
            if (tables.mu) {
              log_mu = tables.mu->log_value(rest);
              if (std::isinf(log_mu)) return;
            } else {
              if (rest != 0) return;
              log_mu = 0;
            }
            const double mass = static_cast<double>(std::exp(log_weight + log_mu - log_nu_n));
            if (mass > 0) pmf.entries.emplace_back(current, mass);
            return;
          }
          long double lw = log_weight;
          const long double log_j = std::log(static_cast<long double>(j));
          for (std::size_t c = 0; used + c * j <= n; ++c) {
            if (c > 0) lw -= log_j + std::log(static_cast<long double>(c));
            current.counts[j - 1] = static_cast<std::uint32_t>(c);
            recurse(j + 1, used + c * j, lw);
          }
          current.counts[j - 1] = 0;
        };
    recurse(1, 0, 0.0L);
  }
  return pmf;
}

template <class P>
SparsePmf<P> joint_pmf(std::size_t n, std::size_t r, std::size_t d) {
  const TableMode mode = std::is_same_v<P, Rational> ? TableMode::exact : TableMode::log_double;
  return joint_pmf<P>(n, r, d, JointTables::build(n, r, d, mode), support_cap());
}

template <class P>
P expected_count(std::size_t n, std::size_t r, std::size_t k, const CountTable& table) {
  detail::require(k >= 1, "expected_count: k >= 1");
  if (k > n) throw DomainError("expected_count: k = " + std::to_string(k) + " exceeds n");
  detail::require(r >= 1 && r <= n, "expected_count: need 1 <= r <= n");
  check_table(table, n, r);
  if (k > r) return P(0);
  if constexpr (std::is_same_v<P, Rational>) {
    return table.exact(n - k) / (table.exact(n) * k);
  } else {
    return static_cast<double>(std::exp(table.log_value(n - k) - table.log_value(n)) /
                               static_cast<long double>(k));
  }
}

ExactPmf brute_force_pmf(std::size_t n, std::size_t r, std::size_t d, std::size_t n_cap) {
  if (n > n_cap) {
    throw ResourceError("brute_force_pmf: n = " + std::to_string(n) + " above the cap of " +
                        std::to_string(n_cap));
  }
  detail::require(r >= 1 && r <= n, "brute_force_pmf: need 1 <= r <= n");
  detail::require(d >= 1 && d <= n, "brute_force_pmf: need 1 <= d <= n");
  std::map<CountsVector, std::uint64_t> tally;
  std::uint64_t total = 0;
  for_each_permutation(n, [&](const Permutation& p) {
    if (longest_cycle(p) > r) return;
    ++tally[cycle_counts(p, d)];
    ++total;
  });
  ExactPmf pmf;
  pmf.d = d;
  for (const auto& [c, count] : tally) pmf.entries.emplace_back(c, Rational(count, total));
  return pmf;
}

bool in_long_cycle_regime(std::size_t n, std::size_t r) {
  const double nd = static_cast<double>(n);
  return r <= n && static_cast<double>(r) >= std::sqrt(nd * std::log(nd));
}

NuRatioReport nu_ratio_check(std::size_t n, std::size_t r, std::size_t k, const CountTable& table) {
  detail::require(r >= 1 && r <= n, "nu_ratio_check: need 1 <= r <= n");
  detail::require(k <= n, "nu_ratio_check: need k <= n");
  check_table(table, n, r);
  NuRatioReport rep{};
  rep.n = n;
  rep.r = r;
  rep.k = k;
  rep.u = static_cast<double>(n) / static_cast<double>(r);
  rep.xi = xi_or_limit(rep.u);
  rep.exact_ratio = static_cast<double>(std::exp(table.log_value(n - k) - table.log_value(n)));
  rep.predicted = std::exp(static_cast<double>(k) / static_cast<double>(r) * rep.xi);
  rep.relative_gap = std::fabs(rep.exact_ratio / rep.predicted - 1.0);
  rep.envelope = rep.u * std::log(rep.u + 1.0) / static_cast<double>(r);
  rep.in_regime = in_long_cycle_regime(n, r);
  return rep;
}

DickmanTrackingReport dickman_tracking(std::size_t n, std::size_t r, const CountTable& table) {
  detail::require(r >= 1 && r <= n, "dickman_tracking: need 1 <= r <= n");
  check_table(table, n, r);
  DickmanTrackingReport rep{};
  rep.n = n;
  rep.r = r;
  rep.u = static_cast<double>(n) / static_cast<double>(r);
  const double log_nu = static_cast<double>(table.log_value(n));
  const double log_rho = default_dickman().log_rho(rep.u);
  rep.nu = std::exp(log_nu);
  rep.rho = std::exp(log_rho);
  rep.relative_error = std::fabs(std::expm1(log_nu - log_rho));
  rep.envelope = rep.u * std::log(rep.u + 1.0) / static_cast<double>(r);
  return rep;
}

template std::vector<Rational> first_element_cycle_length_pmf<Rational>(std::size_t, std::size_t,
                                                                        const CountTable&);
template std::vector<double> first_element_cycle_length_pmf<double>(std::size_t, std::size_t,
                                                                    const CountTable&);
template SparsePmf<Rational> joint_pmf<Rational>(std::size_t, std::size_t, std::size_t,
                                                 const JointTables&, std::size_t);
template SparsePmf<double> joint_pmf<double>(std::size_t, std::size_t, std::size_t,
                                             const JointTables&, std::size_t);
template SparsePmf<Rational> joint_pmf<Rational>(std::size_t, std::size_t, std::size_t);
template SparsePmf<double> joint_pmf<double>(std::size_t, std::size_t, std::size_t);
template Rational expected_count<Rational>(std::size_t, std::size_t, std::size_t,
                                           const CountTable&);
template double expected_count<double>(std::size_t, std::size_t, std::size_t, const CountTable&);

}  // namespace permcycles
