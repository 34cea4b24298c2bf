#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permcycles/exact_counts.hpp"
#include "permcycles/numeric.hpp"
#include "permcycles/permutation.hpp"

namespace permcycles {

/// Independent Y_k ~ Poisson(1/k), k = 1..d.
struct PoissonSpec {
  std::size_t d = 0;
  std::vector<double> means;  // means[k-1] = 1/k

  explicit PoissonSpec(std::size_t d);

  /// P[Y = c]; coordinates use the exact mean 1/k in high precision.
  HighFloat mass(const CountsVector& c) const;
};

/// Reference masses evaluated once per coordinate value; cheap to query.
class PoissonMassCache {
 public:
  explicit PoissonMassCache(const PoissonSpec& spec) : spec_(spec), table_(spec.d) {}
  HighFloat mass(const CountsVector& c);
  const PoissonSpec& spec() const noexcept { return spec_; }

 private:
  PoissonSpec spec_;
  std::vector<std::vector<HighFloat>> table_;  // table_[k-1][m] = P[Y_k = m]
};

/// ||P_W - P_Y||_TV = 1/2 [ sum_{c in supp P_W} |P_W(c) - P_Y(c)| + 1 - sum_{c in supp P_W} P_Y(c) ],
/// i.e. the Poisson mass off the support enters through its complement.
/// Requires pmf.d == spec.d and total mass 1 (exact) or within 1e-9 (double).
template <class P>
HighFloat tv_exact(const SparsePmf<P>& pmf, const PoissonSpec& spec);

/// 1/2 sum |p - q| between two finitely supported laws on the same d.
template <class P>
HighFloat tv_between(const SparsePmf<P>& p, const SparsePmf<P>& q);

/// Product-Poisson law restricted to {c : sum_j j c_j <= grid_weight}
/// (not renormalized).
SparsePmf<double> poisson_pmf(const PoissonSpec& spec, std::size_t grid_weight);

struct EmpiricalTv {
  double estimate = 0;
  double standard_error = 0;  // bootstrap
  std::size_t samples = 0;
  std::size_t support = 0;
  std::size_t resamples = 0;
  double bias_scale = 0;  // sqrt(support / samples); the plug-in estimate is biased upward at this order
};

inline constexpr std::size_t kDefaultBootstrap = 200;

/// Plug-in TV between the empirical law of `samples` and spec, with a
/// bootstrap standard error. Depends on the samples only through their
/// empirical measure (and on `seed` for the error bar).
EmpiricalTv tv_empirical(std::span<const CountsVector> samples, const PoissonSpec& spec,
                         std::size_t resamples = kDefaultBootstrap, std::uint64_t seed = 0);

/// (2 d log d + 10 d)/(n - 1) + C (d^2 + d u) log(u + 1)/(n r).
struct BoundBreakdown {
  std::size_t n = 0, r = 0, d = 0;
  double u = 0;
  double C = 1;
  double harmonic_number = 0;  // H_d
  double harmonic_term = 0;    // 2 d log d / (n - 1)
  double fixed_term = 0;       // 10 d / (n - 1)
  double asymptotic_term = 0;  // C (d^2 + d u) log(u + 1) / (n r)
  double total = 0;
  double assembled_leading = 0;  // 2 d H_d / n + 8 d / n, before H_d <= log d + 1
};

BoundBreakdown thm1_bound(std::size_t n, std::size_t r, std::size_t d, double C = 1.0);

/// C (r/n + d log(n)/r). d = 0 is accepted and gives C r/n.
double macroscopic_bound(std::size_t n, std::size_t r, std::size_t d, double C = 1.0);

}  // namespace permcycles
