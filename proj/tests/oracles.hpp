#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

// rho on a grid by fixed-step implicit trapezoid on t rho(t) = int_{t-1}^t rho(s) ds.
// Step 1/steps_per_unit; only the previous unit of values is kept. `points`
// must be multiples of the step and sorted. O(h^2) error.
inline std::vector<long double> rho_trapezoid(const std::vector<double>& points,
                                              std::size_t steps_per_unit = 1'000'000) {
  const std::size_t N = steps_per_unit;
  const long double h = 1.0L / static_cast<long double>(N);
  std::vector<long double> ring(N + 1, 1.0L);  // ring[i % (N+1)] = rho(i h)
  std::vector<long double> out;
  out.reserve(points.size());
  std::size_t next = 0;
  auto index_of = [&](double t) { return static_cast<std::size_t>(std::llround(t * static_cast<double>(N))); };
  while (next < points.size() && index_of(points[next]) <= N) {
    out.push_back(1.0L);  // t <= 1
    ++next;
  }
  if (next == points.size()) return out;
  const std::size_t last = index_of(points.back());

  // interior = sum of rho(j h), j = i-N+1 .. i-1, for the step i being taken.
  long double interior = static_cast<long double>(N - 1);
  for (std::size_t i = N + 1; i <= last; ++i) {
    const long double oldest = ring[(i - N) % (N + 1)];
    interior += ring[(i - 1) % (N + 1)] - oldest;
    const long double t = static_cast<long double>(i) * h;
    const long double v = h * (0.5L * oldest + interior) / (t - 0.5L * h);
    ring[i % (N + 1)] = v;
    if (i % N == 0) {  // recompute the running sum now and then to stop drift
      interior = 0;
      for (std::size_t j = i - N + 1; j <= i - 1; ++j) interior += ring[j % (N + 1)];
    }
    while (next < points.size() && index_of(points[next]) == i) {
      out.push_back(v);
      ++next;
    }
  }
  return out;
}

inline double chi_square_p_value(double statistic, double df) {
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

// Goodness of fit of observed tallies against equal expected counts.
template <class Key>
double uniform_gof_p_value(const std::map<Key, std::size_t>& observed, std::size_t categories,
                           std::size_t total) {
  const double expected = static_cast<double>(total) / static_cast<double>(categories);
  double stat = 0;
  std::size_t seen = 0;
  for (const auto& [key, count] : observed) {
    const double diff = static_cast<double>(count) - expected;
    stat += diff * diff / expected;
    ++seen;
  }
  stat += static_cast<double>(categories - seen) * expected;  // unseen categories
  return chi_square_p_value(stat, static_cast<double>(categories - 1));
}

// Two-sample chi-square for equal sample sizes.
template <class Key>
double two_sample_p_value(const std::map<Key, std::size_t>& a, const std::map<Key, std::size_t>& b) {
  std::map<Key, std::pair<double, double>> joint;
  for (const auto& [k, c] : a) joint[k].first = static_cast<double>(c);
  for (const auto& [k, c] : b) joint[k].second = static_cast<double>(c);
  double stat = 0;
  for (const auto& [k, ab] : joint) {
    const double diff = ab.first - ab.second;
    stat += diff * diff / (ab.first + ab.second);
  }
  return chi_square_p_value(stat, static_cast<double>(joint.size() - 1));
}

}  // namespace oracle
