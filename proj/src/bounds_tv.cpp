#include "permcycles/bounds_tv.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "permcycles/errors.hpp"
#include "permcycles/rng.hpp"

namespace permcycles {

namespace {

using detail::require;

// log P[Poisson(1/k) = m] for m = 0..upto, by log p(m+1) = log p(m) + log(1/k) - log(m+1).
std::vector<HighFloat> poisson_column(std::size_t k, std::size_t upto) {
  std::vector<HighFloat> out(upto + 1);
  const HighFloat lambda = HighFloat(1) / HighFloat(k);
  const HighFloat log_lambda = log(lambda);
  HighFloat lp = -lambda;
  out[0] = exp(lp);
  for (std::size_t m = 0; m < upto; ++m) {
    lp += log_lambda - log(HighFloat(m + 1));
    out[m + 1] = exp(lp);
  }
  return out;
}

template <class P>
HighFloat as_high(const P& p) {
  return to_high(p);
}

template <class P>
void check_normalized(const SparsePmf<P>& pmf) {
  if constexpr (std::is_same_v<P, Rational>) {
    require(pmf.total_mass() == 1, "pmf is not normalized");
  } else {
    require(std::abs(pmf.total_mass() - 1.0) <= 1e-9, "pmf is not normalized");
  }
}

}  // namespace

PoissonSpec::PoissonSpec(std::size_t d_) : d(d_) {
  require(d >= 1, "Poisson reference needs d >= 1");
  for (std::size_t k = 1; k <= d; ++k) means.push_back(1.0 / static_cast<double>(k));
}

HighFloat PoissonSpec::mass(const CountsVector& c) const {
  PoissonMassCache cache(*this);
  return cache.mass(c);
}

HighFloat PoissonMassCache::mass(const CountsVector& c) {
  require(c.d() == spec_.d, "count vector dimension does not match the Poisson reference");
  HighFloat q = 1;
  for (std::size_t k = 1; k <= spec_.d; ++k) {
    auto& col = table_[k - 1];
    const std::size_t m = c.counts[k - 1];
    if (m >= col.size()) col = poisson_column(k, std::max<std::size_t>(m, 2 * col.size() + 8));
    q *= col[m];
  }
  return q;
}

template <class P>
HighFloat tv_exact(const SparsePmf<P>& pmf, const PoissonSpec& spec) {
  require(pmf.d == spec.d, "pmf dimension does not match the Poisson reference");
  check_normalized(pmf);
  PoissonMassCache cache(spec);
  HighFloat diff = 0, covered = 0;
  for (const auto& [c, p] : pmf.entries) {
    const HighFloat q = cache.mass(c);
    diff += abs(as_high(p) - q);
    covered += q;
  }
  HighFloat tv = (diff + (1 - covered)) / 2;
  if (tv < 0) tv = 0;
  if (tv > 1) tv = 1;
  return tv;
}

template <class P>
HighFloat tv_between(const SparsePmf<P>& p, const SparsePmf<P>& q) {
  require(p.d == q.d, "pmf dimensions differ");
  HighFloat sum = 0;
  auto i = p.entries.begin(), j = q.entries.begin();
  while (i != p.entries.end() || j != q.entries.end()) {
    if (j == q.entries.end() || (i != p.entries.end() && i->first < j->first)) {
      sum += abs(as_high(i->second));
      ++i;
    } else if (i == p.entries.end() || j->first < i->first) {
      sum += abs(as_high(j->second));
      ++j;
    } else {
      sum += abs(as_high(i->second) - as_high(j->second));
      ++i;
      ++j;
    }
  }
  return sum / 2;
}

SparsePmf<double> poisson_pmf(const PoissonSpec& spec, std::size_t grid_weight) {
  SparsePmf<double> out;
  out.d = spec.d;
  PoissonMassCache cache(spec);
  CountsVector c{std::vector<std::uint32_t>(spec.d, 0)};
  // Lexicographic walk over {sum_j j c_j <= grid_weight}.
  auto walk = [&](auto&& self, std::size_t j, std::size_t used) -> void {
    if (j > spec.d) {
      out.entries.emplace_back(c, static_cast<double>(cache.mass(c)));
      return;
    }
    for (std::size_t m = 0; used + j * m <= grid_weight; ++m) {
      c.counts[j - 1] = static_cast<std::uint32_t>(m);
      self(self, j + 1, used + j * m);
    }
    c.counts[j - 1] = 0;
  };
  walk(walk, 1, 0);
  return out;
}

EmpiricalTv tv_empirical(std::span<const CountsVector> samples, const PoissonSpec& spec,
                         std::size_t resamples, std::uint64_t seed) {
  require(!samples.empty(), "need at least one sample");
  std::map<CountsVector, std::uint64_t> tally;
  for (const auto& c : samples) {
    require(c.d() == spec.d, "sample dimension does not match the Poisson reference");
    ++tally[c];
  }
  const std::size_t N = samples.size();
  PoissonMassCache cache(spec);

  std::vector<std::uint64_t> counts;
  std::vector<HighFloat> q;
  HighFloat covered = 0;
  for (const auto& [c, cnt] : tally) {
    counts.push_back(cnt);
    q.push_back(cache.mass(c));
    covered += q.back();
  }
  const HighFloat tail = 1 - covered;

  // Categories absent from a resample contribute |0 - q| - q = 0, so every
  // resample can be scored over the full category list.
  auto score = [&](const std::vector<std::uint64_t>& cnt) {
    HighFloat diff = 0;
    for (std::size_t i = 0; i < cnt.size(); ++i)
      diff += abs(HighFloat(cnt[i]) / N - q[i]);
    return (diff + tail) / 2;
  };

  EmpiricalTv out;
  out.samples = N;
  out.support = counts.size();
  out.resamples = resamples;
  out.estimate = static_cast<double>(score(counts));
  out.bias_scale = std::sqrt(static_cast<double>(out.support) / static_cast<double>(N));

  if (resamples >= 2) {
    // Sample-to-category index via cumulative counts.
    std::vector<std::uint64_t> cumulative(counts.size());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) cumulative[i] = acc += counts[i];
    Rng rng = make_rng(seed, 0xb007);
    std::vector<double> values;
    std::vector<std::uint64_t> cnt(counts.size());
    for (std::size_t b = 0; b < resamples; ++b) {
      std::fill(cnt.begin(), cnt.end(), 0);
      for (std::size_t s = 0; s < N; ++s) {
        const auto x = uniform_below(rng, N);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        ++cnt[static_cast<std::size_t>(it - cumulative.begin())];
      }
      values.push_back(static_cast<double>(score(cnt)));
    }
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    out.standard_error = std::sqrt(var / static_cast<double>(values.size() - 1));
  }
  return out;
}

BoundBreakdown thm1_bound(std::size_t n, std::size_t r, std::size_t d, double C) {
  require(d >= 1, "need d >= 1");
  require(r >= 1 && r <= n, "need 1 <= r <= n");
  require(n >= 2, "need n >= 2");
  require(std::isfinite(C) && C >= 0, "C must be a finite non-negative constant");
  BoundBreakdown b;
  b.n = n;
  b.r = r;
  b.d = d;
  b.C = C;
  const double nd = static_cast<double>(n), rd = static_cast<double>(r),
               dd = static_cast<double>(d);
  b.u = nd / rd;
  for (std::size_t k = 1; k <= d; ++k) b.harmonic_number += 1.0 / static_cast<double>(k);
  b.harmonic_term = 2.0 * dd * std::log(dd) / (nd - 1.0);
  b.fixed_term = 10.0 * dd / (nd - 1.0);
  b.asymptotic_term = C * (dd * dd + dd * b.u) * std::log1p(b.u) / (nd * rd);
  b.total = b.harmonic_term + b.fixed_term + b.asymptotic_term;
  b.assembled_leading = 2.0 * dd * b.harmonic_number / nd + 8.0 * dd / nd;
  return b;
}

double macroscopic_bound(std::size_t n, std::size_t r, std::size_t d, double C) {
  require(r >= 1 && r <= n, "need 1 <= r <= n");
  require(std::isfinite(C) && C >= 0, "C must be a finite non-negative constant");
  const double nd = static_cast<double>(n), rd = static_cast<double>(r);
  return C * (rd / nd + static_cast<double>(d) * std::log(nd) / rd);
}

template HighFloat tv_exact<Rational>(const SparsePmf<Rational>&, const PoissonSpec&);
template HighFloat tv_exact<double>(const SparsePmf<double>&, const PoissonSpec&);
template HighFloat tv_between<Rational>(const SparsePmf<Rational>&, const SparsePmf<Rational>&);
template HighFloat tv_between<double>(const SparsePmf<double>&, const SparsePmf<double>&);

}  // namespace permcycles
