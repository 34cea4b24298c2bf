#include "permcycles/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "permcycles/errors.hpp"
#include "permcycles/parallel.hpp"

namespace permcycles {

namespace {

// Draws an ordered pair a != b; as an unordered pair it is uniform over the
// n(n-1)/2 transpositions.
std::pair<Index, Index> draw_pair(std::size_t n, Rng& rng) {
  const auto a = static_cast<Index>(uniform_below(rng, n));
  Index b;
  do {
    b = static_cast<Index>(uniform_below(rng, n));
  } while (b == a);
  return {a, b};
}

// Walks the cycle through `start`; returns its length and the predecessor of
// `start`, and reports whether `other` lies on it.
struct CycleWalk {
  std::size_t length = 0;
  Index predecessor = 0;
  bool contains_other = false;
};

CycleWalk walk_cycle(const std::vector<Index>& map, Index start, Index other) {
  CycleWalk walk;
  Index j = start;
  do {
    ++walk.length;
    if (j == other) walk.contains_other = true;
    if (map[j] == start) walk.predecessor = j;
    j = map[j];
  } while (j != start);
  return walk;
}

// In-place chain step; returns true when the proposal was accepted.
bool chain_step(std::vector<Index>& map, std::size_t r, Rng& rng) {
  const std::size_t n = map.size();
  if (n < 2) return false;
  const auto [a, b] = draw_pair(n, rng);
  const CycleWalk wa = walk_cycle(map, a, b);
  Index pred_b;
  if (wa.contains_other) {
    // Splitting a cycle never creates a longer one.
    pred_b = walk_cycle(map, b, a).predecessor;
  } else {
    const CycleWalk wb = walk_cycle(map, b, a);
    if (wa.length + wb.length > r) return false;
    pred_b = wb.predecessor;
  }
  // tau o sigma: whatever mapped to a now maps to b and vice versa.
  map[wa.predecessor] = b;
  map[pred_b] = a;
  return true;
}

}  // namespace

std::string to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::rejection:
      return "rejection";
    case SamplerMethod::sequential:
      return "sequential";
    case SamplerMethod::mcmc:
      return "mcmc";
  }
  return "unknown";
}

SamplerMethod parse_sampler_method(const std::string& name) {
  if (name == "rejection") return SamplerMethod::rejection;
  if (name == "sequential") return SamplerMethod::sequential;
  if (name == "mcmc") return SamplerMethod::mcmc;
  throw DomainError("unknown sampler method '" + name + "' (rejection|sequential|mcmc)");
}

void SamplerConfig::validate() const {
  detail::require(n >= 1, "sampler: n must be >= 1");
  detail::require(r >= 1 && r <= n, "sampler: need 1 <= r <= n");
  detail::require(retry_cap >= 1, "sampler: retry cap must be >= 1");
}

Permutation sample_rejection(const SamplerConfig& cfg, Rng& rng, std::uint64_t* draws) {
  cfg.validate();
  std::vector<Index> mapping(cfg.n);
  for (std::uint64_t attempt = 1; attempt <= cfg.retry_cap; ++attempt) {
    std::iota(mapping.begin(), mapping.end(), Index{0});
    for (std::size_t i = cfg.n; i > 1; --i) {
      std::swap(mapping[i - 1], mapping[uniform_below(rng, i)]);
    }
    Permutation candidate = from_trusted_mapping(mapping);
    if (longest_cycle(candidate) <= cfg.r) {
      if (draws) *draws = attempt;
      return candidate;
    }
  }
  throw ResourceError("rejection sampler: no sample in S_n^r after " +
                      std::to_string(cfg.retry_cap) + " draws (retry cap)");
}

SequentialSampler::SequentialSampler(std::size_t n, const CountTable& table)
    : n_(n), r_(table.r()) {
  detail::require(n >= 1, "sequential sampler: n must be >= 1");
  detail::require(r_ <= n, "sequential sampler: need r <= n");
  detail::require(table.n_max() >= n, "sequential sampler: count table does not cover 0..n");
  log_nu_.resize(n + 1);
  for (std::size_t m = 0; m <= n; ++m) log_nu_[m] = table.log_value(m);
  // The cycle-length law must sum to one; check it on the largest rows,
  // which are the ones drawn from first.
  for (std::size_t m = n; m + 3 > n && m >= 1; --m) {
    long double total = 0;
    const long double base = log_nu_[m] + std::log(static_cast<long double>(m));
    for (std::size_t k = 1; k <= std::min(m, r_); ++k) total += std::exp(log_nu_[m - k] - base);
    if (std::fabs(static_cast<double>(total) - 1.0) > 1e-9) {
      throw DomainError("sequential sampler: count table is inconsistent at m = " +
                        std::to_string(m));
    }
  }
}

Permutation SequentialSampler::operator()(Rng& rng) const {
  std::vector<Index> remaining(n_);
  std::iota(remaining.begin(), remaining.end(), Index{0});
  std::vector<Index> mapping(n_);
  std::size_t m = n_;
  while (m > 0) {
    const Index a = remaining[m - 1];
    const double target = uniform01(rng);
    const long double base = log_nu_[m] + std::log(static_cast<long double>(m));
    const std::size_t k_max = std::min(m, r_);
    long double cumulative = 0;
    std::size_t k = 0;
    for (std::size_t kk = 1; kk <= k_max; ++kk) {
      cumulative += std::exp(log_nu_[m - kk] - base);
      if (target < cumulative) {
        k = kk;
        break;
      }
    }
    if (k == 0) {
      // Rounding left the total a hair below the draw; absorb it in the tail.
      if (std::fabs(static_cast<double>(cumulative) - 1.0) > 1e-9) {
        throw DomainError("sequential sampler: cycle-length law does not sum to 1");
      }
      k = k_max;
    }
    Index previous = a;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const std::size_t top = m - 2 - i;
      std::swap(remaining[uniform_below(rng, top + 1)], remaining[top]);
      mapping[previous] = remaining[top];
      previous = remaining[top];
    }
    mapping[previous] = a;
    m -= k;
  }
  return from_trusted_mapping(std::move(mapping));
}

Permutation sample_sequential(const SamplerConfig& cfg, Rng& rng, const CountTable& table) {
  cfg.validate();
  detail::require(table.r() == cfg.r, "sample_sequential: table built for a different r");
  return SequentialSampler(cfg.n, table)(rng);
}

Permutation mcmc_step(const Permutation& p, std::size_t r, Rng& rng) {
  if (longest_cycle(p) > r) throw DomainError("mcmc_step: input permutation is outside S_n^r");
  std::vector<Index> map(p.mapping().begin(), p.mapping().end());
  chain_step(map, r, rng);
  return from_trusted_mapping(std::move(map));
}

Sampler::Sampler(const SamplerConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.method == SamplerMethod::sequential) {
    const TableMode mode = cfg_.n <= 200 ? TableMode::exact : TableMode::log_double;
    sequential_ = std::make_shared<const SequentialSampler>(cfg_.n, CountTable(cfg_.n, cfg_.r, mode));
  }
}

Permutation Sampler::draw(Rng& rng) {
  switch (cfg_.method) {
    case SamplerMethod::rejection:
      return sample_rejection(cfg_, rng);
    case SamplerMethod::sequential:
      return (*sequential_)(rng);
    case SamplerMethod::mcmc: {
      std::size_t steps = cfg_.mcmc_thinning + 1;
      if (!burned_in_) {
        chain_.resize(cfg_.n);
        std::iota(chain_.begin(), chain_.end(), Index{0});
        steps = cfg_.mcmc_burn_in;
        burned_in_ = true;
      }
      for (std::size_t s = 0; s < steps; ++s) chain_step(chain_, cfg_.r, rng);
      return from_trusted_mapping(chain_);
    }
  }
  throw DomainError("unknown sampler method");
}

std::vector<Permutation> draw_samples(const SamplerConfig& cfg, std::size_t count,
                                      std::size_t threads) {
  const Sampler prototype(cfg);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::vector<Permutation>> parts(chunks);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Sampler sampler = prototype;
    Rng rng = make_rng(cfg.seed, c);
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    parts[c].reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) parts[c].push_back(sampler.draw(rng));
  });
  std::vector<Permutation> out;
  out.reserve(count);
  for (auto& part : parts) {
    for (auto& p : part) out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t TransitionMatrix::numerator(std::size_t i, std::size_t j) const {
  const auto& row = rows.at(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  return (it != row.end() && it->first == j) ? it->second : 0;
}

Rational TransitionMatrix::probability(std::size_t i, std::size_t j) const {
  return Rational(numerator(i, j), denominator);
}

bool TransitionMatrix::is_row_stochastic() const {
  return std::all_of(rows.begin(), rows.end(), [&](const auto& row) {
    std::uint64_t total = 0;
    for (const auto& [col, num] : row) total += num;
    return total == denominator;
  });
}

bool TransitionMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, num] : rows[i]) {
      if (numerator(j, i) != num) return false;
    }
  }
  return true;
}

bool TransitionMatrix::uniform_is_stationary() const {
  // (uniform P)_j = (1/|S|) sum_i P(i, j); stationary iff every column sums
  // to one, i.e. to `denominator` in numerator units.
  std::vector<std::uint64_t> column(rows.size(), 0);
  for (const auto& row : rows) {
    for (const auto& [j, num] : row) column[j] += num;
  }
  return std::all_of(column.begin(), column.end(), [&](std::uint64_t c) { return c == denominator; });
}

TransitionMatrix stationarity_matrix(std::size_t n, std::size_t r, std::size_t n_cap) {
  if (n > n_cap) {
    throw ResourceError("stationarity_matrix: n = " + std::to_string(n) + " above the cap of " +
                        std::to_string(n_cap));
  }
  detail::require(n >= 1 && r >= 1 && r <= n, "stationarity_matrix: need 1 <= r <= n");
  TransitionMatrix matrix;
  matrix.states = enumerate_restricted(n, r);
  matrix.denominator = n >= 2 ? n * (n - 1) / 2 : 1;
  matrix.rows.resize(matrix.states.size());
  const auto index_of = [&](const Permutation& p) {
    auto it = std::lower_bound(matrix.states.begin(), matrix.states.end(), p);
    return static_cast<std::size_t>(it - matrix.states.begin());
  };
  for (std::size_t i = 0; i < matrix.states.size(); ++i) {
    std::vector<std::uint64_t> tally(matrix.states.size(), 0);
    if (n == 1) tally[i] = 1;
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        const Permutation next = apply_transposition(matrix.states[i], Transposition(a, b));
        ++tally[longest_cycle(next) <= r ? index_of(next) : i];
      }
    }
    for (std::size_t j = 0; j < tally.size(); ++j) {
      if (tally[j]) matrix.rows[i].emplace_back(j, tally[j]);
    }
  }
  return matrix;
}

}  // namespace permcycles
