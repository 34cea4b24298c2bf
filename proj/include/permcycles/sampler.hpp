#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "permcycles/config.hpp"
#include "permcycles/count_table.hpp"
#include "permcycles/numeric.hpp"
#include "permcycles/permutation.hpp"
#include "permcycles/rng.hpp"

namespace permcycles {

enum class SamplerMethod { rejection, sequential, mcmc };

std::string to_string(SamplerMethod method);
SamplerMethod parse_sampler_method(const std::string& name);

struct SamplerConfig {
  std::size_t n = 1;
  std::size_t r = 1;
  SamplerMethod method = SamplerMethod::sequential;
  std::uint64_t seed = 0;
  std::size_t mcmc_burn_in = 0;
  std::size_t mcmc_thinning = 0;  // extra chain steps between emitted states
  std::size_t retry_cap = kDefaultRetryCap;

  double u() const { return static_cast<double>(n) / static_cast<double>(r); }
  void validate() const;
};

/// Fisher-Yates draws from S_n until one lands in S_n^r. Acceptance
/// probability is exactly nu(n, r). `draws` (if given) receives the number
/// of draws used.
Permutation sample_rejection(const SamplerConfig& cfg, Rng& rng, std::uint64_t* draws = nullptr);

/// Exact sampler built on the cycle-length law of one element: with m
/// elements left, the next cycle has length k with probability
/// nu(m-k, r) / (m nu(m, r)); its partners and their cyclic order are then
/// uniform. Runs in O(n) expected time.
class SequentialSampler {
 public:
  SequentialSampler(std::size_t n, const CountTable& table);

  Permutation operator()(Rng& rng) const;

  std::size_t n() const noexcept { return n_; }
  std::size_t r() const noexcept { return r_; }

 private:
  std::size_t n_;
  std::size_t r_;
  std::vector<long double> log_nu_;
};

Permutation sample_sequential(const SamplerConfig& cfg, Rng& rng, const CountTable& table);

/// One step of the transposition chain on S_n^r: propose tau uniformly among
/// the n(n-1)/2 transpositions; move to tau o p if that stays in S_n^r.
Permutation mcmc_step(const Permutation& p, std::size_t r, Rng& rng);

/// Any of the three methods behind one interface. Copies share the count
/// table; an MCMC copy starts its own chain at the identity.
class Sampler {
 public:
  explicit Sampler(const SamplerConfig& cfg);

  Permutation draw(Rng& rng);
  const SamplerConfig& config() const noexcept { return cfg_; }

 private:
  SamplerConfig cfg_;
  std::shared_ptr<const SequentialSampler> sequential_;
  std::vector<Index> chain_;
  bool burned_in_ = false;
};

/// `count` draws, produced in chunks of kSampleChunk with chunk c using
/// substream c of cfg.seed; the result does not depend on `threads`.
inline constexpr std::size_t kSampleChunk = 1024;
std::vector<Permutation> draw_samples(const SamplerConfig& cfg, std::size_t count,
                                      std::size_t threads = 1);

/// Exact transition matrix of the chain over S_n^r (lexicographic state
/// order). Entry (i, j) is numerator / denominator with denominator
/// n(n-1)/2 (1 when n = 1).
struct TransitionMatrix {
  std::vector<Permutation> states;
  std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> rows;  // sorted by column
  std::uint64_t denominator = 1;

  std::uint64_t numerator(std::size_t i, std::size_t j) const;
  Rational probability(std::size_t i, std::size_t j) const;
  bool is_row_stochastic() const;
  bool is_symmetric() const;
  bool uniform_is_stationary() const;
};

inline constexpr std::size_t kTransitionMatrixCap = 7;
TransitionMatrix stationarity_matrix(std::size_t n, std::size_t r,
                                     std::size_t n_cap = kTransitionMatrixCap);

}  // namespace permcycles
