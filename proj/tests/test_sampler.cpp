#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "permcycles/count_table.hpp"
#include "permcycles/errors.hpp"
#include "permcycles/sampler.hpp"

using namespace permcycles;

namespace {

SamplerConfig config(std::size_t n, std::size_t r, SamplerMethod m, std::uint64_t seed = 1) {
  SamplerConfig c;
  c.n = n;
  c.r = r;
  c.method = m;
  c.seed = seed;
  c.mcmc_burn_in = 200;
  c.mcmc_thinning = 30;
  return c;
}

std::map<Permutation, std::size_t> tally(const std::vector<Permutation>& xs) {
  std::map<Permutation, std::size_t> out;
  for (const auto& p : xs) ++out[p];
  return out;
}

std::map<std::vector<std::size_t>, std::size_t> cycle_types(const std::vector<Permutation>& xs) {
  std::map<std::vector<std::size_t>, std::size_t> out;
  for (const auto& p : xs) ++out[cycle_structure(p).lengths];
  return out;
}

}  // namespace

TEST_CASE("sampler config validation") {
  CHECK_THROWS_AS(config(0, 1, SamplerMethod::sequential).validate(), DomainError);
  CHECK_THROWS_AS(config(3, 4, SamplerMethod::sequential).validate(), DomainError);
  CHECK_THROWS_AS(config(3, 0, SamplerMethod::sequential).validate(), DomainError);
  CHECK(config(10, 4, SamplerMethod::mcmc).u() == doctest::Approx(2.5));
  CHECK(parse_sampler_method("mcmc") == SamplerMethod::mcmc);
  CHECK(to_string(SamplerMethod::rejection) == "rejection");
  CHECK_THROWS_AS(parse_sampler_method("gibbs"), DomainError);
}

TEST_CASE("rejection sampler") {
  Rng rng = make_rng(3);
  std::uint64_t draws = 0;
  (void)sample_rejection(config(8, 8, SamplerMethod::rejection), rng, &draws);
  CHECK(draws == 1);
  CHECK(sample_rejection(config(3, 1, SamplerMethod::rejection), rng) == Permutation::identity(3));

  std::uint64_t total = 0;
  const std::size_t trials = 100'000;
  for (std::size_t i = 0; i < trials; ++i) {
    (void)sample_rejection(config(6, 3, SamplerMethod::rejection), rng, &draws);
    total += draws;
  }
  const double nu = 23.0 / 60.0;
  const double rate = static_cast<double>(trials) / static_cast<double>(total);
  const double se = std::sqrt(nu * (1 - nu) / static_cast<double>(total));
  CHECK(std::fabs(rate - nu) <= 3 * se);

  auto tight = config(10, 1, SamplerMethod::rejection);
  tight.retry_cap = 5;
  CHECK_THROWS_AS(sample_rejection(tight, rng), ResourceError);
}

TEST_CASE("sequential sampler support and first cycle law") {
  const CountTable t4(4, 2, TableMode::exact);
  const SequentialSampler small(4, t4);
  Rng rng = make_rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto lengths = cycle_structure(small(rng)).lengths;
    CHECK(*std::max_element(lengths.begin(), lengths.end()) <= 2);
  }

  const CountTable t6(6, 6, TableMode::exact);
  const SequentialSampler full(6, t6);
  std::map<std::size_t, std::size_t> first;
  const std::size_t N = 60'000;
  for (std::size_t i = 0; i < N; ++i) ++first[cycle_structure(full(rng)).cycle_length[0]];
  CHECK(oracle::uniform_gof_p_value(first, 6, N) > 1e-3);

  CHECK_THROWS_AS(SequentialSampler(7, t6), DomainError);
}

TEST_CASE("samplers are uniform on S_6^3") {
  const auto states = enumerate_restricted(6, 3);
  const std::size_t N = 100'000;
  for (auto m : {SamplerMethod::sequential, SamplerMethod::rejection, SamplerMethod::mcmc}) {
    const auto xs = draw_samples(config(6, 3, m, 2024), N);
    for (const auto& p : xs) REQUIRE(longest_cycle(p) <= 3);
    const double pv = oracle::uniform_gof_p_value(tally(xs), states.size(), N);
    INFO(to_string(m) << " p-value " << pv);
    CHECK(pv > 1e-3);
  }
}

TEST_CASE("sequential and rejection agree on S_8^4") {
  const std::size_t N = 100'000;
  const auto a = draw_samples(config(8, 4, SamplerMethod::sequential, 5), N);
  const auto b = draw_samples(config(8, 4, SamplerMethod::rejection, 6), N);
  CHECK(oracle::two_sample_p_value(cycle_types(a), cycle_types(b)) > 1e-3);
}

TEST_CASE("large n sequential draws respect r") {
  const auto xs = draw_samples(config(5000, 700, SamplerMethod::sequential, 9), 50);
  for (const auto& p : xs) CHECK(longest_cycle(p) <= 700);
}

TEST_CASE("draws do not depend on the thread count") {
  for (auto m : {SamplerMethod::sequential, SamplerMethod::rejection, SamplerMethod::mcmc}) {
    const auto cfg = config(12, 5, m, 77);
    const auto one = draw_samples(cfg, 3000, 1);
    CHECK(one == draw_samples(cfg, 3000, 3));
    CHECK(one == draw_samples(cfg, 3000, 1));
    CHECK(one != draw_samples(config(12, 5, m, 78), 3000, 1));
  }
}

TEST_CASE("mcmc step") {
  Rng rng = make_rng(5);
  const auto id = Permutation::identity(3);
  for (int i = 0; i < 50; ++i) CHECK(longest_cycle(mcmc_step(id, 2, rng)) == 2);
  CHECK_THROWS_AS(mcmc_step(Permutation({1, 2, 0}), 2, rng), DomainError);

  const auto m = stationarity_matrix(3, 2);
  REQUIRE(m.states.size() == 4);
  CHECK(m.denominator == 3);
  const auto idx = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::find(m.states.begin(), m.states.end(), p) - m.states.begin());
  };
  CHECK(m.numerator(idx(id), idx(id)) == 0);
  const Permutation swap01({1, 0, 2});
  CHECK(m.numerator(idx(swap01), idx(swap01)) == 2);  // 2 of 3 proposals would make a 3-cycle
  CHECK(m.numerator(idx(swap01), idx(id)) == 1);

  const auto walk = stationarity_matrix(4, 4);
  for (std::size_t i = 0; i < walk.states.size(); ++i) CHECK(walk.numerator(i, i) == 0);
}

TEST_CASE("transition matrix is symmetric and uniform-stationary") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t r = 1; r <= n; ++r) {
      const auto m = stationarity_matrix(n, r);
      CHECK(m.is_row_stochastic());
      CHECK(m.is_symmetric());
      CHECK(m.uniform_is_stationary());
    }
  const auto m = stationarity_matrix(4, 2);
  CHECK(m.states.size() == 10);
  CHECK(m.probability(0, 0) + m.probability(0, 1) <= 1);
  CHECK_THROWS_AS(stationarity_matrix(8, 3), ResourceError);
}
