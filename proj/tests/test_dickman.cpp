#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "permcycles/dickman.hpp"
#include "permcycles/errors.hpp"

using namespace permcycles;

namespace {
double rel(double got, double want) { return std::fabs(got / want - 1.0); }
}  // namespace

TEST_CASE("rho on the first two panels") {
  const auto& rho = default_dickman();
  CHECK(rho.rho(0.0) == 1.0);
  CHECK(rho.rho(0.7) == 1.0);
  CHECK(rho.rho(1.0) == 1.0);
  CHECK(rel(rho.rho(2.0), 1.0 - std::numbers::ln2) <= 1e-14);
  for (double t = 1.0; t <= 2.0; t += 1.0 / 64)
    CHECK(rel(rho.rho(t), 1.0 - std::log(t)) <= 1e-10);
  // left and right of t = 2 agree
  CHECK(rel(rho.rho(2.0 - 1e-13), rho.rho(2.0)) <= 1e-11);
}

TEST_CASE("rho against a fixed-step integrator") {
  std::vector<double> ts;
  for (int i = 0; i <= 32; ++i) ts.push_back(2.0 + 0.25 * i);
  const auto want = oracle::rho_trapezoid(ts);
  const auto& rho = default_dickman();
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(rel(rho.rho(ts[i]), static_cast<double>(want[i])) <= 1e-9);
  // 3.5 sits in the middle of a panel
  CHECK(rel(rho.rho(3.5), static_cast<double>(want[6])) <= 1e-10);
}

TEST_CASE("rho known values") {
  const auto& rho = default_dickman();
  // step-halving trapezoid with Richardson extrapolation, run offline
  CHECK(rel(rho.rho(10.0), 2.77017183772596e-11) <= 1e-10);
  CHECK(rel(rho.rho(20.0), 2.46178282879e-29) <= 1e-9);
  CHECK(rel(rho.rho(50.0), 6.7153344971e-97) <= 1e-9);
  // far tail only in log space
  CHECK(std::isfinite(rho.log_rho(200.0)));
  CHECK(rho.log_rho(200.0) < -1000.0);
}

TEST_CASE("rho domain") {
  const auto& rho = default_dickman();
  CHECK_THROWS_AS(rho.rho(-0.1), DomainError);
  CHECK_THROWS_AS(rho.rho(200.5), DomainError);
  CHECK_THROWS_AS(DickmanEvaluator(0.0), DomainError);
  CHECK_NOTHROW(DickmanEvaluator(1e-10, 500.0).log_rho(450.0));
}

TEST_CASE("rho structure") {
  const auto& rho = default_dickman();
  double prev = rho.rho(0.0);
  for (double t = 0.05; t <= 30.0; t += 0.05) {
    const double v = rho.rho(t);
    CHECK(v > 0);
    CHECK(v <= prev + 1e-11);
    prev = v;
  }
  for (int k = 2; k <= 40; ++k) {
    const double kk = static_cast<double>(k);
    CHECK(std::fabs(rho.log_rho(kk) - rho.log_rho(std::nextafter(kk, 0.0))) <= 1e-11);
  }
  const double h = 1e-5;
  for (double t = 1.3; t < 10.0; t += 0.37) {
    const double deriv = (rho.rho(t + h) - rho.rho(t - h)) / (2 * h);
    CHECK(rel(deriv, -rho.rho(t - 1.0) / t) <= 1e-6);
  }
}

TEST_CASE("rho refinement") {
  const DickmanEvaluator coarse(1e-10), fine(5e-11);
  for (double t = 0.5; t <= 20.0; t += 0.5)
    CHECK(rel(fine.rho(t), coarse.rho(t)) <= 1e-10);
}

TEST_CASE("rho gamma bound") {
  const auto& rho = default_dickman();
  for (double t = 0.0; t <= 50.0; t += 0.125) CHECK(gamma_bound_check(rho, t).holds);
  const auto one = gamma_bound_check(rho, 1.0);
  CHECK(one.log_rho == 0.0);
  CHECK(one.log_inverse_gamma == doctest::Approx(0.0));
  const auto two = gamma_bound_check(rho, 2.0);
  CHECK(std::exp(two.log_rho) == doctest::Approx(1 - std::numbers::ln2));
  CHECK(std::exp(two.log_inverse_gamma) == doctest::Approx(0.5));
  const auto ten = gamma_bound_check(rho, 10.0);
  CHECK(ten.log_inverse_gamma - ten.log_rho > 9.0);
}

TEST_CASE("rho concurrent first use") {
  const DickmanEvaluator shared;
  std::vector<double> got(4);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] { got[w] = shared.log_rho(30.0 + 10.0 * w); });
  for (auto& t : pool) t.join();
  const DickmanEvaluator serial;
  for (int w = 0; w < 4; ++w) CHECK(got[w] == serial.log_rho(30.0 + 10.0 * w));
}

TEST_CASE("xi values") {
  CHECK(xi(std::numbers::e) == doctest::Approx(1.7507867226801463676).epsilon(1e-13));
  CHECK(xi(2.0) == doctest::Approx(1.256431208626169677).epsilon(1e-13));
  CHECK(xi_or_limit(1.0) == 0.0);
  CHECK_THROWS_AS(xi(1.0), DomainError);
  CHECK_THROWS_AS(xi(0.5), DomainError);
  // near t = 1, xi ~ 2 (t - 1)
  CHECK(xi(1.0 + 1e-6) == doctest::Approx(2e-6).epsilon(1e-5));
}

TEST_CASE("xi residual and bracket") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> logt(0.0, std::log(1e6));
  for (int i = 0; i < 2000; ++i) {
    const double t = std::max(std::exp(logt(gen)), 1.0 + 1e-9);
    if (t <= 1.0) continue;
    const double x = xi(t);
    CHECK(std::fabs(std::expm1(x) - t * x) <= 1e-12 * (1 + t * x));
    CHECK(x > std::log(t));
    CHECK(x <= 2 * std::log(t));
  }
}

TEST_CASE("rho ratio report") {
  const auto& rho = default_dickman();
  const auto zero = rho_ratio_check(rho, 5.0, 0.0);
  CHECK(zero.ratio == 1.0);
  CHECK(zero.predicted == 1.0);
  CHECK(zero.relative_gap == 0.0);
  const auto two = rho_ratio_check(rho, 2.0, 1.0);
  CHECK(two.ratio == doctest::Approx(3.2588913532709294546).epsilon(1e-12));
  CHECK(two.predicted == doctest::Approx(3.512862417252339354).epsilon(1e-12));
  CHECK(rho_ratio_check(rho, 20.0, 1.0).relative_gap <= 0.25);
  CHECK(rho_ratio_check(rho, 20.0, 4.0).large_shift);
  CHECK_FALSE(rho_ratio_check(rho, 20.0, 3.0).large_shift);
  CHECK_THROWS_AS(rho_ratio_check(rho, 0.5, 0.1), DomainError);
  CHECK_THROWS_AS(rho_ratio_check(rho, 3.0, 4.0), DomainError);
}
