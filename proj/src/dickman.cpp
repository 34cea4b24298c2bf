#include "permcycles/dickman.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "permcycles/errors.hpp"

namespace permcycles {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr unsigned kMaxDepth = 12;
constexpr int kPicardLimit = 200;

// Chebyshev sum c_0/2 + sum_{m>=1} c_m T_m(x).
double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + 0.5 * c[0];
}

// Antiderivative (in x) of the series c; the c_0/2 convention keeps the
// usual (c_{m-1} - c_{m+1}) / 2m rule uniform down to m = 1.
std::vector<double> antiderivative(const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    const double upper = m + 1 < n ? c[m + 1] : 0.0;
    out[m] = (c[m - 1] - upper) / (2.0 * static_cast<double>(m));
  }
  return out;
}

double node(std::size_t i, std::size_t n) {
  return std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
}

// Values at the n Chebyshev nodes -> coefficients.
std::vector<double> fit(const std::vector<double>& values) {
  constexpr std::size_t n = DickmanEvaluator::kChebyshevNodes;
  static const auto basis = [] {
    std::vector<double> b(n * n);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t i = 0; i < n; ++i)
        b[m * n + i] = std::cos(std::numbers::pi * static_cast<double>(m) *
                                (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return b;
  }();
  std::vector<double> c(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i] * basis[m * n + i];
    c[m] = 2.0 * sum / static_cast<double>(n);
  }
  return c;
}

}  // namespace

DickmanEvaluator::DickmanEvaluator(double panel_tolerance, double t_max)
    : tolerance_(panel_tolerance), t_max_(t_max) {
  detail::require(panel_tolerance > 0 && panel_tolerance < 1e-3,
                  "DickmanEvaluator: panel tolerance must lie in (0, 1e-3)");
  detail::require(t_max >= 1, "DickmanEvaluator: t_max must be >= 1");
}

void DickmanEvaluator::check_domain(double t) const {
  if (!(t >= 0.0)) throw DomainError("rho: t must be >= 0");
  if (t > t_max_) {
    throw DomainError("rho: t = " + std::to_string(t) + " exceeds t_max = " +
                      std::to_string(t_max_));
  }
}

double DickmanEvaluator::scaled_on_panel(std::size_t j, double x) const {
  if (j == 0) return 1.0;
  const Panel& panel = panels_[j - 1];
  return clenshaw(panel.cheb, 2.0 * (x - static_cast<double>(j)) - 1.0);
}

double DickmanEvaluator::panel_integral(std::size_t j, double a, double b) const {
  if (b <= a) return 0.0;
  const auto integrand = [this, j](double s) { return scaled_on_panel(j, s); };
  // On very short pieces the error estimate bottoms out above a relative
  // 1e-12 and the recursion runs to max depth; one 61-point pass is already
  // exact to rounding there (the integrand is a degree-31 polynomial).
  const unsigned depth = b - a < 1.0 / 64 ? 0 : kMaxDepth;
  return Kronrod::integrate(integrand, a, b, depth, tolerance_);
}

// Panel k holds h_k(t) = rho(t)/rho(k) on [k, k+1]. From t rho(t) = int_{t-1}^t rho:
//   t h_k(t) = q_k int_{t-1}^k h_{k-1} + int_k^t h_k,   q_k = rho(k-1)/rho(k),
// every term positive, so relative error does not build up across panels.
void DickmanEvaluator::ensure_panels(std::size_t k) const {
  if (k < 1) return;
  {
    std::shared_lock lock(mutex_);
    if (panels_.size() >= k) return;
  }
  std::unique_lock lock(mutex_);
  constexpr std::size_t nodes = kChebyshevNodes;
  while (panels_.size() < k) {
    const std::size_t j = panels_.size() + 1;
    const double left = static_cast<double>(j);
    Panel panel;
    std::vector<double> h(nodes);
    if (j == 1) {
      panel.log_left = 0.0;
      panel.left_over_prev = 1.0;
      for (std::size_t i = 0; i < nodes; ++i) h[i] = 1.0 - std::log(1.5 + 0.5 * node(i, nodes));
      panel.cheb = fit(h);
      panels_.push_back(std::move(panel));
      continue;
    }
    const Panel& prev = panels_.back();
    const double q = left / panel_integral(j - 1, left - 1.0, left);
    panel.log_left = prev.log_left - std::log(q);
    panel.left_over_prev = q;

    std::vector<double> delayed(nodes), t(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      t[i] = left + 0.5 * (node(i, nodes) + 1.0);
      delayed[i] = q * panel_integral(j - 1, t[i] - 1.0, left);
      h[i] = 1.0;
    }
    for (int it = 0; it < kPicardLimit; ++it) {
      const auto F = antiderivative(fit(h));
      const double F_left = clenshaw(F, -1.0);
      double change = 0.0;
      for (std::size_t i = 0; i < nodes; ++i) {
        const double self = 0.5 * (clenshaw(F, node(i, nodes)) - F_left);
        const double next = (delayed[i] + self) / t[i];
        change = std::max(change, std::fabs(next - h[i]));
        h[i] = next;
      }
      if (change <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    }
    panel.cheb = fit(h);
    panels_.push_back(std::move(panel));
  }
}

double DickmanEvaluator::log_rho_on_panel(std::size_t k, double t) const {
  if (k == 0) return 0.0;
  if (k == 1) return std::log1p(-std::log(t));
  const Panel& panel = panels_[k - 1];
  return panel.log_left + std::log(scaled_on_panel(k, t));
}

double DickmanEvaluator::log_rho(double t) const {
  check_domain(t);
  if (t <= 1.0) return 0.0;
  const auto k = static_cast<std::size_t>(std::floor(t));
  ensure_panels(k);
  std::shared_lock lock(mutex_);
  return log_rho_on_panel(k, t);
}

double DickmanEvaluator::rho(double t) const {
  check_domain(t);
  if (t <= 1.0) return 1.0;
  if (t < 2.0) return 1.0 - std::log(t);
  return std::exp(log_rho(t));
}

const DickmanEvaluator& default_dickman() {
  static const DickmanEvaluator evaluator;
  return evaluator;
}

XiEvaluator::XiEvaluator(double newton_tolerance, int max_iterations)
    : tolerance_(newton_tolerance), max_iterations_(max_iterations) {
  detail::require(newton_tolerance > 0, "XiEvaluator: tolerance must be positive");
  detail::require(max_iterations > 0, "XiEvaluator: max_iterations must be positive");
}

double XiEvaluator::operator()(double t) const {
  if (!(t > 1.0)) throw DomainError("xi: t must be > 1 (xi(1) = 0 is only a limit)");
  const auto f = [t](double x) { return std::expm1(x) - t * x; };
  double lo = std::log(t);
  double hi = 2.0 * std::log(t);
  double x = hi;
  for (int it = 0; it < max_iterations_; ++it) {
    const double fx = f(x);
    if (std::fabs(fx) <= tolerance_ * (1.0 + t * x)) return x;
    if (fx > 0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = std::exp(x) - t;
    double next = slope > 0 ? x - fx / slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  return x;
}

double xi(double t) {
  static const XiEvaluator evaluator;
  return evaluator(t);
}

double xi_or_limit(double t) {
  if (t == 1.0) return 0.0;
  return xi(t);
}

RhoRatioReport rho_ratio_check(const DickmanEvaluator& dickman, double t, double v) {
  detail::require(t >= 1.0, "rho_ratio_check: need t >= 1");
  detail::require(v >= 0.0 && v <= t, "rho_ratio_check: need 0 <= v <= t");
  RhoRatioReport rep{};
  rep.t = t;
  rep.v = v;
  rep.ratio = std::exp(dickman.log_rho(t - v) - dickman.log_rho(t));
  rep.predicted = std::exp(v * xi_or_limit(t));
  rep.relative_gap = std::fabs(rep.ratio / rep.predicted - 1.0);
  rep.large_shift = v > 3.0;
  return rep;
}

GammaBoundReport gamma_bound_check(const DickmanEvaluator& dickman, double t) {
  detail::require(t >= 0.0, "gamma_bound_check: need t >= 0");
  GammaBoundReport rep{};
  rep.t = t;
  rep.log_rho = dickman.log_rho(t);
  rep.log_inverse_gamma = -std::lgamma(t + 1.0);
  rep.holds = rep.log_rho <= rep.log_inverse_gamma + 10.0 * dickman.panel_tolerance();
  return rep;
}

}  // namespace permcycles
