#pragma once

#include <cstddef>
#include <deque>
#include <shared_mutex>
#include <vector>

namespace permcycles {

/// Dickman's function: rho(t) = 1 on [0, 1] and t rho'(t) + rho(t - 1) = 0.
///
/// Integrating the equation gives t rho(t) = int_{t-1}^t rho(s) ds. On each
/// unit panel [k, k+1] the part of that integral over [t-1, k] lives on the
/// completed panel [k-1, k] (adaptive Gauss-Kronrod); the part over [k, t] is
/// resolved by fixed-point iteration on the panel's own interpolant. All
/// terms are positive, which keeps the relative error flat in t (the form
/// rho(k) - int_k^t rho(s-1)/s ds cancels badly past t ~ 7). A completed panel is kept as a Chebyshev interpolant of
/// rho(t)/rho(k) together with log rho(k); this scaling keeps the panels
/// usable long after rho(t) itself has underflowed a double.
///
/// Panels are built lazily and cached; the cache is append-only and safe to
/// share between threads.
class DickmanEvaluator {
 public:
  explicit DickmanEvaluator(double panel_tolerance = 1e-12, double t_max = 200.0);

  double rho(double t) const;
  double log_rho(double t) const;

  double panel_tolerance() const noexcept { return tolerance_; }
  double t_max() const noexcept { return t_max_; }

  static constexpr std::size_t kChebyshevNodes = 32;

 private:
  struct Panel {
    double log_left;          // log rho(k)
    double left_over_prev;    // rho(k-1) / rho(k)
    std::vector<double> cheb;  // coefficients of rho(t)/rho(k) on [k, k+1]
  };

  void check_domain(double t) const;
  void ensure_panels(std::size_t k) const;
  // rho(x) / rho(j) for x in panel j, j >= 1, from the stored representation.
  double scaled_on_panel(std::size_t j, double x) const;
  // int_a^b rho(s)/rho(j) ds for [a, b] inside panel j (adaptive Gauss-Kronrod).
  double panel_integral(std::size_t j, double a, double b) const;
  // log rho(t) for t in [k, k+1], k >= 1; assumes the panels are ready.
  double log_rho_on_panel(std::size_t k, double t) const;

  double tolerance_;
  double t_max_;
  mutable std::shared_mutex mutex_;
  mutable std::deque<Panel> panels_;  // panels_[k-1] covers [k, k+1]
};

/// Process-wide evaluator with default tolerance and t_max.
const DickmanEvaluator& default_dickman();

/// xi(t): the positive root of e^xi = 1 + t xi, for t > 1.
///
/// Newton's method started at the upper end of the bracket
/// (log t, 2 log t]; on this bracket e^xi - 1 - t xi is convex and
/// increasing, so the iterates decrease monotonically onto the root.
/// Bisection takes over if an iterate ever leaves the bracket.
class XiEvaluator {
 public:
  explicit XiEvaluator(double newton_tolerance = 1e-13, int max_iterations = 200);

  double operator()(double t) const;

  double newton_tolerance() const noexcept { return tolerance_; }

 private:
  double tolerance_;
  int max_iterations_;
};

double xi(double t);

/// xi extended to t = 1 by its limit xi(1) = 0.
double xi_or_limit(double t);

struct RhoRatioReport {
  double t, v;
  double ratio;      // rho(t - v) / rho(t)
  double predicted;  // exp(v xi(t))
  double relative_gap;
  bool large_shift;  // v > 3: outside the bounded-shift regime
};

RhoRatioReport rho_ratio_check(const DickmanEvaluator& dickman, double t, double v);

struct GammaBoundReport {
  double t;
  double log_rho;
  double log_inverse_gamma;  // -lgamma(t + 1)
  bool holds;                // rho(t) <= 1/Gamma(t+1) up to the evaluator tolerance
};

GammaBoundReport gamma_bound_check(const DickmanEvaluator& dickman, double t);

}  // namespace permcycles
