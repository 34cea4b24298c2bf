#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "permcycles/numeric.hpp"
#include "permcycles/permutation.hpp"
#include "permcycles/sampler.hpp"

namespace permcycles {

/// lambda_k = 1/k, alpha_k = min{1, 1.4 lambda_k^{-1/2}} (always 1 here),
/// c_k = n / (2k), for k = 1..d.
struct SteinParameters {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<Rational> lambda;
  std::vector<double> alpha;
  std::vector<Rational> c;

  static SteinParameters make(std::size_t n, std::size_t d);
};

/// Conditional probabilities, given sigma, of
///   A_k = {W'_k = W_k + 1, W'_j = W_j for k < j <= d}
///   B_k = {W'_k = W_k - 1, W'_j = W_j for k < j <= d}
/// for one step of the transposition chain, kept as transposition counts.
struct EventTally {
  std::size_t k = 0;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  std::uint64_t n_transpositions = 0;

  Rational p_a() const { return Rational(count_a, n_transpositions); }
  Rational p_b() const { return Rational(count_b, n_transpositions); }
};

/// Applies all n(n-1)/2 transpositions (with the S_n^r rejection rule) and
/// classifies each outcome. Requires sigma in S_n^r and 1 <= k <= d < r.
EventTally event_probabilities_exact(const Permutation& sigma, std::size_t k, std::size_t d,
                                     std::size_t r);

/// Same tally from the cycle-length histogram alone, O(n):
///   A_k: every cycle of length L with d < L < 2k or L > d + k contributes L
///        splits, plus sum over cycle pairs with lengths summing to k of
///        the product of their lengths;
///   B_k: each k-cycle contributes k(k-1)/2 splits plus k L merges with
///        every cycle of length L, d < L <= r - k or d - k < L < k with
///        L + k <= r.
EventTally event_counts_closed_form(std::span<const std::uint32_t> histogram, std::size_t n,
                                    std::size_t k, std::size_t d, std::size_t r);

/// The indicator display for P[A_k] before simplification:
///   2/(n(n-1)) sum_a (1{L(C_a) > d+k} + 1{d < L(C_a) < 2k})
///   + 1/(n(n-1)) sum_a sum_{b != a} 1{C_a != C_b} 1{L(C_a) + L(C_b) = k}.
Rational lemma9_formula(const Permutation& sigma, std::size_t k, std::size_t d);

/// The simplified P[A_k] display:
///   2/(n-1) + 2/(n(n-1)) sum_a (-1{L(C_a) <= d+k} + 1{d < L(C_a) < 2k}) + (merge term).
Rational lemma9_simplified_formula(const Permutation& sigma, std::size_t k, std::size_t d);

/// The indicator display for P[B_k] before simplification:
///   2/(n(n-1)) sum_a sum_{b != a} 1{L(C_a) = k} (1{L(C_b) > d} 1{L(C_b) <= r-k}
///                                              + 1{L(C_b) < k} 1{L(C_b) > d-k})
///   + (k-1)/(n(n-1)) sum_a 1{L(C_a) = k}.
/// The second merge term carries no r constraint, so it can disagree with
/// the chain when k + L(C_b) > r.
Rational lemma10_formula(const Permutation& sigma, std::size_t k, std::size_t d, std::size_t r);

/// lemma10_formula with the missing 1{L(C_b) + k <= r} on the second merge
/// term; agrees with enumeration.
Rational lemma10_capacity_formula(const Permutation& sigma, std::size_t k, std::size_t d,
                                  std::size_t r);

/// The simplified P[B_k] display evaluated literally as printed, i.e. with a
/// leading W_k and a minus sign in front of the double sum.
Rational lemma10_simplified_as_printed(const Permutation& sigma, std::size_t k, std::size_t d,
                                       std::size_t r);

inline constexpr std::size_t kSteinExactCap = 8;

struct FormulaMismatch {
  std::string form;
  Permutation witness;
  std::size_t r = 0, d = 0, k = 0;
  Rational enumerated;
  Rational formula;
};

/// Exhaustive comparison of every display against transposition
/// enumeration over all sigma in S_n^r, 2 <= n <= n_max, d < r <= n,
/// 1 <= k <= d <= d_max.
struct LemmaSweepReport {
  std::size_t n_max = 0;
  std::size_t d_max = 0;
  std::uint64_t checks = 0;
  std::uint64_t closed_form_mismatches = 0;
  std::uint64_t lemma9_mismatches = 0;
  std::uint64_t lemma9_simplified_mismatches = 0;
  std::uint64_t lemma10_mismatches = 0;
  std::uint64_t lemma10_capacity_mismatches = 0;
  std::uint64_t lemma10_simplified_mismatches = 0;
  std::vector<std::uint64_t> lemma10_mismatches_by_n;  // index n
  // Every mismatch of the pre-simplification displays, the capacity form
  // and the closed form; at most `simplified_witness_limit` of the
  // simplified P[B_k] display (it disagrees almost everywhere).
  std::vector<FormulaMismatch> catalogue;
};

LemmaSweepReport lemma_sweep(std::size_t n_max, std::size_t d_max,
                             std::size_t simplified_witness_limit = 20);

/// The same comparisons for one (n, r, d): every sigma in S_n^r, k = 1..d.
LemmaSweepReport lemma_check(std::size_t n, std::size_t r, std::size_t d,
                             std::size_t simplified_witness_limit = 20,
                             std::size_t n_cap = kSteinExactCap);

/// Leading terms of the two expectation bounds (O-terms dropped):
///   E|lambda_k - c_k P[A_k]| <~ 1/(2(n-k)) + (d+3k+1)/(k(n-1))
///   E|W_k - c_k P[B_k]|      <~ (d+k-1)/(k(n-k)) + 4/(n-k)
double lemma9_leading_bound(std::size_t n, std::size_t k, std::size_t d);
double lemma10_leading_bound(std::size_t n, std::size_t k, std::size_t d);

struct SteinTermExact {
  std::size_t k = 0;
  Rational term_a;  // E|lambda_k - c_k P[A_k | sigma]|
  Rational term_b;  // E|W_k - c_k P[B_k | sigma]|
  Rational mean_scaled_a;  // E[c_k P[A_k | sigma]]
};

struct SteinExactReport {
  std::size_t n = 0, r = 0, d = 0;
  std::size_t states = 0;  // |S_n^r|
  std::vector<SteinTermExact> terms;
  Rational total;  // sum_k alpha_k/2 (term_a + term_b)
};

/// Expectations over all of S_n^r, exact. Requires 1 <= d < r <= n <= n_cap.
SteinExactReport stein_terms_exact(std::size_t n, std::size_t r, std::size_t d,
                                   std::size_t n_cap = kSteinExactCap);

struct MeanEstimate {
  double mean = 0;
  double standard_error = 0;
};

struct SteinTermMc {
  std::size_t k = 0;
  MeanEstimate term_a;
  MeanEstimate term_b;
  MeanEstimate scaled_a;  // c_k P[A_k | sigma]
};

struct SteinMcReport {
  std::size_t n = 0, r = 0, d = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<SteinTermMc> terms;
  MeanEstimate total;
};

/// Monte Carlo over sigma drawn by `method`; the per-sigma conditional
/// probabilities are exact (closed form). Deterministic in `seed` for any
/// thread count.
SteinMcReport stein_terms_mc(std::size_t n, std::size_t r, std::size_t d, std::size_t samples,
                             std::uint64_t seed, std::size_t threads = 1,
                             SamplerMethod method = SamplerMethod::sequential);

}  // namespace permcycles
