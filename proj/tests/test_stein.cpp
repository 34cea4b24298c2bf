#include "doctest.h"

#include <cmath>

#include "permcycles/errors.hpp"
#include "permcycles/rng.hpp"
#include "permcycles/stein.hpp"

using namespace permcycles;

namespace {
Permutation P(std::vector<Index> m) { return Permutation(std::move(m)); }

// r = n: E[count_A] from E[L m_L] = 1, E[m_i m_j] = 1/(ij), E[m_i (m_i - 1)] = 1/i^2.
double expected_scaled_a_full(std::size_t n, std::size_t k, std::size_t d) {
  double count = 0;
  for (std::size_t L = d + 1; L <= n; ++L)
    if (L < 2 * k || L > d + k) count += 1;
  for (std::size_t l = 1; 2 * l < k; ++l) count += 1;
  if (k % 2 == 0) count += 0.5;
  return count / (static_cast<double>(k) * static_cast<double>(n - 1));
}
}  // namespace

TEST_CASE("stein parameters") {
  const auto s = SteinParameters::make(10, 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(s.alpha[k - 1] == 1.0);
    CHECK(s.lambda[k - 1] == Rational(1, static_cast<long>(k)));
    CHECK(s.c[k - 1] == Rational(10, static_cast<long>(2 * k)));
  }
  CHECK_THROWS_AS(SteinParameters::make(10, 0), DomainError);
}

TEST_CASE("event probabilities by enumeration") {
  const auto id6 = Permutation::identity(6);
  const auto a = event_probabilities_exact(id6, 1, 1, 6);
  CHECK(a.count_a == 0);
  CHECK(a.count_b == 0);
  CHECK(a.n_transpositions == 15);
  const auto b = event_probabilities_exact(id6, 2, 2, 6);
  CHECK(b.p_a() == 1);
  CHECK(b.p_b() == 0);
  CHECK(event_probabilities_exact(Permutation::identity(4), 2, 2, 3).p_a() == 1);

  const auto c = event_probabilities_exact(P({1, 2, 0, 4, 3}), 2, 2, 3);
  CHECK(c.p_a() == Rational(3, 10));
  CHECK(c.p_b() == Rational(1, 10));

  const auto three_twos = P({1, 0, 3, 2, 5, 4});
  const auto d = event_probabilities_exact(three_twos, 2, 2, 3);
  CHECK(d.p_a() == 0);
  CHECK(d.p_b() == Rational(1, 5));

  CHECK_THROWS_AS(event_probabilities_exact(P({1, 2, 0}), 1, 1, 2), DomainError);
  CHECK_THROWS_AS(event_probabilities_exact(id6, 2, 1, 3), DomainError);
  CHECK_THROWS_AS(event_probabilities_exact(id6, 1, 3, 3), DomainError);
}

TEST_CASE("event probabilities stay in range") {
  for_each_permutation(6, [](const Permutation& s) {
    const auto L = longest_cycle(s);
    for (std::size_t r = std::max<std::size_t>(L, 2); r <= 6; ++r)
      for (std::size_t d = 1; d < std::min<std::size_t>(r, 4); ++d)
        for (std::size_t k = 1; k <= d; ++k) {
          const auto t = event_probabilities_exact(s, k, d, r);
          CHECK(t.count_a + t.count_b <= t.n_transpositions);
        }
  });
}

TEST_CASE("closed-form counts match enumeration") {
  for (std::size_t n = 2; n <= 6; ++n)
    for_each_permutation(n, [n](const Permutation& s) {
      const auto hist = cycle_length_histogram(s);
      const auto L = longest_cycle(s);
      for (std::size_t r = std::max<std::size_t>(L, 2); r <= n; ++r)
        for (std::size_t d = 1; d < r; ++d)
          for (std::size_t k = 1; k <= d; ++k) {
            const auto e = event_probabilities_exact(s, k, d, r);
            const auto c = event_counts_closed_form(hist, n, k, d, r);
            CHECK(e.count_a == c.count_a);
            CHECK(e.count_b == c.count_b);
          }
    });
  std::vector<std::uint32_t> bad{0, 1, 0};
  CHECK_THROWS_AS(event_counts_closed_form(bad, 2, 1, 1, 2), DomainError);
}

TEST_CASE("first display for P[A_k]") {
  CHECK(lemma9_formula(Permutation::identity(6), 2, 2) == 1);
  // one cycle of length d + k + 1: the first sum alone gives 2/(n-1)
  const auto cyc = P({1, 2, 3, 4, 5, 0});
  CHECK(lemma9_formula(cyc, 2, 3) == Rational(2, 5));
  CHECK(event_probabilities_exact(cyc, 2, 3, 6).p_a() == Rational(2, 5));

  Rng rng = make_rng(19);
  int tested = 0;
  while (tested < 40) {
    std::vector<Index> m(8);
    for (Index i = 0; i < 8; ++i) m[i] = i;
    for (std::size_t i = 7; i > 0; --i) std::swap(m[i], m[uniform_below(rng, i + 1)]);
    const Permutation s(m);
    if (longest_cycle(s) > 5) continue;
    ++tested;
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto e = event_probabilities_exact(s, k, 3, 5);
      CHECK(lemma9_formula(s, k, 3) == e.p_a());
      CHECK(lemma9_simplified_formula(s, k, 3) == e.p_a());
    }
  }
}

TEST_CASE("first display for P[B_k]") {
  // no k-cycle
  CHECK(lemma10_formula(Permutation::identity(5), 2, 2, 3) == 0);
  // a 2-cycle and a 4-cycle, d = 2, r = 6: merging is the only way to lose the 2-cycle
  const auto s = P({1, 0, 3, 4, 5, 2});
  const auto e = event_probabilities_exact(s, 2, 2, 6);
  CHECK(lemma10_formula(s, 2, 2, 6) == e.p_b());
  CHECK(e.p_b() == Rational(3, 5));
  const auto three_twos = P({1, 0, 3, 2, 5, 4});
  CHECK(lemma10_formula(three_twos, 2, 2, 3) ==
        event_probabilities_exact(three_twos, 2, 2, 3).p_b());

  // 3-cycle + 2-cycle with r = 4, k = 3: merging them would make a 5-cycle,
  // which the chain rejects; the display still counts those transpositions.
  const auto w = P({1, 2, 0, 4, 3});
  const auto tally = event_probabilities_exact(w, 3, 3, 4);
  CHECK(tally.p_b() == Rational(3, 10));
  CHECK(lemma10_formula(w, 3, 3, 4) == Rational(9, 10));
  CHECK(lemma10_capacity_formula(w, 3, 3, 4) == tally.p_b());
  // simplified display as printed starts from W_k rather than a probability
  CHECK(lemma10_simplified_as_printed(w, 3, 3, 4) != tally.p_b());
}

TEST_CASE("display sweep up to n = 5") {
  const auto rep = lemma_sweep(5, 3, 5);
  CHECK(rep.closed_form_mismatches == 0);
  CHECK(rep.lemma9_mismatches == 0);
  CHECK(rep.lemma9_simplified_mismatches == 0);
  CHECK(rep.lemma10_mismatches == 20);
  CHECK(rep.lemma10_mismatches_by_n[5] == 20);
  CHECK(rep.lemma10_capacity_mismatches == 0);
  CHECK(rep.lemma10_simplified_mismatches > 0);
  std::size_t lemma10 = 0, simplified = 0;
  for (const auto& m : rep.catalogue) {
    if (m.form == "lemma10") {
      ++lemma10;
      CHECK(m.enumerated == event_probabilities_exact(m.witness, m.k, m.d, m.r).p_b());
      CHECK(m.formula == lemma10_formula(m.witness, m.k, m.d, m.r));
      CHECK(m.formula > m.enumerated);
    }
    if (m.form == "lemma10_simplified") ++simplified;
  }
  CHECK(lemma10 == 20);
  CHECK(simplified == 5);

  const auto one = lemma_check(5, 4, 3);
  CHECK(one.lemma9_mismatches == 0);
  CHECK(one.lemma10_capacity_mismatches == 0);
  CHECK(one.lemma10_mismatches > 0);
  CHECK_THROWS_AS(lemma_check(9, 4, 3), ResourceError);
}

TEST_CASE("exact Stein terms") {
  const auto a = stein_terms_exact(6, 3, 1);
  CHECK(a.total == Rational(50, 69));
  CHECK(a.states == 276);
  CHECK(stein_terms_exact(6, 3, 2).total == Rational(301, 184));
  const auto c = stein_terms_exact(6, 6, 1);
  CHECK(c.total == Rational(11, 45));
  CHECK(c.terms[0].term_a == Rational(13, 45));
  CHECK(c.terms[0].term_b == Rational(1, 5));
  CHECK(stein_terms_exact(6, 6, 2).total == Rational(59, 96));

  const auto full = stein_terms_exact(8, 8, 3);
  CHECK(full.terms[0].mean_scaled_a == Rational(4, 7));
  CHECK(full.terms[1].mean_scaled_a == Rational(1, 4));
  CHECK(full.terms[2].mean_scaled_a == Rational(5, 21));

  CHECK_THROWS_AS(stein_terms_exact(9, 5, 2), ResourceError);
  CHECK_THROWS_AS(stein_terms_exact(6, 3, 3), DomainError);
}

TEST_CASE("identity, d = k = 1: no single fixed point is ever lost") {
  const auto id = Permutation::identity(7);
  const auto t = event_probabilities_exact(id, 1, 1, 7);
  CHECK(t.p_b() == 0);  // every move merges two fixed points at once
  // so |W_1 - c_1 P[B_1 | id]| = n
  const Rational term = abs(Rational(7) - Rational(7, 2) * t.p_b());
  CHECK(term == 7);
}

TEST_CASE("Monte Carlo terms against exact ones") {
  const auto exact = stein_terms_exact(7, 4, 2);
  const auto mc = stein_terms_mc(7, 4, 2, 40'000, 3, 2);
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto& e = exact.terms[k - 1];
    const auto& m = mc.terms[k - 1];
    CHECK(std::fabs(m.term_a.mean - to_double(e.term_a)) <= 5 * m.term_a.standard_error + 1e-12);
    CHECK(std::fabs(m.term_b.mean - to_double(e.term_b)) <= 5 * m.term_b.standard_error + 1e-12);
  }
  CHECK(std::fabs(mc.total.mean - to_double(exact.total)) <= 5 * mc.total.standard_error);

  const auto again = stein_terms_mc(7, 4, 2, 5'000, 3, 1);
  const auto threaded = stein_terms_mc(7, 4, 2, 5'000, 3, 3);
  CHECK(again.total.mean == threaded.total.mean);
  CHECK(again.total.standard_error == threaded.total.standard_error);
  CHECK_THROWS_AS(stein_terms_mc(7, 4, 2, 0, 3), DomainError);
}

TEST_CASE("c_k P[A_k] at n = 10^4, r = n") {
  const std::size_t n = 10'000, d = 3;
  const auto mc = stein_terms_mc(n, n, d, 10'000, 42, 1);
  for (std::size_t k = 1; k <= d; ++k) {
    const auto& est = mc.terms[k - 1].scaled_a;
    const double want = expected_scaled_a_full(n, k, d);
    INFO("k = " << k << " mean " << est.mean << " se " << est.standard_error << " exact " << want);
    CHECK(std::fabs(est.mean - want) <= 5 * est.standard_error);
    // the exact mean sits within the first-display bound of 1/k
    CHECK(std::fabs(want - 1.0 / static_cast<double>(k)) <= lemma9_leading_bound(n, k, d));
  }
}
