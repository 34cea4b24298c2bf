#include "permcycles/stein.hpp"

#include <algorithm>
#include <cmath>

#include "permcycles/errors.hpp"
#include "permcycles/parallel.hpp"

namespace permcycles {

namespace {

using detail::require;

void check_event_args(std::size_t n, std::size_t k, std::size_t d, std::size_t r) {
  require(n >= 2, "need n >= 2 for a transposition to exist");
  require(k >= 1 && k <= d, "need 1 <= k <= d");
  require(d < r, "need d < r");
  require(r <= n, "need r <= n");
}

std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

// Per-element cycle lengths and ids, the only thing the displays look at.
struct ElementView {
  std::vector<std::size_t> len;
  std::vector<std::size_t> id;
  std::size_t n() const { return len.size(); }
};

ElementView element_view(const Permutation& p) {
  auto cs = cycle_structure(p);
  return {std::move(cs.cycle_length), std::move(cs.cycle_id)};
}

Rational scaled(std::int64_t numerator, std::size_t n) {
  return Rational(numerator, static_cast<std::int64_t>(n * (n - 1)));
}

Rational lemma9_view(const ElementView& v, std::size_t k, std::size_t d) {
  const std::size_t n = v.n();
  std::int64_t single = 0, merge = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto la = v.len[a];
    single += (la > d + k) + (la > d && la < 2 * k);
    for (std::size_t b = 0; b < n; ++b)
      if (b != a && v.id[a] != v.id[b] && la + v.len[b] == k) ++merge;
  }
  return scaled(2 * single + merge, n);
}

Rational lemma9_simplified_view(const ElementView& v, std::size_t k, std::size_t d) {
  const std::size_t n = v.n();
  std::int64_t single = 0, merge = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto la = v.len[a];
    single += -static_cast<std::int64_t>(la <= d + k) + (la > d && la < 2 * k);
    for (std::size_t b = 0; b < n; ++b)
      if (b != a && v.id[a] != v.id[b] && la + v.len[b] == k) ++merge;
  }
  return Rational(2, static_cast<std::int64_t>(n - 1)) + scaled(2 * single + merge, n);
}

Rational lemma10_view(const ElementView& v, std::size_t k, std::size_t d, std::size_t r,
                      bool capacity) {
  const std::size_t n = v.n();
  std::int64_t pairs = 0, own = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (v.len[a] != k) continue;
    ++own;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const auto lb = v.len[b];
      const bool longer = lb > d && lb + k <= r;
      bool shorter = lb < k && lb + k > d;
      if (capacity) shorter = shorter && lb + k <= r;
      pairs += longer + shorter;
    }
  }
  return scaled(2 * pairs + static_cast<std::int64_t>(k - 1) * own, n);
}

Rational lemma10_printed_view(const ElementView& v, std::size_t k, std::size_t d,
                              std::size_t r) {
  const std::size_t n = v.n();
  std::int64_t pairs = 0, own = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (v.len[a] != k) continue;
    ++own;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const auto lb = v.len[b];
      pairs += -static_cast<std::int64_t>(lb <= d) - static_cast<std::int64_t>(lb + k > r) +
               (lb < k && lb + k > d);
    }
  }
  const Rational w_k(own / static_cast<std::int64_t>(k));
  return w_k - scaled(2 * pairs, n) + scaled(static_cast<std::int64_t>(k - 1) * own, n);
}

// Shared scratch for repeated transposition enumeration.
struct Enumerator {
  std::vector<Index> map;
  std::vector<Index> inverse;
  std::vector<std::uint8_t> seen;
  std::vector<std::uint32_t> hist;

  // Histogram of the current `map`; returns the longest cycle.
  std::size_t histogram() {
    const std::size_t n = map.size();
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(hist.begin(), hist.end(), 0);
    std::size_t longest = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::size_t len = 0;
      for (Index x = static_cast<Index>(s); !seen[x]; x = map[x]) {
        seen[x] = 1;
        ++len;
      }
      ++hist[len];
      longest = std::max(longest, len);
    }
    return longest;
  }

  EventTally run(const Permutation& sigma, std::size_t k, std::size_t d, std::size_t r) {
    const std::size_t n = sigma.size();
    map.assign(sigma.mapping().begin(), sigma.mapping().end());
    inverse.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) inverse[map[i]] = static_cast<Index>(i);
    seen.assign(n, 0);
    hist.assign(n + 1, 0);
    require(histogram() <= r, "sigma must lie in S_n^r");
    const std::vector<std::uint32_t> before(hist.begin(), hist.begin() + d + 1);

    EventTally t;
    t.k = k;
    t.n_transpositions = pair_count(n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        const Index pa = inverse[a], pb = inverse[b];
        map[pa] = b;
        map[pb] = a;
        const std::size_t longest = histogram();
        map[pa] = a;
        map[pb] = b;
        if (longest > r) continue;  // rejected; W unchanged
        bool frozen = true;
        for (std::size_t j = k + 1; j <= d && frozen; ++j) frozen = hist[j] == before[j];
        if (!frozen) continue;
        const auto delta = static_cast<std::int64_t>(hist[k]) - before[k];
        if (delta == 1) ++t.count_a;
        if (delta == -1) ++t.count_b;
      }
    }
    return t;
  }
};

}  // namespace

SteinParameters SteinParameters::make(std::size_t n, std::size_t d) {
  require(d >= 1, "need d >= 1");
  require(n >= 1, "need n >= 1");
  SteinParameters s;
  s.n = n;
  s.d = d;
  for (std::size_t k = 1; k <= d; ++k) {
    s.lambda.emplace_back(1, static_cast<long>(k));
    s.alpha.push_back(std::min(1.0, 1.4 * std::sqrt(static_cast<double>(k))));
    s.c.emplace_back(static_cast<long>(n), static_cast<long>(2 * k));
  }
  return s;
}

EventTally event_probabilities_exact(const Permutation& sigma, std::size_t k, std::size_t d,
                                     std::size_t r) {
  check_event_args(sigma.size(), k, d, r);
  Enumerator e;
  return e.run(sigma, k, d, r);
}

EventTally event_counts_closed_form(std::span<const std::uint32_t> histogram, std::size_t n,
                                    std::size_t k, std::size_t d, std::size_t r) {
  check_event_args(n, k, d, r);
  require(histogram.size() == n + 1, "histogram must have n + 1 entries");
  std::uint64_t weight = 0;
  for (std::size_t L = 1; L <= n; ++L) {
    weight += static_cast<std::uint64_t>(L) * histogram[L];
    require(histogram[L] == 0 || L <= r, "sigma must lie in S_n^r");
  }
  require(weight == n, "histogram does not describe a permutation of n");
  auto h = [&](std::size_t L) -> std::uint64_t { return L <= n ? histogram[L] : 0; };

  EventTally t;
  t.k = k;
  t.n_transpositions = pair_count(n);
  for (std::size_t L = d + 1; L <= n; ++L)
    if (L < 2 * k || L > d + k) t.count_a += L * h(L);
  for (std::size_t l = 1; 2 * l < k; ++l) t.count_a += l * (k - l) * h(l) * h(k - l);
  if (k % 2 == 0) {
    const std::uint64_t half = k / 2, m = h(half);
    t.count_a += half * half * (m * (m > 0 ? m - 1 : 0) / 2);
  }

  const std::uint64_t wk = h(k);
  if (wk > 0) {
    std::uint64_t partners = 0;
    for (std::size_t L = d + 1; L + k <= r; ++L) partners += L * h(L);
    for (std::size_t L = d >= k ? d - k + 1 : 1; L < k && L + k <= r; ++L)
      partners += L * h(L);
    t.count_b = wk * (k * (k - 1) / 2) + wk * k * partners;
  }
  return t;
}

Rational lemma9_formula(const Permutation& sigma, std::size_t k, std::size_t d) {
  require(sigma.size() >= 2, "need n >= 2");
  require(k >= 1 && k <= d, "need 1 <= k <= d");
  return lemma9_view(element_view(sigma), k, d);
}

Rational lemma9_simplified_formula(const Permutation& sigma, std::size_t k, std::size_t d) {
  require(sigma.size() >= 2, "need n >= 2");
  require(k >= 1 && k <= d, "need 1 <= k <= d");
  return lemma9_simplified_view(element_view(sigma), k, d);
}

Rational lemma10_formula(const Permutation& sigma, std::size_t k, std::size_t d, std::size_t r) {
  check_event_args(sigma.size(), k, d, r);
  return lemma10_view(element_view(sigma), k, d, r, false);
}

Rational lemma10_capacity_formula(const Permutation& sigma, std::size_t k, std::size_t d,
                                  std::size_t r) {
  check_event_args(sigma.size(), k, d, r);
  return lemma10_view(element_view(sigma), k, d, r, true);
}

Rational lemma10_simplified_as_printed(const Permutation& sigma, std::size_t k, std::size_t d,
                                       std::size_t r) {
  check_event_args(sigma.size(), k, d, r);
  return lemma10_printed_view(element_view(sigma), k, d, r);
}

namespace {

struct SweepRunner {
  LemmaSweepReport& rep;
  std::size_t simplified_limit;
  std::size_t simplified_logged = 0;
  Enumerator e;

  void check(const Permutation& sigma, const ElementView& v,
             const std::vector<std::uint32_t>& hist, std::size_t r, std::size_t d,
             std::size_t k) {
    const std::size_t n = sigma.size();
    ++rep.checks;
    const EventTally t = e.run(sigma, k, d, r);
    const Rational pa = t.p_a(), pb = t.p_b();
    auto log = [&](const char* form, const Rational& enumerated, const Rational& got) {
      rep.catalogue.push_back({form, sigma, r, d, k, enumerated, got});
    };

    const EventTally c = event_counts_closed_form(hist, n, k, d, r);
    if (c.count_a != t.count_a || c.count_b != t.count_b) {
      ++rep.closed_form_mismatches;
      log("closed_form_a", pa, c.p_a());
      log("closed_form_b", pb, c.p_b());
    }
    if (auto f = lemma9_view(v, k, d); f != pa) {
      ++rep.lemma9_mismatches;
      log("lemma9", pa, f);
    }
    if (auto f = lemma9_simplified_view(v, k, d); f != pa) {
      ++rep.lemma9_simplified_mismatches;
      log("lemma9_simplified", pa, f);
    }
    if (auto f = lemma10_view(v, k, d, r, false); f != pb) {
      ++rep.lemma10_mismatches;
      ++rep.lemma10_mismatches_by_n[n];
      log("lemma10", pb, f);
    }
    if (auto f = lemma10_view(v, k, d, r, true); f != pb) {
      ++rep.lemma10_capacity_mismatches;
      log("lemma10_capacity", pb, f);
    }
    if (auto f = lemma10_printed_view(v, k, d, r); f != pb) {
      ++rep.lemma10_simplified_mismatches;
      if (simplified_logged < simplified_limit) {
        ++simplified_logged;
        log("lemma10_simplified", pb, f);
      }
    }
  }
};

}  // namespace

LemmaSweepReport lemma_sweep(std::size_t n_max, std::size_t d_max,
                             std::size_t simplified_witness_limit) {
  require(n_max >= 2 && n_max <= 9, "sweep needs 2 <= n_max <= 9");
  require(d_max >= 1, "need d_max >= 1");
  LemmaSweepReport rep;
  rep.n_max = n_max;
  rep.d_max = d_max;
  rep.lemma10_mismatches_by_n.assign(n_max + 1, 0);
  SweepRunner run{rep, simplified_witness_limit, 0, {}};

  for (std::size_t n = 2; n <= n_max; ++n) {
    for_each_permutation(n, [&](const Permutation& sigma) {
      const ElementView v = element_view(sigma);
      const auto hist = cycle_length_histogram(sigma);
      const std::size_t longest = *std::max_element(v.len.begin(), v.len.end());
      for (std::size_t r = std::max<std::size_t>(longest, 2); r <= n; ++r)
        for (std::size_t d = 1; d <= std::min(d_max, r - 1); ++d)
          for (std::size_t k = 1; k <= d; ++k) run.check(sigma, v, hist, r, d, k);
    });
  }
  return rep;
}

LemmaSweepReport lemma_check(std::size_t n, std::size_t r, std::size_t d,
                             std::size_t simplified_witness_limit, std::size_t n_cap) {
  require(d >= 1 && d < r && r <= n, "need 1 <= d < r <= n");
  if (n > n_cap)
    throw ResourceError("lemma comparison enumerates S_n^r; n = " + std::to_string(n) +
                        " exceeds the cap " + std::to_string(n_cap));
  LemmaSweepReport rep;
  rep.n_max = n;
  rep.d_max = d;
  rep.lemma10_mismatches_by_n.assign(n + 1, 0);
  SweepRunner run{rep, simplified_witness_limit, 0, {}};
  for (const auto& sigma : enumerate_restricted(n, r)) {
    const ElementView v = element_view(sigma);
    const auto hist = cycle_length_histogram(sigma);
    for (std::size_t k = 1; k <= d; ++k) run.check(sigma, v, hist, r, d, k);
  }
  return rep;
}

double lemma9_leading_bound(std::size_t n, std::size_t k, std::size_t d) {
  require(k >= 1 && k <= d && k < n, "need 1 <= k <= d and k < n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return 1.0 / (2.0 * (nd - kd)) + (static_cast<double>(d) + 3.0 * kd + 1.0) / (kd * (nd - 1.0));
}

double lemma10_leading_bound(std::size_t n, std::size_t k, std::size_t d) {
  require(k >= 1 && k <= d && k < n, "need 1 <= k <= d and k < n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return (static_cast<double>(d) + kd - 1.0) / (kd * (nd - kd)) + 4.0 / (nd - kd);
}

SteinExactReport stein_terms_exact(std::size_t n, std::size_t r, std::size_t d,
                                   std::size_t n_cap) {
  require(d >= 1 && d < r && r <= n, "need 1 <= d < r <= n");
  if (n > n_cap)
    throw ResourceError("exact Stein terms enumerate S_n^r; n = " + std::to_string(n) +
                        " exceeds the cap " + std::to_string(n_cap));
  const auto params = SteinParameters::make(n, d);
  const auto states = enumerate_restricted(n, r);
  SteinExactReport rep;
  rep.n = n;
  rep.r = r;
  rep.d = d;
  rep.states = states.size();
  rep.terms.resize(d);
  for (std::size_t k = 1; k <= d; ++k) rep.terms[k - 1].k = k;

  Enumerator e;
  const Rational weight(1, static_cast<long>(states.size()));
  for (const auto& sigma : states) {
    const auto w = cycle_counts(sigma, d);
    for (std::size_t k = 1; k <= d; ++k) {
      const EventTally t = e.run(sigma, k, d, r);
      const Rational ca = params.c[k - 1] * t.p_a();
      const Rational cb = params.c[k - 1] * t.p_b();
      auto& term = rep.terms[k - 1];
      term.term_a += weight * abs(params.lambda[k - 1] - ca);
      term.term_b += weight * abs(Rational(w.W(k)) - cb);
      term.mean_scaled_a += weight * ca;
    }
  }
  for (std::size_t k = 1; k <= d; ++k) {
    const double alpha = params.alpha[k - 1];
    const Rational a = alpha == 1.0 ? Rational(1) : Rational(alpha);
    rep.total += a / 2 * (rep.terms[k - 1].term_a + rep.terms[k - 1].term_b);
  }
  return rep;
}

SteinMcReport stein_terms_mc(std::size_t n, std::size_t r, std::size_t d, std::size_t samples,
                             std::uint64_t seed, std::size_t threads, SamplerMethod method) {
  require(d >= 1 && d < r && r <= n, "need 1 <= d < r <= n");
  require(samples >= 2, "need at least two samples");
  const auto params = SteinParameters::make(n, d);
  SamplerConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.method = method;
  cfg.seed = seed;
  if (method == SamplerMethod::mcmc) {
    cfg.mcmc_burn_in = 20 * n;
    cfg.mcmc_thinning = n;
  }
  const Sampler prototype(cfg);

  // Per chunk: sums and sums of squares of 3d + 1 quantities.
  const std::size_t width = 3 * d + 1;
  const std::size_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::vector<long double>> sum(chunks, std::vector<long double>(width, 0));
  std::vector<std::vector<long double>> sq(chunks, std::vector<long double>(width, 0));

  const double denom = static_cast<double>(n - 1);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    Sampler sampler = prototype;
    const std::size_t begin = c * kSampleChunk, end = std::min(samples, begin + kSampleChunk);
    std::vector<double> x(width);
    for (std::size_t i = begin; i < end; ++i) {
      const Permutation sigma = sampler.draw(rng);
      const auto hist = cycle_length_histogram(sigma);
      double total = 0;
      for (std::size_t k = 1; k <= d; ++k) {
        const EventTally t = event_counts_closed_form(hist, n, k, d, r);
        // c_k P[. | sigma] = count / (k (n - 1))
        const double kd = static_cast<double>(k);
        const double ca = static_cast<double>(t.count_a) / (kd * denom);
        const double cb = static_cast<double>(t.count_b) / (kd * denom);
        const double ta = std::abs(1.0 / kd - ca);
        const double tb = std::abs(static_cast<double>(k <= n ? hist[k] : 0) - cb);
        x[3 * (k - 1)] = ta;
        x[3 * (k - 1) + 1] = tb;
        x[3 * (k - 1) + 2] = ca;
        total += params.alpha[k - 1] / 2 * (ta + tb);
      }
      x[width - 1] = total;
      for (std::size_t j = 0; j < width; ++j) {
        sum[c][j] += x[j];
        sq[c][j] += static_cast<long double>(x[j]) * x[j];
      }
    }
  });

  std::vector<long double> s(width, 0), q(width, 0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < width; ++j) {
      s[j] += sum[c][j];
      q[j] += sq[c][j];
    }
  const long double m = static_cast<long double>(samples);
  auto estimate = [&](std::size_t j) {
    const long double mean = s[j] / m;
    const long double var = std::max<long double>(0, (q[j] - m * mean * mean) / (m - 1));
    return MeanEstimate{static_cast<double>(mean), static_cast<double>(std::sqrt(var / m))};
  };

  SteinMcReport rep;
  rep.n = n;
  rep.r = r;
  rep.d = d;
  rep.samples = samples;
  rep.seed = seed;
  for (std::size_t k = 1; k <= d; ++k)
    rep.terms.push_back({k, estimate(3 * (k - 1)), estimate(3 * (k - 1) + 1),
                         estimate(3 * (k - 1) + 2)});
  rep.total = estimate(width - 1);
  return rep;
}

}  // namespace permcycles
