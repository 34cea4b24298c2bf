#include "doctest.h"

#include <algorithm>

#include "permcycles/errors.hpp"
#include "permcycles/permutation.hpp"

using namespace permcycles;

namespace {
Permutation P(std::vector<Index> m) { return Permutation(std::move(m)); }
}  // namespace

TEST_CASE("permutation validation") {
  CHECK_THROWS_AS(P({0, 0}), DomainError);
  CHECK_THROWS_AS(P({1, 2}), DomainError);
  CHECK_THROWS_AS(P({}), DomainError);
  CHECK_NOTHROW(P({2, 0, 1}));
  CHECK(P({1, 2, 0}).to_string() == "[1,2,0]");
  CHECK(Permutation::identity(3) == P({0, 1, 2}));
}

TEST_CASE("cycle structure examples") {
  auto id = cycle_structure(Permutation::identity(4));
  CHECK(id.lengths == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(id.cycle_count() == 4);

  auto two = cycle_structure(P({1, 0, 3, 2}));
  CHECK(two.lengths == std::vector<std::size_t>{2, 2});
  CHECK(two.cycles[0] == std::vector<Index>{0, 1});
  CHECK(two.cycles[1] == std::vector<Index>{2, 3});

  auto mixed = cycle_structure(P({1, 2, 0, 4, 3}));
  CHECK(mixed.lengths == std::vector<std::size_t>{2, 3});
  CHECK(mixed.cycles[0] == std::vector<Index>{0, 1, 2});
  CHECK(mixed.cycle_length[4] == 2);
  CHECK(mixed.cycle_length[1] == 3);
  CHECK(mixed.cycle_id[3] == mixed.cycle_id[4]);
  CHECK(mixed.cycle_id[0] != mixed.cycle_id[3]);
}

TEST_CASE("cycle structure covers every element once") {
  for_each_permutation(5, [](const Permutation& p) {
    const auto cs = cycle_structure(p);
    std::vector<int> seen(5, 0);
    std::size_t total = 0;
    for (std::size_t c = 0; c < cs.cycles.size(); ++c) {
      const auto& cyc = cs.cycles[c];
      total += cyc.size();
      CHECK(*std::min_element(cyc.begin(), cyc.end()) == cyc.front());
      if (c > 0) CHECK(cs.cycles[c - 1].front() < cyc.front());
      for (auto a : cyc) {
        ++seen[a];
        CHECK(cs.cycle_length[a] == cyc.size());
      }
    }
    CHECK(total == 5);
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  });
}

TEST_CASE("cycle counts") {
  CHECK(cycle_counts(Permutation::identity(5), 3).counts == std::vector<std::uint32_t>{5, 0, 0});
  CHECK(cycle_counts(P({1, 0, 3, 2}), 2).counts == std::vector<std::uint32_t>{0, 2});
  CHECK(cycle_counts(P({1, 2, 0, 4, 3}), 2).counts == std::vector<std::uint32_t>{0, 1});
  CHECK_THROWS_AS(cycle_counts(P({1, 0}), 0), DomainError);
  CHECK_THROWS_AS(cycle_counts(P({1, 0}), 3), DomainError);
  CHECK(cycle_counts(P({1, 2, 0, 4, 3}), 2).to_string() == "(0,1)");

  for_each_permutation(6, [](const Permutation& p) {
    CHECK(cycle_counts(p, 6).weighted_sum() == 6);
    CHECK(cycle_counts(p, 3).weighted_sum() <= 6);
  });
}

TEST_CASE("transpositions") {
  CHECK_THROWS_AS(Transposition(2, 2), DomainError);
  CHECK(Transposition(3, 1) == Transposition(1, 3));
  CHECK(Transposition(3, 1).a() == 1);

  const auto id3 = Permutation::identity(3);
  CHECK(apply_transposition(id3, {0, 1}) == P({1, 0, 2}));
  CHECK(apply_transposition(P({1, 0, 2}), {0, 1}) == id3);
  CHECK_THROWS_AS(apply_transposition(id3, {0, 3}), DomainError);
}

TEST_CASE("transposition splits or merges exactly one cycle") {
  for (std::size_t n = 2; n <= 6; ++n) {
    for_each_permutation(n, [n](const Permutation& p) {
      const auto cs = cycle_structure(p);
      for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b) {
          const auto q = apply_transposition(p, {a, b});
          const auto cq = cycle_structure(q);
          CHECK(apply_transposition(q, {a, b}) == p);
          if (cs.cycle_id[a] == cs.cycle_id[b]) {
            CHECK(cq.cycle_count() == cs.cycle_count() + 1);
            // the two pieces come from the old cycle
            CHECK(cq.cycle_length[a] + cq.cycle_length[b] == cs.cycle_length[a]);
          } else {
            CHECK(cq.cycle_count() + 1 == cs.cycle_count());
            CHECK(cq.cycle_length[a] == cs.cycle_length[a] + cs.cycle_length[b]);
          }
        }
    });
  }
}

TEST_CASE("longest cycle") {
  CHECK(longest_cycle(Permutation::identity(7)) == 1);
  CHECK(longest_cycle(P({1, 2, 3, 4, 0})) == 5);
  CHECK(longest_cycle(P({1, 2, 0, 4, 3})) == 3);
}

TEST_CASE("enumeration") {
  std::size_t count = 0;
  std::vector<Permutation> seen;
  for_each_permutation(4, [&](const Permutation& p) {
    ++count;
    seen.push_back(p);
  });
  CHECK(count == 24);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(enumerate_restricted(4, 2).size() == 10);
  CHECK(enumerate_restricted(4, 1).size() == 1);
  CHECK(enumerate_restricted(6, 3).size() == 276);
  const auto hist = cycle_length_histogram(P({1, 2, 0, 4, 3}));
  CHECK(hist == std::vector<std::uint32_t>{0, 0, 1, 1, 0, 0});
}
