#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace permcycles {

using Index = std::uint32_t;

/// A permutation of {0, ..., n-1} in one-line notation: mapping[i] is the
/// image of i. Validated on construction; immutable afterwards.
class Permutation {
 public:
  explicit Permutation(std::vector<Index> mapping);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return mapping_.size(); }
  Index operator[](std::size_t i) const { return mapping_[i]; }
  std::span<const Index> mapping() const noexcept { return mapping_; }

  std::string to_string() const;  // "[1,2,0]"

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<Index> mapping, Unchecked) : mapping_(std::move(mapping)) {}
  friend Permutation from_trusted_mapping(std::vector<Index> mapping);

  std::vector<Index> mapping_;
};

/// Builds a Permutation without re-validating; callers guarantee bijectivity.
Permutation from_trusted_mapping(std::vector<Index> mapping);

/// Unordered pair {a, b} with a != b; stored with a < b.
class Transposition {
 public:
  Transposition(Index a, Index b);

  Index a() const noexcept { return a_; }
  Index b() const noexcept { return b_; }

  friend bool operator==(const Transposition&, const Transposition&) = default;

 private:
  Index a_;
  Index b_;
};

struct CycleStructure {
  // Each cycle starts at its smallest element; cycles ordered by that element.
  std::vector<std::vector<Index>> cycles;
  std::vector<std::size_t> lengths;       // sorted ascending
  std::vector<std::size_t> cycle_id;      // per element
  std::vector<std::size_t> cycle_length;  // per element, L(C_a)

  std::size_t cycle_count() const noexcept { return cycles.size(); }
};

/// (W_1, ..., W_d): counts[k-1] is the number of k-cycles.
struct CountsVector {
  std::vector<std::uint32_t> counts;

  std::size_t d() const noexcept { return counts.size(); }
  std::uint32_t W(std::size_t k) const { return counts.at(k - 1); }
  std::uint64_t weighted_sum() const;  // sum_k k * W_k
  std::string to_string() const;

  friend bool operator==(const CountsVector&, const CountsVector&) = default;
  friend auto operator<=>(const CountsVector&, const CountsVector&) = default;
};

CycleStructure cycle_structure(const Permutation& p);

/// hist[L] = number of cycles of length L, for L in 0..n.
std::vector<std::uint32_t> cycle_length_histogram(const Permutation& p);

CountsVector cycle_counts(const Permutation& p, std::size_t d);

/// tau o sigma: sigma first, then swap the images a <-> b.
Permutation apply_transposition(const Permutation& p, Transposition t);

std::size_t longest_cycle(const Permutation& p);

/// Calls fn on every permutation of size n in lexicographic order.
void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& fn);

/// All of S_n^r (longest cycle <= r) in lexicographic order.
std::vector<Permutation> enumerate_restricted(std::size_t n, std::size_t r);

}  // namespace permcycles
