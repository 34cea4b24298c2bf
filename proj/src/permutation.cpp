#include "permcycles/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "permcycles/errors.hpp"

namespace permcycles {

Permutation::Permutation(std::vector<Index> mapping) : mapping_(std::move(mapping)) {
  detail::require(!mapping_.empty(), "permutation must have n >= 1");
  std::vector<bool> seen(mapping_.size(), false);
  for (const Index v : mapping_) {
    if (v >= mapping_.size() || seen[v]) {
      throw DomainError("mapping is not a bijection on {0,...,n-1}");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  detail::require(n >= 1, "permutation must have n >= 1");
  std::vector<Index> mapping(n);
  std::iota(mapping.begin(), mapping.end(), Index{0});
  return Permutation(std::move(mapping), Unchecked{});
}

Permutation from_trusted_mapping(std::vector<Index> mapping) {
  return Permutation(std::move(mapping), Permutation::Unchecked{});
}

std::string Permutation::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (i) out << ',';
    out << mapping_[i];
  }
  out << ']';
  return out.str();
}

Transposition::Transposition(Index a, Index b) : a_(std::min(a, b)), b_(std::max(a, b)) {
  detail::require(a != b, "transposition needs two distinct indices");
}

std::uint64_t CountsVector::weighted_sum() const {
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= counts.size(); ++k) total += k * counts[k - 1];
  return total;
}

std::string CountsVector::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out << ',';
    out << counts[i];
  }
  out << ')';
  return out.str();
}

CycleStructure cycle_structure(const Permutation& p) {
  const std::size_t n = p.size();
  CycleStructure cs;
  cs.cycle_id.assign(n, n);
  cs.cycle_length.assign(n, 0);
  // Scanning start points in increasing order makes each cycle begin at its
  // minimum and orders the cycles by that minimum.
  for (std::size_t start = 0; start < n; ++start) {
    if (cs.cycle_id[start] != n) continue;
    const std::size_t id = cs.cycles.size();
    std::vector<Index> cycle;
    for (Index j = static_cast<Index>(start); cs.cycle_id[j] == n; j = p[j]) {
      cs.cycle_id[j] = id;
      cycle.push_back(j);
    }
    for (const Index j : cycle) cs.cycle_length[j] = cycle.size();
    cs.lengths.push_back(cycle.size());
    cs.cycles.push_back(std::move(cycle));
  }
  std::sort(cs.lengths.begin(), cs.lengths.end());
  return cs;
}

std::vector<std::uint32_t> cycle_length_histogram(const Permutation& p) {
  const std::size_t n = p.size();
  std::vector<std::uint32_t> hist(n + 1, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::size_t length = 0;
    for (Index j = static_cast<Index>(start); !seen[j]; j = p[j]) {
      seen[j] = true;
      ++length;
    }
    ++hist[length];
  }
  return hist;
}

CountsVector cycle_counts(const Permutation& p, std::size_t d) {
  detail::require(d >= 1 && d <= p.size(), "cycle_counts: need 1 <= d <= n");
  const auto hist = cycle_length_histogram(p);
  CountsVector w;
  w.counts.assign(hist.begin() + 1, hist.begin() + 1 + static_cast<std::ptrdiff_t>(d));
  return w;
}

Permutation apply_transposition(const Permutation& p, Transposition t) {
  detail::require(t.b() < p.size(), "transposition moves a point outside {0,...,n-1}");
  std::vector<Index> mapping(p.mapping().begin(), p.mapping().end());
  for (Index& v : mapping) {
    if (v == t.a()) {
      v = t.b();
    } else if (v == t.b()) {
      v = t.a();
    }
  }
  return from_trusted_mapping(std::move(mapping));
}

std::size_t longest_cycle(const Permutation& p) {
  const auto hist = cycle_length_histogram(p);
  for (std::size_t length = hist.size() - 1; length > 0; --length) {
    if (hist[length]) return length;
  }
  return 0;
}

void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& fn) {
  detail::require(n >= 1, "for_each_permutation: n >= 1");
  std::vector<Index> mapping(n);
  std::iota(mapping.begin(), mapping.end(), Index{0});
  do {
    fn(from_trusted_mapping(mapping));
  } while (std::next_permutation(mapping.begin(), mapping.end()));
}

std::vector<Permutation> enumerate_restricted(std::size_t n, std::size_t r) {
  detail::require(r >= 1, "enumerate_restricted: r >= 1");
  std::vector<Permutation> out;
  for_each_permutation(n, [&](const Permutation& p) {
    if (longest_cycle(p) <= r) out.push_back(p);
  });
  return out;
}

}  // namespace permcycles
