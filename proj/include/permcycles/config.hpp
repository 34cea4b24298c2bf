#pragma once

#include <cstddef>

namespace permcycles {

// Resource caps. Each can be overridden through the environment variable
// named next to it; unparsable values are ignored.
inline constexpr std::size_t kDefaultExactCap = 2000;          // PERMCYCLES_EXACT_CAP
inline constexpr std::size_t kDefaultSupportCap = 10'000'000;  // PERMCYCLES_SUPPORT_CAP
inline constexpr std::size_t kDefaultRetryCap = 10'000'000;    // PERMCYCLES_RETRY_CAP

std::size_t exact_mode_cap();
std::size_t support_cap();
std::size_t retry_cap();

}  // namespace permcycles
