#include "permcycles/config.hpp"

#include <cstdlib>
#include <string>

namespace permcycles {

namespace {

std::size_t env_or(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(raw, &used);
    if (used != std::string(raw).size() || value == 0) return fallback;
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace

std::size_t exact_mode_cap() { return env_or("PERMCYCLES_EXACT_CAP", kDefaultExactCap); }
std::size_t support_cap() { return env_or("PERMCYCLES_SUPPORT_CAP", kDefaultSupportCap); }
std::size_t retry_cap() { return env_or("PERMCYCLES_RETRY_CAP", kDefaultRetryCap); }

}  // namespace permcycles
