#pragma once

#include <cstdint>
#include <vector>

namespace ecexp {

struct PrimeSegment {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> primes;  // increasing, all of [lo, hi)
};

inline constexpr std::uint64_t kSieveMaxHi = 1'000'000'001;  // hi is exclusive
inline constexpr std::uint64_t kSegmentSpan = std::uint64_t{1} << 20;

/// Primes in [lo, hi). Throws std::out_of_range unless 2 <= lo < hi <= 10^9 + 1.
PrimeSegment primes_in(std::uint64_t lo, std::uint64_t hi);

/// Same result as primes_in, with the 2^20-wide segments sieved concurrently.
PrimeSegment primes_in_parallel(std::uint64_t lo, std::uint64_t hi);

/// Splits [lo, hi) into `parts` contiguous ranges of roughly equal width.
std::vector<PrimeSegment> partition_primes(std::uint64_t lo, std::uint64_t hi, unsigned parts);

}  // namespace ecexp
