#include "ecexp/sieve.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ecexp/arith.hpp"

namespace ecexp {

namespace {

void check_range(u64 lo, u64 hi) {
  if (lo < 2 || hi <= lo || hi > kSieveMaxHi) {
    throw std::out_of_range("primes_in: need 2 <= lo < hi <= 10^9+1, got [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + ")");
  }
}

std::vector<u64> base_primes(u64 limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<u64> out;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

// Odd-only marking of one segment [lo, hi) with hi - lo <= kSegmentSpan.
void sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base, std::vector<u64>& out) {
  if (lo <= 2 && 2 < hi) out.push_back(2);
  u64 first_odd = std::max<u64>(lo, 3) | 1;
  if (first_odd >= hi) return;
  const u64 count = (hi - first_odd + 1) / 2;  // odd values first_odd, first_odd+2, ...
  std::vector<char> composite(count, 0);
  for (u64 p : base) {
    if (p == 2) continue;
    if (p * p >= hi) break;
    u64 start = std::max(p * p, (first_odd + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (u64 m = start; m < hi; m += 2 * p) composite[(m - first_odd) / 2] = 1;
  }
  for (u64 i = 0; i < count; ++i) {
    if (!composite[i]) out.push_back(first_odd + 2 * i);
  }
}

}  // namespace

PrimeSegment primes_in(u64 lo, u64 hi) {
  check_range(lo, hi);
  const auto base = base_primes(isqrt(hi) + 1);
  PrimeSegment seg{lo, hi, {}};
  for (u64 s = lo; s < hi; s += kSegmentSpan) {
    sieve_segment(s, std::min(hi, s + kSegmentSpan), base, seg.primes);
  }
  return seg;
}

PrimeSegment primes_in_parallel(u64 lo, u64 hi) {
  check_range(lo, hi);
  const auto base = base_primes(isqrt(hi) + 1);
  const u64 nseg = (hi - lo + kSegmentSpan - 1) / kSegmentSpan;
  std::vector<std::vector<u64>> parts(nseg);
#pragma omp parallel for schedule(dynamic, 1)
  for (i64 i = 0; i < static_cast<i64>(nseg); ++i) {
    const u64 s = lo + static_cast<u64>(i) * kSegmentSpan;
    sieve_segment(s, std::min(hi, s + kSegmentSpan), base, parts[i]);
  }
  PrimeSegment seg{lo, hi, {}};
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  seg.primes.reserve(total);
  for (const auto& p : parts) seg.primes.insert(seg.primes.end(), p.begin(), p.end());
  return seg;
}

std::vector<PrimeSegment> partition_primes(u64 lo, u64 hi, unsigned parts) {
  check_range(lo, hi);
  if (parts == 0) throw std::invalid_argument("partition_primes: parts must be positive");
  const u64 width = hi - lo;
  parts = static_cast<unsigned>(std::min<u64>(parts, width));
  std::vector<u64> cuts;
  for (unsigned i = 0; i <= parts; ++i) cuts.push_back(lo + width * i / parts);
  std::vector<PrimeSegment> out(parts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < static_cast<int>(parts); ++i) out[i] = primes_in(cuts[i], cuts[i + 1]);
  return out;
}

}  // namespace ecexp
