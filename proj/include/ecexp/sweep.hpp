#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecexp/degrees.hpp"
#include "ecexp/ec_group.hpp"
#include "ecexp/structure.hpp"

namespace ecexp {

struct SweepConfig {
  CurveZ curve{-1, 0};
  u64 X = 0;
  DegreeOracle oracle = DegreeOracle::generic();
  /// Unset: the default set {2, 3, 4, 5, 6} cut to k <= 2 sqrt(X). An
  /// explicit list is validated instead.
  std::optional<std::vector<u64>> census_ks;
  u64 seed = 0;
  unsigned threads = 0;     // 0: OpenMP default
  unsigned partitions = 1;  // 1 with threads == 1 runs the serial reference
  u64 truncation = 1000;    // series cutoff Y for target_c_E
  bool keep_records = true;
};

struct CensusEntry {
  u64 count = 0;
  std::optional<double> expected;  // li(X) / deg L_k; empty if the degree is not known

  bool operator==(const CensusEntry&) const = default;
};

struct SweepReport {
  CurveZ curve{-1, 0};
  u64 X = 0;
  std::string oracle;
  std::vector<u64> excluded_primes;
  u64 good_primes = 0;
  u64 sum_e = 0;
  /// Sum of p over good primes with d_p = d, keyed by d. Together these give
  /// sum p / d_p exactly.
  std::map<u64, u64> sum_p_by_d;
  double sum_p_over_d = 0;
  u64 sum_check = 0;  // sum of (p + 1 - a_p) / d_p
  u64 sum_p = 0;
  double li_X = 0;
  double li_X2 = 0;
  double empirical_c = 0;
  std::optional<BoundedValue> target_c_E;
  std::string target_note;
  std::map<u64, CensusEntry> census;
  u64 cyclic_count = 0;
  double runtime_seconds = 0;
  std::vector<LocalData> records;
};

/// Local data at every good prime in `primes`, in order. The serial kernel is
/// the reference; the parallel one must agree with it exactly.
std::vector<LocalData> local_data_serial(const CurveZ& curve, const std::vector<u64>& primes,
                                         u64 seed);
std::vector<LocalData> local_data_parallel(const CurveZ& curve, const std::vector<u64>& primes,
                                           u64 seed, unsigned threads = 0);

/// Requires X >= 5. Propagates ConsistencyError.
SweepReport sweep(const SweepConfig& config);
SweepReport sweep(const CurveZ& curve, u64 X, const DegreeOracle& oracle);

/// Count of good primes p <= X with k | d_p, against li(X) / deg L_k.
/// Throws std::invalid_argument unless 1 <= k <= 2 sqrt(X).
std::map<u64, CensusEntry> census(const CurveZ& curve, u64 X, const std::vector<u64>& ks,
                                  const DegreeOracle& oracle, u64 seed = 0);

/// Recomputes the sums from `records` and throws ConsistencyError if
/// sum_e != sum_check or a census count exceeds pi(X).
void check_report(const SweepReport& report);

}  // namespace ecexp
