#include "ecexp/sweep.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>

#include "ecexp/constants.hpp"
#include "ecexp/log_integral.hpp"
#include "ecexp/sieve.hpp"

namespace ecexp {

namespace {

constexpr u64 kDefaultCensus[] = {2, 3, 4, 5, 6};

LocalData local_data_at(const CurveModP& E, u64 seed) {
  // The result is exact; the seed only steers the point sampling.
  return structure_pair(E, seed_for(E.a, E.b, E.p, seed));
}

void check_census_k(u64 X, const std::vector<u64>& ks) {
  const u64 cap = 2 * isqrt(X);
  for (u64 k : ks) {
    if (k == 0 || k > cap) {
      throw std::invalid_argument("census: k = " + std::to_string(k) +
                                  " outside [1, 2 sqrt(X)] for X = " + std::to_string(X));
    }
  }
}

u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("sweep: sum overflows 64 bits");
  return r;
}

std::optional<double> expected_count(const DegreeOracle& oracle, u64 k, double li_X) {
  try {
    return static_cast<double>(li_X * oracle.inverse_degree(k));
  } catch (const MissingDegreeError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<LocalData> local_data_serial(const CurveZ& curve, const std::vector<u64>& primes,
                                         u64 seed) {
  std::vector<LocalData> out;
  for (u64 p : primes) {
    if (const auto E = reduce(curve, p)) out.push_back(local_data_at(*E, seed));
  }
  return out;
}

std::vector<LocalData> local_data_parallel(const CurveZ& curve, const std::vector<u64>& primes,
                                           u64 seed, unsigned threads) {
  std::vector<std::optional<LocalData>> slots(primes.size());
  std::exception_ptr failure;
  const int nt = threads ? static_cast<int>(threads) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
  for (std::size_t i = 0; i < primes.size(); ++i) {
    try {
      if (const auto E = reduce(curve, primes[i])) slots[i] = local_data_at(*E, seed);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<LocalData> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    if (s) out.push_back(*s);
  }
  return out;
}

SweepReport sweep(const SweepConfig& config) {
  if (config.X < 5) throw std::invalid_argument("sweep: X must be at least 5");
  if (config.X >= kSieveMaxHi) throw std::invalid_argument("sweep: X exceeds the sieve range");
  if (config.partitions == 0) throw std::invalid_argument("sweep: partitions must be positive");
  std::vector<u64> ks;
  if (config.census_ks) {
    ks = *config.census_ks;
    check_census_k(config.X, ks);
  } else {
    for (u64 k : kDefaultCensus) {
      if (k <= 2 * isqrt(config.X)) ks.push_back(k);
    }
  }
  const auto start = std::chrono::steady_clock::now();

  SweepReport r;
  r.curve = config.curve;
  r.X = config.X;
  r.oracle = config.oracle.describe();

  std::vector<u64> all_primes;
  std::vector<LocalData> records;
  if (config.partitions == 1 && config.threads == 1) {
    all_primes = primes_in(2, config.X + 1).primes;
    records = local_data_serial(config.curve, all_primes, config.seed);
  } else {
    // Each worker owns one prime segment; the merge restores ascending order.
    const auto parts = partition_primes(2, config.X + 1, config.partitions);
    std::vector<std::vector<LocalData>> partial(parts.size());
    if (config.partitions == 1) {
      partial[0] = local_data_parallel(config.curve, parts[0].primes, config.seed, config.threads);
    } else {
      std::exception_ptr failure;
      const int nt = config.threads ? static_cast<int>(config.threads) : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
      for (std::size_t i = 0; i < parts.size(); ++i) {
        try {
          partial[i] = local_data_serial(config.curve, parts[i].primes, config.seed);
        } catch (...) {
#pragma omp critical
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      all_primes.insert(all_primes.end(), parts[i].primes.begin(), parts[i].primes.end());
      records.insert(records.end(), partial[i].begin(), partial[i].end());
    }
  }

  std::size_t next = 0;
  for (u64 p : all_primes) {
    if (next < records.size() && records[next].p == p) {
      ++next;
    } else {
      r.excluded_primes.push_back(p);
    }
  }

  for (const LocalData& ld : records) {
    ++r.good_primes;
    r.sum_e = checked_add(r.sum_e, ld.e);
    r.sum_check = checked_add(r.sum_check, static_cast<u64>(static_cast<i64>(ld.p) + 1 - ld.a_p) / ld.d);
    r.sum_p = checked_add(r.sum_p, ld.p);
    r.sum_p_by_d[ld.d] = checked_add(r.sum_p_by_d[ld.d], ld.p);
    if (ld.d == 1) ++r.cyclic_count;
  }
  long double spd = 0;
  for (const auto& [d, s] : r.sum_p_by_d) spd += static_cast<long double>(s) / d;
  r.sum_p_over_d = static_cast<double>(spd);

  const double Xd = static_cast<double>(config.X);
  r.li_X = log_integral(Xd);
  r.li_X2 = log_integral(Xd * Xd);
  r.empirical_c = static_cast<double>(r.sum_e) / r.li_X2;
  for (u64 k : ks) {
    CensusEntry ce;
    for (const LocalData& ld : records) ce.count += ld.d % k == 0;
    ce.expected = expected_count(config.oracle, k, r.li_X);
    r.census[k] = ce;
  }
  try {
    r.target_c_E = c_E_series(config.oracle, std::max<u64>(config.truncation, 2));
  } catch (const MissingDegreeError& e) {
    r.target_note = e.what();
  }
  if (config.keep_records) r.records = std::move(records);
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.keep_records) check_report(r);
  return r;
}

SweepReport sweep(const CurveZ& curve, u64 X, const DegreeOracle& oracle) {
  SweepConfig config;
  config.curve = curve;
  config.X = X;
  config.oracle = oracle;
  return sweep(config);
}

std::map<u64, CensusEntry> census(const CurveZ& curve, u64 X, const std::vector<u64>& ks,
                                  const DegreeOracle& oracle, u64 seed) {
  SweepConfig config;
  config.curve = curve;
  config.X = X;
  config.oracle = oracle;
  config.census_ks = ks;
  config.seed = seed;
  config.keep_records = false;
  config.threads = 0;
  return sweep(config).census;
}

void check_report(const SweepReport& r) {
  u64 sum_e = 0, sum_check = 0;
  for (const LocalData& ld : r.records) {
    check_invariants(ld);
    sum_e += ld.e;
    sum_check += static_cast<u64>(static_cast<i64>(ld.p) + 1 - ld.a_p) / ld.d;
  }
  if (sum_e != r.sum_e || sum_check != r.sum_check || r.sum_e != r.sum_check) {
    throw ConsistencyError("sweep: sum of e_p differs from sum of (p + 1 - a_p) / d_p");
  }
  const u64 pi_X = r.good_primes + r.excluded_primes.size();
  for (const auto& [k, ce] : r.census) {
    if (ce.count > pi_X) throw ConsistencyError("sweep: census count exceeds pi(X)");
  }
}

}  // namespace ecexp
