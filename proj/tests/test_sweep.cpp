#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "ecexp/report_io.hpp"
#include "ecexp/sieve.hpp"
#include "ecexp/sweep.hpp"

using namespace ecexp;

TEST_CASE("small sweep of y^2 = x^3 - x") {
  SweepConfig config;
  config.curve = CurveZ(-1, 0);
  config.X = 17;
  config.oracle = DegreeOracle::cm(1, {{2, 1}, {4, 4}});
  config.census_ks = std::vector<u64>{1, 2, 4};
  config.threads = 1;
  const SweepReport r = sweep(config);
  REQUIRE(r.records.size() == 5);
  CHECK(r.excluded_primes == std::vector<u64>{2, 3});
  CHECK(r.records[0] == LocalData{5, -2, 8, 2, 4});
  CHECK(r.records[4].p == 17);
  CHECK(r.records[4].e == 4);  // 17 = 4^2 + 1
  CHECK(r.sum_e == r.sum_check);
  u64 se = 0;
  for (const auto& ld : r.records) se += ld.e;
  CHECK(r.sum_e == se);
  CHECK(r.census.at(1).count == 5);
  CHECK(r.census.at(2).count == 5);
  CHECK(r.cyclic_count == 0);
  CHECK(r.sum_p == 5 + 7 + 11 + 13 + 17);
  CHECK(to_csv(r).rfind("p,a_p,N,d_p,e_p\n5,-2,8,2,4\n", 0) == 0);
}

TEST_CASE("degenerate and invalid ranges") {
  const SweepReport r = sweep(CurveZ(1, 1), 5, DegreeOracle::generic());
  CHECK(r.records.size() == 1);
  CHECK(r.census.size() == 3);  // default set cut to k <= 2 sqrt(5)
  CHECK(r.sum_e == r.sum_check);
  CHECK_THROWS_AS(sweep(CurveZ(1, 1), 4, DegreeOracle::generic()), std::invalid_argument);
  SweepConfig bad;
  bad.X = 100;
  bad.census_ks = std::vector<u64>{21};  // > 2 sqrt(100)
  CHECK_THROWS_AS(sweep(bad), std::invalid_argument);
  SweepReport empty;
  CHECK(to_csv(empty) == "p,a_p,N,d_p,e_p\n");
}

TEST_CASE("census") {
  const auto c = census(CurveZ(-1, 0), 10000, {1, 2}, DegreeOracle::cm(1, {{2, 1}}));
  const u64 good = primes_in(5, 10001).primes.size();
  CHECK(c.at(1).count == good);
  CHECK(c.at(2).count == good);
  CHECK(*c.at(2).expected == doctest::Approx(1245.09).epsilon(1e-4));
  const auto g = census(CurveZ(1, 1), 10000, {3}, DegreeOracle::cm(1));
  CHECK(g.at(3).expected.has_value());
  const auto missing = census(CurveZ(1, 1), 10000, {2}, DegreeOracle::cm(1));
  CHECK_FALSE(missing.at(2).expected.has_value());
  CHECK_THROWS_AS(census(CurveZ(1, 1), 100, {0}, DegreeOracle::generic()),
                  std::invalid_argument);
}

TEST_CASE("serial, parallel and partitioned sweeps agree") {
  SweepConfig config;
  config.curve = CurveZ(2, 3);
  config.X = 30000;
  config.threads = 1;
  const SweepReport ref = sweep(config);
  const CurveZ curve(2, 3);
  const auto primes = primes_in(2, 30001).primes;
  CHECK(local_data_parallel(curve, primes, 0, 4) == local_data_serial(curve, primes, 0));
  for (unsigned parts : {1u, 2u, 8u, 13u}) {
    config.partitions = parts;
    config.threads = 4;
    const SweepReport r = sweep(config);
    REQUIRE(to_csv(r) == to_csv(ref));
    REQUIRE(r.excluded_primes == ref.excluded_primes);
    REQUIRE(r.sum_e == ref.sum_e);
  }
  config.seed = 12345;
  CHECK(to_csv(sweep(config)) == to_csv(ref));  // exact results do not depend on the seed
}

TEST_CASE("JSON round trip") {
  SweepConfig config;
  config.curve = CurveZ(0, 1);
  config.X = 2000;
  const SweepReport r = sweep(config);
  const auto j = to_json(r);
  const auto back = to_json(report_from_json(nlohmann::ordered_json::parse(j.dump())));
  CHECK(back == j);
  CHECK(j.begin().key() == "curve");
  CHECK(j.at("sum_e") == j.at("sum_check"));
  CHECK(j.at("empirical_c").get<double>() > 0);
  CHECK(j.at("empirical_c").get<double>() < 2);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/x.csv", "x"), std::runtime_error);
}
