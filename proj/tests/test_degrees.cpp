#include <cmath>
#include <sstream>

#include <stdexcept>

#include "doctest.h"
#include "ecexp/degrees.hpp"

using namespace ecexp;

namespace {

// Invertible 2x2 matrices over Z/k, counted directly.
u64 gl2_by_count(u64 k) {
  u64 c = 0;
  for (u64 a = 0; a < k; ++a)
    for (u64 b = 0; b < k; ++b)
      for (u64 x = 0; x < k; ++x)
        for (u64 y = 0; y < k; ++y) c += gcd((a * y + k * k - b * x % k) % k, k) == 1;
  return c;
}

}  // namespace

TEST_CASE("GL2 orders against matrix counts") {
  for (u64 k : {1u, 2u, 3u, 4u, 5u, 6u, 8u, 9u}) REQUIRE(gl2_order(k) == gl2_by_count(k));
  CHECK(gl2_order(7) == 2016);
  CHECK(gl2_order(12) == 96 * 48);
  CHECK_THROWS_AS(gl2_order(0), std::invalid_argument);
}

TEST_CASE("generic oracle") {
  const DegreeOracle g = DegreeOracle::generic();
  CHECK(g.degree(2) == 6);
  CHECK(g.degree(3) == 48);
  CHECK(degree(g, 10) == 6 * 480);
  CHECK(g.inverse_degree(3) == doctest::Approx(1.0 / 48));
  CHECK(g.degree_lower_bound(5) == 480);
  CHECK(g.describe() == "generic");
  CHECK_THROWS_AS(g.degree(0), std::invalid_argument);
  CHECK_THROWS_AS(g.degree(u64{1} << 20), std::overflow_error);
  CHECK(g.inverse_degree(u64{1} << 20) > 0);
}

TEST_CASE("cm oracle local formulas") {
  const DegreeOracle o = DegreeOracle::cm(1);
  CHECK(o.cm_discriminant() == -4);
  CHECK(o.degree(5) == 16);    // split
  CHECK(o.degree(9) == 72);    // inert
  CHECK(o.degree(3) == 8);
  CHECK(o.degree(25) == 16 * 25);
  CHECK(o.degree(15) == 8 * 16);
  CHECK_THROWS_AS(o.degree(2), MissingDegreeError);
  CHECK_THROWS_AS(o.degree(12), MissingDegreeError);
  CHECK(o.degree_lower_bound(2) == 1);
  CHECK(o.degree_lower_bound(8) == 4);
  CHECK(o.special_primes() == std::vector<u64>{2});

  const DegreeOracle t = DegreeOracle::cm(1, {{2, 1}, {4, 4}});
  CHECK(t.degree(2) == 1);
  CHECK(t.degree(4) == 4);
  CHECK(t.degree(8) == 16);  // q^2 per power past the table
  CHECK(t.degree(12) == 32);

  const DegreeOracle s = DegreeOracle::cm(7);
  CHECK(s.cm_discriminant() == -7);
  CHECK(s.special_primes() == std::vector<u64>{2, 7});
  CHECK(s.degree(11) == 100);  // (-7 | 11) = 1
  CHECK(s.degree(3) == 8);     // (-7 | 3) = -1

  CHECK_THROWS_AS(DegreeOracle::cm(5), std::invalid_argument);
  CHECK_THROWS_AS(DegreeOracle::cm(1, {{3, 8}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeOracle::cm(1, {{4, 3}}), std::invalid_argument);
}

TEST_CASE("table-corrected oracle") {
  const DegreeOracle t = DegreeOracle::table_corrected(2, {{2, 2}});
  CHECK(t.degree(2) == 2);
  CHECK(t.degree(4) == 2 * 16);
  CHECK(t.degree(6) == 2 * 48);
  CHECK(t.degree(3) == 48);
  const DegreeOracle u = DegreeOracle::table_corrected(6, {{2, 6}});
  CHECK(u.degree(6) == gl2_order(6));  // untabled divisor falls back to GL2
  CHECK_THROWS_AS(DegreeOracle::table_corrected(2, {{3, 48}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeOracle::table_corrected(2, {{2, 4}}), std::invalid_argument);
}

TEST_CASE("table parsing") {
  std::istringstream ok("# deg table\n2 3   # comment\n\n4 12\n");
  const DegreeTable t = parse_degree_table(ok);
  CHECK(t.size() == 2);
  CHECK(t.at(4) == 12);
  const auto line_of = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      parse_degree_table(in);
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  CHECK(line_of("2 3\n4\n").find("line 2") != std::string::npos);
  CHECK(line_of("2 x\n").find("line 1") != std::string::npos);
  CHECK(line_of("2 3\n2 6\n").find("duplicate") != std::string::npos);
  CHECK(line_of("2 -3\n") != "");
  CHECK(line_of("2 3 4\n") != "");
  CHECK_THROWS_AS(load_degree_table("/nonexistent/table"), std::runtime_error);
  CHECK(parse_oracle_spec("generic").kind() == OracleKind::generic);
  CHECK(parse_oracle_spec("cm:163").cm_D() == 163);
  CHECK_THROWS_AS(parse_oracle_spec("cm:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_oracle_spec("serre"), std::invalid_argument);
}

TEST_CASE("tail bounds dominate partial tails") {
  const DegreeOracle g = DegreeOracle::generic();
  const DegreeOracle c = DegreeOracle::cm(1);
  for (double Y : {2.0, 10.0, 50.0, 300.0}) {
    long double tg = 0, tc = 0;
    for (u64 k = static_cast<u64>(Y) + 1; k <= 100000; ++k) {
      tg += g.inverse_degree(k);
      tc += 1 / c.degree_lower_bound(k);
    }
    CAPTURE(Y);
    CHECK(degree_tail_bound(g, Y).value >= static_cast<double>(tg));
    CHECK(degree_tail_bound(c, Y).value >= static_cast<double>(tc));
  }
  CHECK_THROWS_AS(degree_tail_bound(g, 1.0), std::invalid_argument);
}
