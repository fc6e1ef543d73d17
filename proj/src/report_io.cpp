#include "ecexp/report_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ecexp {

using nlohmann::ordered_json;

void write_csv(const SweepReport& report, std::ostream& out) {
  out << "p,a_p,N,d_p,e_p\n";
  for (const LocalData& ld : report.records) {
    out << ld.p << ',' << ld.a_p << ',' << ld.N << ',' << ld.d << ',' << ld.e << '\n';
  }
}

std::string to_csv(const SweepReport& report) {
  std::ostringstream s;
  write_csv(report, s);
  return s.str();
}

ordered_json to_json(const SweepReport& r) {
  ordered_json j;
  j["curve"] = {{"a", r.curve.a()}, {"b", r.curve.b()}};
  j["X"] = r.X;
  j["oracle"] = r.oracle;
  j["excluded_primes"] = r.excluded_primes;
  j["good_primes"] = r.good_primes;
  j["sum_e"] = r.sum_e;
  ordered_json by_d = ordered_json::object();
  for (const auto& [d, s] : r.sum_p_by_d) by_d[std::to_string(d)] = s;
  j["sum_p_over_d"] = {{"by_d", by_d}, {"value", r.sum_p_over_d}};
  j["sum_check"] = r.sum_check;
  j["sum_p"] = r.sum_p;
  j["li_X"] = r.li_X;
  j["li_X2"] = r.li_X2;
  j["empirical_c"] = r.empirical_c;
  if (r.target_c_E) {
    j["target_c_E"] = {{"value", r.target_c_E->value},
                       {"error", r.target_c_E->error},
                       {"truncation", r.target_c_E->truncation}};
  } else {
    j["target_c_E"] = nullptr;
  }
  if (!r.target_note.empty()) j["target_note"] = r.target_note;
  if (r.target_c_E) j["gap"] = r.empirical_c - r.target_c_E->value;
  ordered_json census = ordered_json::object();
  for (const auto& [k, ce] : r.census) {
    ordered_json e = {{"count", ce.count}};
    e["expected"] = ce.expected ? ordered_json(*ce.expected) : ordered_json(nullptr);
    census[std::to_string(k)] = e;
  }
  j["census"] = census;
  j["cyclic_count"] = r.cyclic_count;
  j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

SweepReport report_from_json(const ordered_json& j) {
  SweepReport r;
  r.curve = CurveZ(j.at("curve").at("a").get<i64>(), j.at("curve").at("b").get<i64>());
  r.X = j.at("X").get<u64>();
  r.oracle = j.at("oracle").get<std::string>();
  r.excluded_primes = j.at("excluded_primes").get<std::vector<u64>>();
  r.good_primes = j.at("good_primes").get<u64>();
  r.sum_e = j.at("sum_e").get<u64>();
  for (const auto& [d, s] : j.at("sum_p_over_d").at("by_d").items()) {
    r.sum_p_by_d[std::stoull(d)] = s.get<u64>();
  }
  r.sum_p_over_d = j.at("sum_p_over_d").at("value").get<double>();
  r.sum_check = j.at("sum_check").get<u64>();
  r.sum_p = j.at("sum_p").get<u64>();
  r.li_X = j.at("li_X").get<double>();
  r.li_X2 = j.at("li_X2").get<double>();
  r.empirical_c = j.at("empirical_c").get<double>();
  if (const auto& t = j.at("target_c_E"); !t.is_null()) {
    r.target_c_E = BoundedValue{t.at("value").get<double>(), t.at("error").get<double>(),
                                t.at("truncation").get<double>()};
  }
  if (j.contains("target_note")) r.target_note = j.at("target_note").get<std::string>();
  for (const auto& [k, e] : j.at("census").items()) {
    CensusEntry ce;
    ce.count = e.at("count").get<u64>();
    if (!e.at("expected").is_null()) ce.expected = e.at("expected").get<double>();
    r.census[std::stoull(k)] = ce;
  }
  r.cyclic_count = j.at("cyclic_count").get<u64>();
  r.runtime_seconds = j.at("runtime_seconds").get<double>();
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ecexp
