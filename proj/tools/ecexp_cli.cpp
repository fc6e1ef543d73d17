#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecexp/constants.hpp"
#include "ecexp/report_io.hpp"
#include "ecexp/sweep.hpp"

using namespace ecexp;
using nlohmann::ordered_json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitConsistency = 3;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Appends `--key value` for each config line whose flag is not already on
// the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given |= a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) {
      extra.push_back(flag);
      extra.push_back(trim(line.substr(eq + 1)));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::vector<u64> parse_list(const std::string& s) {
  std::vector<u64> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad list entry: " + item);
    out.push_back(v);
  }
  return out;
}

ordered_json bounded_json(const std::string& which, const BoundedValue& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", v.value);
  return {{"which", which},        {"value", v.value},     {"error", v.error},
          {"truncation", v.truncation}, {"rounded_10", buf}};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponents of elliptic curves over finite fields: sweeps, censuses, constants", "ecexp"};
  app.require_subcommand(1);

  i64 a = 0, b = 0;
  u64 limit = 0, p = 0, seed = 0, truncation = 1000;
  unsigned threads = 0, partitions = 1;
  std::string oracle_spec = "generic", census_list, k_list, format = "json",
              out, which;
  double eps = 1e-12;

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (0: OpenMP default)");
    sub->add_option("--seed", seed, "Seed for point sampling");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep primes p <= X and report sums");
  sweep_cmd->add_option("--a", a)->required();
  sweep_cmd->add_option("--b", b)->required();
  sweep_cmd->add_option("--limit", limit, "X")->required();
  sweep_cmd->add_option("--oracle", oracle_spec);
  sweep_cmd->add_option("--census", census_list, "Comma-separated k (default 2,3,4,5,6)");
  sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  sweep_cmd->add_option("--out", out);
  sweep_cmd->add_option("--partitions", partitions);
  sweep_cmd->add_option("--truncation", truncation);
  add_threads(sweep_cmd);

  auto* census_cmd = app.add_subcommand("census", "Count primes with k | d_p");
  census_cmd->add_option("--a", a)->required();
  census_cmd->add_option("--b", b)->required();
  census_cmd->add_option("--limit", limit)->required();
  census_cmd->add_option("--k", k_list)->required();
  census_cmd->add_option("--oracle", oracle_spec);
  add_threads(census_cmd);

  auto* const_cmd = app.add_subcommand("constants", "Evaluate c, C, CM products, c_E, c*_E");
  const_cmd->add_option("--which", which, "c | C | cm:<D> | cE | cstar")->required();
  const_cmd->add_option("--oracle", oracle_spec);
  const_cmd->add_option("--eps", eps);
  const_cmd->add_option("--truncation", truncation);
  add_threads(const_cmd);

  auto* struct_cmd = app.add_subcommand("structure", "Print the local data at one prime");
  struct_cmd->add_option("--a", a)->required();
  struct_cmd->add_option("--b", b)->required();
  struct_cmd->add_option("--p", p)->required();
  add_threads(struct_cmd);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (threads) omp_set_num_threads(static_cast<int>(threads));
    if (*sweep_cmd) {
      SweepConfig config;
      config.curve = CurveZ(a, b);
      config.X = limit;
      config.oracle = parse_oracle_spec(oracle_spec);
      if (!census_list.empty()) config.census_ks = parse_list(census_list);
      config.seed = seed;
      config.threads = threads;
      config.partitions = partitions;
      config.truncation = truncation;
      const SweepReport r = sweep(config);
      emit(format == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n", out);
    } else if (*census_cmd) {
      const auto result = census(CurveZ(a, b), limit, parse_list(k_list),
                                 parse_oracle_spec(oracle_spec), seed);
      ordered_json j = ordered_json::object();
      for (const auto& [k, ce] : result) {
        j[std::to_string(k)] = {{"count", ce.count},
                                {"expected", ce.expected ? ordered_json(*ce.expected)
                                                         : ordered_json(nullptr)}};
      }
      std::cout << j.dump(2) << "\n";
    } else if (*const_cmd) {
      BoundedValue v;
      if (which == "c") {
        v = universal_c(eps);
      } else if (which == "C") {
        v = kummer_C(eps);
      } else if (which.rfind("cm:", 0) == 0) {
        v = cm_product(static_cast<unsigned>(std::stoul(which.substr(3))), eps);
      } else if (which == "cE") {
        const DegreeOracle o = parse_oracle_spec(oracle_spec);
        v = o.kind() == OracleKind::table_corrected ? c_E_closed_form(o, eps)
                                                    : c_E_series(o, truncation);
      } else if (which == "cstar") {
        v = cyclicity_constant(parse_oracle_spec(oracle_spec), truncation);
      } else {
        throw std::invalid_argument("--which must be c, C, cm:<D>, cE or cstar");
      }
      std::cout << bounded_json(which, v).dump(2) << "\n";
    } else if (*struct_cmd) {
      const auto E = reduce(CurveZ(a, b), p);
      if (!E) throw std::invalid_argument("bad reduction at p = " + std::to_string(p));
      const LocalData ld = structure_pair(*E, seed);
      const ordered_json j = {{"p", ld.p}, {"a_p", ld.a_p}, {"N", ld.N}, {"d_p", ld.d},
                              {"e_p", ld.e}};
      std::cout << j.dump() << "\n";
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
