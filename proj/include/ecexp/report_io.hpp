#pragma once

#include <iosfwd>
#include <string>

#include "ecexp/sweep.hpp"
#include "json.hpp"

namespace ecexp {

/// Per-prime rows under the header `p,a_p,N,d_p,e_p`.
void write_csv(const SweepReport& report, std::ostream& out);
std::string to_csv(const SweepReport& report);

/// Summary fields in a fixed order (records are left to the CSV stream).
nlohmann::ordered_json to_json(const SweepReport& report);
/// Inverse of to_json for the summary fields.
SweepReport report_from_json(const nlohmann::ordered_json& j);

/// Writes `content` to `path`; std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace ecexp
