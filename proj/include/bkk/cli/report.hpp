#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bkk/cli/config.hpp"
#include "bkk/cyclotomic.hpp"

namespace bkk::cli {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "bkk-report/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Exit status contract.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitBudget = 3 };

enum class Status { Pass, Fail, Skipped };
std::string to_string(Status s);

struct CheckRecord {
  std::string name;
  Status status = Status::Pass;
  /// Non-gating checks are reported but do not affect the exit status.
  bool gating = true;
  std::optional<double> max_discrepancy;
  double runtime_ms = 0.0;
  std::string reason;  // why a check was skipped or failed, when known
  Json details = Json::object();
};

struct Report {
  RunConfig config;
  std::vector<CheckRecord> checks;
  Json gamma_table;  // null when the command emits none
  Json sections = Json::object();  // command-specific payloads, e.g. "calibration", "etheta"

  /// 0 when every gating check passes; 1 on any gating failure; otherwise 3 if a gating check was skipped.
  int exit_status() const;
  Json to_json() const;
  /// Deterministic serialization: sorted keys, two-space indent, trailing newline.
  std::string dump() const;
};

/// Rounds to 15 significant digits and maps -0 to 0.
double round15(double v);
Json json_number(double v);
Json json_complex(std::complex<double> z);
Json json_cyclotomic(const Cyclotomic& c);
Json json_config(const RunConfig& c);

}  // namespace bkk::cli
