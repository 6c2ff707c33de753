#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkk/gl2.hpp"
#include "bkk/rootdata.hpp"
#include "bkk/scalar.hpp"

namespace bkk::cli {

/// Invalid command-line input; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Gamma, Verify, Calibrate, Etheta };
std::string to_string(Command c);
Command parse_command(const std::string& s);

/// Check suites available to `verify`.
const std::vector<std::string>& verify_suites();

/// Tolerance names and their defaults.
const std::map<std::string, double>& default_tolerances();

struct RunConfig {
  Command command = Command::Gamma;
  Preset group = Preset::GL2;
  int q = 3;
  std::vector<IntVec> weights;
  int psi = 1;
  ScalarMode mode = ScalarMode::Exact;
  std::map<std::string, double> tol;  // always the full resolved set
  std::optional<Convention> convention;
  std::optional<IntVec> chi;
  std::string which;  // verify only
  bool timings = false;

  double tolerance(const std::string& name) const { return tol.at(name); }
  /// The convention in force: the explicit one or the frozen canonical record.
  Convention effective_convention() const;
};

/// The frozen canonical convention.
Convention canonical_convention();

/// Weight grammar: integer vectors joined by ';', entries by ','. Aliases std, std+std, sym2,
/// det-std, det2-std expand for the given rank (the last four need rank 2).
std::vector<IntVec> parse_weights(const std::string& s, int rank);
std::string serialize_weights(const std::vector<IntVec>& w);
/// serialize_weights(parse_weights(s)).
std::string canonical_weights(const std::string& s, int rank);

/// "sign,invert,qexp" with sign in {-1,1}, invert in {0,1}, qexp in [-4,4].
Convention parse_convention(const std::string& s);
std::string serialize_convention(const Convention& c);

/// "name=value[,name=value...]"; unknown names and non-positive values are rejected.
std::map<std::string, double> parse_tolerances(const std::string& s);
std::string serialize_tolerances(const std::map<std::string, double>& tol);

/// Comma-separated exponent vector of length rank, reduced mod q-1.
IntVec parse_chi(const std::string& s, int rank, int q);

/// Raw flag values as received from the command line.
struct RawArgs {
  std::string command;
  std::string which;
  std::string group = "gl2";
  int q = 3;
  std::string weights = "std";
  int psi = 1;
  std::string mode;  // empty: exact
  std::string tol;
  std::string convention;
  std::string chi;
  bool timings = false;
};

/// Validates and resolves raw flags; throws UsageError.
RunConfig make_config(const RawArgs& raw);

/// Canonical one-line form used in report echoes and round-trip tests.
std::string serialize(const RunConfig& c);
RunConfig parse(const std::string& line);

}  // namespace bkk::cli
