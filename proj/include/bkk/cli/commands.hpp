#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bkk/cli/config.hpp"
#include "bkk/cli/report.hpp"
#include "bkk/gl2.hpp"

namespace bkk::cli {

/// Test seams. table_transform rewrites the character table before use (e.g. permuting rows);
/// corrupt_gamma flips the sign of gamma on one packet (negative control).
struct Hooks {
  std::function<void(CharacterTable&)> table_transform;
  bool corrupt_gamma = false;
};

/// phi_G against psi(tr g): least-squares scalar c and the relative residual max|phi - c psi(tr)| / max|phi|.
struct StdComparison {
  std::complex<double> c;
  double residual = 0.0;
  bool proportional = false;  // exact mode: exact ratio test; float mode: residual < tol
  bool unit = false;          // proportional with c = 1
};

/// F(chi_pi) against gamma(pi) chi_pi for every row; discrepancy normalized by dim * max(1, |gamma|).
struct EigenResult {
  double max_discrepancy = 0.0;
  std::string worst_row;
  bool exact_equal = true;  // exact mode only
  int rows = 0;
};

struct CalibrationCandidate {
  Convention convention;
  StdComparison std;
  bool suites_run = false;  // eigen + vanishing are evaluated for proportional candidates only
  bool eigen = false;
  bool vanishing = false;
  bool pass = false;
};

struct CalibrationResult {
  int q = 0;
  int psi = 1;
  std::vector<CalibrationCandidate> candidates;  // in convention order
  std::vector<Convention> passing;
  double min_residual = 0.0;
};

/// Convention space in lexicographic order (sign, invert, qexp).
std::vector<Convention> convention_space();

StdComparison compare_std_kernel(int q, int psi, ScalarMode mode, const Convention& conv, double tol, const Hooks& hooks = {});
EigenResult eigen_check(int q, int psi, ScalarMode mode, const std::vector<IntVec>& weights, const Convention& conv, const Hooks& hooks = {});
CalibrationResult calibrate(int q, int psi, ScalarMode mode, const std::map<std::string, double>& tol, const Hooks& hooks = {});

Report cmd_gamma(const RunConfig& c, const Hooks& hooks = {});
Report cmd_verify(const RunConfig& c, const Hooks& hooks = {});
Report cmd_calibrate(const RunConfig& c, const Hooks& hooks = {});
Report cmd_etheta(const RunConfig& c, const Hooks& hooks = {});
/// Dispatches on c.command. Throws UsageError on inputs the computation cannot accept.
Report run(const RunConfig& c, const Hooks& hooks = {});

}  // namespace bkk::cli
