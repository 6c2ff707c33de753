#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bkk/cli/commands.hpp"
#include "bkk/errors.hpp"

namespace {

void add_common(CLI::App* sub, bkk::cli::RawArgs& raw, std::string& out) {
  sub->add_option("--group", raw.group, "group preset: gl1, gl2, gl3, sl2")->capture_default_str();
  sub->add_option("--q", raw.q, "prime field size")->capture_default_str();
  sub->add_option("--weights", raw.weights, "weights 'a,b;c,d' or alias std|std+std|sym2|det-std|det2-std")->capture_default_str();
  sub->add_option("--psi", raw.psi, "additive character root index in [1, q-1]")->capture_default_str();
  sub->add_option("--mode", raw.mode, "scalar mode: exact (default) or float");
  sub->add_option("--tol", raw.tol, "tolerance overrides name=value[,name=value]");
  sub->add_option("--convention", raw.convention, "sign,invert,qexp (default: frozen canonical)");
  sub->add_option("--chi", raw.chi, "character exponents for etheta/descent, comma separated");
  sub->add_option("--out", out, "write the report here (relative paths resolve against BKK_REPORT_DIR)");
  sub->add_flag("--timings", raw.timings, "include per-check runtimes (reports are then not byte-stable)");
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("BKK_REPORT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bkk::cli;
  CLI::App app{"bkk: gamma functions, Fourier kernels and Mellin module checks for small finite reductive groups"};
  app.require_subcommand(1);
  RawArgs raw;
  std::string out;
  for (const char* name : {"gamma", "verify", "calibrate", "etheta"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, raw, out);
    if (std::string(name) == "verify") sub->add_option("which", raw.which, "descent|eigen|etheta|gauss-product|packets|vanishing")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }
  raw.command = app.get_subcommands().front()->get_name();

  try {
    const RunConfig config = make_config(raw);
    const Report report = run(config);
    const std::string text = report.dump();
    if (out.empty()) {
      std::cout << text;
    } else {
      const auto path = resolve_out(out);
      std::ofstream f(path, std::ios::binary);
      if (!f) {
        std::cerr << "bkk: cannot write " << path.string() << "\n";
        return kExitUsage;
      }
      f << text;
      std::cerr << "bkk: wrote " << path.string() << "\n";
    }
    return report.exit_status();
  } catch (const UsageError& e) {
    std::cerr << "bkk: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bkk::BudgetExceeded& e) {
    std::cerr << "bkk: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bkk: usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}
