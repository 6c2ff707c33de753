#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "bkk/cli/commands.hpp"
#include "bkk/corpus.hpp"

using namespace bkk;
using namespace bkk::cli;

namespace {

RawArgs args(const std::string& command, const std::string& group, int q, const std::string& weights = "std") {
  RawArgs r;
  r.command = command;
  r.group = group;
  r.q = q;
  r.weights = weights;
  return r;
}

RawArgs verify_args(const std::string& which, const std::string& group, int q, const std::string& weights = "std") {
  RawArgs r = args("verify", group, q, weights);
  r.which = which;
  return r;
}

Report run_raw(const RawArgs& r, const Hooks& h = {}) { return run(make_config(r), h); }

const CheckRecord& check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::complex<double> zeta(long n, long k) {
  k %= n;
  if (k < 0) k += n;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

// Gauss sum over F_q by direct summation, eta(generator^j) = zeta_{q-1}^{e j}.
std::complex<double> brute_gauss(int q, long e, int root) {
  const long g = FiniteField::get(q, 1)->generator();
  std::complex<double> s = 0;
  long x = 1;
  for (int j = 0; j < q - 1; ++j) {
    s += zeta(q - 1, e * j) * zeta(q, root * x);
    x = x * g % q;
  }
  return s;
}

std::complex<double> json_value(const Json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

void permute_packets(CharacterTable& t) {
  std::map<std::string, std::vector<size_t>> pos;
  for (size_t i = 0; i < t.rows.size(); ++i) pos[t.rows[i].datum.to_string()].push_back(i);
  auto rows = t.rows;
  for (const auto& [k, idx] : pos)
    for (size_t j = 0; j < idx.size(); ++j) t.rows[idx[(j + 1) % idx.size()]] = rows[idx[j]];
}

int run_binary(const std::string& argv, const std::string& env = "") {
  const std::string cmd = env + " " + BKK_BINARY + " " + argv + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

// ---------------------------------------------------------------- config

TEST(Config, WeightGrammarRoundTripProperty) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-9, 9), len(1, 5), coin(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const int rank = 1 + trial % 3;
    std::vector<IntVec> w(len(rng), IntVec(rank));
    std::string noisy;
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) noisy += coin(rng) ? ";" : " ; ";
      for (int j = 0; j < rank; ++j) {
        w[i][j] = val(rng);
        if (j) noisy += coin(rng) ? "," : ", ";
        if (w[i][j] >= 0 && coin(rng) == 0) noisy += "+";
        if (w[i][j] >= 0 && coin(rng) == 0) noisy += "0";
        noisy += std::to_string(w[i][j]);
      }
    }
    const std::string canon = canonical_weights(noisy, rank);
    EXPECT_EQ(parse_weights(noisy, rank), w) << noisy;
    EXPECT_EQ(serialize_weights(parse_weights(noisy, rank)), canon);
    EXPECT_EQ(canonical_weights(canon, rank), canon);
  }
}

TEST(Config, AliasesExpand) {
  EXPECT_EQ(canonical_weights("std", 2), "1,0;0,1");
  EXPECT_EQ(canonical_weights("std", 1), "1");
  EXPECT_EQ(canonical_weights("sym2", 2), "2,0;1,1;0,2");
  EXPECT_EQ(canonical_weights("det-std", 2), "2,1;1,2");
  EXPECT_THROW(parse_weights("sym2", 1), UsageError);
}

TEST(Config, LineRoundTripProperty) {
  std::mt19937 rng(11);
  const std::vector<std::string> cmds{"gamma", "verify", "calibrate", "etheta"};
  const std::vector<std::string> suites{"vanishing", "eigen", "packets", "gauss-product", "etheta", "descent"};
  for (int trial = 0; trial < 200; ++trial) {
    RawArgs r = args(cmds[trial % 4], "gl2", trial % 2 ? 5 : 3);
    r.psi = 1 + static_cast<int>(rng() % (r.q - 1));
    r.mode = rng() % 2 ? "float" : "exact";
    if (rng() % 2) r.tol = "eigen=" + std::to_string(1 + rng() % 9) + "e-9, vanishing = 2.5e-8";
    if (r.command == "verify") r.which = suites[rng() % suites.size()];
    if (r.command != "calibrate" && rng() % 2) r.convention = std::string(rng() % 2 ? "+1" : "-1") + ", 1 ," + std::to_string(static_cast<int>(rng() % 9) - 4);
    if ((r.command == "etheta" || r.which == "etheta" || r.which == "descent") && rng() % 2) r.chi = "1, " + std::to_string(rng() % 7);
    r.timings = rng() % 2;
    const RunConfig c = make_config(r);
    const std::string line = serialize(c);
    EXPECT_EQ(serialize(parse(line)), line);
  }
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(make_config(args("gamma", "gl2", 3, "1,0;x")), UsageError);
  EXPECT_THROW(make_config(args("gamma", "gl2", 3, "1,0;0")), UsageError);
  EXPECT_THROW(make_config(args("gamma", "gl2", 3, "")), UsageError);
  EXPECT_THROW(make_config(args("gamma", "gl2", 4)), UsageError);
  EXPECT_THROW(make_config(args("gamma", "gl2", 2)), UsageError);
  EXPECT_THROW(make_config(args("gamma", "gl2", 17)), UsageError);
  EXPECT_THROW(make_config(args("gamma", "sl2", 3)), UsageError);
  EXPECT_THROW(make_config(args("gamma", "e8", 3)), UsageError);
  EXPECT_THROW(make_config(args("bogus", "gl2", 3)), UsageError);
  for (int psi : {0, 3}) {
    RawArgs r = args("gamma", "gl2", 3);
    r.psi = psi;
    EXPECT_THROW(make_config(r), UsageError);
  }
  for (const char* conv : {"2,1,1", "1,2,1", "1,1,5", "1,1", "a,b,c"}) {
    RawArgs r = args("gamma", "gl2", 3);
    r.convention = conv;
    EXPECT_THROW(make_config(r), UsageError) << conv;
  }
  for (const char* tol : {"eigen", "foo=1", "eigen=-1", "eigen=x"}) {
    RawArgs r = args("gamma", "gl2", 3);
    r.tol = tol;
    EXPECT_THROW(make_config(r), UsageError) << tol;
  }
  RawArgs cal = args("calibrate", "gl2", 3);
  cal.convention = "1,1,1";
  EXPECT_THROW(make_config(cal), UsageError);
  EXPECT_THROW(make_config(args("calibrate", "gl2", 3, "sym2")), UsageError);
  EXPECT_THROW(make_config(verify_args("nonsense", "gl2", 3)), UsageError);
  EXPECT_THROW(make_config(verify_args("eigen", "sl2", 3)), UsageError);
  RawArgs chi = args("gamma", "gl2", 3);
  chi.chi = "1,0";
  EXPECT_THROW(make_config(chi), UsageError);
  RawArgs bad_chi = args("etheta", "sl2", 5);
  bad_chi.chi = "1,2";
  EXPECT_THROW(make_config(bad_chi), UsageError);
}

TEST(Config, MellinSuitesForceExactMode) {
  RawArgs r = verify_args("etheta", "sl2", 5);
  r.mode = "float";
  EXPECT_EQ(make_config(r).mode, ScalarMode::Exact);
  RawArgs g = args("gamma", "gl2", 5);
  g.mode = "float";
  EXPECT_EQ(make_config(g).mode, ScalarMode::Float);
}

TEST(Config, ToleranceOverridesMerge) {
  RawArgs r = args("gamma", "gl2", 3);
  r.tol = "eigen=1e-6";
  const RunConfig c = make_config(r);
  EXPECT_EQ(c.tolerance("eigen"), 1e-6);
  EXPECT_EQ(c.tolerance("vanishing"), 1e-8);
  EXPECT_EQ(c.tol.size(), default_tolerances().size());
}

// ---------------------------------------------------------------- report

TEST(Report, FloatFormatting) {
  EXPECT_EQ(json_complex({-0.0, -0.0}).dump(), "[0.0,0.0]");
  EXPECT_EQ(json_number(0.1 + 0.2).dump(), "0.3");
  EXPECT_EQ(json_number(1.0 / 3.0).dump(), "0.333333333333333");
  EXPECT_EQ(json_number(-2.0).dump(), "-2.0");
  EXPECT_EQ(round15(123456789.123456789), 123456789.123457);
}

TEST(Report, ChecksSortedAndExitPrecedence) {
  Report r{make_config(args("gamma", "gl2", 3)), {}, nullptr};
  CheckRecord a, b, c;
  a.name = "zeta";
  b.name = "alpha";
  c.name = "mid";
  r.checks = {a, b, c};
  const Json j = r.to_json();
  EXPECT_EQ(j["checks"][0]["name"], "alpha");
  EXPECT_EQ(j["checks"][2]["name"], "zeta");
  EXPECT_FALSE(j["checks"][0].contains("runtime_ms"));
  EXPECT_EQ(r.exit_status(), kExitPass);

  r.checks[0].status = Status::Skipped;
  EXPECT_EQ(r.exit_status(), kExitBudget);
  r.checks[1].status = Status::Fail;
  EXPECT_EQ(r.exit_status(), kExitFail);
  r.checks[1].gating = false;
  r.checks[0].gating = false;
  EXPECT_EQ(r.exit_status(), kExitPass);

  r.config.timings = true;
  EXPECT_TRUE(r.to_json()["checks"][0].contains("runtime_ms"));
}

TEST(Report, SchemaHeader) {
  const Json j = run_raw(args("gamma", "gl2", 3)).to_json();
  EXPECT_EQ(j["schema"], "bkk-report/1");
  EXPECT_EQ(j["tool"]["version"], kToolVersion);
  EXPECT_EQ(j["config"]["weights"], "1,0;0,1");
  EXPECT_EQ(j["exit_status"], 0);
}

// ---------------------------------------------------------------- gamma

TEST(Gamma, Gl2TableShapeAndTrivialDatum) {
  for (const char* conv : {"1,1,1", "-1,0,2", "1,1,-3"}) {
    RawArgs r = args("gamma", "gl2", 3);
    r.convention = conv;
    const Report rep = run_raw(r);
    const Json& t = rep.gamma_table;
    ASSERT_EQ(t["rows"].size(), 8u);
    const Convention c = parse_convention(conv);
    const double expect = c.sign * std::pow(3.0, c.qexp);
    EXPECT_NEAR(json_value(t["by_datum"]["split(0,0)"]["value"]).real(), expect, 1e-12 * std::abs(expect));
    EXPECT_EQ(check(rep, "trivial-datum").status, Status::Pass);
    EXPECT_EQ(rep.exit_status(), kExitPass);
  }
}

TEST(Gamma, Gl2SplitRowsMatchBruteForceGaussSums) {
  for (int q : {3, 5}) {
    for (int psi = 1; psi < q; ++psi) {
      RawArgs r = args("gamma", "gl2", q);
      r.psi = psi;
      r.mode = "float";
      const Json t = run_raw(r).gamma_table;
      int split_rows = 0;
      for (const auto& row : t["rows"]) {
        long a = 0, b = 0;
        if (std::sscanf(row["datum"].get<std::string>().c_str(), "split(%ld,%ld)", &a, &b) != 2) continue;
        ++split_rows;
        const auto expect = static_cast<double>(q) * brute_gauss(q, -a, psi) * brute_gauss(q, -b, psi);
        EXPECT_LT(std::abs(json_value(row["value"]) - expect), 1e-9) << row["label"];
      }
      EXPECT_GT(split_rows, 0);
    }
  }
}

TEST(Gamma, Gl1EntriesAreSingleGaussSums) {
  RawArgs r = args("gamma", "gl1", 5, "1");
  for (const char* mode : {"exact", "float"}) {
    r.mode = mode;
    const Report rep = run_raw(r);
    const Json& rows = rep.gamma_table["rows"];
    ASSERT_EQ(rows.size(), 4u);
    for (size_t e = 0; e < rows.size(); ++e) EXPECT_LT(std::abs(json_value(rows[e]["value"]) + brute_gauss(5, static_cast<long>(e), 1)), 1e-12);
    EXPECT_EQ(check(rep, "gauss-crosscheck").status, Status::Pass);
  }
}

TEST(Gamma, ExactAndFloatTablesAgree) {
  RawArgs r = args("gamma", "gl2", 5);
  const Json exact = run_raw(r).gamma_table;
  r.mode = "float";
  const Json fl = run_raw(r).gamma_table;
  for (size_t i = 0; i < exact["rows"].size(); ++i) {
    EXPECT_LT(std::abs(json_value(exact["rows"][i]["value"]) - json_value(fl["rows"][i]["value"])), 1e-9);
    EXPECT_TRUE(exact["rows"][i].contains("exact"));
    EXPECT_FALSE(fl["rows"][i].contains("exact"));
  }
}

// ---------------------------------------------------------------- golden corpus

struct Golden {
  std::string file;
  RawArgs raw;
};

std::vector<Golden> golden_cases() {
  std::vector<Golden> g;
  for (int q : {3, 5}) {
    const std::string stem = "gl2_q" + std::to_string(q) + "_std_";
    RawArgs gamma = args("gamma", "gl2", q);
    gamma.mode = "exact";
    g.push_back({stem + "gamma.json", gamma});
    for (const char* w : {"eigen", "packets", "vanishing"}) {
      RawArgs v = verify_args(w, "gl2", q);
      v.mode = "exact";
      g.push_back({stem + "verify_" + w + ".json", v});
    }
  }
  return g;
}

TEST(Golden, ReportsAreByteIdentical) {
  for (const auto& g : golden_cases()) {
    const auto path = std::filesystem::path(BKK_GOLDEN_DIR) / g.file;
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(run_raw(g.raw).dump(), read_file(path)) << g.file;
  }
}

TEST(Golden, RepeatedRunsAreByteIdentical) {
  for (const auto& g : golden_cases()) EXPECT_EQ(run_raw(g.raw).dump(), run_raw(g.raw).dump()) << g.file;
}

TEST(Golden, PacketPermutationLeavesReportsByteIdentical) {
  Hooks within;
  within.table_transform = permute_packets;
  Hooks reversed;
  reversed.table_transform = [](CharacterTable& t) { std::reverse(t.rows.begin(), t.rows.end()); };
  for (const auto& g : golden_cases()) {
    const std::string base = run_raw(g.raw).dump();
    EXPECT_EQ(run_raw(g.raw, within).dump(), base) << g.file;
    EXPECT_EQ(run_raw(g.raw, reversed).dump(), base) << g.file;
  }
}

TEST(Golden, PermutationHookReallyMovesRows) {
  auto t = gl2_character_table(gl2_classes(5));
  auto p = t;
  permute_packets(p);
  int moved = 0;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i].datum, p.rows[i].datum);
    moved += t.rows[i].label != p.rows[i].label;
  }
  EXPECT_GT(moved, 0);
}

// ---------------------------------------------------------------- calibration

TEST(Calibrate, NonemptyPsiIndependentAndCanonical) {
  for (int q : {3, 5}) {
    const Report rep = run_raw(args("calibrate", "gl2", q));
    EXPECT_EQ(rep.exit_status(), kExitPass) << q;
    EXPECT_EQ(check(rep, "calibration").status, Status::Pass);
    EXPECT_EQ(check(rep, "psi-independence").status, Status::Pass);
    EXPECT_EQ(check(rep, "canonical-frozen").status, Status::Pass);
    EXPECT_EQ(check(rep, "frozen-reproduction").status, Status::Pass);
    const Json& cal = rep.sections.at("calibration");
    EXPECT_EQ(cal["canonical"], serialize_convention(canonical_convention()));
    EXPECT_EQ(cal["candidates"].size(), 36u);
  }
}

TEST(Calibrate, ProportionalConventionsFitSignedPowersOfQ) {
  for (int q : {3, 5}) {
    const auto res = calibrate(q, 1, ScalarMode::Exact, default_tolerances());
    int proportional = 0;
    for (const auto& c : res.candidates) {
      if (!c.std.proportional) continue;
      ++proportional;
      EXPECT_EQ(c.convention.invert, 1);
      const double expect = c.convention.sign * std::pow(static_cast<double>(q), c.convention.qexp - 1);
      EXPECT_LT(std::abs(c.std.c - expect), 1e-9 * std::max(1.0, std::abs(expect)));
      EXPECT_TRUE(c.eigen && c.vanishing);
    }
    EXPECT_EQ(proportional, 18);
    ASSERT_EQ(res.passing.size(), 1u);
    EXPECT_EQ(res.passing[0], canonical_convention());
  }
}

TEST(Calibrate, FloatModeAgreesAcrossPsi) {
  for (int psi = 1; psi < 5; ++psi) {
    const auto res = calibrate(5, psi, ScalarMode::Float, default_tolerances());
    ASSERT_EQ(res.passing.size(), 1u);
    EXPECT_EQ(res.passing[0], canonical_convention());
  }
}

TEST(Calibrate, CorruptedSignIsDetected) {
  Hooks h;
  h.corrupt_gamma = true;
  for (int q : {3, 5}) {
    const Report rep = run_raw(args("calibrate", "gl2", q), h);
    EXPECT_EQ(rep.exit_status(), kExitFail);
    const auto& cal = check(rep, "calibration");
    EXPECT_EQ(cal.status, Status::Fail);
    EXPECT_FALSE(cal.reason.empty());
    ASSERT_TRUE(cal.max_discrepancy.has_value());
    EXPECT_GT(*cal.max_discrepancy, 1e-3);
    EXPECT_TRUE(rep.sections.at("calibration")["passing"].empty());
  }
}

// ---------------------------------------------------------------- verify

TEST(Verify, Sl2QuadraticEthetaCentralNotStronglyCentral) {
  RawArgs r = verify_args("etheta", "sl2", 5);
  r.chi = "2";
  const Report rep = run_raw(r);
  EXPECT_EQ(check(rep, "etheta(2)/central").status, Status::Pass);
  const auto& strong = check(rep, "etheta(2)/strongly-central");
  EXPECT_EQ(strong.status, Status::Fail);
  EXPECT_FALSE(strong.gating);
  EXPECT_EQ(rep.exit_status(), kExitPass);
}

TEST(Verify, HeadlineVanishingAndEigen) {
  const Report v = run_raw(verify_args("vanishing", "gl2", 5));
  EXPECT_EQ(v.exit_status(), kExitPass);
  EXPECT_LT(*check(v, "vanishing").max_discrepancy, 1e-8);
  EXPECT_EQ(check(v, "vanishing-control").status, Status::Pass);
  EXPECT_EQ(check(v, "vanishing-extension").status, Status::Pass);

  const Report e = run_raw(verify_args("eigen", "gl2", 3));
  EXPECT_EQ(e.exit_status(), kExitPass);
  EXPECT_EQ(check(e, "eigen").details["rows"], 8);
}

TEST(Verify, ExtensionOverBudgetIsNonGatingSkip) {
  RawArgs r = verify_args("vanishing", "gl2", 7);
  r.mode = "float";
  const Report rep = run_raw(r);
  const auto& ext = check(rep, "vanishing-extension");
  EXPECT_EQ(ext.status, Status::Skipped);
  EXPECT_FALSE(ext.gating);
  EXPECT_EQ(rep.exit_status(), kExitPass);
}

TEST(Verify, GatingBudgetSkipExitsThree) {
  RawArgs r = verify_args("gauss-product", "gl1", 97, "1;1;1;1");
  r.mode = "float";
  const Report rep = run_raw(r);
  EXPECT_EQ(check(rep, "gauss-product").status, Status::Skipped);
  EXPECT_EQ(rep.exit_status(), kExitBudget);
}

TEST(Verify, CorruptedCuspidalGammaIsSeenOnlyByStdComparison) {
  // The negative control flips gamma on the last row in canonical order, a cuspidal row. Cuspidal
  // characters sum to zero over every U-coset and the kernel is assembled from gamma, so cell sums
  // and the eigen relation are blind to it; the std comparison is not.
  Hooks h;
  h.corrupt_gamma = true;
  for (int q : {3, 5}) {
    const auto t = gl2_character_table(gl2_classes(q));
    EXPECT_EQ(t.rows[canonical_row_order(t).back()].family, RepFamily::Cuspidal);
    EXPECT_EQ(run_raw(verify_args("eigen", "gl2", q), h).exit_status(), kExitPass);
    EXPECT_EQ(run_raw(verify_args("vanishing", "gl2", q), h).exit_status(), kExitPass);
    const auto cmp = compare_std_kernel(q, 1, ScalarMode::Exact, canonical_convention(), 1e-9, h);
    EXPECT_FALSE(cmp.proportional);
    EXPECT_GT(cmp.residual, 1e-3);
    EXPECT_TRUE(compare_std_kernel(q, 1, ScalarMode::Exact, canonical_convention(), 1e-9).unit);
  }
}

TEST(Verify, DescentAndCharacterization) {
  const Report rep = run_raw(verify_args("descent", "sl2", 5));
  EXPECT_EQ(rep.exit_status(), kExitPass);
  EXPECT_EQ(check(rep, "characterization").status, Status::Pass);
  EXPECT_GT(check(rep, "characterization").details["modules"].get<int>(), 0);
}

TEST(Verify, GaussProductSuites) {
  for (const char* w : {"std", "sym2", "std+std"}) {
    const Report rep = run_raw(verify_args("gauss-product", "gl2", 5, w));
    EXPECT_EQ(rep.exit_status(), kExitPass) << w;
  }
}

TEST(Etheta, SummarySection) {
  const Report rep = run_raw(args("etheta", "gl2", 3));
  EXPECT_EQ(rep.exit_status(), kExitPass);
  const Json& s = rep.sections.at("etheta");
  EXPECT_EQ(s.size(), orbit_representatives(RootDatum::make(Preset::GL2), 3).size());
  for (const auto& e : s) EXPECT_TRUE(e["central"].get<bool>());
}

// ---------------------------------------------------------------- binary

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_binary("gamma --group gl2 --q 3"), 0);
  EXPECT_EQ(run_binary("gamma --weights '1,0;x'"), 2);
  EXPECT_EQ(run_binary("gamma --group sl2"), 2);
  EXPECT_EQ(run_binary("nonsense"), 2);
  EXPECT_EQ(run_binary("verify"), 2);
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary("verify gauss-product --group gl1 --q 97 --weights '1;1;1;1' --mode float"), 3);
  EXPECT_EQ(run_binary("verify etheta --group sl2 --q 5 --chi 2"), 0);
}

TEST(Binary, OutFileHonoursReportDir) {
  const auto dir = std::filesystem::temp_directory_path() / "bkk_cli_test_reports";
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "r.json");
  ASSERT_EQ(run_binary("gamma --q 3 --out r.json", "BKK_REPORT_DIR=" + dir.string()), 0);
  EXPECT_EQ(read_file(dir / "r.json"), run_raw(args("gamma", "gl2", 3)).dump());
}
