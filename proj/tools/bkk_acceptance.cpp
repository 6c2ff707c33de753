// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bkk/cli/commands.hpp"
#include "bkk/corpus.hpp"
#include "bkk/mellin.hpp"
#include "bkk/torus_bessel.hpp"
#include "bkk/vanishing.hpp"

using namespace bkk;
using namespace bkk::cli;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

const std::vector<std::pair<std::string, std::vector<IntVec>>> kListedGl2{
    {"std", {{1, 0}, {0, 1}}},
    {"std+std", {{1, 0}, {0, 1}, {1, 0}, {0, 1}}},
    {"sym2", {{2, 0}, {1, 1}, {0, 2}}},
    {"det-std", {{2, 1}, {1, 2}}},
    {"det2-std", {{3, 2}, {2, 3}}},
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RawArgs raw_args(const std::string& command, const std::string& group, int q, const std::string& weights = "std") {
  RawArgs r;
  r.command = command;
  r.group = group;
  r.q = q;
  r.weights = weights;
  return r;
}

// 1. Torus Mellin transform against the Gauss-sum product.
Outcome gauss_product() {
  Outcome o;
  const std::vector<std::pair<Preset, std::vector<IntVec>>> cases{
      {Preset::GL1, {{1}}},
      {Preset::GL1, {{1}, {1}}},
      {Preset::GL2, {{1, 0}, {0, 1}}},
      {Preset::GL2, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}},
      {Preset::GL2, {{2, 0}, {1, 1}, {0, 2}}},
      {Preset::GL2, {{2, 1}, {1, 2}}},
  };
  double worst_float = 0.0;
  int checked = 0;
  for (int q : {3, 5, 7, 11}) {
    ExactScalars ex(q * (q - 1));
    FloatScalars fl;
    for (const auto& [preset, w] : cases) {
      const WeightSet ws(RootDatum::make(preset), w);
      const auto e = gauss_product_check(ex, ws, 1, q);
      const auto f = gauss_product_check(fl, ws, 1, q);
      o.pass = o.pass && e.exact_equal && f.max_discrepancy < 1e-9;
      worst_float = std::max(worst_float, f.max_discrepancy);
      checked += static_cast<int>(e.characters);
    }
  }
  o.detail = std::to_string(checked) + " characters exact-equal; float max |diff| " + fmt(worst_float);
  return o;
}

// 2. GL_2 class and character tables.
Outcome character_tables() {
  Outcome o;
  for (int q : {3, 5, 7, 11}) {
    const auto cl = gl2_classes(q);
    const auto t = gl2_character_table(cl);
    if (static_cast<int>(t.rows.size()) != q * q - 1) o.pass = false;
    int64_t sum = 0;
    for (const auto& r : t.rows) sum += r.dim * r.dim;
    if (sum != cl.group_order) o.pass = false;
    ExactScalars s(static_cast<int>(t.order));
    std::vector<ClassFunction<ExactScalars>> chars;
    for (size_t r = 0; r < t.rows.size(); ++r) chars.push_back(character_values(s, t, r));
    for (size_t a = 0; a < chars.size(); ++a)
      for (size_t b = a; b < chars.size(); ++b)
        if (class_inner_product(s, cl, chars[a], chars[b]) != s.from_int(a == b ? 1 : 0)) o.pass = false;
  }
  // Brute-force conjugacy partition of GL_2(F_3).
  const auto cl = gl2_classes(3);
  const auto& f = *cl.fq;
  const auto elements = gl2_elements(f);
  auto code = [](const Mat2& m) { return ((m.a * 3 + m.b) * 3 + m.c) * 3 + m.d; };
  std::map<int, int> orbit_of;
  std::vector<int64_t> orbit_size;
  std::vector<int> orbit_class;
  for (const auto& g : elements) {
    if (orbit_of.count(code(g))) continue;
    std::set<int> seen;
    const int idx = static_cast<int>(orbit_size.size());
    const int cls = cl.class_of(g);
    for (const auto& x : elements) {
      const Mat2 c = mat_mul(f, mat_mul(f, x, g), mat_inv(f, x));
      if (seen.insert(code(c)).second) {
        orbit_of[code(c)] = idx;
        if (cl.class_of(c) != cls) o.pass = false;
      }
    }
    orbit_size.push_back(static_cast<int64_t>(seen.size()));
    orbit_class.push_back(cls);
  }
  if (elements.size() != 48 || static_cast<int>(orbit_size.size()) != cl.size()) o.pass = false;
  for (size_t i = 0; i < orbit_size.size(); ++i)
    if (orbit_size[i] != cl.classes[orbit_class[i]].size) o.pass = false;
  if (std::set<int>(orbit_class.begin(), orbit_class.end()).size() != orbit_class.size()) o.pass = false;
  o.detail = "q in {3,5,7,11}: q^2-1 rows, exact orthogonality, sum dim^2 = |G|; q=3: " + std::to_string(orbit_size.size()) +
             " brute-force classes over " + std::to_string(elements.size()) + " elements";
  return o;
}

// 3. Eigen-property with the calibrated convention.
Outcome eigen() {
  Outcome o;
  double worst = 0.0;
  int rows = 0;
  for (int q : {3, 5, 7})
    for (const auto& [name, w] : kListedGl2) {
      const auto e = eigen_check(q, 1, ScalarMode::Exact, w, canonical_convention());
      o.pass = o.pass && e.exact_equal && e.max_discrepancy < 1e-8;
      worst = std::max(worst, e.max_discrepancy);
      rows += e.rows;
    }
  o.detail = std::to_string(rows) + " (q, rho, pi) triples exact; max normalized discrepancy " + fmt(worst);
  return o;
}

// 4. std kernel is a single scalar times psi(tr g).
Outcome std_kernel() {
  Outcome o;
  std::string cs;
  double worst = 0.0;
  for (int q : {3, 5, 7}) {
    const auto c = compare_std_kernel(q, 1, ScalarMode::Exact, canonical_convention(), 1e-9);
    o.pass = o.pass && c.proportional && c.residual < 1e-9;
    worst = std::max(worst, c.residual);
    cs += (cs.empty() ? "" : ", ") + ("c(q=" + std::to_string(q) + ")=" + fmt(c.c.real()) + (std::abs(c.c.imag()) > 1e-12 ? "+i" + fmt(c.c.imag()) : ""));
  }
  o.detail = cs + "; max relative residual " + fmt(worst);
  return o;
}

// 5. Cell-sum vanishing with the non-triviality control.
Outcome vanishing() {
  Outcome o;
  double worst = 0.0, weakest_control = 1e300;
  int runs = 0;
  for (int q : {3, 5, 7, 11}) {
    const auto cl = gl2_classes(q);
    const auto t = gl2_character_table(cl);
    auto judge = [&](const auto& s) {
      for (const auto& [name, w] : kListedGl2) {
        const auto k = kernel_on_group(s, t, cl, gamma_table(s, t, w, 1, canonical_convention()));
        const auto r = class_function_coset_sums(s, cl, k);
        const bool ok = r.max_off_borel < 1e-8 * r.max_phi && r.max_on_borel > 1e-3 * r.max_phi && r.exact_zero;
        o.pass = o.pass && ok;
        worst = std::max(worst, r.max_off_borel / r.max_phi);
        weakest_control = std::min(weakest_control, r.max_on_borel / r.max_phi);
        ++runs;
      }
    };
    judge(ExactScalars(exact_conductor(q)));
  }
  const auto ext = extension_scalars_sums(ExactScalars(exact_conductor(3)), 3, 2, 1);
  o.pass = o.pass && ext.exact_zero && ext.max_off_borel < 1e-8 * ext.max_phi && ext.max_on_borel > 1e-3 * ext.max_phi;
  o.detail = std::to_string(runs) + " (q, rho) runs with exactly zero off-Borel sums; max off-Borel/max|phi| " + fmt(worst) +
             "; min on-Borel ratio " + fmt(weakest_control) + "; std over F_9 exact zero on " + std::to_string(ext.cosets) + " cosets";
  return o;
}

// 6. Packet constancy and byte identity under permutation within packets.
Outcome packets() {
  Outcome o;
  Hooks within;
  within.table_transform = [](CharacterTable& t) {
    std::map<std::string, std::vector<size_t>> pos;
    for (size_t i = 0; i < t.rows.size(); ++i) pos[t.rows[i].datum.to_string()].push_back(i);
    const auto rows = t.rows;
    for (const auto& [k, idx] : pos)
      for (size_t j = 0; j < idx.size(); ++j) t.rows[idx[(j + 1) % idx.size()]] = rows[idx[j]];
  };
  int reports = 0;
  for (int q : {3, 5, 7, 11}) {
    for (const auto& [name, w] : kListedGl2) {
      std::vector<RawArgs> runs;
      RawArgs g = raw_args("gamma", "gl2", q, name);
      g.mode = q <= 7 ? "exact" : "float";
      runs.push_back(g);
      RawArgs p = g;
      p.command = "verify";
      p.which = "packets";
      runs.push_back(p);
      if (q <= 5) {
        for (const char* which : {"eigen", "vanishing"}) {
          RawArgs v = p;
          v.which = which;
          runs.push_back(v);
        }
      }
      if (name == "std" && q <= 5) runs.push_back(raw_args("calibrate", "gl2", q));
      for (const auto& r : runs) {
        const RunConfig c = make_config(r);
        const Report base = run(c);
        if (base.exit_status() != kExitPass) o.pass = false;
        if (run(c, within).dump() != base.dump()) o.pass = false;
        ++reports;
      }
    }
  }
  o.detail = std::to_string(reports) + " reports pass packet-constancy and are byte-identical after permuting rows within packets";
  return o;
}

// 7. E_theta suite over SL_2 and GL_2 for every character.
Outcome etheta() {
  Outcome o;
  int chars = 0, sl2_quadratic = 0;
  for (const char* group : {"sl2", "gl2"}) {
    const Preset preset = parse_preset(group);
    for (int q : {3, 5, 7, 11, 13}) {
      for (const auto& chi : all_characters(RootDatum::make(preset).rank, q)) {
        RawArgs r = raw_args("verify", group, q);
        r.which = "etheta";
        r.chi.clear();
        for (size_t i = 0; i < chi.m.size(); ++i) r.chi += (i ? "," : "") + std::to_string(chi.m[i]);
        const Report rep = run(make_config(r));
        if (rep.exit_status() != kExitPass) o.pass = false;
        ++chars;
        if (preset == Preset::SL2 && 2 * chi.m[0] == q - 1) {
          ++sl2_quadratic;
          const std::string pre = "etheta" + chi.to_string() + "/";
          for (const auto& c : rep.checks) {
            if (c.name == pre + "central" && c.status != Status::Pass) o.pass = false;
            if (c.name == pre + "strongly-central" && c.status != Status::Fail) o.pass = false;
          }
        }
      }
    }
  }
  o.detail = std::to_string(chars) + " characters: relations, dimension, support, central, descent; " + std::to_string(sl2_quadratic) +
             " SL2 quadratic characters central but not strongly central";
  return o;
}

// 8. central <=> descent on the generated corpus.
Outcome characterization() {
  Outcome o;
  const auto corpus = generate_corpus();
  int central = 0, max_dim = 0, max_rank = 0;
  for (const auto& e : corpus) {
    const bool a = check_centrality(e.module, CentralityMode::Central).pass;
    const bool b = check_descent(e.module).pass;
    if (a != b) o.pass = false;
    central += a;
    max_dim = std::max(max_dim, e.module.dim);
    max_rank = std::max(max_rank, e.module.rd.rank);
  }
  if (corpus.size() < 100 || max_dim > 6 || max_rank > 2) o.pass = false;
  o.detail = std::to_string(corpus.size()) + " modules (dim <= " + std::to_string(max_dim) + ", rank <= " + std::to_string(max_rank) +
             "); " + std::to_string(central) + " central, all agree with descent";
  return o;
}

// 9. Convolution with E_theta collapses.
Outcome collapse() {
  Outcome o;
  int pairs = 0, zero = 0;
  std::map<std::pair<Preset, int>, std::vector<TorusCharacter>> reps;
  for (const auto& e : generate_corpus()) {
    if (!check_centrality(e.module, CentralityMode::StronglyCentral).pass) continue;
    const auto key = std::make_pair(e.module.rd.preset, e.module.q);
    if (!reps.count(key)) reps[key] = orbit_representatives(e.module.rd, e.module.q);
    for (const auto& chi : reps[key]) {
      const auto r = tensor_and_collapse(e.module, chi);
      if (!r.precondition_ok || !r.pass) o.pass = false;
      bool v_zero = true;
      for (int d : r.v_dims) v_zero = v_zero && d == 0;
      zero += v_zero;
      ++pairs;
    }
  }
  if (zero == 0) o.pass = false;
  o.detail = std::to_string(pairs) + " (strongly-central module, theta) pairs pass, " + std::to_string(zero) + " with V = 0";
  return o;
}

// 10. W_chi = W'_chi for connected-centre presets.
Outcome stabilizer_identity() {
  Outcome o;
  int count = 0;
  for (Preset p : {Preset::GL1, Preset::GL2, Preset::GL3}) {
    const RootDatum rd = RootDatum::make(p);
    const auto W = weyl_elements(rd);
    for (int q : {2, 3, 5, 7, 11, 13})
      for (const auto& chi : all_characters(rd.rank, q)) {
        const auto st = stabilizers(rd, W, chi);
        if (st.full != st.reflection) o.pass = false;
        ++count;
      }
  }
  o.detail = std::to_string(count) + " characters over GL1/GL2/GL3, q in {2,3,5,7,11,13}";
  return o;
}

// 11. Calibration and the pinned regression reports.
Outcome calibration() {
  Outcome o;
  std::string sets;
  for (int q : {3, 5}) {
    const Report rep = run(make_config(raw_args("calibrate", "gl2", q)));
    for (const auto& c : rep.checks) {
      if ((c.name == "calibration" || c.name == "psi-independence" || c.name == "canonical-frozen") && c.status != Status::Pass) o.pass = false;
    }
    sets += (sets.empty() ? "" : ", ") + ("q=" + std::to_string(q) + " " + rep.sections.at("calibration")["passing"].dump());
  }
  int pinned = 0;
  for (int q : {3, 5}) {
    const std::string stem = "gl2_q" + std::to_string(q) + "_std_";
    std::vector<std::pair<std::string, RawArgs>> cases{{stem + "gamma.json", raw_args("gamma", "gl2", q)}};
    for (const char* w : {"eigen", "packets", "vanishing"}) {
      RawArgs v = raw_args("verify", "gl2", q);
      v.which = w;
      cases.emplace_back(stem + "verify_" + w + ".json", v);
    }
    for (const auto& [file, r] : cases) {
      const auto path = std::filesystem::path(BKK_GOLDEN_DIR) / file;
      if (!std::filesystem::exists(path) || run(make_config(r)).dump() != read_file(path)) o.pass = false;
      ++pinned;
    }
  }
  o.detail = "passing sets " + sets + " for every psi; " + std::to_string(pinned) + " pinned reports byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Gauss product identity", 10, gauss_product},
      {2, "Character table integrity", 30, character_tables},
      {3, "Eigen-property", 60, eigen},
      {4, "std-kernel comparison", 0, std_kernel},
      {5, "Cell-sum vanishing", 300, vanishing},
      {6, "Packet constancy", 0, packets},
      {7, "E_theta suite", 30, etheta},
      {8, "Characterization equivalence", 0, characterization},
      {9, "Convolution collapse", 0, collapse},
      {10, "Connected-center stabilizer identity", 0, stabilizer_identity},
      {11, "Calibration", 0, calibration},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string limit;
    if (c.limit_s > 0) {
      limit = " (limit " + fmt(c.limit_s) + " s)";
      if (secs >= c.limit_s) {
        o.pass = false;
        o.detail += "; runtime limit exceeded";
      }
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s [%.2f s%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(), secs, limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
