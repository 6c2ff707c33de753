#include "bkk/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <set>

#include "bkk/corpus.hpp"
#include "bkk/mellin.hpp"
#include "bkk/torus_bessel.hpp"
#include "bkk/vanishing.hpp"

namespace bkk::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

int64_t euler_phi(int64_t n) {
  int64_t out = n;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    out -= out / p;
  }
  if (n > 1) out -= out / n;
  return out;
}

/// Exact fields cache conductor * degree power coordinates; larger fields are refused.
constexpr int64_t kExactFieldBudget = 20'000'000;

/// Runs f with the scalar type selected by mode; exact mode works in Q(zeta_conductor).
template <class F>
auto with_scalars(ScalarMode mode, int conductor, F&& f) {
  if (mode == ScalarMode::Exact) {
    if (static_cast<int64_t>(conductor) * euler_phi(conductor) > kExactFieldBudget)
      throw BudgetExceeded("exact field Q(zeta_" + std::to_string(conductor) + ") exceeds the exact-mode budget; use --mode float");
    return f(ExactScalars(conductor));
  }
  return f(FloatScalars{});
}

/// Conductor for computations on the torus only: psi values and characters of F_q^x.
int torus_conductor(int q) { return q * (q - 1); }

template <class S>
constexpr bool kExact = S::mode == ScalarMode::Exact;

struct Gl2Data {
  Gl2Classes cl;
  CharacterTable table;
};

Gl2Data gl2_data(int q, const Hooks& hooks) {
  Gl2Data d{gl2_classes(q), {}};
  d.table = gl2_character_table(d.cl);
  if (hooks.table_transform) hooks.table_transform(d.table);
  return d;
}

/// Timed check helper: fills runtime_ms.
template <class F>
CheckRecord timed(const std::string& name, F&& f) {
  auto t0 = Clock::now();
  CheckRecord r = f();
  r.name = name;
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

CheckRecord budget_skip(const std::string& name, const BudgetExceeded& e, bool gating = true) {
  CheckRecord r;
  r.name = name;
  r.status = Status::Skipped;
  r.gating = gating;
  r.reason = std::string("budget exceeded: ") + e.what();
  return r;
}

Status status_of(bool ok) { return ok ? Status::Pass : Status::Fail; }

template <class S>
Json value_json(const S& s, const typename S::value_type& v) {
  Json j{{"value", json_complex(s.to_complex(v))}};
  if constexpr (kExact<S>) j["exact"] = json_cyclotomic(v);
  return j;
}

/// gamma per row keyed by canonical row index and by DL datum.
template <class S>
Json gl2_gamma_json(const S& s, const CharacterTable& table, const std::vector<typename S::value_type>& gamma) {
  Json rows = Json::array();
  Json by_datum = Json::object();
  const auto order = canonical_row_order(table);
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& row = table.rows[order[i]];
    Json j = value_json(s, gamma[order[i]]);
    j["index"] = i;
    j["label"] = row.label;
    j["datum"] = row.datum.to_string();
    j["dim"] = row.dim;
    j["family"] = rep_family_name(row.family);
    rows.push_back(j);
    const std::string key = row.datum.to_string();
    if (!by_datum.contains(key)) {
      by_datum[key] = value_json(s, gamma[order[i]]);
      by_datum[key]["rows"] = Json::array();
    }
    by_datum[key]["rows"].push_back(row.label);
  }
  return Json{{"group", "gl2"}, {"q", table.q}, {"rows", rows}, {"by_datum", by_datum}};
}

template <class S>
double abs_diff(const S& s, const typename S::value_type& a, const typename S::value_type& b) {
  return std::abs(s.to_complex(a) - s.to_complex(b));
}

template <class S>
bool same_value(const S& s, const typename S::value_type& a, const typename S::value_type& b, double tol) {
  if constexpr (kExact<S>) return a == b;
  else return abs_diff(s, a, b) <= tol;
}

// ---------------------------------------------------------------- gl2 suites

template <class S>
CheckRecord packet_constancy(const S& s, const CharacterTable& table, const std::vector<typename S::value_type>& gamma, double tol) {
  CheckRecord r;
  std::map<std::string, size_t> first;
  double worst = 0.0;
  bool ok = true;
  int packets = 0, multi = 0;
  std::map<std::string, int> sizes;
  for (size_t i : canonical_row_order(table)) {
    const std::string key = table.rows[i].datum.to_string();
    ++sizes[key];
    auto [it, fresh] = first.emplace(key, i);
    if (fresh) continue;
    const double scale = std::max(1.0, std::abs(s.to_complex(gamma[it->second])));
    worst = std::max(worst, abs_diff(s, gamma[i], gamma[it->second]) / scale);
    ok = ok && same_value(s, gamma[i], gamma[it->second], tol * scale);
  }
  for (const auto& [k, n] : sizes) {
    ++packets;
    if (n > 1) ++multi;
  }
  r.status = status_of(ok);
  r.max_discrepancy = worst;
  r.details = Json{{"rows", table.rows.size()}, {"packets", packets}, {"multi_row_packets", multi}};
  return r;
}

/// Rotates rows within every packet of size > 1.
void permute_within_packets(CharacterTable& t) {
  std::map<std::string, std::vector<size_t>> pos;
  for (size_t i = 0; i < t.rows.size(); ++i) pos[t.rows[i].datum.to_string()].push_back(i);
  auto rows = t.rows;
  for (const auto& [k, idx] : pos)
    for (size_t j = 0; j < idx.size(); ++j) t.rows[idx[(j + 1) % idx.size()]] = rows[idx[j]];
}

template <class S>
typename S::value_type gamma_trivial_expected(const S& s, const Convention& conv, int q) {
  Rational scale(conv.sign);
  for (int i = 0; i < std::abs(conv.qexp); ++i) scale = conv.qexp > 0 ? scale * Rational(q) : scale / Rational(q);
  return s.from_rational(scale);
}

template <class S>
StdComparison std_comparison(const S& s, const Gl2Classes& cl, const ClassFunction<S>& phi, int psi_root, double tol) {
  AdditiveCharacter psi(cl.fq, psi_root);
  StdComparison out;
  std::complex<double> num = 0.0;
  double max_phi = 0.0;
  std::vector<typename S::value_type> ref;
  for (int c = 0; c < cl.size(); ++c) {
    ref.push_back(psi_eval(s, psi, mat_trace(*cl.fq, cl.classes[c].rep)));
    num += static_cast<double>(cl.classes[c].size) * s.to_complex(phi[c]) * std::conj(s.to_complex(ref[c]));
    max_phi = std::max(max_phi, std::abs(s.to_complex(phi[c])));
  }
  out.c = num / static_cast<double>(cl.group_order);
  double worst = 0.0;
  for (int c = 0; c < cl.size(); ++c) worst = std::max(worst, std::abs(s.to_complex(phi[c]) - out.c * s.to_complex(ref[c])));
  out.residual = max_phi > 0 ? worst / max_phi : 0.0;
  if constexpr (kExact<S>) {
    // psi values are roots of unity, so phi / psi(tr) is phi * conj(psi(tr)).
    const auto c0 = phi[0] * s.conj(ref[0]);
    out.proportional = !c0.is_zero();
    for (int c = 1; c < cl.size() && out.proportional; ++c) out.proportional = phi[c] * s.conj(ref[c]) == c0;
    out.unit = out.proportional && c0 == s.one();
  } else {
    out.proportional = max_phi > 0 && out.residual < tol;
    out.unit = out.proportional && std::abs(out.c - 1.0) < tol;
  }
  return out;
}

template <class S>
EigenResult eigen_suite(const S& s, const Gl2Data& d, const StructureConstants& sc, const std::vector<typename S::value_type>& gamma,
                        const ClassFunction<S>& kernel) {
  EigenResult out;
  for (size_t r : canonical_row_order(d.table)) {
    auto chi = character_values(s, d.table, r);
    auto img = convolve_structure(s, sc, kernel, chi);
    const double scale = static_cast<double>(d.table.rows[r].dim) * std::max(1.0, std::abs(s.to_complex(gamma[r])));
    double worst = 0.0;
    for (int c = 0; c < d.cl.size(); ++c) {
      auto expect = gamma[r] * chi[c];
      worst = std::max(worst, abs_diff(s, img[c], expect) / scale);
      if constexpr (kExact<S>) out.exact_equal = out.exact_equal && img[c] == expect;
    }
    if (worst >= out.max_discrepancy) {
      if (worst > out.max_discrepancy || out.worst_row.empty()) out.worst_row = d.table.rows[r].label;
      out.max_discrepancy = worst;
    }
    ++out.rows;
  }
  return out;
}

CheckRecord eigen_record(const EigenResult& e, ScalarMode mode, double tol) {
  CheckRecord r;
  const bool ok = e.max_discrepancy < tol && (mode == ScalarMode::Float || e.exact_equal);
  r.status = status_of(ok);
  r.max_discrepancy = e.max_discrepancy;
  r.details = Json{{"rows", e.rows}, {"worst_row", e.worst_row}, {"tolerance", json_number(tol)}};
  if (mode == ScalarMode::Exact) r.details["exact_equal"] = e.exact_equal;
  return r;
}


CheckRecord vanishing_record(const VanishingReport& rep, ScalarMode mode, double tol) {
  CheckRecord r;
  const double rel = rep.max_phi > 0 ? rep.max_off_borel / rep.max_phi : 0.0;
  const bool ok = rep.max_off_borel <= tol * rep.max_phi && (mode == ScalarMode::Float || rep.exact_zero);
  r.status = status_of(ok);
  r.max_discrepancy = rel;
  r.details = Json{{"field_degree", rep.m},
                   {"cosets", rep.cosets},
                   {"max_off_borel", json_number(rep.max_off_borel)},
                   {"max_on_borel", json_number(rep.max_on_borel)},
                   {"max_phi", json_number(rep.max_phi)},
                   {"relative_tolerance", json_number(tol)}};
  if (mode == ScalarMode::Exact) r.details["exact_zero"] = rep.exact_zero;
  return r;
}

CheckRecord control_record(const VanishingReport& rep, double control) {
  CheckRecord r;
  r.status = status_of(rep.max_on_borel > control * rep.max_phi);
  r.details = Json{{"max_on_borel", json_number(rep.max_on_borel)},
                   {"max_phi", json_number(rep.max_phi)},
                   {"ratio", json_number(rep.max_phi > 0 ? rep.max_on_borel / rep.max_phi : 0.0)},
                   {"threshold", json_number(control)}};
  return r;
}

bool is_std_weights(const std::vector<IntVec>& w) { return w == std::vector<IntVec>{{1, 0}, {0, 1}}; }

template <class S>
std::vector<typename S::value_type> gl2_gamma(const S& s, const Gl2Data& d, const RunConfig& c, const Convention& conv, const Hooks& hooks) {
  try {
    return gamma_table(s, d.table, c.weights, c.psi, conv, GammaCorruption{hooks.corrupt_gamma});
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- gamma

template <class S>
Report gamma_gl2(const S& s, const RunConfig& c, const Hooks& hooks) {
  Report rep{c, {}, nullptr};
  const Gl2Data d = gl2_data(c.q, hooks);
  const Convention conv = c.effective_convention();
  const auto gamma = gl2_gamma(s, d, c, conv, hooks);
  rep.gamma_table = gl2_gamma_json(s, d.table, gamma);
  rep.gamma_table["convention"] = serialize_convention(conv);
  rep.checks.push_back(timed("packet-constancy", [&] { return packet_constancy(s, d.table, gamma, c.tolerance("eigen")); }));
  rep.checks.push_back(timed("row-count", [&] {
    CheckRecord r;
    const int64_t expect = static_cast<int64_t>(c.q) * c.q - 1;
    r.status = status_of(static_cast<int64_t>(d.table.rows.size()) == expect);
    r.details = Json{{"rows", d.table.rows.size()}, {"expected", expect}};
    return r;
  }));
  rep.checks.push_back(timed("trivial-datum", [&] {
    CheckRecord r;
    const auto expect = gamma_trivial_expected(s, conv, c.q);
    std::optional<size_t> row;
    for (size_t i : canonical_row_order(d.table))
      if (!row && d.table.rows[i].datum == DlDatum{}) row = i;
    if (!row) {
      r.status = Status::Fail;
      r.reason = "no row with the trivial datum";
      return r;
    }
    r.max_discrepancy = abs_diff(s, gamma[*row], expect);
    r.status = status_of(same_value(s, gamma[*row], expect, c.tolerance("eigen")));
    r.details = Json{{"row", d.table.rows[*row].label}, {"expected", json_complex(s.to_complex(expect))}};
    return r;
  }));
  return rep;
}

template <class S>
Report gamma_gl1(const S& s, const RunConfig& c) {
  Report rep{c, {}, nullptr};
  const RootDatum rd = RootDatum::make(Preset::GL1);
  auto fq = FiniteField::get(c.q, 1);
  AdditiveCharacter psi(fq, c.psi);
  TorusBessel tb;
  try {
    tb = bessel_on_torus(WeightSet(rd, c.weights), c.psi, c.q);
  } catch (const BudgetExceeded& e) {
    rep.checks.push_back(budget_skip("gauss-crosscheck", e));
    return rep;
  }
  Json rows = Json::array(), by_datum = Json::object();
  double worst = 0.0;
  bool exact_ok = true;
  const auto chars = all_characters(1, c.q);
  for (size_t i = 0; i < chars.size(); ++i) {
    const auto v = bessel_mellin(s, tb, chars[i]);
    auto oracle = s.from_int(tb.sign());
    for (const auto& lam : c.weights) oracle = oracle * gauss_sum(s, MultiplicativeCharacter(fq, character_exponent(chars[i], lam)), psi);
    worst = std::max(worst, abs_diff(s, v, oracle));
    if constexpr (kExact<S>) exact_ok = exact_ok && v == oracle;
    Json j = value_json(s, v);
    j["index"] = i;
    j["label"] = "eta^" + std::to_string(chars[i].m[0]);
    j["datum"] = chars[i].to_string();
    rows.push_back(j);
    by_datum[chars[i].to_string()] = value_json(s, v);
  }
  rep.gamma_table = Json{{"group", "gl1"}, {"q", c.q}, {"rows", rows}, {"by_datum", by_datum}, {"convention", nullptr}};
  CheckRecord r;
  r.name = "gauss-crosscheck";
  r.max_discrepancy = worst;
  r.status = status_of(kExact<S> ? exact_ok : worst < c.tolerance("gauss"));
  r.details = Json{{"entries", chars.size()}};
  rep.checks.push_back(r);
  return rep;
}

// ---------------------------------------------------------------- Mellin suites

std::vector<TorusCharacter> etheta_characters(const RunConfig& c, const RootDatum& rd) {
  if (c.chi) return {TorusCharacter(c.q, *c.chi)};
  return orbit_representatives(rd, c.q);
}

CheckRecord centrality_record(const CentralityReport& r) {
  CheckRecord rec;
  rec.status = status_of(r.pass);
  rec.details = Json{{"points", r.points}, {"higher_degree_violations", r.higher_degree_violations}, {"violations", Json::array()}};
  for (const auto& x : r.violations)
    rec.details["violations"].push_back(Json{{"point", x.point.to_string()}, {"degree", x.degree}, {"element", x.element}});
  return rec;
}

CheckRecord descent_record(const DescentReport& d) {
  CheckRecord rec;
  rec.status = status_of(d.pass);
  Json pts = Json::array();
  for (const auto& p : d.points)
    pts.push_back(Json{{"point", p.point.to_string()},
                       {"local_dim", p.local_dim},
                       {"invariant_dim", p.invariant_dim},
                       {"coinvariant_dim", p.coinvariant_dim},
                       {"surjective", p.surjective},
                       {"injective", p.injective},
                       {"annihilator_is_invariant_ideal", p.annihilator_is_invariant_ideal()}});
  rec.details = Json{{"points", pts}};
  return rec;
}

/// Checks for one E_theta; appends a structural summary to summary when given.
void etheta_checks(const RootDatum& rd, const std::vector<WeylElement>& W, const TorusCharacter& chi,
                   std::vector<CheckRecord>& out, Json* summary) {
  const std::string pre = "etheta" + chi.to_string() + "/";
  auto t0 = Clock::now();
  const MellinModule m = build_E_theta(rd, chi);
  const double build_ms = elapsed_ms(t0);
  const auto st = stabilizers(rd, W, chi);

  out.push_back(timed(pre + "relations", [&] {
    CheckRecord r;
    const auto rel = check_relations(m);
    r.status = status_of(rel.ok());
    r.details = Json{{"commuting", rel.commuting}, {"equivariant", rel.equivariant}, {"homomorphism", rel.homomorphism}};
    return r;
  }));
  out.back().runtime_ms += build_ms;
  out.push_back(timed(pre + "dimension", [&] {
    CheckRecord r;
    const int64_t expect = static_cast<int64_t>(W.size() / st.full.size() * st.reflection.size());
    r.status = status_of(m.dim == expect);
    r.details = Json{{"dim", m.dim}, {"expected", expect}, {"W", W.size()}, {"W_chi", st.reflection.size()}, {"W_chi_full", st.full.size()}};
    return r;
  }));
  const auto sup = support(m);
  out.push_back(timed(pre + "support", [&] {
    CheckRecord r;
    auto expect = orbit(W, chi.inverse());
    std::sort(expect.begin(), expect.end());
    std::vector<TorusCharacter> got;
    bool mult_ok = true;
    for (const auto& p : sup) {
      got.push_back(p.chi);
      mult_ok = mult_ok && p.multiplicity == static_cast<int>(st.reflection.size());
    }
    std::sort(got.begin(), got.end());
    r.status = status_of(got == expect && mult_ok);
    Json g = Json::array(), e = Json::array();
    for (const auto& x : got) g.push_back(x.to_string());
    for (const auto& x : expect) e.push_back(x.to_string());
    r.details = Json{{"support", g}, {"expected", e}, {"multiplicities_ok", mult_ok}};
    return r;
  }));
  CentralityReport central, strong;
  out.push_back(timed(pre + "central", [&] {
    central = check_centrality(m, CentralityMode::Central);
    return centrality_record(central);
  }));
  out.push_back(timed(pre + "strongly-central", [&] {
    strong = check_centrality(m, CentralityMode::StronglyCentral);
    CheckRecord r = centrality_record(strong);
    r.gating = false;
    return r;
  }));
  DescentReport desc;
  out.push_back(timed(pre + "descent", [&] {
    desc = check_descent(m);
    return descent_record(desc);
  }));
  if (!summary) return;
  Json pts = Json::array();
  for (const auto& p : sup) {
    const auto fib = koszul_fibers(m, p.chi);
    pts.push_back(Json{{"point", p.chi.to_string()}, {"multiplicity", p.multiplicity}, {"koszul_dims", fib.dims}});
  }
  summary->push_back(Json{{"chi", chi.to_string()},
                          {"dim", m.dim},
                          {"W_chi", st.reflection.size()},
                          {"W_chi_full", st.full.size()},
                          {"support", pts},
                          {"central", central.pass},
                          {"strongly_central", strong.pass},
                          {"descent", desc.pass}});
}

std::vector<CheckRecord> descent_suite(const RunConfig& c) {
  std::vector<CheckRecord> out;
  const RootDatum rd = RootDatum::make(c.group);
  const auto W = weyl_elements(rd);
  for (const auto& chi : etheta_characters(c, rd)) {
    out.push_back(timed("descent" + chi.to_string(), [&] { return descent_record(check_descent(build_E_theta(rd, chi))); }));
  }
  out.push_back(timed("characterization", [&] {
    CheckRecord r;
    int modules = 0, central = 0, descent = 0, agree = 0;
    Json disagree = Json::array();
    for (const auto& e : generate_corpus()) {
      if (e.module.rd.preset != c.group || e.module.q != c.q) continue;
      ++modules;
      const bool a = check_centrality(e.module, CentralityMode::Central).pass;
      const bool b = check_descent(e.module).pass;
      central += a;
      descent += b;
      if (a == b) ++agree;
      else disagree.push_back(e.name);
    }
    if (modules == 0) {
      r.status = Status::Skipped;
      r.gating = false;
      r.reason = "the generated corpus has no modules at this group and q";
      return r;
    }
    r.status = status_of(agree == modules);
    r.details = Json{{"modules", modules}, {"central", central}, {"descent", descent}, {"agree", agree}, {"disagree", disagree}};
    return r;
  }));
  return out;
}

// ---------------------------------------------------------------- calibration

template <class S>
CalibrationResult calibrate_with(const S& s, int q, int psi, const std::map<std::string, double>& tol, const Hooks& hooks) {
  CalibrationResult out;
  out.q = q;
  out.psi = psi;
  const Gl2Data d = gl2_data(q, hooks);
  const std::vector<IntVec> std_w{{1, 0}, {0, 1}};
  std::optional<StructureConstants> sc;
  out.min_residual = std::numeric_limits<double>::infinity();
  for (const auto& conv : convention_space()) {
    CalibrationCandidate cand;
    cand.convention = conv;
    const auto gamma = gamma_table(s, d.table, std_w, psi, conv, GammaCorruption{hooks.corrupt_gamma});
    const auto kernel = kernel_on_group(s, d.table, d.cl, gamma);
    cand.std = std_comparison(s, d.cl, kernel, psi, tol.at("std"));
    out.min_residual = std::min(out.min_residual, cand.std.residual);
    if (cand.std.proportional) {
      cand.suites_run = true;
      if (!sc) sc = structure_constants(d.cl);
      const auto e = eigen_suite(s, d, *sc, gamma, kernel);
      cand.eigen = e.max_discrepancy < tol.at("eigen") && (!kExact<S> || e.exact_equal);
      const auto v = class_function_coset_sums(s, d.cl, kernel);
      cand.vanishing = v.max_off_borel <= tol.at("vanishing") * v.max_phi && (!kExact<S> || v.exact_zero) &&
                       v.max_on_borel > tol.at("control") * v.max_phi;
    }
    cand.pass = cand.std.unit && cand.eigen && cand.vanishing;
    if (cand.pass) out.passing.push_back(conv);
    out.candidates.push_back(cand);
  }
  return out;
}

Json candidate_json(const CalibrationCandidate& c) {
  Json j{{"convention", serialize_convention(c.convention)},
         {"fitted_c", json_complex(c.std.c)},
         {"std_residual", json_number(c.std.residual)},
         {"proportional", c.std.proportional},
         {"unit", c.std.unit},
         {"pass", c.pass}};
  j["eigen"] = c.suites_run ? Json(c.eigen) : Json(nullptr);
  j["vanishing"] = c.suites_run ? Json(c.vanishing) : Json(nullptr);
  return j;
}

Json conventions_json(const std::vector<Convention>& v) {
  Json j = Json::array();
  for (const auto& c : v) j.push_back(serialize_convention(c));
  return j;
}

}  // namespace

std::vector<Convention> convention_space() {
  std::vector<Convention> out;
  for (int sign : {-1, 1})
    for (int inv : {0, 1})
      for (int e = -4; e <= 4; ++e) out.push_back(Convention{sign, inv, e});
  std::sort(out.begin(), out.end());
  return out;
}

StdComparison compare_std_kernel(int q, int psi, ScalarMode mode, const Convention& conv, double tol, const Hooks& hooks) {
  return with_scalars(mode, exact_conductor(q), [&](auto s) {
    const Gl2Data d = gl2_data(q, hooks);
    const auto gamma = gamma_table(s, d.table, {{1, 0}, {0, 1}}, psi, conv, GammaCorruption{hooks.corrupt_gamma});
    return std_comparison(s, d.cl, kernel_on_group(s, d.table, d.cl, gamma), psi, tol);
  });
}

EigenResult eigen_check(int q, int psi, ScalarMode mode, const std::vector<IntVec>& weights, const Convention& conv, const Hooks& hooks) {
  return with_scalars(mode, exact_conductor(q), [&](auto s) {
    const Gl2Data d = gl2_data(q, hooks);
    const auto gamma = gamma_table(s, d.table, weights, psi, conv, GammaCorruption{hooks.corrupt_gamma});
    return eigen_suite(s, d, structure_constants(d.cl), gamma, kernel_on_group(s, d.table, d.cl, gamma));
  });
}

CalibrationResult calibrate(int q, int psi, ScalarMode mode, const std::map<std::string, double>& tol, const Hooks& hooks) {
  return with_scalars(mode, exact_conductor(q), [&](auto s) { return calibrate_with(s, q, psi, tol, hooks); });
}

Report cmd_gamma(const RunConfig& c, const Hooks& hooks) {
  if (c.group == Preset::GL1) return with_scalars(c.mode, torus_conductor(c.q), [&](auto s) { return gamma_gl1(s, c); });
  if (c.group != Preset::GL2) throw UsageError("gamma is implemented for --group gl1 and gl2 only");
  return with_scalars(c.mode, exact_conductor(c.q), [&](auto s) { return gamma_gl2(s, c, hooks); });
}

Report cmd_verify(const RunConfig& c, const Hooks& hooks) {
  Report rep{c, {}, nullptr};
  const std::string& w = c.which;
  if (w == "etheta") {
    const RootDatum rd = RootDatum::make(c.group);
    const auto W = weyl_elements(rd);
    for (const auto& chi : etheta_characters(c, rd)) etheta_checks(rd, W, chi, rep.checks, nullptr);
    return rep;
  }
  if (w == "descent") {
    rep.checks = descent_suite(c);
    return rep;
  }
  if (w == "gauss-product") {
    with_scalars(c.mode, torus_conductor(c.q), [&](auto s) {
      rep.checks.push_back(timed("gauss-product", [&] {
        CheckRecord r;
        try {
          const auto g = gauss_product_check(s, WeightSet(RootDatum::make(c.group), c.weights), c.psi, c.q);
          r.max_discrepancy = g.max_discrepancy;
          const bool exact = decltype(s)::mode == ScalarMode::Exact;
          r.status = status_of(exact ? g.exact_equal : g.max_discrepancy < c.tolerance("gauss"));
          r.details = Json{{"characters", g.characters}, {"sign", (c.weights.size() % 2) ? -1 : 1}};
          if (exact) r.details["exact_equal"] = g.exact_equal;
        } catch (const BudgetExceeded& e) {
          r = budget_skip("gauss-product", e);
        }
        return r;
      }));
      return 0;
    });
    return rep;
  }
  // GL_2 suites.
  with_scalars(c.mode, exact_conductor(c.q), [&](auto s) {
    const Gl2Data d = gl2_data(c.q, hooks);
    const Convention conv = c.effective_convention();
    const auto gamma = gl2_gamma(s, d, c, conv, hooks);
    const auto kernel = kernel_on_group(s, d.table, d.cl, gamma);
    if (w == "vanishing") {
      VanishingReport vr;
      rep.checks.push_back(timed("vanishing", [&] {
        vr = class_function_coset_sums(s, d.cl, kernel);
        return vanishing_record(vr, c.mode, c.tolerance("vanishing"));
      }));
      rep.checks.push_back(timed("vanishing-control", [&] { return control_record(vr, c.tolerance("control")); }));
      if (is_std_weights(c.weights)) {
        rep.checks.push_back(timed("vanishing-extension", [&] {
          try {
            const auto ext = extension_scalars_sums(s, c.q, 2, c.psi);
            CheckRecord r = vanishing_record(ext, c.mode, c.tolerance("vanishing"));
            r.details["control_passes"] = ext.max_on_borel > c.tolerance("control") * ext.max_phi;
            if (!r.details["control_passes"].template get<bool>()) r.status = Status::Fail;
            return r;
          } catch (const BudgetExceeded& e) {
            return budget_skip("vanishing-extension", e, false);
          }
        }));
      }
    } else if (w == "eigen") {
      rep.checks.push_back(timed("eigen", [&] {
        return eigen_record(eigen_suite(s, d, structure_constants(d.cl), gamma, kernel), c.mode, c.tolerance("eigen"));
      }));
    } else if (w == "packets") {
      rep.checks.push_back(timed("packet-constancy", [&] { return packet_constancy(s, d.table, gamma, c.tolerance("eigen")); }));
      rep.checks.push_back(timed("packet-permutation", [&] {
        Gl2Data p = d;
        permute_within_packets(p.table);
        const auto gp = gl2_gamma(s, p, c, conv, hooks);
        const auto kp = kernel_on_group(s, p.table, p.cl, gp);
        double worst = 0.0;
        bool same = true;
        for (int k = 0; k < d.cl.size(); ++k) {
          worst = std::max(worst, abs_diff(s, kernel[k], kp[k]));
          same = same && same_value(s, kernel[k], kp[k], 0.0);
        }
        const bool bytes = gl2_gamma_json(s, d.table, gamma).dump() == gl2_gamma_json(s, p.table, gp).dump();
        CheckRecord r;
        r.status = status_of(same && bytes);
        r.max_discrepancy = worst;
        r.details = Json{{"gamma_table_identical", bytes}, {"kernel_identical", same}};
        return r;
      }));
    }
    return 0;
  });
  return rep;
}

Report cmd_calibrate(const RunConfig& c, const Hooks& hooks) {
  Report rep{c, {}, nullptr};
  std::map<int, CalibrationResult> per_psi;
  auto t0 = Clock::now();
  for (int r = 1; r < c.q; ++r) per_psi[r] = calibrate(c.q, r, c.mode, c.tol, hooks);
  const double ms = elapsed_ms(t0);
  const CalibrationResult& primary = per_psi.at(c.psi);
  const bool found = !primary.passing.empty();
  const std::optional<Convention> canonical = found ? std::optional<Convention>(primary.passing.front()) : std::nullopt;

  CheckRecord cal;
  cal.name = "calibration";
  cal.status = status_of(found);
  cal.runtime_ms = ms;
  cal.max_discrepancy = primary.min_residual;
  cal.details = Json{{"passing", conventions_json(primary.passing)}, {"searched", primary.candidates.size()}};
  if (!found) cal.reason = "no convention passes the std comparison with the eigen and vanishing suites";
  rep.checks.push_back(cal);

  CheckRecord ind;
  ind.name = "psi-independence";
  bool same = true;
  Json sets = Json::object();
  for (const auto& [r, res] : per_psi) {
    sets[std::to_string(r)] = conventions_json(res.passing);
    same = same && res.passing == primary.passing;
  }
  ind.status = status_of(found && same);
  ind.details = Json{{"passing_by_psi", sets}};
  rep.checks.push_back(ind);

  CheckRecord frozen;
  frozen.name = "canonical-frozen";
  frozen.status = status_of(canonical && *canonical == canonical_convention());
  frozen.details = Json{{"canonical", canonical ? Json(serialize_convention(*canonical)) : Json(nullptr)},
                        {"frozen", serialize_convention(canonical_convention())}};
  rep.checks.push_back(frozen);

  Json cands = Json::array();
  for (const auto& cand : primary.candidates) cands.push_back(candidate_json(cand));
  rep.sections["calibration"] = Json{{"anchor", "phi_G = c * psi(tr g) with c = 1"},
                                     {"candidates", cands},
                                     {"passing", conventions_json(primary.passing)},
                                     {"canonical", canonical ? Json(serialize_convention(*canonical)) : Json(nullptr)},
                                     {"min_std_residual", json_number(primary.min_residual)}};
  if (canonical) {
    RunConfig g = c;
    g.command = Command::Gamma;
    g.convention = *canonical;
    const Report a = cmd_gamma(g, hooks), b = cmd_gamma(g, hooks);
    rep.gamma_table = a.gamma_table;
    CheckRecord rr;
    rr.name = "frozen-reproduction";
    rr.status = status_of(a.gamma_table.dump() == b.gamma_table.dump());
    rep.checks.push_back(rr);
  }
  return rep;
}

Report cmd_etheta(const RunConfig& c, const Hooks&) {
  Report rep{c, {}, nullptr};
  const RootDatum rd = RootDatum::make(c.group);
  const auto W = weyl_elements(rd);
  Json summary = Json::array();
  for (const auto& chi : etheta_characters(c, rd)) etheta_checks(rd, W, chi, rep.checks, &summary);
  rep.sections["etheta"] = summary;
  return rep;
}

Report run(const RunConfig& c, const Hooks& hooks) {
  try {
    switch (c.command) {
      case Command::Gamma: return cmd_gamma(c, hooks);
      case Command::Verify: return cmd_verify(c, hooks);
      case Command::Calibrate: return cmd_calibrate(c, hooks);
      case Command::Etheta: return cmd_etheta(c, hooks);
    }
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  } catch (const BudgetExceeded& e) {
    Report rep{c, {}, nullptr};
    rep.checks.push_back(budget_skip(to_string(c.command), e));
    return rep;
  }
  throw UsageError("unknown command");
}

}  // namespace bkk::cli
