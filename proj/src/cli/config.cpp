#include "bkk/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bkk::cli {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int64_t parse_int(const std::string& raw, const std::string& what) {
  std::string s = trim(raw);
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw UsageError("malformed integer '" + trim(raw) + "' in " + what);
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

bool is_std(const std::vector<IntVec>& w) {
  const std::vector<IntVec> std2{{1, 0}, {0, 1}};
  return w == std2;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Gamma: return "gamma";
    case Command::Verify: return "verify";
    case Command::Calibrate: return "calibrate";
    case Command::Etheta: return "etheta";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::Gamma, Command::Verify, Command::Calibrate, Command::Etheta})
    if (to_string(c) == s) return c;
  throw UsageError("unknown command '" + s + "'");
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"descent", "eigen", "etheta", "gauss-product", "packets", "vanishing"};
  return s;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"control", 1e-3},   // on-Borel non-triviality, relative to max |phi|
      {"eigen", 1e-8},     // relative to dim * max(1, |gamma|)
      {"gauss", 1e-9},     // absolute, float mode
      {"std", 1e-9},       // relative residual of the std-kernel comparison
      {"vanishing", 1e-8}  // relative to max |phi|
  };
  return t;
}

Convention canonical_convention() { return Convention{1, 1, 1}; }

Convention RunConfig::effective_convention() const { return convention.value_or(canonical_convention()); }

std::vector<IntVec> parse_weights(const std::string& raw, int rank) {
  const std::string s = trim(raw);
  if (s == "std") {
    std::vector<IntVec> w;
    for (int i = 0; i < rank; ++i) {
      IntVec v(rank, 0);
      v[i] = 1;
      w.push_back(v);
    }
    return w;
  }
  const std::map<std::string, std::vector<IntVec>> rank2{
      {"std+std", {{1, 0}, {0, 1}, {1, 0}, {0, 1}}},
      {"sym2", {{2, 0}, {1, 1}, {0, 2}}},
      {"det-std", {{2, 1}, {1, 2}}},
      {"det2-std", {{3, 2}, {2, 3}}},
  };
  if (auto it = rank2.find(s); it != rank2.end()) {
    if (rank != 2) throw UsageError("weight alias '" + s + "' needs a rank-2 group");
    return it->second;
  }
  if (s.empty()) throw UsageError("empty weight set");
  std::vector<IntVec> w;
  for (const auto& vec : split(s, ';')) {
    IntVec v;
    for (const auto& e : split(vec, ',')) v.push_back(parse_int(e, "weights '" + s + "'"));
    if (static_cast<int>(v.size()) != rank)
      throw UsageError("weight vector '" + trim(vec) + "' has length " + std::to_string(v.size()) + ", expected " + std::to_string(rank));
    w.push_back(v);
  }
  return w;
}

std::string serialize_weights(const std::vector<IntVec>& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ';';
    for (size_t j = 0; j < w[i].size(); ++j) {
      if (j) out += ',';
      out += std::to_string(w[i][j]);
    }
  }
  return out;
}

std::string canonical_weights(const std::string& s, int rank) { return serialize_weights(parse_weights(s, rank)); }

Convention parse_convention(const std::string& s) {
  auto parts = split(trim(s), ',');
  if (parts.size() != 3) throw UsageError("convention '" + s + "' must be sign,invert,qexp");
  Convention c{static_cast<int>(parse_int(parts[0], "convention")), static_cast<int>(parse_int(parts[1], "convention")),
               static_cast<int>(parse_int(parts[2], "convention"))};
  if (c.sign != 1 && c.sign != -1) throw UsageError("convention sign must be 1 or -1");
  if (c.invert != 0 && c.invert != 1) throw UsageError("convention invert flag must be 0 or 1");
  if (c.qexp < -4 || c.qexp > 4) throw UsageError("convention q-exponent must lie in [-4, 4]");
  return c;
}

std::string serialize_convention(const Convention& c) { return c.to_string(); }

std::map<std::string, double> parse_tolerances(const std::string& s) {
  std::map<std::string, double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("tolerance '" + trim(item) + "' must be name=value");
    const std::string name = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    if (!default_tolerances().count(name)) throw UsageError("unknown tolerance '" + name + "'");
    double v = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (val.empty() || ec != std::errc() || p != val.data() + val.size() || !(v > 0))
      throw UsageError("tolerance '" + name + "' needs a positive number, got '" + val + "'");
    out[name] = v;
  }
  return out;
}

std::string serialize_tolerances(const std::map<std::string, double>& tol) {
  std::string out;
  for (const auto& [k, v] : tol) {
    if (!out.empty()) out += ',';
    out += k + "=" + format_double(v);
  }
  return out;
}

IntVec parse_chi(const std::string& s, int rank, int q) {
  IntVec m;
  for (const auto& e : split(trim(s), ',')) m.push_back(mod_floor(parse_int(e, "chi '" + s + "'"), q - 1));
  if (static_cast<int>(m.size()) != rank) throw UsageError("chi '" + s + "' must have " + std::to_string(rank) + " entries");
  return m;
}

RunConfig make_config(const RawArgs& raw) {
  RunConfig c;
  c.command = parse_command(raw.command);
  try {
    c.group = parse_preset(raw.group);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const int rank = RootDatum::make(c.group).rank;
  if (!is_prime(raw.q) || raw.q < 3 || raw.q > 97) throw UsageError("q must be a prime in [3, 97]");
  c.q = raw.q;
  c.weights = parse_weights(raw.weights, rank);
  if (raw.psi < 1 || raw.psi >= c.q) throw UsageError("psi root index must lie in [1, q-1]");
  c.psi = raw.psi;
  try {
    c.mode = raw.mode.empty() ? ScalarMode::Exact : parse_scalar_mode(raw.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.tol = default_tolerances();
  for (const auto& [k, v] : parse_tolerances(raw.tol)) c.tol[k] = v;
  if (!raw.convention.empty()) c.convention = parse_convention(raw.convention);
  c.timings = raw.timings;

  const bool gl2 = c.group == Preset::GL2;
  auto need_gl2 = [&](const std::string& what) {
    if (!gl2) throw UsageError(what + " is implemented for --group gl2 only");
    if (c.q > 13) throw UsageError(what + " needs q <= 13 (GL_2 class table range)");
  };
  bool mellin = false;
  switch (c.command) {
    case Command::Gamma:
      if (c.group == Preset::GL1) break;
      if (!gl2) throw UsageError("gamma is implemented for --group gl1 and gl2 only");
      need_gl2("gamma");
      break;
    case Command::Calibrate:
      need_gl2("calibrate");
      if (c.convention) throw UsageError("calibrate searches the convention space; do not pass --convention");
      if (!is_std(c.weights)) throw UsageError("calibrate needs the std weight set 1,0;0,1");
      break;
    case Command::Verify: {
      c.which = raw.which;
      const auto& s = verify_suites();
      if (std::find(s.begin(), s.end(), c.which) == s.end()) throw UsageError("verify needs one of descent|eigen|etheta|gauss-product|packets|vanishing");
      if (c.which == "vanishing" || c.which == "eigen" || c.which == "packets") need_gl2("verify " + c.which);
      mellin = c.which == "etheta" || c.which == "descent";
      break;
    }
    case Command::Etheta:
      mellin = true;
      break;
  }
  if (mellin) {
    if (c.q > 13) throw UsageError("Mellin module checks need q - 1 <= 12");
    c.mode = ScalarMode::Exact;
    if (!raw.chi.empty()) c.chi = parse_chi(raw.chi, rank, c.q);
  } else if (!raw.chi.empty()) {
    throw UsageError("--chi applies to etheta and verify etheta|descent only");
  }
  return c;
}

std::string serialize(const RunConfig& c) {
  std::string chi = "-";
  if (c.chi) {
    chi.clear();
    for (size_t i = 0; i < c.chi->size(); ++i) chi += (i ? "," : "") + std::to_string((*c.chi)[i]);
  }
  return "command=" + to_string(c.command) + " group=" + preset_name(c.group) + " q=" + std::to_string(c.q) +
         " weights=" + serialize_weights(c.weights) + " psi=" + std::to_string(c.psi) + " mode=" + to_string(c.mode) +
         " tol=" + serialize_tolerances(c.tol) + " convention=" + (c.convention ? serialize_convention(*c.convention) : "-") +
         " chi=" + chi + " which=" + (c.which.empty() ? "-" : c.which) + " timings=" + (c.timings ? "1" : "0");
}

RunConfig parse(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw UsageError("config token '" + tok + "' must be key=value");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto get = [&](const std::string& k) -> std::string {
    auto it = kv.find(k);
    if (it == kv.end()) throw UsageError("config line lacks '" + k + "'");
    return it->second;
  };
  RawArgs raw;
  raw.command = get("command");
  raw.group = get("group");
  raw.q = static_cast<int>(parse_int(get("q"), "q"));
  raw.weights = get("weights");
  raw.psi = static_cast<int>(parse_int(get("psi"), "psi"));
  raw.mode = get("mode");
  raw.tol = get("tol");
  if (auto v = get("convention"); v != "-") raw.convention = v;
  if (auto v = get("chi"); v != "-") raw.chi = v;
  if (auto v = get("which"); v != "-") raw.which = v;
  raw.timings = get("timings") == "1";
  return make_config(raw);
}

}  // namespace bkk::cli
