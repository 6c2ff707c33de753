#include "bkk/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace bkk::cli {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

double round15(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

Json json_number(double v) {
  if (!std::isfinite(v)) return Json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
  return Json(round15(v));
}

Json json_complex(std::complex<double> z) { return Json::array({json_number(z.real()), json_number(z.imag())}); }

Json json_cyclotomic(const Cyclotomic& c) {
  return Json{{"conductor", c.conductor()}, {"denominator", c.denominator()}, {"numerators", c.coefficients()}};
}

Json json_config(const RunConfig& c) {
  Json tol = Json::object();
  for (const auto& [k, v] : c.tol) tol[k] = json_number(v);
  Json j{{"command", to_string(c.command)},
         {"group", preset_name(c.group)},
         {"q", c.q},
         {"weights", serialize_weights(c.weights)},
         {"psi", c.psi},
         {"mode", to_string(c.mode)},
         {"tol", tol},
         {"convention", c.convention ? Json(serialize_convention(*c.convention)) : Json(nullptr)},
         {"chi", c.chi ? Json(*c.chi) : Json(nullptr)},
         {"which", c.which.empty() ? Json(nullptr) : Json(c.which)},
         {"canonical", serialize(c)}};
  return j;
}

int Report::exit_status() const {
  bool fail = false, skipped = false;
  for (const auto& c : checks) {
    if (!c.gating) continue;
    fail = fail || c.status == Status::Fail;
    skipped = skipped || c.status == Status::Skipped;
  }
  if (fail) return kExitFail;
  if (skipped) return kExitBudget;
  return kExitPass;
}

Json Report::to_json() const {
  std::vector<const CheckRecord*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const CheckRecord* a, const CheckRecord* b) { return a->name < b->name; });
  Json arr = Json::array();
  for (const auto* c : sorted) {
    Json j{{"name", c->name},
           {"status", to_string(c->status)},
           {"gating", c->gating},
           {"max_discrepancy", c->max_discrepancy ? json_number(*c->max_discrepancy) : Json(nullptr)},
           {"details", c->details}};
    if (!c->reason.empty()) j["reason"] = c->reason;
    if (config.timings) j["runtime_ms"] = json_number(c->runtime_ms);
    arr.push_back(std::move(j));
  }
  const int code = exit_status();
  Json out{{"schema", kSchema},
           {"tool", {{"name", "bkk"}, {"version", kToolVersion}}},
           {"config", json_config(config)},
           {"checks", arr},
           {"gamma_table", gamma_table},
           {"exit_status", code},
           {"status", code == kExitPass ? "pass" : code == kExitFail ? "fail" : "skipped"}};
  for (const auto& [k, v] : sections.items()) out[k] = v;
  return out;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace bkk::cli
