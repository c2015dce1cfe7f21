#pragma once

// JSON scenario files.
//
//   {
//     "firm1": {"rho": 1, "kappa": 1, "v0": 0.5},
//     "firm2": {"rho": 1, "kappa": 1, "v0": 0.5},
//     "demand": {"lambda1": 1, "lambda2": 1},            (optional)
//     "system": "competing" | "linear_demand" | "lotka_volterra" | "taxed",
//     "tax": {"kind": "none"}
//          | {"kind": "lump_sum", "u1": 0.1, "u2": 0.1}
//          | {"kind": "proportional", "x": 0.2},         (optional, default none)
//     "horizon": 10,
//     "solver": {"rel_tol": 1e-9, "abs_tol": 1e-12,
//                "max_step": 0.1, "sample_dt": 0.01},    (optional, each key optional)
//     "extinction_floor": 1e-12                          (optional)
//   }
//
// Unknown keys are rejected.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "duopoly/error.hpp"
#include "duopoly/model.hpp"
#include "json.hpp"

namespace duopoly::config {

using json = nlohmann::json;

/// The config file is missing or unreadable.
class file_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The config file is not well-formed JSON.
class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw validation_error(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known |= (key == a);
    if (!known) throw validation_error(std::string(where) + ": unknown key '" + key + "'");
  }
}

inline double number(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) throw validation_error(std::string(where) + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw validation_error(std::string(where) + "." + key + ": expected a number");
  return v.get<double>();
}

inline FirmParams firm_from_json(const json& j, std::string_view where) {
  reject_unknown(j, where, {"rho", "kappa", "v0"});
  return {number(j, "rho", where), number(j, "kappa", where), number(j, "v0", where)};
}

inline json firm_to_json(const FirmParams& f) { return {{"rho", f.rho}, {"kappa", f.kappa}, {"v0", f.v0}}; }

inline TaxPolicy tax_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw validation_error("tax: expected an object with a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    reject_unknown(j, "tax", {"kind"});
    return NoTax{};
  }
  if (kind == "lump_sum") {
    reject_unknown(j, "tax", {"kind", "u1", "u2"});
    return LumpSum{number(j, "u1", "tax"), number(j, "u2", "tax")};
  }
  if (kind == "proportional") {
    reject_unknown(j, "tax", {"kind", "x"});
    return Proportional{number(j, "x", "tax")};
  }
  throw validation_error("tax: unknown kind '" + kind + "'");
}

inline json tax_to_json(const TaxPolicy& tax) {
  if (const auto* l = std::get_if<LumpSum>(&tax)) return {{"kind", "lump_sum"}, {"u1", l->u1}, {"u2", l->u2}};
  if (const auto* p = std::get_if<Proportional>(&tax)) return {{"kind", "proportional"}, {"x", p->x}};
  return {{"kind", "none"}};
}

}  // namespace detail

/// Builds and validates a scenario from a parsed config document.
[[nodiscard]] inline Scenario scenario_from_json(const json& j) {
  using namespace detail;
  reject_unknown(j, "config", {"firm1", "firm2", "demand", "system", "tax", "horizon", "solver", "extinction_floor"});
  for (const char* key : {"firm1", "firm2", "system", "horizon"}) {
    if (!j.contains(key)) throw validation_error(std::string("config: missing '") + key + "'");
  }

  Scenario s;
  s.firm1 = firm_from_json(j.at("firm1"), "firm1");
  s.firm2 = firm_from_json(j.at("firm2"), "firm2");
  if (j.contains("demand")) {
    reject_unknown(j.at("demand"), "demand", {"lambda1", "lambda2"});
    s.demand = DemandSpec{number(j.at("demand"), "lambda1", "demand"), number(j.at("demand"), "lambda2", "demand")};
  }
  if (!j.at("system").is_string()) throw validation_error("system: expected a string");
  const auto kind = parse_system_kind(j.at("system").get<std::string>());
  if (!kind) throw validation_error("system: unknown system '" + j.at("system").get<std::string>() + "'");
  s.system = *kind;
  if (j.contains("tax")) s.tax = tax_from_json(j.at("tax"));
  s.horizon = number(j, "horizon", "config");
  if (j.contains("solver")) {
    const auto& sv = j.at("solver");
    reject_unknown(sv, "solver", {"rel_tol", "abs_tol", "max_step", "sample_dt"});
    if (sv.contains("rel_tol")) s.solver.rel_tol = number(sv, "rel_tol", "solver");
    if (sv.contains("abs_tol")) s.solver.abs_tol = number(sv, "abs_tol", "solver");
    if (sv.contains("max_step")) s.solver.max_step = number(sv, "max_step", "solver");
    if (sv.contains("sample_dt")) s.solver.sample_dt = number(sv, "sample_dt", "solver");
  }
  if (j.contains("extinction_floor")) s.extinction_floor = number(j, "extinction_floor", "config");
  validate(s);
  return s;
}

/// Config document for `s`; unset solver defaults are omitted.
[[nodiscard]] inline json scenario_to_json(const Scenario& s) {
  using namespace detail;
  json j;
  j["firm1"] = firm_to_json(s.firm1);
  j["firm2"] = firm_to_json(s.firm2);
  if (s.demand) j["demand"] = {{"lambda1", s.demand->lambda1}, {"lambda2", s.demand->lambda2}};
  j["system"] = std::string(to_string(s.system));
  j["tax"] = tax_to_json(s.tax);
  j["horizon"] = s.horizon;
  json solver = {{"rel_tol", s.solver.rel_tol}, {"abs_tol", s.solver.abs_tol}};
  if (s.solver.max_step) solver["max_step"] = *s.solver.max_step;
  if (s.solver.sample_dt) solver["sample_dt"] = *s.solver.sample_dt;
  j["solver"] = solver;
  j["extinction_floor"] = s.extinction_floor;
  return j;
}

/// Applies a `dotted.path=value` override. The value is read as JSON when it
/// parses as JSON and as a plain string otherwise.
inline void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw validation_error("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::string_view rest = path;
  while (true) {
    const auto dot = rest.find('.');
    const std::string key(rest.substr(0, dot));
    if (key.empty()) throw validation_error("--set: empty path component in '" + path + "'");
    if (!node->is_object()) throw validation_error("--set: '" + path + "' does not address an object member");
    if (dot == std::string_view::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    rest = rest.substr(dot + 1);
  }
}

[[nodiscard]] inline json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw parse_error("parse error: config is not valid JSON");
  return doc;
}

[[nodiscard]] inline json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw file_error("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_document(text.str());
}

}  // namespace duopoly::config
