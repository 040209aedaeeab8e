// Copyright 2026 The dualjet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file config.hpp
 * @brief JSON space definitions.
 *
 * A config holds m, n, the temporal metric h (m x m expression strings) and
 * either
 *   - "hamiltonian": an expression (m = 1 only), or
 *   - exactly one of "g_upper" / "g_lower" (n x n), "U" (m x n, U[a][i] is
 *     U^(i)_(a)), "F" and optionally "mc" (default 1).
 * Optional keys: "name", "description", "sample_boxes", "seed", "samples",
 * "tolerances" and "fault_injection". Matrix entries may be strings or
 * numbers. Unknown keys are rejected.
 */

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dualjet/parser.hpp"
#include "dualjet/verifier.hpp"

namespace dualjet {

using json = nlohmann::json;

/// Perturbations applied to the connection for negative testing.
struct FaultInjection {
  double horizontal_shift = 0.0;  // added to H^1_11
};

struct SpaceConfig {
  std::string name;
  json source;       // the parsed document
  std::string hash;  // FNV-1a of the canonical serialization, hex
  HamiltonSpace space;
  SampleBoxes boxes;
  std::uint64_t seed = 1;
  int samples = 100;
  Tolerances tolerances;
  FaultInjection fault;

  /// Hook realizing `fault`, empty when there is none.
  CoefficientHook hook() const {
    if (fault.horizontal_shift == 0.0) return {};
    const double shift = fault.horizontal_shift;
    return [shift](CartanCoefficients& co) { co.spatial_horizontal(0, 0, 0) += Expr(shift); };
  }
};

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline Expr parse_field(const json& v, const std::string& field, const ChartSpec& chart) {
  std::string src;
  if (v.is_string())
    src = v.get<std::string>();
  else if (v.is_number())
    return Expr(v.get<double>());
  else
    throw ConfigError(field, "expected an expression string or a number");
  try {
    return parse_scalar(src, chart);
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

inline DTensor parse_matrix(const json& doc, const std::string& field, int rows, int cols, IndexSig sig,
                            const ChartSpec& chart) {
  const json& v = doc.at(field);
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    throw ConfigError(field, "expected " + std::to_string(rows) + " rows");
  DTensor out(std::move(sig), {rows, cols});
  for (int r = 0; r < rows; ++r) {
    if (!v[r].is_array() || static_cast<int>(v[r].size()) != cols)
      throw ConfigError(field, "row " + std::to_string(r + 1) + " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      out(r, c) = parse_field(v[r][c], field + "[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]", chart);
  }
  return out;
}

inline void require_symmetric(const DTensor& t, const std::string& field) {
  if (!is_symmetric(t)) throw ConfigError(field, "matrix is not symmetric");
}

inline Interval parse_interval(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(field, "expected [lo, hi]");
  const Interval box{v[0].get<double>(), v[1].get<double>()};
  if (!std::isfinite(box.lo) || !std::isfinite(box.hi) || !(box.lo < box.hi))
    throw ConfigError(field, "expected finite lo < hi");
  return box;
}

inline double parse_positive(const json& v, const std::string& field) {
  if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>()))
    throw ConfigError(field, "expected a positive number");
  return v.get<double>();
}

}  // namespace detail

/// Applies "key=value" style tolerance overrides (identity, zero, fd, fd_step).
inline void set_tolerance(Tolerances& tol, const std::string& key, double value, const std::string& field = "tol") {
  if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "tolerance '" + key + "' must be positive");
  if (key == "identity")
    tol.identity = value;
  else if (key == "zero")
    tol.zero = value;
  else if (key == "fd")
    tol.fd = value;
  else if (key == "fd_step")
    tol.fd_step = value;
  else
    throw ConfigError(field, "unknown tolerance '" + key + "' (expected identity, zero, fd or fd_step)");
}

/// Builds a space definition from a parsed document.
inline SpaceConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  static const std::set<std::string> known = {"name", "description", "m", "n", "h", "hamiltonian", "g_upper",
                                              "g_lower", "U", "F", "mc", "sample_boxes", "seed", "samples",
                                              "tolerances", "fault_injection"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw ConfigError(key, "unknown key");

  for (const char* key : {"m", "n", "h"})
    if (!doc.contains(key)) throw ConfigError(key, "missing");
  if (!doc["m"].is_number_integer()) throw ConfigError("m", "expected an integer");
  if (!doc["n"].is_number_integer()) throw ConfigError("n", "expected an integer");
  const ChartSpec chart(doc["m"].get<int>(), doc["n"].get<int>());
  const int m = chart.m(), n = chart.n();

  DTensor h = detail::parse_matrix(doc, "h", m, m, IndexSig{lo_t("a"), lo_t("b")}, chart);
  detail::require_symmetric(h, "h");

  const bool raw = doc.contains("hamiltonian");
  const bool has_upper = doc.contains("g_upper"), has_lower = doc.contains("g_lower");
  std::optional<HamiltonSpace> space;
  try {
    if (raw) {
      for (const char* key : {"g_upper", "g_lower", "U", "F", "mc"})
        if (doc.contains(key)) throw ConfigError(key, "not allowed together with 'hamiltonian'");
      if (m != 1)
        throw ConfigError("hamiltonian", "a raw Hamiltonian is only accepted for m = 1; use g/U/F for m >= 2");
      space = HamiltonSpace::raw(chart, h, detail::parse_field(doc["hamiltonian"], "hamiltonian", chart));
    } else {
      if (has_upper == has_lower) throw ConfigError("g_upper", "exactly one of 'g_upper' and 'g_lower' is required");
      const std::string gkey = has_upper ? "g_upper" : "g_lower";
      DTensor g = has_upper ? detail::parse_matrix(doc, gkey, n, n, IndexSig{up_s("i"), up_s("j")}, chart)
                            : detail::parse_matrix(doc, gkey, n, n, IndexSig{lo_s("i"), lo_s("j")}, chart);
      detail::require_symmetric(g, gkey);
      for (Expr e : g.entries())
        if (depends_on(e, chart, VarKind::Momentum)) throw ConfigError(gkey, "must not depend on the momenta");
      const MetricField metric = has_upper ? MetricField::from_upper(g) : MetricField::from_lower(g);
      DTensor U = doc.contains("U") ? detail::parse_matrix(doc, "U", m, n, potential_sig(), chart)
                                    : DTensor(chart, potential_sig());
      const Expr F = doc.contains("F") ? detail::parse_field(doc["F"], "F", chart) : Expr(0.0);
      const double mc = doc.contains("mc") ? detail::parse_positive(doc["mc"], "mc") : 1.0;
      space = HamiltonSpace::electrodynamic(chart, h, metric, U, F, mc);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(raw ? "hamiltonian" : "g", e.what());
  }

  SampleBoxes boxes(chart);
  if (doc.contains("sample_boxes")) {
    const json& sb = doc["sample_boxes"];
    if (!sb.is_object()) throw ConfigError("sample_boxes", "expected an object");
    const std::pair<const char*, VarKind> kinds[] = {
        {"t", VarKind::Temporal}, {"x", VarKind::Spatial}, {"p", VarKind::Momentum}};
    for (const auto& [key, kind] : kinds)
      if (sb.contains(key)) boxes.set_kind(kind, detail::parse_interval(sb[key], std::string("sample_boxes.") + key));
    for (const auto& [key, value] : sb.items()) {
      if (key == "t" || key == "x" || key == "p") continue;
      const auto var = chart.lookup(key);
      if (!var) throw ConfigError("sample_boxes." + key, "unknown variable");
      boxes.set(*var, detail::parse_interval(value, "sample_boxes." + key));
    }
  }

  SpaceConfig cfg{doc.value("name", std::string{}), doc, fnv1a_hex(doc.dump()), std::move(*space), boxes, 1, 100,
                  Tolerances{}, FaultInjection{}};
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_integer() || doc["samples"].get<int>() < 1)
      throw ConfigError("samples", "expected a positive integer");
    cfg.samples = doc["samples"].get<int>();
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object()) throw ConfigError("tolerances", "expected an object");
    for (const auto& [key, value] : doc["tolerances"].items()) {
      if (!value.is_number()) throw ConfigError("tolerances." + key, "expected a number");
      set_tolerance(cfg.tolerances, key, value.get<double>(), "tolerances." + key);
    }
  }
  if (doc.contains("fault_injection")) {
    const json& fi = doc["fault_injection"];
    if (!fi.is_object()) throw ConfigError("fault_injection", "expected an object");
    for (const auto& [key, value] : fi.items()) {
      if (key != "horizontal_shift" || !value.is_number())
        throw ConfigError("fault_injection." + key, "only a numeric 'horizontal_shift' is supported");
      cfg.fault.horizontal_shift = value.get<double>();
    }
  }
  return cfg;
}

inline SpaceConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline SpaceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace dualjet
