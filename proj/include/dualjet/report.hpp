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
 * @file report.hpp
 * @brief Deterministic JSON reports.
 *
 * Object keys are sorted (nlohmann objects are ordered maps) and numbers are
 * written with 17 significant digits by our own writer, so a report is a pure
 * function of its inputs. Non-finite numbers are written as the strings
 * "nan", "inf" and "-inf".
 */

#include <cmath>
#include <string>
#include <vector>

#include "dualjet/config.hpp"

namespace dualjet {

inline constexpr const char* kVersion = "dualjet 0.1.0";

namespace detail {

inline void write_string(const std::string& s, std::string& out) {
  // nlohmann's escaping is deterministic; reuse it for strings only
  out += json(s).dump();
}

inline void write_json(const json& v, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write_string(it.key(), out);
        out += ": ";
        write_json(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += flat ? ", " : ",";
        if (!flat) newline(depth + 1);
        write_json(v[k], out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isnan(d))
        out += "\"nan\"";
      else if (std::isinf(d))
        out += d > 0 ? "\"inf\"" : "\"-inf\"";
      else
        out += format_number(d);
      return;
    }
    case json::value_t::string: write_string(v.get<std::string>(), out); return;
    default: out += v.dump(); return;
  }
}

}  // namespace detail

/// Serializes with sorted keys, 2-space indentation and %.17g numbers.
inline std::string to_deterministic_json(const json& v) {
  std::string out;
  detail::write_json(v, out, 2, 0);
  out += '\n';
  return out;
}

inline json point_json(const Point& pt, const ChartSpec& c) {
  json coords = json::object();
  const std::vector<double> flat = pt.flatten(c);
  for (int k = 0; k < c.num_vars(); ++k) coords[c.name(Var{k})] = flat[k];
  return coords;
}

/// {"labels": [...], "entries": [{"index": [1-based...], "value": v}, ...]}
inline json tensor_json(const NumericTensor& t) {
  json entries = json::array();
  for (std::size_t off = 0; off < t.size(); ++off) {
    json index = json::array();
    for (int k : t.index_of(off)) index.push_back(k + 1);
    entries.push_back(json{{"index", index}, {"value", t.entries()[off]}});
  }
  json labels = json::array();
  for (const std::string& l : t.sig().labels()) labels.push_back(l);
  return json{{"labels", labels}, {"entries", entries}};
}

inline json check_json(const Check& c) {
  return json{{"name", c.name},           {"max_residual", c.max_residual}, {"samples", c.samples},
              {"tolerance", c.tolerance}, {"passed", c.passed()},           {"note", c.note}};
}

inline json residual_report_json(const ResidualReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back(check_json(c));
  return json{{"checks", checks}, {"passed", r.passed()}};
}

/// Named tensors of a geometry that the compute report evaluates.
struct NamedTensor {
  std::string key;
  std::string symbol;
  const DTensor* value;
  std::optional<bool> zero_cell;
};

inline std::vector<NamedTensor> report_tensors(const Geometry& geo) {
  const ConnectionData& d = geo.data;
  std::vector<NamedTensor> out = {
      {"metric.h_lower", "h_ab", &geo.space.temporal_metric().lower, {}},
      {"metric.g_lower", "g_ij", &geo.space.spatial_metric().lower, {}},
      {"metric.g_upper", "g^ij", &geo.space.spatial_metric().upper, {}},
      {"connection.N1", "N1_(i)b^(a)", &d.N.temporal, {}},
      {"connection.N2", "N2_(i)j^(a)", &d.N.spatial, {}},
      {"connection.chi", "chi^a_bc", &d.coeffs.temporal, {}},
      {"connection.A", "A^i_jc", &d.coeffs.spatial_temporal, {}},
      {"connection.H", "H^i_jk", &d.coeffs.spatial_horizontal, {}},
      {"connection.C", "C_i(c)^j(k)", &d.coeffs.spatial_vertical, {}},
      {"connection.Gamma", "Gamma^k_ij", &d.gamma, {}},
      {"curvature.frak_R", "frak_R^r_kij", &d.spatial_curvature, {}},
      {"curvature.chi", "chi^d_abc", &d.temporal_curvature, {}},
  };
  if (d.correction) out.push_back({"connection.T", "T_(i)j^(a)", &*d.correction, {}});
  for (const ComponentTable* table : {&geo.torsion, &geo.curvature})
    for (const TableCell& cell : table->cells()) out.push_back({table->key(cell), cell.symbol, &cell.value, cell.zero});
  return out;
}

/// Report body for `compute`: every named tensor evaluated at every point.
inline json compute_report(const SpaceConfig& cfg, const Geometry& geo, const std::vector<Point>& pts) {
  const ChartSpec& c = geo.space.chart();
  const std::vector<NamedTensor> named = report_tensors(geo);
  std::vector<const DTensor*> tensors;
  for (const NamedTensor& t : named) tensors.push_back(t.value);
  const TensorEvaluator eval(tensors, c);

  json points = json::array();
  for (const Point& pt : pts) {
    const auto values = eval.evaluate(pt);
    json components = json::object();
    for (std::size_t k = 0; k < named.size(); ++k) {
      json entry = tensor_json(values[k]);
      entry["symbol"] = named[k].symbol;
      if (named[k].zero_cell) entry["zero_cell"] = *named[k].zero_cell;
      components[named[k].key] = std::move(entry);
    }
    points.push_back(json{{"coordinates", point_json(pt, c)}, {"components", std::move(components)}});
  }
  return json{{"version", kVersion},
              {"config_hash", cfg.hash},
              {"name", cfg.name},
              {"m", c.m()},
              {"n", c.n()},
              {"branch", c.m() == 1 ? "m=1" : "m>=2"},
              {"points", std::move(points)}};
}

/// Report body for `verify`.
inline json verify_report(const SpaceConfig& cfg, const VerifyOptions& opt, const ResidualReport& r) {
  const json tolerances{{"identity", opt.tol.identity},
                        {"zero", opt.tol.zero},
                        {"fd", opt.tol.fd},
                        {"fd_step", opt.tol.fd_step}};
  json out = residual_report_json(r);
  out["version"] = kVersion;
  out["config_hash"] = cfg.hash;
  out["name"] = cfg.name;
  out["seed"] = opt.seed;
  out["samples"] = opt.samples;
  out["tolerances"] = tolerances;
  return out;
}

}  // namespace dualjet
