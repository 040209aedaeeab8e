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
 * @file cli.hpp
 * @brief The `compute` and `verify` commands, callable in-process.
 *
 * Exit codes: 0 success, 1 a verification check failed, 2 configuration or
 * usage error, 3 math-domain error or degenerate metric at a point.
 *
 * Point syntax (`--point`): comma-separated tokens. `name=value` sets one
 * coordinate (t1, x2, p1_2, ...). `t=`, `x=` and `p=` start a vector that the
 * following bare values continue, e.g. `t=1,x=0.5,0.7,p=1,0,0,0`; the p vector
 * runs over p1_1, p2_1, ..., pn_1, p1_2, ... Unset coordinates take the center
 * of their sample box, and every coordinate must lie inside its box.
 *
 * Grid syntax (`--grid`): comma-separated `name=lo:hi:count` or `name=value`;
 * the product is taken over variables in chart order, the first variable
 * varying slowest.
 */

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dualjet/report.hpp"

namespace dualjet {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfig = 2, kExitDomain = 3 };

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, const std::string& field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(field, "'" + s + "' is not a number");
  return v;
}

inline std::vector<double> box_centers(const SampleBoxes& boxes) {
  std::vector<double> flat(boxes.chart().num_vars());
  for (int k = 0; k < boxes.chart().num_vars(); ++k) {
    const Interval& b = boxes[Var{k}];
    flat[k] = 0.5 * (b.lo + b.hi);
  }
  return flat;
}

inline void require_inside(const std::vector<double>& flat, const SampleBoxes& boxes) {
  const ChartSpec& c = boxes.chart();
  for (int k = 0; k < c.num_vars(); ++k) {
    const Interval& b = boxes[Var{k}];
    if (flat[k] < b.lo || flat[k] > b.hi)
      throw ConfigError("point", c.name(Var{k}) + " = " + format_number(flat[k]) + " lies outside its sample box [" +
                                     format_number(b.lo) + ", " + format_number(b.hi) + "]");
  }
}

}  // namespace detail

inline Point parse_point(const std::string& text, const SampleBoxes& boxes) {
  const ChartSpec& c = boxes.chart();
  std::vector<double> flat = detail::box_centers(boxes);
  std::vector<int> vector_slots;  // remaining slots of the open t/x/p vector
  std::size_t next = 0;
  for (const std::string& token : detail::split(text, ',')) {
    if (token.empty()) throw ConfigError("point", "empty token in '" + text + "'");
    const auto eq = token.find('=');
    std::string value = token;
    if (eq != std::string::npos) {
      const std::string name = token.substr(0, eq);
      value = token.substr(eq + 1);
      vector_slots.clear();
      next = 0;
      if (name == "t" || name == "x" || name == "p") {
        const VarKind kind = name == "t" ? VarKind::Temporal : name == "x" ? VarKind::Spatial : VarKind::Momentum;
        for (int k = 0; k < c.num_vars(); ++k)
          if (c.kind(Var{k}) == kind) vector_slots.push_back(k);
      } else {
        const auto var = c.lookup(name);
        if (!var) throw ConfigError("point", "unknown coordinate '" + name + "'");
        vector_slots.push_back(var->index);
      }
    }
    if (next >= vector_slots.size()) throw ConfigError("point", "too many values near '" + token + "'");
    flat[vector_slots[next++]] = detail::parse_double(value, "point");
  }
  detail::require_inside(flat, boxes);
  return Point::from_flat(c, flat);
}

inline std::vector<Point> parse_grid(const std::string& text, const SampleBoxes& boxes) {
  const ChartSpec& c = boxes.chart();
  std::vector<std::vector<double>> axis(c.num_vars());
  const std::vector<double> centers = detail::box_centers(boxes);
  for (int k = 0; k < c.num_vars(); ++k) axis[k] = {centers[k]};
  for (const std::string& token : detail::split(text, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ConfigError("grid", "expected name=lo:hi:count or name=value, got '" + token + "'");
    const auto var = c.lookup(token.substr(0, eq));
    if (!var) throw ConfigError("grid", "unknown coordinate '" + token.substr(0, eq) + "'");
    const auto parts = detail::split(token.substr(eq + 1), ':');
    if (parts.size() == 1) {
      axis[var->index] = {detail::parse_double(parts[0], "grid")};
    } else if (parts.size() == 3) {
      const double lo = detail::parse_double(parts[0], "grid"), hi = detail::parse_double(parts[1], "grid");
      const double count = detail::parse_double(parts[2], "grid");
      if (count < 1 || count != std::floor(count) || count > 1000) throw ConfigError("grid", "count must be in 1..1000");
      axis[var->index].clear();
      for (int s = 0; s < static_cast<int>(count); ++s)
        axis[var->index].push_back(count == 1 ? lo : lo + (hi - lo) * s / (count - 1));
    } else {
      throw ConfigError("grid", "expected name=lo:hi:count or name=value, got '" + token + "'");
    }
  }
  std::size_t total = 1;
  for (const auto& a : axis) total *= a.size();
  if (total > 10000) throw ConfigError("grid", "more than 10000 points");
  std::vector<Point> pts;
  std::vector<double> flat(c.num_vars());
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rest = n;
    for (int k = c.num_vars() - 1; k >= 0; --k) {
      flat[k] = axis[k][rest % axis[k].size()];
      rest /= axis[k].size();
    }
    detail::require_inside(flat, boxes);
    pts.push_back(Point::from_flat(c, flat));
  }
  return pts;
}

struct ComputeArgs {
  std::string config;
  std::vector<std::string> points;
  std::string grid;
  std::string out = "-";
};

struct VerifyArgs {
  std::string config;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerances;  // "key=value"
  std::string out;                      // JSON report path; empty for none
};

namespace detail {

inline void write_output(const std::string& path, const std::string& text, std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    stdout_stream << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("out", "failed writing '" + path + "'");
}

/// Maps exceptions to exit codes and prints a one-line diagnostic.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DegenerateMetricError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitConfig;
  }
}

inline std::string describe_point(const Point& pt, const ChartSpec& c) {
  std::string s;
  const auto flat = pt.flatten(c);
  for (int k = 0; k < c.num_vars(); ++k) s += (k ? "," : "") + c.name(Var{k}) + "=" + format_number(flat[k]);
  return s;
}

}  // namespace detail

inline int cmd_compute(const ComputeArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const SpaceConfig cfg = load_config(args.config);
    const ChartSpec& c = cfg.space.chart();
    std::vector<Point> pts;
    for (const std::string& text : args.points) pts.push_back(parse_point(text, cfg.boxes));
    if (!args.grid.empty())
      for (Point& p : parse_grid(args.grid, cfg.boxes)) pts.push_back(std::move(p));
    if (pts.empty()) throw ConfigError("point", "give at least one --point or a --grid");
    for (const Point& pt : pts) {
      try {
        cfg.space.check_point(pt);
      } catch (const DegenerateMetricError& e) {
        throw DegenerateMetricError(std::string(e.what()) + " at point " + detail::describe_point(pt, c));
      }
    }
    const Geometry geo = build_geometry(cfg.space, cfg.hook());
    json report;
    try {
      report = compute_report(cfg, geo, pts);
    } catch (const DomainError& e) {
      throw DomainError(e.what(), "while evaluating the report");
    }
    detail::write_output(args.out, to_deterministic_json(report), out);
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_verify(const VerifyArgs& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const SpaceConfig cfg = load_config(args.config);
    VerifyOptions opt;
    opt.samples = args.samples.value_or(cfg.samples);
    opt.seed = args.seed.value_or(cfg.seed);
    opt.tol = cfg.tolerances;
    if (opt.samples < 1) throw ConfigError("samples", "must be at least 1");
    for (const std::string& kv : args.tolerances) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("tol", "expected key=value, got '" + kv + "'");
      set_tolerance(opt.tol, kv.substr(0, eq), detail::parse_double(kv.substr(eq + 1), "tol"));
    }
    const VerifyResult result = verify_space(cfg.space, cfg.boxes, opt, cfg.hook());
    const ResidualReport& r = result.report;

    std::size_t width = 5;
    for (const Check& c : r.checks) width = std::max(width, c.name.size());
    out << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(12) << "max residual"
        << "  " << std::setw(9) << "tolerance" << "  result\n";
    int passed = 0;
    for (const Check& c : r.checks) {
      char res[32], tol[32];
      std::snprintf(res, sizeof res, "%.3e", c.max_residual);
      std::snprintf(tol, sizeof tol, "%.0e", c.tolerance);
      out << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(12) << res << "  " << std::setw(9)
          << tol << "  " << (c.passed() ? "PASS" : "FAIL");
      if (!c.note.empty()) out << "  (" << c.note << ")";
      out << '\n';
      passed += c.passed() ? 1 : 0;
    }
    out << "verify " << (cfg.name.empty() ? args.config : cfg.name) << ": " << (r.passed() ? "PASS" : "FAIL") << " ("
        << passed << "/" << r.checks.size() << " checks)\n";
    if (!args.out.empty()) detail::write_output(args.out, to_deterministic_json(verify_report(cfg, opt, r)), out);
    return static_cast<int>(r.passed() ? kExitOk : kExitVerifyFailed);
  });
}

}  // namespace dualjet
