/*
 * Copyright 2026 The hbr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <variant>

#include <json.hpp>

#include "hbr/boundary.hpp"
#include "hbr/chi2_tails.hpp"
#include "hbr/lr_tests.hpp"
#include "hbr/model.hpp"
#include "hbr/montecarlo.hpp"

// JSON and CSV emitters for results. JSON goes through nlohmann::json.
namespace hbr {

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const TestOutcome& o) {
  return nlohmann::json{{"statistic", o.statistic},
                        {"threshold", o.threshold},
                        {"reject", o.reject},
                        {"argmax_window", o.argmax_window},
                        {"per_window_values", o.per_window_values}};
}

inline nlohmann::json to_json(const HbrParams& p) {
  return nlohmann::json{{"n", p.n},
                        {"bump_width", p.bump_width},
                        {"delta", p.delta},
                        {"sigma0_sq", p.sigma0_sq},
                        {"sigman_sq", p.sigman_sq},
                        {"kappa_sq", p.kappa_sq()},
                        {"alpha", p.alpha}};
}

inline nlohmann::json to_json(const BoundaryResult& b, const Regime& regime) {
  nlohmann::json j{{"regime", to_string(regime.kind)},
                   {"rate", to_string(b.rate)},
                   {"side", to_string(b.side)},
                   {"adaptive", b.adaptive},
                   {"constant", b.constant}};
  if (std::isinf(regime.c)) {
    j["c"] = "inf";
  } else {
    j["c"] = regime.c;
  }
  return j;
}

inline nlohmann::json to_json(const ComparisonBounds& b) {
  nlohmann::json j = b.as_map();
  j["central_only_omitted"] = b.central_only_omitted;
  return j;
}

inline nlohmann::json to_json(const Hypothesis& h) {
  return std::visit(
      [](const auto& alt) -> nlohmann::json {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, NullHypothesis>) {
          return {{"type", "H0"}};
        } else if constexpr (std::is_same_v<T, FixedWindow>) {
          return {{"type", "H1"}, {"window", alt.window}};
        } else {
          return {{"type", "H1"}, {"window", "uniform"}};
        }
      },
      h);
}

inline nlohmann::json to_json(const McConfig& cfg) {
  return nlohmann::json{{"replications", cfg.replications},
                        {"seed", cfg.seed},
                        {"test", to_string(cfg.test)},
                        {"params", to_json(cfg.params)},
                        {"hypothesis", to_json(cfg.hypothesis)}};
}

/// `delta,kappa_sq,power,std_err`, one row per cell, delta-major.
inline void write_power_grid_csv(std::ostream& out, const PowerGrid& grid) {
  out << "delta,kappa_sq,power,std_err\n";
  for (std::size_t i = 0; i < grid.delta_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.kappa_sq_axis.size(); ++j) {
      const auto& e = grid.at(i, j);
      out << format_double(grid.delta_axis[i]) << ',' << format_double(grid.kappa_sq_axis[j])
          << ',' << format_double(e.rate) << ',' << format_double(e.std_err) << '\n';
    }
  }
}

}  // namespace hbr
