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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "hbr/error.hpp"
#include "hbr/rng.hpp"

namespace hbr {

/// Parameters of the heterogeneous bump regression model
///
///   Y_i = delta * 1{i/n in I} + sqrt(sigma0_sq + sigman_sq * 1{i/n in I}) * Z_i,
///
/// with the bump I one of the l = 1/bump_width grid windows.
struct HbrParams {
  std::size_t n = 0;
  double bump_width = 0.0;
  double delta = 0.0;
  double sigma0_sq = 1.0;
  double sigman_sq = 0.0;
  double alpha = 0.05;

  /// kappa^2 = sigma_n^2 / sigma_0^2.
  double kappa_sq() const noexcept { return sigman_sq / sigma0_sq; }
  double sigma0() const noexcept { return std::sqrt(sigma0_sq); }

  /// Number of grid windows, round(1/bump_width).
  std::size_t window_count() const noexcept {
    return static_cast<std::size_t>(std::llround(1.0 / bump_width));
  }

  /// Throws parameter_error (or grid_error) on any invariant violation.
  void validate() const;
};

namespace detail {

inline std::size_t admissible_window_count(double bump_width) {
  if (!(bump_width > 0.0 && bump_width <= 1.0)) {
    throw parameter_error("bump_width must lie in (0,1], got " + std::to_string(bump_width));
  }
  const double inv = 1.0 / bump_width;
  const double l = std::round(inv);
  if (std::abs(l * bump_width - 1.0) >= 1e-9) {
    throw grid_error("1/bump_width is not an integer (bump_width = " +
                     std::to_string(bump_width) + ")");
  }
  return static_cast<std::size_t>(l);
}

}  // namespace detail

inline void HbrParams::validate() const {
  if (n < 2) throw parameter_error("n must be at least 2");
  detail::admissible_window_count(bump_width);
  if (!(std::isfinite(delta) && delta >= 0.0)) {
    throw parameter_error("delta must be finite and nonnegative");
  }
  if (!(std::isfinite(sigma0_sq) && sigma0_sq > 0.0)) {
    throw parameter_error("sigma0_sq must be finite and positive");
  }
  if (!(std::isfinite(sigman_sq) && sigman_sq >= 0.0)) {
    throw parameter_error("sigman_sq must be finite and nonnegative");
  }
  if (!std::isfinite(kappa_sq())) throw parameter_error("kappa_sq is not finite");
  if (!(alpha > 0.0 && alpha < 1.0)) throw parameter_error("alpha must lie in (0,1)");
}

/// One candidate bump location: 1-based index plus the half-open range
/// [begin, end) of 0-based offsets into the observation vector. Sample
/// i (1-based) belongs to the window iff begin < i <= end.
struct Window {
  std::size_t index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains_offset(std::size_t offset) const noexcept {
    return offset >= begin && offset < end;
  }
  friend bool operator==(const Window&, const Window&) = default;
};

/// The partition of {1, ..., n} into l equal-width windows.
class WindowGrid {
 public:
  WindowGrid(std::size_t n, double bump_width, std::vector<Window> windows)
      : n_(n), bump_width_(bump_width), windows_(std::move(windows)) {}

  std::size_t n() const noexcept { return n_; }
  double bump_width() const noexcept { return bump_width_; }
  std::size_t size() const noexcept { return windows_.size(); }
  std::span<const Window> windows() const noexcept { return windows_; }

  /// Window by 1-based index.
  const Window& window(std::size_t index) const {
    if (index < 1 || index > windows_.size()) {
      throw parameter_error("window index " + std::to_string(index) + " outside 1.." +
                            std::to_string(windows_.size()));
    }
    return windows_[index - 1];
  }

  std::size_t max_window_size() const noexcept {
    std::size_t m = 0;
    for (const auto& w : windows_) m = std::max(m, w.size());
    return m;
  }
  std::size_t min_window_size() const noexcept {
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (const auto& w : windows_) m = std::min(m, w.size());
    return m;
  }

  auto begin() const noexcept { return windows_.begin(); }
  auto end() const noexcept { return windows_.end(); }

 private:
  std::size_t n_;
  double bump_width_;
  std::vector<Window> windows_;
};

/// Builds the window grid. Window j holds the samples i with
/// (j-1)/l < i/n <= j/l, evaluated in integer arithmetic, so windows sizes
/// differ by at most one when n is not a multiple of l.
inline WindowGrid candidate_windows(std::size_t n, double bump_width) {
  const std::size_t l = detail::admissible_window_count(bump_width);
  if (n < l) {
    throw size_error("n = " + std::to_string(n) + " is smaller than the window count " +
                     std::to_string(l));
  }
  std::vector<Window> windows;
  windows.reserve(l);
  std::size_t begin = 0;
  for (std::size_t j = 1; j <= l; ++j) {
    // largest i with i * l <= j * n
    const auto end = static_cast<std::size_t>((static_cast<detail::uint128>(j) * n) / l);
    windows.push_back(Window{j, begin, end});
    begin = end;
  }
  return WindowGrid(n, bump_width, std::move(windows));
}

/// Observed (or simulated) data together with the model it was drawn from.
struct Observations {
  std::vector<double> values;
  HbrParams params;
  std::optional<std::size_t> true_window;
};

/// Y_i i.i.d. N(0, sigma0_sq).
template <GaussianSource G>
Observations generate_h0(const HbrParams& params, G& noise) {
  params.validate();
  const double sd = std::sqrt(params.sigma0_sq);
  Observations obs{std::vector<double>(params.n), params, std::nullopt};
  for (auto& y : obs.values) y = sd * noise.gaussian();
  return obs;
}

/// Data with a mean bump of height delta and a variance bump of sigman_sq on
/// grid window `window_index` (1-based).
template <GaussianSource G>
Observations generate_h1(const HbrParams& params, std::size_t window_index, G& noise) {
  params.validate();
  const WindowGrid grid = candidate_windows(params.n, params.bump_width);
  const Window& bump = grid.window(window_index);
  const double sd_out = std::sqrt(params.sigma0_sq);
  const double sd_in = std::sqrt(params.sigma0_sq + params.sigman_sq);
  Observations obs{std::vector<double>(params.n), params, window_index};
  for (std::size_t i = 0; i < params.n; ++i) {
    const double z = noise.gaussian();
    obs.values[i] = bump.contains_offset(i) ? params.delta + sd_in * z : sd_out * z;
  }
  return obs;
}

/// Writes `index,value` CSV (1-based index, 17 significant digits, LF).
inline void write_observations_csv(std::ostream& out, std::span<const double> values) {
  out << "index,value\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    line.str({});
    line << (i + 1) << ',' << values[i] << '\n';
    out << line.str();
  }
}

/// Reads the CSV written by write_observations_csv. A header line is
/// optional; the value is taken from the last column. Throws parse_error
/// naming the offending line.
inline std::vector<double> read_observations_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_of("0123456789") == std::string::npos) continue;
    const auto comma = line.find_last_of(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (field.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) {
        throw std::invalid_argument(field);
      }
      values.push_back(v);
    } catch (const std::exception&) {
      throw parse_error("malformed value on line " + std::to_string(line_no) + ": '" + line +
                        "'");
    }
  }
  if (values.empty()) throw parse_error("input contains no observations");
  return values;
}

}  // namespace hbr
