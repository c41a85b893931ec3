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
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbr/error.hpp"

// Detection-boundary constants. Every boundary has the form
//
//   sqrt(n|I|) * scale = C * sqrt(-log|I|),
//
// where scale is delta (mean rate), kappa^2 (variance rate) or 1 (unit rate,
// used by the relaxed regimes with non-vanishing kappa).
namespace hbr {

enum class RegimeKind { dominant_mean, equilibrium, dominant_variance };
enum class Rate { mean, variance, unit };
enum class Side { lower, upper };

inline const char* to_string(RegimeKind k) noexcept {
  switch (k) {
    case RegimeKind::dominant_mean: return "DMR";
    case RegimeKind::equilibrium: return "ER";
    case RegimeKind::dominant_variance: return "DVR";
  }
  return "?";
}
inline const char* to_string(Rate r) noexcept {
  switch (r) {
    case Rate::mean: return "mean";
    case Rate::variance: return "variance";
    case Rate::unit: return "unit";
  }
  return "?";
}
inline const char* to_string(Side s) noexcept { return s == Side::lower ? "lower" : "upper"; }

/// c = lim sigma_n^2 / (delta sigma_0), +infinity allowed.
struct Regime {
  RegimeKind kind = RegimeKind::dominant_mean;
  double c = 0.0;
  double kappa_limit = 0.0;
};

struct BoundaryResult {
  Rate rate = Rate::mean;
  double constant = 0.0;
  Side side = Side::lower;
  bool adaptive = false;
};

inline Regime classify_regime(double c) {
  if (std::isnan(c) || c < 0.0) throw domain_error("regime ratio c must be in [0, inf]");
  if (c == 0.0) return Regime{RegimeKind::dominant_mean, 0.0, 0.0};
  if (std::isinf(c)) return Regime{RegimeKind::dominant_variance, c, 0.0};
  return Regime{RegimeKind::equilibrium, c, 0.0};
}

namespace detail {

// x - log(1+x) without cancellation for small x.
inline double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-2) {
    // x^2/2 - x^3/3 + x^4/4 - ...
    double term = x * x;
    double sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= -x;
    }
    return sum;
  }
  return x - std::log1p(x);
}

inline constexpr double kSqrt3 = std::numbers::sqrt3;

// (c + sqrt(2+3c^2)) / (1+c^2), evaluated in 1/c for large c.
inline double adaptive_ratio(double c) {
  if (c <= 1.0) return (c + std::sqrt(2.0 + 3.0 * c * c)) / (1.0 + c * c);
  const double u = 1.0 / c;
  return u * (1.0 + std::sqrt(2.0 * u * u + 3.0)) / (u * u + 1.0);
}

}  // namespace detail

/// Table of boundary constants. `rate` defaults to the natural rate of the
/// regime (mean for DMR/ER, variance for DVR). Adaptive lower bounds exist
/// only in the DMR; other adaptive lower queries throw unsupported_error.
inline BoundaryResult boundary_constant(const Regime& regime, double sigma0, Side side,
                                        bool adaptive, std::optional<Rate> rate = std::nullopt) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw parameter_error("sigma0 must be positive");
  const Rate r = rate.value_or(regime.kind == RegimeKind::dominant_variance ? Rate::variance
                                                                            : Rate::mean);
  const bool adaptive_upper = adaptive && side == Side::upper;
  if (adaptive && side == Side::lower && regime.kind != RegimeKind::dominant_mean) {
    throw unsupported_error(std::string("no adaptive lower bound is known in the ") +
                            to_string(regime.kind));
  }
  const double c = regime.c;
  switch (regime.kind) {
    case RegimeKind::dominant_mean:
      if (r != Rate::mean) throw unsupported_error("DMR boundary is stated on the mean rate only");
      return {r, std::numbers::sqrt2 * sigma0, side, adaptive};
    case RegimeKind::equilibrium:
      if (!(c > 0.0) || std::isinf(c)) throw domain_error("ER requires 0 < c < inf");
      if (r == Rate::mean) {
        const double k = adaptive_upper ? sigma0 * detail::adaptive_ratio(c)
                                        : std::numbers::sqrt2 * sigma0 * std::sqrt(2.0 / (2.0 + c * c));
        return {r, k, side, adaptive};
      }
      if (r == Rate::variance) {
        const double k = adaptive_upper ? c * detail::adaptive_ratio(c)
                                        : 2.0 / std::sqrt(2.0 / (c * c) + 1.0);
        return {r, k, side, adaptive};
      }
      throw unsupported_error("ER boundary is stated on the mean or variance rate");
    case RegimeKind::dominant_variance:
      if (r != Rate::variance) {
        throw unsupported_error("DVR boundary is stated on the variance rate only");
      }
      return {r, adaptive_upper ? 1.0 + detail::kSqrt3 : 2.0, side, adaptive};
  }
  throw unsupported_error("unknown regime");
}

/// The scale (delta, kappa^2 or sqrt(n|I|) multiplier) sitting exactly on
/// the boundary C sqrt(-log|I|) / sqrt(n|I|) for the given design.
inline double boundary_scale(double constant, double n, double bump_width) {
  if (!(bump_width > 0.0 && bump_width < 1.0)) throw parameter_error("bump_width must be in (0,1)");
  if (!(n > 0.0)) throw parameter_error("n must be positive");
  return constant * std::sqrt(-std::log(bump_width)) / std::sqrt(n * bump_width);
}

enum class RelaxedBound { er_lower, dvr_lower, er_upper, dvr_upper };

inline const char* to_string(RelaxedBound b) noexcept {
  switch (b) {
    case RelaxedBound::er_lower: return "ER-lower";
    case RelaxedBound::dvr_lower: return "DVR-lower";
    case RelaxedBound::er_upper: return "ER-upper";
    case RelaxedBound::dvr_upper: return "DVR-upper";
  }
  return "?";
}

/// Unit-rate constants for the relaxed regimes where kappa_n -> kappa > 0.
/// `c` is ignored for the DVR variants.
inline double relaxed_constant(RelaxedBound which, double c, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw domain_error("relaxed constants need kappa > 0 (denominator vanishes at 0)");
  }
  const double k2 = kappa * kappa;
  const bool er = which == RelaxedBound::er_lower || which == RelaxedBound::er_upper;
  if (er && (!(c > 0.0) || !std::isfinite(c))) throw domain_error("ER constants need 0 < c < inf");
  switch (which) {
    case RelaxedBound::er_lower:
      // kappa^2/(2c^2) (kappa^2 + c^2) - log(1+kappa^2)/2
      return 1.0 / std::sqrt(k2 * k2 / (2.0 * c * c) + 0.5 * detail::x_minus_log1p(k2));
    case RelaxedBound::dvr_lower:
      return 1.0 / std::sqrt(0.5 * detail::x_minus_log1p(k2));
    case RelaxedBound::er_upper: {
      const double ic2 = 1.0 / (c * c);
      const double num = std::sqrt(2.0 * k2 + 4.0 * k2 * ic2 + 2.0 * k2 * k2 * ic2 + 1.0 + 2.0 * ic2) +
                         std::sqrt(1.0 + 2.0 * ic2);
      return num / (k2 + 2.0 * k2 * ic2 + k2 * k2 * ic2);
    }
    case RelaxedBound::dvr_upper:
      return (std::sqrt(2.0 * k2 + 1.0) + 1.0) / k2;
  }
  throw unsupported_error("unknown relaxed bound");
}

/// Ratio of the adaptive upper constant to the detection-boundary constant.
/// r(0) = 1, r(inf) = (1+sqrt 3)/2, maximum sqrt 2 at c = sqrt 2.
inline double price_of_adaptation(double c) {
  if (std::isnan(c) || c < 0.0) throw domain_error("price_of_adaptation needs c in [0, inf]");
  if (c == 0.0) return 1.0;
  if (std::isinf(c)) return (1.0 + detail::kSqrt3) / 2.0;
  if (c <= 1.0) {
    return std::sqrt(2.0 + c * c) * (c + std::sqrt(2.0 + 3.0 * c * c)) / (2.0 * (1.0 + c * c));
  }
  const double u = 1.0 / c;
  return std::sqrt(2.0 * u * u + 1.0) * (1.0 + std::sqrt(2.0 * u * u + 3.0)) /
         (2.0 * (u * u + 1.0));
}

/// Fraction of samples saved in the equilibrium regime relative to the
/// homogeneous boundary: 1 - 2/(2+c^2).
inline double sample_size_reduction(double c) {
  if (std::isnan(c) || c < 0.0) throw domain_error("sample_size_reduction needs c >= 0");
  if (std::isinf(c)) return 1.0;
  return c * c / (2.0 + c * c);
}

/// Exponent whose divergence to -infinity along a sequence certifies that
/// the bump class is undetectable:
///   m D^2/(2 s0^2) (1+d) d / (1 - d k2) - d (m/2) log(1+k2)
///     - (m/2) log(1 - d k2) + d log|I|,         m = n|I|.
inline double lower_bound_condition_value(double n, double bump_width, double delta,
                                          double kappa_sq, double sigma0_sq, double delta_seq) {
  if (!(n > 0.0)) throw parameter_error("n must be positive");
  if (!(bump_width > 0.0 && bump_width <= 1.0)) throw parameter_error("bump_width must be in (0,1]");
  if (!(kappa_sq >= 0.0) || !std::isfinite(kappa_sq)) throw parameter_error("kappa_sq must be >= 0");
  if (!(sigma0_sq > 0.0)) throw parameter_error("sigma0_sq must be positive");
  if (!(delta_seq >= 0.0) || !std::isfinite(delta_seq)) throw domain_error("delta_seq must be >= 0");
  const double dk = delta_seq * kappa_sq;
  if (!(dk < 1.0)) throw domain_error("delta_seq * kappa_sq must be below 1");
  const double m = n * bump_width;
  return m * delta * delta / (2.0 * sigma0_sq) * (1.0 + delta_seq) * delta_seq / (1.0 - dk) -
         delta_seq * 0.5 * m * std::log1p(kappa_sq) - 0.5 * m * std::log1p(-dk) +
         delta_seq * std::log(bump_width);
}

struct ConditionPoint {
  double n = 0.0;
  double bump_width = 0.0;
  double delta = 0.0;
  double kappa_sq = 0.0;
  double sigma0_sq = 1.0;
  double delta_seq = 0.0;
};

enum class Divergence { downward, upward, inconclusive };

inline const char* to_string(Divergence d) noexcept {
  switch (d) {
    case Divergence::downward: return "diverging-down";
    case Divergence::upward: return "diverging-up";
    case Divergence::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ConditionReport {
  std::vector<double> values;
  bool tail_decreasing = false;  // last min(10, k) values strictly decreasing
  bool tail_increasing = false;
  Divergence verdict = Divergence::inconclusive;
};

/// Evaluates the condition along a schedule. The verdict is a heuristic:
/// "downward" needs the last 10 values strictly decreasing and all below
/// -10 ("upward" mirrors it); anything else is inconclusive.
inline ConditionReport evaluate_condition_schedule(std::span<const ConditionPoint> schedule) {
  ConditionReport report;
  report.values.reserve(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& p = schedule[k];
    try {
      report.values.push_back(lower_bound_condition_value(p.n, p.bump_width, p.delta, p.kappa_sq,
                                                          p.sigma0_sq, p.delta_seq));
    } catch (const domain_error& e) {
      throw domain_error("schedule entry k=" + std::to_string(k) + ": " + e.what());
    }
  }
  constexpr std::size_t kTail = 10;
  const std::size_t count = std::min(kTail, report.values.size());
  if (count < 2) return report;
  const auto tail = std::span<const double>(report.values).last(count);
  report.tail_decreasing = report.tail_increasing = true;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    if (!(tail[i] < tail[i - 1])) report.tail_decreasing = false;
    if (!(tail[i] > tail[i - 1])) report.tail_increasing = false;
  }
  if (count == kTail) {
    if (report.tail_decreasing && tail.front() < -10.0) report.verdict = Divergence::downward;
    if (report.tail_increasing && tail.front() > 10.0) report.verdict = Divergence::upward;
  }
  return report;
}

}  // namespace hbr
