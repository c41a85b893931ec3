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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbr/error.hpp"
#include "hbr/rng.hpp"

// Deviation bounds for Z = sum_i b_i X_i with independent
// X_i ~ chi^2_{d_i}(a_i^2). Also home to the closed-form H0 moments of the
// single-window likelihood ratio.
namespace hbr {

struct ChiSquaredTerm {
  double weight = 1.0;          // b_i >= 0
  unsigned dof = 1;             // d_i >= 1
  double noncentrality = 0.0;   // a_i^2 >= 0
};

class DeviationSpec {
 public:
  explicit DeviationSpec(std::vector<ChiSquaredTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw parameter_error("DeviationSpec needs at least one term");
    for (const auto& t : terms_) {
      if (!(std::isfinite(t.weight) && t.weight >= 0.0)) {
        throw parameter_error("chi-squared weight must be finite and nonnegative");
      }
      if (t.dof < 1) throw parameter_error("chi-squared dof must be positive");
      if (!(std::isfinite(t.noncentrality) && t.noncentrality >= 0.0)) {
        throw parameter_error("noncentrality must be finite and nonnegative");
      }
    }
  }

  const std::vector<ChiSquaredTerm>& terms() const noexcept { return terms_; }

  double mean() const noexcept {
    double m = 0.0;
    for (const auto& t : terms_) m += t.weight * (t.dof + t.noncentrality);
    return m;
  }
  double variance() const noexcept {
    double v = 0.0;
    for (const auto& t : terms_) v += t.weight * t.weight * (t.dof + 2.0 * t.noncentrality);
    return 2.0 * v;
  }
  double max_weight() const noexcept {
    double b = 0.0;
    for (const auto& t : terms_) b = std::max(b, t.weight);
    return b;
  }
  bool central() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const ChiSquaredTerm& t) { return t.noncentrality == 0.0; });
  }

 private:
  std::vector<ChiSquaredTerm> terms_;
};

namespace detail {
inline void require_positive_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw domain_error("deviation level x must be positive and finite");
  }
}
}  // namespace detail

/// E[Z] - sqrt(2 Var[Z] x); P(Z <= threshold) <= exp(-x).
inline double tail_lower_threshold(const DeviationSpec& spec, double x) {
  detail::require_positive_x(x);
  return spec.mean() - std::sqrt(2.0 * spec.variance() * x);
}

/// E[Z] + sqrt(2 Var[Z] x) + 2 |b|_inf x; P(Z > threshold) <= exp(-x).
inline double tail_upper_threshold(const DeviationSpec& spec, double x) {
  detail::require_positive_x(x);
  return spec.mean() + std::sqrt(2.0 * spec.variance() * x) + 2.0 * spec.max_weight() * x;
}

/// Upper-tail thresholds of competing deviation inequalities, all on the Z
/// scale. The Hsu et al. and Spokoiny-Zhilova bounds only cover the central
/// case and are absent for non-central specs.
struct ComparisonBounds {
  double upper = 0.0;          // tail_upper_threshold
  double rohde_dumbgen = 0.0;
  double ben_tal = 0.0;
  std::optional<double> hsu;
  std::optional<double> spokoiny_zhilova;
  bool central_only_omitted = false;

  std::map<std::string, double> as_map() const {
    std::map<std::string, double> m{
        {"upper", upper}, {"rohde_dumbgen", rohde_dumbgen}, {"ben_tal", ben_tal}};
    if (hsu) m.emplace("hsu", *hsu);
    if (spokoiny_zhilova) m.emplace("spokoiny_zhilova", *spokoiny_zhilova);
    return m;
  }
};

inline ComparisonBounds comparison_bounds(const DeviationSpec& spec, double x) {
  detail::require_positive_x(x);
  const double mean = spec.mean();
  const double var = spec.variance();
  const double b_inf = spec.max_weight();

  ComparisonBounds out;
  out.upper = tail_upper_threshold(spec, x);
  out.rohde_dumbgen =
      mean + std::sqrt(2.0 * var * x + 4.0 * b_inf * b_inf * x * x) + 2.0 * b_inf * x;

  double quad = 0.0;  // sum b_i^2 (d_i + a_i^2)
  double trace_b4 = 0.0;  // sum b_i^2 d_i
  for (const auto& t : spec.terms()) {
    quad += t.weight * t.weight * (t.dof + t.noncentrality);
    trace_b4 += t.weight * t.weight * t.dof;
  }
  out.ben_tal = mean + 2.0 * std::sqrt(2.0 * quad * x + b_inf * b_inf * x * x) + 2.0 * b_inf * x;

  if (spec.central()) {
    out.hsu = mean + 2.0 * std::sqrt(trace_b4 * x) + 2.0 * b_inf * x;
    out.spokoiny_zhilova =
        mean + std::max(2.0 * std::sqrt(2.0 * trace_b4 * x), 6.0 * b_inf * x);
  } else {
    out.central_only_omitted = true;
  }
  return out;
}

/// E[exp(t (X + lambda)^2)] for X ~ N(0,1), defined for t < 1/2.
inline double noncentral_chi2_laplace(double t, double lambda) {
  if (!(t < 0.5)) throw domain_error("Laplace transform requires t < 1/2");
  const double one_minus_2t = 1.0 - 2.0 * t;
  return std::exp(lambda * lambda * t / one_minus_2t - 0.5 * std::log1p(-2.0 * t));
}

/// Parameters of E_{H0}[L^eta] for the likelihood ratio of one window.
struct LrMomentParams {
  double eta = 1.0;
  double n_window = 1.0;  // points in the window, n|I|
  double delta = 0.0;
  double kappa_sq = 0.0;
  double sigma0_sq = 1.0;
};

/// log E_{H0}[L^eta]. Throws existence_error when eta >= 1 + 1/kappa^2.
inline double log_lr_moment_h0(const LrMomentParams& p) {
  if (!(p.n_window > 0.0)) throw parameter_error("n_window must be positive");
  if (!(p.kappa_sq >= 0.0) || !std::isfinite(p.kappa_sq)) {
    throw parameter_error("kappa_sq must be finite and nonnegative");
  }
  if (!(p.sigma0_sq > 0.0)) throw parameter_error("sigma0_sq must be positive");
  // 1 + (1 - eta) kappa^2 > 0  <=>  eta < 1 + 1/kappa^2
  const double shrink = (1.0 - p.eta) * p.kappa_sq;
  if (!(shrink > -1.0)) {
    throw existence_error("E[L^eta] does not exist for eta >= 1 + 1/kappa^2");
  }
  const double m = p.n_window;
  return -(p.eta - 1.0) * 0.5 * m * std::log1p(p.kappa_sq) - 0.5 * m * std::log1p(shrink) +
         p.eta * (p.eta - 1.0) * m * p.delta * p.delta / (2.0 * p.sigma0_sq * (1.0 + shrink));
}

inline double lr_moment_h0(const LrMomentParams& p) { return std::exp(log_lr_moment_h0(p)); }

/// One draw of Z = sum_i b_i X_i, each X_i assembled from d_i Gaussians with
/// the whole noncentrality on the first coordinate.
template <GaussianSource G>
double sample_weighted_noncentral_chi2(const DeviationSpec& spec, G& rng) {
  double z = 0.0;
  for (const auto& t : spec.terms()) {
    const double shift = std::sqrt(t.noncentrality);
    double x = 0.0;
    for (unsigned j = 0; j < t.dof; ++j) {
      const double g = rng.gaussian() + (j == 0 ? shift : 0.0);
      x += g * g;
    }
    z += t.weight * x;
  }
  return z;
}

}  // namespace hbr
