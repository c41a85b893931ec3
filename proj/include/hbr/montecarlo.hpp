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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "hbr/error.hpp"
#include "hbr/lr_tests.hpp"
#include "hbr/model.hpp"
#include "hbr/rng.hpp"

namespace hbr {

/// Runs f(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Work is handed out in contiguous chunks; callers must make
/// f(i) depend on i only, which makes results schedule-independent.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  constexpr std::size_t kChunk = 16;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const std::size_t start = next.fetch_add(kChunk);
        if (start >= count) return;
        const std::size_t stop = std::min(count, start + kChunk);
        for (std::size_t i = start; i < stop; ++i) f(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct NullHypothesis {};
struct FixedWindow {
  std::size_t window = 1;  // 1-based
};
struct UniformWindow {};

/// H0, or H1 with the bump on a fixed window or on a window drawn uniformly
/// per replication.
using Hypothesis = std::variant<NullHypothesis, FixedWindow, UniformWindow>;

struct McConfig {
  std::size_t replications = 10000;
  std::uint64_t seed = 0;
  TestKind test = TestKind::known;
  HbrParams params;
  Hypothesis hypothesis = UniformWindow{};

  void validate() const {
    if (replications < 1) throw parameter_error("replications must be at least 1");
    params.validate();
    if (const auto* fixed = std::get_if<FixedWindow>(&hypothesis)) {
      const std::size_t l = params.window_count();
      if (fixed->window < 1 || fixed->window > l) {
        throw parameter_error("H1 window " + std::to_string(fixed->window) + " outside 1.." +
                              std::to_string(l));
      }
    }
  }
};

/// Binomial proportion with its standard error sqrt(p(1-p)/R).
struct RateEstimate {
  double rate = 0.0;
  double std_err = 0.0;
  std::size_t rejections = 0;
  std::size_t replications = 0;
};

inline RateEstimate make_rate_estimate(std::size_t rejections, std::size_t replications) {
  const double r = static_cast<double>(replications);
  const double p = static_cast<double>(rejections) / r;
  return RateEstimate{p, std::sqrt(p * (1.0 - p) / r), rejections, replications};
}

/// Sample mean with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

inline MeanEstimate make_mean_estimate(std::span<const double> xs) {
  const double r = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / r;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (r - 1.0) : 0.0;
  return MeanEstimate{mean, std::sqrt(var / r)};
}

namespace detail {

// Data for one replication. Under UniformWindow the bump location is the
// first draw of the replication's stream.
inline std::vector<double> replicate_data(const HbrParams& params, const Hypothesis& hypothesis,
                                          RngStream& rng) {
  if (std::holds_alternative<NullHypothesis>(hypothesis)) {
    return generate_h0(params, rng).values;
  }
  std::size_t window = 0;
  if (const auto* fixed = std::get_if<FixedWindow>(&hypothesis)) {
    window = fixed->window;
  } else {
    window = 1 + static_cast<std::size_t>(rng.below(params.window_count()));
  }
  return generate_h1(params, window, rng).values;
}

}  // namespace detail

/// Fraction of replications rejected. Replication r of cell `cell_index`
/// draws from substream cell_index * R + r, so the estimate depends neither
/// on thread count nor on execution order.
inline RateEstimate estimate_rejection_rate(const McConfig& cfg, unsigned threads = 0,
                                            std::size_t cell_index = 0) {
  cfg.validate();
  const ScanTest test(cfg.test, cfg.params);
  std::vector<unsigned char> rejected(cfg.replications, 0);
  parallel_for(cfg.replications, threads, [&](std::size_t r) {
    RngStream rng(cfg.seed, cell_index * cfg.replications + r);
    const auto values = detail::replicate_data(cfg.params, cfg.hypothesis, rng);
    rejected[r] = test(values).reject ? 1 : 0;
  });
  std::size_t count = 0;
  for (auto v : rejected) count += v;
  return make_rate_estimate(count, cfg.replications);
}

/// Rejection rates over a (delta, kappa^2) lattice, delta-major.
struct PowerGrid {
  std::vector<double> delta_axis;
  std::vector<double> kappa_sq_axis;
  std::vector<RateEstimate> estimates;
  McConfig config;

  const RateEstimate& at(std::size_t delta_index, std::size_t kappa_index) const {
    return estimates.at(delta_index * kappa_sq_axis.size() + kappa_index);
  }
};

namespace detail {
inline void require_increasing_axis(std::span<const double> axis, std::string_view name) {
  if (axis.empty()) throw parameter_error(std::string(name) + " axis is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw parameter_error(std::string(name) + " axis must be strictly increasing");
    }
  }
}
}  // namespace detail

/// Power (or level) surface. Cell (i, j) uses delta_axis[i] with
/// sigman_sq = kappa_sq_axis[j] * sigma0_sq. Its cell index is i * K + j,
/// keyed into substreams exactly as in estimate_rejection_rate.
inline PowerGrid power_surface(const McConfig& tmpl, std::span<const double> delta_axis,
                               std::span<const double> kappa_sq_axis, unsigned threads = 0) {
  detail::require_increasing_axis(delta_axis, "delta");
  detail::require_increasing_axis(kappa_sq_axis, "kappa_sq");
  tmpl.validate();
  const std::size_t cells = delta_axis.size() * kappa_sq_axis.size();
  const std::size_t reps = tmpl.replications;

  std::vector<HbrParams> params;
  std::vector<ScanTest> tests;
  params.reserve(cells);
  tests.reserve(cells);
  for (double delta : delta_axis) {
    for (double kappa_sq : kappa_sq_axis) {
      HbrParams p = tmpl.params;
      p.delta = delta;
      p.sigman_sq = kappa_sq * p.sigma0_sq;
      params.push_back(p);
      tests.emplace_back(tmpl.test, p);
    }
  }

  std::vector<unsigned char> rejected(cells * reps, 0);
  parallel_for(cells * reps, threads, [&](std::size_t job) {
    const std::size_t cell = job / reps;
    RngStream rng(tmpl.seed, job);  // job == cell * reps + replication
    const auto values = detail::replicate_data(params[cell], tmpl.hypothesis, rng);
    rejected[job] = tests[cell](values).reject ? 1 : 0;
  });

  PowerGrid grid{std::vector<double>(delta_axis.begin(), delta_axis.end()),
                 std::vector<double>(kappa_sq_axis.begin(), kappa_sq_axis.end()),
                 {},
                 tmpl};
  grid.estimates.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < reps; ++r) count += rejected[cell * reps + r];
    grid.estimates.push_back(make_rate_estimate(count, reps));
  }
  return grid;
}

/// Monte Carlo estimate under H0 of E| (1/l) sum_windows L(window) - 1 |,
/// the quantity bounding the excess power 1 - beta - alpha of any level-alpha
/// test. Window likelihoods are combined in log space.
inline MeanEstimate mixture_discrepancy(const HbrParams& params, std::size_t replications,
                                        std::uint64_t seed, unsigned threads = 0) {
  params.validate();
  if (!(params.kappa_sq() > 0.0)) throw parameter_error("mixture_discrepancy needs kappa_sq > 0");
  if (replications < 1) throw parameter_error("replications must be at least 1");
  const WindowGrid grid = candidate_windows(params.n, params.bump_width);
  const double log_l = std::log(static_cast<double>(grid.size()));
  std::vector<double> deviations(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    RngStream rng(seed, r);
    const auto data = generate_h0(params, rng).values;
    std::vector<double> logs;
    logs.reserve(grid.size());
    for (const Window& w : grid) {
      logs.push_back(log_likelihood_ratio(data, w, params.delta, params.kappa_sq(),
                                          params.sigma0_sq));
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - top);
    const double log_mean = top + std::log(acc) - log_l;
    deviations[r] = std::abs(std::expm1(log_mean));
  });
  return make_mean_estimate(deviations);
}

/// The three sample-size designs of the power study; each keeps
/// n|I| / log(1/|I|) roughly constant.
struct Preset {
  std::string_view name;
  std::size_t n;
  double bump_width;
};

inline constexpr Preset kPresets[] = {
    {"small", 829, 0.1},
    {"medium", 2157, 0.05},
    {"large", 5312, 0.025},
};

inline const Preset& preset_by_name(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p;
  }
  throw parameter_error("unknown preset '" + std::string(name) + "'");
}

/// {k * step : k = first..last}, computed as k / (1/step) so grid points such
/// as 0.2 come out as the nearest doubles.
inline std::vector<double> lattice_axis(int first, int last, int denominator) {
  if (denominator <= 0 || last < first) throw parameter_error("invalid lattice axis");
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(last - first + 1));
  for (int k = first; k <= last; ++k) axis.push_back(static_cast<double>(k) / denominator);
  return axis;
}

/// Delta in {0.01, ..., 0.7} and kappa^2 in {0.01, ..., 1.2}.
inline std::vector<double> study_delta_axis() { return lattice_axis(1, 70, 100); }
inline std::vector<double> study_kappa_sq_axis() { return lattice_axis(1, 120, 100); }

}  // namespace hbr
