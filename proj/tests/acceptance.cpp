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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Monte Carlo sizes and tolerances are the pinned ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hbr/hbr.hpp"
#include "oracles.hpp"

namespace {

unsigned env_threads() {
  if (const char* s = std::getenv("HBR_THREADS")) return static_cast<unsigned>(std::strtoul(s, nullptr, 10));
  return 0;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Criterion 1: exemplary power at the medium design.
Verdict exemplary_power() {
  const auto& medium = hbr::preset_by_name("medium");
  hbr::McConfig cfg{.replications = 10000,
                    .seed = 2016,
                    .test = hbr::TestKind::known,
                    .params = {medium.n, medium.bump_width, 0.2, 1.0, 0.5, 0.05},
                    .hypothesis = hbr::FixedWindow{11}};
  const auto known = hbr::estimate_rejection_rate(cfg, env_threads());
  cfg.test = hbr::TestKind::homogeneous;
  cfg.params.sigman_sq = 0.0;
  const auto homog = hbr::estimate_rejection_rate(cfg, env_threads());
  const bool ok = std::abs(known.rate - 0.471) <= 0.02 && std::abs(homog.rate - 0.225) <= 0.02;
  return {ok, fmt("known %.4f (se %.4f, target 0.471 +- 0.02); homogeneous %.4f (se %.4f, target 0.225 +- 0.02)",
                  known.rate, known.std_err, homog.rate, homog.std_err)};
}

// Criterion 2: level under H0 for every preset and test.
Verdict level() {
  const double cap = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 1e4);
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (const auto& preset : hbr::kPresets) {
    for (auto kind : {hbr::TestKind::known, hbr::TestKind::adaptive, hbr::TestKind::homogeneous}) {
      const hbr::McConfig cfg{.replications = 10000,
                              .seed = 7,
                              .test = kind,
                              .params = {preset.n, preset.bump_width, 0.2, 1.0, 0.5, 0.05},
                              .hypothesis = hbr::NullHypothesis{}};
      const auto e = hbr::estimate_rejection_rate(cfg, env_threads());
      worst = std::max(worst, e.rate);
      if (e.rate > cap) {
        ok = false;
        detail += fmt(" %s/%s=%.4f", std::string(preset.name).c_str(), hbr::to_string(kind), e.rate);
      }
    }
  }
  return {ok, fmt("max level %.4f over 9 cells (cap %.4f)", worst, cap) + detail};
}

// Criterion 3: two-sided tail thresholds against Monte Carlo and against Rohde-Dumbgen.
Verdict deviation_suite() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::uniform_real_distribution<double> nc(0.0, 3.0);
  const std::vector<double> xs{0.5, 1.0, 2.0, 4.0};
  constexpr std::size_t draws = 1000000;
  bool ok = true;
  double worst_excess = -1.0;
  int algebraic_failures = 0;
  for (int s = 0; s < 20; ++s) {
    std::vector<hbr::ChiSquaredTerm> terms;
    const int k = 1 + s % 3;
    for (int i = 0; i < k; ++i) {
      terms.push_back({weight(gen), static_cast<unsigned>(1 + gen() % 5), (s / 3) % 2 == 0 ? 0.0 : nc(gen)});
    }
    const hbr::DeviationSpec spec(terms);
    std::vector<double> upper;
    std::vector<double> lower;
    for (double x : xs) {
      const auto b = hbr::comparison_bounds(spec, x);
      if (!(b.upper <= b.rohde_dumbgen)) ++algebraic_failures;
      upper.push_back(b.upper);
      lower.push_back(hbr::tail_lower_threshold(spec, x));
    }
    std::vector<std::size_t> above(xs.size(), 0);
    std::vector<std::size_t> below(xs.size(), 0);
    hbr::RngStream rng(404, static_cast<std::uint64_t>(s));
    for (std::size_t d = 0; d < draws; ++d) {
      const double z = hbr::sample_weighted_noncentral_chi2(spec, rng);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        above[j] += z > upper[j];
        below[j] += z <= lower[j];
      }
    }
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (std::size_t count : {above[j], below[j]}) {
        const auto e = hbr::make_rate_estimate(count, draws);
        const double excess = e.rate - std::exp(-xs[j]) - 3.0 * e.std_err;
        worst_excess = std::max(worst_excess, excess);
        if (excess > 0.0) ok = false;
      }
    }
  }
  ok = ok && algebraic_failures == 0;
  return {ok, fmt("20 specs x 4 levels, worst (tail - exp(-x) - 3se) = %.2e; upper > RD at %d points",
                  worst_excess, algebraic_failures)};
}

// Criterion 4: E[L^eta] under H0 against the closed form.
Verdict moment_oracle() {
  const hbr::Window w{1, 0, 20};
  const hbr::LrMomentParams base{.n_window = 20, .delta = 0.3, .kappa_sq = 0.25, .sigma0_sq = 1.0};
  const std::vector<double> etas{0.5, 1.0, 1.2};
  constexpr std::size_t reps = 1000000;
  std::vector<std::vector<double>> powers(etas.size(), std::vector<double>(reps));
  std::vector<double> y(20);
  hbr::RngStream rng(777, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    for (auto& v : y) v = rng.gaussian();
    const double log_l = hbr::log_likelihood_ratio(y, w, base.delta, base.kappa_sq, base.sigma0_sq);
    for (std::size_t j = 0; j < etas.size(); ++j) powers[j][r] = std::exp(etas[j] * log_l);
  }
  bool ok = true;
  std::string detail;
  for (std::size_t j = 0; j < etas.size(); ++j) {
    auto p = base;
    p.eta = etas[j];
    const double exact = hbr::lr_moment_h0(p);
    const auto m = hbr::make_mean_estimate(powers[j]);
    const double z = (m.mean - exact) / m.std_err;
    if (std::abs(z) > 3.0) ok = false;
    detail += fmt("eta=%.1f: mc %.5f vs %.5f (z %.2f); ", etas[j], m.mean, exact, z);
  }
  return {ok, detail};
}

// Criterion 5: closed-form constant identities.
Verdict constant_identities() {
  using hbr::Side;
  const double s2 = std::numbers::sqrt2;
  const double s3 = std::sqrt(3.0);
  bool ok = true;
  std::string detail;
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += " " + what;
    }
  };
  check(std::abs(hbr::price_of_adaptation(s2) - s2) <= 1e-12, "r(sqrt2)");
  check(std::abs(hbr::price_of_adaptation(0.0) - 1.0) <= 1e-12, "r(0)");
  check(std::abs(hbr::price_of_adaptation(1e6) - (1.0 + s3) / 2.0) <= 1e-5, "r(1e6)");
  for (double sigma0 : {1.0, 0.7, 2.5}) {
    const double er = hbr::boundary_constant(hbr::classify_regime(1.0), sigma0, Side::lower, false).constant;
    check(std::abs(er - std::sqrt(4.0 / 3.0) * sigma0) <= 1e-12 * sigma0, "ER(c=1)");
  }
  check(hbr::sample_size_reduction(1.0) == 1.0 / 3.0, "reduction(1)");
  check(hbr::sample_size_reduction(2.0) == 2.0 / 3.0, "reduction(2)");
  for (double c : {0.0, 0.5, 1.0, s2, 3.0, std::numeric_limits<double>::infinity()}) {
    const auto reg = hbr::classify_regime(c);
    check(hbr::boundary_constant(reg, 1.0, Side::lower, false).constant ==
              hbr::boundary_constant(reg, 1.0, Side::upper, false).constant,
          "upper==lower");
  }
  return {ok, ok ? "r(sqrt2), r(0), r(1e6), ER(c=1), reductions, upper==lower all hold" : "failed:" + detail};
}

// Criterion 6: relaxed constants reduce to vanishing-variance constants.
Verdict taylor_reductions() {
  using hbr::RelaxedBound;
  const auto er_target = [](double c) {
    return hbr::boundary_constant(hbr::classify_regime(c), 1.0, hbr::Side::lower, false).constant;
  };
  // each entry maps kappa to the relative error of the reduced constant
  std::vector<std::pair<std::string, std::function<double(double)>>> cases;
  for (double c : {0.5, 1.0, 2.0}) {
    cases.emplace_back(fmt("ER-lower(c=%.1f)", c), [=](double k) {
      return hbr::relaxed_constant(RelaxedBound::er_lower, c, k) * k * k / c / er_target(c) - 1.0;
    });
    cases.emplace_back(fmt("ER-upper(c=%.1f)", c), [=](double k) {
      return hbr::relaxed_constant(RelaxedBound::er_upper, c, k) * k * k / c / er_target(c) - 1.0;
    });
  }
  cases.emplace_back("DVR-lower", [](double k) {
    return hbr::relaxed_constant(RelaxedBound::dvr_lower, 0.0, k) * k * k / 2.0 - 1.0;
  });
  cases.emplace_back("DVR-upper", [](double k) {
    return hbr::relaxed_constant(RelaxedBound::dvr_upper, 0.0, k) * k * k / 2.0 - 1.0;
  });
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (const auto& [name, err] : cases) {
    const double e1 = std::abs(err(1e-3));
    const double e2 = std::abs(err(5e-4));
    worst = std::max(worst, e1);
    // first-order O(kappa^2): halving kappa divides the error by about 4
    const double ratio = e1 / e2;
    const bool quadratic = ratio > 3.5 && ratio < 4.5;
    if (!(e1 < 1e-4) || !quadratic) {
      ok = false;
      detail += fmt(" %s(err %.2e ratio %.2f)", name.c_str(), e1, ratio);
    }
  }
  return {ok, fmt("%zu relaxed constants, worst relative error %.2e at kappa=1e-3", cases.size(), worst) + detail};
}

// Criterion 7: known-test power along n = 2^k * 32 at fixed |I| = 1/32.
Verdict sharpness() {
  const double w = 1.0 / 32.0;
  const double dmr = std::numbers::sqrt2;
  constexpr std::size_t reps = 1000;
  auto curve = [&](double factor) {
    std::vector<hbr::RateEstimate> out;
    for (int k = 0; k <= 10; ++k) {
      const std::size_t n = std::size_t{32} << k;
      const double delta = factor * hbr::boundary_scale(dmr, static_cast<double>(n), w);
      // dominant-mean scaling: kappa^2 = delta^2 / sigma0, so kappa^2 / delta -> 0
      const hbr::McConfig cfg{.replications = reps,
                              .seed = 1000 + static_cast<std::uint64_t>(k),
                              .test = hbr::TestKind::known,
                              .params = {n, w, delta, 1.0, delta * delta, 0.05}};
      out.push_back(hbr::estimate_rejection_rate(cfg, env_threads()));
    }
    return out;
  };
  const auto hi = curve(1.2);
  const auto lo = curve(0.8);
  bool monotone = true;
  for (std::size_t i = 1; i < hi.size(); ++i) {
    // nondecreasing up to Monte Carlo noise of the two neighbouring points
    if (hi[i].rate < hi[i - 1].rate - 3.0 * std::hypot(hi[i].std_err, hi[i - 1].std_err)) monotone = false;
  }
  const bool reaches = hi.back().rate > 0.9;
  bool stays_low = true;
  for (const auto& e : lo) stays_low = stays_low && e.rate < 0.5;
  std::string hi_s;
  std::string lo_s;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    hi_s += fmt("%s%.3f", i ? "," : "", hi[i].rate);
    lo_s += fmt("%s%.3f", i ? "," : "", lo[i].rate);
  }
  return {monotone && reaches && stays_low,
          fmt("1.2x power k=0..10 [%s] (monotone %s, final > 0.9 %s); 0.8x [%s] (all < 0.5 %s)", hi_s.c_str(),
              monotone ? "yes" : "no", reaches ? "yes" : "no", lo_s.c_str(), stays_low ? "yes" : "no")};
}

// Criterion 8: null distributions of the per-window statistics, m = 50.
Verdict distributional() {
  const hbr::HbrParams p{.n = 200, .bump_width = 0.25, .delta = 0.2, .sigma0_sq = 1.0, .sigman_sq = 0.5};
  const auto grid = hbr::candidate_windows(p.n, p.bump_width);
  const double ka = 1.0;
  const double kb = 3.0;
  const double wa = ka / (ka + 1.0);
  const double wb = kb / (kb + 1.0);
  constexpr std::size_t reps = 100000;
  std::vector<double> known(reps);
  std::vector<double> spread(reps);
  std::vector<double> mean_term(reps);
  hbr::parallel_for(reps, env_threads(), [&](std::size_t r) {
    hbr::RngStream rng(8080, r);
    const auto y = hbr::generate_h0(p, rng).values;
    known[r] = hbr::statistic_known(y, grid, p.delta, p.kappa_sq(), p.sigma0_sq).per_window_values[0];
    const double va = hbr::statistic_adaptive(y, grid, ka, p.sigma0_sq).per_window_values[0];
    const double vb = hbr::statistic_adaptive(y, grid, kb, p.sigma0_sq).per_window_values[0];
    spread[r] = (vb - va) / (wb - wa);
    mean_term[r] = va - wa * spread[r];
  });
  const double m = 50.0;
  const double nc = m * p.delta * p.delta / (p.kappa_sq() * p.kappa_sq());
  struct Target {
    const char* name;
    const std::vector<double>* xs;
    double mean;
    double var;
  };
  const Target targets[] = {{"known", &known, m + nc, 2.0 * (m + 2.0 * nc)},
                            {"spread", &spread, m - 1.0, 2.0 * (m - 1.0)},
                            {"mean", &mean_term, 1.0, 2.0}};
  bool ok = true;
  std::string detail;
  for (const auto& t : targets) {
    const auto mom = hbr::oracle::sample_moments(*t.xs);
    const double zm = (mom.mean - t.mean) / mom.mean_se;
    const double zv = (mom.variance - t.var) / mom.variance_se;
    if (std::abs(zm) > 4.0 || std::abs(zv) > 4.0) ok = false;
    detail += fmt("%s mean z %.2f var z %.2f; ", t.name, zm, zv);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "exemplary power reproduction", exemplary_power},
      {2, "non-asymptotic level", level},
      {3, "deviation-inequality suite", deviation_suite},
      {4, "likelihood-ratio moment oracle", moment_oracle},
      {5, "constant identities", constant_identities},
      {6, "Taylor reductions", taylor_reductions},
      {7, "boundary sharpness", sharpness},
      {8, "distributional checks", distributional},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    if (!v.pass) ++failures;
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                dt.count());
    std::fflush(stdout);
  }
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
