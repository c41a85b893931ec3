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

// hbr: command-line front end to the library.
//
//   hbr simulate  --n 512 --bump-width 0.25 --delta 4 --sigman-sq 4 --window 2 -o data.csv
//   hbr detect    --input data.csv --bump-width 0.25 --test known --delta 4 --kappa-sq 4
//   hbr power     --preset medium --delta-axis 0.2 --kappa-sq-axis 0.5 -o power.csv
//   hbr boundary  --c 1
//   hbr tails     --weights 1,0.5 --dofs 3,2 --x-grid 0.5,1,2,4
//   hbr condition --dmr-factor 0.9 --k-range 10:20
//
// Exit codes: 0 success (detect: accept), 1 detect rejected, 2 any error.

#include <json.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hbr/hbr.hpp"
#include "hbr/io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

struct usage_error : hbr::error {
  using hbr::error::error;
};

/// Reads a JSON object into CLI11 config items. Nested objects become
/// subcommand sections; arrays become repeated inputs.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return dump_app(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json root;
    try {
      input >> root;
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw CLI::ConversionError("config", "top level must be an object");
    std::vector<CLI::ConfigItem> found;
    collect(root, {}, found);
    return found;
  }

 private:
  static std::string normalize(std::string key) {
    for (auto& ch : key) {
      if (ch == '_') ch = '-';
    }
    return key;
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& node, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_null()) continue;
      if (value.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        collect(value, deeper, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = normalize(key);
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }

  static json dump_app(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json s = dump_app(sub, default_also);
      if (!s.empty()) j[sub->get_name()] = std::move(s);
    }
    return j;
  }
};

double parse_double(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw usage_error(what + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

// Values listed directly, or start:stop:step ranges (inclusive). Range
// points are rounded to 12 decimals so 0.01:0.7:0.01 hits 0.2 exactly.
std::vector<double> parse_axis(const std::vector<std::string>& tokens, const std::string& what) {
  std::vector<double> axis;
  for (const auto& tok : tokens) {
    const auto c1 = tok.find(':');
    if (c1 == std::string::npos) {
      axis.push_back(parse_double(tok, what));
      continue;
    }
    const auto c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos) throw usage_error(what + ": range must be start:stop:step");
    const double start = parse_double(tok.substr(0, c1), what);
    const double stop = parse_double(tok.substr(c1 + 1, c2 - c1 - 1), what);
    const double step = parse_double(tok.substr(c2 + 1), what);
    if (!(step > 0.0) || !(stop >= start)) throw usage_error(what + ": empty or reversed range");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw usage_error(what + ": range too long");
    for (long k = 0; k < count; ++k) {
      axis.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
  }
  if (axis.empty()) throw usage_error(what + ": no values given");
  return axis;
}

template <typename F>
void with_output(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw usage_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw usage_error("failed writing '" + path + "'");
}

void write_sidecar(const std::string& output, const json& j) {
  if (output.empty() || output == "-") return;
  with_output(output + ".json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

hbr::TestKind parse_test(const std::string& name) {
  if (name == "known") return hbr::TestKind::known;
  if (name == "adaptive") return hbr::TestKind::adaptive;
  if (name == "homogeneous") return hbr::TestKind::homogeneous;
  throw usage_error("unknown test '" + name + "'");
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::size_t n = 0;
  double bump_width = 0.0;
  double delta = 0.0;
  double sigma0_sq = 1.0;
  double sigman_sq = 0.0;
  std::uint64_t seed = 0;
  std::size_t window = 0;
  bool h0 = false;
  std::string output = "-";
};

int run_simulate(const SimulateArgs& a) {
  const hbr::HbrParams p{a.n, a.bump_width, a.delta, a.sigma0_sq, a.sigman_sq};
  p.validate();
  hbr::RngStream rng(a.seed, 0);
  hbr::Observations obs;
  if (a.h0) {
    obs = hbr::generate_h0(p, rng);
  } else {
    const std::size_t window = a.window > 0 ? a.window : 1 + rng.below(p.window_count());
    obs = hbr::generate_h1(p, window, rng);
  }
  with_output(a.output, [&](std::ostream& os) { hbr::write_observations_csv(os, obs.values); });

  json side{{"params", hbr::to_json(p)}, {"seed", a.seed}, {"hypothesis", a.h0 ? "H0" : "H1"}};
  if (obs.true_window) {
    const auto grid = hbr::candidate_windows(p.n, p.bump_width);
    const auto& w = grid.window(*obs.true_window);
    side["true_window"] = *obs.true_window;
    side["true_window_rows"] = {w.begin + 1, w.end};
  }
  write_sidecar(a.output, side);
  return kExitAccept;
}

// ---- detect ----------------------------------------------------------------

struct DetectArgs {
  std::string input;
  std::string test = "known";
  double bump_width = 0.0;
  std::optional<double> delta;
  std::optional<double> kappa_sq;
  double sigma0_sq = 1.0;
  double alpha = 0.05;
  std::string output = "-";
};

int run_detect(const DetectArgs& a) {
  const auto kind = parse_test(a.test);
  if (kind != hbr::TestKind::homogeneous && !a.kappa_sq) {
    throw usage_error(std::string("--test ") + a.test + " requires --kappa-sq");
  }
  if (kind == hbr::TestKind::known && !a.delta) throw usage_error("--test known requires --delta");

  std::vector<double> values;
  if (a.input == "-") {
    values = hbr::read_observations_csv(std::cin);
  } else {
    std::ifstream in(a.input);
    if (!in) throw usage_error("cannot open '" + a.input + "'");
    values = hbr::read_observations_csv(in);
  }

  hbr::HbrParams p{values.size(), a.bump_width, a.delta.value_or(0.0), a.sigma0_sq,
                   a.kappa_sq.value_or(0.0) * a.sigma0_sq, a.alpha};
  p.validate();
  const auto grid = hbr::candidate_windows(p.n, p.bump_width);
  hbr::TestOutcome out;
  switch (kind) {
    case hbr::TestKind::known: out = hbr::test_known(values, grid, p); break;
    case hbr::TestKind::adaptive: out = hbr::test_adaptive(values, grid, p); break;
    case hbr::TestKind::homogeneous:
      out = hbr::test_homogeneous(values, grid, p.sigma0_sq, p.alpha);
      break;
  }
  json j = hbr::to_json(out);
  j["test"] = hbr::to_string(kind);
  j["params"] = hbr::to_json(p);
  with_output(a.output, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  std::cerr << (out.reject ? "reject" : "accept") << ": statistic " << out.statistic
            << " vs threshold " << out.threshold << " (window " << out.argmax_window << ")\n";
  return out.reject ? kExitReject : kExitAccept;
}

// ---- power -----------------------------------------------------------------

struct PowerArgs {
  std::string preset = "medium";
  std::optional<std::size_t> n;
  std::optional<double> bump_width;
  std::string test = "known";
  std::vector<std::string> delta_axis;
  std::vector<std::string> kappa_sq_axis;
  std::size_t replications = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  double sigma0_sq = 1.0;
  std::size_t window = 0;
  bool h0 = false;
  unsigned threads = 0;
  std::string output = "-";
};

int run_power(const PowerArgs& a) {
  const auto& preset = hbr::preset_by_name(a.preset);
  hbr::McConfig tmpl;
  tmpl.replications = a.replications;
  tmpl.seed = a.seed;
  tmpl.test = parse_test(a.test);
  tmpl.params = hbr::HbrParams{a.n.value_or(preset.n), a.bump_width.value_or(preset.bump_width),
                               0.0, a.sigma0_sq, 0.0, a.alpha};
  if (a.h0) {
    tmpl.hypothesis = hbr::NullHypothesis{};
  } else if (a.window > 0) {
    tmpl.hypothesis = hbr::FixedWindow{a.window};
  }
  const auto deltas = a.delta_axis.empty() ? hbr::study_delta_axis()
                                           : parse_axis(a.delta_axis, "--delta-axis");
  const auto kappas = a.kappa_sq_axis.empty() ? hbr::study_kappa_sq_axis()
                                              : parse_axis(a.kappa_sq_axis, "--kappa-sq-axis");
  if (tmpl.test != hbr::TestKind::homogeneous && kappas.front() <= 0.0) {
    throw usage_error("kappa_sq axis must be positive for the known and adaptive tests");
  }

  std::cerr << "power: " << deltas.size() * kappas.size() << " cells x " << a.replications
            << " replications\n";
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = hbr::power_surface(tmpl, deltas, kappas, a.threads);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  std::cerr << "power: done in " << elapsed.count() << " s\n";

  with_output(a.output, [&](std::ostream& os) { hbr::write_power_grid_csv(os, grid); });
  json config = hbr::to_json(tmpl);
  for (const char* swept : {"delta", "sigman_sq", "kappa_sq"}) config["params"].erase(swept);
  json side{{"config", config},
            {"preset", a.preset},
            {"delta_axis", deltas},
            {"kappa_sq_axis", kappas}};
  write_sidecar(a.output, side);
  return kExitAccept;
}

// ---- boundary --------------------------------------------------------------

struct BoundaryArgs {
  std::string c;
  double sigma0 = 1.0;
  std::string side = "both";
  bool adaptive = false;
  std::string rate;
  std::string relaxed;
  std::optional<double> kappa;
  bool price_curve = false;
  double c_max = 10.0;
  std::size_t points = 1001;
  std::string output = "-";
};

hbr::RelaxedBound parse_relaxed(const std::string& name) {
  for (auto b : {hbr::RelaxedBound::er_lower, hbr::RelaxedBound::dvr_lower,
                 hbr::RelaxedBound::er_upper, hbr::RelaxedBound::dvr_upper}) {
    if (name == hbr::to_string(b)) return b;
  }
  throw usage_error("unknown relaxed bound '" + name + "' (ER-lower, DVR-lower, ER-upper, DVR-upper)");
}

int run_price_curve(const BoundaryArgs& a) {
  if (!(a.c_max > 0.0) || a.points < 2) throw usage_error("--c-max must be positive, --points >= 2");
  std::vector<double> cs;
  for (std::size_t k = 0; k < a.points; ++k) {
    cs.push_back(a.c_max * static_cast<double>(k) / static_cast<double>(a.points - 1));
  }
  if (std::numbers::sqrt2 < a.c_max) {
    cs.insert(std::upper_bound(cs.begin(), cs.end(), std::numbers::sqrt2), std::numbers::sqrt2);
  }
  with_output(a.output, [&](std::ostream& os) {
    os << "c,r\n";
    for (double c : cs) {
      os << hbr::format_double(c) << ',' << hbr::format_double(hbr::price_of_adaptation(c)) << '\n';
    }
    os << "inf," << hbr::format_double(hbr::price_of_adaptation(std::numeric_limits<double>::infinity()))
       << '\n';
  });
  return kExitAccept;
}

int run_boundary(const BoundaryArgs& a) {
  if (a.price_curve) return run_price_curve(a);
  if (a.c.empty()) throw usage_error("boundary needs --c (or --price-curve)");
  const auto regime = hbr::classify_regime(parse_double(a.c, "--c"));

  std::optional<hbr::Rate> rate;
  if (a.rate == "mean") rate = hbr::Rate::mean;
  else if (a.rate == "variance") rate = hbr::Rate::variance;
  else if (!a.rate.empty()) throw usage_error("--rate must be mean or variance");

  std::vector<hbr::Side> sides;
  if (a.side == "lower" || a.side == "both") sides.push_back(hbr::Side::lower);
  if (a.side == "upper" || a.side == "both") sides.push_back(hbr::Side::upper);
  if (sides.empty()) throw usage_error("--side must be lower, upper or both");

  // An explicit --adaptive asks for exactly that row, so unsupported
  // combinations are errors. Without it we list what exists.
  json rows = json::array();
  for (auto side : sides) {
    for (bool adaptive : {false, true}) {
      if (a.adaptive && !adaptive) continue;
      try {
        rows.push_back(hbr::to_json(hbr::boundary_constant(regime, a.sigma0, side, adaptive, rate), regime));
      } catch (const hbr::unsupported_error&) {
        if (a.adaptive) throw;
      }
    }
  }
  json j{{"regime", hbr::to_string(regime.kind)},
         {"constants", rows},
         {"price_of_adaptation", hbr::price_of_adaptation(regime.c)},
         {"sample_size_reduction", hbr::sample_size_reduction(regime.c)}};
  j["c"] = std::isinf(regime.c) ? json("inf") : json(regime.c);
  if (!a.relaxed.empty()) {
    if (!a.kappa) throw usage_error("--relaxed needs --kappa");
    const auto which = parse_relaxed(a.relaxed);
    j["relaxed"] = {{"bound", hbr::to_string(which)},
                    {"kappa", *a.kappa},
                    {"constant", hbr::relaxed_constant(which, regime.c, *a.kappa)}};
  }
  with_output(a.output, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitAccept;
}

// ---- tails -----------------------------------------------------------------

struct TailsArgs {
  std::vector<double> weights;
  std::vector<unsigned> dofs;
  std::vector<double> noncentralities;
  std::vector<std::string> x_grid{"0.5", "1", "2", "4"};
  std::size_t draws = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output = "-";
};

int run_tails(const TailsArgs& a) {
  const std::size_t k = a.weights.size();
  if (k == 0) throw usage_error("--weights is required");
  if (a.dofs.size() != k && a.dofs.size() != 1) throw usage_error("--dofs must match --weights");
  if (!a.noncentralities.empty() && a.noncentralities.size() != k) {
    throw usage_error("--noncentralities must match --weights");
  }
  if (a.draws < 1) throw usage_error("--draws must be positive");
  std::vector<hbr::ChiSquaredTerm> terms;
  for (std::size_t i = 0; i < k; ++i) {
    terms.push_back({a.weights[i], a.dofs.size() == 1 ? a.dofs[0] : a.dofs[i],
                     a.noncentralities.empty() ? 0.0 : a.noncentralities[i]});
  }
  const hbr::DeviationSpec spec(std::move(terms));
  const auto xs = parse_axis(a.x_grid, "--x-grid");
  std::vector<hbr::ComparisonBounds> bounds;
  for (double x : xs) bounds.push_back(hbr::comparison_bounds(spec, x));
  if (!spec.central()) std::cerr << "tails: non-central spec, hsu and sz bounds omitted\n";

  constexpr std::size_t kChunk = 4096;
  std::vector<double> z(a.draws);
  hbr::parallel_for((a.draws + kChunk - 1) / kChunk, a.threads, [&](std::size_t c) {
    hbr::RngStream rng(a.seed, c);
    const std::size_t stop = std::min(a.draws, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < stop; ++i) z[i] = hbr::sample_weighted_noncentral_chi2(spec, rng);
  });

  const auto opt = [](const std::optional<double>& v) {
    return v ? hbr::format_double(*v) : std::string();
  };
  with_output(a.output, [&](std::ostream& os) {
    os << "x,paper_bound,dr_bound,bental_bound,hsu_bound,sz_bound,mc_tail,mc_se\n";
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const auto& b = bounds[j];
      std::size_t above = 0;
      for (double v : z) above += v > b.upper;
      const auto est = hbr::make_rate_estimate(above, a.draws);
      os << hbr::format_double(xs[j]) << ',' << hbr::format_double(b.upper) << ','
         << hbr::format_double(b.rohde_dumbgen) << ',' << hbr::format_double(b.ben_tal) << ','
         << opt(b.hsu) << ',' << opt(b.spokoiny_zhilova) << ',' << hbr::format_double(est.rate)
         << ',' << hbr::format_double(est.std_err) << '\n';
    }
  });
  return kExitAccept;
}

// ---- condition -------------------------------------------------------------

struct ConditionArgs {
  std::vector<double> n;
  std::vector<double> bump_width;
  std::vector<double> delta;
  std::vector<double> kappa_sq;
  std::vector<double> delta_seq;
  double sigma0_sq = 1.0;
  std::optional<double> dmr_factor;
  std::string k_range = "10:20";
  std::string output = "-";
};

// Broadcasts length-1 lists to the schedule length.
double pick(const std::vector<double>& v, std::size_t k, double fallback) {
  if (v.empty()) return fallback;
  return v.size() == 1 ? v[0] : v[k];
}

int run_condition(const ConditionArgs& a) {
  std::vector<hbr::ConditionPoint> schedule;
  std::vector<long> labels;
  if (a.dmr_factor) {
    // n = 2^k, |I| = n^(-1/2), delta a fixed multiple of the DMR boundary
    const auto colon = a.k_range.find(':');
    if (colon == std::string::npos) throw usage_error("--k-range must be first:last");
    const long first = std::lround(parse_double(a.k_range.substr(0, colon), "--k-range"));
    const long last = std::lround(parse_double(a.k_range.substr(colon + 1), "--k-range"));
    if (first < 1 || last < first || last > 1000) throw usage_error("--k-range out of bounds");
    const double sigma0 = std::sqrt(a.sigma0_sq);
    for (long k = first; k <= last; ++k) {
      const double n = std::ldexp(1.0, static_cast<int>(k));
      const double w = 1.0 / std::sqrt(n);
      const double d = *a.dmr_factor * hbr::boundary_scale(std::numbers::sqrt2 * sigma0, n, w);
      schedule.push_back({n, w, d, pick(a.kappa_sq, 0, 0.0), a.sigma0_sq, pick(a.delta_seq, 0, 0.1)});
      labels.push_back(k);
    }
  } else {
    if (a.n.empty() || a.bump_width.empty() || a.delta_seq.empty()) {
      throw usage_error("condition needs --n, --bump-width and --delta-seq (or --dmr-factor)");
    }
    std::size_t len = 1;
    for (const auto* v : {&a.n, &a.bump_width, &a.delta, &a.kappa_sq, &a.delta_seq}) {
      if (v->size() > 1) {
        if (len > 1 && v->size() != len) throw usage_error("schedule lists differ in length");
        len = v->size();
      }
    }
    for (std::size_t k = 0; k < len; ++k) {
      schedule.push_back({pick(a.n, k, 0.0), pick(a.bump_width, k, 0.0), pick(a.delta, k, 0.0),
                          pick(a.kappa_sq, k, 0.0), a.sigma0_sq, pick(a.delta_seq, k, 0.0)});
      labels.push_back(static_cast<long>(k));
    }
  }
  const auto report = hbr::evaluate_condition_schedule(schedule);
  with_output(a.output, [&](std::ostream& os) {
    os << "k,n,value\n";
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      os << labels[i] << ',' << hbr::format_double(schedule[i].n) << ','
         << hbr::format_double(report.values[i]) << '\n';
    }
  });
  std::cerr << "verdict: " << hbr::to_string(report.verdict)
            << " (tail decreasing: " << (report.tail_decreasing ? "yes" : "no")
            << ", tail increasing: " << (report.tail_increasing ? "yes" : "no") << ")\n";
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scan tests for heterogeneous bumps"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw one data set as index,value CSV");
  simulate->add_option("--n", sim.n, "Sample size")->required();
  simulate->add_option("--bump-width", sim.bump_width, "|I|, with 1/|I| an integer")->required();
  simulate->add_option("--delta", sim.delta, "Mean bump height")->capture_default_str();
  simulate->add_option("--sigma0-sq", sim.sigma0_sq, "Baseline variance")->capture_default_str();
  simulate->add_option("--sigman-sq", sim.sigman_sq, "Variance bump")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  auto* sim_window = simulate->add_option("--window", sim.window, "Bump window (1-based); default random");
  simulate->add_flag("--h0", sim.h0, "Draw from the null model")->excludes(sim_window);
  simulate->add_option("-o,--output", sim.output, "CSV path, '-' for stdout")->capture_default_str();

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Run a scan test on a CSV data set");
  detect->add_option("-i,--input", det.input, "CSV path, '-' for stdin")->required();
  detect->add_option("--test", det.test, "known | adaptive | homogeneous")
      ->check(CLI::IsMember({"known", "adaptive", "homogeneous"}))
      ->capture_default_str();
  detect->add_option("--bump-width", det.bump_width, "|I|")->required();
  detect->add_option("--delta", det.delta, "Bump height (known test)");
  detect->add_option("--kappa-sq", det.kappa_sq, "sigma_n^2 / sigma_0^2");
  detect->add_option("--sigma0-sq", det.sigma0_sq)->capture_default_str();
  detect->add_option("--alpha", det.alpha, "Test level")->capture_default_str();
  detect->add_option("-o,--output", det.output, "JSON path, '-' for stdout")->capture_default_str();

  PowerArgs pow;
  auto* power = app.add_subcommand("power", "Monte Carlo level/power surface");
  power->add_option("--preset", pow.preset, "small | medium | large")
      ->check(CLI::IsMember({"small", "medium", "large"}))
      ->capture_default_str();
  power->add_option("--n", pow.n, "Override the preset sample size");
  power->add_option("--bump-width", pow.bump_width, "Override the preset |I|");
  power->add_option("--test", pow.test, "known | adaptive | homogeneous")
      ->check(CLI::IsMember({"known", "adaptive", "homogeneous"}))
      ->capture_default_str();
  power->add_option("--delta-axis", pow.delta_axis, "Values or start:stop:step")->delimiter(',');
  power->add_option("--kappa-sq-axis", pow.kappa_sq_axis, "Values or start:stop:step")->delimiter(',');
  power->add_option("--replications", pow.replications)->capture_default_str();
  power->add_option("--seed", pow.seed)->capture_default_str();
  power->add_option("--alpha", pow.alpha)->capture_default_str();
  power->add_option("--sigma0-sq", pow.sigma0_sq)->capture_default_str();
  auto* pow_window = power->add_option("--window", pow.window, "Fix the bump window (default random)");
  power->add_flag("--h0", pow.h0, "Estimate the level instead of power")->excludes(pow_window);
  power->add_option("--threads", pow.threads, "Worker threads (0 = all cores)")->envname("HBR_THREADS");
  power->add_option("-o,--output", pow.output, "CSV path; a .json sidecar is written next to it")
      ->capture_default_str();

  BoundaryArgs bnd;
  auto* boundary = app.add_subcommand("boundary", "Detection-boundary constants");
  boundary->add_option("--c", bnd.c, "lim sigma_n^2/(delta sigma_0): 0, positive, or inf");
  boundary->add_option("--sigma0", bnd.sigma0)->capture_default_str();
  boundary->add_option("--side", bnd.side, "lower | upper | both")->capture_default_str();
  boundary->add_flag("--adaptive", bnd.adaptive, "Only the adaptive constants");
  boundary->add_option("--rate", bnd.rate, "mean | variance");
  boundary->add_option("--relaxed", bnd.relaxed, "ER-lower | DVR-lower | ER-upper | DVR-upper");
  boundary->add_option("--kappa", bnd.kappa, "Limit kappa for --relaxed");
  boundary->add_flag("--price-curve", bnd.price_curve, "Emit c,r(c) samples as CSV");
  boundary->add_option("--c-max", bnd.c_max)->capture_default_str();
  boundary->add_option("--points", bnd.points)->capture_default_str();
  boundary->add_option("-o,--output", bnd.output)->capture_default_str();

  TailsArgs tl;
  auto* tails = app.add_subcommand("tails", "Compare chi-squared deviation bounds with Monte Carlo");
  tails->add_option("--weights", tl.weights, "b_i")->delimiter(',')->required();
  tails->add_option("--dofs", tl.dofs, "d_i (one value broadcasts)")->delimiter(',')->required();
  tails->add_option("--noncentralities", tl.noncentralities, "a_i^2 (default 0)")->delimiter(',');
  tails->add_option("--x-grid", tl.x_grid, "Deviation levels x")->delimiter(',');
  tails->add_option("--draws", tl.draws)->capture_default_str();
  tails->add_option("--seed", tl.seed)->capture_default_str();
  tails->add_option("--threads", tl.threads)->envname("HBR_THREADS");
  tails->add_option("-o,--output", tl.output)->capture_default_str();

  ConditionArgs cnd;
  auto* condition = app.add_subcommand("condition", "Evaluate the undetectability condition on a schedule");
  condition->add_option("--n", cnd.n)->delimiter(',');
  condition->add_option("--bump-width", cnd.bump_width)->delimiter(',');
  condition->add_option("--delta", cnd.delta)->delimiter(',');
  condition->add_option("--kappa-sq", cnd.kappa_sq)->delimiter(',');
  condition->add_option("--delta-seq", cnd.delta_seq)->delimiter(',');
  condition->add_option("--sigma0-sq", cnd.sigma0_sq)->capture_default_str();
  condition->add_option("--dmr-factor", cnd.dmr_factor, "Generate n=2^k, |I|=n^-1/2, delta=F x boundary");
  condition->add_option("--k-range", cnd.k_range, "first:last for --dmr-factor")->capture_default_str();
  condition->add_option("-o,--output", cnd.output)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (detect->parsed()) return run_detect(det);
    if (power->parsed()) return run_power(pow);
    if (boundary->parsed()) return run_boundary(bnd);
    if (tails->parsed()) return run_tails(tl);
    if (condition->parsed()) return run_condition(cnd);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
