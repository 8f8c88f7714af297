#include "blab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "blab/attacks.hpp"
#include "blab/certify.hpp"
#include "blab/loss.hpp"
#include "blab/rng.hpp"
#include "json_util.hpp"

namespace blab {

using nlohmann::json;

void ExperimentConfig::finalize() {
  if (spec.eps == 0.0) spec.eps = default_eps(spec.n);
  if (spec.delta == 0.0) spec.delta = default_delta(spec.n, spec.eps);
  if (alpha == 0.0) alpha = spec.eps / 4.0;
  if (r == 0 && s == 0) {
    s = M / 2;
    r = M - s;
  }
}

void ExperimentConfig::validate() const {
  spec.validate();
  if (M == 0) throw std::invalid_argument("dataset size M must be positive");
  if (r + s != M)
    throw std::invalid_argument("split sizes r + s must equal M, got " + std::to_string(r) +
                                " + " + std::to_string(s) + " != " + std::to_string(M));
  if (!(alpha > 0.0) || !(alpha < spec.eps / 2.0))
    throw std::invalid_argument("alpha must lie in (0, eps/2)");
  if (!(q > 0.0) || !(q < 0.5)) throw std::invalid_argument("q must lie in (0, 1/2)");
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be positive and finite");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be positive and finite");
  if (m == 0 || m > (std::uint64_t{1} << spec.n))
    throw std::invalid_argument("m must lie in [1, 2^n]");
  if (!(lambda > 0.0) || !(big_lambda > 0.0) || !(lambda < big_lambda))
    throw std::invalid_argument("need 0 < lambda < big_lambda");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  activation.validate();
}

std::string comparison_name(Comparison c) {
  switch (c) {
    case Comparison::GreaterEq: return "ge";
    case Comparison::Equal: return "eq";
    case Comparison::Less: return "lt";
  }
  throw std::invalid_argument("unknown comparison");
}

bool ExperimentReport::all_pass() const {
  for (const auto& m : metrics)
    if (!m.pass) return false;
  return !metrics.empty();
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

double three_sigma(double p, std::uint64_t trials) {
  const double clamped = std::min(std::max(p, 0.0), 1.0);
  return 3.0 * std::sqrt(clamped * (1.0 - clamped) / static_cast<double>(trials));
}

Metric rate_metric(const std::string& name, std::uint64_t hits, std::uint64_t trials,
                   double bound, Comparison cmp) {
  const auto est = wilson_estimate(hits, trials);
  Metric m;
  m.name = name;
  m.empirical = est.rate;
  m.bound = bound;
  m.ci_lo = est.ci_lo;
  m.ci_hi = est.ci_hi;
  m.comparison = cmp;
  m.tolerance = three_sigma(bound, trials);
  m.pass = cmp == Comparison::GreaterEq ? m.empirical >= bound - m.tolerance
                                        : std::fabs(m.empirical - bound) <= m.tolerance;
  return m;
}

Metric exact_metric(const std::string& name, double value, double target) {
  Metric m;
  m.name = name;
  m.empirical = value;
  m.bound = target;
  m.ci_lo = value;
  m.ci_hi = value;
  m.comparison = Comparison::Equal;
  m.tolerance = 0.0;
  m.pass = value == target;
  return m;
}

Metric value_metric(const std::string& name, double value, double bound, Comparison cmp,
                    double tolerance) {
  Metric m;
  m.name = name;
  m.empirical = value;
  m.bound = bound;
  m.ci_lo = value;
  m.ci_hi = value;
  m.comparison = cmp;
  m.tolerance = tolerance;
  switch (cmp) {
    case Comparison::GreaterEq: m.pass = value >= bound - tolerance; break;
    case Comparison::Equal: m.pass = std::fabs(value - bound) <= tolerance; break;
    case Comparison::Less: m.pass = value < bound + tolerance; break;
  }
  return m;
}

// spacing of doubles at the anchor's magnitude
double ulp_at(double anchor) {
  const double a = std::fabs(anchor);
  return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

Point fallback_vertex(const DistributionSpec& spec, std::uint64_t index) {
  return cube_vertex({spec.n, index}, spec.vertex_scale(index));
}

}  // namespace

ExperimentReport run_statement_i(const ExperimentConfig& cfg_in) {
  Timer timer;
  ExperimentConfig cfg = cfg_in;
  cfg.finalize();
  cfg.validate();
  if (cfg.spec.variant != Variant::Base)
    throw std::invalid_argument("this statement runs on the base distribution");

  const int n = cfg.spec.n;
  const ThresholdNet f = build_unstable_net(n, cfg.kappa, cfg.activation);
  const Classifier h = classifier(f);
  const auto threshold =
      static_cast<std::size_t>(std::floor((0.5 - cfg.q) * static_cast<double>(cfg.M)));

  double max_loss = 0.0;
  std::uint64_t count_hits = 0;
  Point rate_point;
  std::vector<Point> universal_points;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    Rng rng(derive_seed(cfg.seed, {1, t}));
    const Dataset data = sample_dataset(cfg.spec, cfg.M, rng);
    max_loss = std::max(max_loss, empirical_loss(data, h, zero_one_loss()));
    const auto u = unstable_set(f, data, cfg.alpha);
    if (u.points.size() >= threshold) ++count_hits;
    if (t == 0) {
      rate_point = u.points.empty() ? fallback_vertex(cfg.spec, 0) : u.points.front().x;
      if (u.points.size() >= cfg.m) {
        for (std::uint64_t j = 0; j < cfg.m; ++j) universal_points.push_back(u.points[j].x);
      } else {
        for (std::uint64_t j = 0; j < cfg.m; ++j)
          universal_points.push_back(fallback_vertex(cfg.spec, j));
      }
    }
  }

  Rng rate_rng(derive_seed(cfg.seed, {2}));
  const auto per_point = destabilization_rate(f, rate_point, cfg.alpha, cfg.trials, rate_rng);
  Rng uni_rng(derive_seed(cfg.seed, {3}));
  const auto universal = universal_rate(f, universal_points, cfg.alpha, cfg.trials, uni_rng);

  const double count_bound =
      1.0 - std::exp(-2.0 * cfg.q * cfg.q * static_cast<double>(cfg.M));
  const double flip_theory = 1.0 - std::ldexp(1.0, -n);
  const double universal_bound = 1.0 - std::ldexp(static_cast<double>(cfg.m), -n);

  ExperimentReport rep;
  rep.statement = "i";
  rep.config = cfg;
  rep.metrics.push_back(exact_metric("erm_zero_loss_max", max_loss, 0.0));
  rep.metrics.push_back(
      rate_metric("unstable_count_freq", count_hits, cfg.trials, count_bound,
                  Comparison::GreaterEq));
  rep.metrics.push_back(rate_metric("per_point_flip_rate", per_point.hits, per_point.trials,
                                    flip_theory, Comparison::Equal));
  rep.metrics.push_back(rate_metric("universal_flip_rate", universal.hits, universal.trials,
                                    universal_bound, Comparison::GreaterEq));
  rep.runtime_ms = timer.ms();
  return rep;
}

ExperimentReport run_statement_ii(const ExperimentConfig& cfg_in) {
  Timer timer;
  ExperimentConfig cfg = cfg_in;
  cfg.finalize();
  cfg.validate();
  if (cfg.spec.variant != Variant::Base)
    throw std::invalid_argument("this statement runs on the base distribution");

  const int n = cfg.spec.n;
  const double eps = cfg.spec.eps;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double narrow = cube_half_side(n, 1.0);
  const double widened = cube_half_side(n, robust_scale(eps));

  const double kappa_small = cfg.lambda * root_n / eps;
  const double kappa_large = 4.0 * cfg.big_lambda * root_n / eps;

  const auto f_small = build_box_net(n, kappa_small, cfg.activation, narrow);
  const auto g_small = build_box_net(n, kappa_small, cfg.activation, widened);
  const auto f_large = build_box_net(n, kappa_large, cfg.activation, narrow);
  const auto g_large = build_box_net(n, kappa_large, cfg.activation, widened);

  const double dist_small = parameter_inf_distance(f_small, g_small);
  const double dist_large = parameter_inf_distance(f_large, g_large);
  const double expected_small = kappa_small * eps / (2.0 * root_n);
  const double expected_large = kappa_large * eps / (2.0 * root_n);

  Rng data_rng(derive_seed(cfg.seed, {4}));
  const Dataset data = sample_dataset(cfg.spec, cfg.M, data_rng);
  const auto split = split_dataset(data, cfg.r, cfg.s);
  double max_loss = 0.0;
  for (const auto* net : {&f_small, &g_small, &f_large, &g_large}) {
    const Classifier h = classifier(*net);
    max_loss = std::max(max_loss, empirical_loss(split.train, h, zero_one_loss()));
    if (!split.validation.empty())
      max_loss = std::max(max_loss, empirical_loss(split.validation, h, zero_one_loss()));
  }

  Point vertex = fallback_vertex(cfg.spec, 0);
  for (const auto& p : data)
    if (p.label == 1) {
      vertex = p.x;
      break;
    }
  Rng flip_rng(derive_seed(cfg.seed, {5}));
  const auto narrow_rate =
      destabilization_rate(f_small, vertex, cfg.alpha, cfg.trials, flip_rng);

  Rng robust_rng(derive_seed(cfg.seed, {6}));
  std::uint64_t robust_flips = 0;
  const std::size_t probe = std::min<std::size_t>(cfg.M, 25);
  for (std::size_t i = 0; i < probe; ++i) {
    const auto est =
        destabilization_rate(g_small, data[i].x, cfg.alpha, cfg.trials, robust_rng);
    robust_flips += est.hits;
  }

  const double flip_theory = 1.0 - std::ldexp(1.0, -n);

  ExperimentReport rep;
  rep.statement = "ii";
  rep.config = cfg;
  rep.metrics.push_back(value_metric("twin_distance_small", dist_small, expected_small,
                                     Comparison::Equal, 4.0 * ulp_at(kappa_small * widened)));
  rep.metrics.push_back(
      value_metric("twin_distance_small_tiny", dist_small, cfg.lambda, Comparison::Less, 0.0));
  rep.metrics.push_back(value_metric("twin_distance_large", dist_large, expected_large,
                                     Comparison::Equal, 4.0 * ulp_at(kappa_large * widened)));
  rep.metrics.push_back(value_metric("twin_distance_large_huge", dist_large, cfg.big_lambda,
                                     Comparison::GreaterEq, 0.0));
  rep.metrics.push_back(exact_metric("erm_zero_loss_max", max_loss, 0.0));
  rep.metrics.push_back(rate_metric("narrow_twin_flip_rate", narrow_rate.hits,
                                    narrow_rate.trials, flip_theory, Comparison::Equal));
  rep.metrics.push_back(exact_metric("widened_twin_flips", static_cast<double>(robust_flips),
                                     0.0));
  rep.runtime_ms = timer.ms();
  return rep;
}

ExperimentReport run_statement_iii(const ExperimentConfig& cfg_in) {
  Timer timer;
  ExperimentConfig cfg = cfg_in;
  cfg.finalize();
  cfg.validate();

  ExperimentReport rep;
  rep.config = cfg;

  if (cfg.spec.variant == Variant::ScaledCube) {
    rep.statement = "iii-a";
    const int n = cfg.spec.n;
    const ThresholdNet g = build_robust_net(n, cfg.spec.eps, cfg.kappa, cfg.activation);
    Rng data_rng(derive_seed(cfg.seed, {7}));
    const Dataset data = sample_dataset(cfg.spec, cfg.M, data_rng);
    const double loss = empirical_loss(data, classifier(g), zero_one_loss());

    Point vertex = fallback_vertex(cfg.spec, 0);
    for (const auto& p : data)
      if (p.label == 1) {
        vertex = p.x;
        break;
      }
    Rng rate_rng(derive_seed(cfg.seed, {8}));
    const auto rate = destabilization_rate(g, vertex, cfg.alpha, cfg.trials, rate_rng);
    const double flip_theory = 1.0 - std::ldexp(1.0, -n);

    rep.metrics.push_back(exact_metric("erm_zero_loss", loss, 0.0));
    rep.metrics.push_back(rate_metric("scaled_vertex_flip_rate", rate.hits, rate.trials,
                                      flip_theory, Comparison::Equal));
  } else if (cfg.spec.variant == Variant::ShiftedVertices) {
    rep.statement = "iii-b";
    Rng rng(derive_seed(cfg.seed, {9}));
    const auto fut = future_failure_experiment(cfg.spec, cfg.M, cfg.alpha, cfg.trials, rng);
    const auto all_hits =
        static_cast<std::uint64_t>(std::llround(fut.empirical_all_robust *
                                                static_cast<double>(fut.trials)));
    const auto fail_hits =
        static_cast<std::uint64_t>(std::llround(fut.empirical_per_draw_failure *
                                                static_cast<double>(fut.trials)));
    rep.metrics.push_back(rate_metric("all_robust_freq", all_hits, fut.trials,
                                      fut.theory_all_robust, Comparison::Equal));
    rep.metrics.push_back(rate_metric("future_failure_rate", fail_hits, fut.trials,
                                      fut.theory_per_draw_failure, Comparison::Equal));
  } else {
    throw std::invalid_argument(
        "this statement needs a scaled_cube or shifted_vertices spec");
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

ExperimentReport run_hoeffding_check(double q, std::size_t M, std::uint64_t trials,
                                     std::uint64_t seed) {
  Timer timer;
  if (!(q > 0.0) || !(q < 0.5)) throw std::invalid_argument("q must lie in (0, 1/2)");
  if (M == 0) throw std::invalid_argument("M must be positive");
  if (trials == 0) throw std::invalid_argument("trials must be positive");

  const auto threshold =
      static_cast<std::size_t>(std::floor((0.5 - q) * static_cast<double>(M)));
  Rng rng(derive_seed(seed, {10}));
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::size_t heads = 0;
    for (std::size_t i = 0; i < M; ++i)
      if (rng.unit() < 0.5) ++heads;
    if (heads >= threshold) ++hits;
  }
  const double bound = 1.0 - std::exp(-2.0 * q * q * static_cast<double>(M));

  ExperimentReport rep;
  rep.statement = "hoeffding";
  rep.config.M = M;
  rep.config.q = q;
  rep.config.trials = trials;
  rep.config.seed = seed;
  rep.config.finalize();
  rep.metrics.push_back(
      rate_metric("count_reach_freq", hits, trials, bound, Comparison::GreaterEq));
  rep.runtime_ms = timer.ms();
  return rep;
}

// ---- serialization -----------------------------------------------------------

namespace {

json config_obj(const ExperimentConfig& cfg) {
  return {{"spec", detail::spec_obj(cfg.spec)},
          {"M", cfg.M},
          {"r", cfg.r},
          {"s", cfg.s},
          {"alpha", cfg.alpha},
          {"q", cfg.q},
          {"kappa", cfg.kappa},
          {"beta", cfg.beta},
          {"m", cfg.m},
          {"lambda", cfg.lambda},
          {"big_lambda", cfg.big_lambda},
          {"trials", cfg.trials},
          {"activation", detail::activation_obj(cfg.activation)}};
}

}  // namespace

std::string report_to_json(const ExperimentReport& rep) {
  json metrics = json::array();
  for (const auto& m : rep.metrics)
    metrics.push_back({{"name", m.name},
                       {"empirical", m.empirical},
                       {"bound_or_theory", m.bound},
                       {"ci95", json::array({m.ci_lo, m.ci_hi})},
                       {"comparison", comparison_name(m.comparison)},
                       {"tolerance", m.tolerance},
                       {"pass", m.pass}});
  const json env{{"statement", rep.statement},
                 {"config", config_obj(rep.config)},
                 {"seed", rep.config.seed},
                 {"metrics", metrics},
                 {"runtime_ms", rep.runtime_ms}};
  return env.dump(2) + "\n";
}

void write_report_csv(std::ostream& os, const ExperimentReport& rep,
                      const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "name,empirical,bound_or_theory,ci_lo,ci_hi,comparison,tolerance,pass\n";
  char buf[40];
  for (const auto& m : rep.metrics) {
    os << m.name << ",";
    for (double v : {m.empirical, m.bound, m.ci_lo, m.ci_hi}) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf << ",";
    }
    os << comparison_name(m.comparison) << ",";
    std::snprintf(buf, sizeof buf, "%.17g", m.tolerance);
    os << buf << "," << (m.pass ? "true" : "false") << "\n";
  }
}

}  // namespace blab
