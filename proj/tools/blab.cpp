#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blab/attacks.hpp"
#include "blab/certify.hpp"
#include "blab/distributions.hpp"
#include "blab/experiments.hpp"
#include "blab/networks.hpp"
#include "blab/rng.hpp"
#include "blab/version.hpp"

using namespace blab;
using nlohmann::json;

namespace {

std::uint64_t env_seed() {
  const char* s = std::getenv("BLAB_SEED");
  if (!s || !*s) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("BLAB_SEED must be an unsigned integer, got '" +
                                std::string(s) + "'");
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  os << text;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DistributionSpec make_spec(int n, double eps, double delta, const std::string& variant,
                           std::uint64_t k) {
  DistributionSpec spec;
  spec.n = n;
  spec.eps = eps == 0.0 ? default_eps(n) : eps;
  spec.delta = delta == 0.0 ? default_delta(n, spec.eps) : delta;
  spec.variant = variant_from_name(variant);
  spec.shifted_count = k;
  return spec;
}

json rate_obj(const RateEstimate& est) {
  return {{"rate", est.rate},
          {"ci95", json::array({est.ci_lo, est.ci_hi})},
          {"hits", est.hits},
          {"trials", est.trials}};
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"box classifiers on the vertex-versus-sphere family: sampling, "
               "construction, attacks, certification, statement suites"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);

  int n = 8;
  double eps = 0.0, delta = 0.0, alpha = 0.0, q = 0.1;
  double kappa = 1.0, beta = 1.0, lambda = 1e-6, big_lambda = 1e6;
  std::uint64_t k = 0, m = 4, uni_m = 0, trials = 10000, vertex = 0;
  std::uint64_t seed = env_seed();
  std::size_t M = 0, r = 0, s = 0;
  int depth = 1;
  std::string variant = "base", kind = "unstable", activation = "relu";
  std::string out, format, trial_log, statement;

  const auto kVariants = CLI::IsMember({"base", "scaled_cube", "shifted_vertices"});
  const auto kFormats = CLI::IsMember({"csv", "json"});
  const auto kActivations =
      CLI::IsMember({"relu", "leaky_relu_difference", "piecewise_linear_sigmoid"});

  auto* sample = app.add_subcommand("sample", "draw a labeled dataset");
  sample->add_option("--n", n, "dimension")->check(CLI::Range(2, 63));
  sample->add_option("--eps", eps, "separation knob, 0 = default");
  sample->add_option("--delta", delta, "margin to audit, 0 = default");
  sample->add_option("--variant", variant, "distribution variant")->check(kVariants);
  sample->add_option("--k", k, "shifted vertex count (shifted_vertices)");
  sample->add_option("--M", M, "points to draw (default 100)");
  sample->add_option("--seed", seed, "root seed (default $BLAB_SEED or 7)");
  sample->add_option("--format", format, "csv (default) or json")->check(kFormats);
  sample->add_option("--out", out, "output file (default stdout)");

  auto* build = app.add_subcommand("build", "construct a classifier and print it as json");
  build->add_option("--n", n, "dimension")->check(CLI::Range(2, 63));
  build->add_option("--kind", kind, "unstable, robust or regularized")
      ->check(CLI::IsMember({"unstable", "robust", "regularized"}));
  build->add_option("--eps", eps, "box widening for the robust kind, 0 = default");
  build->add_option("--kappa", kappa, "gain of the first layer");
  build->add_option("--beta", beta, "gain of the regularized kind");
  build->add_option("--depth", depth, "hidden layers after extension (default 1)")
      ->check(CLI::Range(1, 64));
  build->add_option("--activation", activation, "hidden unit family")->check(kActivations);
  build->add_option("--out", out, "output file (default stdout)");

  auto* attack = app.add_subcommand("attack", "measure flip rates under random perturbations");
  attack->add_option("--n", n, "dimension")->check(CLI::Range(2, 63));
  attack->add_option("--kind", kind, "unstable or robust")
      ->check(CLI::IsMember({"unstable", "robust"}));
  attack->add_option("--eps", eps, "separation knob, 0 = default");
  attack->add_option("--alpha", alpha, "perturbation knob, 0 = eps/4");
  attack->add_option("--kappa", kappa, "gain of the first layer");
  attack->add_option("--vertex", vertex, "index of the vertex under attack");
  attack->add_option("--m", uni_m, "vertices a universal draw must flip (0 = skip)");
  attack->add_option("--trials", trials, "monte carlo draws");
  attack->add_option("--seed", seed, "root seed (default $BLAB_SEED or 7)");
  attack->add_option("--trial-log", trial_log, "write every draw to this csv file");
  attack->add_option("--out", out, "output file (default stdout)");

  auto* certify = app.add_subcommand(
      "certify", "stress a whole-sample certificate against future draws");
  certify->add_option("--n", n, "dimension")->check(CLI::Range(2, 63));
  certify->add_option("--eps", eps, "separation knob, 0 = default");
  certify->add_option("--delta", delta, "margin, 0 = default");
  certify->add_option("--k", k, "vertices moved onto the widened boundary (default 2)");
  certify->add_option("--M", M, "future draws per trial (default 10)");
  certify->add_option("--alpha", alpha, "perturbation knob, 0 = eps/4");
  certify->add_option("--trials", trials, "monte carlo trials");
  certify->add_option("--seed", seed, "root seed (default $BLAB_SEED or 7)");
  certify->add_option("--out", out, "output file (default stdout)");

  auto* exp = app.add_subcommand("exp", "run a statement suite and check every bound");
  exp->add_option("statement", statement, "i, ii, iiia, iiib or hoeffding")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iiia", "iiib", "hoeffding"}));
  exp->add_option("--n", n, "dimension")->check(CLI::Range(2, 63));
  exp->add_option("--eps", eps, "separation knob, 0 = default");
  exp->add_option("--delta", delta, "margin, 0 = default");
  exp->add_option("--alpha", alpha, "perturbation knob, 0 = eps/4");
  exp->add_option("--q", q, "count deviation knob");
  exp->add_option("--M", M, "dataset size (default 200)");
  exp->add_option("--r", r, "training split, 0 = M - M/2");
  exp->add_option("--s", s, "validation split, 0 = M/2");
  exp->add_option("--k", k, "shifted vertex count for iiib (default 2)");
  exp->add_option("--m", m, "points a universal draw must flip");
  exp->add_option("--kappa", kappa, "gain of the classifiers under test");
  exp->add_option("--beta", beta, "gain of the regularized net");
  exp->add_option("--lambda", lambda, "smallness target for twin distances");
  exp->add_option("--Lambda", big_lambda, "largeness target for twin distances");
  exp->add_option("--trials", trials, "monte carlo draws");
  exp->add_option("--seed", seed, "root seed (default $BLAB_SEED or 7)");
  exp->add_option("--activation", activation, "hidden unit family")->check(kActivations);
  exp->add_option("--format", format, "json (default) or csv")->check(kFormats);
  exp->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*sample) {
    const auto spec = make_spec(n, eps, delta, variant, k);
    const std::size_t count = M == 0 ? 100 : M;
    Rng rng(derive_seed(seed, {11}));
    const Dataset data = sample_dataset(spec, count, rng);
    if (format == "json") {
      emit(out, dataset_to_json(spec, seed, data));
    } else {
      std::ostringstream os;
      write_dataset_csv(os, data,
                        "n=" + std::to_string(spec.n) + " eps=" + num(spec.eps) +
                            " delta=" + num(spec.delta) + " variant=" + variant +
                            (spec.variant == Variant::ShiftedVertices
                                 ? " k=" + std::to_string(spec.shifted_count)
                                 : "") +
                            " M=" + std::to_string(count) + " seed=" + std::to_string(seed));
      emit(out, os.str());
    }
    return 0;
  }

  if (*build) {
    ActivationSpec act;
    act.family = activation_family_from_name(activation);
    const double e = eps == 0.0 ? default_eps(n) : eps;
    ThresholdNet net = kind == "unstable" ? build_unstable_net(n, kappa, act)
                       : kind == "robust" ? build_robust_net(n, e, kappa, act)
                                          : build_regularized_net(n, beta);
    if (depth > 1) {
      std::vector<int> arch{n, 2 * n};
      for (int i = 1; i < depth; ++i) arch.push_back(2);
      arch.push_back(1);
      net = depth_extend(net, arch);
    }
    emit(out, net_to_json(net));
    return 0;
  }

  if (*attack) {
    ActivationSpec act;
    const double e = eps == 0.0 ? default_eps(n) : eps;
    const double a = alpha == 0.0 ? e / 4.0 : alpha;
    const ThresholdNet net = kind == "unstable" ? build_unstable_net(n, kappa, act)
                                                : build_robust_net(n, e, kappa, act);
    const Point v = cube_vertex({n, vertex});
    Rng rng(derive_seed(seed, {12}));
    std::vector<PerturbationTrial> log;
    const auto per =
        destabilization_rate(net, v, a, trials, rng, trial_log.empty() ? nullptr : &log);

    json rep{{"config",
              {{"n", n},
               {"kind", kind},
               {"eps", e},
               {"alpha", a},
               {"kappa", kappa},
               {"vertex", vertex},
               {"trials", trials},
               {"seed", seed}}},
             {"per_point", rate_obj(per)},
             {"theory_flip_rate", 1.0 - std::ldexp(1.0, -n)}};
    if (uni_m > 0) {
      std::vector<Point> pts;
      for (std::uint64_t j = 0; j < uni_m; ++j) pts.push_back(cube_vertex({n, j}));
      Rng uni(derive_seed(seed, {13}));
      rep["universal"] = rate_obj(universal_rate(net, pts, a, trials, uni));
      rep["theory_universal_bound"] =
          1.0 - std::ldexp(static_cast<double>(uni_m), -n);
    }
    if (!trial_log.empty()) {
      std::ostringstream os;
      os << "# attack kind=" << kind << " n=" << n << " alpha=" << num(a)
         << " vertex=" << vertex << " seed=" << seed << "\n";
      for (int i = 1; i <= n; ++i) os << "z" << i << ",";
      os << "flipped\n";
      for (const auto& t : log) {
        for (double z : t.zeta) os << num(z) << ",";
        os << (t.flipped ? "true" : "false") << "\n";
      }
      emit(trial_log, os.str());
    }
    emit(out, rep.dump(2) + "\n");
    return 0;
  }

  if (*certify) {
    auto spec = make_spec(n, eps, delta, "shifted_vertices", k == 0 ? 2 : k);
    const double a = alpha == 0.0 ? spec.eps / 4.0 : alpha;
    const std::size_t draws = M == 0 ? 10 : M;
    Rng rng(derive_seed(seed, {14}));
    const auto rep = future_failure_experiment(spec, draws, a, trials, rng);
    const json j{{"config",
                  {{"n", n},
                   {"eps", spec.eps},
                   {"delta", spec.delta},
                   {"k", spec.shifted_count},
                   {"draws", draws},
                   {"alpha", a},
                   {"trials", trials},
                   {"seed", seed}}},
                 {"theory_all_robust", rep.theory_all_robust},
                 {"empirical_all_robust", rep.empirical_all_robust},
                 {"theory_per_draw_failure", rep.theory_per_draw_failure},
                 {"empirical_per_draw_failure", rep.empirical_per_draw_failure},
                 {"sample_radii", rep.sample_radii},
                 {"sample_all_robust", rep.sample_all_robust}};
    emit(out, j.dump(2) + "\n");
    return 0;
  }

  // exp
  ExperimentConfig cfg;
  cfg.spec.n = n;
  cfg.spec.eps = eps;
  cfg.spec.delta = delta;
  if (M != 0) cfg.M = M;
  cfg.r = r;
  cfg.s = s;
  cfg.alpha = alpha;
  cfg.q = q;
  cfg.kappa = kappa;
  cfg.beta = beta;
  cfg.m = m;
  cfg.lambda = lambda;
  cfg.big_lambda = big_lambda;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.activation.family = activation_family_from_name(activation);

  ExperimentReport rep;
  if (statement == "i") {
    rep = run_statement_i(cfg);
  } else if (statement == "ii") {
    rep = run_statement_ii(cfg);
  } else if (statement == "iiia") {
    cfg.spec.variant = Variant::ScaledCube;
    rep = run_statement_iii(cfg);
  } else if (statement == "iiib") {
    cfg.spec.variant = Variant::ShiftedVertices;
    cfg.spec.shifted_count = k == 0 ? 2 : k;
    rep = run_statement_iii(cfg);
  } else {
    rep = run_hoeffding_check(cfg.q, cfg.M, cfg.trials, cfg.seed);
  }

  if (format == "csv") {
    std::ostringstream os;
    write_report_csv(os, rep,
                     "statement=" + rep.statement + " n=" + std::to_string(rep.config.spec.n) +
                         " eps=" + num(rep.config.spec.eps) +
                         " M=" + std::to_string(rep.config.M) +
                         " trials=" + std::to_string(rep.config.trials) +
                         " seed=" + std::to_string(rep.config.seed));
    emit(out, os.str());
  } else {
    emit(out, report_to_json(rep));
  }
  return rep.all_pass() ? 0 : 1;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
