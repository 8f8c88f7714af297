#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blab/distributions.hpp"
#include "blab/networks.hpp"

namespace blab {

inline constexpr std::uint64_t kDefaultSeed = 7;

// Everything a statement run needs. Zeros in eps, delta, alpha, r and s
// mean "derive the default": finalize() fills them in from n, eps and M.
struct ExperimentConfig {
  DistributionSpec spec;
  std::size_t M = 200;        // dataset size per draw
  std::size_t r = 0;          // training split (default: M - M/2)
  std::size_t s = 0;          // validation split (default: M/2)
  double alpha = 0.0;         // perturbation knob (default: eps/4)
  double q = 0.1;             // count deviation knob, in (0, 1/2)
  double kappa = 1.0;         // gain of the classifiers under test
  double beta = 1.0;          // gain of the regularized net
  std::uint64_t m = 4;        // points a universal perturbation must flip
  double lambda = 1e-6;       // smallness target for twin distances
  double big_lambda = 1e6;    // largeness target for twin distances
  std::uint64_t trials = 10000;
  std::uint64_t seed = kDefaultSeed;
  ActivationSpec activation;

  void finalize();
  void validate() const;
};

enum class Comparison { GreaterEq, Equal, Less };
std::string comparison_name(Comparison c);

// One verified quantity: an empirical value against its theoretical bound
// or target. For Monte Carlo rates the tolerance is three binomial standard
// deviations at the theoretical value; for exact identities it is zero.
struct Metric {
  std::string name;
  double empirical = 0.0;
  double bound = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  Comparison comparison = Comparison::GreaterEq;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string statement;
  ExperimentConfig config;
  std::vector<Metric> metrics;
  double runtime_ms = 0.0;
  bool all_pass() const;
};

std::string report_to_json(const ExperimentReport& rep);
void write_report_csv(std::ostream& os, const ExperimentReport& rep,
                      const std::string& comment = "");

// Fits the narrow box net on resampled data, then quantifies how badly it
// misbehaves: the fraction of resamples whose boundary-vertex count reaches
// floor((1/2 - q) M), the flip rate of a tiny random perturbation at one
// such point, and the rate at which a single draw flips m points at once.
ExperimentReport run_statement_i(const ExperimentConfig& cfg);

// Builds the narrow/widened net pair at a small and at a large gain, checks
// that all four are zero-loss minimisers on a train/validation split, and
// measures the parameter distance inside each pair: below lambda for the
// small gain, above big_lambda for the large one, both equal to
// kappa * eps / (2 sqrt n) up to a few ulp.
ExperimentReport run_statement_ii(const ExperimentConfig& cfg);

// scaled_cube spec: the widened net is a zero-loss minimiser of the scaled
// distribution yet flips at its vertices at rate 1 - 2^-n.
// shifted_vertices spec: the certificate stress test, whole-sample
// certification frequency against (1 - k/2^(n+1))^M and per-draw failures
// against k/2^(n+1).
ExperimentReport run_statement_iii(const ExperimentConfig& cfg);

// The concentration step on its own: M fair coins, probability that the
// head count reaches floor((1/2 - q) M), bounded below by 1 - exp(-2 q^2 M).
ExperimentReport run_hoeffding_check(double q, std::size_t M, std::uint64_t trials,
                                     std::uint64_t seed = kDefaultSeed);

}  // namespace blab
