#pragma once

#include <cstdint>
#include <vector>

#include "blab/distributions.hpp"
#include "blab/rng.hpp"

namespace blab {

// Distance from x to the decision surface of the box classifier with the
// given half side: inside the box, the slack to the nearest face; outside,
// the euclidean distance back to the box. A point with some |x_i| equal to
// the boundary bitwise gets exactly 0.
double certified_radius(double boundary, const Point& x);

struct RobustnessCheck {
  bool all_robust = false;
  std::vector<double> radii;  // certified radius per point, sample order
  double required = 0.0;      // the perturbation budget alpha/sqrt(n)
};

// True iff every point's certified radius strictly exceeds alpha/sqrt(n),
// i.e. no perturbation within the budget can change any label.
RobustnessCheck verify_robust_on_sample(double boundary, const Dataset& data, double alpha);

struct CertificateReport {
  double theory_all_robust = 0.0;        // (1 - k/2^(n+1))^m
  double empirical_all_robust = 0.0;
  double theory_per_draw_failure = 0.0;  // k/2^(n+1)
  double empirical_per_draw_failure = 0.0;
  std::uint64_t trials = 0;
  std::vector<double> sample_radii;      // first trial, for inspection
  bool sample_all_robust = false;
};

// The certificate stress test: `trials` fresh size-m samples from a
// shifted-vertices distribution, certifying the widened boundary on each.
// The moved vertices sit exactly on that boundary, so each draw fails with
// probability k/2^(n+1) and a whole sample certifies with probability
// (1 - k/2^(n+1))^m. Consumes rng in that order: first the m-point trials,
// then `trials` single future draws.
CertificateReport future_failure_experiment(const DistributionSpec& spec, std::size_t m,
                                            double alpha, std::uint64_t trials, Rng& rng);

}  // namespace blab
