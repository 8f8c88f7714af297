#pragma once

#include <cstdint>
#include <vector>

#include "blab/distributions.hpp"
#include "blab/networks.hpp"
#include "blab/rng.hpp"

namespace blab {

// One random perturbation attempt against a fixed input.
struct PerturbationTrial {
  Point zeta;
  bool flipped = false;
};

// Binomial rate with a Wilson 95% interval.
struct RateEstimate {
  double rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

RateEstimate wilson_estimate(std::uint64_t hits, std::uint64_t trials);

// The deterministic flip direction at a boundary-cube vertex: alpha/n
// outward in every coordinate, total norm alpha/sqrt(n). Requires every
// |x_i| to equal `boundary` bitwise; any outward step, however small,
// changes the label there.
Point witness_perturbation(const Point& x, double alpha, double boundary);

// Fraction of uniform random perturbations from the closed ball of radius
// alpha/sqrt(n) that change the net's label at x. When log is non-null,
// every trial is appended to it.
RateEstimate destabilization_rate(const ThresholdNet& net, const Point& x, double alpha,
                                  std::uint64_t trials, Rng& rng,
                                  std::vector<PerturbationTrial>* log = nullptr);

// Fraction of single random perturbations that flip every listed point at
// once: one draw per trial, applied to each point.
RateEstimate universal_rate(const ThresholdNet& net, const std::vector<Point>& points,
                            double alpha, std::uint64_t trials, Rng& rng);

// The sampled points that sit exactly on the net's box boundary (its
// vertices), each paired with a witness perturbation that flips it. Keeps
// multiplicity: a vertex drawn twice appears twice.
struct UnstableSet {
  Dataset points;
  std::vector<Point> witnesses;
};

UnstableSet unstable_set(const ThresholdNet& net, const Dataset& data, double alpha);

}  // namespace blab
