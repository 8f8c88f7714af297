#include "blab/attacks.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace blab {

RateEstimate wilson_estimate(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("rate estimate needs at least one trial");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (p + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
  RateEstimate est;
  est.rate = p;
  // center - half is exactly 0 at hits = 0 (and 1 at hits = trials) on paper,
  // but the sqrt rounds; pin the endpoints instead of leaking 1e-18 past them
  est.ci_lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  est.ci_hi = hits == trials ? 1.0 : std::min(1.0, center + half);
  est.trials = trials;
  est.hits = hits;
  return est;
}

Point witness_perturbation(const Point& x, double alpha, double boundary) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(boundary > 0.0)) throw std::invalid_argument("boundary must be positive");
  const auto idx = vertex_index_of(x, boundary);
  if (!idx)
    throw std::invalid_argument(
        "witness perturbation is only defined at boundary-cube vertices");
  const double step = alpha / static_cast<double>(x.size());
  Point zeta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) zeta[i] = x[i] > 0.0 ? step : -step;
  return zeta;
}

RateEstimate destabilization_rate(const ThresholdNet& net, const Point& x, double alpha,
                                  std::uint64_t trials, Rng& rng,
                                  std::vector<PerturbationTrial>* log) {
  const int n = net.input_dim();
  if (x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("point dimension does not match the net");
  const double radius = perturbation_radius(n, alpha);
  const double base = net.forward(x);
  Point moved(x.size());
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Point zeta = sample_ball(n, radius, Point(x.size(), 0.0), rng);
    for (std::size_t i = 0; i < x.size(); ++i) moved[i] = x[i] + zeta[i];
    const bool flipped = net.forward(moved) != base;
    if (flipped) ++hits;
    if (log) log->push_back({std::move(zeta), flipped});
  }
  return wilson_estimate(hits, trials);
}

RateEstimate universal_rate(const ThresholdNet& net, const std::vector<Point>& points,
                            double alpha, std::uint64_t trials, Rng& rng) {
  if (points.empty()) throw std::invalid_argument("universal rate needs at least one point");
  const int n = net.input_dim();
  for (const auto& p : points)
    if (p.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("point dimension does not match the net");
  const double radius = perturbation_radius(n, alpha);
  std::vector<double> base;
  base.reserve(points.size());
  for (const auto& p : points) base.push_back(net.forward(p));
  Point moved(static_cast<std::size_t>(n));
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Point zeta = sample_ball(n, radius, Point(static_cast<std::size_t>(n), 0.0), rng);
    bool all = true;
    for (std::size_t j = 0; j < points.size() && all; ++j) {
      for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = points[j][i] + zeta[i];
      all = net.forward(moved) != base[j];
    }
    if (all) ++hits;
  }
  return wilson_estimate(hits, trials);
}

UnstableSet unstable_set(const ThresholdNet& net, const Dataset& data, double alpha) {
  if (!net.box_boundary)
    throw std::invalid_argument("unstable_set needs a net with box boundary metadata");
  const double b = *net.box_boundary;
  UnstableSet out;
  for (const auto& p : data) {
    if (!vertex_index_of(p.x, b)) continue;
    out.points.push_back(p);
    out.witnesses.push_back(witness_perturbation(p.x, alpha, b));
  }
  return out;
}

}  // namespace blab
