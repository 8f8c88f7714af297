#include "blab/certify.hpp"

#include <cmath>
#include <stdexcept>

#include "blab/geometry.hpp"

namespace blab {

double certified_radius(double boundary, const Point& x) {
  if (!(boundary > 0.0)) throw std::invalid_argument("boundary must be positive");
  if (x.size() < 2) throw std::invalid_argument("point dimension must be at least 2");
  const double m = linf_norm(x);
  if (m <= boundary) return boundary - m;
  double s = 0.0;
  for (double v : x) {
    const double over = std::fabs(v) - boundary;
    if (over > 0.0) s += over * over;
  }
  return std::sqrt(s);
}

RobustnessCheck verify_robust_on_sample(double boundary, const Dataset& data, double alpha) {
  RobustnessCheck out;
  out.all_robust = true;
  if (data.empty()) return out;
  const int n = static_cast<int>(data.front().x.size());
  out.required = perturbation_radius(n, alpha);
  out.radii.reserve(data.size());
  for (const auto& p : data) {
    if (p.x.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("dataset rows have mixed dimensions");
    const double r = certified_radius(boundary, p.x);
    out.radii.push_back(r);
    if (!(r > out.required)) out.all_robust = false;
  }
  return out;
}

CertificateReport future_failure_experiment(const DistributionSpec& spec, std::size_t m,
                                            double alpha, std::uint64_t trials, Rng& rng) {
  spec.validate();
  if (spec.variant != Variant::ShiftedVertices)
    throw std::invalid_argument("certificate stress test needs the shifted_vertices variant");
  if (m == 0) throw std::invalid_argument("sample size m must be positive");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (!(alpha > 0.0) || !(alpha < spec.eps / 2.0))
    throw std::invalid_argument("alpha must lie in (0, eps/2)");

  const double boundary = cube_half_side(spec.n, spec.scale_factor());
  // k/2^(n+1): exact in doubles for any k < 2^53
  const double per_draw = std::ldexp(static_cast<double>(spec.shifted_count), -(spec.n + 1));

  CertificateReport rep;
  rep.trials = trials;
  rep.theory_per_draw_failure = per_draw;
  rep.theory_all_robust = std::pow(1.0 - per_draw, static_cast<double>(m));

  std::uint64_t all_robust_hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Dataset sample = sample_dataset(spec, m, rng);
    const auto check = verify_robust_on_sample(boundary, sample, alpha);
    if (check.all_robust) ++all_robust_hits;
    if (t == 0) {
      rep.sample_radii = check.radii;
      rep.sample_all_robust = check.all_robust;
    }
  }
  rep.empirical_all_robust = static_cast<double>(all_robust_hits) / static_cast<double>(trials);

  const double required = perturbation_radius(spec.n, alpha);
  std::uint64_t failures = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const LabeledPoint p = sample_one(spec, rng);
    if (!(certified_radius(boundary, p.x) > required)) ++failures;
  }
  rep.empirical_per_draw_failure = static_cast<double>(failures) / static_cast<double>(trials);
  return rep;
}

}  // namespace blab
