#include "blab/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blab/errors.hpp"

namespace blab {

namespace {

void check_dim(int n) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2, got " + std::to_string(n));
}

}  // namespace

double inv_sqrt_dim(int n) {
  check_dim(n);
  return 1.0 / std::sqrt(static_cast<double>(n));
}

double cube_half_side(int n, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("cube scale must be positive");
  return scale * inv_sqrt_dim(n);
}

double robust_scale(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return 1.0 + eps / 2.0;
}

double perturbation_radius(int n, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return alpha * inv_sqrt_dim(n);
}

Point cube_vertex(const VertexIndex& v, double scale) {
  check_dim(v.n);
  if (v.n > kMaxIndexDim) throw std::invalid_argument("vertex index only supports n <= 63");
  if (v.n < 64 && v.index >> v.n != 0)
    throw std::invalid_argument("vertex index out of range for dimension");
  const double c = cube_half_side(v.n, scale);
  Point x(static_cast<std::size_t>(v.n));
  for (int i = 0; i < v.n; ++i) x[static_cast<std::size_t>(i)] = (v.index >> i) & 1 ? -c : c;
  return x;
}

std::optional<VertexIndex> vertex_index_of(const Point& x, double half_side) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || n > kMaxIndexDim) return std::nullopt;
  std::uint64_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (xi == half_side) continue;
    if (xi == -half_side) {
      idx |= std::uint64_t{1} << i;
      continue;
    }
    return std::nullopt;
  }
  return VertexIndex{n, idx};
}

std::vector<Point> all_cube_vertices(int n, double scale) {
  check_dim(n);
  if (n > kMaxEnumDim) throw std::invalid_argument("vertex enumeration capped at n <= 20");
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<Point> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(cube_vertex({n, i}, scale));
  return out;
}

double norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double linf_norm(const Point& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

bool in_cube(const Point& x, double half_side) { return linf_norm(x) <= half_side; }

Point sample_sphere(int n, double radius, Rng& rng) {
  check_dim(n);
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  Point x(static_cast<std::size_t>(n));
  double s;
  do {
    s = 0.0;
    for (auto& v : x) {
      v = rng.normal();
      s += v * v;
    }
  } while (s == 0.0);  // astronomically unlikely, but normalizing 0 is NaN
  const double f = radius / std::sqrt(s);
  for (auto& v : x) v *= f;
  return x;
}

Point sample_ball(int n, double radius, const Point& center, Rng& rng) {
  check_dim(n);
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (center.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("ball center has wrong dimension");
  Point x = sample_sphere(n, radius, rng);
  const double r = std::pow(rng.unit(), 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = center[i] + r * x[i];
  return x;
}

Point sample_sphere_slice(int n, double radius, double inner_half_side, double outer_cap,
                          Rng& rng, std::uint64_t budget) {
  check_dim(n);
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  if (!(inner_half_side >= 0.0)) throw std::invalid_argument("inner half side must be >= 0");
  if (inner_half_side >= std::min(radius, outer_cap))
    throw infeasible_spec("sphere slice is empty: inner bound " +
                          std::to_string(inner_half_side) + " meets cap " +
                          std::to_string(std::min(radius, outer_cap)));
  // every point of the sphere has max coordinate at least radius/sqrt(n)
  if (outer_cap < cube_half_side(n, radius))
    throw infeasible_spec("sphere slice is empty: cap " + std::to_string(outer_cap) +
                          " is below the sphere's minimum coordinate height " +
                          std::to_string(cube_half_side(n, radius)));
  for (std::uint64_t i = 0; i < budget; ++i) {
    Point x = sample_sphere(n, radius, rng);
    const double m = linf_norm(x);
    if (m > inner_half_side && m <= outer_cap) return x;
  }
  throw sampler_exhausted("sphere slice rejection budget of " + std::to_string(budget) +
                          " draws exhausted");
}

Point sample_off_cube(int n, double eps, Rng& rng, std::uint64_t budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return sample_sphere_slice(n, 1.0, cube_half_side(n, 1.0 + eps), 1.0, rng, budget);
}

}  // namespace blab
