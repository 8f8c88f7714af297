#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blab/rng.hpp"

namespace blab {

// A point in R^n. Dimension is carried by the vector length; everything in
// the library requires n >= 2.
using Point = std::vector<double>;

// ---- canonical rounded constants -----------------------------------------
//
// The cube inscribed in the unit sphere has vertices with coordinates
// +-scale/sqrt(n), and the box classifiers put their decision boundary at
// the same value. All modules obtain that value through the two helpers
// below, so a vertex coordinate and the matching boundary agree bit for bit
// and "the vertex lies exactly on the boundary" holds in doubles, not just
// on paper.

// fl(1 / sqrt(n))
double inv_sqrt_dim(int n);

// fl(scale * inv_sqrt_dim(n)); half side length of the scaled inscribed cube
double cube_half_side(int n, double scale);

// fl(1 + eps / 2); the scale factor of the widened (robust) cube
double robust_scale(double eps);

// fl(alpha * inv_sqrt_dim(n)); the norm budget of a perturbation
double perturbation_radius(int n, double alpha);

// ---- cube vertices --------------------------------------------------------

inline constexpr int kMaxIndexDim = 63;  // vertex indices live in uint64
inline constexpr int kMaxEnumDim = 20;   // full enumeration capped at 2^20

// Identifies one of the 2^n cube vertices. Bit i of index clear means
// coordinate i is positive.
struct VertexIndex {
  int n = 0;
  std::uint64_t index = 0;
};

// Coordinates of a vertex of the cube with half side scale/sqrt(n).
Point cube_vertex(const VertexIndex& v, double scale = 1.0);

// Inverse of cube_vertex: the index if every |x_i| equals half_side exactly
// (bitwise), nullopt otherwise. Lets callers test vertex membership without
// enumerating the 2^n vertex set.
std::optional<VertexIndex> vertex_index_of(const Point& x, double half_side);

// All 2^n vertices, index order. Only sensible for small n; throws above
// kMaxEnumDim.
std::vector<Point> all_cube_vertices(int n, double scale = 1.0);

// ---- norms and membership --------------------------------------------------

double norm(const Point& x);
double distance(const Point& x, const Point& y);
double linf_norm(const Point& x);

// max |x_i| <= half_side
bool in_cube(const Point& x, double half_side);

// ---- samplers ---------------------------------------------------------------

// Uniform on the sphere of given radius about the origin: normalize an
// n-vector of independent standard normals.
Point sample_sphere(int n, double radius, Rng& rng);

// Uniform in the closed ball of given radius about center: sphere direction
// times U^(1/n) radius.
Point sample_ball(int n, double radius, const Point& center, Rng& rng);

inline constexpr std::uint64_t kDefaultRejectionBudget = 1'000'000;

// Uniform on the slice of the radius-r sphere where the largest coordinate
// magnitude lies in (inner_half_side, outer_cap], by rejection from the full
// sphere. Throws sampler_exhausted after budget draws without a hit and
// infeasible_spec when the slice is empty (inner_half_side >= min(r, outer_cap)).
Point sample_sphere_slice(int n, double radius, double inner_half_side, double outer_cap,
                          Rng& rng, std::uint64_t budget = kDefaultRejectionBudget);

// The off-cube part of the unit sphere: points with max |x_i| > (1+eps)/sqrt(n).
Point sample_off_cube(int n, double eps, Rng& rng,
                      std::uint64_t budget = kDefaultRejectionBudget);

}  // namespace blab
