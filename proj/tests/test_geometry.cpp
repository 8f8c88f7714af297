#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "blab/errors.hpp"
#include "blab/geometry.hpp"
#include "blab/rng.hpp"

using namespace blab;

namespace {

// 3 sigma band for a binomial frequency at success probability p
double band(double p, double n_draws) { return 3.0 * std::sqrt(p * (1.0 - p) / n_draws); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("canonical constants are the plainly rounded values") {
  CHECK(inv_sqrt_dim(4) == 0.5);
  CHECK(inv_sqrt_dim(2) == doctest::Approx(0.7071067811865476).epsilon(1e-16));
  CHECK(cube_half_side(4, 1.5) == 0.75);
  CHECK(cube_half_side(9, 3.0) == 1.0);
  CHECK(robust_scale(0.5) == 1.25);
  CHECK(perturbation_radius(4, 0.125) == 0.0625);
  // half side is defined as scale * fl(1/sqrt(n)), in that exact order
  CHECK(cube_half_side(8, 1.25) == 1.25 * inv_sqrt_dim(8));
}

TEST_CASE("norms and distance") {
  CHECK(norm({3.0, 4.0}) == 5.0);
  CHECK(distance({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-16));
  CHECK(linf_norm({-0.25, 0.125, -0.5}) == 0.5);
  CHECK(in_cube({0.5, -0.5}, 0.5));
  CHECK_FALSE(in_cube({0.5000001, 0.0}, 0.5));
  CHECK_THROWS_AS(distance({1.0, 0.0}, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cube vertices carry the exact shared coordinate value") {
  const double c = inv_sqrt_dim(8);
  const Point v0 = cube_vertex({8, 0});
  REQUIRE(v0.size() == 8);
  for (double x : v0) CHECK(x == c);

  const Point v255 = cube_vertex({8, 255});
  for (double x : v255) CHECK(x == -c);

  const Point mixed = cube_vertex({8, 0b10110001});
  CHECK(mixed[0] == -c);
  CHECK(mixed[1] == c);
  CHECK(mixed[4] == -c);
  CHECK(mixed[7] == -c);

  // vertices of the unit-scale cube sit on the unit sphere
  CHECK(norm(v0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(cube_vertex({10, 777}, 1.25)) == doctest::Approx(1.25).epsilon(1e-15));

  CHECK_THROWS_AS(cube_vertex({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cube_vertex({2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(cube_vertex({64, 0}), std::invalid_argument);
}

TEST_CASE("vertex_index_of inverts cube_vertex and rejects near misses") {
  const double c = cube_half_side(6, 1.25);
  for (std::uint64_t idx : {0ULL, 1ULL, 37ULL, 63ULL}) {
    Point v = cube_vertex({6, idx}, 1.25);
    auto back = vertex_index_of(v, c);
    REQUIRE(back.has_value());
    CHECK(back->n == 6);
    CHECK(back->index == idx);
  }
  Point v = cube_vertex({6, 37}, 1.25);
  v[2] = std::nextafter(v[2], 0.0);  // one ulp off the face
  CHECK_FALSE(vertex_index_of(v, c).has_value());
  CHECK_FALSE(vertex_index_of({0.0, 0.0}, 0.5).has_value());
}

TEST_CASE("all_cube_vertices enumerates distinct sign patterns") {
  const auto vs = all_cube_vertices(4);
  REQUIRE(vs.size() == 16);
  std::set<std::vector<double>> unique(vs.begin(), vs.end());
  CHECK(unique.size() == 16);
  CHECK_THROWS_AS(all_cube_vertices(21), std::invalid_argument);
}

TEST_CASE("sphere sampler: exact radius, symmetric coordinates") {
  Rng rng(derive_seed(7, {101}));
  const int n = 8;
  const std::size_t draws = 20000;
  std::vector<double> mean(n, 0.0);
  double var = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    Point x = sample_sphere(n, 1.0, rng);
    CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 0; j < n; ++j) mean[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
    var += x[0] * x[0];
  }
  // coordinate means vanish; coordinate second moment is 1/n
  for (int j = 0; j < n; ++j)
    CHECK(std::fabs(mean[static_cast<std::size_t>(j)] / draws) < 5.0 / std::sqrt(8.0 * draws));
  CHECK(var / draws == doctest::Approx(1.0 / 8.0).epsilon(0.05));
}

TEST_CASE("sphere sampler: orthant counts are uniform") {
  Rng rng(derive_seed(7, {102}));
  const std::size_t draws = 80000;
  std::vector<std::size_t> counts(8, 0);
  for (std::size_t i = 0; i < draws; ++i) {
    Point x = sample_sphere(3, 1.0, rng);
    std::size_t o = 0;
    for (int j = 0; j < 3; ++j)
      if (x[static_cast<std::size_t>(j)] < 0.0) o |= std::size_t{1} << j;
    ++counts[o];
  }
  for (std::size_t o = 0; o < 8; ++o)
    CHECK(std::fabs(static_cast<double>(counts[o]) / draws - 0.125) < band(0.125, draws));
}

TEST_CASE("ball sampler: radius distribution matches volume scaling") {
  Rng rng(derive_seed(7, {103}));
  const std::size_t draws = 100000;
  const Point center{0.25, -0.5};
  std::size_t inner = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    Point x = sample_ball(2, 0.2, center, rng);
    const double d = distance(x, center);
    CHECK(d <= 0.2 * (1.0 + 1e-12));
    if (d < 0.1) ++inner;
  }
  // half the radius holds 2^-n of the volume
  CHECK(std::fabs(static_cast<double>(inner) / draws - 0.25) < band(0.25, draws));
}

TEST_CASE("off-cube slice: support and measure") {
  const int n = 2;
  const double eps = 0.2;
  const double inner = cube_half_side(n, 1.0 + eps);
  Rng rng(derive_seed(7, {104}));
  const std::size_t draws = 50000;
  for (std::size_t i = 0; i < 200; ++i) {
    Point x = sample_off_cube(n, eps, rng);
    CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(linf_norm(x) > inner);
  }
  // closed form for the circle: P(max |x_i| > t) = 4 acos(t) / pi for t in (1/sqrt 2, 1)
  const double expected = 4.0 * std::acos(inner) / 3.14159265358979323846;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < draws; ++i)
    if (linf_norm(sample_sphere(n, 1.0, rng)) > inner) ++hits;
  CHECK(std::fabs(static_cast<double>(hits) / draws - expected) < band(expected, draws));
}

TEST_CASE("slice sampler failure modes") {
  Rng rng(derive_seed(7, {105}));
  CHECK_THROWS_AS(sample_sphere_slice(2, 1.0, 1.0, 1.0, rng), infeasible_spec);
  CHECK_THROWS_AS(sample_sphere_slice(4, 2.0, 0.0, 0.5, rng), infeasible_spec);
  CHECK_THROWS_AS(sample_sphere_slice(2, 1.0, 1.0 - 1e-12, 1.0, rng, 3), sampler_exhausted);
  CHECK_THROWS_AS(sample_sphere(1, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_ball(2, 0.0, {0.0, 0.0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_ball(2, 1.0, {0.0, 0.0, 0.0}, rng), std::invalid_argument);
}

TEST_CASE("seed derivation separates streams and is stable") {
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
  CHECK(derive_seed(7, {1}) != derive_seed(8, {1}));
  CHECK(derive_seed(7, {42}) == derive_seed(7, {42}));
  Rng a(derive_seed(7, {42}));
  Rng b(derive_seed(7, {42}));
  for (int i = 0; i < 16; ++i) CHECK(a.bits() == b.bits());
}

}  // TEST_SUITE
