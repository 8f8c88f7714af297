#include <benchmark/benchmark.h>

#include "blab/attacks.hpp"
#include "blab/certify.hpp"
#include "blab/distributions.hpp"
#include "blab/networks.hpp"
#include "blab/rng.hpp"

using namespace blab;

namespace {

DistributionSpec spec_for(int n) {
  DistributionSpec spec;
  spec.n = n;
  spec.eps = default_eps(n);
  spec.delta = default_delta(n, spec.eps);
  return spec;
}

Point random_point(int n, Rng& rng) {
  Point x(static_cast<std::size_t>(n));
  for (auto& v : x) v = 2.0 * rng.unit() - 1.0;
  return x;
}

}  // namespace

static void BM_forward_box(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = build_unstable_net(n, 1.0, ActivationSpec{});
  Rng rng(derive_seed(7, {90}));
  const Point x = random_point(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_forward_box)->Arg(2)->Arg(8)->Arg(32);

static void BM_forward_deep(benchmark::State& state) {
  const auto net =
      depth_extend(build_unstable_net(8, 1.0, ActivationSpec{}), {8, 16, 2, 2, 1});
  Rng rng(derive_seed(7, {91}));
  const Point x = random_point(8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_forward_deep);

static void BM_sample_ball(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(derive_seed(7, {92}));
  const Point center(static_cast<std::size_t>(n), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_ball(n, 1.0, center, rng));
}
BENCHMARK(BM_sample_ball)->Arg(2)->Arg(8)->Arg(32);

static void BM_sample_off_cube(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = spec_for(n);
  Rng rng(derive_seed(7, {93}));
  for (auto _ : state) benchmark::DoNotOptimize(sample_off_cube(n, spec.eps, rng));
}
BENCHMARK(BM_sample_off_cube)->Arg(2)->Arg(8)->Arg(16);

static void BM_sample_dataset(benchmark::State& state) {
  const auto spec = spec_for(8);
  const auto M = static_cast<std::size_t>(state.range(0));
  Rng rng(derive_seed(7, {94}));
  for (auto _ : state) benchmark::DoNotOptimize(sample_dataset(spec, M, rng));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(M));
}
BENCHMARK(BM_sample_dataset)->Arg(100)->Arg(1000);

static void BM_destabilization_rate(benchmark::State& state) {
  const auto spec = spec_for(8);
  const auto net = build_unstable_net(8, 1.0, ActivationSpec{});
  const Point v = cube_vertex({8, 3});
  Rng rng(derive_seed(7, {95}));
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(destabilization_rate(net, v, spec.eps / 4.0, trials, rng));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_destabilization_rate)->Arg(1000);

static void BM_unstable_set(benchmark::State& state) {
  const auto spec = spec_for(8);
  const auto net = build_unstable_net(8, 1.0, ActivationSpec{});
  Rng rng(derive_seed(7, {96}));
  const auto data = sample_dataset(spec, 200, rng);
  for (auto _ : state) benchmark::DoNotOptimize(unstable_set(net, data, spec.eps / 4.0));
}
BENCHMARK(BM_unstable_set);

static void BM_certified_radius(benchmark::State& state) {
  const auto spec = spec_for(8);
  const double b = cube_half_side(8, robust_scale(spec.eps));
  Rng rng(derive_seed(7, {97}));
  const Point x = random_point(8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(certified_radius(b, x));
}
BENCHMARK(BM_certified_radius);

static void BM_parameter_distance(benchmark::State& state) {
  const auto spec = spec_for(8);
  const auto f = build_unstable_net(8, 1.0, ActivationSpec{});
  const auto g = build_robust_net(8, spec.eps, 1.0, ActivationSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(parameter_inf_distance(f, g));
}
BENCHMARK(BM_parameter_distance);

BENCHMARK_MAIN();
