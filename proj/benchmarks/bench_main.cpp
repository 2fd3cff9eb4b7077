// Microbenchmarks for the hot paths: the compatibility defect across grid
// sizes (exact-diagonal fast path vs the dense route), the two-ellipsoid
// modulus solve, spectral basis construction, and resolution validation.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "causalkit/causality.hpp"
#include "causalkit/hermite.hpp"
#include "causalkit/linalg.hpp"
#include "causalkit/resolution.hpp"
#include "causalkit/space.hpp"

namespace {

causalkit::DiscretizedSpace grid(int dim) {
  return causalkit::DiscretizedSpace::uniform_grid(8.0, dim);
}

Eigen::MatrixXd dense_matrix(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

void bm_compatibility_defect_shift(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  causalkit::DiscretizedSpace s = grid(dim);
  const double step = 16.0 / (dim - 1);
  causalkit::DomainOperator m = causalkit::DomainOperator::everywhere(
      causalkit::shift_operator(s, 2.0 * step));
  causalkit::LinearMap p = causalkit::cutoff_resolution(s, {0.0}).at(0.0);
  for (auto _ : state) {
    causalkit::CausalityReport r = causalkit::compatibility_defect(m, p, 0.0);
    benchmark::DoNotOptimize(r.defect0);
  }
  state.SetComplexityN(dim);
}
BENCHMARK(bm_compatibility_defect_shift)
    ->RangeMultiplier(2)
    ->Range(64, 1024)
    ->Complexity();

void bm_compatibility_defect_dense(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  causalkit::DiscretizedSpace s = grid(dim);
  causalkit::DomainOperator m = causalkit::DomainOperator::everywhere(
      causalkit::LinearMap(s, s, dense_matrix(dim, dim, 7u)));
  causalkit::LinearMap p = causalkit::cutoff_resolution(s, {0.0}).at(0.0);
  for (auto _ : state) {
    causalkit::CausalityReport r = causalkit::compatibility_defect(m, p, 0.0);
    benchmark::DoNotOptimize(r.defect0);
  }
  state.SetComplexityN(dim);
}
BENCHMARK(bm_compatibility_defect_dense)
    ->RangeMultiplier(2)
    ->Range(32, 256)
    ->Complexity();

void bm_strong_modulus(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  causalkit::DiscretizedSpace s = grid(dim);
  const double step = 16.0 / (dim - 1);
  causalkit::DomainOperator m = causalkit::DomainOperator::everywhere(
      causalkit::shift_operator(s, 2.0 * step));
  causalkit::LinearMap p = causalkit::cutoff_resolution(s, {0.0}).at(0.0);
  Eigen::VectorXd probe = dense_matrix(dim, 1, 11u).col(0);
  for (auto _ : state) {
    causalkit::StrongModulusResult r =
        causalkit::strong_modulus(m, p, probe, 1.0, 0.1);
    benchmark::DoNotOptimize(r.omega);
  }
  state.SetComplexityN(dim);
}
BENCHMARK(bm_strong_modulus)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void bm_hermite_basis(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  causalkit::DiscretizedSpace s =
      causalkit::DiscretizedSpace::uniform_grid(12.0, 2048);
  for (auto _ : state) {
    causalkit::HermiteBasis b = causalkit::hermite_basis(s, degree, 1e-6);
    benchmark::DoNotOptimize(b.gram_deviation);
  }
}
BENCHMARK(bm_hermite_basis)->Arg(10)->Arg(20)->Arg(40);

void bm_validate_resolution(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  causalkit::DiscretizedSpace s = grid(dim);
  std::vector<double> times;
  for (int i = 0; i < 17; ++i) times.push_back(-9.0 + 18.0 * i / 16.0);
  causalkit::ProjectionFamily fam = causalkit::cutoff_resolution(s, times);
  for (auto _ : state) {
    causalkit::ValidationReport r = causalkit::validate_resolution(fam, 1e-12);
    benchmark::DoNotOptimize(r.pass);
  }
  state.SetComplexityN(dim);
}
BENCHMARK(bm_validate_resolution)
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->Complexity();

}  // namespace
