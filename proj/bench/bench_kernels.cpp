// Serial vs OpenMP timings for the parallel kernels. Both paths return
// identical numbers; only wall time differs.

#include <benchmark/benchmark.h>

#include "mom/datagen.hpp"
#include "mom/harness.hpp"
#include "mom/oracle.hpp"
#include "mom/set_geometry.hpp"

using namespace mom;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_MeanWidth(benchmark::State& state) {
  const SymmetricSet s = SymmetricSet::ball(10);
  const CovarianceModel c = CovarianceModel::identity(10);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_mean_width(s, c, 200000, 1, exec_of(state)).value);
  label(state);
}

void BM_SampleInliers(benchmark::State& state) {
  const InlierModel m = InlierModel::gaussian(Vector::Zero(10), CovarianceModel::identity(10));
  for (auto _ : state) benchmark::DoNotOptimize(sample_inliers(m, 100000, 2, exec_of(state)).data());
  label(state);
}

void BM_TailH(benchmark::State& state) {
  const InlierModel m = InlierModel::coord_cauchy(Vector::Zero(3), Vector::Ones(3));
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_tail_H(m, 50, 5, Vector::Unit(3, 0), 0.5, 50000, 3, exec_of(state)).value);
  label(state);
}

void BM_GridArgmin(benchmark::State& state) {
  const Matrix data = sample_inliers(InlierModel::gaussian(Vector::Zero(2), CovarianceModel::identity(2)), 45, 4);
  const BucketedMeans bm = bucketed_means(data, make_partition(45, 5, 4));
  oracle::GridSpec g = oracle::auto_box(bm.means);
  g.points_per_axis = 101;
  const SymmetricSet s = SymmetricSet::cross(2);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::grid_argmin_conjugate(bm.means, s, Which::g, g, exec_of(state)).data());
  label(state);
}

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig e;
  e.model = InlierModel::gaussian(Vector::Zero(5), CovarianceModel::identity(5));
  e.set = SymmetricSet::ball(5);
  e.cells = {{225, 9}};
  e.trials = 16;
  e.width_samples = 1000;
  e.rademacher_samples = 10;
  e.solver.max_outer_iters = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(e, exec_of(state)).cells[0].median_error);
  label(state);
}

}  // namespace

BENCHMARK(BM_MeanWidth)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleInliers)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TailH)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridArgmin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
