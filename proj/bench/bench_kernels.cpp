// Parallel kernels against their serial references; Arg(0) is serial, Arg(1) parallel.
#include <benchmark/benchmark.h>

#include <random>

#include "su3kit/bifurcation.hpp"
#include "su3kit/detect.hpp"
#include "su3kit/holcalc.hpp"
#include "su3kit/repvariety.hpp"

using namespace su3kit;

namespace {

Mat3 random_group_element(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix<double, 8, 1> x;
  for (int k = 0; k < 8; ++k) x(k) = 2.0 * nd(rng);
  return expm_skew(su3_from_coords(x));
}

void BM_solve(benchmark::State& st) {
  auto p = parse_presentation("<s,t | (s*t)^2 = s^3; s^3 = t^5>");
  SolveConfig cfg;
  cfg.seed = 7;
  cfg.starts = 64;
  cfg.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve_representations(p, GroupKind::SU3, cfg));
}
BENCHMARK(BM_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_detect(benchmark::State& st) {
  std::mt19937_64 rng(1);
  auto rho = make_representation(parse_presentation("<x,y,z | >"), GroupKind::SU3,
                                 {random_group_element(rng), random_group_element(rng), random_group_element(rng)});
  // a coboundary is never detected, so the whole candidate list is scanned
  std::normal_distribution<double> nd;
  Eigen::Matrix<double, 8, 1> v;
  for (int k = 0; k < 8; ++k) v(k) = nd(rng);
  auto z = coboundary_hom(rho, su3_from_coords(v));
  DetectConfig cfg;
  cfg.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(find_detecting_loop(rho, z, cfg));
}
BENCHMARK(BM_detect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_perturbation_derivative(benchmark::State& st) {
  std::mt19937_64 rng(2);
  auto base = random_loop(rng, 128, 0.6), dx = random_loop(rng, 128, 0.3), dy = random_loop(rng, 128, 0.3);
  auto a = random_loop(rng, 128, 0.4);
  PerturbationSpec spec;
  spec.tau = TracePolynomial{{{1, 0, 0.8}, {0, 1, -0.3}, {1, 1, 0.2}}};
  spec.eta = eta_profile(8, 8);
  spec.family = [=](double x, double y) { return loop_axpy(loop_axpy(base, x, dx), y, dy); };
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(perturbation_derivative(spec, a, par));
}
BENCHMARK(BM_perturbation_derivative)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_derivative_fd_check(benchmark::State& st) {
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(derivative_fd_check(16, 256, 3, par));
}
BENCHMARK(BM_derivative_fd_check)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_hessian_batch(benchmark::State& st) {
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(hessian_batch_check(2, 4, 768, par));
}
BENCHMARK(BM_hessian_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_audit_families(benchmark::State& st) {
  std::vector<ModelFamily> fams;
  for (std::uint64_t s = 1; s <= 50; ++s) fams.push_back(random_family(s));
  const bool par = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(audit_families(fams, par));
}
BENCHMARK(BM_audit_families)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
