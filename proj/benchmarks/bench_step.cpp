#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "apdg/imex_integrator.hpp"
#include "apdg/limiting_ldg.hpp"

using namespace apdg;

namespace {

KineticState sine_state(const SpacePtr& space, double eps) {
  const InitialProfile p{[](double x) { return 2.0 + std::sin(x); },
                         [](double x) { return -std::cos(x); }, {}};
  return initial_state(p, space, eps);
}

void BM_ImexStep(benchmark::State& st) {
  const int order = static_cast<int>(st.range(0));
  const int N = static_cast<int>(st.range(1));
  auto space = make_space(Mesh1D(-std::numbers::pi, std::numbers::pi, N), order - 1);
  const auto cfg = make_scheme(order, telegraph(), 1e-6);
  ImexStepper stepper(space, cfg);
  auto s = sine_state(space, cfg.epsilon);
  const double dt = compute_dt(cfg, space->mesh.dx());
  for (auto _ : st) {
    stepper.step(s, dt);
    benchmark::DoNotOptimize(s.rho.coeffs().data());
  }
  st.SetItemsProcessed(st.iterations() * N);
}

void BM_BurgersStep(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  auto space = make_space(Mesh1D(-std::numbers::pi, std::numbers::pi, N), 2);
  const auto cfg = make_scheme(3, Burgers{0.5}, 0.5);
  ImexStepper stepper(space, cfg);
  auto s = sine_state(space, cfg.epsilon);
  const double dt = 0.25 * compute_dt(cfg, space->mesh.dx());
  for (auto _ : st) {
    stepper.step(s, dt);
    benchmark::DoNotOptimize(s.rho.coeffs().data());
  }
  st.SetItemsProcessed(st.iterations() * N);
}

void BM_LdgStep(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  auto space = make_space(Mesh1D(-std::numbers::pi, std::numbers::pi, N), 2);
  LdgStepper ldg(space, telegraph(), AltLeftRight{}, Periodic{}, tableau(3));
  auto s = ldg.initial(project_l2([](double x) { return 2.0 + std::sin(x); }, space));
  const double dx = space->mesh.dx();
  for (auto _ : st) {
    ldg.step(s, 0.006 * dx * dx);
    benchmark::DoNotOptimize(s.rho.coeffs().data());
  }
  st.SetItemsProcessed(st.iterations() * N);
}

}  // namespace

BENCHMARK(BM_ImexStep)->ArgsProduct({{1, 2, 3}, {40, 160, 640}});
BENCHMARK(BM_BurgersStep)->Arg(160)->Arg(640);
BENCHMARK(BM_LdgStep)->Arg(160);
BENCHMARK_MAIN();
