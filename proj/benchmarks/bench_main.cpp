#include "magnuskit/linalg.hpp"
#include "magnuskit/problems.hpp"

#include <benchmark/benchmark.h>

using namespace magnus;

namespace {

void BM_expm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, 1, 1.0, true);
    for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_expm)->Arg(2)->Arg(4)->Arg(10)->Arg(32);

void BM_closed_form_su2(benchmark::State& state) {
    const Matrix u = rosen_zener(1.5, 0.3).A(0.2);
    for (auto _ : state) benchmark::DoNotOptimize(closed_form_exp(ClosedForm::su2, u));
}
BENCHMARK(BM_closed_form_su2);

void BM_expm_2x2(benchmark::State& state) {
    const Matrix u = rosen_zener(1.5, 0.3).A(0.2);
    for (auto _ : state) benchmark::DoNotOptimize(expm(u));
}
BENCHMARK(BM_expm_2x2);

void BM_pade_lie(benchmark::State& state) {
    const Matrix b = random_skew_symmetric(10, 2, 0.3);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pade_lie_map(b, m));
}
BENCHMARK(BM_pade_lie)->DenseRange(1, 4);

void BM_linear_step(benchmark::State& state, const char* method) {
    const auto prob = skew_problem('a', 10, 10.0);
    const auto spec = parse_method(method);
    const Matrix y = Matrix::identity(10);
    for (auto _ : state) benchmark::DoNotOptimize(step(spec, prob, 1.0, 0.05, y));
}
BENCHMARK_CAPTURE(BM_linear_step, M4GL, "M4GL");
BENCHMARK_CAPTURE(BM_linear_step, M6GL, "M6GL");
BENCHMARK_CAPTURE(BM_linear_step, CF4, "CF4");
BENCHMARK_CAPTURE(BM_linear_step, CAY4, "CAY4");
BENCHMARK_CAPTURE(BM_linear_step, RK4, "RK4");
BENCHMARK_CAPTURE(BM_linear_step, GL_RK4, "GL-RK4");

void BM_split_integrate(benchmark::State& state, const char* method) {
    const auto flow = duffing();
    const auto c = SplitCoefficients::by_name(method);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_split(c, flow, flow.t0, flow.tf, 600));
}
BENCHMARK_CAPTURE(BM_split_integrate, S2, "S2");
BENCHMARK_CAPTURE(BM_split_integrate, SU54, "SU54");
BENCHMARK_CAPTURE(BM_split_integrate, MN64, "MN64");

void BM_isospectral_step(benchmark::State& state) {
    const auto prob = double_bracket(3, 42);
    for (auto _ : state) benchmark::DoNotOptimize(isospectral_step(prob, 3, 0.0, 0.01, prob.Y0));
}
BENCHMARK(BM_isospectral_step);

void BM_find_eigenvalue(benchmark::State& state) {
    const auto p = sl_well(200, 4);
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalue(p, 25.3));
}
BENCHMARK(BM_find_eigenvalue);

}  // namespace

BENCHMARK_MAIN();
