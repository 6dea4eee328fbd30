#include <benchmark/benchmark.h>

#include <ramsey/ncp.hpp>
#include <ramsey/oracle.hpp>
#include <ramsey/solver.hpp>

using namespace ramsey;

namespace {

KKTProblem economy(int horizon, Variant variant) {
    const auto p = make_constant_economy(horizon, 0.03, 1.0, {1, 1, 1, 1}, 1.0, 0.01, {0.9, 0.93, 0.95, 0.98},
                                         {30, 20, 10, 10});
    return KKTProblem(p, std::vector<Utility>(4, Utility::logarithmic()), Vector::Constant(4, 0.25), variant);
}

Variant variant_of(const benchmark::State& state) {
    return state.range(1) == 0 ? Variant::Default : Variant::NoDefault;
}

void BM_Solve(benchmark::State& state) {
    const KKTProblem p = economy(static_cast<int>(state.range(0)), variant_of(state));
    for (auto _ : state) {
        const SolveReport r = solve(p);
        if (!r.converged) state.SkipWithError("solver did not converge");
        benchmark::DoNotOptimize(r.welfare.data());
    }
}
BENCHMARK(BM_Solve)->ArgsProduct({{25, 100, 200}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Residual(benchmark::State& state) {
    const KKTProblem p = economy(static_cast<int>(state.range(0)), variant_of(state));
    const Vector x = solve(p).unknowns;
    for (auto _ : state) {
        const ResidualEvaluation e = evaluate_residual(p, x);
        benchmark::DoNotOptimize(e.residual.data());
    }
}
BENCHMARK(BM_Residual)->ArgsProduct({{100, 400}, {0, 1}});

void BM_Jacobian(benchmark::State& state) {
    const KKTProblem p = economy(100, variant_of(state));
    const Vector x = solve(p).unknowns;
    const NCPSystem sys = reformulate(p);
    const auto mode = state.range(0) == 0 ? JacobianMode::Analytic : JacobianMode::FiniteDifference;
    for (auto _ : state) {
        const Matrix J = sys.jacobian(x, mode);
        benchmark::DoNotOptimize(J.data());
    }
}
BENCHMARK(BM_Jacobian)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_Oracle(benchmark::State& state) {
    const ScalarizedProblem sp = ScalarizedProblem::from(economy(static_cast<int>(state.range(0)), variant_of(state)));
    for (auto _ : state) {
        const OracleResult r = solve_scalarized(sp);
        if (!r.converged) state.SkipWithError("oracle did not converge");
        benchmark::DoNotOptimize(r.welfare.data());
    }
}
BENCHMARK(BM_Oracle)->ArgsProduct({{10, 20}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
