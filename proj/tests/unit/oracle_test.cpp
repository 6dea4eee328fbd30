#include <doctest.h>

#include <cmath>
#include <random>

#include <ramsey/error.hpp>
#include <ramsey/oracle.hpp>

#include "fixtures.hpp"

using namespace ramsey;

TEST_SUITE("oracle") {

TEST_CASE("capital elimination reproduces the forward recursion") {
    const auto p = fixtures::four_household();
    const AffineCapitalMap map = eliminate_capital(p);
    const Allocation seed = feasible_seed(p);
    CHECK((map.apply(seed.consumption) - seed.capital).cwiseAbs().maxCoeff() <= 1e-12 * seed.capital.cwiseAbs().maxCoeff());

    // Zero consumption leaves the pure accumulation path, whose maximum is a_max.
    const Matrix zero = Matrix::Zero(4, 101);
    CHECK(map.apply(zero) == map.base);
    CHECK(map.base.maxCoeff() == doctest::Approx(existence_bounds(p).a_max).epsilon(1e-12));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(0.1, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = fixtures::random_instance(rng);
        const KKTProblem prob = inst.problem(Variant::Default);
        Matrix cons(inst.params.households, inst.params.horizon + 1);
        for (Eigen::Index i = 0; i < cons.size(); ++i) cons(i) = c(rng);
        const Matrix forward = capital_forward(prob, cons);
        const Matrix affine = eliminate_capital(inst.params).apply(cons);
        CHECK((affine - forward).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, forward.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("closed-form single period") {
    const ScalarizedProblem sp{fixtures::closed_form(), fixtures::logs(1), Vector::Ones(1), Variant::Default};
    const OracleResult r = solve_scalarized(sp);
    REQUIRE(r.converged);
    CHECK(r.allocation.consumption(0, 0) == doctest::Approx(6.1).epsilon(1e-7));
    CHECK(r.objective == doctest::Approx(std::log(6.1)).epsilon(1e-8));
    CHECK(r.upper_bound >= r.objective);
}

TEST_CASE("Euler fixed point gives flat consumption") {
    // gamma = 1 / 0.9 with beta = 0.9.
    const auto p = make_constant_economy(1, 1.0 / 0.9 - 1.0 + 0.01, 1.0, {1}, 1.0, 0.01, {0.9}, {5});
    for (Variant v : {Variant::Default, Variant::NoDefault}) {
        const OracleResult r = solve_scalarized({p, fixtures::logs(1), Vector::Ones(1), v});
        REQUIRE(r.converged);
        CHECK(r.allocation.consumption(0, 0) == doctest::Approx(r.allocation.consumption(0, 1)).epsilon(1e-6));
    }
}

TEST_CASE("iterates stay strictly feasible and multipliers pass the audit") {
    const KKTProblem prob = fixtures::binding_problem(Variant::Default);
    const OracleResult r = solve_scalarized(ScalarizedProblem::from(prob));
    REQUIRE(r.converged);
    CHECK((r.allocation.consumption.array() > 0.0).all());
    CHECK((r.allocation.aggregate_capital().tail(4).array() > 0.0).all());
    CHECK(kkt_residual_full(prob, r.allocation, r.multipliers) <= 1e-6);
    CHECK(r.multipliers.nu(2) > 1e-3);  // the binding period
}

TEST_CASE("option and shape errors") {
    ScalarizedProblem sp{fixtures::closed_form(), fixtures::logs(2), Vector::Ones(1), Variant::Default};
    CHECK_THROWS_AS(solve_scalarized(sp), DimensionError);
    sp.utilities = fixtures::logs(1);
    OracleOptions o;
    o.barrier_decrease = 1.0;
    CHECK_THROWS_AS(solve_scalarized(sp, o), DomainError);
}

TEST_CASE("stage limit produces a failure report") {
    const ScalarizedProblem sp = ScalarizedProblem::from(fixtures::binding_problem(Variant::Default));
    OracleOptions o;
    o.max_stages = 2;
    const OracleResult r = solve_scalarized(sp, o);
    CHECK_FALSE(r.converged);
    CHECK(r.stages == 2);
}

}  // TEST_SUITE
