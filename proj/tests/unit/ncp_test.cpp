#include <doctest.h>

#include <cmath>

#include <ramsey/error.hpp>
#include <ramsey/ncp.hpp>

#include "fixtures.hpp"

using namespace ramsey;

TEST_SUITE("ncp") {

TEST_CASE("complementarity functions") {
    CHECK(fischer_burmeister(0.0, 3.0) == 0.0);
    CHECK(fischer_burmeister(2.0, 0.0) == 0.0);
    CHECK(fischer_burmeister(1.0, 1.0) == doctest::Approx(std::sqrt(2.0) - 2.0).epsilon(1e-15));
    CHECK(fischer_burmeister(1.0, 1.0) == doctest::Approx(-0.585786).epsilon(1e-6));

    // min(nu, slack) at nu = 0 with positive slack is a root.
    const KKTProblem p = fixtures::binding_problem(Variant::Default);
    const NCPSystem min_system(p, NcpFunction::Min);
    Vector x(4);
    x << 0.0, 0.0, 0.0, 0.3;
    const auto e = min_system.evaluate(x);
    CHECK(e.phi(0) == 0.0);
    CHECK(e.phi(1) == 0.0);

    const auto [gp, gq] = fischer_burmeister_gradient(0.0, 0.0);
    CHECK(gp == doctest::Approx(-1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(gq == gp);
    const auto [hp, hq] = fischer_burmeister_gradient(3.0, 4.0);
    CHECK(hp == doctest::Approx(0.6 - 1.0));
    CHECK(hq == doctest::Approx(0.8 - 1.0));
    CHECK(min_function_gradient(1.0, 2.0) == std::pair{1.0, 0.0});
    CHECK(min_function_gradient(2.0, 1.0) == std::pair{0.0, 1.0});
}

TEST_CASE("reformulated system keeps the equality rows verbatim") {
    const KKTProblem p = fixtures::binding_problem(Variant::Default);
    const NCPSystem sys = reformulate(p, NcpFunction::FischerBurmeister);
    CHECK(sys.dimension() == 4);
    Vector x(4);
    x << 0.0, 0.01, 0.0, 0.3;
    const auto e = sys.evaluate(x);
    CHECK(e.phi(3) == e.inner.residual(3));
    const Vector agg = e.inner.aggregate_capital();
    CHECK(e.phi(1) == doctest::Approx(fischer_burmeister(0.01, agg(2))));
    CHECK_THROWS_AS(NCPSystem(p, NcpFunction::Min).set_multiplier_scale(0.0), DomainError);
}

TEST_CASE("analytic and finite-difference jacobians agree") {
    SUBCASE("default model, interior point") {
        const KKTProblem p = fixtures::binding_problem(Variant::Default);
        NCPSystem sys(p, NcpFunction::FischerBurmeister);
        Vector x(4);
        x << 0.02, 0.01, 0.03, 0.2;
        while (!(sys.evaluate(x).inner.aggregate_capital().segment(1, 3).array() > 0.0).all()) x(3) *= 1.5;
        REQUIRE((sys.evaluate(x).inner.aggregate_capital().segment(1, 3).array() > 0.0).all());
        for (double kappa : {1.0, 7.5}) {
            sys.set_multiplier_scale(kappa);
            const Matrix A = sys.jacobian(x, JacobianMode::Analytic);
            const Matrix F = sys.jacobian(x, JacobianMode::FiniteDifference, 1e-7);
            const double scale = A.cwiseAbs().maxCoeff();
            CHECK((A - F).cwiseAbs().maxCoeff() <= 1e-5 * scale);
        }
    }
    SUBCASE("no-default model") {
        const auto inst = fixtures::binding_pair();
        const KKTProblem p(inst, {Utility::logarithmic(), Utility::isoelastic(2.0)}, fixtures::equal_theta(2),
                           Variant::NoDefault);
        const NCPSystem sys(p, NcpFunction::FischerBurmeister);
        Vector x(5);
        x << 0.01, 0.02, 0.005, 1.2, 0.9;
        const Matrix A = sys.jacobian(x, JacobianMode::Analytic);
        const Matrix F = sys.jacobian(x, JacobianMode::FiniteDifference, 1e-7);
        CHECK((A - F).cwiseAbs().maxCoeff() <= 1e-5 * A.cwiseAbs().maxCoeff());
    }
    SUBCASE("residual jacobian of F itself") {
        const KKTProblem p = fixtures::problem(fixtures::four_household(), Variant::Default);
        const NCPSystem sys(p, NcpFunction::FischerBurmeister);
        Vector x = Vector::Constant(101, 1e-4);
        const Matrix J = sys.residual_jacobian(x);
        const Vector base = evaluate_residual(p, x).residual;
        for (int j : {0, 37, 100}) {
            Vector probe = x;
            const double h = 1e-7 * std::max(std::abs(x(j)), 1.0) * 1e-3;
            probe(j) += h;
            const Vector column = (evaluate_residual(p, probe).residual - base) / h;
            CHECK((column - J.col(j)).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, J.col(j).cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("lambda is linear in nu_{T+1}") {
    const KKTProblem p = fixtures::binding_problem(Variant::Default);
    const auto& par = p.params();
    for (const double base : {0.0, 0.4}) {
        Vector nu = Vector::Constant(4, base);
        const Vector l0 = lambda_backward(p, nu);
        nu(3) += 1.0;
        const Vector column = lambda_backward(p, nu) - l0;
        double product = 1.0;
        for (int t = 3; t >= 0; --t) {
            CHECK(column(t) == doctest::Approx(product).epsilon(1e-14));
            if (t > 0) product *= par.growth(t);
        }
    }
}

TEST_CASE("finite differences fall back to the other side on evaluation failure") {
    const auto one = make_constant_economy(1, 0.03, 1.0, {1}, 1.0, 0.01, {0.9}, {5});
    const KKTProblem p = fixtures::problem(one, Variant::NoDefault);
    const NCPSystem sys(p, NcpFunction::FischerBurmeister);
    // The recursion argument 0.918 / c_1 + nu_1 is barely positive, so a forward step in c_1
    // fails and the column must come from a backward difference.
    Vector x(2);
    x << -0.918 + 1e-9, 1.0;
    REQUIRE_NOTHROW(sys.evaluate(x));
    Vector forward = x;
    forward(1) += 1e-7;
    REQUIRE_THROWS_AS(sys.evaluate(forward), EvaluationFailure);
    const Matrix J = sys.jacobian(x, JacobianMode::FiniteDifference, 1e-7);
    CHECK(J.allFinite());
}

}  // TEST_SUITE
