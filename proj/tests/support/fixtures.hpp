#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <ramsey/frontier.hpp>
#include <ramsey/kkt.hpp>
#include <ramsey/ncp.hpp>
#include <ramsey/oracle.hpp>
#include <ramsey/solver.hpp>

namespace fixtures {

using namespace ramsey;

inline EconomyParams four_household() {
    return make_constant_economy(100, 0.03, 1.0, {1, 1, 1, 1}, 1.0, 0.01, {0.9, 0.93, 0.95, 0.98},
                                 {30, 20, 10, 10});
}

// H=1, T=0, a_0=5 with r=0.03, delta=0.01: the one-period economy with c_0 = 6.1.
inline EconomyParams closed_form(double beta = 0.9) {
    return make_constant_economy(0, 0.03, 1.0, {1}, 1.0, 0.01, {beta}, {5});
}

inline std::vector<Utility> logs(int H) { return std::vector<Utility>(static_cast<std::size_t>(H), Utility::logarithmic()); }

inline Vector equal_theta(int H) { return Vector::Constant(H, 1.0 / H); }

inline KKTProblem problem(const EconomyParams& p, Variant variant) {
    return KKTProblem(p, logs(p.households), equal_theta(p.households), variant);
}

// Two identical households.
inline EconomyParams symmetric_pair(int horizon) {
    return make_constant_economy(horizon, 0.03, 1.0, {1, 1}, 1.0, 0.01, {0.95, 0.95}, {5, 5});
}

// H=2, T=3 with distinct patience and curvature (see binding_utilities); the aggregate
// constraint binds at t=3 in the default model.
inline EconomyParams binding_pair() {
    EconomyParams p = make_constant_economy(3, 0.03, 1.0, {1.0, 0.8}, 1.0, 0.01, {0.6, 0.99}, {2, 0.5});
    p.r = {0.03, 0.02, 0.04, 0.03};
    p.omega = {1.0, 1.2, 1.0, 1.1};
    return p;
}

inline std::vector<Utility> binding_utilities() { return {Utility::logarithmic(), Utility::isoelastic(2.0)}; }

inline KKTProblem binding_problem(Variant variant) {
    return KKTProblem(binding_pair(), binding_utilities(), equal_theta(2), variant);
}

struct RandomInstance {
    EconomyParams params;
    std::vector<Utility> utilities;
    Vector theta;

    KKTProblem problem(Variant variant) const { return KKTProblem(params, utilities, theta, variant); }
};

// H in {1,2,3}, T in {1..5}, mixed log / isoelastic utilities, all weights positive.
inline RandomInstance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> households(1, 3);
    std::uniform_int_distribution<int> horizon(1, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    RandomInstance inst;
    EconomyParams& p = inst.params;
    p.households = households(rng);
    p.horizon = horizon(rng);
    p.tau = unit(rng) < 0.5 ? 1.0 : between(1.0, 1.2);
    p.delta = between(0.01, 0.05);
    for (int t = 0; t <= p.horizon; ++t) {
        p.r.push_back(between(0.01, 0.06));
        p.omega.push_back(between(1.0, 1.5));
    }
    double aggregate = 0.0;
    for (int h = 0; h < p.households; ++h) {
        p.labor.push_back(between(0.5, 1.5));
        p.beta.push_back(between(0.5, 0.99));
        p.a0.push_back(between(-0.5, 3.0));
        aggregate += p.a0.back();
    }
    if (aggregate <= 0.1) p.a0[0] += 0.1 - aggregate;

    inst.theta.resize(p.households);
    for (int h = 0; h < p.households; ++h) {
        const double pick = unit(rng);
        if (pick < 0.5) {
            inst.utilities.push_back(Utility::logarithmic());
        } else if (pick < 0.75) {
            inst.utilities.push_back(Utility::isoelastic(between(0.3, 0.9)));
        } else {
            inst.utilities.push_back(Utility::isoelastic(between(1.5, 3.0)));
        }
        inst.theta(h) = between(0.2, 1.0);
    }
    return inst;
}

// Sum of gamma products for the zero-consumption capital path, evaluated term by term.
inline double direct_a_max(const EconomyParams& p) {
    double best = -HUGE_VAL;
    for (int h = 0; h < p.households; ++h) {
        for (int t = 0; t <= p.horizon; ++t) {
            double total = 0.0;
            for (int s = 0; s <= t; ++s) {
                double product = 1.0;
                for (int v = s + 1; v <= t; ++v) product *= p.growth(v);
                total += p.labor_income(h, s) * product;
            }
            double product = 1.0;
            for (int s = 0; s <= t; ++s) product *= p.growth(s);
            total += product * p.a0[h];
            best = std::max(best, total);
        }
    }
    return best;
}

// Root of a monotone scalar function on [lo, hi] with g(lo), g(hi) of opposite sign.
template <class F>
double bisect(F&& g, double lo, double hi, int steps = 200) {
    const double glo = g(lo);
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0.0) == (glo < 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double relative_error(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace fixtures
