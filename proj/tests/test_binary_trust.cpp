#include "trustregion/binary_trust.hpp"

#include <doctest.h>

#include <cmath>

using namespace trustregion;

namespace {

// Symmetric root of 4 a lo^2 + 4 (1 - a) lo - 3 (1 - a) = 0: quadratic U, uniform tau.
double quadratic_uniform_lo(double a) {
    const double A = 4 * a, B = 4 * (1 - a), C = -3 * (1 - a);
    return (-B + std::sqrt(B * B - 4 * A * C)) / (2 * A);
}

} // namespace

TEST_CASE("cutoff belief") {
    CHECK(cutoff_belief(UtilityCurve::quadratic(), 0.2, 0.6) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cutoff_belief(UtilityCurve::log_score(), 0.2, 0.6) ==
          doctest::Approx(std::log(2.0) / std::log(6.0)).epsilon(1e-9));
    CHECK(std::log(2.0) / std::log(6.0) == doctest::Approx(0.386853).epsilon(1e-6));
    CHECK(cutoff_belief(UtilityCurve::log_score(), 0.7, 0.7) == 0.7);
    CHECK_THROWS_AS(cutoff_belief(UtilityCurve::quadratic(), 0.6, 0.2), InputError);
}

TEST_CASE("balancing residuals at known solutions") {
    const auto q = UtilityCurve::quadratic();
    const auto tau = BeliefDensity::uniform();
    auto [a, b] = psi_residuals(q, tau, 0.5, 0.5, 0.5);
    CHECK(std::abs(a) < 1e-14);
    CHECK(std::abs(b) < 1e-14);
    const double lo = (std::sqrt(10.0) - 1) / 6;
    std::tie(a, b) = psi_residuals(q, tau, 0.75, lo, 1 - lo);
    CHECK(std::abs(a) < 1e-9);
    CHECK(std::abs(b) < 1e-9);
    std::tie(a, b) = psi_residuals(q, tau, 1.0, 0.0, 1.0);
    CHECK(std::abs(a) < 1e-14);
    CHECK(std::abs(b) < 1e-14);
    // Skewed density: residuals vanish at the prior for alpha = 1/2.
    const auto skew = BeliefDensity::from_function([](double x) { return 1 + 2 * x; }, 513);
    std::tie(a, b) = psi_residuals(UtilityCurve::log_score(), skew, 0.5, skew.mean(), skew.mean());
    CHECK(std::abs(a) < 1e-12);
    CHECK(std::abs(b) < 1e-12);
}

TEST_CASE("trust interval golden values against the quadratic-root oracle") {
    const auto q = UtilityCurve::quadratic();
    const auto tau = BeliefDensity::uniform();
    for (double a : {0.6, 0.75, 0.9, 0.97}) {
        const TrustInterval t = solve_trust_interval(q, tau, a);
        CHECK(t.lo == doctest::Approx(quadratic_uniform_lo(a)).epsilon(1e-9));
        CHECK(t.hi == doctest::Approx(1 - quadratic_uniform_lo(a)).epsilon(1e-9));
        CHECK(t.cutoff == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::abs(t.residuals.first) <= 1e-9);
        CHECK(std::abs(t.residuals.second) <= 1e-9);
    }
    const TrustInterval t = solve_trust_interval(q, tau, 0.75);
    CHECK(std::abs(t.lo - 0.360379) < 1e-6);
    CHECK(std::abs(t.hi - 0.639621) < 1e-6);
}

TEST_CASE("low alpha gives the prior") {
    const auto skew = BeliefDensity::from_function([](double x) { return 1 + x; }, 257);
    for (double a : {0.0, 0.2, 0.4, 0.5}) {
        const TrustInterval t = solve_trust_interval(UtilityCurve::log_score(), skew, a);
        CHECK(t.lo == doctest::Approx(skew.mean()));
        CHECK(t.hi == doctest::Approx(skew.mean()));
    }
    CHECK_THROWS_AS(solve_trust_interval(UtilityCurve::quadratic(), BeliefDensity::uniform(), 1.2), InputError);
    CHECK_THROWS_AS(solve_trust_interval(UtilityCurve::quadratic(),
                                         BeliefDensity::atoms({0.2, 0.8}, {0.5, 0.5}), 0.7),
                    InputError);
}

TEST_CASE("interval widens with alpha") {
    const auto tau = BeliefDensity::from_function([](double x) { return 0.5 + x * (1 - x); }, 257);
    for (const auto& u : {UtilityCurve::quadratic(), UtilityCurve::log_score(),
                          UtilityCurve::weighted_quadratic(2.0)}) {
        double plo = tau.mean(), phi = tau.mean();
        for (int k = 1; k <= 10; ++k) {
            const double a = 0.5 + 0.05 * k;
            const TrustInterval t = solve_trust_interval(u, tau, a);
            CHECK(t.lo < plo - 1e-7);
            CHECK(t.hi > phi + 1e-7);
            CHECK(t.lo <= t.cutoff);
            CHECK(t.cutoff <= t.hi);
            plo = t.lo;
            phi = t.hi;
        }
        CHECK(plo <= 1e-6);
        CHECK(phi >= 1 - 1e-6);
    }
}

TEST_CASE("both initializations reach the same interval") {
    const auto tau = BeliefDensity::from_function([](double x) { return 1 + 3 * x * x; }, 513);
    for (double a : {0.55, 0.7, 0.85}) {
        const UniquenessProbe p = uniqueness_probe(UtilityCurve::log_score(), tau, a);
        CHECK(p.agree);
        CHECK(p.gap <= 1e-8);
    }
}

TEST_CASE("solution maximizes the worst-case payoff on a grid") {
    const auto q = UtilityCurve::quadratic();
    const auto tau = BeliefDensity::uniform();
    const double a = 0.75;
    const TrustInterval t = solve_trust_interval(q, tau, a);
    const double best = worst_case_payoff(q, tau, a, t.lo, t.hi);
    double grid_best = -1e300;
    for (int i = 0; i <= 50; ++i) {
        for (int j = 50; j <= 100; ++j) {
            grid_best = std::max(grid_best, worst_case_payoff(q, tau, a, i / 100.0, j / 100.0));
        }
    }
    CHECK(best >= grid_best - 1e-12);
    CHECK(best - grid_best < 1e-3);
}

TEST_CASE("comparative statics in curvature") {
    const auto tau = BeliefDensity::uniform();
    const auto q = UtilityCurve::quadratic();
    const SensitivityReport same = sensitivity_compare(q, q, tau, 0.75);
    CHECK(same.first_geq_second);
    CHECK(same.second_geq_first);
    CHECK(same.matches_prediction);

    const auto dec = UtilityCurve::custom_grid({0.0, 1.0}, {6.0, 2.0});
    const SensitivityReport r1 = sensitivity_compare(dec, q, tau, 0.75);
    CHECK(r1.ratio_trend == RatioTrend::decreasing);
    CHECK(r1.first.lo > r1.second.lo);
    CHECK(r1.first.hi > r1.second.hi);
    CHECK(r1.matches_prediction);

    const SensitivityReport r2 = sensitivity_compare(UtilityCurve::weighted_quadratic(4.0), q, tau, 0.75);
    CHECK(r2.within_hypothesis);
    CHECK(r2.first_geq_second);
    CHECK(r2.matches_prediction);
}
