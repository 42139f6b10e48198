#include "trustregion/core_model.hpp"
#include "trustregion/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace trustregion;

TEST_CASE("belief validation") {
    CHECK_NOTHROW(Belief({0.2, 0.3, 0.5}));
    CHECK_THROWS_AS(Belief({0.2, 0.3, 0.6}), InputError);
    CHECK_THROWS_AS(Belief({-0.1, 1.1}), InputError);
    CHECK(Belief::binary(0.3).mu() == doctest::Approx(0.3));
    CHECK_THROWS_AS(Belief::binary(1.2), InputError);
    CHECK_THROWS_AS(Belief({0.2, 0.3, 0.5}).mu(), InputError);
}

TEST_CASE("bregman distance worked values") {
    const auto q = UtilityCurve::quadratic();
    CHECK(bregman_distance(q, 0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bregman_distance(q, 0.8, 0.2) == doctest::Approx(0.36).epsilon(1e-12));
    const auto h = UtilityCurve::log_score();
    const double kl = 0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.75);
    CHECK(bregman_distance(h, 0.5, 0.25) == doctest::Approx(kl).epsilon(1e-12));
    CHECK(kl == doctest::Approx(0.143841).epsilon(1e-6));
    CHECK_THROWS_AS(bregman_distance(q, 1.5, 0.2), InputError);
    CHECK(bregman_distance(q, Belief::binary(0.8), Belief::binary(0.2)) == doctest::Approx(0.36));
}

TEST_CASE("closed-form derivatives match finite differences") {
    for (const auto& u : {UtilityCurve::quadratic(), UtilityCurve::log_score(),
                          UtilityCurve::weighted_quadratic(4.0)}) {
        for (double mu : {0.1, 0.3, 0.5, 0.77, 0.93}) {
            const double h = 1e-5;
            const double d1 = (u.eval(mu + h) - u.eval(mu - h)) / (2 * h);
            const double d2 = (u.d1(mu + h) - u.d1(mu - h)) / (2 * h);
            CHECK(u.d1(mu) == doctest::Approx(d1).epsilon(1e-6));
            CHECK(u.d2(mu) == doctest::Approx(d2).epsilon(1e-6));
            CHECK(u.d2(mu) > 0.0);
        }
        // U'(b) - U'(a) equals the integral of U''.
        const double a = 0.15, b = 0.85;
        const double integral = integrate_simpson([&](double x) { return u.d2(x); }, a, b, 1e-12);
        CHECK(integral == doctest::Approx(u.d1(b) - u.d1(a)).epsilon(1e-8));
    }
}

TEST_CASE("custom grid utility with constant curvature behaves like quadratic") {
    const auto g = UtilityCurve::custom_grid({0.0, 0.5, 1.0}, {2.0, 2.0, 2.0});
    const auto q = UtilityCurve::quadratic();
    for (double m : {0.1, 0.4, 0.9}) {
        for (double mp : {0.05, 0.5, 0.95}) {
            CHECK(bregman_distance(g, m, mp) == doctest::Approx(bregman_distance(q, m, mp)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(UtilityCurve::custom_grid({0.0, 1.0}, {1.0, -1.0}), InputError);
}

TEST_CASE("worst case report picks the opposite extreme") {
    const auto q = UtilityCurve::quadratic();
    CHECK(worst_case_report(q, BeliefInterval{0.4, 0.6}, 0.9) == 0.4);
    CHECK(worst_case_report(UtilityCurve::log_score(), BeliefInterval{0.4, 0.6}, 0.9) == 0.4);
    CHECK(worst_case_report(q, BeliefInterval{0.36038, 0.63962}, 0.5) == 0.36038);
    CHECK(worst_case_report(q, BeliefInterval{0.5, 0.5}, 0.1) == 0.5);
    CHECK_THROWS_AS(worst_case_report(q, BeliefInterval{0.6, 0.4}, 0.1), InputError);
    CHECK(worst_case_report(q, std::vector<double>{0.2, 0.5, 0.7}, 0.6) == 0.2);
    // Always on the boundary.
    for (int i = 0; i <= 100; ++i) {
        const double r = worst_case_report(q, BeliefInterval{0.3, 0.65}, i / 100.0);
        CHECK((r == 0.3 || r == 0.65));
    }
}

TEST_CASE("density moments") {
    const auto u = BeliefDensity::uniform();
    Moments m = density_moments(u, 0.0, 1.0);
    CHECK(m.mass == doctest::Approx(1.0));
    CHECK(m.mean == doctest::Approx(0.5));
    m = density_moments(u, 0.5, 1.0);
    CHECK(m.mass == doctest::Approx(0.5));
    CHECK(m.mean == doctest::Approx(0.75));
    const auto a = BeliefDensity::atoms({0.2, 0.8}, {0.5, 0.5});
    m = density_moments(a, 0.0, 0.5);
    CHECK(m.mass == doctest::Approx(0.5));
    CHECK(m.mean == doctest::Approx(0.2));
    CHECK_THROWS_AS(density_moments(u, 0.7, 0.2), InputError);
    CHECK(std::isnan(density_moments(a, 0.3, 0.4).mean));
}

TEST_CASE("grid density normalization, cdf and mean") {
    const auto d = BeliefDensity::grid({0.0, 0.5, 1.0}, {1.0, 3.0, 1.0});
    CHECK(d.cdf(1.0) == doctest::Approx(1.0));
    CHECK(d.mean() == doctest::Approx(0.5));
    CHECK(d.full_support());
    const auto [m0, m1] = d.raw_moments(0.0, 0.5);
    CHECK(m0 == doctest::Approx(0.5));
    CHECK(m1 / m0 < 0.5);
    CHECK(d.integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(integrate_simpson([&](double x) { return x * x * d.pdf(x); }, 0.0, 1.0, 1e-13)).epsilon(1e-9));
    CHECK_THROWS_AS(BeliefDensity::grid({0.0, 1.0}, {-1.0, 1.0}), InputError);
    CHECK_THROWS_AS(BeliefDensity::atoms({0.2, 0.8}, {0.5, 0.6}), InputError);
}

TEST_CASE("bregman properties on random pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    const auto q = UtilityCurve::quadratic();
    const auto h = UtilityCurve::log_score();
    const auto w = UtilityCurve::weighted_quadratic(3.0);
    for (int i = 0; i < 2000; ++i) {
        const double m = unif(rng), mp = unif(rng);
        CHECK(bregman_distance(w, m, mp) >= -1e-15);
        CHECK(std::abs(bregman_distance(q, m, mp) - (m - mp) * (m - mp)) <= 1e-12);
        const double kl = m * std::log(m / mp) + (1 - m) * std::log((1 - m) / (1 - mp));
        CHECK(std::abs(bregman_distance(h, m, mp) - kl) <= 1e-12);
        // Moving the second argument away from m increases the distance.
        const double dir = mp > m ? 1.0 : -1.0;
        const double step = 0.5 * std::min(std::abs(mp - m), dir > 0 ? 0.995 - mp : mp - 0.005);
        if (step > 1e-6) {
            CHECK(bregman_distance(h, m, mp + dir * step) > bregman_distance(h, m, mp));
        }
    }
}

TEST_CASE("bregman for a potential on R^N") {
    auto f = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
    auto g = [](const std::vector<double>& x) { return std::vector<double>{2 * x[0], 2 * x[1], 2 * x[2]}; };
    CHECK(bregman_distance(f, g, {0.2, 0.3, 0.5}, {0.5, 0.25, 0.25}) ==
          doctest::Approx(0.09 + 0.0025 + 0.0625));
}
