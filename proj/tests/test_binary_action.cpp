#include "trustregion/binary_action.hpp"
#include "trustregion/errors.hpp"

#include <doctest.h>

#include <random>

using namespace trustregion;

TEST_CASE("worked example: loss 1/2, gain 1") {
    const auto d = RelativePayoffDist::atoms({-1.0, 2.0}, {0.5, 0.5});
    CHECK(d.loss() == doctest::Approx(0.5));
    CHECK(d.gain() == doctest::Approx(1.0));

    const BinaryActionSolution hi = solve_binary_action(d, 0.8);
    CHECK(hi.alpha_hat == doctest::Approx(2.0 / 3.0));
    CHECK(hi.regime == ActionRegime::full_trust);
    CHECK(hi.sigma_low == 0.0);
    CHECK(hi.sigma_high == 1.0);
    CHECK(hi.value == doctest::Approx(0.7));
    CHECK(hi.no_adviser_value == doctest::Approx(0.5));

    const BinaryActionSolution lo = solve_binary_action(d, 0.6);
    CHECK(lo.regime == ActionRegime::no_trust);
    CHECK(lo.sigma_low == 1.0);
    CHECK(lo.sigma_high == 1.0);
    CHECK(lo.value == doctest::Approx(0.5));

    const BinaryActionSolution mid = solve_binary_action(d, 2.0 / 3.0);
    CHECK(mid.regime == ActionRegime::boundary_both);
    REQUIRE(mid.alternative.has_value());
    CHECK(mid.value == doctest::Approx(0.5));
}

TEST_CASE("symmetric loss and gain put the threshold at one half") {
    const auto d = RelativePayoffDist::atoms({-1.0, 1.0}, {0.5, 0.5});
    const auto s = solve_binary_action(d, 0.7);
    CHECK(s.alpha_hat == doctest::Approx(0.5));
    CHECK(s.regime == ActionRegime::full_trust);
}

TEST_CASE("value is piecewise linear with a kink at the threshold") {
    const auto d = RelativePayoffDist::atoms({-3.0, 1.0, 2.0}, {0.2, 0.5, 0.3});
    const double L = d.loss(), G = d.gain();
    const double ah = std::max(L, G) / (L + G);
    std::vector<double> alphas;
    for (int i = 0; i <= 100; ++i) {
        alphas.push_back(i / 100.0);
    }
    const auto curve = binary_action_value_curve(d, alphas);
    for (const auto& p : curve) {
        const double expect = p.alpha <= ah ? std::max(0.0, G - L) : p.alpha * G - (1 - p.alpha) * L;
        CHECK(p.value == doctest::Approx(expect).epsilon(1e-12));
    }
    const double eps = 1e-4;
    const double left = (solve_binary_action(d, ah).value - solve_binary_action(d, ah - eps).value) / eps;
    const double right = (solve_binary_action(d, ah + eps).value - solve_binary_action(d, ah).value) / eps;
    CHECK(left == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(right == doctest::Approx(L + G).epsilon(1e-9));
}

TEST_CASE("solution is the best all-or-nothing pair and beats mixing") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double L = 0.1 + U(rng), G = 0.1 + U(rng), a = U(rng);
        const auto d = RelativePayoffDist::atoms({-L / 0.4, G / 0.6}, {0.4, 0.6});
        const auto s = solve_binary_action(d, a);
        for (int i = 0; i <= 10; ++i) {
            for (int j = 0; j <= 10; ++j) {
                CHECK(binary_action_payoff(d.loss(), d.gain(), a, i / 10.0, j / 10.0) <= s.value + 1e-12);
            }
        }
    }
}

TEST_CASE("adversary kernels certify the regime") {
    const auto d = RelativePayoffDist::atoms({-1.0, 2.0}, {0.5, 0.5});
    const auto full = rationalizing_adversary(d, 0.8);
    REQUIRE(full.size() == 1);
    CHECK(full[0].tag == ActionRegime::full_trust);
    CHECK(full[0].certified);

    const auto none = rationalizing_adversary(d, 0.6);
    REQUIRE(none.size() == 1);
    CHECK(none[0].tag == ActionRegime::no_trust);
    CHECK(none[0].certified);
    CHECK(none[0].gamma == doctest::Approx(0.6 * 0.5 / (0.4 * 1.0)));
    CHECK((none[0].beta.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);

    const auto both = rationalizing_adversary(d, 2.0 / 3.0);
    CHECK(both.size() == 2);
    for (const auto& k : both) {
        CHECK(k.certified);
    }
}

TEST_CASE("gamma equals three quarters in the second worked case") {
    // L = 1, G = 2, alpha = 0.6: gamma = alpha L / ((1 - alpha) G) = 0.75.
    const auto d = RelativePayoffDist::atoms({-2.0, 4.0}, {0.5, 0.5});
    const auto k = rationalizing_adversary(d, 0.6);
    REQUIRE(k.size() == 1);
    CHECK(k[0].gamma == doctest::Approx(0.75));
    CHECK(k[0].certified);
}

TEST_CASE("density-backed payoff distribution") {
    const auto law = BeliefDensity::uniform(-1.0, 2.0);
    const auto d = RelativePayoffDist::density(law);
    CHECK(d.loss() == doctest::Approx(1.0 / 6.0));
    CHECK(d.gain() == doctest::Approx(2.0 / 3.0));
    const auto ks = rationalizing_adversary(d, 0.7);
    REQUIRE_FALSE(ks.empty());
    CHECK(ks[0].certified);
}

TEST_CASE("genericity violations are rejected") {
    CHECK_THROWS_AS(solve_binary_action(RelativePayoffDist::atoms({1.0, 2.0}, {0.5, 0.5}), 0.7),
                    PreconditionError);
    CHECK_THROWS_AS(solve_binary_action(RelativePayoffDist::atoms({-1.0, 0.0, 1.0}, {0.3, 0.4, 0.3}), 0.7),
                    PreconditionError);
    CHECK_THROWS_AS(RelativePayoffDist::atoms({-1.0, 1.0}, {0.5, 0.6}), InputError);
}
