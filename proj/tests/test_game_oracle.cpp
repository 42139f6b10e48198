#include "trustregion/errors.hpp"
#include "trustregion/game_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace trustregion;

namespace {

std::vector<double> grid01(int n) {
    std::vector<double> v;
    for (int i = 0; i <= n; ++i) {
        v.push_back(static_cast<double>(i) / n);
    }
    return v;
}

FiniteGame small_binary(double alpha) {
    const std::vector<double> mus = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const std::vector<double> tau(6, 1.0 / 6);
    return binary_quadratic_game(mus, tau, grid01(20), alpha);
}

} // namespace

TEST_CASE("fully aligned adviser earns the full-information value") {
    const FiniteGame g = small_binary(1.0);
    const SaddleSolution s = solve_saddle(g);
    double expect = 0.0;
    for (std::size_t k = 0; k < g.n_messages(); ++k) {
        const double mu = g.posteriors[k][1];
        expect -= g.tau[k] * mu * (1 - mu);
    }
    CHECK(s.value == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::abs(s.duality_gap) <= 1e-9);
}

TEST_CASE("fully misaligned adviser is worthless") {
    const FiniteGame g = small_binary(0.0);
    const SaddleSolution s = solve_saddle(g);
    CHECK(s.value == doctest::Approx(no_adviser_value(g)).epsilon(1e-10));
    CHECK(no_adviser_value(g) == doctest::Approx(-0.25));
    const AdviserValue v = adviser_value(g);
    CHECK(std::abs(v.v) <= 1e-9);
}

TEST_CASE("value is nondecreasing in alpha and saddle gaps close") {
    double prev = -1e300;
    for (int i = 0; i <= 10; ++i) {
        const FiniteGame g = small_binary(i / 10.0);
        const SaddleSolution s = solve_saddle(g);
        CHECK(s.value >= prev - 1e-10);
        CHECK(std::abs(s.duality_gap) <= 1e-8);
        CHECK(s.exploitability.first <= 1e-8);
        CHECK(s.exploitability.second <= 1e-8);
        CHECK(agent_guarantee(g, s.agent_strategy) == doctest::Approx(s.value).epsilon(1e-9));
        CHECK(adversary_guarantee(g, s.adversary_strategy) == doctest::Approx(s.minimax_value).epsilon(1e-9));
        prev = s.value;
    }
}

TEST_CASE("duplicating a message leaves the value unchanged") {
    const double a = 0.7;
    const FiniteGame g = small_binary(a);
    std::vector<double> mus = {0.0, 0.2, 0.4, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> tau(7, 1.0 / 6);
    tau[2] = tau[3] = 1.0 / 12;
    const FiniteGame h = binary_quadratic_game(mus, tau, grid01(20), a);
    CHECK(solve_saddle(h).value == doctest::Approx(solve_saddle(g).value).epsilon(1e-9));
}

TEST_CASE("binary-action game matches the all-or-nothing solution") {
    const FiniteGame g = binary_action_game({-1.0, 2.0}, {0.5, 0.5}, 0.8);
    const SaddleSolution s = solve_saddle(g);
    const double base = no_adviser_value(g);
    // relative to always playing a1, the full-trust value is 0.7
    CHECK(s.value == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(base == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("trust-region structure holds at the equilibrium but not for a constant rule") {
    const FiniteGame g = small_binary(0.75);
    const SaddleSolution s = solve_saddle(g);
    const TrsReport ok = verify_trs_structure(g, s);
    CHECK(ok.all_on_path_pass);
    CHECK(ok.worst_margin <= 1e-7);

    SaddleSolution bad = s;
    bad.agent_strategy.setZero();
    bad.agent_strategy.col(0).setOnes();  // always report action 0
    const TrsReport r = verify_trs_structure(g, bad);
    CHECK_FALSE(r.all_on_path_pass);
}

TEST_CASE("three-state lattice of posteriors: adviser value grows with alpha") {
    const auto pts = simplex_lattice(3, 5);
    std::vector<double> tau(pts.size(), 1.0 / static_cast<double>(pts.size()));
    std::vector<double> prior(3, 0.0);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        for (std::size_t w = 0; w < 3; ++w) {
            prior[w] += tau[k] * pts[k][w];
        }
    }
    const Eigen::MatrixXd u = quadratic_scoring_payoff(pts, 3);
    double prev = 0.0;
    for (double a : {0.0, 0.3, 0.6, 0.9}) {
        const AdviserValue v = adviser_value(make_game(prior, pts, tau, u, a));
        CHECK(v.v >= prev - 1e-9);
        if (a == 0.0) {
            CHECK(std::abs(v.v) <= 1e-9);
        }
        prev = v.v;
    }
    CHECK(prev > 0.1);
}

TEST_CASE("full-information experiment over three states: valuable only above one third") {
    const std::vector<double> prior(3, 1.0 / 3);
    const auto [post, tau] = posteriors_from_signals(Eigen::MatrixXd::Identity(3, 3), prior);
    const Eigen::MatrixXd u = quadratic_scoring_payoff(simplex_lattice(3, 32), 3);
    CHECK(std::abs(adviser_value(make_game(prior, post, tau, u, 0.33)).v) <= 1e-9);
    CHECK(adviser_value(make_game(prior, post, tau, u, 0.40)).v > 1e-6);
}

TEST_CASE("malformed games are rejected") {
    FiniteGame g = small_binary(0.5);
    g.tau[0] += 0.1;
    CHECK_THROWS_AS(check_game(g), InputError);
    g = small_binary(0.5);
    g.prior = {0.3, 0.7};
    CHECK_THROWS_AS(check_game(g), InputError);
    g = small_binary(0.5);
    g.alpha = 1.5;
    CHECK_THROWS_AS(check_game(g), InputError);
}
