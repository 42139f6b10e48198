#include "trustregion/adversary_transport.hpp"

#include <doctest.h>

#include <cmath>

using namespace trustregion;

namespace {

struct Instance {
    UtilityCurve u = UtilityCurve::quadratic();
    BeliefDensity tau = BeliefDensity::uniform();
};

} // namespace

TEST_CASE("high-alpha map endpoints and mass") {
    Instance in;
    const double a = 0.75;
    const TrustInterval t = solve_trust_interval(in.u, in.tau, a);
    const TransportMap m = build_tre_map(in.u, in.tau, a, t);
    CHECK(m.regime == Regime::high_alpha);
    REQUIRE(m.pieces.size() == 2);
    CHECK(m(0.0) == doctest::Approx(t.hi).epsilon(1e-12));
    const double eta = a * (1 - t.hi) * (1 - t.hi) / 2;
    CHECK(eta == doctest::Approx(0.048702).epsilon(1e-5));
    CHECK(m.pieces[0].target_mass() == doctest::Approx(eta).epsilon(1e-12));
    for (const auto& p : m.pieces) {
        CHECK(std::abs(p.source_mass() - p.target_mass()) <= 1e-9);
        double prev = -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = p.src_lo() + (p.src_hi() - p.src_lo()) * i / 200.0;
            const double y = p(x);
            CHECK(y >= prev - 1e-15);
            CHECK(y >= p.tgt_lo() - 1e-12);
            CHECK(y <= p.tgt_hi() + 1e-12);
            prev = y;
        }
    }
    CHECK(m.pieces[1].tgt_lo() == 0.0);
    CHECK(m.pieces[1].tgt_hi() == doctest::Approx(t.lo));
}

TEST_CASE("certified map passes the pushforward check; perturbations do not") {
    Instance in;
    for (double a : {0.6, 0.75, 0.9}) {
        const TrustInterval t = solve_trust_interval(in.u, in.tau, a);
        const TransportMap m = build_tre_map(in.u, in.tau, a, t);
        const ConsistencyReport r = verify_posterior_consistency(m, in.tau, a, t, 200);
        CHECK(r.max_deviation <= 1e-6);
        CHECK(r.cells_checked >= 200);

        TrustInterval bad = t;
        bad.hi += 0.05;
        const TransportMap mb = build_tre_map_unchecked(in.u, in.tau, a, bad);
        CHECK(verify_posterior_consistency(mb, in.tau, a, bad, 200).max_deviation >= 0.01);
        CHECK_THROWS_AS(build_tre_map(in.u, in.tau, a, bad), PreconditionError);

        const TransportMap to_one = constant_map(1.0, t, a);
        CHECK(verify_posterior_consistency(to_one, in.tau, a, t, 200).max_deviation > 0.01);
    }
}

TEST_CASE("map sends each belief to a Bregman-farthest report") {
    const auto tau = BeliefDensity::from_function([](double x) { return 1 + x; }, 257);
    const auto u = UtilityCurve::log_score();
    const double a = 0.8;
    const TrustInterval t = solve_trust_interval(u, tau, a);
    const TransportMap m = build_tre_map(u, tau, a, t);
    for (int i = 0; i <= 400; ++i) {
        const double mu = i / 400.0;
        const double sent = std::clamp(m(mu), t.lo, t.hi);
        const double best = bregman_distance(u, mu, worst_case_report(u, BeliefInterval{t.lo, t.hi}, mu));
        CHECK(bregman_distance(u, mu, sent) >= best - 1e-12);
    }
    CHECK(verify_posterior_consistency(m, tau, a, t, 200).max_deviation <= 1e-6);
}

TEST_CASE("low-alpha thresholds follow the mass balance") {
    // int_0^L (1/2 - x) dx = (a/(1-a)) * 1/8  =>  L = (1 - sqrt(1 - a/(1-a))) / 2 on the uniform density.
    const auto [mu_L, mu_H] = low_alpha_thresholds(BeliefDensity::uniform(), 0.4);
    const double expect = (1 - std::sqrt(1 - 0.4 / 0.6)) / 2;
    CHECK(mu_L == doctest::Approx(expect).epsilon(1e-10));
    CHECK(mu_L == doctest::Approx(0.211325).epsilon(1e-6));
    CHECK(mu_H == doctest::Approx(1 - expect).epsilon(1e-10));

    Instance in;
    for (double a : {0.1, 0.3, 0.4, 0.5}) {
        const TrustInterval t = solve_trust_interval(in.u, in.tau, a);
        const TransportMap m = build_tre_map(in.u, in.tau, a, t);
        CHECK(m.regime == Regime::low_alpha);
        const ConsistencyReport r = verify_posterior_consistency(m, in.tau, a, t, 200);
        CHECK(r.max_deviation <= 1e-6);
    }
}

TEST_CASE("no misaligned mass gives zero deviation") {
    Instance in;
    TrustInterval t;
    t.lo = 0.0;
    t.hi = 1.0;
    t.prior = 0.5;
    t.alpha = 1.0;
    const TransportMap m = build_tre_map(in.u, in.tau, 1.0, t);
    CHECK(verify_posterior_consistency(m, in.tau, 1.0, t, 200).max_deviation <= 1e-12);
    CHECK(verify_posterior_consistency(constant_map(0.3, t, 1.0), in.tau, 1.0, t, 200).max_deviation <= 1e-12);
}

TEST_CASE("serial and parallel verification agree") {
    Instance in;
    const TrustInterval t = solve_trust_interval(in.u, in.tau, 0.7);
    const TransportMap m = build_tre_map(in.u, in.tau, 0.7, t);
    const auto a = verify_posterior_consistency(m, in.tau, 0.7, t, 300, Exec::serial);
    const auto b = verify_posterior_consistency(m, in.tau, 0.7, t, 300, Exec::parallel);
    CHECK(a.max_deviation == b.max_deviation);
    CHECK(a.cells_checked == b.cells_checked);
}
