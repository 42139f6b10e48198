#include "trustregion/binary_trust.hpp"

#include "trustregion/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace trustregion {

namespace {

constexpr double kInnerTol = 1e-15;

// int_a^b (mu - c) tau(mu) dmu
double deviation(const BeliefDensity& tau, double c, double a, double b) {
    const auto [m0, m1] = tau.raw_moments(a, b);
    return m1 - c * m0;
}

std::pair<double, double> psi_unchecked(const UtilityCurve& u, const BeliefDensity& tau,
                                        double alpha, double lo, double hi) {
    const double b = cutoff_belief(u, std::min(lo, hi), std::max(lo, hi));
    const double psi1 = alpha * deviation(tau, lo, 0.0, lo) + (1.0 - alpha) * deviation(tau, lo, b, 1.0);
    const double psi2 = alpha * deviation(tau, hi, hi, 1.0) + (1.0 - alpha) * deviation(tau, hi, 0.0, b);
    return {psi1, psi2};
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("alpha must lie in [0,1], got " + std::to_string(alpha));
    }
}

void check_binary_density(const BeliefDensity& tau) {
    if (tau.kind() != DensityKind::grid) {
        throw InputError("binary trust solver needs a density, not an atom list");
    }
    if (tau.lower() < 0.0 || tau.upper() > 1.0) {
        throw InputError("binary trust solver: density must live on [0,1]");
    }
    if (!tau.full_support() || tau.lower() > 0.0 || tau.upper() < 1.0) {
        throw InputError("binary trust solver: density must have full support on [0,1]");
    }
}

TrustInterval degenerate(const UtilityCurve& u, const BeliefDensity& tau, double alpha) {
    TrustInterval t;
    t.alpha = alpha;
    t.prior = tau.mean();
    t.lo = t.hi = t.cutoff = t.prior;
    t.residuals = psi_unchecked(u, tau, alpha, t.prior, t.prior);
    return t;
}

TrustInterval assemble(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double lo,
                       double hi, int iterations) {
    TrustInterval t;
    t.alpha = alpha;
    t.prior = tau.mean();
    t.lo = lo;
    t.hi = hi;
    t.cutoff = cutoff_belief(u, lo, hi);
    t.residuals = psi_unchecked(u, tau, alpha, lo, hi);
    t.iterations = iterations;
    return t;
}

} // namespace

double cutoff_belief(const UtilityCurve& u, double lo, double hi) {
    check_binary_belief(lo, "cutoff_belief: lo");
    check_binary_belief(hi, "cutoff_belief: hi");
    if (hi < lo) {
        throw InputError("cutoff_belief: lo must not exceed hi");
    }
    if (lo == hi) {
        return lo;
    }
    // int mu U'' = [mu U' - U], so b - lo = D_U(lo, hi) / (U'(hi) - U'(lo)).
    const double denom = u.d1(hi) - u.d1(lo);
    if (!(denom > 0.0)) {
        return 0.5 * (lo + hi);
    }
    const double b = lo + bregman_distance(u, lo, hi) / denom;
    return std::clamp(b, lo, hi);
}

std::pair<double, double> psi_residuals(const UtilityCurve& u, const BeliefDensity& tau,
                                        double alpha, double lo, double hi) {
    check_alpha(alpha);
    check_binary_belief(lo, "psi_residuals: lo");
    check_binary_belief(hi, "psi_residuals: hi");
    if (hi < lo) {
        throw InputError("psi_residuals: lo must not exceed hi");
    }
    return psi_unchecked(u, tau, alpha, lo, hi);
}

double best_response_low(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double hi) {
    const double prior = tau.mean();
    return bisect([&](double lo) { return psi_unchecked(u, tau, alpha, lo, hi).first; }, 0.0,
                  std::min(prior, hi), kInnerTol);
}

double best_response_high(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double lo) {
    const double prior = tau.mean();
    return bisect([&](double hi) { return psi_unchecked(u, tau, alpha, lo, hi).second; },
                  std::max(prior, lo), 1.0, kInnerTol);
}

TrustInterval best_response_iteration(const UtilityCurve& u, const BeliefDensity& tau,
                                      double alpha, double lo_init,
                                      const TrustSolveOptions& opts) {
    check_alpha(alpha);
    check_binary_density(tau);
    const double prior = tau.mean();
    if (alpha <= 0.5) {
        return degenerate(u, tau, alpha);
    }
    double lo = std::clamp(lo_init, 0.0, prior);
    double hi = best_response_high(u, tau, alpha, lo);
    for (int it = 1; it <= opts.max_outer; ++it) {
        const double next = best_response_low(u, tau, alpha, hi);
        const double step = std::abs(next - lo);
        lo = next;
        hi = best_response_high(u, tau, alpha, lo);
        if (step < opts.step_tol) {
            return assemble(u, tau, alpha, lo, hi, it);
        }
    }
    const auto r = psi_unchecked(u, tau, alpha, lo, hi);
    throw SolverError("trust interval: best-response iteration exceeded " +
                          std::to_string(opts.max_outer) + " steps",
                      {r.first, r.second});
}

TrustInterval solve_trust_interval(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                   const TrustSolveOptions& opts) {
    check_alpha(alpha);
    check_binary_density(tau);
    if (alpha <= 0.5) {
        return degenerate(u, tau, alpha);
    }
    if (alpha == 1.0) {
        return assemble(u, tau, alpha, 0.0, 1.0, 0);
    }
    TrustInterval t = best_response_iteration(u, tau, alpha, 0.0, opts);
    if (std::abs(t.residuals.first) > opts.tolerance || std::abs(t.residuals.second) > opts.tolerance) {
        throw SolverError("trust interval: residuals above tolerance",
                          {t.residuals.first, t.residuals.second});
    }
    return t;
}

UniquenessProbe uniqueness_probe(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                 double agree_tol, const TrustSolveOptions& opts) {
    UniquenessProbe p;
    p.from_zero = best_response_iteration(u, tau, alpha, 0.0, opts);
    p.from_prior = best_response_iteration(u, tau, alpha, tau.mean(), opts);
    p.gap = std::max(std::abs(p.from_zero.lo - p.from_prior.lo),
                     std::abs(p.from_zero.hi - p.from_prior.hi));
    p.agree = p.gap <= agree_tol;
    return p;
}

double worst_case_payoff(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double lo,
                         double hi) {
    check_alpha(alpha);
    check_binary_belief(lo, "worst_case_payoff: lo");
    check_binary_belief(hi, "worst_case_payoff: hi");
    if (hi < lo) {
        throw InputError("worst_case_payoff: lo must not exceed hi");
    }
    const double b = cutoff_belief(u, lo, hi);
    // int_a^c (U(x) + U'(x)(mu - x)) tau
    auto tangent = [&](double x, double a, double c) {
        const auto [m0, m1] = tau.raw_moments(a, c);
        return u.eval(x) * m0 + u.d1(x) * (m1 - x * m0);
    };
    const double inside = tau.integrate([&](double m) { return u.eval(m); }, lo, hi);
    const double aligned = tangent(lo, 0.0, lo) + inside + tangent(hi, hi, 1.0);
    const double misaligned = tangent(hi, 0.0, b) + tangent(lo, b, 1.0);
    return alpha * aligned + (1.0 - alpha) * misaligned;
}

std::string to_string(RatioTrend t) {
    switch (t) {
    case RatioTrend::increasing: return "increasing";
    case RatioTrend::decreasing: return "decreasing";
    case RatioTrend::constant: return "constant";
    case RatioTrend::not_monotone: return "not-monotone";
    }
    return "unknown";
}

SensitivityReport sensitivity_compare(const UtilityCurve& u1, const UtilityCurve& u2,
                                      const BeliefDensity& tau, double alpha,
                                      std::size_t ratio_grid) {
    if (ratio_grid < 2) {
        throw InputError("sensitivity_compare: ratio grid needs at least 2 points");
    }
    SensitivityReport rep;
    bool up = false, down = false;
    double prev = u1.d2(0.0) / u2.d2(0.0);
    for (std::size_t i = 1; i < ratio_grid; ++i) {
        const double m = static_cast<double>(i) / static_cast<double>(ratio_grid - 1);
        const double r = u1.d2(m) / u2.d2(m);
        const double tol = 1e-12 * std::max(1.0, std::abs(prev));
        if (r > prev + tol) {
            up = true;
        } else if (r < prev - tol) {
            down = true;
        }
        prev = r;
    }
    rep.ratio_trend = up && down ? RatioTrend::not_monotone
                      : up       ? RatioTrend::increasing
                      : down     ? RatioTrend::decreasing
                                 : RatioTrend::constant;
    rep.within_hypothesis = rep.ratio_trend != RatioTrend::not_monotone;

    rep.first = solve_trust_interval(u1, tau, alpha);
    rep.second = solve_trust_interval(u2, tau, alpha);
    constexpr double eps = 1e-9;
    rep.first_geq_second = rep.first.lo >= rep.second.lo - eps && rep.first.hi >= rep.second.hi - eps;
    rep.second_geq_first = rep.second.lo >= rep.first.lo - eps && rep.second.hi >= rep.first.hi - eps;
    switch (rep.ratio_trend) {
    case RatioTrend::decreasing: rep.matches_prediction = rep.first_geq_second; break;
    case RatioTrend::increasing: rep.matches_prediction = rep.second_geq_first; break;
    case RatioTrend::constant:
        rep.matches_prediction = rep.first_geq_second && rep.second_geq_first;
        break;
    case RatioTrend::not_monotone: rep.matches_prediction = false; break;
    }
    return rep;
}

} // namespace trustregion
