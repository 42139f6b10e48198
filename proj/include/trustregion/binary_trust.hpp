#pragma once

#include "trustregion/core_model.hpp"

#include <string>
#include <utility>

namespace trustregion {

/// Binary-state trust interval [lo, hi] with the adversary's cutoff belief.
struct TrustInterval {
    double lo = 0.5;
    double hi = 0.5;
    double cutoff = 0.5;
    double alpha = 0.0;
    double prior = 0.5;
    /// (Psi1, Psi2) evaluated at (lo, hi).
    std::pair<double, double> residuals{0.0, 0.0};
    int iterations = 0;
};

struct TrustSolveOptions {
    double tolerance = 1e-9;   ///< residual tolerance on |Psi1|, |Psi2|
    double step_tol = 1e-10;   ///< stop when successive lo iterates differ by less
    int max_outer = 10000;
};

/// Curvature-weighted mean of mu over [lo, hi]: int mu U'' / int U''.
double cutoff_belief(const UtilityCurve& u, double lo, double hi);

/// Balancing residuals (Psi1, Psi2) at (lo, hi).
std::pair<double, double> psi_residuals(const UtilityCurve& u, const BeliefDensity& tau,
                                        double alpha, double lo, double hi);

/// Root of Psi1(., hi) in [0, prior].
double best_response_low(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double hi);
/// Root of Psi2(lo, .) in [prior, 1].
double best_response_high(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double lo);

/// Unique solution of the balancing system (degenerate at the prior for alpha <= 1/2).
TrustInterval solve_trust_interval(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                   const TrustSolveOptions& opts = {});

/// Plain fixed-point iteration lo <- b1(b2(lo)) from a given start.
TrustInterval best_response_iteration(const UtilityCurve& u, const BeliefDensity& tau,
                                      double alpha, double lo_init,
                                      const TrustSolveOptions& opts = {});

struct UniquenessProbe {
    TrustInterval from_zero;
    TrustInterval from_prior;
    double gap = 0.0;  ///< max endpoint difference
    bool agree = false;
};

/// Runs best_response_iteration from lo = 0 and lo = prior and compares.
UniquenessProbe uniqueness_probe(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                 double agree_tol = 1e-8, const TrustSolveOptions& opts = {});

/// Agent payoff of the trust-interval strategy [lo, hi] against the worst-case adversary.
double worst_case_payoff(const UtilityCurve& u, const BeliefDensity& tau, double alpha, double lo,
                         double hi);

enum class RatioTrend { increasing, decreasing, constant, not_monotone };

std::string to_string(RatioTrend t);

struct SensitivityReport {
    TrustInterval first;
    TrustInterval second;
    bool first_geq_second = false;  ///< lo1 >= lo2 and hi1 >= hi2
    bool second_geq_first = false;
    RatioTrend ratio_trend = RatioTrend::not_monotone;  ///< trend of u1''/u2''
    bool within_hypothesis = false;
    /// Predicted direction holds (first higher when the ratio decreases,
    /// second higher when it increases, both when constant).
    bool matches_prediction = false;
};

/// Solves both intervals and checks the strong-set-order comparison against
/// the direction predicted by the monotonicity of u1''/u2''.
SensitivityReport sensitivity_compare(const UtilityCurve& u1, const UtilityCurve& u2,
                                      const BeliefDensity& tau, double alpha,
                                      std::size_t ratio_grid = 1001);

} // namespace trustregion
