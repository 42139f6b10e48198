#pragma once

#include "trustregion/errors.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace trustregion {

/// Log-score utilities are evaluated on beliefs clamped to [kBeliefClamp, 1 - kBeliefClamp].
inline constexpr double kBeliefClamp = 1e-12;

/// Point on the probability simplex over N states.
/// In the binary case probs = (1 - mu, mu) with mu = Pr(state 1).
class Belief {
public:
    explicit Belief(std::vector<double> probs);

    static Belief binary(double mu);

    std::size_t dim() const noexcept { return probs_.size(); }
    const std::vector<double>& probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const { return probs_[i]; }

    /// Scalar belief; only valid for dim() == 2.
    double mu() const;

private:
    std::vector<double> probs_;
};

enum class UtilityKind { quadratic, log_score, weighted_quadratic, custom_grid, custom };

std::string to_string(UtilityKind kind);

/// Indirect utility U(mu) on binary beliefs with first and second derivatives.
class UtilityCurve {
public:
    using Fn = std::function<double(double)>;

    /// U = mu^2 - mu (binary squared loss). U'' = 2.
    static UtilityCurve quadratic();
    /// Negative Shannon entropy. Bregman distance is KL.
    static UtilityCurve log_score();
    /// Squared loss with weight gamma on state 1 errors:
    /// U = -gamma mu (1-mu) / (1 + (gamma-1) mu).
    static UtilityCurve weighted_quadratic(double gamma);
    /// U'' given by piecewise-linear samples on knots spanning [0,1];
    /// U' and U are integrated exactly from mu = 0 with U'(0) = U(0) = 0.
    static UtilityCurve custom_grid(std::vector<double> knots, std::vector<double> d2_values);
    /// Arbitrary closed form supplied by the caller.
    static UtilityCurve custom(Fn eval, Fn d1, Fn d2, std::string label = "custom");

    double eval(double mu) const { return eval_(clamp_(mu)); }
    double d1(double mu) const { return d1_(clamp_(mu)); }
    double d2(double mu) const { return d2_(clamp_(mu)); }

    UtilityKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    /// Weight parameter of weighted_quadratic, 1 otherwise.
    double gamma() const noexcept { return gamma_; }
    /// Knots and U'' samples of custom_grid curves (empty otherwise).
    const std::vector<double>& grid_knots() const noexcept { return knots_; }
    const std::vector<double>& grid_d2() const noexcept { return d2_values_; }

private:
    UtilityCurve() = default;
    double clamp_(double mu) const;

    UtilityKind kind_ = UtilityKind::quadratic;
    std::string label_;
    double gamma_ = 1.0;
    bool clamps_ = false;
    Fn eval_, d1_, d2_;
    std::vector<double> knots_, d2_values_;
};

enum class DensityKind { grid, atoms };

/// Distribution of the aligned adviser's posterior on a bounded interval
/// [lower, upper]: either a piecewise-linear density on a knot grid or a
/// finite list of atoms. Radial densities use [0, r0] as domain.
class BeliefDensity {
public:
    /// Piecewise-linear density through (knots[i], values[i]); normalized to mass 1.
    static BeliefDensity grid(std::vector<double> knots, std::vector<double> values);
    static BeliefDensity uniform(double lower = 0.0, double upper = 1.0);
    /// Samples f on n equally spaced knots of [lower, upper] and normalizes.
    static BeliefDensity from_function(const std::function<double(double)>& f, std::size_t n,
                                       double lower = 0.0, double upper = 1.0);
    /// Density of a radius on [0, r0].
    static BeliefDensity radial(const std::function<double(double)>& f, double r0,
                                std::size_t n = 4097);
    /// Finite support. Probabilities must sum to 1 within 1e-6 and are renormalized.
    static BeliefDensity atoms(std::vector<double> points, std::vector<double> probs);

    DensityKind kind() const noexcept { return kind_; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    /// Mean of the distribution (the prior in the binary case).
    double mean() const noexcept { return mean_; }

    /// Exact zeroth and first moments over [lo, hi] (clipped to the domain).
    /// For atoms both ends are inclusive.
    std::pair<double, double> raw_moments(double lo, double hi) const;
    /// Mass in [lower, x]; atoms at x are included.
    double cdf(double x) const;
    /// Density value (0 for atoms).
    double pdf(double x) const;
    /// Integral of f against the distribution over [lo, hi].
    double integrate(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12) const;
    /// True for grid densities strictly positive on the open interior.
    bool full_support() const;

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    BeliefDensity() = default;
    void finalize_();
    std::size_t segment_(double x) const;
    std::pair<double, double> grid_prefix_(double x) const;

    DensityKind kind_ = DensityKind::grid;
    double lower_ = 0.0, upper_ = 1.0, mean_ = 0.5;
    std::vector<double> knots_, values_;
    std::vector<double> cum0_, cum1_;
};

/// D_U(m, m') = U(m) - U(m') - U'(m')(m - m') on binary beliefs.
double bregman_distance(const UtilityCurve& u, double m, double mprime);
double bregman_distance(const UtilityCurve& u, const Belief& m, const Belief& mprime);

/// Bregman distance for a potential on R^N given its value and gradient.
double bregman_distance(const std::function<double(const std::vector<double>&)>& f,
                        const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                        const std::vector<double>& m, const std::vector<double>& mprime);

/// Closed interval of binary beliefs.
struct BeliefInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Bregman-farthest point of the interval from mu; ties go to lo.
double worst_case_report(const UtilityCurve& u, const BeliefInterval& trust, double mu);
Belief worst_case_report(const UtilityCurve& u, const BeliefInterval& trust, const Belief& mu);
/// Same over an explicit finite candidate set (first maximizer wins ties).
double worst_case_report(const UtilityCurve& u, const std::vector<double>& candidates, double mu);

struct Moments {
    double mass = 0.0;
    /// Conditional mean; NaN when mass is zero.
    double mean = 0.0;
};

Moments density_moments(const BeliefDensity& tau, double lo, double hi);

/// Throws InputError unless 0 <= mu <= 1.
void check_binary_belief(double mu, const char* what);

} // namespace trustregion
