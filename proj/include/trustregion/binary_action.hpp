#pragma once

#include "trustregion/core_model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace trustregion {

/// Distribution of the relative payoff v = E_mu[u(a2)] - E_mu[u(a1)] induced by
/// the adviser's posterior. Either atoms (exact sums) or a density on [lower, upper].
class RelativePayoffDist {
public:
    static RelativePayoffDist atoms(std::vector<double> values, std::vector<double> probs);
    static RelativePayoffDist density(BeliefDensity d);

    bool is_atoms() const noexcept { return atoms_; }
    const BeliefDensity& law() const noexcept { return law_; }
    /// Expected v, i.e. the relative payoff of action 2 at the prior.
    double prior_v() const noexcept { return law_.mean(); }
    /// Expected loss and gain of action 2: L = E[-v; v < 0], G = E[v; v > 0].
    double loss() const noexcept { return loss_; }
    double gain() const noexcept { return gain_; }
    /// Probability of v = 0 exactly (atoms only).
    double mass_at_zero() const noexcept { return zero_mass_; }

    /// Cells carrying the kernel: atoms as given, densities cut at their knots
    /// (and at 0), each cell represented by its mass and conditional mean.
    std::vector<double> cell_values() const;
    std::vector<double> cell_probs() const;

private:
    explicit RelativePayoffDist(BeliefDensity d, bool atoms);

    BeliefDensity law_;
    bool atoms_ = true;
    double loss_ = 0.0, gain_ = 0.0, zero_mass_ = 0.0;
};

enum class ActionRegime { full_trust, no_trust, boundary_both };

std::string to_string(ActionRegime r);

struct BinaryActionSolution {
    double L = 0.0;
    double G = 0.0;
    double alpha = 0.0;
    double alpha_hat = 0.5;
    ActionRegime regime = ActionRegime::no_trust;
    /// Pr(a2) after negative and after nonnegative messages.
    double sigma_low = 0.0;
    double sigma_high = 0.0;
    /// At the boundary: the no-trust vertex, also optimal.
    std::optional<std::pair<double, double>> alternative;
    /// Optimal guaranteed payoff relative to always playing a1.
    double value = 0.0;
    /// Payoff of the best constant action, max(0, G - L).
    double no_adviser_value = 0.0;
};

/// Payoff of the pair (sigma_low, sigma_high) against the worst-case adversary.
double binary_action_payoff(double L, double G, double alpha, double sigma_low,
                            double sigma_high);

/// All-or-nothing solution. Throws PreconditionError when L = 0, G = 0 or v = 0
/// carries mass (genericity assumption).
BinaryActionSolution solve_binary_action(const RelativePayoffDist& dist, double alpha);

/// Adversary kernel over payoff cells with the posterior sign certificate.
struct AdversaryKernel {
    ActionRegime tag = ActionRegime::full_trust;
    /// Mixing weight onto the opposite-sign measure (no-trust only; 1 under full trust).
    double gamma = 1.0;
    std::vector<double> values;   ///< cell v
    std::vector<double> probs;    ///< cell tau mass
    Eigen::MatrixXd beta;         ///< beta(i, j) = Pr(message cell j | true cell i)
    /// alpha tau_j v_j + (1 - alpha) sum_i tau_i v_i beta(i, j)
    Eigen::VectorXd posterior_payoff;
    /// Smallest slack of the sign conditions (>= 0 when certified).
    double margin = 0.0;
    bool certified = false;
};

/// Kernels rationalizing the solution; two entries (full trust first) at the boundary.
std::vector<AdversaryKernel> rationalizing_adversary(const RelativePayoffDist& dist,
                                                     double alpha, double sign_tol = 1e-12);

struct ValuePoint {
    double alpha = 0.0;
    double value = 0.0;
};

/// Value of the solution along an alpha grid.
std::vector<ValuePoint> binary_action_value_curve(const RelativePayoffDist& dist,
                                                  const std::vector<double>& alphas);

} // namespace trustregion
