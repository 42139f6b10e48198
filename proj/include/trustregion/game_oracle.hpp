#pragma once

#include "trustregion/core_model.hpp"
#include "trustregion/lp.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trustregion {

/// Finite zero-sum game between the agent and a misaligned adviser.
///
/// States w = 0..N-1 with prior; messages are the aligned adviser's posteriors
/// (M of them, probabilities tau); private types t with law f(t | w) (an N x T
/// matrix); actions a = 0..A-1; payoff u(a, w, t) stored row-major in the
/// axis order [a, w, t].
struct FiniteGame {
    std::vector<double> prior;
    std::vector<std::vector<double>> posteriors;
    std::vector<double> tau;
    Eigen::MatrixXd type_law;
    std::size_t n_actions = 0;
    std::vector<double> payoff;
    double alpha = 0.0;

    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> type_names;

    std::size_t n_states() const noexcept { return prior.size(); }
    std::size_t n_messages() const noexcept { return posteriors.size(); }
    std::size_t n_types() const noexcept { return static_cast<std::size_t>(type_law.cols()); }
    double u(std::size_t a, std::size_t w, std::size_t t) const {
        return payoff[(a * n_states() + w) * n_types() + t];
    }
};

/// Throws InputError on shape errors, non-stochastic tau or type law, empty
/// message or action sets, or a prior that is not the tau-average of posteriors
/// (tolerance 1e-9).
void check_game(const FiniteGame& g);

/// Single-type game with payoff u(a, w) given as an A x N matrix.
FiniteGame make_game(std::vector<double> prior, std::vector<std::vector<double>> posteriors,
                     std::vector<double> tau, const Eigen::MatrixXd& payoff_aw, double alpha);

/// Posteriors and their probabilities induced by a signal matrix (signals
/// with zero probability are dropped).
std::pair<std::vector<std::vector<double>>, std::vector<double>>
posteriors_from_signals(const Eigen::MatrixXd& pi, const std::vector<double>& prior);

/// Binary-state game: message k is the posterior mu_k = Pr(w = 1) with weight
/// tau_k, actions are points of [0, 1] and u(a, w) = -(a - w)^2.
FiniteGame binary_quadratic_game(const std::vector<double>& mus, const std::vector<double>& tau,
                                 const std::vector<double>& actions, double alpha);

/// Two actions, two states: a1 pays 0, a2 pays v linear in the posterior, so
/// each atom (v_k, p_k) becomes a message. Needs min v < 0 < max v.
FiniteGame binary_action_game(const std::vector<double>& values, const std::vector<double>& probs,
                              double alpha);

/// Points of the simplex over N states with coordinates in {0, 1/(n-1), ..., 1}.
std::vector<std::vector<double>> simplex_lattice(std::size_t n_states, std::size_t n_per_axis);

/// u(a, w) = -|a - e_w|^2 over the given action points.
Eigen::MatrixXd quadratic_scoring_payoff(const std::vector<std::vector<double>>& actions,
                                         std::size_t n_states);

/// Agent strategy: row m * T + t is the action distribution after message m
/// for type t. Adversary: beta(i, j) = Pr(report j | true posterior i).
struct SaddleSolution {
    double value = 0.0;          ///< maximin value (agent LP)
    double minimax_value = 0.0;  ///< minimax value (adversary LP)
    Eigen::MatrixXd agent_strategy;
    Eigen::MatrixXd adversary_strategy;
    Eigen::VectorXd message_mass;
    /// Posterior after each message; empty for off-path messages.
    std::vector<std::vector<double>> induced_posteriors;
    std::vector<bool> off_path;
    /// Off-path messages whose play was replaced by the prescribed action.
    std::vector<bool> off_path_reassigned;
    /// minimax_value - value
    double duality_gap = 0.0;
    /// Best-reply gains against each strategy, measured from the midpoint
    /// of the two guarantees: (agent strategy, adversary strategy).
    std::pair<double, double> exploitability{0.0, 0.0};
    int agent_lp_iterations = 0;
    int adversary_lp_iterations = 0;
};

struct SaddleOptions {
    LpOptions lp;
    /// Messages with total mass at or below this are off path.
    double off_path_tol = 1e-12;
};

/// Maximin (agent LP) and minimax (adversary LP) strategies.
SaddleSolution solve_saddle(const FiniteGame& g, const SaddleOptions& opts = {});

/// Agent payoff of sigma against the adversary's best reply.
double agent_guarantee(const FiniteGame& g, const Eigen::MatrixXd& sigma);
/// Agent payoff of the best reply to beta.
double adversary_guarantee(const FiniteGame& g, const Eigen::MatrixXd& beta);
/// Best reply to beta, ties to the lowest action index.
Eigen::MatrixXd agent_best_response(const FiniteGame& g, const Eigen::MatrixXd& beta);

/// Best expected payoff without the adviser (type-conditional priors).
double no_adviser_value(const FiniteGame& g);

struct AdviserValue {
    double u_star = 0.0;
    double u_0 = 0.0;
    double v = 0.0;
};

AdviserValue adviser_value(const FiniteGame& g, const SaddleOptions& opts = {});

struct MessageCheck {
    std::size_t message = 0;
    bool on_path = true;
    double mass = 0.0;
    std::vector<double> posterior;
    /// Largest payoff shortfall (per unit mass) of an action played with
    /// probability above 1e-9 relative to the best action, over types.
    double support_margin = 0.0;
    /// Expected shortfall of the played distribution, same normalization.
    double expected_margin = 0.0;
    /// |posterior - projection| for binary messages outside the supplied interval.
    std::optional<double> projection_gap;
    bool pass = true;
};

struct TrsCheckOptions {
    double margin_tol = 1e-7;
    /// Binary games: trust interval whose endpoints should be the posteriors of
    /// messages below / above it.
    std::optional<BeliefInterval> interval;
    double posterior_tol = 0.05;
};

struct TrsReport {
    std::vector<MessageCheck> messages;
    bool all_on_path_pass = true;
    double worst_margin = 0.0;
    std::size_t off_path = 0;
    double worst_projection_gap = 0.0;
    bool projection_pass = true;
};

/// Message-by-message robust rationalizability check of sol.agent_strategy
/// against the posteriors induced by sol.adversary_strategy.
TrsReport verify_trs_structure(const FiniteGame& g, const SaddleSolution& sol,
                               const TrsCheckOptions& opts = {});

} // namespace trustregion
