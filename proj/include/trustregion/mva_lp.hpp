#pragma once

#include "trustregion/lp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace trustregion {

/// Row-stochastic N x K matrix; entry (i, j) is Pr(signal j | state i).
using SignalMatrix = Eigen::MatrixXd;

/// Throws InputError unless pi is row-stochastic (rows sum to 1 within 1e-12) with K >= 2.
void check_signal_matrix(const SignalMatrix& pi);

/// Rows pi_2 - pi_1, ..., pi_N - pi_1.
Eigen::MatrixXd row_difference(const SignalMatrix& pi);

struct RankInfo {
    int rank = 0;
    Eigen::VectorXd singular_values;
    /// A singular value sits within three decades above the cutoff.
    bool near_degenerate = false;
};

/// Numerical rank with cutoff 1e-9 times the largest singular value.
RankInfo numerical_rank(const Eigen::MatrixXd& m, double rel_threshold = 1e-9);

struct MvaSolution {
    double alpha_star = 0.0;
    Eigen::MatrixXd garbling;        ///< G
    Eigen::MatrixXd adversary;       ///< B = (G - alpha I)/(1 - alpha); empty when alpha_star = 1
    Eigen::MatrixXd row_difference;  ///< D(pi)
    RankInfo rank;
    // Certificates
    double constraint_residual = 0.0;  ///< worst LP constraint violation of (G, alpha)
    double uninformative_gap = 0.0;    ///< max spread between rows of pi G
    double eigen_residual = 0.0;       ///< max |D B + alpha/(1-alpha) D|
    double adversary_stochastic_gap = 0.0;
    int lp_iterations = 0;
};

/// Largest alpha for which a misaligned adviser can garble the signals into
/// an uninformative experiment.
MvaSolution solve_mva(const SignalMatrix& pi, const LpOptions& opts = {});

/// Merges columns of pi that induce the same posterior (proportional columns).
SignalMatrix canonicalize_columns(const SignalMatrix& pi, double tol = 1e-12);

/// Explicit signal matrix whose MVA equals 1/(2 + delta (K - 3)).
/// Requires N >= 3, 4 <= K <= N + 1 and (K-4)/(K-3) <= delta <= 1.
SignalMatrix construct_target_mva(int n_states, int k_signals, double delta);

/// Predicted MVA of construct_target_mva.
double target_mva_value(int k_signals, double delta);

/// Random row-stochastic matrix with entries drawn from Exp(1) and normalized.
SignalMatrix random_signal_matrix(int n_states, int k_signals, std::uint64_t seed);

} // namespace trustregion
