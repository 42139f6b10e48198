#include "trustregion/mva_lp.hpp"

#include "trustregion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace trustregion {

void check_signal_matrix(const SignalMatrix& pi) {
    if (pi.rows() < 1 || pi.cols() < 2) {
        throw InputError("signal matrix: need at least one state and two signals");
    }
    if (!pi.allFinite() || (pi.array() < 0.0).any()) {
        throw InputError("signal matrix: entries must be finite and nonnegative");
    }
    for (long i = 0; i < pi.rows(); ++i) {
        const double s = pi.row(i).sum();
        if (std::abs(s - 1.0) > 1e-12) {
            throw InputError("signal matrix: row " + std::to_string(i) + " sums to " +
                             std::to_string(s));
        }
    }
}

Eigen::MatrixXd row_difference(const SignalMatrix& pi) {
    const long n = pi.rows();
    Eigen::MatrixXd d(std::max<long>(n - 1, 0), pi.cols());
    for (long i = 1; i < n; ++i) {
        d.row(i - 1) = pi.row(i) - pi.row(0);
    }
    return d;
}

RankInfo numerical_rank(const Eigen::MatrixXd& m, double rel_threshold) {
    RankInfo info;
    if (m.size() == 0) {
        return info;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    info.singular_values = svd.singularValues();
    const double top = info.singular_values.size() > 0 ? info.singular_values(0) : 0.0;
    const double cut = rel_threshold * top;
    for (long i = 0; i < info.singular_values.size(); ++i) {
        const double s = info.singular_values(i);
        if (s > cut) {
            ++info.rank;
            if (s <= 1e3 * cut) {
                info.near_degenerate = true;
            }
        }
    }
    return info;
}

MvaSolution solve_mva(const SignalMatrix& pi, const LpOptions& opts) {
    check_signal_matrix(pi);
    const long n = pi.rows();
    const long k = pi.cols();
    const Eigen::MatrixXd d = row_difference(pi);
    const long nv = k * k + 1;  // G row-major, then alpha
    const long a_idx = k * k;
    auto g = [k](long r, long c) { return r * k + c; };

    const long rows = k + k + (n - 1) * k;
    LinearProgram lp;
    lp.A = Eigen::MatrixXd::Zero(rows, nv);
    lp.b = Eigen::VectorXd::Zero(rows);
    lp.c = Eigen::VectorXd::Zero(nv);
    lp.c(a_idx) = 1.0;
    lp.sense.assign(static_cast<std::size_t>(rows), RowSense::eq);
    long r = 0;
    for (long i = 0; i < k; ++i, ++r) {  // G_ii - alpha >= 0
        lp.A(r, g(i, i)) = 1.0;
        lp.A(r, a_idx) = -1.0;
        lp.sense[static_cast<std::size_t>(r)] = RowSense::ge;
    }
    for (long i = 0; i < k; ++i, ++r) {  // G 1 = 1
        for (long j = 0; j < k; ++j) {
            lp.A(r, g(i, j)) = 1.0;
        }
        lp.b(r) = 1.0;
    }
    for (long q = 0; q < n - 1; ++q) {  // D G = 0
        for (long j = 0; j < k; ++j, ++r) {
            for (long i = 0; i < k; ++i) {
                lp.A(r, g(i, j)) = d(q, i);
            }
        }
    }

    const LpResult res = solve_lp(lp, opts);
    if (res.status != LpStatus::optimal) {
        throw SolverError("solve_mva: LP returned " + to_string(res.status) +
                          " (the uniform garbling is always feasible)");
    }

    MvaSolution sol;
    sol.lp_iterations = res.iterations;
    sol.alpha_star = res.x(a_idx);
    sol.garbling.resize(k, k);
    for (long i = 0; i < k; ++i) {
        for (long j = 0; j < k; ++j) {
            sol.garbling(i, j) = res.x(g(i, j));
        }
    }
    sol.row_difference = d;
    sol.rank = numerical_rank(pi);
    sol.constraint_residual = constraint_violation(lp, res.x);

    const Eigen::MatrixXd pg = pi * sol.garbling;
    for (long i = 1; i < n; ++i) {
        sol.uninformative_gap =
            std::max(sol.uninformative_gap, (pg.row(i) - pg.row(0)).cwiseAbs().maxCoeff());
    }
    const double a = sol.alpha_star;
    if (a < 1.0 - 1e-12) {
        sol.adversary = (sol.garbling - a * Eigen::MatrixXd::Identity(k, k)) / (1.0 - a);
        const Eigen::VectorXd rs = sol.adversary.rowwise().sum();
        sol.adversary_stochastic_gap = std::max((rs.array() - 1.0).abs().maxCoeff(),
                                                std::max(0.0, -sol.adversary.minCoeff()));
        if (n > 1) {
            sol.eigen_residual =
                (d * sol.adversary + (a / (1.0 - a)) * d).cwiseAbs().maxCoeff();
        }
    }
    return sol;
}

SignalMatrix canonicalize_columns(const SignalMatrix& pi, double tol) {
    check_signal_matrix(pi);
    std::vector<Eigen::VectorXd> cols;
    for (long j = 0; j < pi.cols(); ++j) {
        const Eigen::VectorXd c = pi.col(j);
        const double s = c.sum();
        if (s <= 0.0) {
            continue;  // a signal that never occurs
        }
        bool merged = false;
        for (auto& existing : cols) {
            const double t = existing.sum();
            if ((c / s - existing / t).cwiseAbs().maxCoeff() <= tol) {
                existing += c;
                merged = true;
                break;
            }
        }
        if (!merged) {
            cols.push_back(c);
        }
    }
    SignalMatrix out(pi.rows(), static_cast<long>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<long>(j)) = cols[j];
    }
    return out;
}

double target_mva_value(int k_signals, double delta) {
    return 1.0 / (2.0 + delta * (k_signals - 3));
}

SignalMatrix construct_target_mva(int n_states, int k_signals, double delta) {
    if (n_states < 3) {
        throw InputError("construct_target_mva: need n_states >= 3");
    }
    if (k_signals < 4 || k_signals > n_states + 1) {
        throw InputError("construct_target_mva: k_signals must lie in [4, n_states + 1] = [4, " +
                         std::to_string(n_states + 1) + "]");
    }
    const double dmin = static_cast<double>(k_signals - 4) / (k_signals - 3);
    if (!(delta >= dmin - 1e-15 && delta <= 1.0)) {
        throw InputError("construct_target_mva: delta must lie in [(K-4)/(K-3), 1] = [" +
                         std::to_string(dmin) + ", 1]");
    }
    const long k = k_signals;
    SignalMatrix pi = Eigen::MatrixXd::Constant(n_states, k, 1.0 / k);
    // Rows are 1-based in the construction: row i <-> index i-1.
    for (long i = 2; i <= k - 2; ++i) {
        pi(i - 1, i - 1) += 1.0 / k;
        pi(i - 1, 0) -= 1.0 / k;
    }
    const long r = k - 1;
    pi(r - 1, r - 1) += 1.0 / k;
    pi(r - 1, 0) -= delta / k;
    pi(r - 1, k - 1) -= (1.0 - delta) / k;
    return pi;
}

SignalMatrix random_signal_matrix(int n_states, int k_signals, std::uint64_t seed) {
    if (n_states < 1 || k_signals < 2) {
        throw InputError("random_signal_matrix: need n_states >= 1 and k_signals >= 2");
    }
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    SignalMatrix pi(n_states, k_signals);
    for (long i = 0; i < pi.rows(); ++i) {
        for (long j = 0; j < pi.cols(); ++j) {
            pi(i, j) = expo(rng);
        }
        pi.row(i) /= pi.row(i).sum();
        // Push the rounding residue into the largest entry so rows sum to 1 exactly enough.
        long jmax = 0;
        pi.row(i).maxCoeff(&jmax);
        pi(i, jmax) += 1.0 - pi.row(i).sum();
    }
    return pi;
}

} // namespace trustregion
