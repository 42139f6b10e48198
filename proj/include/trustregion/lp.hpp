#pragma once

#include "trustregion/parallel.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace trustregion {

enum class RowSense { le, ge, eq };

/// maximize c'x  subject to  A x (sense) b,  x >= 0.
struct LinearProgram {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    std::vector<RowSense> sense;
};

/// `numerical`: the final basic solution violates the constraints (lost accuracy).
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical };

std::string to_string(LpStatus s);

enum class LpMethod { primal, dual, two_phase };

struct LpOptions {
    double tol = 1e-11;          ///< reduced-cost tolerance
    double pivot_tol = 1e-9;     ///< smallest admissible pivot element
    double feas_tol = 1e-9;      ///< phase-one infeasibility threshold
    int max_iter = 200000;
    int bland_after = 64;        ///< degenerate pivots before switching to Bland's rule
    bool polish = true;          ///< recompute the final basic solution with a direct solve
    Exec exec = Exec::parallel;
};

struct LpResult {
    LpStatus status = LpStatus::iteration_limit;
    LpMethod method = LpMethod::primal;
    double objective = 0.0;
    Eigen::VectorXd x;
    /// Row multipliers y with c'x = b'y at the optimum (sign convention of the original rows).
    Eigen::VectorXd duals;
    int iterations = 0;
    std::size_t redundant_rows = 0;
};

/// Dense tableau simplex. All-<= problems with b >= 0 start primal from the
/// slack basis; all-<= problems with c <= 0 start dual from the slack basis;
/// anything else goes through phase one with artificial variables.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

/// Largest violation of A x (sense) b and x >= 0.
double constraint_violation(const LinearProgram& lp, const Eigen::VectorXd& x);

} // namespace trustregion
