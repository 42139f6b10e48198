#include "trustregion/lp.hpp"

#include "trustregion/errors.hpp"
#include "trustregion/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trustregion {

std::string to_string(LpStatus s) {
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    case LpStatus::numerical: return "numerical-failure";
    }
    return "unknown";
}

namespace {

class Tableau {
public:
    Tableau(std::size_t m, std::size_t ncols, Exec exec)
        : m_(m), n_(ncols), stride_(ncols + 1), T_((m + 1) * (ncols + 1), 0.0), basis_(m, 0),
          exec_(exec) {}

    double& at(std::size_t i, std::size_t j) { return T_[i * stride_ + j]; }
    double at(std::size_t i, std::size_t j) const { return T_[i * stride_ + j]; }
    double& rhs(std::size_t i) { return T_[i * stride_ + n_]; }
    double rhs(std::size_t i) const { return T_[i * stride_ + n_]; }
    double& cost(std::size_t j) { return T_[m_ * stride_ + j]; }
    double objective() const { return T_[m_ * stride_ + n_]; }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t r, std::size_t c) {
        pivot_eliminate(T_.data(), m_ + 1, stride_, r, c, exec_);
        basis_[r] = c;
    }

    /// Sets the objective row for maximizing cvec'x given the current basis.
    void set_objective(const std::vector<double>& cvec) {
        for (std::size_t j = 0; j <= n_; ++j) {
            double s = j < n_ ? -cvec[j] : 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double cb = cvec[basis_[i]];
                if (cb != 0.0) {
                    s += cb * at(i, j);
                }
            }
            T_[m_ * stride_ + j] = s;
        }
    }

    /// Reloads the constraint rows from the original data and pivots the
    /// current basis back in (partial pivoting). Returns false if the basis
    /// is numerically singular.
    bool reinvert(const Eigen::MatrixXd& S, const Eigen::VectorXd& rhs, double pivot_tol) {
        const std::vector<std::size_t> cols = basis_;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                at(i, j) = S(static_cast<long>(i), static_cast<long>(j));
            }
            this->rhs(i) = rhs(static_cast<long>(i));
        }
        std::vector<bool> used(m_, false);
        for (std::size_t c : cols) {
            std::size_t pr = m_;
            double best = pivot_tol;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!used[i] && std::abs(at(i, c)) > best) {
                    best = std::abs(at(i, c));
                    pr = i;
                }
            }
            if (pr == m_) {
                basis_ = cols;
                return false;
            }
            pivot(pr, c);
            used[pr] = true;
        }
        return true;
    }

    /// Drops the listed constraint rows (objective row kept).
    void drop_rows(const std::vector<bool>& drop) {
        std::vector<double> next;
        std::vector<std::size_t> nb;
        next.reserve(T_.size());
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i < m_ && drop[i]) {
                continue;
            }
            next.insert(next.end(), T_.begin() + static_cast<long>(i * stride_),
                        T_.begin() + static_cast<long>((i + 1) * stride_));
            if (i < m_) {
                nb.push_back(basis_[i]);
            }
        }
        T_.swap(next);
        basis_.swap(nb);
        m_ = basis_.size();
    }

private:
    std::size_t m_, n_, stride_;
    std::vector<double> T_;
    std::vector<std::size_t> basis_;
    Exec exec_;
};

enum class Outcome { optimal, unbounded, infeasible, limit };

// Smallest pivot, relative to the largest eligible one, that Bland's rule may take.
constexpr double kBlandPivotRatio = 1e-3;

// Primal simplex over columns [0, allowed). Dantzig pricing with a Bland
// fallback after a run of degenerate pivots.
Outcome primal_simplex(Tableau& t, std::size_t allowed, const LpOptions& o, int& iters) {
    bool bland = false;
    int degenerate = 0;
    while (iters < o.max_iter) {
        std::size_t enter = allowed;
        double best = -o.tol;
        for (std::size_t j = 0; j < allowed; ++j) {
            const double d = t.cost(j);
            if (d < best) {
                enter = j;
                best = d;
                if (bland) {
                    break;
                }
            }
        }
        if (enter == allowed) {
            return Outcome::optimal;
        }
        // Harris two-pass ratio test: bound the step with a relaxed feasibility
        // tolerance, then take the largest pivot under that bound. Bland mode
        // takes the lowest basic index among the candidates whose pivot is
        // within kBlandPivotRatio of the largest one.
        std::size_t leave = t.rows();
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double a = t.at(i, enter);
            if (a > o.pivot_tol) {
                bound = std::min(bound, (std::max(t.rhs(i), 0.0) + o.feas_tol) / a);
            }
        }
        if (bound < std::numeric_limits<double>::infinity()) {
            double best_a = 0.0;
            for (std::size_t i = 0; i < t.rows(); ++i) {
                const double a = t.at(i, enter);
                if (a > o.pivot_tol && std::max(t.rhs(i), 0.0) / a <= bound && a > best_a) {
                    leave = i;
                    best_a = a;
                }
            }
            if (bland) {
                for (std::size_t i = 0; i < t.rows(); ++i) {
                    const double a = t.at(i, enter);
                    if (a >= kBlandPivotRatio * best_a && std::max(t.rhs(i), 0.0) / a <= bound &&
                        t.basis()[i] < t.basis()[leave]) {
                        leave = i;
                    }
                }
            }
        }
        const double ratio = leave < t.rows() ? std::max(t.rhs(leave), 0.0) / t.at(leave, enter) : 0.0;
        if (leave == t.rows()) {
            return Outcome::unbounded;
        }
        degenerate = ratio <= o.tol ? degenerate + 1 : 0;
        if (degenerate > o.bland_after) {
            bland = true;
        }
        t.pivot(leave, enter);
        ++iters;
        // The Harris step can leave basics slightly negative; shifting them back
        // to zero keeps the objective monotone (the final polish re-solves exactly).
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (t.rhs(i) < 0.0) {
                t.rhs(i) = 0.0;
            }
        }
    }
    return Outcome::limit;
}

// Dual simplex for a dual-feasible tableau (all reduced costs >= 0). Same
// scheme as the primal: Harris ratio test, Bland's rule after a run of
// degenerate pivots.
Outcome dual_simplex(Tableau& t, std::size_t allowed, const LpOptions& o, int& iters) {
    bool bland = false;
    int degenerate = 0;
    while (iters < o.max_iter) {
        std::size_t leave = t.rows();
        double worst = -o.feas_tol * 1e-2;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double v = t.rhs(i);
            if (bland) {
                if (v < -o.feas_tol * 1e-2 && (leave == t.rows() || t.basis()[i] < t.basis()[leave])) {
                    leave = i;
                }
            } else if (v < worst) {
                worst = v;
                leave = i;
            }
        }
        if (leave == t.rows()) {
            return Outcome::optimal;
        }
        std::size_t enter = allowed;
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < allowed; ++j) {
            const double a = -t.at(leave, j);
            if (a > o.pivot_tol) {
                bound = std::min(bound, (std::max(t.cost(j), 0.0) + o.feas_tol) / a);
            }
        }
        double best_a = 0.0;
        for (std::size_t j = 0; j < allowed && bound < std::numeric_limits<double>::infinity(); ++j) {
            const double a = -t.at(leave, j);
            if (a > o.pivot_tol && std::max(t.cost(j), 0.0) / a <= bound && a > best_a) {
                enter = j;
                best_a = a;
            }
        }
        if (enter == allowed) {
            return Outcome::infeasible;
        }
        if (bland) {
            for (std::size_t j = 0; j < enter; ++j) {
                const double a = -t.at(leave, j);
                if (a >= kBlandPivotRatio * best_a && std::max(t.cost(j), 0.0) / a <= bound) {
                    enter = j;
                    best_a = a;
                    break;
                }
            }
        }
        const double ratio = std::max(t.cost(enter), 0.0) / best_a;
        degenerate = ratio <= o.tol ? degenerate + 1 : 0;
        if (degenerate > o.bland_after) {
            bland = true;
        }
        t.pivot(leave, enter);
        ++iters;
        for (std::size_t j = 0; j < allowed; ++j) {
            if (t.cost(j) < 0.0) {
                t.cost(j) = 0.0;
            }
        }
    }
    return Outcome::limit;
}

LpStatus to_status(Outcome o) {
    switch (o) {
    case Outcome::optimal: return LpStatus::optimal;
    case Outcome::unbounded: return LpStatus::unbounded;
    case Outcome::infeasible: return LpStatus::infeasible;
    case Outcome::limit: return LpStatus::iteration_limit;
    }
    return LpStatus::iteration_limit;
}

} // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& o) {
    const std::size_t m = static_cast<std::size_t>(lp.A.rows());
    const std::size_t n = static_cast<std::size_t>(lp.A.cols());
    if (static_cast<std::size_t>(lp.b.size()) != m || static_cast<std::size_t>(lp.c.size()) != n ||
        lp.sense.size() != m) {
        throw InputError("solve_lp: dimension mismatch");
    }

    // Row orientation: every row becomes <= if possible.
    std::vector<double> flip(m, 1.0);
    std::vector<RowSense> sense = lp.sense;
    bool has_eq = false, b_nonneg = true;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] == RowSense::ge) {
            flip[i] = -1.0;
            sense[i] = RowSense::le;
        }
        has_eq = has_eq || sense[i] == RowSense::eq;
        b_nonneg = b_nonneg && flip[i] * lp.b(static_cast<long>(i)) >= 0.0;
    }
    const bool c_nonpos = (lp.c.array() <= 0.0).all();

    LpResult res;
    if (!has_eq && b_nonneg) {
        res.method = LpMethod::primal;
    } else if (!has_eq && c_nonpos) {
        res.method = LpMethod::dual;
    } else {
        res.method = LpMethod::two_phase;
        // Orient rows so that b >= 0.
        flip.assign(m, 1.0);
        sense = lp.sense;
        for (std::size_t i = 0; i < m; ++i) {
            if (lp.b(static_cast<long>(i)) < 0.0) {
                flip[i] = -1.0;
                if (sense[i] == RowSense::le) {
                    sense[i] = RowSense::ge;
                } else if (sense[i] == RowSense::ge) {
                    sense[i] = RowSense::le;
                }
            }
        }
    }

    // Column layout: originals, one slack/surplus per inequality, artificials.
    std::vector<long> slack_of(m, -1), art_of(m, -1);
    std::size_t ncols = n;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] != RowSense::eq) {
            slack_of[i] = static_cast<long>(ncols++);
        }
    }
    const std::size_t n_struct = ncols;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] != RowSense::le) {
            art_of[i] = static_cast<long>(ncols++);
        }
    }

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<long>(m), static_cast<long>(ncols));
    Eigen::VectorXd rhs(static_cast<long>(m));
    Tableau t(m, ncols, o.exec);
    for (std::size_t i = 0; i < m; ++i) {
        const long li = static_cast<long>(i);
        S.row(li).head(static_cast<long>(n)) = flip[i] * lp.A.row(li);
        rhs(li) = flip[i] * lp.b(li);
        if (slack_of[i] >= 0) {
            S(li, slack_of[i]) = sense[i] == RowSense::ge ? -1.0 : 1.0;
        }
        if (art_of[i] >= 0) {
            S(li, art_of[i]) = 1.0;
        }
        for (std::size_t j = 0; j < ncols; ++j) {
            t.at(i, j) = S(li, static_cast<long>(j));
        }
        t.rhs(i) = rhs(li);
        t.basis()[i] = static_cast<std::size_t>(art_of[i] >= 0 ? art_of[i] : slack_of[i]);
    }

    std::vector<double> cfull(ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cfull[j] = lp.c(static_cast<long>(j));
    }

    Outcome out = Outcome::optimal;
    int iters = 0;
    if (res.method == LpMethod::two_phase) {
        std::vector<double> c1(ncols, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (art_of[i] >= 0) {
                c1[static_cast<std::size_t>(art_of[i])] = -1.0;
            }
        }
        t.set_objective(c1);
        out = primal_simplex(t, ncols, o, iters);
        if (out == Outcome::limit) {
            res.status = LpStatus::iteration_limit;
            res.iterations = iters;
            return res;
        }
        if (t.objective() < -o.feas_tol) {
            res.status = LpStatus::infeasible;
            res.iterations = iters;
            return res;
        }
        // Drive remaining artificials out; rows where that is impossible are redundant.
        std::vector<bool> drop(t.rows(), false);
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (t.basis()[i] < n_struct) {
                continue;
            }
            std::size_t pc = n_struct;
            double best = 1e-9;
            for (std::size_t j = 0; j < n_struct; ++j) {
                if (std::abs(t.at(i, j)) > best) {
                    best = std::abs(t.at(i, j));
                    pc = j;
                }
            }
            if (pc < n_struct) {
                t.pivot(i, pc);
                ++iters;
            } else {
                drop[i] = true;
            }
        }
        res.redundant_rows = static_cast<std::size_t>(std::count(drop.begin(), drop.end(), true));
        if (res.redundant_rows > 0) {
            t.drop_rows(drop);
        }
        t.set_objective(cfull);
        out = primal_simplex(t, n_struct, o, iters);
    } else if (res.method == LpMethod::primal) {
        t.set_objective(cfull);
        out = primal_simplex(t, ncols, o, iters);
    } else {
        t.set_objective(cfull);
        out = dual_simplex(t, ncols, o, iters);
        if (out == Outcome::optimal) {
            out = primal_simplex(t, ncols, o, iters);
        }
    }
    // Long pivot sequences on the dense tableau accumulate error. When the
    // basic solution no longer satisfies the original rows, rebuild the
    // tableau from the data for the final basis and reoptimize.
    const std::size_t allowed = res.method == LpMethod::two_phase ? n_struct : ncols;
    const double rhs_scale = 1.0 + (m ? rhs.cwiseAbs().maxCoeff() : 0.0);
    for (int round = 0; round < 3 && out == Outcome::optimal && res.redundant_rows == 0; ++round) {
        Eigen::VectorXd xb = Eigen::VectorXd::Zero(static_cast<long>(ncols));
        for (std::size_t i = 0; i < t.rows(); ++i) {
            xb(static_cast<long>(t.basis()[i])) = t.rhs(i);
        }
        const double resid = (S * xb - rhs).cwiseAbs().maxCoeff();
        if (resid <= 1e-10 * rhs_scale) {
            break;
        }
        if (!t.reinvert(S, rhs, o.pivot_tol)) {
            break;
        }
        t.set_objective(cfull);
        out = dual_simplex(t, allowed, o, iters);
        if (out == Outcome::optimal) {
            out = primal_simplex(t, allowed, o, iters);
        }
    }

    res.iterations = iters;
    res.status = to_status(out);
    if (out != Outcome::optimal) {
        return res;
    }

    // Basic solution from the tableau, optionally refined by a direct solve on the basis.
    Eigen::VectorXd xfull = Eigen::VectorXd::Zero(static_cast<long>(ncols));
    for (std::size_t i = 0; i < t.rows(); ++i) {
        xfull(static_cast<long>(t.basis()[i])) = t.rhs(i);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<long>(m));
    bool have_duals = false;
    if (o.polish && t.rows() > 0) {
        // Redundant rows may have been dropped, so solve the full (consistent)
        // system in the least-squares sense.
        const long k = static_cast<long>(t.rows());
        Eigen::MatrixXd B(static_cast<long>(m), k);
        Eigen::VectorXd cb(k);
        for (long q = 0; q < k; ++q) {
            const std::size_t col = t.basis()[static_cast<std::size_t>(q)];
            B.col(q) = S.col(static_cast<long>(col));
            cb(q) = cfull[col];
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
        const Eigen::VectorXd xb = cod.solve(rhs);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codt(B.transpose());
        const Eigen::VectorXd yb = codt.solve(cb);
        const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
        const bool sane = cod.rank() == k && xb.allFinite() && yb.allFinite() &&
                          (xb.array() >= -1e-9).all() &&
                          (B * xb - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale &&
                          (B.transpose() * yb - cb).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + cb.cwiseAbs().maxCoeff());
        if (sane) {
            for (long q = 0; q < k; ++q) {
                xfull(static_cast<long>(t.basis()[static_cast<std::size_t>(q)])) = std::max(xb(q), 0.0);
            }
            y = yb;
            have_duals = true;
        }
    }
    if (!have_duals) {
        // Duals from the objective row: y_i is the reduced cost of row i's slack
        // (negated for surplus columns). Equality rows have no slack and report 0.
        for (std::size_t row = 0; row < m; ++row) {
            if (slack_of[row] >= 0) {
                const double d = t.cost(static_cast<std::size_t>(slack_of[row]));
                y(static_cast<long>(row)) = sense[row] == RowSense::ge ? -d : d;
            }
        }
    }

    res.x = xfull.head(static_cast<long>(n));
    res.objective = lp.c.dot(res.x);
    res.duals = Eigen::VectorXd::Zero(static_cast<long>(m));
    for (std::size_t row = 0; row < m; ++row) {
        res.duals(static_cast<long>(row)) = flip[row] * y(static_cast<long>(row));
    }
    const double scale = 1.0 + std::max(lp.b.size() ? lp.b.cwiseAbs().maxCoeff() : 0.0,
                                        lp.A.size() ? lp.A.cwiseAbs().maxCoeff() : 0.0);
    if (constraint_violation(lp, res.x) > 1e-7 * scale) {
        res.status = LpStatus::numerical;
    }
    return res;
}

double constraint_violation(const LinearProgram& lp, const Eigen::VectorXd& x) {
    double worst = std::max(0.0, -x.minCoeff());
    const Eigen::VectorXd ax = lp.A * x;
    for (long i = 0; i < ax.size(); ++i) {
        const double d = ax(i) - lp.b(i);
        switch (lp.sense[static_cast<std::size_t>(i)]) {
        case RowSense::le: worst = std::max(worst, d); break;
        case RowSense::ge: worst = std::max(worst, -d); break;
        case RowSense::eq: worst = std::max(worst, std::abs(d)); break;
        }
    }
    return worst;
}

} // namespace trustregion
