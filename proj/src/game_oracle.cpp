#include "trustregion/game_oracle.hpp"

#include "trustregion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace trustregion {

void check_game(const FiniteGame& g) {
    const std::size_t n = g.n_states(), m = g.n_messages(), t = g.n_types();
    if (n == 0) {
        throw InputError("game: no states");
    }
    if (m == 0) {
        throw InputError("game: empty message set");
    }
    if (g.n_actions == 0) {
        throw InputError("game: empty action set");
    }
    if (!(g.alpha >= 0.0 && g.alpha <= 1.0)) {
        throw InputError("game: alpha must lie in [0, 1]");
    }
    if (g.tau.size() != m) {
        throw InputError("game: tau has " + std::to_string(g.tau.size()) + " entries for " +
                         std::to_string(m) + " messages");
    }
    if (static_cast<std::size_t>(g.type_law.rows()) != n || t == 0) {
        throw InputError("game: type law must be an N x T matrix with T >= 1");
    }
    if (g.payoff.size() != g.n_actions * n * t) {
        throw InputError("game: payoff tensor has " + std::to_string(g.payoff.size()) +
                         " entries, expected A*N*T = " + std::to_string(g.n_actions * n * t));
    }
    for (double x : g.payoff) {
        if (!std::isfinite(x)) {
            throw InputError("game: payoff entries must be finite");
        }
    }
    (void)Belief(g.prior);
    double ts = 0.0;
    std::vector<double> mix(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        if (g.posteriors[k].size() != n) {
            throw InputError("game: posterior " + std::to_string(k) + " has wrong dimension");
        }
        (void)Belief(g.posteriors[k]);
        if (!(g.tau[k] >= 0.0)) {
            throw InputError("game: tau entries must be nonnegative");
        }
        ts += g.tau[k];
        for (std::size_t w = 0; w < n; ++w) {
            mix[w] += g.tau[k] * g.posteriors[k][w];
        }
    }
    if (std::abs(ts - 1.0) > 1e-9) {
        throw InputError("game: tau sums to " + std::to_string(ts));
    }
    for (std::size_t w = 0; w < n; ++w) {
        if (std::abs(mix[w] - g.prior[w]) > 1e-9) {
            throw InputError("game: posteriors do not average to the prior (state " +
                             std::to_string(w) + ")");
        }
        const double rs = g.type_law.row(static_cast<long>(w)).sum();
        if ((g.type_law.row(static_cast<long>(w)).array() < 0.0).any() || std::abs(rs - 1.0) > 1e-9) {
            throw InputError("game: type law row " + std::to_string(w) + " is not a distribution");
        }
    }
}

FiniteGame make_game(std::vector<double> prior, std::vector<std::vector<double>> posteriors,
                     std::vector<double> tau, const Eigen::MatrixXd& payoff_aw, double alpha) {
    FiniteGame g;
    g.prior = std::move(prior);
    g.posteriors = std::move(posteriors);
    g.tau = std::move(tau);
    g.type_law = Eigen::MatrixXd::Ones(static_cast<long>(g.prior.size()), 1);
    g.n_actions = static_cast<std::size_t>(payoff_aw.rows());
    if (static_cast<std::size_t>(payoff_aw.cols()) != g.prior.size()) {
        throw InputError("make_game: payoff matrix must be A x N");
    }
    g.payoff.resize(g.n_actions * g.prior.size());
    for (std::size_t a = 0; a < g.n_actions; ++a) {
        for (std::size_t w = 0; w < g.prior.size(); ++w) {
            g.payoff[a * g.prior.size() + w] = payoff_aw(static_cast<long>(a), static_cast<long>(w));
        }
    }
    g.alpha = alpha;
    check_game(g);
    return g;
}

std::pair<std::vector<std::vector<double>>, std::vector<double>>
posteriors_from_signals(const Eigen::MatrixXd& pi, const std::vector<double>& prior) {
    if (static_cast<std::size_t>(pi.rows()) != prior.size()) {
        throw InputError("posteriors_from_signals: prior length must match the rows of pi");
    }
    std::vector<std::vector<double>> post;
    std::vector<double> tau;
    for (long s = 0; s < pi.cols(); ++s) {
        double p = 0.0;
        for (long w = 0; w < pi.rows(); ++w) {
            p += prior[static_cast<std::size_t>(w)] * pi(w, s);
        }
        if (!(p > 0.0)) {
            continue;
        }
        std::vector<double> mu(prior.size());
        for (long w = 0; w < pi.rows(); ++w) {
            mu[static_cast<std::size_t>(w)] = prior[static_cast<std::size_t>(w)] * pi(w, s) / p;
        }
        post.push_back(std::move(mu));
        tau.push_back(p);
    }
    return {post, tau};
}

FiniteGame binary_quadratic_game(const std::vector<double>& mus, const std::vector<double>& tau,
                                 const std::vector<double>& actions, double alpha) {
    if (mus.size() != tau.size()) {
        throw InputError("binary_quadratic_game: mus and tau differ in length");
    }
    std::vector<std::vector<double>> post;
    double prior1 = 0.0;
    for (std::size_t k = 0; k < mus.size(); ++k) {
        check_binary_belief(mus[k], "binary_quadratic_game: message");
        post.push_back({1.0 - mus[k], mus[k]});
        prior1 += tau[k] * mus[k];
    }
    Eigen::MatrixXd u(static_cast<long>(actions.size()), 2);
    for (std::size_t a = 0; a < actions.size(); ++a) {
        u(static_cast<long>(a), 0) = -actions[a] * actions[a];
        u(static_cast<long>(a), 1) = -(actions[a] - 1.0) * (actions[a] - 1.0);
    }
    return make_game({1.0 - prior1, prior1}, std::move(post), tau, u, alpha);
}

FiniteGame binary_action_game(const std::vector<double>& values, const std::vector<double>& probs,
                              double alpha) {
    if (values.empty() || values.size() != probs.size()) {
        throw InputError("binary_action_game: need matching, nonempty values and probabilities");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double c0 = *lo_it, c1 = *hi_it;
    if (!(c0 < 0.0 && c1 > 0.0)) {
        throw InputError("binary_action_game: values must straddle 0");
    }
    // v(mu) = c0 (1 - mu) + c1 mu.
    std::vector<std::vector<double>> post;
    double prior1 = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double mu = (values[k] - c0) / (c1 - c0);
        post.push_back({1.0 - mu, mu});
        prior1 += probs[k] * mu;
    }
    Eigen::MatrixXd u(2, 2);
    u << 0.0, 0.0, c0, c1;
    return make_game({1.0 - prior1, prior1}, std::move(post), probs, u, alpha);
}

std::vector<std::vector<double>> simplex_lattice(std::size_t n_states, std::size_t n_per_axis) {
    if (n_states < 1 || n_per_axis < 2) {
        throw InputError("simplex_lattice: need N >= 1 and at least 2 points per axis");
    }
    const std::size_t steps = n_per_axis - 1;
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> k(n_states, 0);
    // Enumerate compositions of `steps` into n_states parts in lexicographic order.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos + 1 == n_states) {
            k[pos] = left;
            std::vector<double> p(n_states);
            for (std::size_t i = 0; i < n_states; ++i) {
                p[i] = static_cast<double>(k[i]) / static_cast<double>(steps);
            }
            out.push_back(std::move(p));
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            k[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, steps);
    return out;
}

Eigen::MatrixXd quadratic_scoring_payoff(const std::vector<std::vector<double>>& actions,
                                         std::size_t n_states) {
    Eigen::MatrixXd u(static_cast<long>(actions.size()), static_cast<long>(n_states));
    for (std::size_t a = 0; a < actions.size(); ++a) {
        if (actions[a].size() != n_states) {
            throw InputError("quadratic_scoring_payoff: action dimension mismatch");
        }
        for (std::size_t w = 0; w < n_states; ++w) {
            double s = 0.0;
            for (std::size_t i = 0; i < n_states; ++i) {
                const double d = actions[a][i] - (i == w ? 1.0 : 0.0);
                s += d * d;
            }
            u(static_cast<long>(a), static_cast<long>(w)) = -s;
        }
    }
    return u;
}

namespace {

// g(i, t, a) = sum_w mu_i(w) f(t | w) u(a, w, t), stored at (i * T + t) * A + a.
struct Tables {
    std::size_t M, T, A;
    std::vector<double> g;
    std::vector<double> type_prob;  // P_i(t) at i * T + t

    double at(std::size_t i, std::size_t t, std::size_t a) const { return g[(i * T + t) * A + a]; }
};

Tables tabulate(const FiniteGame& gm) {
    Tables tb;
    tb.M = gm.n_messages();
    tb.T = gm.n_types();
    tb.A = gm.n_actions;
    const std::size_t N = gm.n_states();
    tb.g.assign(tb.M * tb.T * tb.A, 0.0);
    tb.type_prob.assign(tb.M * tb.T, 0.0);
    for (std::size_t i = 0; i < tb.M; ++i) {
        for (std::size_t t = 0; t < tb.T; ++t) {
            for (std::size_t w = 0; w < N; ++w) {
                const double wt =
                    gm.posteriors[i][w] * gm.type_law(static_cast<long>(w), static_cast<long>(t));
                if (wt == 0.0) {
                    continue;
                }
                tb.type_prob[i * tb.T + t] += wt;
                for (std::size_t a = 0; a < tb.A; ++a) {
                    tb.g[(i * tb.T + t) * tb.A + a] += wt * gm.u(a, w, t);
                }
            }
        }
    }
    return tb;
}

// c(i, j): payoff against true posterior i when the agent reads message j.
Eigen::MatrixXd cross_payoff(const Tables& tb, const Eigen::MatrixXd& sigma) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<long>(tb.M), static_cast<long>(tb.M));
    for (std::size_t i = 0; i < tb.M; ++i) {
        for (std::size_t j = 0; j < tb.M; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < tb.T; ++t) {
                const long row = static_cast<long>(j * tb.T + t);
                for (std::size_t a = 0; a < tb.A; ++a) {
                    s += sigma(row, static_cast<long>(a)) * tb.at(i, t, a);
                }
            }
            c(static_cast<long>(i), static_cast<long>(j)) = s;
        }
    }
    return c;
}

// Joint weight of (true posterior i, message j): alpha tau_j [i = j] + (1 - alpha) tau_i beta_ij.
Eigen::MatrixXd joint_weights(const FiniteGame& gm, const Eigen::MatrixXd& beta) {
    const long M = static_cast<long>(gm.n_messages());
    Eigen::MatrixXd w(M, M);
    for (long i = 0; i < M; ++i) {
        for (long j = 0; j < M; ++j) {
            w(i, j) = (1.0 - gm.alpha) * gm.tau[static_cast<std::size_t>(i)] * beta(i, j);
        }
        w(i, i) += gm.alpha * gm.tau[static_cast<std::size_t>(i)];
    }
    return w;
}

// Payoff of each action after message j for type t, weighted by the joint law.
std::vector<double> action_payoffs(const Tables& tb, const Eigen::MatrixXd& w, std::size_t j,
                                   std::size_t t) {
    std::vector<double> pay(tb.A, 0.0);
    for (std::size_t i = 0; i < tb.M; ++i) {
        const double wij = w(static_cast<long>(i), static_cast<long>(j));
        if (wij == 0.0) {
            continue;
        }
        for (std::size_t a = 0; a < tb.A; ++a) {
            pay[a] += wij * tb.at(i, t, a);
        }
    }
    return pay;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < v.size(); ++a) {
        if (v[a] > v[best]) {
            best = a;
        }
    }
    return best;
}

double agent_guarantee_tb(const FiniteGame& gm, const Tables& tb, const Eigen::MatrixXd& sigma) {
    const Eigen::MatrixXd c = cross_payoff(tb, sigma);
    double v = 0.0;
    for (std::size_t i = 0; i < tb.M; ++i) {
        const long li = static_cast<long>(i);
        v += gm.tau[i] * (gm.alpha * c(li, li) + (1.0 - gm.alpha) * c.row(li).minCoeff());
    }
    return v;
}

Eigen::MatrixXd best_response_tb(const Tables& tb, const Eigen::MatrixXd& w) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(static_cast<long>(tb.M * tb.T), static_cast<long>(tb.A));
    for (std::size_t j = 0; j < tb.M; ++j) {
        for (std::size_t t = 0; t < tb.T; ++t) {
            const std::size_t a = argmax_lowest(action_payoffs(tb, w, j, t));
            sigma(static_cast<long>(j * tb.T + t), static_cast<long>(a)) = 1.0;
        }
    }
    return sigma;
}

double adversary_guarantee_tb(const FiniteGame& gm, const Tables& tb, const Eigen::MatrixXd& beta) {
    const Eigen::MatrixXd w = joint_weights(gm, beta);
    double v = 0.0;
    for (std::size_t j = 0; j < tb.M; ++j) {
        for (std::size_t t = 0; t < tb.T; ++t) {
            const std::vector<double> pay = action_payoffs(tb, w, j, t);
            v += *std::max_element(pay.begin(), pay.end());
        }
    }
    return v;
}

} // namespace

double agent_guarantee(const FiniteGame& g, const Eigen::MatrixXd& sigma) {
    check_game(g);
    return agent_guarantee_tb(g, tabulate(g), sigma);
}

double adversary_guarantee(const FiniteGame& g, const Eigen::MatrixXd& beta) {
    check_game(g);
    return adversary_guarantee_tb(g, tabulate(g), beta);
}

Eigen::MatrixXd agent_best_response(const FiniteGame& g, const Eigen::MatrixXd& beta) {
    check_game(g);
    return best_response_tb(tabulate(g), joint_weights(g, beta));
}

double no_adviser_value(const FiniteGame& g) {
    check_game(g);
    double v = 0.0;
    for (std::size_t t = 0; t < g.n_types(); ++t) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < g.n_actions; ++a) {
            double s = 0.0;
            for (std::size_t w = 0; w < g.n_states(); ++w) {
                s += g.prior[w] * g.type_law(static_cast<long>(w), static_cast<long>(t)) * g.u(a, w, t);
            }
            best = std::max(best, s);
        }
        v += best;
    }
    return v;
}

SaddleSolution solve_saddle(const FiniteGame& gm, const SaddleOptions& opts) {
    check_game(gm);
    const Tables tb = tabulate(gm);
    const std::size_t M = tb.M, T = tb.T, A = tb.A;
    const double alpha = gm.alpha;

    // Shift payoffs so every g is nonnegative; values move by exactly `shift`
    // once strategies are distributions.
    const double umin = *std::min_element(gm.payoff.begin(), gm.payoff.end());
    const double umax = *std::max_element(gm.payoff.begin(), gm.payoff.end());
    const double shift = std::max(1.0, umax - umin) - umin;
    auto gs = [&](std::size_t i, std::size_t t, std::size_t a) {
        return tb.at(i, t, a) + shift * tb.type_prob[i * T + t];
    };

    SaddleSolution sol;

    // Agent side: max alpha sum tau_i c(i,i) + (1-alpha) sum tau_i z_i,
    // z_i <= c(i, j) for all j, sum_a sigma(j, t, a) <= 1.
    {
        const std::size_t nsig = M * T * A;
        const long nv = static_cast<long>(nsig + M);
        const long rows = static_cast<long>(M * M + M * T);
        LinearProgram lp;
        lp.A = Eigen::MatrixXd::Zero(rows, nv);
        lp.b = Eigen::VectorXd::Zero(rows);
        lp.c = Eigen::VectorXd::Zero(nv);
        lp.sense.assign(static_cast<std::size_t>(rows), RowSense::le);
        auto sig = [&](std::size_t j, std::size_t t, std::size_t a) {
            return static_cast<long>((j * T + t) * A + a);
        };
        long r = 0;
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t j = 0; j < M; ++j, ++r) {
                lp.A(r, static_cast<long>(nsig + i)) = 1.0;
                for (std::size_t t = 0; t < T; ++t) {
                    for (std::size_t a = 0; a < A; ++a) {
                        lp.A(r, sig(j, t, a)) = -gs(i, t, a);
                    }
                }
            }
        }
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t t = 0; t < T; ++t, ++r) {
                for (std::size_t a = 0; a < A; ++a) {
                    lp.A(r, sig(j, t, a)) = 1.0;
                }
                lp.b(r) = 1.0;
            }
        }
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t a = 0; a < A; ++a) {
                    lp.c(sig(i, t, a)) = alpha * gm.tau[i] * gs(i, t, a);
                }
            }
            lp.c(static_cast<long>(nsig + i)) = (1.0 - alpha) * gm.tau[i];
        }
        const LpResult res = solve_lp(lp, opts.lp);
        if (res.status != LpStatus::optimal) {
            throw SolverError("solve_saddle: agent LP returned " + to_string(res.status));
        }
        sol.agent_lp_iterations = res.iterations;
        sol.agent_strategy.resize(static_cast<long>(M * T), static_cast<long>(A));
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t a = 0; a < A; ++a) {
                    sol.agent_strategy(static_cast<long>(j * T + t), static_cast<long>(a)) =
                        std::max(0.0, res.x(sig(j, t, a)));
                }
            }
        }
    }

    // Adversary side: min sum_{j,t} s_{jt} with
    // s_{jt} >= alpha tau_j g(j,t,a) + (1-alpha) sum_i tau_i beta_ij g(i,t,a) and sum_j beta_ij >= 1.
    // Solved by constraint generation over the action rows: most of them never
    // bind, and the full dense tableau is both slow and loses accuracy.
    Eigen::VectorXd beta_x;
    {
        const std::size_t ns = M * T;
        const long nv = static_cast<long>(ns + M * M);
        auto bet = [&](std::size_t i, std::size_t j) { return static_cast<long>(ns + i * M + j); };
        // Right-hand side of the (j, t, a) row at a given beta.
        auto row_value = [&](const Eigen::VectorXd& x, std::size_t j, std::size_t t, std::size_t a) {
            double v = alpha * gm.tau[j] * gs(j, t, a);
            for (std::size_t i = 0; i < M; ++i) {
                v += (1.0 - alpha) * gm.tau[i] * gs(i, t, a) * x(bet(i, j));
            }
            return v;
        };
        // Start from the best replies to truthful reporting.
        std::vector<std::vector<std::size_t>> active(ns);
        {
            Eigen::VectorXd truthful = Eigen::VectorXd::Zero(nv);
            for (std::size_t i = 0; i < M; ++i) {
                truthful(bet(i, i)) = 1.0;
            }
            for (std::size_t j = 0; j < M; ++j) {
                for (std::size_t t = 0; t < T; ++t) {
                    std::size_t best = 0;
                    for (std::size_t a = 1; a < A; ++a) {
                        if (row_value(truthful, j, t, a) > row_value(truthful, j, t, best)) {
                            best = a;
                        }
                    }
                    active[j * T + t].push_back(best);
                }
            }
        }
        double scale = 0.0;
        for (double x : tb.g) {
            scale = std::max(scale, std::abs(x));
        }
        scale += shift;
        LpResult res;
        for (int round = 0;; ++round) {
            std::size_t n_rows = M;
            for (const auto& a : active) {
                n_rows += a.size();
            }
            LinearProgram lp;
            lp.A = Eigen::MatrixXd::Zero(static_cast<long>(n_rows), nv);
            lp.b = Eigen::VectorXd::Zero(static_cast<long>(n_rows));
            lp.c = Eigen::VectorXd::Zero(nv);
            lp.sense.assign(n_rows, RowSense::le);
            long r = 0;
            for (std::size_t j = 0; j < M; ++j) {
                for (std::size_t t = 0; t < T; ++t) {
                    for (std::size_t a : active[j * T + t]) {
                        lp.A(r, static_cast<long>(j * T + t)) = -1.0;
                        for (std::size_t i = 0; i < M; ++i) {
                            lp.A(r, bet(i, j)) = (1.0 - alpha) * gm.tau[i] * gs(i, t, a);
                        }
                        lp.b(r) = -alpha * gm.tau[j] * gs(j, t, a);
                        ++r;
                    }
                }
            }
            for (std::size_t i = 0; i < M; ++i, ++r) {
                for (std::size_t j = 0; j < M; ++j) {
                    lp.A(r, bet(i, j)) = -1.0;
                }
                lp.b(r) = -1.0;
            }
            for (std::size_t k = 0; k < ns; ++k) {
                lp.c(static_cast<long>(k)) = -1.0;
            }
            res = solve_lp(lp, opts.lp);
            sol.adversary_lp_iterations += res.iterations;
            if (res.status != LpStatus::optimal) {
                throw SolverError("solve_saddle: adversary LP returned " + to_string(res.status));
            }
            // Add the most violated action row of every (message, type).
            bool added = false;
            for (std::size_t j = 0; j < M; ++j) {
                for (std::size_t t = 0; t < T; ++t) {
                    const double s_jt = res.x(static_cast<long>(j * T + t));
                    std::size_t worst = A;
                    double viol = 1e-13 * scale;
                    for (std::size_t a = 0; a < A; ++a) {
                        const double d = row_value(res.x, j, t, a) - s_jt;
                        if (d > viol) {
                            viol = d;
                            worst = a;
                        }
                    }
                    auto& act = active[j * T + t];
                    if (worst < A && std::find(act.begin(), act.end(), worst) == act.end()) {
                        act.push_back(worst);
                        added = true;
                    }
                }
            }
            if (!added) {
                break;
            }
            if (round > static_cast<int>(A * ns)) {
                throw SolverError("solve_saddle: constraint generation did not terminate");
            }
        }
        beta_x = res.x;
        sol.adversary_strategy.resize(static_cast<long>(M), static_cast<long>(M));
        sol.adversary_strategy.resize(static_cast<long>(M), static_cast<long>(M));
        for (std::size_t i = 0; i < M; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < M; ++j) {
                const double b = std::max(0.0, beta_x(bet(i, j)));
                sol.adversary_strategy(static_cast<long>(i), static_cast<long>(j)) = b;
                s += b;
            }
            if (s > 0.0) {
                sol.adversary_strategy.row(static_cast<long>(i)) /= s;
            } else {
                sol.adversary_strategy.row(static_cast<long>(i)).setZero();
                sol.adversary_strategy(static_cast<long>(i), static_cast<long>(i)) = 1.0;
            }
        }
    }

    // Induced law of (true posterior, message).
    const Eigen::MatrixXd w = joint_weights(gm, sol.adversary_strategy);
    sol.message_mass = w.colwise().sum().transpose();
    sol.induced_posteriors.assign(M, {});
    sol.off_path.assign(M, false);
    sol.off_path_reassigned.assign(M, false);
    const std::size_t N = gm.n_states();
    for (std::size_t j = 0; j < M; ++j) {
        const double mass = sol.message_mass(static_cast<long>(j));
        if (mass <= opts.off_path_tol) {
            sol.off_path[j] = true;
            continue;
        }
        std::vector<double> post(N, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            const double wij = w(static_cast<long>(i), static_cast<long>(j));
            for (std::size_t s = 0; s < N; ++s) {
                post[s] += wij * gm.posteriors[i][s];
            }
        }
        for (double& p : post) {
            p /= mass;
        }
        sol.induced_posteriors[j] = std::move(post);
    }

    // Leftover probability (the LP only asks sum <= 1) goes to the best reply.
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t t = 0; t < T; ++t) {
            const long row = static_cast<long>(j * T + t);
            const double s = sol.agent_strategy.row(row).sum();
            if (s < 1.0) {
                const std::size_t a = argmax_lowest(action_payoffs(tb, w, j, t));
                sol.agent_strategy(row, static_cast<long>(a)) += 1.0 - s;
            } else {
                sol.agent_strategy.row(row) /= s;
            }
        }
    }

    sol.value = agent_guarantee_tb(gm, tb, sol.agent_strategy);
    sol.minimax_value = adversary_guarantee_tb(gm, tb, sol.adversary_strategy);

    // Off-path messages: binary games play the best reply at the clamp of the
    // message onto the induced posterior range, others the prior-optimal action.
    // The replacement is kept only if the agent's guarantee does not drop.
    bool any_off = false;
    double lo = 1.0, hi = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        if (sol.off_path[j]) {
            any_off = true;
        } else if (N == 2) {
            lo = std::min(lo, sol.induced_posteriors[j][1]);
            hi = std::max(hi, sol.induced_posteriors[j][1]);
        }
    }
    if (any_off) {
        for (std::size_t j = 0; j < M; ++j) {
            if (!sol.off_path[j]) {
                continue;
            }
            Eigen::MatrixXd trial = sol.agent_strategy;
            std::vector<double> target = gm.prior;
            if (N == 2 && lo <= hi) {
                const double m1 = std::clamp(gm.posteriors[j][1], lo, hi);
                target = {1.0 - m1, m1};
            }
            for (std::size_t t = 0; t < T; ++t) {
                std::vector<double> pay(A, 0.0);
                for (std::size_t a = 0; a < A; ++a) {
                    for (std::size_t s = 0; s < N; ++s) {
                        pay[a] += target[s] * gm.type_law(static_cast<long>(s), static_cast<long>(t)) *
                                  gm.u(a, s, t);
                    }
                }
                const long row = static_cast<long>(j * T + t);
                trial.row(row).setZero();
                trial(row, static_cast<long>(argmax_lowest(pay))) = 1.0;
            }
            const double v = agent_guarantee_tb(gm, tb, trial);
            if (v >= sol.value - 1e-12) {
                sol.agent_strategy = trial;
                sol.value = v;
                sol.off_path_reassigned[j] = true;
            }
        }
    }

    // Both guarantees bracket the game value; exploitability is measured
    // against the midpoint, so each side's gain is at most the duality gap.
    sol.duality_gap = sol.minimax_value - sol.value;
    const double mid = 0.5 * (sol.value + sol.minimax_value);
    sol.exploitability = {std::max(0.0, mid - sol.value), std::max(0.0, sol.minimax_value - mid)};
    return sol;
}

AdviserValue adviser_value(const FiniteGame& g, const SaddleOptions& opts) {
    AdviserValue out;
    out.u_star = solve_saddle(g, opts).value;
    out.u_0 = no_adviser_value(g);
    out.v = out.u_star - out.u_0;
    return out;
}

TrsReport verify_trs_structure(const FiniteGame& gm, const SaddleSolution& sol,
                               const TrsCheckOptions& opts) {
    check_game(gm);
    const Tables tb = tabulate(gm);
    const std::size_t M = tb.M, T = tb.T, A = tb.A, N = gm.n_states();
    const Eigen::MatrixXd w = joint_weights(gm, sol.adversary_strategy);
    TrsReport rep;
    for (std::size_t j = 0; j < M; ++j) {
        MessageCheck mc;
        mc.message = j;
        mc.mass = w.col(static_cast<long>(j)).sum();
        mc.on_path = mc.mass > 1e-12;
        if (!mc.on_path) {
            ++rep.off_path;
            rep.messages.push_back(std::move(mc));
            continue;
        }
        mc.posterior.assign(N, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            for (std::size_t s = 0; s < N; ++s) {
                mc.posterior[s] += w(static_cast<long>(i), static_cast<long>(j)) * gm.posteriors[i][s];
            }
        }
        for (double& p : mc.posterior) {
            p /= mc.mass;
        }
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<double> pay = action_payoffs(tb, w, j, t);
            for (double& p : pay) {
                p /= mc.mass;
            }
            const double best = *std::max_element(pay.begin(), pay.end());
            const long row = static_cast<long>(j * T + t);
            for (std::size_t a = 0; a < A; ++a) {
                const double s = sol.agent_strategy(row, static_cast<long>(a));
                mc.expected_margin += s * (best - pay[a]);
                if (s > 1e-9) {
                    mc.support_margin = std::max(mc.support_margin, best - pay[a]);
                }
            }
        }
        mc.pass = mc.support_margin <= opts.margin_tol;
        if (opts.interval && N == 2) {
            const double m1 = gm.posteriors[j][1];
            const double post1 = mc.posterior[1];
            if (m1 < opts.interval->lo) {
                mc.projection_gap = std::abs(post1 - opts.interval->lo);
            } else if (m1 > opts.interval->hi) {
                mc.projection_gap = std::abs(post1 - opts.interval->hi);
            }
            if (mc.projection_gap) {
                rep.worst_projection_gap = std::max(rep.worst_projection_gap, *mc.projection_gap);
                rep.projection_pass = rep.projection_pass && *mc.projection_gap <= opts.posterior_tol;
            }
        }
        rep.all_on_path_pass = rep.all_on_path_pass && mc.pass;
        rep.worst_margin = std::max(rep.worst_margin, mc.support_margin);
        rep.messages.push_back(std::move(mc));
    }
    return rep;
}

} // namespace trustregion
