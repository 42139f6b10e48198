#include "trustregion/binary_action.hpp"

#include "trustregion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trustregion {

namespace {

constexpr double kBoundaryTol = 1e-12;

} // namespace

RelativePayoffDist::RelativePayoffDist(BeliefDensity d, bool atoms)
    : law_(std::move(d)), atoms_(atoms) {
    const double lo = law_.lower(), hi = law_.upper();
    loss_ = std::max(0.0, -law_.raw_moments(lo, 0.0).second);
    gain_ = std::max(0.0, law_.raw_moments(0.0, hi).second);
    zero_mass_ = atoms_ ? law_.raw_moments(0.0, 0.0).first : 0.0;
}

RelativePayoffDist RelativePayoffDist::atoms(std::vector<double> values, std::vector<double> probs) {
    return RelativePayoffDist(BeliefDensity::atoms(std::move(values), std::move(probs)), true);
}

RelativePayoffDist RelativePayoffDist::density(BeliefDensity d) {
    const bool atoms = d.kind() == DensityKind::atoms;
    return RelativePayoffDist(std::move(d), atoms);
}

std::vector<double> RelativePayoffDist::cell_values() const {
    if (atoms_) {
        return law_.knots();
    }
    std::vector<double> cuts = law_.knots();
    if (cuts.front() < 0.0 && cuts.back() > 0.0) {
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), 0.0), 0.0);
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Moments m = density_moments(law_, cuts[i], cuts[i + 1]);
        if (m.mass > 0.0) {
            out.push_back(m.mean);
        }
    }
    return out;
}

std::vector<double> RelativePayoffDist::cell_probs() const {
    if (atoms_) {
        return law_.values();
    }
    std::vector<double> cuts = law_.knots();
    if (cuts.front() < 0.0 && cuts.back() > 0.0) {
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), 0.0), 0.0);
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Moments m = density_moments(law_, cuts[i], cuts[i + 1]);
        if (m.mass > 0.0) {
            out.push_back(m.mass);
        }
    }
    return out;
}

std::string to_string(ActionRegime r) {
    switch (r) {
    case ActionRegime::full_trust: return "full-trust";
    case ActionRegime::no_trust: return "no-trust";
    case ActionRegime::boundary_both: return "boundary-both";
    }
    return "unknown";
}

double binary_action_payoff(double L, double G, double alpha, double sigma_low,
                            double sigma_high) {
    // Misaligned gains go to the message with the smaller Pr(a2), losses to the larger.
    const double lo = std::min(sigma_low, sigma_high), hi = std::max(sigma_low, sigma_high);
    return alpha * (sigma_high * G - sigma_low * L) + (1.0 - alpha) * (lo * G - hi * L);
}

namespace {

void check_generic(const RelativePayoffDist& dist) {
    if (!(dist.loss() > 0.0) || !(dist.gain() > 0.0) || dist.mass_at_zero() > 0.0) {
        throw PreconditionError(
            "binary action: genericity assumption violated (need L > 0, G > 0 and no mass at v = 0; "
            "got L = " + std::to_string(dist.loss()) + ", G = " + std::to_string(dist.gain()) +
            ", mass at 0 = " + std::to_string(dist.mass_at_zero()) + ")");
    }
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("binary action: alpha must lie in [0, 1]");
    }
}

ActionRegime regime_of(double alpha, double alpha_hat) {
    if (std::abs(alpha - alpha_hat) <= kBoundaryTol) {
        return ActionRegime::boundary_both;
    }
    return alpha > alpha_hat ? ActionRegime::full_trust : ActionRegime::no_trust;
}

} // namespace

BinaryActionSolution solve_binary_action(const RelativePayoffDist& dist, double alpha) {
    check_alpha(alpha);
    check_generic(dist);
    BinaryActionSolution s;
    s.L = dist.loss();
    s.G = dist.gain();
    s.alpha = alpha;
    s.alpha_hat = std::max(s.L, s.G) / (s.L + s.G);
    s.regime = regime_of(alpha, s.alpha_hat);

    // Prior-optimal constant action; ties go to a1.
    const double constant = s.G > s.L ? 1.0 : 0.0;
    switch (s.regime) {
    case ActionRegime::full_trust:
        s.sigma_low = 0.0;
        s.sigma_high = 1.0;
        break;
    case ActionRegime::no_trust:
        s.sigma_low = s.sigma_high = constant;
        break;
    case ActionRegime::boundary_both:
        s.sigma_low = 0.0;
        s.sigma_high = 1.0;
        s.alternative = std::make_pair(constant, constant);
        break;
    }
    s.no_adviser_value = std::max(0.0, s.G - s.L);
    s.value = std::max({0.0, s.G - s.L, binary_action_payoff(s.L, s.G, alpha, 0.0, 1.0)});
    return s;
}

namespace {

AdversaryKernel build_kernel(const std::vector<double>& v, const std::vector<double>& p, double L,
                             double G, double alpha, ActionRegime tag, double sign_tol) {
    const long n = static_cast<long>(v.size());
    AdversaryKernel k;
    k.tag = tag;
    k.values = v;
    k.probs = p;
    Eigen::VectorXd qplus = Eigen::VectorXd::Zero(n), qminus = Eigen::VectorXd::Zero(n);
    for (long j = 0; j < n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (v[js] > 0.0) {
            qplus(j) = p[js] * v[js] / G;
        } else if (v[js] < 0.0) {
            qminus(j) = -p[js] * v[js] / L;
        }
    }

    // Agent action in the no-trust regime: a2 iff G > L.
    const bool plays_a2 = G > L;
    k.beta = Eigen::MatrixXd::Zero(n, n);
    if (tag == ActionRegime::full_trust) {
        k.gamma = 1.0;
        for (long i = 0; i < n; ++i) {
            const double vi = v[static_cast<std::size_t>(i)];
            if (vi < 0.0) {
                k.beta.row(i) = qplus.transpose();
            } else if (vi > 0.0) {
                k.beta.row(i) = qminus.transpose();
            } else {
                k.beta(i, i) = 1.0;
            }
        }
    } else {
        k.gamma = plays_a2 ? alpha * L / ((1.0 - alpha) * G) : alpha * G / ((1.0 - alpha) * L);
        k.gamma = std::clamp(k.gamma, 0.0, 1.0);
        // Mixed row used by types on the agent's side of the constant action.
        const Eigen::VectorXd mixed = plays_a2 ? Eigen::VectorXd(k.gamma * qminus + (1.0 - k.gamma) * qplus)
                                               : Eigen::VectorXd(k.gamma * qplus + (1.0 - k.gamma) * qminus);
        for (long i = 0; i < n; ++i) {
            const double vi = v[static_cast<std::size_t>(i)];
            if (plays_a2) {
                k.beta.row(i) = (vi < 0.0 ? qplus : mixed).transpose();
            } else {
                k.beta.row(i) = (vi > 0.0 ? qminus : mixed).transpose();
            }
            if (vi == 0.0) {
                k.beta.row(i).setZero();
                k.beta(i, i) = 1.0;
            }
        }
    }

    k.posterior_payoff.resize(n);
    Eigen::VectorXd pv(n);
    for (long i = 0; i < n; ++i) {
        pv(i) = p[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
    k.posterior_payoff = alpha * pv + (1.0 - alpha) * (k.beta.transpose() * pv);

    k.margin = std::numeric_limits<double>::infinity();
    for (long j = 0; j < n; ++j) {
        const double pj = p[static_cast<std::size_t>(j)];
        const double vj = v[static_cast<std::size_t>(j)];
        if (!(pj > 0.0) || vj == 0.0) {
            continue;
        }
        const double per_mass = k.posterior_payoff(j) / pj;
        double slack;
        if (tag == ActionRegime::full_trust) {
            slack = vj > 0.0 ? per_mass : -per_mass;
        } else {
            slack = plays_a2 ? per_mass : -per_mass;
        }
        k.margin = std::min(k.margin, slack);
    }
    k.certified = k.margin >= -sign_tol;
    return k;
}

} // namespace

std::vector<AdversaryKernel> rationalizing_adversary(const RelativePayoffDist& dist, double alpha,
                                                     double sign_tol) {
    const BinaryActionSolution s = solve_binary_action(dist, alpha);
    const std::vector<double> v = dist.cell_values();
    const std::vector<double> p = dist.cell_probs();
    std::vector<AdversaryKernel> out;
    if (s.regime != ActionRegime::no_trust) {
        out.push_back(build_kernel(v, p, s.L, s.G, alpha, ActionRegime::full_trust, sign_tol));
    }
    if (s.regime != ActionRegime::full_trust) {
        out.push_back(build_kernel(v, p, s.L, s.G, alpha, ActionRegime::no_trust, sign_tol));
    }
    return out;
}

std::vector<ValuePoint> binary_action_value_curve(const RelativePayoffDist& dist,
                                                  const std::vector<double>& alphas) {
    std::vector<ValuePoint> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        out.push_back({a, solve_binary_action(dist, a).value});
    }
    return out;
}

} // namespace trustregion
