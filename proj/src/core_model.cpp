#include "trustregion/core_model.hpp"

#include "trustregion/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace trustregion {

void check_binary_belief(double mu, const char* what) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw InputError(std::string(what) + " must lie in [0,1], got " + std::to_string(mu));
    }
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw InputError("belief: empty probability vector");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InputError("belief: negative or non-finite entry");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InputError("belief: entries sum to " + std::to_string(total) + ", expected 1");
    }
}

Belief Belief::binary(double mu) {
    check_binary_belief(mu, "binary belief");
    return Belief({1.0 - mu, mu});
}

double Belief::mu() const {
    if (probs_.size() != 2) {
        throw InputError("belief: scalar view requested for a non-binary belief");
    }
    return probs_[1];
}

std::string to_string(UtilityKind kind) {
    switch (kind) {
    case UtilityKind::quadratic: return "quadratic";
    case UtilityKind::log_score: return "log-score";
    case UtilityKind::weighted_quadratic: return "weighted-quadratic";
    case UtilityKind::custom_grid: return "custom-grid";
    case UtilityKind::custom: return "custom";
    }
    return "unknown";
}

// ----------------------------------------------------------------------
// UtilityCurve

double UtilityCurve::clamp_(double mu) const {
    if (!clamps_) {
        return mu;
    }
    if (kind_ == UtilityKind::log_score) {
        return std::clamp(mu, kBeliefClamp, 1.0 - kBeliefClamp);
    }
    return std::clamp(mu, 0.0, 1.0);
}

UtilityCurve UtilityCurve::quadratic() {
    UtilityCurve u;
    u.kind_ = UtilityKind::quadratic;
    u.label_ = "quadratic";
    u.eval_ = [](double m) { return m * m - m; };
    u.d1_ = [](double m) { return 2.0 * m - 1.0; };
    u.d2_ = [](double) { return 2.0; };
    return u;
}

UtilityCurve UtilityCurve::log_score() {
    UtilityCurve u;
    u.kind_ = UtilityKind::log_score;
    u.label_ = "log-score";
    u.clamps_ = true;
    u.eval_ = [](double m) { return m * std::log(m) + (1.0 - m) * std::log1p(-m); };
    u.d1_ = [](double m) { return std::log(m) - std::log1p(-m); };
    u.d2_ = [](double m) { return 1.0 / (m * (1.0 - m)); };
    return u;
}

UtilityCurve UtilityCurve::weighted_quadratic(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InputError("weighted-quadratic: gamma must be positive");
    }
    UtilityCurve u;
    u.kind_ = UtilityKind::weighted_quadratic;
    u.label_ = "weighted-quadratic";
    u.gamma_ = gamma;
    const double k = gamma - 1.0;
    u.eval_ = [gamma, k](double m) { return -gamma * m * (1.0 - m) / (1.0 + k * m); };
    u.d1_ = [gamma, k](double m) {
        const double s = 1.0 + k * m;
        return -gamma * (1.0 - 2.0 * m - k * m * m) / (s * s);
    };
    u.d2_ = [gamma, k](double m) {
        const double s = 1.0 + k * m;
        return 2.0 * gamma * gamma / (s * s * s);
    };
    return u;
}

UtilityCurve UtilityCurve::custom_grid(std::vector<double> knots, std::vector<double> d2_values) {
    if (knots.size() < 2 || knots.size() != d2_values.size()) {
        throw InputError("custom-grid utility: need matching knots and U'' samples (at least 2)");
    }
    if (knots.front() != 0.0 || knots.back() != 1.0) {
        throw InputError("custom-grid utility: knots must span [0,1]");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0 && !(knots[i] > knots[i - 1])) {
            throw InputError("custom-grid utility: knots must be strictly increasing");
        }
        if (!(d2_values[i] > 0.0) || !std::isfinite(d2_values[i])) {
            throw InputError("custom-grid utility: U'' samples must be positive");
        }
    }

    // U'(x_i), U(x_i) at knots; U'' is linear on each segment so U' is
    // quadratic and U cubic there.
    const std::size_t n = knots.size();
    std::vector<double> c1(n, 0.0), c0(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = knots[i + 1] - knots[i];
        const double s = (d2_values[i + 1] - d2_values[i]) / h;
        c1[i + 1] = c1[i] + d2_values[i] * h + s * h * h / 2.0;
        c0[i + 1] = c0[i] + c1[i] * h + d2_values[i] * h * h / 2.0 + s * h * h * h / 6.0;
    }

    struct Table {
        std::vector<double> x, d2, c1, c0;
        std::size_t seg(double m) const {
            auto it = std::upper_bound(x.begin(), x.end(), m);
            std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
            return std::min(i, x.size() - 2);
        }
        double slope(std::size_t i) const { return (d2[i + 1] - d2[i]) / (x[i + 1] - x[i]); }
    };
    auto t = std::make_shared<const Table>(Table{knots, d2_values, c1, c0});

    UtilityCurve u;
    u.kind_ = UtilityKind::custom_grid;
    u.label_ = "custom-grid";
    u.clamps_ = true;
    u.knots_ = std::move(knots);
    u.d2_values_ = std::move(d2_values);
    u.d2_ = [t](double m) {
        const std::size_t i = t->seg(m);
        return t->d2[i] + t->slope(i) * (m - t->x[i]);
    };
    u.d1_ = [t](double m) {
        const std::size_t i = t->seg(m);
        const double d = m - t->x[i];
        return t->c1[i] + t->d2[i] * d + t->slope(i) * d * d / 2.0;
    };
    u.eval_ = [t](double m) {
        const std::size_t i = t->seg(m);
        const double d = m - t->x[i];
        return t->c0[i] + t->c1[i] * d + t->d2[i] * d * d / 2.0 + t->slope(i) * d * d * d / 6.0;
    };
    return u;
}

UtilityCurve UtilityCurve::custom(Fn eval, Fn d1, Fn d2, std::string label) {
    if (!eval || !d1 || !d2) {
        throw InputError("custom utility: eval, d1 and d2 are all required");
    }
    UtilityCurve u;
    u.kind_ = UtilityKind::custom;
    u.label_ = std::move(label);
    u.eval_ = std::move(eval);
    u.d1_ = std::move(d1);
    u.d2_ = std::move(d2);
    return u;
}

// ----------------------------------------------------------------------
// BeliefDensity

BeliefDensity BeliefDensity::grid(std::vector<double> knots, std::vector<double> values) {
    BeliefDensity d;
    d.kind_ = DensityKind::grid;
    d.knots_ = std::move(knots);
    d.values_ = std::move(values);
    d.finalize_();
    return d;
}

BeliefDensity BeliefDensity::uniform(double lower, double upper) {
    if (!(upper > lower)) {
        throw InputError("uniform density: empty domain");
    }
    const double v = 1.0 / (upper - lower);
    return grid({lower, upper}, {v, v});
}

BeliefDensity BeliefDensity::from_function(const std::function<double(double)>& f, std::size_t n,
                                           double lower, double upper) {
    if (n < 2) {
        throw InputError("sampled density: need at least 2 knots");
    }
    if (!(upper > lower)) {
        throw InputError("sampled density: empty domain");
    }
    std::vector<double> x(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = i + 1 == n ? upper : lower + (upper - lower) * static_cast<double>(i) / (n - 1);
        v[i] = f(x[i]);
    }
    return grid(std::move(x), std::move(v));
}

BeliefDensity BeliefDensity::radial(const std::function<double(double)>& f, double r0,
                                    std::size_t n) {
    if (!(r0 > 0.0)) {
        throw InputError("radial density: r0 must be positive");
    }
    return from_function(f, n, 0.0, r0);
}

BeliefDensity BeliefDensity::atoms(std::vector<double> points, std::vector<double> probs) {
    if (points.empty() || points.size() != probs.size()) {
        throw InputError("atom list: need matching, nonempty points and probabilities");
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    BeliefDensity d;
    d.kind_ = DensityKind::atoms;
    for (std::size_t i : order) {
        d.knots_.push_back(points[i]);
        d.values_.push_back(probs[i]);
    }
    d.finalize_();
    return d;
}

void BeliefDensity::finalize_() {
    const std::size_t n = knots_.size();
    if (n != values_.size() || n == 0 || (kind_ == DensityKind::grid && n < 2)) {
        throw InputError("density: mismatched or too few knots");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(knots_[i]) || !(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
            throw InputError("density: non-finite knot or negative value");
        }
        if (kind_ == DensityKind::grid && i > 0 && !(knots_[i] > knots_[i - 1])) {
            throw InputError("density: knots must be strictly increasing");
        }
    }

    cum0_.assign(n, 0.0);
    cum1_.assign(n, 0.0);
    if (kind_ == DensityKind::grid) {
        double m0 = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            m0 += 0.5 * (values_[i] + values_[i + 1]) * (knots_[i + 1] - knots_[i]);
        }
        if (!(m0 > 0.0)) {
            throw InputError("density: zero total mass");
        }
        for (double& v : values_) {
            v /= m0;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = knots_[i + 1] - knots_[i];
            const double s = (values_[i + 1] - values_[i]) / h;
            const double a0 = values_[i] * h + s * h * h / 2.0;
            cum0_[i + 1] = cum0_[i] + a0;
            cum1_[i + 1] = cum1_[i] + knots_[i] * a0 + values_[i] * h * h / 2.0 + s * h * h * h / 3.0;
        }
        lower_ = knots_.front();
        upper_ = knots_.back();
        mean_ = cum1_.back() / cum0_.back();
    } else {
        const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-6) {
            throw InputError("atom list: probabilities sum to " + std::to_string(total));
        }
        double c0 = 0.0, c1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            values_[i] /= total;
            c0 += values_[i];
            c1 += values_[i] * knots_[i];
            cum0_[i] = c0;
            cum1_[i] = c1;
        }
        lower_ = knots_.front();
        upper_ = knots_.back();
        mean_ = c1 / c0;
    }
}

std::size_t BeliefDensity::segment_(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    return std::min(i, knots_.size() - 2);
}

std::pair<double, double> BeliefDensity::grid_prefix_(double x) const {
    if (x <= lower_) {
        return {0.0, 0.0};
    }
    if (x >= upper_) {
        return {cum0_.back(), cum1_.back()};
    }
    const std::size_t i = segment_(x);
    const double h = knots_[i + 1] - knots_[i];
    const double s = (values_[i + 1] - values_[i]) / h;
    const double t = x - knots_[i];
    const double a0 = values_[i] * t + s * t * t / 2.0;
    const double a1 = knots_[i] * a0 + values_[i] * t * t / 2.0 + s * t * t * t / 3.0;
    return {cum0_[i] + a0, cum1_[i] + a1};
}

std::pair<double, double> BeliefDensity::raw_moments(double lo, double hi) const {
    if (hi < lo) {
        return {0.0, 0.0};
    }
    if (kind_ == DensityKind::grid) {
        const auto [a0, a1] = grid_prefix_(lo);
        const auto [b0, b1] = grid_prefix_(hi);
        return {b0 - a0, b1 - a1};
    }
    auto first = std::lower_bound(knots_.begin(), knots_.end(), lo);
    auto last = std::upper_bound(knots_.begin(), knots_.end(), hi);
    double m0 = 0.0, m1 = 0.0;
    for (auto it = first; it != last; ++it) {
        const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
        m0 += values_[i];
        m1 += values_[i] * knots_[i];
    }
    return {m0, m1};
}

double BeliefDensity::cdf(double x) const {
    if (kind_ == DensityKind::grid) {
        return grid_prefix_(x).first;
    }
    auto last = std::upper_bound(knots_.begin(), knots_.end(), x);
    if (last == knots_.begin()) {
        return 0.0;
    }
    return cum0_[static_cast<std::size_t>(last - knots_.begin()) - 1];
}

double BeliefDensity::pdf(double x) const {
    if (kind_ == DensityKind::atoms || x < lower_ || x > upper_) {
        return 0.0;
    }
    const std::size_t i = segment_(x);
    const double w = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double BeliefDensity::integrate(const std::function<double(double)>& f, double lo, double hi,
                                double tol) const {
    if (hi < lo) {
        throw InputError("integrate: inverted bounds");
    }
    if (kind_ == DensityKind::atoms) {
        double acc = 0.0;
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            if (knots_[i] >= lo && knots_[i] <= hi) {
                acc += values_[i] * f(knots_[i]);
            }
        }
        return acc;
    }
    lo = std::max(lo, lower_);
    hi = std::min(hi, upper_);
    if (hi <= lo) {
        return 0.0;
    }
    // Integrate segment by segment so the kinks of the density sit on
    // quadrature boundaries.
    const std::size_t first = segment_(lo);
    const std::size_t last = segment_(hi);
    const double seg_tol = tol / static_cast<double>(last - first + 1);
    double acc = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double a = std::max(lo, knots_[i]);
        const double b = std::min(hi, knots_[i + 1]);
        if (b > a) {
            acc += integrate_simpson([&](double x) { return f(x) * pdf(x); }, a, b, seg_tol);
        }
    }
    return acc;
}

bool BeliefDensity::full_support() const {
    if (kind_ != DensityKind::grid) {
        return false;
    }
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) {
        if (!(values_[i] > 0.0)) {
            return false;
        }
    }
    return true;
}

// ----------------------------------------------------------------------
// Bregman machinery

double bregman_distance(const UtilityCurve& u, double m, double mprime) {
    check_binary_belief(m, "bregman_distance: m");
    check_binary_belief(mprime, "bregman_distance: m'");
    if (m == mprime) {
        return 0.0;
    }
    double d = 0.0;
    switch (u.kind()) {
    case UtilityKind::quadratic:
        d = (m - mprime) * (m - mprime);
        break;
    case UtilityKind::log_score: {
        const double a = std::clamp(m, kBeliefClamp, 1.0 - kBeliefClamp);
        const double b = std::clamp(mprime, kBeliefClamp, 1.0 - kBeliefClamp);
        d = a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
        break;
    }
    default:
        d = u.eval(m) - u.eval(mprime) - u.d1(mprime) * (m - mprime);
    }
    // Cancellation can leave a tiny negative number for nearby points.
    return std::max(d, 0.0);
}

double bregman_distance(const UtilityCurve& u, const Belief& m, const Belief& mprime) {
    return bregman_distance(u, m.mu(), mprime.mu());
}

double bregman_distance(const std::function<double(const std::vector<double>&)>& f,
                        const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                        const std::vector<double>& m, const std::vector<double>& mprime) {
    if (m.size() != mprime.size()) {
        throw InputError("bregman_distance: dimension mismatch");
    }
    const std::vector<double> g = grad(mprime);
    double lin = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        lin += g[i] * (m[i] - mprime[i]);
    }
    return f(m) - f(mprime) - lin;
}

namespace {

bool strictly_greater(double a, double b) {
    return a - b > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

double worst_case_report(const UtilityCurve& u, const BeliefInterval& trust, double mu) {
    check_binary_belief(mu, "worst_case_report: mu");
    if (!(trust.lo <= trust.hi)) {
        throw InputError("worst_case_report: empty trust interval");
    }
    check_binary_belief(trust.lo, "worst_case_report: trust.lo");
    check_binary_belief(trust.hi, "worst_case_report: trust.hi");
    if (trust.lo == trust.hi) {
        return trust.lo;
    }
    const double dlo = bregman_distance(u, mu, trust.lo);
    const double dhi = bregman_distance(u, mu, trust.hi);
    return strictly_greater(dhi, dlo) ? trust.hi : trust.lo;
}

Belief worst_case_report(const UtilityCurve& u, const BeliefInterval& trust, const Belief& mu) {
    return Belief::binary(worst_case_report(u, trust, mu.mu()));
}

double worst_case_report(const UtilityCurve& u, const std::vector<double>& candidates, double mu) {
    if (candidates.empty()) {
        throw InputError("worst_case_report: empty candidate set");
    }
    double best = candidates.front();
    double best_d = bregman_distance(u, mu, best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double d = bregman_distance(u, mu, candidates[i]);
        if (strictly_greater(d, best_d)) {
            best = candidates[i];
            best_d = d;
        }
    }
    return best;
}

Moments density_moments(const BeliefDensity& tau, double lo, double hi) {
    if (hi < lo) {
        throw InputError("density_moments: inverted bounds [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    const auto [m0, m1] = tau.raw_moments(lo, hi);
    Moments out;
    out.mass = m0;
    out.mean = m0 > 0.0 ? m1 / m0 : std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace trustregion
