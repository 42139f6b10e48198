#include "trustregion/adversary_transport.hpp"

#include "trustregion/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace trustregion {

namespace {

constexpr std::size_t kCacheSize = 4096;
constexpr double kInverseTol = 1e-12;
constexpr double kMinCellMass = 1e-14;

} // namespace

std::string to_string(Regime r) {
    return r == Regime::high_alpha ? "high-alpha" : "low-alpha";
}

// ----------------------------------------------------------------------
// TransportPiece

TransportPiece TransportPiece::quantile(const BeliefDensity& tau, double src_lo, double src_hi,
                                        double tgt_lo, double tgt_hi, double anchor,
                                        double source_weight, double target_weight) {
    if (src_hi < src_lo || tgt_hi < tgt_lo) {
        throw InputError("transport piece: inverted interval");
    }
    TransportPiece p;
    p.kind_ = Kind::quantile;
    p.src_lo_ = src_lo;
    p.src_hi_ = src_hi;
    p.tgt_lo_ = tgt_lo;
    p.tgt_hi_ = tgt_hi;
    p.anchor_ = anchor;
    p.source_weight_ = source_weight;
    p.target_weight_ = target_weight;
    p.tau_ = std::make_shared<const BeliefDensity>(tau);
    p.src_grid_.resize(kCacheSize);
    p.tgt_grid_.resize(kCacheSize);
    for (std::size_t k = 0; k < kCacheSize; ++k) {
        const double w = static_cast<double>(k) / (kCacheSize - 1);
        p.src_grid_[k] = p.source_cdf(src_lo + w * (src_hi - src_lo));
        p.tgt_grid_[k] = p.target_cdf(tgt_lo + w * (tgt_hi - tgt_lo));
    }
    return p;
}

TransportPiece TransportPiece::constant(double src_lo, double src_hi, double target) {
    if (src_hi < src_lo) {
        throw InputError("transport piece: inverted interval");
    }
    TransportPiece p;
    p.kind_ = Kind::constant;
    p.src_lo_ = src_lo;
    p.src_hi_ = src_hi;
    p.tgt_lo_ = p.tgt_hi_ = target;
    p.anchor_ = target;
    return p;
}

double TransportPiece::dev_mass_(double anchor, double a, double b, double weight) const {
    if (b <= a) {
        return 0.0;
    }
    const auto [m0, m1] = tau_->raw_moments(a, b);
    return weight * std::abs(m1 - anchor * m0);
}

double TransportPiece::source_mass() const {
    return kind_ == Kind::quantile ? source_cdf(src_hi_) : 0.0;
}

double TransportPiece::target_mass() const {
    return kind_ == Kind::quantile ? target_cdf(tgt_hi_) : 0.0;
}

double TransportPiece::source_cdf(double x) const {
    return dev_mass_(anchor_, src_lo_, std::min(x, src_hi_), source_weight_);
}

double TransportPiece::target_cdf(double y) const {
    return dev_mass_(anchor_, tgt_lo_, std::min(y, tgt_hi_), target_weight_);
}

double TransportPiece::quantile_(double q, bool source) const {
    const double lo = source ? src_lo_ : tgt_lo_;
    const double hi = source ? src_hi_ : tgt_hi_;
    const std::vector<double>& grid = source ? src_grid_ : tgt_grid_;
    if (kind_ != Kind::quantile || q <= 0.0 || hi <= lo) {
        return lo;
    }
    if (q > grid.back()) {
        return hi;
    }
    const auto it = std::lower_bound(grid.begin(), grid.end(), q);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == 0) {
        return lo;
    }
    auto x_at = [&](std::size_t i) {
        return i + 1 == kCacheSize ? hi : lo + (hi - lo) * static_cast<double>(i) / (kCacheSize - 1);
    };
    // Invariant: F(a) < q <= F(b).
    double a = x_at(k - 1);
    double b = x_at(k);
    while (b - a > kInverseTol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) {
            break;
        }
        const double f = source ? source_cdf(m) : target_cdf(m);
        if (f >= q) {
            b = m;
        } else {
            a = m;
        }
    }
    return b;
}

double TransportPiece::source_quantile(double q) const { return quantile_(q, true); }

double TransportPiece::target_quantile(double q) const { return quantile_(q, false); }

double TransportPiece::operator()(double mu) const {
    if (kind_ == Kind::constant) {
        return tgt_lo_;
    }
    return target_quantile(source_cdf(mu));
}

std::pair<double, double> TransportPiece::preimage(double y1, double y2) const {
    if (kind_ == Kind::constant) {
        if (tgt_lo_ >= y1 && tgt_lo_ <= y2) {
            return {src_lo_, src_hi_};
        }
        return {src_lo_, src_lo_};
    }
    // Cells are half-open [y1, y2); the cell ending at the target's upper end owns it.
    if (y2 < tgt_lo_ || y1 > tgt_hi_ || y2 < y1 || (y1 >= tgt_hi_ && tgt_hi_ > tgt_lo_)) {
        return {src_lo_, src_lo_};
    }
    const double s1 = y1 <= tgt_lo_ ? src_lo_ : source_quantile(target_cdf(y1));
    const double s2 = y2 >= tgt_hi_ ? src_hi_ : source_quantile(target_cdf(y2));
    return {s1, std::max(s1, s2)};
}

// ----------------------------------------------------------------------
// TransportMap

double TransportMap::operator()(double mu) const {
    for (const auto& p : pieces) {
        if (mu >= p.src_lo() && mu < p.src_hi()) {
            return p(mu);
        }
    }
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        if (mu == it->src_hi()) {
            return (*it)(mu);
        }
    }
    return mu;
}

std::pair<double, double> low_alpha_thresholds(const BeliefDensity& tau, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
        throw InputError("low_alpha_thresholds: alpha must lie in [0, 1/2]");
    }
    const double mu0 = tau.mean();
    const double ratio = alpha / (1.0 - alpha);
    auto below = [&](double x) {  // int_0^x (mu0 - mu) tau
        const auto [m0, m1] = tau.raw_moments(0.0, x);
        return mu0 * m0 - m1;
    };
    auto above = [&](double x) {  // int_x^1 (mu - mu0) tau
        const auto [m0, m1] = tau.raw_moments(x, 1.0);
        return m1 - mu0 * m0;
    };
    const double c_low = below(mu0);
    const double c_high = above(mu0);
    const double mu_L = bisect([&](double x) { return below(x) - ratio * c_low; }, 0.0, mu0, 1e-14);
    const double mu_H = bisect([&](double x) { return above(x) - ratio * c_high; }, mu0, 1.0, 1e-14);
    return {mu_L, mu_H};
}

TransportMap build_tre_map_unchecked(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                     const TrustInterval& trust) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("build_tre_map: alpha must lie in [0,1]");
    }
    if (tau.kind() != DensityKind::grid) {
        throw InputError("build_tre_map: needs a density");
    }
    TransportMap map;
    map.alpha = alpha;
    map.prior = tau.mean();
    if (alpha <= 0.5) {
        map.regime = Regime::low_alpha;
        map.lo = map.hi = map.cutoff = map.prior;
        const auto [mu_L, mu_H] = low_alpha_thresholds(tau, alpha);
        map.mu_L = mu_L;
        map.mu_H = mu_H;
        const double mu0 = map.prior;
        map.pieces.push_back(
            TransportPiece::quantile(tau, 0.0, mu_L, mu0, 1.0, mu0, 1.0 - alpha, alpha));
        if (mu_H > mu_L) {
            map.pieces.push_back(TransportPiece::constant(mu_L, mu_H, mu0));
        }
        map.pieces.push_back(
            TransportPiece::quantile(tau, mu_H, 1.0, 0.0, mu0, mu0, 1.0 - alpha, alpha));
        return map;
    }
    map.regime = Regime::high_alpha;
    map.lo = trust.lo;
    map.hi = trust.hi;
    map.cutoff = cutoff_belief(u, trust.lo, trust.hi);
    map.mu_L = map.mu_H = map.prior;
    map.pieces.push_back(TransportPiece::quantile(tau, 0.0, map.cutoff, map.hi, 1.0, map.hi,
                                                  1.0 - alpha, alpha));
    map.pieces.push_back(TransportPiece::quantile(tau, map.cutoff, 1.0, 0.0, map.lo, map.lo,
                                                  1.0 - alpha, alpha));
    return map;
}

TransportMap build_tre_map(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                           const TrustInterval& trust, double tolerance) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("build_tre_map: alpha must lie in [0,1]");
    }
    if (alpha <= 0.5) {
        const double mu0 = tau.mean();
        if (std::abs(trust.lo - mu0) > tolerance || std::abs(trust.hi - mu0) > tolerance) {
            throw PreconditionError("build_tre_map: for alpha <= 1/2 the trust region must be the prior");
        }
    } else {
        const auto [r1, r2] = psi_residuals(u, tau, alpha, trust.lo, trust.hi);
        if (std::abs(r1) > tolerance || std::abs(r2) > tolerance) {
            throw PreconditionError("build_tre_map: trust interval does not solve the balancing system "
                                    "(residuals " + std::to_string(r1) + ", " + std::to_string(r2) + ")");
        }
    }
    return build_tre_map_unchecked(u, tau, alpha, trust);
}

TransportMap constant_map(double message, const TrustInterval& trust, double alpha) {
    check_binary_belief(message, "constant_map: message");
    TransportMap map;
    map.regime = Regime::high_alpha;
    map.alpha = alpha;
    map.lo = trust.lo;
    map.hi = trust.hi;
    map.cutoff = trust.cutoff;
    map.prior = trust.prior;
    map.pieces.push_back(TransportPiece::constant(0.0, 1.0, message));
    return map;
}

// ----------------------------------------------------------------------
// Verification

namespace {

struct CellResult {
    double lo = 0.0, hi = 0.0;
    double deviation = 0.0;
    bool skipped = false;
};

} // namespace

ConsistencyReport verify_posterior_consistency(const TransportMap& map, const BeliefDensity& tau,
                                               double alpha, const TrustInterval& trust,
                                               std::size_t n_cells, Exec exec) {
    if (n_cells == 0) {
        throw InputError("verify_posterior_consistency: need at least one cell");
    }
    const bool low = map.regime == Regime::low_alpha;
    const double lo = low ? map.prior : trust.lo;
    const double hi = low ? map.prior : trust.hi;
    const double mu0 = map.prior;

    std::vector<double> edges;
    for (std::size_t i = 0; i <= n_cells; ++i) {
        edges.push_back(static_cast<double>(i) / static_cast<double>(n_cells));
    }
    edges.push_back(lo);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const std::size_t n_regular = edges.size() - 1;

    // Atoms created by constant pieces, one cell per distinct target.
    std::map<double, std::vector<const TransportPiece*>> atoms;
    for (const auto& p : map.pieces) {
        if (p.kind() == TransportPiece::Kind::constant && p.src_hi() > p.src_lo()) {
            atoms[p.tgt_lo()].push_back(&p);
        }
    }
    std::vector<double> atom_targets;
    for (const auto& [t, _] : atoms) {
        atom_targets.push_back(t);
    }

    auto required = [&](double c_lo, double c_hi, double fallback) {
        if (low) {
            return mu0;
        }
        if (c_lo >= hi) {
            return hi;
        }
        if (c_hi <= lo) {
            return lo;
        }
        return fallback;
    };

    const std::size_t total = n_regular + atom_targets.size();
    std::vector<CellResult> results(total);

    auto regular_cell = [&](std::size_t i) {
        const double c_lo = edges[i];
        const double c_hi = edges[i + 1];
        const auto [t0, t1] = tau.raw_moments(c_lo, c_hi);
        double m0 = alpha * t0;
        double m1 = alpha * t1;
        for (const auto& p : map.pieces) {
            if (p.kind() != TransportPiece::Kind::quantile) {
                continue;
            }
            const auto [s1, s2] = p.preimage(c_lo, c_hi);
            const auto [a0, a1] = tau.raw_moments(s1, s2);
            m0 += (1.0 - alpha) * a0;
            m1 += (1.0 - alpha) * a1;
        }
        CellResult r;
        r.lo = c_lo;
        r.hi = c_hi;
        if (m0 <= kMinCellMass) {
            r.skipped = true;
            return r;
        }
        const double fallback = t0 > 0.0 ? t1 / t0 : 0.5 * (c_lo + c_hi);
        r.deviation = std::abs(m1 / m0 - required(c_lo, c_hi, fallback));
        return r;
    };

    auto atom_cell = [&](std::size_t j) {
        const double target = atom_targets[j];
        double m0 = 0.0, m1 = 0.0;
        for (const TransportPiece* p : atoms.at(target)) {
            const auto [a0, a1] = tau.raw_moments(p->src_lo(), p->src_hi());
            m0 += (1.0 - alpha) * a0;
            m1 += (1.0 - alpha) * a1;
        }
        CellResult r;
        r.lo = r.hi = target;
        if (m0 <= kMinCellMass) {
            r.skipped = true;
            return r;
        }
        r.deviation = std::abs(m1 / m0 - required(target, target, target));
        return r;
    };

    const long long n = static_cast<long long>(total);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            results[k] = k < n_regular ? regular_cell(k) : atom_cell(k - n_regular);
        }
    } else {
        for (long long i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            results[k] = k < n_regular ? regular_cell(k) : atom_cell(k - n_regular);
        }
    }

    ConsistencyReport rep;
    rep.cells_total = total;
    rep.atom_cells = atom_targets.size();
    for (const auto& r : results) {
        if (r.skipped) {
            ++rep.cells_skipped;
            continue;
        }
        ++rep.cells_checked;
        if (r.deviation > rep.max_deviation) {
            rep.max_deviation = r.deviation;
            rep.worst_cell_lo = r.lo;
            rep.worst_cell_hi = r.hi;
        }
    }
    return rep;
}

} // namespace trustregion
