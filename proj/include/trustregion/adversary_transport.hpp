#pragma once

#include "trustregion/binary_trust.hpp"
#include "trustregion/core_model.hpp"
#include "trustregion/parallel.hpp"

#include <memory>
#include <string>
#include <vector>

namespace trustregion {

enum class Regime { high_alpha, low_alpha };

std::string to_string(Regime r);

/// One monotone segment of the misaligned adviser's reporting map.
///
/// A quantile piece moves the deviation mass
///   nu(Y)  = source_weight * int_Y |anchor - mu| tau   on [src_lo, src_hi]
/// onto
///   eta(X) = target_weight * int_X |mu - anchor| tau   on [tgt_lo, tgt_hi]
/// via beta = F_eta^{-1} o F_nu. A constant piece sends its whole source to tgt_lo.
class TransportPiece {
public:
    enum class Kind { quantile, constant };

    static TransportPiece quantile(const BeliefDensity& tau, double src_lo, double src_hi,
                                   double tgt_lo, double tgt_hi, double anchor,
                                   double source_weight, double target_weight);
    static TransportPiece constant(double src_lo, double src_hi, double target);

    Kind kind() const noexcept { return kind_; }
    double src_lo() const noexcept { return src_lo_; }
    double src_hi() const noexcept { return src_hi_; }
    double tgt_lo() const noexcept { return tgt_lo_; }
    double tgt_hi() const noexcept { return tgt_hi_; }
    double anchor() const noexcept { return anchor_; }
    double source_weight() const noexcept { return source_weight_; }
    double target_weight() const noexcept { return target_weight_; }

    double source_mass() const;
    double target_mass() const;

    /// Exact cumulative deviation masses.
    double source_cdf(double x) const;
    double target_cdf(double y) const;
    /// Generalized inverses inf{x : F(x) >= q}; q beyond the total mass maps to the upper end.
    double source_quantile(double q) const;
    double target_quantile(double q) const;

    /// beta(mu) for mu in the source interval.
    double operator()(double mu) const;

    /// Source interval mapped into the target cell [y1, y2]. For y2 at the
    /// target's upper end the preimage extends to the end of the source.
    std::pair<double, double> preimage(double y1, double y2) const;

private:
    TransportPiece() = default;
    double dev_mass_(double anchor, double a, double b, double weight) const;
    double quantile_(double q, bool source) const;

    Kind kind_ = Kind::constant;
    double src_lo_ = 0.0, src_hi_ = 0.0, tgt_lo_ = 0.0, tgt_hi_ = 0.0;
    double anchor_ = 0.0, source_weight_ = 0.0, target_weight_ = 0.0;
    std::shared_ptr<const BeliefDensity> tau_;
    // Cumulative masses on a uniform grid, used to bracket the inverses.
    std::vector<double> src_grid_, tgt_grid_;
};

struct TransportMap {
    Regime regime = Regime::high_alpha;
    double alpha = 0.0;
    double lo = 0.0;      ///< trust interval (both at the prior in the low regime)
    double hi = 0.0;
    double cutoff = 0.0;
    double prior = 0.0;
    double mu_L = 0.0;    ///< low regime thresholds
    double mu_H = 0.0;
    std::vector<TransportPiece> pieces;

    /// Message sent by a misaligned adviser holding belief mu. Piece
    /// boundaries are right-continuous.
    double operator()(double mu) const;
};

/// Certifying adversary for the trust interval. Throws PreconditionError if
/// the interval does not solve the balancing system within `tolerance`.
TransportMap build_tre_map(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                           const TrustInterval& trust, double tolerance = 1e-9);

/// Same construction without the residual check (used for perturbation studies).
TransportMap build_tre_map_unchecked(const UtilityCurve& u, const BeliefDensity& tau, double alpha,
                                     const TrustInterval& trust);

/// Low-regime thresholds (mu_L, mu_H) from the mass balance
/// int_0^{mu_L} (mu0 - mu) tau = alpha/(1-alpha) int_0^{mu0} (mu0 - mu) tau and its mirror.
std::pair<double, double> low_alpha_thresholds(const BeliefDensity& tau, double alpha);

/// Map sending every misaligned belief in [0,1] to a single message.
TransportMap constant_map(double message, const TrustInterval& trust, double alpha);

struct ConsistencyReport {
    double max_deviation = 0.0;
    double worst_cell_lo = 0.0;
    double worst_cell_hi = 0.0;
    std::size_t cells_total = 0;
    std::size_t cells_checked = 0;
    std::size_t cells_skipped = 0;  ///< zero message mass
    std::size_t atom_cells = 0;
};

/// Partitions the message space into n_cells uniform cells (plus edges at
/// the trust endpoints and one cell per atom) and reports the largest gap
/// between the Bayes posterior mean of a cell and the value the agent's
/// strategy requires there.
ConsistencyReport verify_posterior_consistency(const TransportMap& map, const BeliefDensity& tau,
                                               double alpha, const TrustInterval& trust,
                                               std::size_t n_cells, Exec exec = Exec::parallel);

} // namespace trustregion
