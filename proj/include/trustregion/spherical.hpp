#pragma once

#include "trustregion/core_model.hpp"
#include "trustregion/parallel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trustregion {

/// Beliefs spread symmetrically over the ball of radius r0 around `center`.
/// `radial` is the density of the radius itself on [0, r0] (a point on a
/// diameter at signed coordinate x carries weight radial(|x|) / 2).
struct SphericalInstance {
    std::vector<double> center;
    double r0 = 0.0;
    BeliefDensity radial = BeliefDensity::uniform(0.0, 1.0);

    std::size_t dim() const noexcept { return center.size(); }
};

/// Throws InputError unless the center is a belief, the radial density lives
/// on [0, r0] and the ball (within the simplex plane) stays inside the simplex.
/// The check visits the 2N points center +- r0 u_i, u_i the unit projection of
/// e_i onto the plane, which attain every coordinate's extremes.
void check_spherical_instance(const SphericalInstance& inst);

/// Radial potential V with V' and V''. U(mu) = V(|mu - center|).
struct RadialUtility {
    std::function<double(double)> V, dV, d2V;
    std::string label;

    static RadialUtility power(double p);        ///< V(x) = x^p, p > 1
    static RadialUtility exponential(double k);  ///< V(x) = exp(k x) - k x, k > 0
};

/// LHS - RHS of the balance equation at radius r.
double balance_residual(const BeliefDensity& radial, double alpha, double r);

/// Trust radius: 0 for alpha <= 1/2, r0 at alpha = 1, otherwise the root of
/// the balance equation on (0, r0) by bisection.
double solve_radius(const SphericalInstance& inst, double alpha, double x_tol = 1e-12);

/// Closed form for a uniform radial density.
double uniform_radius_closed_form(double alpha, double r0);

/// Antipodal point center + r (center - mu)/|center - mu| on the trust sphere.
/// Throws InputError when mu is the center (every boundary point is optimal).
std::vector<double> antipodal_report(const SphericalInstance& inst, double r_star,
                                     const std::vector<double>& mu);

/// Bregman distance D_U(mu, mu') for U(x) = V(|x - center|).
double radial_bregman(const RadialUtility& v, const std::vector<double>& center,
                      const std::vector<double>& mu, const std::vector<double>& mprime);

/// N = 3 only: the point of the circle of radius r around `center` in the
/// simplex plane, sampled at n equally spaced angles, farthest from mu.
std::vector<double> farthest_on_circle(const RadialUtility& v, const std::vector<double>& center,
                                       double r, const std::vector<double>& mu, std::size_t n);

struct DiameterSimulation {
    double r_star = 0.0;
    /// Signed coordinate where the misaligned adviser switches sides.
    double switch_point = 0.0;
    /// Posterior coordinate of the boundary report at r_star.
    double posterior = 0.0;
    int iterations = 0;
};

/// Posterior coordinate of the report at +r along the diameter through
/// `direction`: aligned mass beyond r plus the misaligned mass whose Bregman
/// farthest point (computed from V) is +r rather than -r.
double diameter_posterior(const SphericalInstance& inst, const RadialUtility& v, double alpha,
                          double r, const std::vector<double>& direction,
                          double* switch_point = nullptr);

/// Radius solving posterior(r) = r by bisection on the simulated diameter.
DiameterSimulation simulate_diameter(const SphericalInstance& inst, const RadialUtility& v,
                                     double alpha, const std::vector<double>& direction,
                                     double x_tol = 1e-13);

struct RadiusPoint {
    double alpha = 0.0;
    double r_star = 0.0;
    double residual = 0.0;
};

std::vector<RadiusPoint> radius_sweep(const SphericalInstance& inst,
                                      const std::vector<double>& alphas,
                                      Exec exec = Exec::parallel);

} // namespace trustregion
