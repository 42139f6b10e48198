#include "trustregion/spherical.hpp"

#include "trustregion/errors.hpp"
#include "trustregion/kernels.hpp"
#include "trustregion/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trustregion {

namespace {

double norm(const std::vector<double>& x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

// Projects onto the plane sum(x) = 0 and normalizes.
std::vector<double> plane_unit(std::vector<double> d) {
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    for (double& x : d) {
        x -= mean;
    }
    const double n = norm(d);
    if (!(n > 0.0)) {
        throw InputError("spherical: direction has no component in the simplex plane");
    }
    for (double& x : d) {
        x /= n;
    }
    return d;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("spherical: alpha must lie in [0, 1]");
    }
}

} // namespace

void check_spherical_instance(const SphericalInstance& inst) {
    const std::size_t n = inst.dim();
    if (n < 2) {
        throw InputError("spherical: need at least two states");
    }
    (void)Belief(inst.center);  // validates nonnegativity and normalization
    if (!(inst.r0 > 0.0)) {
        throw InputError("spherical: r0 must be positive");
    }
    if (inst.radial.lower() != 0.0 || std::abs(inst.radial.upper() - inst.r0) > 1e-12) {
        throw InputError("spherical: radial density must live on [0, r0]");
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        const std::vector<double> u = plane_unit(e);
        for (double sgn : {-1.0, 1.0}) {
            for (std::size_t j = 0; j < n; ++j) {
                const double x = inst.center[j] + sgn * inst.r0 * u[j];
                if (x < -1e-12 || x > 1.0 + 1e-12) {
                    throw InputError("spherical: ball of radius " + std::to_string(inst.r0) +
                                     " leaves the simplex (coordinate " + std::to_string(j) +
                                     " reaches " + std::to_string(x) + ")");
                }
            }
        }
    }
}

RadialUtility RadialUtility::power(double p) {
    if (!(p > 1.0)) {
        throw InputError("radial utility: power must exceed 1");
    }
    return {[p](double x) { return std::pow(x, p); },
            [p](double x) { return p * std::pow(x, p - 1.0); },
            [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); },
            "power(" + std::to_string(p) + ")"};
}

RadialUtility RadialUtility::exponential(double k) {
    if (!(k > 0.0)) {
        throw InputError("radial utility: rate must be positive");
    }
    return {[k](double x) { return std::exp(k * x) - k * x; },
            [k](double x) { return k * std::exp(k * x) - k; },
            [k](double x) { return k * k * std::exp(k * x); },
            "exponential(" + std::to_string(k) + ")"};
}

double balance_residual(const BeliefDensity& radial, double alpha, double r) {
    const double r0 = radial.upper();
    const auto [in0, in1] = radial.raw_moments(0.0, r);
    const auto [out0, out1] = radial.raw_moments(r, r0);
    const double lhs = (2.0 * alpha - 1.0) * (out1 - r * out0);
    const double rhs = (1.0 - alpha) * (in1 + r * in0 + 2.0 * r * out0);
    return lhs - rhs;
}

double solve_radius(const SphericalInstance& inst, double alpha, double x_tol) {
    check_spherical_instance(inst);
    check_alpha(alpha);
    if (alpha <= 0.5) {
        return 0.0;
    }
    if (alpha >= 1.0) {
        return inst.r0;
    }
    return bisect([&](double r) { return balance_residual(inst.radial, alpha, r); }, 0.0, inst.r0,
                  x_tol);
}

double uniform_radius_closed_form(double alpha, double r0) {
    check_alpha(alpha);
    if (alpha <= 0.5) {
        return 0.0;
    }
    return (1.0 - std::sqrt(1.0 + alpha - 2.0 * alpha * alpha)) / alpha * r0;
}

std::vector<double> antipodal_report(const SphericalInstance& inst, double r_star,
                                     const std::vector<double>& mu) {
    if (mu.size() != inst.dim()) {
        throw InputError("antipodal_report: belief dimension mismatch");
    }
    if (!(r_star >= 0.0 && r_star <= inst.r0 + 1e-12)) {
        throw InputError("antipodal_report: r_star must lie in [0, r0]");
    }
    std::vector<double> d(mu.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = inst.center[i] - mu[i];
    }
    const double n = norm(d);
    if (r_star == 0.0) {
        return inst.center;
    }
    if (!(n > 0.0)) {
        throw InputError("antipodal_report: mu equals the center, so every boundary point is "
                         "equally far; pick any point at radius r_star");
    }
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        out[i] = inst.center[i] + r_star * d[i] / n;
    }
    return out;
}

double radial_bregman(const RadialUtility& v, const std::vector<double>& center,
                      const std::vector<double>& mu, const std::vector<double>& mprime) {
    auto f = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += (x[i] - center[i]) * (x[i] - center[i]);
        }
        return v.V(std::sqrt(s));
    };
    auto grad = [&](const std::vector<double>& x) {
        std::vector<double> g(x.size());
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            g[i] = x[i] - center[i];
            s += g[i] * g[i];
        }
        const double r = std::sqrt(s);
        const double scale = r > 0.0 ? v.dV(r) / r : 0.0;
        for (double& gi : g) {
            gi *= scale;
        }
        return g;
    };
    return bregman_distance(f, grad, mu, mprime);
}

std::vector<double> farthest_on_circle(const RadialUtility& v, const std::vector<double>& center,
                                       double r, const std::vector<double>& mu, std::size_t n) {
    if (center.size() != 3 || mu.size() != 3 || n == 0) {
        throw InputError("farthest_on_circle: needs N = 3 and at least one sample");
    }
    const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
    const double e1[3] = {1.0 / s2, -1.0 / s2, 0.0};
    const double e2[3] = {1.0 / s6, 1.0 / s6, -2.0 / s6};
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<double> best;
    double best_d = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
        std::vector<double> p(3);
        for (int i = 0; i < 3; ++i) {
            p[static_cast<std::size_t>(i)] =
                center[static_cast<std::size_t>(i)] + r * (std::cos(t) * e1[i] + std::sin(t) * e2[i]);
        }
        const double d = radial_bregman(v, center, mu, p);
        if (d > best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

double diameter_posterior(const SphericalInstance& inst, const RadialUtility& v, double alpha,
                          double r, const std::vector<double>& direction, double* switch_point) {
    const std::vector<double> n = plane_unit(direction);
    const std::size_t dim = inst.dim();
    auto point = [&](double x) {
        std::vector<double> p(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            p[i] = inst.center[i] + x * n[i];
        }
        return p;
    };
    const std::vector<double> plus = point(r), minus = point(-r);
    // Misaligned adviser at coordinate x reports whichever end is Bregman-farther.
    auto prefers_plus = [&](double x) {
        const std::vector<double> mu = point(x);
        return radial_bregman(v, inst.center, mu, plus) - radial_bregman(v, inst.center, mu, minus);
    };
    const double r0 = inst.r0;
    const double xs = bisect(prefers_plus, -r0, r0, 1e-15);
    if (switch_point != nullptr) {
        *switch_point = xs;
    }
    // Weight radial(|x|)/2 at signed coordinate x.
    double mis0, mis1;
    if (xs <= 0.0) {
        const auto [m0, m1] = inst.radial.raw_moments(-xs, r0);
        mis0 = 0.5 * m0;
        mis1 = -0.5 * m1;
    } else {
        const auto [a0, a1] = inst.radial.raw_moments(0.0, r0);
        const auto [b0, b1] = inst.radial.raw_moments(0.0, xs);
        mis0 = 0.5 * (a0 + b0);
        mis1 = 0.5 * (-a1 + b1);
    }
    const auto [al0, al1] = inst.radial.raw_moments(r, r0);
    const double num = alpha * 0.5 * al1 + (1.0 - alpha) * mis1;
    const double den = alpha * 0.5 * al0 + (1.0 - alpha) * mis0;
    return num / den;
}

DiameterSimulation simulate_diameter(const SphericalInstance& inst, const RadialUtility& v,
                                     double alpha, const std::vector<double>& direction,
                                     double x_tol) {
    check_spherical_instance(inst);
    check_alpha(alpha);
    DiameterSimulation out;
    if (alpha <= 0.5) {
        return out;
    }
    if (alpha >= 1.0) {
        out.r_star = inst.r0;
        out.posterior = inst.r0;
        return out;
    }
    auto gap = [&](double r) {
        ++out.iterations;
        return diameter_posterior(inst, v, alpha, r, direction) - r;
    };
    out.r_star = bisect(gap, inst.r0 * 1e-9, inst.r0, x_tol);
    out.posterior = diameter_posterior(inst, v, alpha, out.r_star, direction, &out.switch_point);
    return out;
}

std::vector<RadiusPoint> radius_sweep(const SphericalInstance& inst,
                                      const std::vector<double>& alphas, Exec exec) {
    check_spherical_instance(inst);
    for (double a : alphas) {
        check_alpha(a);  // before entering the parallel region
    }
    std::vector<RadiusPoint> out;
    parallel_map(
        alphas.size(), out,
        [&](std::size_t i) {
            RadiusPoint p;
            p.alpha = alphas[i];
            p.r_star = solve_radius(inst, p.alpha);
            p.residual = p.alpha > 0.5 ? balance_residual(inst.radial, p.alpha, p.r_star) : 0.0;
            return p;
        },
        exec);
    return out;
}

} // namespace trustregion
