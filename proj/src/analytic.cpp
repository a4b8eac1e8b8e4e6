#include "torsion/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace torsion {

namespace {

void require_dimension(int n)
{
    if (n < 2)
        throw std::invalid_argument("dimension must be >= 2");
}

void require_volume(double vol)
{
    if (!(vol > 0.0) || !std::isfinite(vol))
        throw std::invalid_argument("volume must be positive and finite");
}

// (vol / omega_n)^{1/n}, the radius of the ball with the same volume.
double equal_volume_radius(int n, double vol)
{
    return std::exp((std::log(vol) - log_omega(n)) / n);
}

} // namespace

double log_omega(int n)
{
    if (n < 1)
        throw std::invalid_argument("dimension must be >= 1");
    const double half = 0.5 * n;
    return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double omega(int n)
{
    return std::exp(log_omega(n));
}

double normalized_constant(int n)
{
    require_dimension(n);
    return std::exp(log_omega(n) / n + 0.5 * std::log(static_cast<double>(n)));
}

DimensionConstants dimension_constants(int n)
{
    require_dimension(n);
    DimensionConstants c;
    c.n = n;
    c.omega_n = omega(n);
    c.normalized = normalized_constant(n);
    c.gradient_constant = std::numbers::sqrt2 / std::numbers::pi;
    c.raw_gradient_constant = 2.0 * std::numbers::inv_sqrtpi / c.normalized;
    c.cn_lower = cn_lower_bound(n);
    return c;
}

std::string constants_csv(int n_min, int n_max)
{
    require_dimension(n_min);
    if (n_max < n_min)
        throw std::invalid_argument("n_max must be >= n_min");
    std::ostringstream out;
    out << "n,omega_n,normalized,gradient_constant,raw_gradient_constant,cn_lower_bound\n";
    out << std::setprecision(17);
    for (int n = n_min; n <= n_max; ++n) {
        const DimensionConstants c = dimension_constants(n);
        out << c.n << ',' << c.omega_n << ',' << c.normalized << ',' << c.gradient_constant
            << ',' << c.raw_gradient_constant << ',' << c.cn_lower << '\n';
    }
    return out.str();
}

double ball_torsion(int n, double radius, double r)
{
    require_dimension(n);
    if (!(radius > 0.0))
        throw std::invalid_argument("radius must be positive");
    if (r < 0.0 || r > radius)
        throw std::invalid_argument("r must lie in [0, R]");
    return (radius * radius - r * r) / (2.0 * n);
}

double ball_max_gradient(int n, double radius)
{
    require_dimension(n);
    if (!(radius > 0.0))
        throw std::invalid_argument("radius must be positive");
    return radius / n;
}

std::vector<double> beck_semi_axes(int n)
{
    require_dimension(n);
    std::vector<double> axes(n, std::sqrt(2.0 * n - 2.0));
    axes[0] = 2.0;
    return axes;
}

EllipsoidExample ellipsoid_torsion(int n)
{
    require_dimension(n);
    EllipsoidExample e;
    e.n = n;
    e.semi_axes = beck_semi_axes(n);

    // g = 1 - x_1^2/4 - sum x_i^2/(2n-2): Laplacian -(2/4 + (n-1) * 2/(2n-2)) = -3/2.
    e.laplacian_of_defining_function = -(0.5 + (n - 1) * 2.0 / (2.0 * n - 2.0));
    e.coefficient = -1.0 / e.laplacian_of_defining_function;

    // On the boundary put p = x_1^2/4 in [0, 1]; then
    // |grad g|^2 = p + 2(1 - p)/(n - 1), linear in p, so the max is at an endpoint.
    const double at_minor = std::sqrt(2.0 / (n - 1.0));
    e.defining_max_gradient = std::max(1.0, at_minor);
    e.max_gradient = e.coefficient * e.defining_max_gradient;

    const double log_root = (log_omega(n) + std::log(2.0)) / n +
                            (n - 1.0) / (2.0 * n) * std::log(2.0 * n - 2.0);
    e.volume_root = std::exp(log_root);
    e.ratio = e.max_gradient / e.volume_root;
    e.stated_ratio = e.stated_max_gradient / e.volume_root;
    return e;
}

double lifetime_bound(int n, double vol)
{
    require_dimension(n);
    require_volume(vol);
    const double r = equal_volume_radius(n, vol);
    return r * r / n;
}

double assembled_lifetime_bound(double epsilon, int n, double vol, double horizon)
{
    if (!(epsilon > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("epsilon and T must be positive");
    const double tail = lifetime_bound(n, vol);
    const double root = std::sqrt(horizon);
    return epsilon * std::sqrt(2.0 / std::numbers::pi) * (2.0 * root + tail / root);
}

double optimal_horizon(int n, double vol)
{
    return 0.5 * lifetime_bound(n, vol);
}

double minimized_lifetime_bound(double epsilon, int n, double vol)
{
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    require_dimension(n);
    require_volume(vol);
    return epsilon * 4.0 * std::numbers::inv_sqrtpi / std::sqrt(static_cast<double>(n)) *
           equal_volume_radius(n, vol);
}

double gradient_bound(int n, double vol)
{
    require_dimension(n);
    require_volume(vol);
    return std::numbers::sqrt2 / std::numbers::pi * std::pow(vol, 1.0 / n);
}

double gradient_bound_unsimplified(int n, double vol)
{
    return 0.5 * minimized_lifetime_bound(1.0, n, vol);
}

double cn_lower_bound(int n)
{
    require_dimension(n);
    return 1.0 / (n * std::exp(log_omega(n) / n));
}

double cn_uniform_lower_bound(int n)
{
    require_dimension(n);
    return 1.0 / (std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * std::sqrt(double(n)));
}

HalfDiskExample half_disk_example()
{
    // f = 1 - y on {x^2 + y^2 <= 1, y >= 0}: the integral of y is 2/3, the
    // diameter contributes 2 and the arc contributes pi - 2.
    HalfDiskExample h;
    h.lhs = std::numbers::pi / 2.0 - 2.0 / 3.0;
    h.rhs_surface = 2.0 + (std::numbers::pi - 2.0);
    h.volume_root = std::sqrt(std::numbers::pi / 2.0);
    h.ratio = h.lhs / (h.volume_root * h.rhs_surface);
    return h;
}

} // namespace torsion
