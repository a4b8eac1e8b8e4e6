#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace torsion {

/// log(omega_n); finite for any n where omega_n itself underflows.
double log_omega(int n);

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1), via log-Gamma.
double omega(int n);

/// omega_n^{1/n} sqrt(n); lies in [sqrt(2 pi), sqrt(2 pi e)) for n >= 2.
double normalized_constant(int n);

struct DimensionConstants
{
    int n = 2;
    double omega_n = 0.0;
    double normalized = 0.0;        // omega_n^{1/n} sqrt(n)
    double gradient_constant = 0.0; // sqrt(2)/pi, dimension-free
    double raw_gradient_constant = 0.0; // (2/sqrt(pi)) / (sqrt(n) omega_n^{1/n})
    double cn_lower = 0.0;          // 1 / (n omega_n^{1/n})
};

DimensionConstants dimension_constants(int n);

/// CSV table: n,omega_n,normalized,gradient_constant,raw_gradient_constant,cn_lower_bound
std::string constants_csv(int n_min, int n_max);

/// Torsion function of the ball of radius R at distance r from the center: (R^2 - r^2) / (2n).
double ball_torsion(int n, double radius, double r);
/// Inward normal derivative of the ball torsion function on the sphere: R / n.
double ball_max_gradient(int n, double radius);

/**
 * Ellipsoid {1 - x_1^2/4 - sum_{i>=2} x_i^2/(2n-2) >= 0}.
 *
 * The defining function g has Laplacian -3/2, so the torsion function is
 * u = (2/3) g. Both the corrected values and the ones obtained by treating g
 * itself as the torsion function are reported.
 */
struct EllipsoidExample
{
    int n = 2;
    std::vector<double> semi_axes;
    double coefficient = 0.0;   // c with u = c g, Laplacian of u = -1
    double laplacian_of_defining_function = 0.0;
    double max_gradient = 0.0;  // max over the boundary of |grad u|
    double stated_max_gradient = 1.0; // value claimed for g itself
    double defining_max_gradient = 0.0; // max |grad g| over the boundary
    double volume_root = 0.0;   // |Omega|^{1/n}
    double ratio = 0.0;         // max_gradient / volume_root
    double stated_ratio = 0.0;  // stated_max_gradient / volume_root
};

EllipsoidExample ellipsoid_torsion(int n);

/// Semi-axes (2, sqrt(2n-2), ..., sqrt(2n-2)).
std::vector<double> beck_semi_axes(int n);

/// Ball-comparison bound (1/n)(vol/omega_n)^{2/n} on the mean exit time (-Delta u = 2).
double lifetime_bound(int n, double vol);

/// eps sqrt(2/pi) (2 sqrt(T) + (1/sqrt(T)) (1/n)(vol/omega_n)^{2/n}); source 2.
double assembled_lifetime_bound(double epsilon, int n, double vol, double horizon);
/// Minimizer (1/(2n))(vol/omega_n)^{2/n} of assembled_lifetime_bound in T.
double optimal_horizon(int n, double vol);
/// eps (4/sqrt(pi)) (1/sqrt(n)) (vol/omega_n)^{1/n}; source 2.
double minimized_lifetime_bound(double epsilon, int n, double vol);

/// (sqrt(2)/pi) vol^{1/n}: dimension-free gradient bound for -Delta u = 1.
double gradient_bound(int n, double vol);
/// (2/sqrt(pi)) (1/sqrt(n)) (vol/omega_n)^{1/n}: the sharper pre-simplification bound.
double gradient_bound_unsimplified(int n, double vol);

/// 1 / (n omega_n^{1/n}), the ball lower bound on the best gradient constant.
double cn_lower_bound(int n);
/// 1 / (sqrt(2 pi e) sqrt(n)), a uniform lower bound on cn_lower_bound.
double cn_uniform_lower_bound(int n);

struct HalfDiskExample
{
    double lhs = 0.0;          // integral of 1 - y over the half-disk
    double rhs_surface = 0.0;  // boundary integral of 1 - y
    double volume_root = 0.0;  // sqrt(pi / 2)
    double ratio = 0.0;
};

HalfDiskExample half_disk_example();

} // namespace torsion
