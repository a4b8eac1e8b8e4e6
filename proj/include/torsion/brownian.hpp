#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace torsion {

/// Standard normal CDF from the library erfc (absolute error well below 1e-15).
double standard_normal_cdf(double x);

/// 1/2 + x / sqrt(2 pi), an upper bound on the normal CDF for x > 0.
double phi_linear_bound(double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 60);

/**
 * First time T = inf{t > 0 : B(t) = epsilon} of a standard 1-D Brownian
 * motion started at 0 crosses the level epsilon.
 *
 * By the reflection principle P(T <= t) = 2 - 2 Phi(epsilon / sqrt(t)); the
 * law has density epsilon / (sqrt(2 pi) t^{3/2}) exp(-epsilon^2 / (2t)) and no
 * finite mean. truncated_mean(T) is the unconditional partial moment
 * int_0^T t psi(t) dt (not divided by P(T_eps <= T)).
 */
class HittingTimeLaw
{
  public:
    explicit HittingTimeLaw(double epsilon);

    double epsilon() const { return epsilon_; }

    double cdf(double t) const;
    double density(double t) const;
    /// Location of the density maximum, epsilon^2 / 3.
    double mode() const { return epsilon_ * epsilon_ / 3.0; }
    double survival_probability(double horizon) const;
    double truncated_mean(double horizon) const;
    /// epsilon sqrt(2/pi) sqrt(T).
    double truncated_mean_bound(double horizon) const;
    /// sqrt(2/pi) epsilon / sqrt(T), from the linear bound on Phi.
    double survival_bound(double horizon) const;

  private:
    double epsilon_;
};

struct HittingSample
{
    std::vector<double> times; // hitting times <= horizon, in path order
    std::int64_t censored = 0; // paths that never crossed before the horizon
    std::int64_t paths = 0;
    double horizon = 0.0;
    double dt = 0.0;

    double censored_fraction() const { return double(censored) / double(paths); }
};

/**
 * Gaussian-increment paths with a Brownian-bridge crossing test per step: a
 * step from gaps a, b > 0 below the level crosses with probability
 * exp(-2ab/dt). Path k draws from substream k of `seed`.
 */
HittingSample simulate_hitting_times(const HittingTimeLaw& law, std::int64_t count, double dt,
                                     double horizon, std::uint64_t seed, unsigned workers = 0);

/// Kolmogorov-Smirnov distance between the hits and the law conditioned on T <= horizon.
double ks_distance_conditional(const HittingSample& sample, const HittingTimeLaw& law);

} // namespace torsion
