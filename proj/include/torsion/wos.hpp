#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "torsion/estimate.hpp"
#include "torsion/geometry.hpp"

namespace torsion {

/**
 * Walk-on-spheres for the torsion problem -Laplace(u) = 1 in the body, u = 0
 * on the boundary.
 *
 * From x, let r be the inscribed-ball radius gap(x). The function
 * u(y) + |y - x|^2 / (2n) is harmonic in that ball, so by the mean value
 * property u(x) = r^2 / (2n) + (mean of u over the sphere of radius r). Each
 * walk therefore jumps to a uniform point on that sphere and accumulates
 * r^2 / (2n), and the expectation of the sum is exactly u(x) until the walk
 * enters the absorbing shell gap <= shell_width * diameter, where it stops
 * and contributes nothing further. The shell bias is O(shell width).
 *
 * A walk that reaches max_steps adds the ball-comparison bound on the
 * remaining torsion, (1/(2n)) (vol / omega_n)^{2/n}, and is counted in
 * Estimate::truncated_fraction.
 *
 * Walk k of a call draws from substream (stream, k) of cfg.seed, so results
 * are identical for any split of walks across workers.
 */

/// Per-walk torsion contributions; exposed for paired estimators and tests.
std::vector<double> torsion_walks(const ConvexBody& body, std::span<const double> x,
                                  const WosConfig& cfg, std::uint64_t stream,
                                  std::int64_t* truncated = nullptr);

Estimate torsion_value(const ConvexBody& body, std::span<const double> x, const WosConfig& cfg,
                       std::uint64_t stream = 0);

/// Expected Brownian exit time from x: twice the torsion function.
Estimate exit_time_mean(const ConvexBody& body, std::span<const double> x, const WosConfig& cfg,
                        std::uint64_t stream = 0);

/// Inward normal derivative u(p + delta nu) / delta with delta = fd_delta * diameter,
/// or the (delta, delta/2) Richardson combination when cfg.richardson is set.
Estimate normal_derivative(const ConvexBody& body, const BoundaryPoint& bp, const WosConfig& cfg,
                           std::uint64_t stream = 0);

struct BoundaryMaximum
{
    Estimate estimate;        // independent re-evaluation at the located maximum
    double screened_mean = 0; // best mean seen while searching (selection-biased)
    BoundaryPoint location;
    std::int64_t evaluated = 0;
};

/// Maximum of the inward normal derivative over sampled boundary points,
/// followed by local refinement in shrinking caps. Finite sampling makes this
/// a lower estimate of the true maximum.
BoundaryMaximum max_normal_derivative(const ConvexBody& body, const WosConfig& cfg,
                                      std::int64_t boundary_samples);

/**
 * Expected exit time from points at depth epsilon below sampled boundary
 * points, against the optimized bound eps (4/sqrt(pi)) n^{-1/2} (vol/omega_n)^{1/n}.
 * Reports the worst point; rejects epsilon >= inradius.
 */
BoundReport lifetime_bound_check(const ConvexBody& body, double epsilon, const WosConfig& cfg,
                                 int boundary_points = 8);

} // namespace torsion
