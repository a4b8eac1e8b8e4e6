#pragma once

#include <cstdint>
#include <optional>

#include "torsion/estimate.hpp"
#include "torsion/geometry.hpp"
#include "torsion/subharmonic.hpp"

namespace torsion {

/// sqrt(2) / pi, the dimension-free Hermite-Hadamard constant.
double hermite_hadamard_constant();

/// Integral of f over the body: mean of f at cfg.samples uniform interior
/// points times the volume.
Estimate volume_integral(const ConvexBody& body, const SubharmonicFn& f, const WosConfig& cfg);

/// Integral of f over the boundary: self-normalized weighted mean of f at
/// cfg.samples boundary points times the surface area. The standard error
/// includes the weight variance and the area uncertainty.
Estimate boundary_integral(const ConvexBody& body, const SubharmonicFn& f, const WosConfig& cfg);

/// Exact integrals of polynomial f over balls and boxes; empty otherwise.
std::optional<double> exact_volume_integral(const ConvexBody& body, const SubharmonicFn& f);
std::optional<double> exact_boundary_integral(const ConvexBody& body, const SubharmonicFn& f);

/**
 * Checks  int_body f <= (sqrt(2)/pi) vol^{1/n} int_boundary f  within four
 * joint standard errors. `ratio` in the report is lhs / (vol^{1/n} rhs).
 * Throws CertificateError when f is not certified subharmonic and
 * boundary-nonnegative on the body.
 */
BoundReport verify_hermite_hadamard(const ConvexBody& body, const SubharmonicFn& f,
                                    const WosConfig& cfg);

/**
 * Checks the sharper intermediate inequality
 *   int_body f <= (max inward normal derivative of the torsion function) int_boundary f,
 * with the maximum from max_normal_derivative over `boundary_points` points.
 */
BoundReport verify_via_torsion(const ConvexBody& body, const SubharmonicFn& f,
                               const WosConfig& cfg, std::int64_t boundary_points = 64);

} // namespace torsion
