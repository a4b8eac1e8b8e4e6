#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torsion/geometry.hpp"
#include "torsion/subharmonic.hpp"

namespace torsion {

/**
 * Named bodies. A dimensioned family is written `family-n<k>` or given as
 * `family` plus an explicit dimension:
 *
 *   unit-ball        ball of radius 1 at the origin
 *   beck-ellipsoid   semi-axes (2, sqrt(2n-2), ..., sqrt(2n-2))
 *   unit-box         [0, 1]^n
 *   simplex          {x >= 0, sum x <= 1}
 *   half-ball        unit ball cut by {x_n >= 0}; half-disk is half-ball-n2
 *   random-polytope  eight random faces around the unit ball, n = 3 only
 */
ConvexBody body_preset(const std::string& name, std::optional<int> dimension = std::nullopt);

/**
 * Named test functions adapted to a body:
 *
 *   constant       1
 *   affine-top     top - x_n, where top is the largest x_n on the body
 *   quadratic      |x - c|^2 around the inscribed center c
 *   shifted-norm   |x - a| with a one diameter beyond the body along x_1
 *   harmonic-cubic a harmonic cubic shifted up by a bound of its magnitude
 */
SubharmonicFn function_preset(const std::string& name, const ConvexBody& body);

/// Body and function of a paired preset such as half-disk-affine; empty if unknown.
struct PairPreset
{
    std::string body;
    std::string function;
};
std::optional<PairPreset> pair_preset(const std::string& name);

std::vector<std::string> body_preset_names();
std::vector<std::string> function_preset_names();

struct SuiteCase
{
    std::string body_name;
    std::string function_name;
    ConvexBody body;
    SubharmonicFn function;
};

/// Every body family (ball, box, simplex, ellipsoid, half-ball) crossed with
/// constant, affine-top, shifted-norm and harmonic-cubic in dimension n.
std::vector<SuiteCase> hermite_hadamard_suite(int n);

} // namespace torsion
