#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "torsion/estimate.hpp"

namespace torsion {

using Point = std::vector<double>;

class RandomStream;

struct BoundaryPoint
{
    Point position;
    Point inward_normal;
    double weight = 1.0; // self-normalized importance weight, mean one per body
};

struct Ball
{
    Point center;
    double radius = 1.0;
};

/// Axis-aligned ellipsoid sum_i ((x_i - c_i) / b_i)^2 <= 1.
struct Ellipsoid
{
    Point center;
    std::vector<double> semi_axes;
    // Solve for the exact boundary distance instead of the inscribed-ball bound.
    bool exact_distance = false;
};

struct Box
{
    Point lower;
    Point upper;
};

/// Closed half-space {x : normal . x <= offset} with a unit normal.
struct HalfSpace
{
    Point normal;
    double offset = 0.0;
};

/**
 * H-polytope {x : a_i . x <= c_i for all i}.
 *
 * Vertices, facet areas and the volume are computed once at construction by
 * brute-force enumeration and Lasserre's recursion, so the constraint count
 * should stay small (tens, not thousands). Unbounded polytopes are only
 * allowed as members of an Intersection.
 */
class Polytope
{
  public:
    struct Data;

    /// Validates unit normals, nonempty interior and (optionally) boundedness.
    static Polytope create(int dimension, std::vector<HalfSpace> half_spaces,
                           bool require_bounded = true);

    /// Bounded copy clipped by `clip`; only the original faces are sampled as boundary.
    Polytope clipped(const Box& clip) const;

    int dimension() const;
    const std::vector<HalfSpace>& half_spaces() const;
    bool bounded() const;
    const Data& data() const { return *data_; }

  private:
    std::shared_ptr<const Data> data_;
};

class ConvexBody;

/// Intersection of convex bodies of equal dimension; at least one member bounded.
class Intersection
{
  public:
    struct Data;

    const std::vector<ConvexBody>& members() const;
    const Data& data() const { return *data_; }

  private:
    friend class ConvexBody;
    std::shared_ptr<const Data> data_;
};

/**
 * Immutable convex body in R^n, n >= 2. Cheap to copy; shared state is const.
 *
 * gap() is the signed inscribed-ball radius used by walk-on-spheres: exact
 * distance to the boundary for balls, boxes and polytopes, a certified lower
 * bound for ellipsoids (exact along the shortest axis and with exact_distance),
 * the minimum over members for intersections, and negative outside.
 */
class ConvexBody
{
  public:
    using Shape = std::variant<Ball, Ellipsoid, Box, Polytope, Intersection>;

    static ConvexBody ball(Point center, double radius);
    static ConvexBody ellipsoid(Point center, std::vector<double> semi_axes,
                                bool exact_distance = false);
    static ConvexBody box(Point lower, Point upper);
    static ConvexBody polytope(int dimension, std::vector<HalfSpace> half_spaces);
    static ConvexBody intersection(std::vector<ConvexBody> members);
    /// Intersection member only: a possibly unbounded polyhedron.
    static ConvexBody polyhedron(int dimension, std::vector<HalfSpace> half_spaces);

    int dimension() const { return dimension_; }
    const Shape& shape() const { return shape_; }
    bool bounded() const;

    bool contains(std::span<const double> x) const;
    double gap(std::span<const double> x) const;

    /// Upper bound on the diameter (exact except for intersections).
    double diameter() const;
    Box bounding_box() const;

    /// Inscribed ball (center, radius); exact except for non-polyhedral intersections.
    std::pair<Point, double> inscribed_ball() const;

    /// Inward unit normal at (or very near) a boundary point.
    Point inward_normal(std::span<const double> x) const;
    /// True when exactly one face/member is active within `tol` at x.
    bool smooth_at(std::span<const double> x, double tol) const;

    std::optional<double> exact_volume() const;
    std::optional<double> exact_surface_area() const;
    /// Exact volume if known, else the bounding-box volume.
    double volume_upper_bound() const;

    /// One boundary point distributed by surface measure (weights for ellipsoids).
    BoundaryPoint sample_boundary_point(RandomStream& rng) const;
    /// Uniform interior point by rejection from the bounding box.
    Point sample_interior_point(RandomStream& rng) const;

  private:
    ConvexBody(int dimension, Shape shape) : dimension_(dimension), shape_(std::move(shape)) {}

    int dimension_;
    Shape shape_;
};

bool contains(const ConvexBody& body, std::span<const double> x);

/// d(x, boundary); throws std::invalid_argument when x is outside or of the wrong dimension.
double distance_to_boundary(const ConvexBody& body, std::span<const double> x);

/// Exact for ball, ellipsoid, box and polytope; rejection sampling for intersections.
Estimate volume(const ConvexBody& body, const WosConfig& cfg);

/// Rejection-sampled volume for any body (cross-check of the exact values).
Estimate volume_monte_carlo(const ConvexBody& body, std::int64_t samples, std::uint64_t seed);

/// Surface measure of the boundary: exact where a closed form exists, sampled otherwise.
Estimate surface_area(const ConvexBody& body, const WosConfig& cfg);

/// Deterministic given seed: point k is drawn from substream k.
std::vector<BoundaryPoint> sample_boundary(const ConvexBody& body, std::int64_t count,
                                           std::uint64_t seed);

std::vector<Point> sample_interior(const ConvexBody& body, std::int64_t count,
                                   std::uint64_t seed);

/// Ellipsoid perimeter/area in closed form for n = 2, 3 (elliptic integrals).
std::optional<double> ellipsoid_surface_area_closed_form(std::span<const double> semi_axes);

} // namespace torsion
