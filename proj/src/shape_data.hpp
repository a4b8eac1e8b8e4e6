#pragma once

#include <vector>

#include <Eigen/Dense>

#include "torsion/geometry.hpp"

namespace torsion {

struct Polytope::Data
{
    struct Facet
    {
        std::size_t index = 0;   // half-space index
        Eigen::MatrixXd basis;   // n x (n-1), orthonormal, spans the facet hyperplane
        Eigen::VectorXd origin;  // point on the hyperplane
        Eigen::MatrixXd local_a; // constraints in facet coordinates
        Eigen::VectorXd local_b;
        Eigen::VectorXd lower, upper; // facet bounding box in facet coordinates
        double area = 0.0;
    };

    int dimension = 0;
    std::vector<HalfSpace> half_spaces;
    std::size_t boundary_faces = 0; // leading faces that belong to the boundary proper
    bool bounded = false;
    double tolerance = 1e-10;

    // Populated for bounded polytopes only.
    std::vector<Point> vertices;
    Box bbox;
    double diameter = 0.0;
    double volume = 0.0;
    Point center;
    double inradius = 0.0;
    std::vector<Facet> facets; // nonempty boundary facets
    std::vector<double> cumulative_area;
    double surface_area = 0.0;
};

struct Intersection::Data
{
    std::vector<ConvexBody> members;
    std::vector<ConvexBody> samplers; // bounded stand-ins used for boundary sampling
    std::vector<double> sampler_areas;
    std::vector<double> cumulative_area;
    Box bbox;
    double diameter = 0.0;
    Point center;
    double inradius = 0.0;
    bool inscribed_exact = false;
};

/// Volume of {y : a y <= b} in dimension a.cols() by Lasserre's recursion.
double lasserre_volume(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol);

/// Chebyshev ball of a bounded H-polytope by vertex enumeration of the lifted LP.
std::pair<Point, double> chebyshev_ball(const std::vector<HalfSpace>& half_spaces, int dimension,
                                        double tol);

} // namespace torsion
