#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "torsion/body_json.hpp"
#include "torsion/geometry.hpp"
#include "torsion/random.hpp"

using namespace torsion;

namespace {

constexpr double pi = std::numbers::pi;

double unit_ball_volume(int n)
{
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Independent rejection-sampling volume with the standard library engine.
std::pair<double, double> oracle_volume(const ConvexBody& body, int samples, unsigned seed)
{
    const Box box = body.bounding_box();
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double box_vol = 1.0;
    for (std::size_t i = 0; i < box.lower.size(); ++i)
        box_vol *= box.upper[i] - box.lower[i];
    Point x(box.lower.size());
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * u(eng);
        hits += body.contains(x) ? 1 : 0;
    }
    const double p = double(hits) / samples;
    return {box_vol * p, box_vol * std::sqrt(p * (1 - p) / samples)};
}

HalfSpace hs(Point normal, double offset)
{
    return HalfSpace{std::move(normal), offset};
}

ConvexBody half_disk()
{
    return ConvexBody::intersection(
        {ConvexBody::ball({0.0, 0.0}, 1.0), ConvexBody::polyhedron(2, {hs({0.0, -1.0}, 0.0)})});
}

} // namespace

TEST_CASE("ball membership, gap and closed forms")
{
    for (int n : {2, 3, 5}) {
        Point c(n, 0.25);
        const auto ball = ConvexBody::ball(c, 1.5);
        Point x = c;
        x[0] += 0.5;
        CHECK(ball.contains(x));
        CHECK(ball.gap(x) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(distance_to_boundary(ball, x) == doctest::Approx(1.0).epsilon(1e-14));
        x[0] += 2.0;
        CHECK_FALSE(ball.contains(x));
        CHECK(ball.gap(x) < 0.0);
        CHECK_THROWS_AS(distance_to_boundary(ball, x), std::invalid_argument);
        CHECK(ball.diameter() == 3.0);
        CHECK(*ball.exact_volume() ==
              doctest::Approx(unit_ball_volume(n) * std::pow(1.5, n)).epsilon(1e-13));
        CHECK(*ball.exact_surface_area() ==
              doctest::Approx(n * unit_ball_volume(n) * std::pow(1.5, n - 1)).epsilon(1e-13));
    }
}

TEST_CASE("box distances and measures")
{
    const auto box = ConvexBody::box({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0});
    const Point x{0.2, 1.5, 1.0};
    CHECK(box.gap(x) == doctest::Approx(0.2));
    CHECK(*box.exact_volume() == doctest::Approx(6.0));
    CHECK(*box.exact_surface_area() == doctest::Approx(2 * (2 + 3 + 6)));
    CHECK(box.diameter() == doctest::Approx(std::sqrt(14.0)));
    const auto [center, r] = box.inscribed_ball();
    CHECK(r == doctest::Approx(0.5));
    CHECK(center[2] == doctest::Approx(1.5));
}

TEST_CASE("ellipsoid gap is a certified lower bound; exact mode matches a dense oracle")
{
    const double a = 2.0, b = 0.7;
    const auto approx = ConvexBody::ellipsoid({0.0, 0.0}, {a, b});
    const auto exact = ConvexBody::ellipsoid({0.0, 0.0}, {a, b}, true);
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    while (tested < 200) {
        const Point x{a * u(eng), b * u(eng)};
        if (!approx.contains(x))
            continue;
        ++tested;
        // Dense parametrization of the ellipse, refined by golden-section steps.
        double best = 1e300, best_t = 0.0;
        const int grid = 20000;
        for (int i = 0; i < grid; ++i) {
            const double t = 2 * pi * i / grid;
            const double d = std::hypot(x[0] - a * std::cos(t), x[1] - b * std::sin(t));
            if (d < best) {
                best = d;
                best_t = t;
            }
        }
        double lo = best_t - 2 * pi / grid, hi = best_t + 2 * pi / grid;
        auto dist = [&](double t) { return std::hypot(x[0] - a * std::cos(t), x[1] - b * std::sin(t)); };
        for (int it = 0; it < 100; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            (dist(m1) < dist(m2) ? hi : lo) = (dist(m1) < dist(m2) ? m2 : m1);
        }
        best = std::min(best, dist(0.5 * (lo + hi)));
        CHECK(approx.gap(x) <= best + 1e-12);
        CHECK(exact.gap(x) == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("ellipse perimeter and spheroid area against independent quadrature")
{
    const double a = 2.0, b = std::sqrt(2.0);
    const double perimeter = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); }, 0.0, 2 * pi, 15,
        1e-14);
    const auto e2 = ConvexBody::ellipsoid({0.0, 0.0}, {a, b});
    CHECK(*e2.exact_surface_area() == doctest::Approx(perimeter).epsilon(1e-12));

    // Prolate spheroid a > b = c: 2 pi b^2 (1 + a / (b e) asin(e)).
    const double p = 3.0, q = 1.2;
    const double ecc = std::sqrt(1 - q * q / (p * p));
    const double prolate = 2 * pi * q * q * (1 + p / (q * ecc) * std::asin(ecc));
    CHECK(*ConvexBody::ellipsoid({0, 0, 0}, {p, q, q}).exact_surface_area() ==
          doctest::Approx(prolate).epsilon(1e-10));
    // Triaxial: surface integral over the sphere parametrization by 2-D quadrature.
    const double ax = 3.0, ay = 2.0, az = 1.0;
    auto integrand_theta = [&](double th) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double ph) {
                const double st = std::sin(th), ct = std::cos(th);
                const double sp = std::sin(ph), cp = std::cos(ph);
                const double nx = ay * az * st * st * cp, ny = ax * az * st * st * sp,
                             nz = ax * ay * st * ct;
                return std::sqrt(nx * nx + ny * ny + nz * nz);
            },
            0.0, 2 * pi, 10, 1e-13);
    };
    const double triaxial = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand_theta, 0.0, pi, 10, 1e-12);
    CHECK(*ConvexBody::ellipsoid({0, 0, 0}, {ax, ay, az}).exact_surface_area() ==
          doctest::Approx(triaxial).epsilon(1e-9));

    // n = 4 falls back to sampling; a sphere makes the estimator exact.
    const auto s4 = ConvexBody::ellipsoid(Point(4, 0.0), {1.0, 1.0, 1.0, 1.0});
    const Estimate area = surface_area(s4, WosConfig{});
    CHECK(area.mean == doctest::Approx(2 * pi * pi).epsilon(1e-12));
}

TEST_CASE("polytope cube and simplex measures")
{
    std::vector<HalfSpace> cube;
    for (int i = 0; i < 3; ++i) {
        Point e(3, 0.0);
        e[i] = 1.0;
        cube.push_back(hs(e, 1.0));
        e[i] = -1.0;
        cube.push_back(hs(e, 0.0));
    }
    const auto p = ConvexBody::polytope(3, cube);
    CHECK(*p.exact_volume() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*p.exact_surface_area() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(p.gap(Point{0.3, 0.5, 0.5}) == doctest::Approx(0.3));
    CHECK(p.diameter() == doctest::Approx(std::sqrt(3.0)));

    const double s = 1 / std::sqrt(3.0);
    const auto simplex = ConvexBody::polytope(
        3, {hs({-1, 0, 0}, 0), hs({0, -1, 0}, 0), hs({0, 0, -1}, 0), hs({s, s, s}, s)});
    CHECK(*simplex.exact_volume() == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(*simplex.exact_surface_area() == doctest::Approx(1.5 + std::sqrt(3.0) / 2).epsilon(1e-12));
    const auto [c, r] = simplex.inscribed_ball();
    // Inradius of the corner simplex: 1 / (3 + sqrt 3).
    CHECK(r == doctest::Approx(1 / (3 + std::sqrt(3.0))).epsilon(1e-10));
    CHECK(c[0] == doctest::Approx(r).epsilon(1e-10));
}

TEST_CASE("random polytope volume agrees with an independent sampler")
{
    torsion::RandomStream rng(99);
    std::vector<HalfSpace> faces;
    for (int k = 0; k < 10; ++k) {
        Point nrm(3);
        rng.unit_vector(nrm);
        faces.push_back(hs(nrm, 0.6 + 0.5 * rng.uniform()));
    }
    // Close it with a box so it is bounded whatever the draw.
    for (int i = 0; i < 3; ++i) {
        Point e(3, 0.0);
        e[i] = 1.0;
        faces.push_back(hs(e, 1.5));
        e[i] = -1.0;
        faces.push_back(hs(e, 1.5));
    }
    const auto body = ConvexBody::polytope(3, faces);
    const auto [vol, se] = oracle_volume(body, 400000, 17);
    CHECK(std::abs(*body.exact_volume() - vol) < 4 * se);
    const Estimate mc = volume_monte_carlo(body, 200000, 3);
    CHECK(std::abs(mc.mean - *body.exact_volume()) < 4 * mc.std_error);
}

TEST_CASE("polytope validation")
{
    CHECK_THROWS_AS(ConvexBody::polytope(2, {hs({0, -1}, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::polytope(2, {hs({1, 0}, 0), hs({-1, 0}, 0), hs({0, 1}, 1),
                                             hs({0, -1}, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::ball({0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::ball({0.0, 0.0}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::box({0.0, 0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("half-disk as an intersection")
{
    const auto body = half_disk();
    CHECK(body.contains(Point{0.0, 0.5}));
    CHECK_FALSE(body.contains(Point{0.0, -0.1}));
    CHECK(body.gap(Point{0.0, 0.25}) == doctest::Approx(0.25));
    const auto [c, r] = body.inscribed_ball();
    CHECK(r == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-3));

    WosConfig cfg;
    cfg.samples = 200000;
    const Estimate vol = volume(body, cfg);
    CHECK(std::abs(vol.mean - pi / 2) < 4 * vol.std_error);
    const Estimate area = surface_area(body, cfg);
    CHECK(std::abs(area.mean - (pi + 2)) < 4 * area.std_error + 1e-9);

    // Surface measure puts 2 / (pi + 2) of the mass on the diameter.
    const auto pts = sample_boundary(body, 40000, 8);
    int flat = 0;
    for (const auto& bp : pts) {
        CHECK(std::abs(body.gap(bp.position)) < 1e-9);
        if (std::abs(bp.position[1]) < 1e-12) {
            ++flat;
            CHECK(bp.inward_normal[1] == doctest::Approx(1.0));
        }
    }
    const double p = 2 / (pi + 2);
    CHECK(std::abs(double(flat) / pts.size() - p) < 4 * std::sqrt(p * (1 - p) / pts.size()));
}

TEST_CASE("boundary samples lie on the boundary with unit inward normals")
{
    const std::vector<ConvexBody> bodies = {
        ConvexBody::ball({1.0, 2.0, 3.0}, 0.5), ConvexBody::box({0, 0}, {2, 1}),
        ConvexBody::ellipsoid({0, 0, 0}, {2, 1, 0.5}),
        ConvexBody::polytope(2, {hs({-1, 0}, 0), hs({0, -1}, 0),
                                 hs({std::sqrt(0.5), std::sqrt(0.5)}, std::sqrt(0.5))})};
    for (const auto& body : bodies) {
        for (const auto& bp : sample_boundary(body, 500, 1)) {
            CHECK(std::abs(body.gap(bp.position)) < 1e-9);
            double norm = 0;
            for (double v : bp.inward_normal)
                norm += v * v;
            CHECK(norm == doctest::Approx(1.0));
            Point in = bp.position;
            for (std::size_t i = 0; i < in.size(); ++i)
                in[i] += 1e-3 * bp.inward_normal[i];
            if (body.smooth_at(bp.position, 2e-3))
                CHECK(body.contains(in));
        }
    }
}

TEST_CASE("ellipsoid boundary weights reproduce the perimeter measure")
{
    // Weighted fraction of the ellipse boundary with x > a/2 versus quadrature.
    const double a = 3.0, b = 1.0;
    const auto body = ConvexBody::ellipsoid({0.0, 0.0}, {a, b});
    const auto pts = sample_boundary(body, 100000, 4);
    double w = 0, wf = 0;
    for (const auto& bp : pts) {
        w += bp.weight;
        if (bp.position[0] > a / 2)
            wf += bp.weight;
    }
    auto speed = [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double part = 2 * GK::integrate(speed, 0.0, pi / 3, 10, 1e-13);
    const double total = GK::integrate(speed, 0.0, 2 * pi, 10, 1e-13);
    CHECK(wf / w == doctest::Approx(part / total).epsilon(0.01));
}

TEST_CASE("body JSON round trip is lossless")
{
    const std::vector<ConvexBody> bodies = {
        ConvexBody::ball({0.1, 0.2}, 0.3), ConvexBody::ellipsoid({0, 0, 0}, {1, 2, 3}, true),
        ConvexBody::box({-1, -1}, {1, 2}),
        ConvexBody::polytope(2, {hs({-1, 0}, 0), hs({0, -1}, 0),
                                 hs({0.6, 0.8}, 0.9)}),
        half_disk()};
    for (const auto& body : bodies) {
        const auto doc = body_to_json(body);
        const auto again = body_from_json(doc);
        CHECK(body_to_json(again).dump() == doc.dump());
        for (const auto& x : sample_interior(body, 20, 2))
            CHECK(again.gap(x) == body.gap(x));
    }
    CHECK_THROWS_AS(body_from_json(nlohmann::json::parse(R"({"dimension": 2})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(body_from_json(nlohmann::json::parse(
                        R"({"dimension": 2, "shape": {"type": "torus"}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(body_from_json(nlohmann::json::parse(
                        R"({"dimension": 2, "shape": {"type": "ball", "center": [0], "radius": 1}})")),
                    std::invalid_argument);
}
