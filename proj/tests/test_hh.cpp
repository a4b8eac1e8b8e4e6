#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "torsion/analytic.hpp"
#include "torsion/hh.hpp"
#include "torsion/presets.hpp"

using namespace torsion;

namespace {

constexpr double pi = std::numbers::pi;

Monomial mono(double c, std::vector<int> p)
{
    return Monomial{c, std::move(p)};
}

WosConfig config(std::int64_t samples, std::uint64_t seed = 0)
{
    WosConfig c;
    c.samples = samples;
    c.seed = seed;
    return c;
}

ConvexBody half_disk()
{
    return body_preset("half-disk");
}

} // namespace

TEST_CASE("symbolic Laplacian agrees with finite differences")
{
    std::mt19937_64 eng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Polynomial p(3, {mono(1.5, {3, 1, 0}), mono(-2.0, {0, 2, 2}), mono(0.7, {1, 1, 1}),
                           mono(4.0, {0, 0, 3}), mono(-1.0, {2, 0, 0}), mono(3.0, {0, 0, 0})});
    const Polynomial lap = p.laplacian();
    for (int k = 0; k < 100; ++k) {
        const Point x{u(eng), u(eng), u(eng)};
        const double h = 1e-4;
        double fd = 0.0;
        for (int i = 0; i < 3; ++i) {
            Point xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd += (p(xp) - 2 * p(x) + p(xm)) / (h * h);
        }
        CHECK(fd == doctest::Approx(lap(x)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("polynomial algebra")
{
    const Polynomial p(2, {mono(1, {3, 0}), mono(-3, {1, 2}), mono(2, {0, 1})});
    const Point s{0.3, -0.8};
    const Polynomial q = p.translated(s);
    for (const Point& y : std::vector<Point>{{0.1, 0.2}, {-1.0, 0.5}, {2.0, 2.0}})
        CHECK(q(y) == doctest::Approx(p(Point{y[0] + s[0], y[1] + s[1]})).epsilon(1e-13));
    CHECK(p.degree() == 3);
    CHECK((p + p * -1.0).is_zero());
    CHECK(p.laplacian().is_zero());
    const Box box{{-1, -2}, {1, 1}};
    // |x^3 - 3 x y^2 + 2y| <= 1 + 3*4 + 2*2 on the box.
    CHECK(p.abs_bound(box) == doctest::Approx(17.0));
}

TEST_CASE("test-function kinds and their Laplacians")
{
    const auto c = SubharmonicFn::constant(2, 3.0);
    CHECK(c.value(Point{5.0, -1.0}) == 3.0);
    const auto q = SubharmonicFn::quadratic(0.5, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 2.0);
    CHECK(q.value(Point{1.0, 1.0, 1.0}) == doctest::Approx(0.5 * 2 + 1 + 2));
    CHECK(q.laplacian(Point{0.0, 0.0, 0.0}) == doctest::Approx(3.0));
    const auto s = SubharmonicFn::shifted_norm({3.0, 0.0, 0.0});
    CHECK(s.value(Point{0.0, 4.0, 0.0}) == doctest::Approx(5.0));
    CHECK(s.laplacian(Point{0.0, 4.0, 0.0}) == doctest::Approx(2.0 / 5.0));
    CHECK_FALSE(s.as_polynomial().has_value());
    CHECK_THROWS_AS(SubharmonicFn::harmonic_polynomial(Polynomial(2, {mono(1, {2, 0})})),
                    std::invalid_argument);
    CHECK_THROWS_AS(SubharmonicFn::quadratic(-1.0, {0, 0}, {0, 0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(SubharmonicFn::combination({{-1.0, c}}), std::invalid_argument);
    CHECK_THROWS_AS(SubharmonicFn::combination({{1.0, c}, {1.0, s}}), std::invalid_argument);
}

TEST_CASE("function JSON round trip")
{
    const std::vector<SubharmonicFn> fns = {
        SubharmonicFn::affine({1.0, -2.0}, 0.5),
        SubharmonicFn::quadratic(2.0, {0.1, 0.2}, {0.0, 1.0}, -1.0),
        SubharmonicFn::harmonic_polynomial(Polynomial(2, {mono(1, {1, 1}), mono(4, {0, 0})})),
        SubharmonicFn::shifted_norm({4.0, 1.0}),
        SubharmonicFn::combination({{0.5, SubharmonicFn::constant(2, 1.0)},
                                    {2.0, SubharmonicFn::shifted_norm({4.0, 1.0})}})};
    for (const auto& f : fns) {
        const auto doc = f.to_json();
        const auto g = function_from_json(doc);
        CHECK(g.to_json().dump() == doc.dump());
        CHECK(g.value(Point{0.3, 0.4}) == f.value(Point{0.3, 0.4}));
    }
    CHECK(function_from_json(nlohmann::json::parse(
                                 R"({"kind": "constant", "dimension": 3, "value": 2})"))
              .value(Point{1, 2, 3}) == 2.0);
    CHECK_THROWS_AS(function_from_json(nlohmann::json::parse(R"({"kind": "sine"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(function_from_json(nlohmann::json::parse(
                        R"({"kind": "harmonic_poly", "terms": [{"coefficient": 1, "powers": [2, 0]}]})")),
                    std::invalid_argument);
}

TEST_CASE("exact integrals over balls and boxes")
{
    const auto ball = ConvexBody::ball({0, 0, 0}, 1.0);
    const auto r2 = SubharmonicFn::quadratic(1.0, {0, 0, 0}, {0, 0, 0}, 0.0);
    CHECK(*exact_volume_integral(ball, r2) == doctest::Approx(4 * pi / 5));
    CHECK(*exact_boundary_integral(ball, r2) == doctest::Approx(4 * pi));

    const auto shifted = ConvexBody::ball({1.0, 2.0}, 0.5);
    const auto x = SubharmonicFn::affine({1.0, 0.0}, 0.0);
    CHECK(*exact_volume_integral(shifted, x) == doctest::Approx(pi * 0.25));
    CHECK(*exact_boundary_integral(shifted, x) == doctest::Approx(pi));

    const auto rect = ConvexBody::box({0, 0}, {2, 1});
    CHECK(*exact_volume_integral(rect, x) == doctest::Approx(2.0));
    CHECK(*exact_boundary_integral(rect, x) == doctest::Approx(6.0));
    CHECK_FALSE(exact_volume_integral(half_disk(), SubharmonicFn::constant(2, 1.0)).has_value());
}

TEST_CASE("sampled integrals agree with exact and closed-form values")
{
    const WosConfig cfg = config(200000, 3);
    const auto hd = half_disk();
    const auto f = function_preset("affine-top", hd);
    const Estimate lhs = volume_integral(hd, f, cfg);
    CHECK(std::abs(lhs.mean - (pi / 2 - 2.0 / 3)) < 3 * lhs.std_error);
    const Estimate rhs = boundary_integral(hd, f, cfg);
    CHECK(std::abs(rhs.mean - pi) < 3 * rhs.std_error);

    const auto disk = ConvexBody::ball({0, 0}, 1.0);
    CHECK(volume_integral(disk, SubharmonicFn::constant(2, 1.0), cfg).mean == doctest::Approx(pi));
    CHECK(boundary_integral(disk, SubharmonicFn::constant(2, 1.0), cfg).mean ==
          doctest::Approx(2 * pi));
    const Estimate odd = boundary_integral(disk, SubharmonicFn::affine({1.0, 0.0}, 0.0), cfg);
    CHECK(std::abs(odd.mean) < 3 * odd.std_error);

    const auto square = ConvexBody::box({0, 0}, {1, 1});
    const auto saddle = SubharmonicFn::harmonic_polynomial(
        Polynomial(2, {mono(1, {2, 0}), mono(-1, {0, 2})}));
    const Estimate zero = volume_integral(square, saddle, cfg);
    CHECK(std::abs(zero.mean) < 3 * zero.std_error);

    for (const auto& body : {ConvexBody::ball({0.2, 0.1, 0.0}, 0.9),
                             ConvexBody::box({0, 0, 0}, {1, 2, 0.5})}) {
        const auto g = function_preset("harmonic-cubic", body);
        const Estimate v = volume_integral(body, g, cfg);
        const Estimate b = boundary_integral(body, g, cfg);
        CHECK(std::abs(v.mean - *exact_volume_integral(body, g)) < 4 * v.std_error);
        CHECK(std::abs(b.mean - *exact_boundary_integral(body, g)) < 4 * b.std_error);
    }

    // Weighted ellipse boundary: perimeter times the mean of f = 1.
    const auto ell = ConvexBody::ellipsoid({0, 0}, {2.0, std::sqrt(2.0)});
    CHECK(boundary_integral(ell, SubharmonicFn::constant(2, 1.0), cfg).mean ==
          doctest::Approx(*ell.exact_surface_area()).epsilon(1e-12));
}

TEST_CASE("certificates reject invalid functions with a witness")
{
    const auto ball = ConvexBody::ball({0, 0, 0}, 1.0);
    const auto inside = SubharmonicFn::shifted_norm({0.5, 0.0, 0.0});
    const auto cert = certify(ball, inside);
    CHECK_FALSE(cert.ok);
    REQUIRE(cert.witness.has_value());

    const auto negative = SubharmonicFn::affine({1.0, 0.0, 0.0}, 0.5);
    const auto c2 = certify(ball, negative);
    CHECK_FALSE(c2.ok);
    REQUIRE(c2.witness.has_value());
    CHECK(negative.value(*c2.witness) < 0.0);
    CHECK_THROWS_AS(verify_hermite_hadamard(ball, negative, config(1000)), CertificateError);

    // Sign changes inside are allowed as long as the boundary values are >= 0.
    const auto disk = ConvexBody::ball({0, 0}, 1.0);
    const auto bowl = SubharmonicFn::quadratic(1.0, {0, 0}, {0, 0}, -0.5);
    CHECK(bowl.value(Point{0, 0}) < 0.0);
    CHECK(certify(disk, bowl).ok);
    CHECK(verify_hermite_hadamard(disk, bowl, config(20000)).pass);
}

TEST_CASE("inequality examples")
{
    const WosConfig cfg = config(200000, 1);
    const auto hd = half_disk();
    const BoundReport r = verify_hermite_hadamard(hd, function_preset("affine-top", hd), cfg);
    CHECK(r.pass);
    CHECK(r.ratio == doctest::Approx(half_disk_example().ratio).epsilon(0.01));

    const auto ball3 = ConvexBody::ball({0, 0, 0}, 1.0);
    const auto norm = SubharmonicFn::shifted_norm({3.0, 0.0, 0.0});
    CHECK(verify_hermite_hadamard(ball3, norm, cfg).pass);
    CHECK(function_preset("shifted-norm", ball3).anchor() == Point{3.0, 0.0, 0.0});

    const auto cube = body_preset("unit-box-n4");
    const BoundReport one = verify_hermite_hadamard(cube, SubharmonicFn::constant(4, 1.0), cfg);
    CHECK(one.pass);
    CHECK(one.measured.mean == doctest::Approx(1.0));
    CHECK(one.bound_value == doctest::Approx(std::sqrt(2.0) / pi * 8));
}

TEST_CASE("margins are additive over positive combinations")
{
    const WosConfig cfg = config(20000, 2);
    const auto body = body_preset("simplex-n3");
    const auto f = function_preset("affine-top", body);
    const auto g = function_preset("shifted-norm", body);
    const auto h = SubharmonicFn::combination({{2.0, f}, {0.5, g}});
    const BoundReport rf = verify_hermite_hadamard(body, f, cfg);
    const BoundReport rg = verify_hermite_hadamard(body, g, cfg);
    const BoundReport rh = verify_hermite_hadamard(body, h, cfg);
    CHECK(rh.measured.mean == doctest::Approx(2.0 * rf.measured.mean + 0.5 * rg.measured.mean).epsilon(1e-12));
    CHECK(rh.margin == doctest::Approx(2.0 * rf.margin + 0.5 * rg.margin).epsilon(1e-12));
}

TEST_CASE("torsion-gradient chain on the disk is tight for constants")
{
    WosConfig cfg = config(20000, 4);
    cfg.richardson = true;
    const auto disk = ConvexBody::ball({0, 0}, 1.0);
    const BoundReport r = verify_via_torsion(disk, SubharmonicFn::constant(2, 1.0), cfg, 16);
    CHECK(r.pass);
    // pi <= (1/2) 2 pi: equality up to noise.
    CHECK(std::abs(r.margin) <= r.tolerance);

    const auto hd = half_disk();
    CHECK(verify_via_torsion(hd, function_preset("affine-top", hd), config(10000, 5), 32).pass);
    const auto ell = body_preset("beck-ellipsoid-n2");
    CHECK(verify_via_torsion(ell, SubharmonicFn::constant(2, 1.0), config(10000, 6), 32).pass);
}

TEST_CASE("default suite in the plane")
{
    const WosConfig cfg = config(20000, 0);
    double best = 0.0, half_disk_ratio = 0.0;
    std::string best_name;
    for (const auto& c : hermite_hadamard_suite(2)) {
        const BoundReport r = verify_hermite_hadamard(c.body, c.function, cfg);
        CHECK_MESSAGE(r.pass, c.body_name << " / " << c.function_name);
        if (r.ratio > best) {
            best = r.ratio;
            best_name = c.body_name + "/" + c.function_name;
        }
        if (c.body_name == "half-disk" && c.function_name == "affine-top")
            half_disk_ratio = r.ratio;
    }
    // The constant on the disk, 1/(2 sqrt(pi)), is the largest ratio, not the half-disk.
    CHECK(best_name == "unit-ball-n2/constant");
    CHECK(best == doctest::Approx(cn_lower_bound(2)).epsilon(1e-12));
    CHECK(half_disk_ratio > 0.22);
    CHECK(half_disk_ratio < std::sqrt(2.0) / pi);
}

TEST_CASE("presets")
{
    CHECK(body_preset("unit-ball", 4).dimension() == 4);
    CHECK(body_preset("unit-ball-n4").dimension() == 4);
    CHECK_THROWS_AS(body_preset("unit-ball-n4", 3), std::invalid_argument);
    CHECK_THROWS_AS(body_preset("dodecahedron"), std::invalid_argument);
    CHECK_THROWS_AS(body_preset("unit-ball-n1"), std::invalid_argument);
    const auto poly = body_preset("random-polytope-n3");
    CHECK(std::get<Polytope>(poly.shape()).half_spaces().size() == 8);
    CHECK(poly.contains(Point{0, 0, 0}));
    for (const auto& name : body_preset_names())
        CHECK(body_preset(name).bounded());
    for (const auto& name : function_preset_names())
        for (const auto& body : {body_preset("half-disk"), body_preset("beck-ellipsoid-n3")})
            CHECK(certify(body, function_preset(name, body)).ok);
    CHECK(pair_preset("half-disk-affine")->body == "half-disk");
    CHECK_FALSE(pair_preset("unit-ball").has_value());
}
