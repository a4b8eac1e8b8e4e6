#include "torsion/presets.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "torsion/analytic.hpp"
#include "torsion/random.hpp"

namespace torsion {

namespace {

constexpr int kMaxPresetDimension = 12;
constexpr std::uint64_t kRandomPolytopeSeed = 8;

// Splits "family-n<k>" into ("family", k).
std::pair<std::string, std::optional<int>> split_dimension(const std::string& name)
{
    const auto pos = name.rfind("-n");
    if (pos == std::string::npos || pos + 2 >= name.size())
        return {name, std::nullopt};
    int k = 0;
    const char* first = name.data() + pos + 2;
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last)
        return {name, std::nullopt};
    return {name.substr(0, pos), k};
}

int resolve_dimension(const std::string& name, std::optional<int> from_name,
                      std::optional<int> requested, int fallback)
{
    if (from_name && requested && *from_name != *requested)
        throw std::invalid_argument("preset '" + name + "' conflicts with the requested dimension");
    const int n = from_name ? *from_name : requested ? *requested : fallback;
    if (n < 2 || n > kMaxPresetDimension)
        throw std::invalid_argument("preset dimension must lie in [2, " +
                                    std::to_string(kMaxPresetDimension) + "]");
    return n;
}

HalfSpace axis_half_space(int n, int axis, double sign, double offset)
{
    HalfSpace h;
    h.normal.assign(n, 0.0);
    h.normal[axis] = sign;
    h.offset = offset;
    return h;
}

ConvexBody half_ball(int n)
{
    return ConvexBody::intersection({ConvexBody::ball(Point(n, 0.0), 1.0),
                                     ConvexBody::polyhedron(n, {axis_half_space(n, n - 1, -1.0, 0.0)})});
}

ConvexBody simplex(int n)
{
    std::vector<HalfSpace> hs;
    for (int i = 0; i < n; ++i)
        hs.push_back(axis_half_space(n, i, -1.0, 0.0));
    HalfSpace top;
    top.normal.assign(n, 1.0 / std::sqrt(double(n)));
    top.offset = 1.0 / std::sqrt(double(n));
    hs.push_back(top);
    return ConvexBody::polytope(n, std::move(hs));
}

// Eight faces tangent-ish to the unit ball; redrawn until bounded.
ConvexBody random_polytope()
{
    const int n = 3;
    const RandomStream root(kRandomPolytopeSeed);
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        RandomStream rng = root.substream(attempt);
        std::vector<HalfSpace> hs(8);
        for (HalfSpace& h : hs) {
            h.normal.assign(n, 0.0);
            rng.unit_vector(h.normal);
            h.offset = 0.8 + 0.4 * rng.uniform();
        }
        try {
            return ConvexBody::polytope(n, std::move(hs));
        } catch (const std::invalid_argument&) {
            // unbounded draw; try the next substream
        }
    }
    throw std::runtime_error("could not draw a bounded random polytope");
}

} // namespace

ConvexBody body_preset(const std::string& name, std::optional<int> dimension)
{
    if (name == "half-disk")
        return half_ball(resolve_dimension(name, 2, dimension, 2));
    if (name == "random-polytope" || name == "random-polytope-n3") {
        resolve_dimension(name, 3, dimension, 3);
        return random_polytope();
    }
    const auto [family, from_name] = split_dimension(name);
    if (family == "unit-ball") {
        const int n = resolve_dimension(name, from_name, dimension, 2);
        return ConvexBody::ball(Point(n, 0.0), 1.0);
    }
    if (family == "beck-ellipsoid") {
        const int n = resolve_dimension(name, from_name, dimension, 2);
        return ConvexBody::ellipsoid(Point(n, 0.0), beck_semi_axes(n));
    }
    if (family == "unit-box") {
        const int n = resolve_dimension(name, from_name, dimension, 2);
        return ConvexBody::box(Point(n, 0.0), Point(n, 1.0));
    }
    if (family == "simplex")
        return simplex(resolve_dimension(name, from_name, dimension, 2));
    if (family == "half-ball")
        return half_ball(resolve_dimension(name, from_name, dimension, 2));
    throw std::invalid_argument("unknown body preset '" + name + "'");
}

SubharmonicFn function_preset(const std::string& name, const ConvexBody& body)
{
    const int n = body.dimension();
    const Box box = body.bounding_box();
    if (name == "constant")
        return SubharmonicFn::constant(n, 1.0);
    if (name == "affine-top") {
        Point gradient(n, 0.0);
        gradient[n - 1] = -1.0;
        return SubharmonicFn::affine(gradient, box.upper[n - 1]);
    }
    if (name == "quadratic")
        return SubharmonicFn::quadratic(1.0, body.inscribed_ball().first, Point(n, 0.0), 0.0);
    if (name == "shifted-norm") {
        Point anchor = body.inscribed_ball().first;
        anchor[0] = box.upper[0] + body.diameter();
        return SubharmonicFn::shifted_norm(anchor);
    }
    if (name == "harmonic-cubic") {
        // x1^3 - 3 x1 x2^2 + x1 x2 + x1^2 - x2^2 + x1, harmonic in any n >= 2.
        auto mono = [n](double c, int p0, int p1) {
            Monomial m{c, std::vector<int>(n, 0)};
            m.powers[0] = p0;
            m.powers[1] = p1;
            return m;
        };
        Polynomial p(n, {mono(1, 3, 0), mono(-3, 1, 2), mono(1, 1, 1), mono(1, 2, 0),
                         mono(-1, 0, 2), mono(1, 1, 0)});
        const double shift = p.abs_bound(box);
        return SubharmonicFn::harmonic_polynomial(p + Polynomial(n, {mono(shift, 0, 0)}));
    }
    throw std::invalid_argument("unknown function preset '" + name + "'");
}

std::optional<PairPreset> pair_preset(const std::string& name)
{
    if (name == "half-disk-affine")
        return PairPreset{"half-disk", "affine-top"};
    return std::nullopt;
}

std::vector<std::string> body_preset_names()
{
    std::vector<std::string> names;
    for (int n = 2; n <= 6; ++n)
        names.push_back("unit-ball-n" + std::to_string(n));
    for (int n = 2; n <= 6; ++n)
        names.push_back("beck-ellipsoid-n" + std::to_string(n));
    for (int n = 2; n <= 4; ++n)
        names.push_back("unit-box-n" + std::to_string(n));
    for (int n = 2; n <= 4; ++n)
        names.push_back("simplex-n" + std::to_string(n));
    names.push_back("half-disk");
    for (int n = 3; n <= 4; ++n)
        names.push_back("half-ball-n" + std::to_string(n));
    names.push_back("random-polytope-n3");
    return names;
}

std::vector<std::string> function_preset_names()
{
    return {"constant", "affine-top", "quadratic", "shifted-norm", "harmonic-cubic"};
}

std::vector<SuiteCase> hermite_hadamard_suite(int n)
{
    const std::string suffix = "-n" + std::to_string(n);
    const std::vector<std::string> bodies = {"unit-ball" + suffix, "unit-box" + suffix,
                                             "simplex" + suffix, "beck-ellipsoid" + suffix,
                                             n == 2 ? std::string("half-disk") : "half-ball" + suffix};
    const std::vector<std::string> functions = {"constant", "affine-top", "shifted-norm",
                                                "harmonic-cubic"};
    std::vector<SuiteCase> out;
    for (const auto& b : bodies) {
        const ConvexBody body = body_preset(b);
        for (const auto& f : functions)
            out.push_back({b, f, body, function_preset(f, body)});
    }
    return out;
}

} // namespace torsion
