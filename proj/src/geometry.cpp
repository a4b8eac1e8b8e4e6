#include "torsion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shape_data.hpp"
#include "torsion/analytic.hpp"
#include "torsion/parallel.hpp"
#include "torsion/random.hpp"

namespace torsion {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::int64_t kMaxRejections = 10'000'000;
constexpr std::uint64_t kEllipsoidAreaSeed = 0x5eed0fa7ea11ull;
constexpr std::int64_t kEllipsoidAreaSamples = 1 << 18;

void require_finite(std::span<const double> v, const char* what)
{
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string("non-finite ") + what);
}

double norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double ellipsoid_form(const Ellipsoid& e, std::span<const double> x)
{
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = (x[i] - e.center[i]) / e.semi_axes[i];
        q += t * t;
    }
    return q;
}

// Exact distance from an interior point (relative coordinates y) to the
// ellipsoid boundary. The closest point is z_i = b_i^2 y_i / (b_i^2 + t) for
// the unique root t in (-b_min^2, 0] of sum (b_i y_i / (b_i^2 + t))^2 = 1; when
// y has no component along the shortest axes the root may sit at -b_min^2.
double ellipsoid_exact_distance(std::span<const double> y, std::span<const double> b)
{
    const std::size_t n = y.size();
    const double bmin = *std::min_element(b.begin(), b.end());
    const double b2min = bmin * bmin;
    const double tie = 1e-14 * b2min;

    auto excess = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = b[i] * y[i] / (b[i] * b[i] + t);
            s += r * r;
        }
        return s - 1.0;
    };
    auto distance_at = [&](double t) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = b[i] * b[i] * y[i] / (b[i] * b[i] + t);
            d2 += (z - y[i]) * (z - y[i]);
        }
        return std::sqrt(d2);
    };

    bool along_min_axis = false;
    for (std::size_t i = 0; i < n; ++i)
        if (b[i] * b[i] - b2min <= tie && y[i] != 0.0)
            along_min_axis = true;

    if (!along_min_axis) {
        // Degenerate case: evaluate the limit t = -b_min^2 on the other axes.
        double used = 0.0;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double gapi = b[i] * b[i] - b2min;
            if (gapi <= tie)
                continue;
            const double z = b[i] * b[i] * y[i] / gapi;
            used += (z / b[i]) * (z / b[i]);
            d2 += (z - y[i]) * (z - y[i]);
        }
        if (used <= 1.0) {
            d2 += b2min * (1.0 - used);
            return std::sqrt(d2);
        }
    }

    double lo = -b2min;
    double hi = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return distance_at(0.5 * (lo + hi));
}

Box intersect_boxes(const Box& a, const Box& b)
{
    Box r = a;
    for (std::size_t k = 0; k < r.lower.size(); ++k) {
        r.lower[k] = std::max(a.lower[k], b.lower[k]);
        r.upper[k] = std::min(a.upper[k], b.upper[k]);
    }
    return r;
}

double box_volume(const Box& b)
{
    double v = 1.0;
    for (std::size_t k = 0; k < b.lower.size(); ++k)
        v *= b.upper[k] - b.lower[k];
    return v;
}

double box_face_area(const Box& b, std::size_t k)
{
    double a = 1.0;
    for (std::size_t j = 0; j < b.lower.size(); ++j)
        if (j != k)
            a *= b.upper[j] - b.lower[j];
    return a;
}

// Index of the smallest entry and the second smallest value.
std::pair<std::size_t, double> argmin_and_runner_up(std::span<const double> v)
{
    std::size_t best = 0;
    double first = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < first) {
            second = first;
            first = v[i];
            best = i;
        } else if (v[i] < second) {
            second = v[i];
        }
    }
    return {best, second};
}

std::vector<double> polytope_slacks(const Polytope& p, std::span<const double> x)
{
    const auto& hs = p.half_spaces();
    std::vector<double> s(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i)
        s[i] = hs[i].offset - dot(hs[i].normal, x);
    return s;
}

std::vector<double> box_slacks(const Box& b, std::span<const double> x)
{
    std::vector<double> s(2 * x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        s[2 * k] = x[k] - b.lower[k];
        s[2 * k + 1] = b.upper[k] - x[k];
    }
    return s;
}

double ellipsoid_mean_jacobian_mc(std::span<const double> b, std::int64_t samples,
                                  std::uint64_t seed, double* stderr_out)
{
    const std::size_t n = b.size();
    RandomStream root(seed);
    std::vector<double> values(static_cast<std::size_t>(samples));
    std::vector<double> u(n);
    for (std::int64_t k = 0; k < samples; ++k) {
        RandomStream rng = root.substream(static_cast<std::uint64_t>(k));
        rng.unit_vector(u);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += (u[i] / b[i]) * (u[i] / b[i]);
        values[static_cast<std::size_t>(k)] = std::sqrt(s);
    }
    const Estimate e = summarize(values);
    if (stderr_out)
        *stderr_out = e.std_error;
    return e.mean;
}

// Ellipsoid surface area as |S^{n-1}| prod(b) E|D^{-1} u| over uniform u.
Estimate ellipsoid_area_estimate(std::span<const double> b, std::int64_t samples,
                                 std::uint64_t seed)
{
    if (auto exact = ellipsoid_surface_area_closed_form(b))
        return Estimate::exact_value(*exact);
    const int n = static_cast<int>(b.size());
    double prod = 1.0;
    for (double v : b)
        prod *= v;
    const double sphere = n * omega(n);
    double se = 0.0;
    const double mean = ellipsoid_mean_jacobian_mc(b, samples, seed, &se);
    Estimate e;
    e.mean = sphere * prod * mean;
    e.std_error = sphere * prod * se;
    e.samples = samples;
    return e;
}

Box shape_bbox(const ConvexBody& body);

} // namespace

// ---------------------------------------------------------------------------
// Construction

ConvexBody ConvexBody::ball(Point center, double radius)
{
    const int n = static_cast<int>(center.size());
    if (n < 2)
        throw std::invalid_argument("dimension must be >= 2");
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("ball radius must be positive");
    return ConvexBody(n, Ball{std::move(center), radius});
}

ConvexBody ConvexBody::ellipsoid(Point center, std::vector<double> semi_axes, bool exact_distance)
{
    const int n = static_cast<int>(center.size());
    if (n < 2)
        throw std::invalid_argument("dimension must be >= 2");
    if (semi_axes.size() != center.size())
        throw std::invalid_argument("ellipsoid semi-axes have wrong dimension");
    require_finite(center, "ellipsoid center");
    for (double b : semi_axes)
        if (!(b > 0.0) || !std::isfinite(b))
            throw std::invalid_argument("ellipsoid semi-axes must be positive");
    return ConvexBody(n, Ellipsoid{std::move(center), std::move(semi_axes), exact_distance});
}

ConvexBody ConvexBody::box(Point lower, Point upper)
{
    const int n = static_cast<int>(lower.size());
    if (n < 2)
        throw std::invalid_argument("dimension must be >= 2");
    if (upper.size() != lower.size())
        throw std::invalid_argument("box corners have different dimensions");
    require_finite(lower, "box corner");
    require_finite(upper, "box corner");
    for (int k = 0; k < n; ++k)
        if (!(upper[k] > lower[k]))
            throw std::invalid_argument("box must have positive extent in every coordinate");
    return ConvexBody(n, Box{std::move(lower), std::move(upper)});
}

ConvexBody ConvexBody::polytope(int dimension, std::vector<HalfSpace> half_spaces)
{
    return ConvexBody(dimension, Polytope::create(dimension, std::move(half_spaces), true));
}

ConvexBody ConvexBody::polyhedron(int dimension, std::vector<HalfSpace> half_spaces)
{
    return ConvexBody(dimension, Polytope::create(dimension, std::move(half_spaces), false));
}

ConvexBody ConvexBody::intersection(std::vector<ConvexBody> members)
{
    if (members.empty())
        throw std::invalid_argument("intersection needs at least one member");
    const int n = members.front().dimension();
    for (const auto& m : members)
        if (m.dimension() != n)
            throw std::invalid_argument("intersection members must share the dimension");

    auto data = std::make_shared<Intersection::Data>();
    data->members = std::move(members);

    bool any_bounded = false;
    Box coarse{Point(n, -std::numeric_limits<double>::infinity()),
               Point(n, std::numeric_limits<double>::infinity())};
    for (const auto& m : data->members)
        if (m.bounded()) {
            coarse = intersect_boxes(coarse, m.bounding_box());
            any_bounded = true;
        }
    if (!any_bounded)
        throw std::invalid_argument("intersection needs a bounded member");
    for (int k = 0; k < n; ++k)
        if (!(coarse.upper[k] > coarse.lower[k]))
            throw std::invalid_argument("intersection is empty");

    data->bbox = coarse;
    for (const auto& m : data->members) {
        if (m.bounded()) {
            data->samplers.push_back(m);
        } else {
            const auto& p = std::get<Polytope>(m.shape());
            ConvexBody clipped(n, p.clipped(coarse));
            data->bbox = intersect_boxes(data->bbox, clipped.bounding_box());
            data->samplers.push_back(std::move(clipped));
        }
    }
    for (int k = 0; k < n; ++k)
        if (!(data->bbox.upper[k] > data->bbox.lower[k]))
            throw std::invalid_argument("intersection is empty");

    double total = 0.0;
    for (const auto& s : data->samplers) {
        double area = 0.0;
        if (auto exact = s.exact_surface_area()) {
            area = *exact;
        } else if (const auto* e = std::get_if<Ellipsoid>(&s.shape())) {
            area = ellipsoid_area_estimate(e->semi_axes, kEllipsoidAreaSamples, kEllipsoidAreaSeed)
                       .mean;
        } else {
            throw std::invalid_argument("nested intersections are not supported");
        }
        data->sampler_areas.push_back(area);
        total += area;
        data->cumulative_area.push_back(total);
    }

    double diag = 0.0;
    for (int k = 0; k < n; ++k)
        diag += (data->bbox.upper[k] - data->bbox.lower[k]) * (data->bbox.upper[k] - data->bbox.lower[k]);
    data->diameter = std::sqrt(diag);
    for (const auto& m : data->members)
        if (m.bounded())
            data->diameter = std::min(data->diameter, m.diameter());

    ConvexBody body(n, Intersection{});
    std::get<Intersection>(body.shape_).data_ = data;

    // Inscribed ball: exact when every member is polyhedral.
    bool polyhedral = true;
    std::vector<HalfSpace> hs;
    for (const auto& m : data->members) {
        if (const auto* b = std::get_if<Box>(&m.shape())) {
            for (int k = 0; k < n; ++k) {
                Point e(n, 0.0);
                e[k] = 1.0;
                hs.push_back({e, b->upper[k]});
                e[k] = -1.0;
                hs.push_back({e, -b->lower[k]});
            }
        } else if (const auto* p = std::get_if<Polytope>(&m.shape())) {
            hs.insert(hs.end(), p->half_spaces().begin(), p->half_spaces().end());
        } else {
            polyhedral = false;
        }
    }
    if (polyhedral) {
        auto [c, r] = chebyshev_ball(hs, n, 1e-10);
        data->center = std::move(c);
        data->inradius = r;
        data->inscribed_exact = true;
    } else {
        // gap() is concave on the body: best of a sample, then pattern search.
        RandomStream rng(0x1c5c0ull);
        Point best;
        double best_gap = -std::numeric_limits<double>::infinity();
        Point x(n);
        for (int s = 0; s < 4096; ++s) {
            for (int k = 0; k < n; ++k)
                x[k] = data->bbox.lower[k] + (data->bbox.upper[k] - data->bbox.lower[k]) * rng.uniform();
            const double g = body.gap(x);
            if (g > best_gap) {
                best_gap = g;
                best = x;
            }
        }
        double step = 0.25 * data->diameter;
        Point dir(n);
        while (step > 1e-12 * data->diameter) {
            bool improved = false;
            for (int trial = 0; trial < 4 * n; ++trial) {
                if (trial < 2 * n) {
                    std::fill(dir.begin(), dir.end(), 0.0);
                    dir[trial / 2] = (trial % 2 == 0) ? 1.0 : -1.0;
                } else {
                    rng.unit_vector(dir);
                }
                for (int k = 0; k < n; ++k)
                    x[k] = best[k] + step * dir[k];
                const double g = body.gap(x);
                if (g > best_gap) {
                    best_gap = g;
                    best = x;
                    improved = true;
                }
            }
            if (!improved)
                step *= 0.5;
        }
        data->center = best;
        data->inradius = best_gap;
    }
    if (!(data->inradius > 1e-12 * data->diameter))
        throw std::invalid_argument("intersection has empty interior");
    return body;
}

const std::vector<ConvexBody>& Intersection::members() const
{
    return data_->members;
}

// ---------------------------------------------------------------------------
// Geometric oracles

bool ConvexBody::bounded() const
{
    if (const auto* p = std::get_if<Polytope>(&shape_))
        return p->bounded();
    return true;
}

bool ConvexBody::contains(std::span<const double> x) const
{
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    s += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                return s <= b.radius * b.radius;
            },
            [&](const Ellipsoid& e) { return ellipsoid_form(e, x) <= 1.0; },
            [&](const Box& b) {
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (x[i] < b.lower[i] || x[i] > b.upper[i])
                        return false;
                return true;
            },
            [&](const Polytope& p) {
                for (const auto& h : p.half_spaces())
                    if (dot(h.normal, x) > h.offset)
                        return false;
                return true;
            },
            [&](const Intersection& s) {
                for (const auto& m : s.members())
                    if (!m.contains(x))
                        return false;
                return true;
            },
        },
        shape_);
}

double ConvexBody::gap(std::span<const double> x) const
{
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    s += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                return b.radius - std::sqrt(s);
            },
            [&](const Ellipsoid& e) {
                const double q = ellipsoid_form(e, x);
                const double bmin = *std::min_element(e.semi_axes.begin(), e.semi_axes.end());
                if (!e.exact_distance || q >= 1.0)
                    return (1.0 - std::sqrt(q)) * bmin;
                Point y(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    y[i] = x[i] - e.center[i];
                return ellipsoid_exact_distance(y, e.semi_axes);
            },
            [&](const Box& b) {
                double g = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < x.size(); ++i)
                    g = std::min({g, x[i] - b.lower[i], b.upper[i] - x[i]});
                return g;
            },
            [&](const Polytope& p) {
                double g = std::numeric_limits<double>::infinity();
                for (const auto& h : p.half_spaces())
                    g = std::min(g, h.offset - dot(h.normal, x));
                return g;
            },
            [&](const Intersection& s) {
                double g = std::numeric_limits<double>::infinity();
                for (const auto& m : s.members())
                    g = std::min(g, m.gap(x));
                return g;
            },
        },
        shape_);
}

double ConvexBody::diameter() const
{
    return std::visit(
        overloaded{
            [](const Ball& b) { return 2.0 * b.radius; },
            [](const Ellipsoid& e) {
                return 2.0 * *std::max_element(e.semi_axes.begin(), e.semi_axes.end());
            },
            [](const Box& b) {
                double s = 0.0;
                for (std::size_t i = 0; i < b.lower.size(); ++i)
                    s += (b.upper[i] - b.lower[i]) * (b.upper[i] - b.lower[i]);
                return std::sqrt(s);
            },
            [](const Polytope& p) {
                if (!p.bounded())
                    return std::numeric_limits<double>::infinity();
                return p.data().diameter;
            },
            [](const Intersection& s) { return s.data().diameter; },
        },
        shape_);
}

namespace {

Box shape_bbox(const ConvexBody& body)
{
    const int n = body.dimension();
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                Box r{b.center, b.center};
                for (int k = 0; k < n; ++k) {
                    r.lower[k] -= b.radius;
                    r.upper[k] += b.radius;
                }
                return r;
            },
            [&](const Ellipsoid& e) {
                Box r{e.center, e.center};
                for (int k = 0; k < n; ++k) {
                    r.lower[k] -= e.semi_axes[k];
                    r.upper[k] += e.semi_axes[k];
                }
                return r;
            },
            [&](const Box& b) { return b; },
            [&](const Polytope& p) {
                if (!p.bounded())
                    return Box{Point(n, -std::numeric_limits<double>::infinity()),
                               Point(n, std::numeric_limits<double>::infinity())};
                return p.data().bbox;
            },
            [&](const Intersection& s) { return s.data().bbox; },
        },
        body.shape());
}

} // namespace

Box ConvexBody::bounding_box() const
{
    return shape_bbox(*this);
}

std::pair<Point, double> ConvexBody::inscribed_ball() const
{
    return std::visit(
        overloaded{
            [](const Ball& b) { return std::make_pair(b.center, b.radius); },
            [](const Ellipsoid& e) {
                return std::make_pair(e.center,
                                      *std::min_element(e.semi_axes.begin(), e.semi_axes.end()));
            },
            [](const Box& b) {
                Point c(b.lower.size());
                double r = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < c.size(); ++k) {
                    c[k] = 0.5 * (b.lower[k] + b.upper[k]);
                    r = std::min(r, 0.5 * (b.upper[k] - b.lower[k]));
                }
                return std::make_pair(c, r);
            },
            [](const Polytope& p) -> std::pair<Point, double> {
                if (!p.bounded())
                    throw std::invalid_argument("unbounded polyhedron has no inscribed ball");
                return {p.data().center, p.data().inradius};
            },
            [](const Intersection& s) { return std::make_pair(s.data().center, s.data().inradius); },
        },
        shape_);
}

Point ConvexBody::inward_normal(std::span<const double> x) const
{
    const std::size_t n = x.size();
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                Point v(n);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = b.center[i] - x[i];
                const double len = norm(v);
                for (double& c : v)
                    c /= len;
                return v;
            },
            [&](const Ellipsoid& e) {
                Point v(n);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = -(x[i] - e.center[i]) / (e.semi_axes[i] * e.semi_axes[i]);
                const double len = norm(v);
                for (double& c : v)
                    c /= len;
                return v;
            },
            [&](const Box& b) {
                const auto slack = box_slacks(b, x);
                const std::size_t face = argmin_and_runner_up(slack).first;
                Point v(n, 0.0);
                v[face / 2] = (face % 2 == 0) ? 1.0 : -1.0;
                return v;
            },
            [&](const Polytope& p) {
                const auto slack = polytope_slacks(p, x);
                const std::size_t face = argmin_and_runner_up(slack).first;
                Point v = p.half_spaces()[face].normal;
                for (double& c : v)
                    c = -c;
                return v;
            },
            [&](const Intersection& s) {
                std::size_t best = 0;
                double best_gap = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < s.members().size(); ++i) {
                    const double g = std::abs(s.members()[i].gap(x));
                    if (g < best_gap) {
                        best_gap = g;
                        best = i;
                    }
                }
                return s.members()[best].inward_normal(x);
            },
        },
        shape_);
}

bool ConvexBody::smooth_at(std::span<const double> x, double tol) const
{
    return std::visit(
        overloaded{
            [](const Ball&) { return true; },
            [](const Ellipsoid&) { return true; },
            [&](const Box& b) { return argmin_and_runner_up(box_slacks(b, x)).second > tol; },
            [&](const Polytope& p) {
                return argmin_and_runner_up(polytope_slacks(p, x)).second > tol;
            },
            [&](const Intersection& s) {
                int active = 0;
                const ConvexBody* member = nullptr;
                for (const auto& m : s.members())
                    if (std::abs(m.gap(x)) <= tol) {
                        ++active;
                        member = &m;
                    }
                return active == 1 && member->smooth_at(x, tol);
            },
        },
        shape_);
}

std::optional<double> ConvexBody::exact_volume() const
{
    const int n = dimension_;
    return std::visit(
        overloaded{
            [&](const Ball& b) -> std::optional<double> { return omega(n) * std::pow(b.radius, n); },
            [&](const Ellipsoid& e) -> std::optional<double> {
                double v = omega(n);
                for (double a : e.semi_axes)
                    v *= a;
                return v;
            },
            [&](const Box& b) -> std::optional<double> { return box_volume(b); },
            [&](const Polytope& p) -> std::optional<double> {
                if (!p.bounded())
                    return std::nullopt;
                return p.data().volume;
            },
            [&](const Intersection&) -> std::optional<double> { return std::nullopt; },
        },
        shape_);
}

std::optional<double> ConvexBody::exact_surface_area() const
{
    const int n = dimension_;
    return std::visit(
        overloaded{
            [&](const Ball& b) -> std::optional<double> {
                return n * omega(n) * std::pow(b.radius, n - 1);
            },
            [&](const Ellipsoid& e) { return ellipsoid_surface_area_closed_form(e.semi_axes); },
            [&](const Box& b) -> std::optional<double> {
                double a = 0.0;
                for (int k = 0; k < n; ++k)
                    a += 2.0 * box_face_area(b, static_cast<std::size_t>(k));
                return a;
            },
            [&](const Polytope& p) -> std::optional<double> {
                if (!p.bounded())
                    return std::nullopt;
                return p.data().surface_area;
            },
            [&](const Intersection&) -> std::optional<double> { return std::nullopt; },
        },
        shape_);
}

double ConvexBody::volume_upper_bound() const
{
    if (auto v = exact_volume())
        return *v;
    return box_volume(bounding_box());
}

// ---------------------------------------------------------------------------
// Sampling

BoundaryPoint ConvexBody::sample_boundary_point(RandomStream& rng) const
{
    const std::size_t n = static_cast<std::size_t>(dimension_);
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                BoundaryPoint bp;
                bp.inward_normal.resize(n);
                rng.unit_vector(bp.inward_normal);
                bp.position.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    bp.position[i] = b.center[i] + b.radius * bp.inward_normal[i];
                    bp.inward_normal[i] = -bp.inward_normal[i];
                }
                return bp;
            },
            [&](const Ellipsoid& e) {
                // Map a uniform sphere point through the axis scaling; the surface
                // Jacobian prod(b) |D^{-1} u| becomes the importance weight.
                Point u(n);
                rng.unit_vector(u);
                BoundaryPoint bp;
                bp.position.resize(n);
                bp.inward_normal.resize(n);
                double jac = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    bp.position[i] = e.center[i] + e.semi_axes[i] * u[i];
                    bp.inward_normal[i] = -u[i] / e.semi_axes[i];
                    jac += bp.inward_normal[i] * bp.inward_normal[i];
                }
                jac = std::sqrt(jac);
                for (double& c : bp.inward_normal)
                    c /= jac;
                double prod = 1.0;
                for (double a : e.semi_axes)
                    prod *= a;
                const auto area = ellipsoid_surface_area_closed_form(e.semi_axes);
                const double sphere = static_cast<double>(n) * omega(static_cast<int>(n));
                bp.weight = area ? jac * prod * sphere / *area : jac * prod;
                return bp;
            },
            [&](const Box& b) {
                std::vector<double> cumulative(2 * n);
                double total = 0.0;
                for (std::size_t f = 0; f < 2 * n; ++f) {
                    total += box_face_area(b, f / 2);
                    cumulative[f] = total;
                }
                const double pick = rng.uniform() * total;
                const std::size_t face = static_cast<std::size_t>(
                    std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
                const std::size_t axis = std::min(face, 2 * n - 1) / 2;
                const bool low = (std::min(face, 2 * n - 1) % 2) == 0;
                BoundaryPoint bp;
                bp.position.resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    bp.position[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * rng.uniform();
                bp.position[axis] = low ? b.lower[axis] : b.upper[axis];
                bp.inward_normal.assign(n, 0.0);
                bp.inward_normal[axis] = low ? 1.0 : -1.0;
                return bp;
            },
            [&](const Polytope& p) {
                const auto& d = p.data();
                if (!p.bounded() || d.facets.empty())
                    throw std::invalid_argument("cannot sample the boundary of an unbounded polyhedron");
                const double pick = rng.uniform() * d.surface_area;
                std::size_t fi = static_cast<std::size_t>(
                    std::upper_bound(d.cumulative_area.begin(), d.cumulative_area.end(), pick) -
                    d.cumulative_area.begin());
                fi = std::min(fi, d.facets.size() - 1);
                const auto& facet = d.facets[fi];
                const Eigen::Index m = facet.lower.size();
                Eigen::VectorXd y(m);
                for (std::int64_t attempt = 0;; ++attempt) {
                    if (attempt > kMaxRejections)
                        throw std::runtime_error("facet rejection sampling did not terminate");
                    for (Eigen::Index k = 0; k < m; ++k)
                        y(k) = facet.lower(k) + (facet.upper(k) - facet.lower(k)) * rng.uniform();
                    if (facet.local_a.rows() == 0 ||
                        ((facet.local_a * y - facet.local_b).array() < -d.tolerance).all())
                        break;
                }
                const Eigen::VectorXd x = facet.origin + facet.basis * y;
                BoundaryPoint bp;
                bp.position.assign(x.data(), x.data() + x.size());
                bp.inward_normal = p.half_spaces()[facet.index].normal;
                for (double& c : bp.inward_normal)
                    c = -c;
                return bp;
            },
            [&](const Intersection& s) {
                const auto& d = s.data();
                const auto& members = d.members;
                const double strict = 1e-12 * d.diameter;
                for (std::int64_t attempt = 0;; ++attempt) {
                    if (attempt > kMaxRejections)
                        throw std::runtime_error("intersection boundary sampling did not terminate");
                    const double pick = rng.uniform() * d.cumulative_area.back();
                    std::size_t k = static_cast<std::size_t>(
                        std::upper_bound(d.cumulative_area.begin(), d.cumulative_area.end(), pick) -
                        d.cumulative_area.begin());
                    k = std::min(k, members.size() - 1);
                    BoundaryPoint bp = d.samplers[k].sample_boundary_point(rng);
                    bool accept = true;
                    // A face shared by several members is attributed to the first one.
                    for (std::size_t j = 0; j < members.size() && accept; ++j) {
                        if (j == k)
                            continue;
                        accept = j < k ? members[j].gap(bp.position) > strict
                                       : members[j].contains(bp.position);
                    }
                    if (accept)
                        return bp;
                }
            },
        },
        shape_);
}

Point ConvexBody::sample_interior_point(RandomStream& rng) const
{
    const Box b = bounding_box();
    const std::size_t n = static_cast<std::size_t>(dimension_);
    Point x(n);
    for (std::int64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (std::size_t k = 0; k < n; ++k)
            x[k] = b.lower[k] + (b.upper[k] - b.lower[k]) * rng.uniform();
        if (contains(x))
            return x;
    }
    throw std::runtime_error("interior rejection sampling did not terminate");
}

// ---------------------------------------------------------------------------
// Free functions

bool contains(const ConvexBody& body, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != body.dimension())
        throw std::invalid_argument("point dimension does not match the body");
    return body.contains(x);
}

double distance_to_boundary(const ConvexBody& body, std::span<const double> x)
{
    if (!contains(body, x))
        throw std::invalid_argument("point lies outside the body");
    return std::max(0.0, body.gap(x));
}

Estimate volume_monte_carlo(const ConvexBody& body, std::int64_t samples, std::uint64_t seed)
{
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");
    const Box b = body.bounding_box();
    const double box_vol = box_volume(b);
    const std::size_t n = static_cast<std::size_t>(body.dimension());
    RandomStream root(seed);
    Point x(n);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        RandomStream rng = root.substream(static_cast<std::uint64_t>(s));
        for (std::size_t k = 0; k < n; ++k)
            x[k] = b.lower[k] + (b.upper[k] - b.lower[k]) * rng.uniform();
        if (body.contains(x))
            ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    Estimate e;
    e.mean = box_vol * p;
    e.std_error = box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    e.samples = samples;
    return e;
}

Estimate volume(const ConvexBody& body, const WosConfig& cfg)
{
    if (auto v = body.exact_volume())
        return Estimate::exact_value(*v);
    return volume_monte_carlo(body, cfg.samples, cfg.seed);
}

Estimate surface_area(const ConvexBody& body, const WosConfig& cfg)
{
    if (auto a = body.exact_surface_area())
        return Estimate::exact_value(*a);
    if (const auto* e = std::get_if<Ellipsoid>(&body.shape()))
        return ellipsoid_area_estimate(e->semi_axes, cfg.samples, cfg.seed);

    const auto& s = std::get<Intersection>(body.shape());
    const auto& d = s.data();
    const auto& members = d.members;
    const double strict = 1e-12 * d.diameter;
    // Sum over members of (member area) x (weighted fraction of its boundary kept).
    Estimate total;
    total.samples = cfg.samples;
    double var = 0.0;
    RandomStream root(cfg.seed);
    for (std::size_t k = 0; k < members.size(); ++k) {
        RandomStream stream = root.substream(k);
        std::vector<double> weights(static_cast<std::size_t>(cfg.samples));
        std::vector<double> kept(static_cast<std::size_t>(cfg.samples));
        for (std::int64_t i = 0; i < cfg.samples; ++i) {
            RandomStream rng = stream.substream(static_cast<std::uint64_t>(i));
            const BoundaryPoint bp = d.samplers[k].sample_boundary_point(rng);
            bool accept = true;
            for (std::size_t j = 0; j < members.size() && accept; ++j) {
                if (j == k)
                    continue;
                accept = j < k ? members[j].gap(bp.position) > strict
                               : members[j].contains(bp.position);
            }
            weights[static_cast<std::size_t>(i)] = bp.weight;
            kept[static_cast<std::size_t>(i)] = accept ? bp.weight : 0.0;
        }
        double sw = 0.0, sk = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            sw += weights[i];
            sk += kept[i];
        }
        const double frac = sk / sw;
        double ss = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double r = kept[i] - frac * weights[i];
            ss += r * r;
        }
        const double frac_var = ss / (sw * sw);
        const double area = d.sampler_areas[k];
        total.mean += area * frac;
        var += area * area * frac_var;
    }
    total.std_error = std::sqrt(var);
    return total;
}

std::vector<BoundaryPoint> sample_boundary(const ConvexBody& body, std::int64_t count,
                                           std::uint64_t seed)
{
    if (count < 1)
        throw std::invalid_argument("count must be >= 1");
    std::vector<BoundaryPoint> out(static_cast<std::size_t>(count));
    const RandomStream root(seed);
    parallel_for(out.size(), 0, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            RandomStream rng = root.substream(k);
            out[k] = body.sample_boundary_point(rng);
        }
    });
    return out;
}

std::vector<Point> sample_interior(const ConvexBody& body, std::int64_t count, std::uint64_t seed)
{
    if (count < 1)
        throw std::invalid_argument("count must be >= 1");
    std::vector<Point> out(static_cast<std::size_t>(count));
    const RandomStream root(seed);
    parallel_for(out.size(), 0, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            RandomStream rng = root.substream(k);
            out[k] = body.sample_interior_point(rng);
        }
    });
    return out;
}

std::optional<double> ellipsoid_surface_area_closed_form(std::span<const double> semi_axes)
{
    std::vector<double> b(semi_axes.begin(), semi_axes.end());
    std::sort(b.begin(), b.end(), std::greater<>());
    const double rel = 1e-12;
    if (b.size() == 2) {
        const double a = b[0], c = b[1];
        const double k = std::sqrt(std::max(0.0, 1.0 - (c * c) / (a * a)));
        return 4.0 * a * std::comp_ellint_2(k);
    }
    if (b.size() == 3) {
        const double a = b[0], m = b[1], c = b[2];
        const double pi = std::numbers::pi;
        if (a - c <= rel * a)
            return 4.0 * pi * a * a;
        const double phi = std::acos(c / a);
        const double k2 = (a * a * (m * m - c * c)) / (m * m * (a * a - c * c));
        const double k = std::sqrt(std::clamp(k2, 0.0, 1.0));
        const double s = std::sin(phi);
        return 2.0 * pi * c * c +
               2.0 * pi * a * m / s * (std::ellint_2(k, phi) * s * s + std::ellint_1(k, phi) * std::cos(phi) * std::cos(phi));
    }
    return std::nullopt;
}

} // namespace torsion
