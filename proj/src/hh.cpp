#include "torsion/hh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "torsion/parallel.hpp"
#include "torsion/random.hpp"
#include "torsion/wos.hpp"

namespace torsion {

namespace {

constexpr std::uint64_t kInteriorSeed = 0x1e7e41ull;
constexpr std::uint64_t kBoundarySeed = 0xb0b0ull;

void require_match(const ConvexBody& body, const SubharmonicFn& f)
{
    if (body.dimension() != f.dimension())
        throw std::invalid_argument("function and body dimensions differ");
}

// sqrt(a^2 + b^2 + ...)
double quadrature_sum(std::initializer_list<double> terms)
{
    double s = 0.0;
    for (double t : terms)
        s += t * t;
    return std::sqrt(s);
}

// Integral of y^alpha over the ball |y| <= R (solid) or the sphere |y| = R.
double centered_ball_moment(const std::vector<int>& alpha, double radius, bool sphere)
{
    int total = 0;
    double log_num = 0.0;
    for (int a : alpha) {
        if (a % 2 != 0)
            return 0.0;
        total += a;
        log_num += std::lgamma(0.5 * (a + 1));
    }
    const int n = static_cast<int>(alpha.size());
    const double shell = 2.0 * std::exp(log_num - std::lgamma(0.5 * (total + n)));
    return sphere ? shell * std::pow(radius, total + n - 1)
                  : shell * std::pow(radius, total + n) / (total + n);
}

double interval_moment(double lo, double hi, int p)
{
    return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
}

} // namespace

double hermite_hadamard_constant()
{
    return std::numbers::sqrt2 / std::numbers::pi;
}

Estimate volume_integral(const ConvexBody& body, const SubharmonicFn& f, const WosConfig& cfg)
{
    cfg.validate();
    require_match(body, f);
    const auto points = sample_interior(body, cfg.samples, mix64(cfg.seed ^ kInteriorSeed));
    std::vector<double> values(points.size());
    parallel_for(points.size(), cfg.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            values[k] = f.value(points[k]);
    });
    const Estimate mean = summarize(values);
    const Estimate vol = volume(body, cfg);
    Estimate out = mean;
    out.mean = vol.mean * mean.mean;
    out.std_error = quadrature_sum({vol.mean * mean.std_error, mean.mean * vol.std_error});
    out.exact = false;
    return out;
}

Estimate boundary_integral(const ConvexBody& body, const SubharmonicFn& f, const WosConfig& cfg)
{
    cfg.validate();
    require_match(body, f);
    const auto points = sample_boundary(body, cfg.samples, mix64(cfg.seed ^ kBoundarySeed));
    std::vector<double> values(points.size());
    parallel_for(points.size(), cfg.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            values[k] = f.value(points[k].position);
    });

    double sum_w = 0.0, sum_wf = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        sum_w += points[k].weight;
        sum_wf += points[k].weight * values[k];
    }
    if (!(sum_w > 0.0))
        throw std::runtime_error("boundary sample weights sum to zero");
    const double ratio = sum_wf / sum_w;
    // Delta-method variance of the self-normalized (ratio) estimator.
    const double count = static_cast<double>(points.size());
    double ss = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double z = points[k].weight * (values[k] - ratio);
        ss += z * z;
    }
    const double ratio_se =
        count > 1.0 ? std::sqrt(ss * count / (count - 1.0)) / sum_w : 0.0;

    const Estimate area = surface_area(body, cfg);
    Estimate out;
    out.mean = area.mean * ratio;
    out.std_error = quadrature_sum({area.mean * ratio_se, ratio * area.std_error});
    out.samples = static_cast<std::int64_t>(points.size());
    return out;
}

std::optional<double> exact_volume_integral(const ConvexBody& body, const SubharmonicFn& f)
{
    require_match(body, f);
    const auto poly = f.as_polynomial();
    if (!poly)
        return std::nullopt;
    if (const auto* ball = std::get_if<Ball>(&body.shape())) {
        const Polynomial centered = poly->translated(ball->center);
        double s = 0.0;
        for (const Monomial& m : centered.terms())
            s += m.coefficient * centered_ball_moment(m.powers, ball->radius, false);
        return s;
    }
    if (const auto* box = std::get_if<Box>(&body.shape())) {
        double s = 0.0;
        for (const Monomial& m : poly->terms()) {
            double t = m.coefficient;
            for (std::size_t i = 0; i < m.powers.size(); ++i)
                t *= interval_moment(box->lower[i], box->upper[i], m.powers[i]);
            s += t;
        }
        return s;
    }
    return std::nullopt;
}

std::optional<double> exact_boundary_integral(const ConvexBody& body, const SubharmonicFn& f)
{
    require_match(body, f);
    const auto poly = f.as_polynomial();
    if (!poly)
        return std::nullopt;
    if (const auto* ball = std::get_if<Ball>(&body.shape())) {
        const Polynomial centered = poly->translated(ball->center);
        double s = 0.0;
        for (const Monomial& m : centered.terms())
            s += m.coefficient * centered_ball_moment(m.powers, ball->radius, true);
        return s;
    }
    if (const auto* box = std::get_if<Box>(&body.shape())) {
        const std::size_t n = box->lower.size();
        double s = 0.0;
        for (const Monomial& m : poly->terms())
            for (std::size_t face = 0; face < n; ++face) {
                double rest = m.coefficient;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != face)
                        rest *= interval_moment(box->lower[j], box->upper[j], m.powers[j]);
                s += rest * (std::pow(box->lower[face], m.powers[face]) +
                             std::pow(box->upper[face], m.powers[face]));
            }
        return s;
    }
    return std::nullopt;
}

namespace {

void require_certificate(const ConvexBody& body, const SubharmonicFn& f, const WosConfig& cfg)
{
    const CertificateReport cert = certify(body, f, 4096, 256, cfg.seed);
    if (!cert.ok)
        throw CertificateError("function rejected: " + cert.reason,
                               cert.witness.value_or(Point{}));
}

} // namespace

BoundReport verify_hermite_hadamard(const ConvexBody& body, const SubharmonicFn& f,
                                    const WosConfig& cfg)
{
    require_match(body, f);
    require_certificate(body, f, cfg);
    const int n = body.dimension();
    const Estimate lhs = volume_integral(body, f, cfg);
    const Estimate rhs = boundary_integral(body, f, cfg);
    const Estimate vol = volume(body, cfg);
    const double root = std::pow(vol.mean, 1.0 / n);
    const double root_se = root * vol.std_error / (n * vol.mean);
    const double c = hermite_hadamard_constant();

    const double bound = c * root * rhs.mean;
    const double joint = quadrature_sum(
        {lhs.std_error, c * root * rhs.std_error, c * root_se * rhs.mean});
    BoundReport r = make_report("volume_integral", lhs, bound, joint, "hermite-hadamard");
    r.ratio = lhs.mean / (root * rhs.mean);
    return r;
}

BoundReport verify_via_torsion(const ConvexBody& body, const SubharmonicFn& f,
                               const WosConfig& cfg, std::int64_t boundary_points)
{
    require_match(body, f);
    require_certificate(body, f, cfg);
    const Estimate lhs = volume_integral(body, f, cfg);
    const Estimate rhs = boundary_integral(body, f, cfg);
    const BoundaryMaximum max = max_normal_derivative(body, cfg, boundary_points);
    const Estimate& g = max.estimate;

    const double bound = g.mean * rhs.mean;
    const double joint =
        quadrature_sum({lhs.std_error, g.std_error * rhs.mean, g.mean * rhs.std_error});
    Estimate measured = lhs;
    measured.truncated_fraction = std::max(lhs.truncated_fraction, g.truncated_fraction);
    BoundReport r =
        make_report("volume_integral", measured, bound, joint, "torsion-gradient-chain");
    r.ratio = lhs.mean / rhs.mean;
    return r;
}

} // namespace torsion
