#include "torsion/wos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "torsion/analytic.hpp"
#include "torsion/parallel.hpp"
#include "torsion/random.hpp"

namespace torsion {

namespace {

// Stream namespaces for the boundary search, kept apart from user streams.
constexpr std::uint64_t kScreenStream = 0x5c4ee11ull;
constexpr std::uint64_t kRefineStream = 0x4ef14eull;
constexpr std::uint64_t kFinalStream = 0xf14a1ull;
constexpr std::uint64_t kBoundarySeed = 0xb0da4ull;
constexpr int kMaxProbeShrinks = 8;

double shell_radius(const ConvexBody& body, const WosConfig& cfg)
{
    return cfg.shell_width * body.diameter();
}

// Remaining torsion after truncation, from the ball comparison bound.
double tail_surrogate(const ConvexBody& body)
{
    return 0.5 * lifetime_bound(body.dimension(), body.volume_upper_bound());
}

Estimate summarize_walks(const std::vector<double>& values, std::int64_t truncated)
{
    Estimate e = summarize(values);
    e.truncated_fraction = values.empty() ? 0.0 : double(truncated) / double(values.size());
    return e;
}

// Runs cfg.samples walks from each start point in `starts`, pairing walk k
// across starts (same substream), and returns per-start walk values.
std::vector<std::vector<double>> paired_walks(const ConvexBody& body,
                                              const std::vector<Point>& starts,
                                              const WosConfig& cfg, std::uint64_t stream,
                                              std::int64_t& truncated)
{
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(body.dimension());
    const double eps = shell_radius(body, cfg);
    const double tail = tail_surrogate(body);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    const auto walks = static_cast<std::size_t>(cfg.samples);
    const RandomStream root = RandomStream(cfg.seed).substream(stream);

    std::vector<std::vector<double>> values(starts.size(), std::vector<double>(walks, 0.0));
    std::vector<unsigned char> cut(walks * starts.size(), 0);

    parallel_for(walks, cfg.workers, [&](std::size_t begin, std::size_t end) {
        Point x(n), dir(n);
        for (std::size_t k = begin; k < end; ++k) {
            for (std::size_t s = 0; s < starts.size(); ++s) {
                RandomStream rng = root.substream(k);
                std::copy(starts[s].begin(), starts[s].end(), x.begin());
                double sum = 0.0;
                bool done = false;
                for (std::int64_t step = 0; step < cfg.max_steps; ++step) {
                    const double r = body.gap(x);
                    if (r <= eps) {
                        done = true;
                        break;
                    }
                    sum += r * r;
                    rng.unit_vector(dir);
                    for (std::size_t i = 0; i < n; ++i)
                        x[i] += r * dir[i];
                }
                double value = sum * scale;
                if (!done) {
                    value += tail;
                    cut[k * starts.size() + s] = 1;
                }
                values[s][k] = value;
            }
        }
    });
    truncated = 0;
    for (unsigned char c : cut)
        truncated += c;
    return values;
}

void require_walk_start(const ConvexBody& body, std::span<const double> x, const WosConfig& cfg)
{
    if (static_cast<int>(x.size()) != body.dimension())
        throw std::invalid_argument("point dimension does not match the body");
    if (!body.contains(x))
        throw std::invalid_argument("point lies outside the body");
    if (body.gap(x) <= shell_radius(body, cfg))
        throw std::invalid_argument("point lies inside the absorbing shell");
}

Point probe_point(const BoundaryPoint& bp, double delta)
{
    Point p(bp.position.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = bp.position[i] + delta * bp.inward_normal[i];
    return p;
}

// Boundary point on the ray from `center` through `target`.
Point radial_projection(const ConvexBody& body, const Point& center, const Point& target)
{
    const std::size_t n = center.size();
    Point dir(n), x(n);
    for (std::size_t i = 0; i < n; ++i)
        dir[i] = target[i] - center[i];
    auto at = [&](double s) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = center[i] + s * dir[i];
        return body.contains(x);
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 64 && at(hi); ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (at(mid) ? lo : hi) = mid;
    }
    at(lo);
    return x;
}

} // namespace

std::vector<double> torsion_walks(const ConvexBody& body, std::span<const double> x,
                                  const WosConfig& cfg, std::uint64_t stream,
                                  std::int64_t* truncated)
{
    require_walk_start(body, x, cfg);
    std::int64_t cut = 0;
    auto values = paired_walks(body, {Point(x.begin(), x.end())}, cfg, stream, cut);
    if (truncated)
        *truncated = cut;
    return std::move(values.front());
}

Estimate torsion_value(const ConvexBody& body, std::span<const double> x, const WosConfig& cfg,
                       std::uint64_t stream)
{
    std::int64_t cut = 0;
    const auto values = torsion_walks(body, x, cfg, stream, &cut);
    return summarize_walks(values, cut);
}

Estimate exit_time_mean(const ConvexBody& body, std::span<const double> x, const WosConfig& cfg,
                        std::uint64_t stream)
{
    return scaled(torsion_value(body, x, cfg, stream), 2.0);
}

Estimate normal_derivative(const ConvexBody& body, const BoundaryPoint& bp, const WosConfig& cfg,
                           std::uint64_t stream)
{
    cfg.validate();
    if (static_cast<int>(bp.position.size()) != body.dimension() ||
        bp.inward_normal.size() != bp.position.size())
        throw std::invalid_argument("boundary point dimension does not match the body");

    double delta = cfg.fd_delta * body.diameter();
    Point probe = probe_point(bp, delta);
    int shrinks = 0;
    while (!body.contains(probe) || (cfg.richardson && !body.contains(probe_point(bp, 0.5 * delta)))) {
        if (++shrinks > kMaxProbeShrinks)
            throw std::invalid_argument("normal probe leaves the body");
        delta *= 0.5;
        probe = probe_point(bp, delta);
    }

    // Walks started in the shell stop at once: u is zero to shell accuracy there.
    std::vector<Point> starts{probe};
    if (cfg.richardson)
        starts.push_back(probe_point(bp, 0.5 * delta));
    std::int64_t cut = 0;
    const auto values = paired_walks(body, starts, cfg, stream, cut);

    std::vector<double> slope(values.front().size());
    for (std::size_t k = 0; k < slope.size(); ++k) {
        const double coarse = values[0][k] / delta;
        slope[k] = cfg.richardson ? 2.0 * values[1][k] / (0.5 * delta) - coarse : coarse;
    }
    Estimate e = summarize(slope);
    e.truncated_fraction = double(cut) / double(slope.size() * starts.size());
    return e;
}

BoundaryMaximum max_normal_derivative(const ConvexBody& body, const WosConfig& cfg,
                                      std::int64_t boundary_samples)
{
    cfg.validate();
    if (boundary_samples < 1)
        throw std::invalid_argument("boundary_samples must be >= 1");
    const double diam = body.diameter();
    const double edge_tol = 1e-6 * diam;

    BoundaryMaximum best;
    best.screened_mean = -std::numeric_limits<double>::infinity();
    double worst_truncation = 0.0;
    auto consider = [&](const BoundaryPoint& bp, std::uint64_t stream) {
        const Estimate e = normal_derivative(body, bp, cfg, stream);
        worst_truncation = std::max(worst_truncation, e.truncated_fraction);
        ++best.evaluated;
        if (e.mean > best.screened_mean) {
            best.screened_mean = e.mean;
            best.location = bp;
        }
    };

    const auto points =
        sample_boundary(body, boundary_samples, mix64(cfg.seed ^ kBoundarySeed));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!body.smooth_at(points[i].position, edge_tol))
            continue;
        consider(points[i], mix64(kScreenStream + i));
    }
    if (best.evaluated == 0)
        throw std::runtime_error("no smooth boundary points were sampled");

    // Local refinement: perturb within a shrinking cap and project back radially.
    const Point center = body.inscribed_ball().first;
    const std::int64_t per_round = std::max<std::int64_t>(8, boundary_samples / 4);
    RandomStream rng = RandomStream(cfg.seed).substream(kRefineStream);
    const std::size_t n = static_cast<std::size_t>(body.dimension());
    double cap = 0.25 * diam;
    std::uint64_t counter = 0;
    for (int round = 0; round < cfg.refine_rounds; ++round, cap *= 0.5) {
        const BoundaryPoint anchor = best.location;
        for (std::int64_t c = 0; c < per_round; ++c) {
            Point dir(n);
            rng.unit_vector(dir);
            const double radius = cap * rng.uniform();
            Point target(n);
            for (std::size_t i = 0; i < n; ++i)
                target[i] = anchor.position[i] + radius * dir[i];
            BoundaryPoint bp;
            bp.position = radial_projection(body, center, target);
            if (!body.smooth_at(bp.position, edge_tol))
                continue;
            bp.inward_normal = body.inward_normal(bp.position);
            consider(bp, mix64(kRefineStream + (++counter)));
        }
    }

    best.estimate = normal_derivative(body, best.location, cfg, kFinalStream);
    best.estimate.truncated_fraction = std::max(best.estimate.truncated_fraction, worst_truncation);
    return best;
}

BoundReport lifetime_bound_check(const ConvexBody& body, double epsilon, const WosConfig& cfg,
                                 int boundary_points)
{
    cfg.validate();
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    if (epsilon >= body.inscribed_ball().second)
        throw std::invalid_argument("epsilon must be smaller than the inradius");
    if (boundary_points < 1)
        throw std::invalid_argument("boundary_points must be >= 1");

    const int n = body.dimension();
    const Estimate vol = volume(body, cfg);
    const double bound = minimized_lifetime_bound(epsilon, n, vol.mean);

    const auto points = sample_boundary(body, boundary_points, mix64(cfg.seed ^ kBoundarySeed));
    bool have = false;
    BoundReport worst;
    double worst_slack = std::numeric_limits<double>::infinity();
    bool all_pass = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point x = probe_point(points[i], epsilon);
        if (!body.contains(x) || body.gap(x) <= shell_radius(body, cfg))
            continue;
        const Estimate e = exit_time_mean(body, x, cfg, mix64(kScreenStream + i));
        BoundReport r = make_report("exit_time_at_depth", e, bound, e.std_error, "lifetime-bound");
        all_pass = all_pass && r.pass;
        const double slack = r.margin + r.tolerance;
        if (slack < worst_slack) {
            worst_slack = slack;
            worst = r;
            have = true;
        }
    }
    if (!have)
        throw std::invalid_argument("no boundary point admits a probe at this depth");
    worst.pass = all_pass;
    return worst;
}

} // namespace torsion
