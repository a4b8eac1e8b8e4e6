#include "torsion/brownian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "torsion/parallel.hpp"
#include "torsion/random.hpp"

namespace torsion {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gauss_kronrod(const std::function<double(double)>& f, double a, double b, double& kronrod,
                   double& gauss)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double fc = f(mid);
    kronrod = fc * kKronrodWeights[7];
    gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double s = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * s;
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * s;
    }
    kronrod *= half;
    gauss *= half;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth)
{
    double k = 0.0, g = 0.0;
    gauss_kronrod(f, a, b, k, g);
    if (std::abs(k - g) <= tol || depth <= 0)
        return k;
    const double m = 0.5 * (a + b);
    return adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1);
}

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be positive");
}

} // namespace

double standard_normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double phi_linear_bound(double x)
{
    return 0.5 + x / std::sqrt(2.0 * std::numbers::pi);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth)
{
    if (a == b)
        return 0.0;
    if (b < a)
        return -integrate_adaptive(f, b, a, abs_tol, max_depth);
    return adaptive(f, a, b, abs_tol, max_depth);
}

HittingTimeLaw::HittingTimeLaw(double epsilon) : epsilon_(epsilon)
{
    require_positive(epsilon, "epsilon");
}

double HittingTimeLaw::cdf(double t) const
{
    require_positive(t, "t");
    // 2 - 2 Phi(x) = erfc(x / sqrt 2), without cancellation for large x.
    return std::erfc(epsilon_ / std::sqrt(t) / std::numbers::sqrt2);
}

double HittingTimeLaw::density(double t) const
{
    require_positive(t, "t");
    return epsilon_ / (std::sqrt(2.0 * std::numbers::pi) * t * std::sqrt(t)) *
           std::exp(-epsilon_ * epsilon_ / (2.0 * t));
}

double HittingTimeLaw::survival_probability(double horizon) const
{
    require_positive(horizon, "T");
    return std::erf(epsilon_ / std::sqrt(horizon) / std::numbers::sqrt2);
}

double HittingTimeLaw::truncated_mean(double horizon) const
{
    require_positive(horizon, "T");
    // With s = eps / sqrt(t): t psi(t) dt = (2 eps^2 / sqrt(2 pi)) e^{-s^2/2} / s^2 ds on
    // [eps / sqrt(T), inf); the integrand is below 1e-300 past s0 + 40.
    const double s0 = epsilon_ / std::sqrt(horizon);
    const double prefactor = 2.0 * epsilon_ * epsilon_ / std::sqrt(2.0 * std::numbers::pi);
    const auto integrand = [](double s) { return std::exp(-0.5 * s * s) / (s * s); };
    const double tol = 1e-12 / prefactor;
    double total = 0.0;
    // Split geometrically so the 1/s^2 peak near small s0 is resolved.
    double lo = s0;
    const double end = s0 + 40.0;
    while (lo < end) {
        const double hi = std::min(end, std::max(2.0 * lo, lo + 0.5));
        total += integrate_adaptive(integrand, lo, hi, tol);
        lo = hi;
    }
    return prefactor * total;
}

double HittingTimeLaw::truncated_mean_bound(double horizon) const
{
    require_positive(horizon, "T");
    return epsilon_ * std::sqrt(2.0 / std::numbers::pi) * std::sqrt(horizon);
}

double HittingTimeLaw::survival_bound(double horizon) const
{
    require_positive(horizon, "T");
    return std::sqrt(2.0 / std::numbers::pi) * epsilon_ / std::sqrt(horizon);
}

HittingSample simulate_hitting_times(const HittingTimeLaw& law, std::int64_t count, double dt,
                                     double horizon, std::uint64_t seed, unsigned workers)
{
    require_positive(dt, "dt");
    require_positive(horizon, "horizon");
    if (count < 1)
        throw std::invalid_argument("count must be >= 1");
    const double eps = law.epsilon();
    if (dt > eps * eps / 100.0)
        throw std::invalid_argument("dt must be <= epsilon^2 / 100");

    const double ratio = horizon / dt;
    const std::int64_t steps = std::abs(ratio - std::round(ratio)) < 1e-9
                                   ? static_cast<std::int64_t>(std::llround(ratio))
                                   : static_cast<std::int64_t>(std::ceil(ratio));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> result(static_cast<std::size_t>(count), nan);
    const RandomStream root(seed);

    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            RandomStream rng = root.substream(p);
            double b = 0.0;
            for (std::int64_t k = 0; k < steps; ++k) {
                const double t0 = static_cast<double>(k) * dt;
                const double h = std::min(dt, horizon - t0);
                const double next = b + std::sqrt(h) * rng.normal();
                bool hit = next >= eps;
                if (!hit) {
                    const double exponent = 2.0 * (eps - b) * (eps - next) / h;
                    // Below exp(-40) the crossing is invisible at 53-bit resolution.
                    if (exponent < 40.0)
                        hit = rng.uniform() < std::exp(-exponent);
                }
                if (hit) {
                    result[p] = t0 + 0.5 * h;
                    break;
                }
                b = next;
            }
        }
    });

    HittingSample sample;
    sample.paths = count;
    sample.horizon = horizon;
    sample.dt = dt;
    for (double t : result) {
        if (std::isnan(t))
            ++sample.censored;
        else
            sample.times.push_back(t);
    }
    return sample;
}

double ks_distance_conditional(const HittingSample& sample, const HittingTimeLaw& law)
{
    if (sample.times.empty())
        throw std::invalid_argument("no hitting times to compare");
    std::vector<double> t = sample.times;
    std::sort(t.begin(), t.end());
    const double norm = law.cdf(sample.horizon);
    const double m = static_cast<double>(t.size());
    double d = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double g = law.cdf(t[i]) / norm;
        d = std::max({d, (i + 1) / m - g, g - i / m});
    }
    return d;
}

} // namespace torsion
