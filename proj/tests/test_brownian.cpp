#include "doctest.h"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "torsion/brownian.hpp"

using namespace torsion;

namespace {

const boost::math::normal_distribution<double> unit_normal;

double oracle_cdf(double eps, double t)
{
    return 2.0 * boost::math::cdf(boost::math::complement(unit_normal, eps / std::sqrt(t)));
}

// Partial moment int_0^T t psi(t) dt in closed form:
// eps sqrt(T) sqrt(2/pi) exp(-eps^2 / 2T) - 2 eps^2 (1 - Phi(eps / sqrt T)).
double oracle_truncated_mean(double eps, double horizon)
{
    const double s = eps / std::sqrt(horizon);
    return eps * std::sqrt(horizon) * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * s * s) -
           2.0 * eps * eps * boost::math::cdf(boost::math::complement(unit_normal, s));
}

} // namespace

TEST_CASE("normal CDF agrees with Boost")
{
    for (double x = -8.0; x <= 8.0; x += 0.173)
        CHECK(standard_normal_cdf(x) ==
              doctest::Approx(boost::math::cdf(unit_normal, x)).epsilon(1e-14));
    CHECK(phi_linear_bound(0.7) >= standard_normal_cdf(0.7));
}

TEST_CASE("hitting-time CDF and density")
{
    std::mt19937_64 eng(1);
    std::uniform_real_distribution<double> u(-3.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double eps = std::pow(10.0, u(eng));
        const double t = std::pow(10.0, u(eng) + 1.0);
        const HittingTimeLaw law(eps);
        CHECK(law.cdf(t) == doctest::Approx(oracle_cdf(eps, t)).epsilon(1e-13));
        // Depends on (eps, t) only through eps / sqrt(t).
        const HittingTimeLaw scaled(2.0 * eps);
        CHECK(scaled.cdf(4.0 * t) == doctest::Approx(law.cdf(t)).epsilon(1e-14));
        CHECK(law.survival_probability(t) == doctest::Approx(1.0 - law.cdf(t)).epsilon(1e-12));
        CHECK(law.density(t) >= 0.0);
    }
    // cdf' = density on a log grid, central differences.
    const HittingTimeLaw law(0.3);
    for (double lt = -4.0; lt <= 2.0; lt += 0.25) {
        const double t = std::pow(10.0, lt);
        const double h = 1e-5 * t;
        const double fd = (law.cdf(t + h) - law.cdf(t - h)) / (2 * h);
        CHECK(fd == doctest::Approx(law.density(t)).epsilon(1e-6));
    }
}

TEST_CASE("density mode is eps^2 / 3")
{
    for (double eps : {0.1, 0.5, 1.0, 3.0}) {
        const HittingTimeLaw law(eps);
        // Root of d/dt log psi = -3/(2t) + eps^2/(2t^2), bracketed around the mode.
        auto slope = [&](double t) { return -1.5 / t + eps * eps / (2 * t * t); };
        boost::uintmax_t iters = 200;
        const auto [lo, hi] = boost::math::tools::toms748_solve(
            slope, 0.05 * eps * eps, 5.0 * eps * eps, boost::math::tools::eps_tolerance<double>(50),
            iters);
        CHECK(law.mode() == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
    }
}

TEST_CASE("truncated mean agrees with the closed form and Boost quadrature")
{
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> u(-2.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double eps = std::pow(10.0, u(eng));
        const double horizon = std::pow(10.0, u(eng));
        const HittingTimeLaw law(eps);
        const double oracle = oracle_truncated_mean(eps, horizon);
        CHECK(law.truncated_mean(horizon) ==
              doctest::Approx(oracle).epsilon(1e-9).scale(eps * std::sqrt(horizon)));
    }
    const HittingTimeLaw law(0.4);
    const double gk = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return t * law.density(t); }, 0.0, 2.0, 20, 1e-14);
    CHECK(law.truncated_mean(2.0) == doctest::Approx(gk).epsilon(1e-10));
}

TEST_CASE("bounds on the partial moment and the survival probability")
{
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-3.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const HittingTimeLaw law(std::pow(10.0, u(eng)));
        const double horizon = std::pow(10.0, u(eng));
        CHECK(law.truncated_mean(horizon) < law.truncated_mean_bound(horizon));
        CHECK(law.survival_probability(horizon) <= law.survival_bound(horizon));
    }
}

TEST_CASE("simulated hitting times follow the reflection-principle law")
{
    const HittingTimeLaw law(0.2);
    const auto sample = simulate_hitting_times(law, 20000, 4e-4, 1.0, 7, 0);
    CHECK(sample.paths == 20000);
    CHECK(sample.censored + static_cast<std::int64_t>(sample.times.size()) == sample.paths);
    const double ks = ks_distance_conditional(sample, law);
    // KS critical value at significance 1e-3.
    CHECK(ks < 1.9495 / std::sqrt(double(sample.times.size())));
    const double p = law.survival_probability(1.0);
    CHECK(std::abs(sample.censored_fraction() - p) < 4 * std::sqrt(p * (1 - p) / sample.paths));

    // Worker count does not change the sample.
    const auto one = simulate_hitting_times(law, 3000, 4e-4, 1.0, 9, 1);
    const auto many = simulate_hitting_times(law, 3000, 4e-4, 1.0, 9, 8);
    CHECK(one.times == many.times);
    CHECK(one.censored == many.censored);

    CHECK_THROWS_AS(simulate_hitting_times(law, 10, 1e-2, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(HittingTimeLaw(0.0), std::invalid_argument);
    CHECK_THROWS_AS(law.cdf(-1.0), std::invalid_argument);
}

TEST_CASE("adaptive quadrature")
{
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(2.0 / 3).epsilon(1e-10));
}
