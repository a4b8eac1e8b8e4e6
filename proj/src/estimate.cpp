#include "torsion/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace torsion {

void WosConfig::validate() const
{
    if (!(shell_width > 0.0 && shell_width < 1.0))
        throw std::invalid_argument("shell_width must lie in (0, 1)");
    if (samples < 1)
        throw std::invalid_argument("samples must be >= 1");
    if (max_steps < 1)
        throw std::invalid_argument("max_steps must be >= 1");
    if (!(fd_delta > shell_width))
        throw std::invalid_argument("fd_delta must exceed shell_width");
    if (refine_rounds < 0)
        throw std::invalid_argument("refine_rounds must be >= 0");
}

Estimate summarize(std::span<const double> values)
{
    Estimate e;
    e.samples = static_cast<std::int64_t>(values.size());
    if (values.empty())
        return e;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    e.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - e.mean) * (v - e.mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        e.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

Estimate scaled(const Estimate& e, double factor)
{
    Estimate s = e;
    s.mean *= factor;
    s.std_error *= std::abs(factor);
    return s;
}

BoundReport make_report(std::string quantity, const Estimate& measured, double bound,
                        double joint_stderr, std::string citation)
{
    BoundReport r;
    r.quantity = std::move(quantity);
    r.measured = measured;
    r.bound_value = bound;
    r.margin = bound - measured.mean;
    r.tolerance = 4.0 * joint_stderr;
    r.pass = r.margin >= -r.tolerance;
    r.citation = std::move(citation);
    return r;
}

} // namespace torsion
