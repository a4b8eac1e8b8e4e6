#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace torsion {

/// Monte Carlo controls shared by the walk-on-spheres engine and the samplers.
struct WosConfig
{
    double shell_width = 1e-4;    // absorbing shell, fraction of the body diameter
    std::int64_t max_steps = 100000;
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
    double fd_delta = 1e-2;       // normal-derivative probe depth, fraction of diameter
    bool richardson = false;      // two-point (delta, delta/2) extrapolation
    int refine_rounds = 2;        // local refinement passes for boundary maxima
    unsigned workers = 0;         // 0: TORSION_BOUND_THREADS or hardware default

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

/// Statistical result. stderr is the sample standard deviation over sqrt(samples).
struct Estimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    double truncated_fraction = 0.0;
    bool exact = false;

    /// More than 1% of walks hit the step cap.
    bool degraded() const { return truncated_fraction > 0.01; }

    static Estimate exact_value(double v)
    {
        Estimate e;
        e.mean = v;
        e.exact = true;
        return e;
    }
};

/// Mean and standard error of `values`, accumulated in index order.
Estimate summarize(std::span<const double> values);

/// Estimate scaled by a constant factor.
Estimate scaled(const Estimate& e, double factor);

/// One row of a verification table.
struct BoundReport
{
    std::string quantity;
    Estimate measured;
    double bound_value = 0.0;
    double margin = 0.0;   // bound - measured.mean
    double tolerance = 0.0; // allowed negative margin (4 joint standard errors)
    bool pass = false;
    std::string citation;
    double ratio = 0.0;    // optional sharpness ratio, 0 when not applicable
};

/// Fills margin and pass from the measured value, the bound and the joint
/// standard error; pass iff margin >= -4 * joint_stderr.
BoundReport make_report(std::string quantity, const Estimate& measured, double bound,
                        double joint_stderr, std::string citation);

} // namespace torsion
