#include "torsion/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "torsion/analytic.hpp"
#include "torsion/body_json.hpp"
#include "torsion/brownian.hpp"
#include "torsion/hh.hpp"
#include "torsion/presets.hpp"
#include "torsion/random.hpp"
#include "torsion/wos.hpp"

namespace torsion {

namespace {

constexpr int kDominationPoints = 8;
constexpr double kHittingDt = 1e-4;
constexpr double kHittingEpsilon = 0.1;
constexpr double kHittingHorizon = 1.0;

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in '" + path + "': " + e.what());
    }
}

bool is_file(const std::string& s)
{
    std::error_code ec;
    return !s.empty() && std::filesystem::is_regular_file(s, ec);
}

std::string body_name(const RunConfig& c)
{
    if (!c.preset.empty()) {
        if (auto pair = pair_preset(c.preset))
            return pair->body;
        return c.preset;
    }
    return c.body;
}

std::string function_name(const RunConfig& c)
{
    if (!c.function.empty())
        return c.function;
    if (!c.preset.empty())
        if (auto pair = pair_preset(c.preset))
            return pair->function;
    return "constant";
}

Report start_report(const RunConfig& config, const std::string& command)
{
    Report r;
    r.command = command;
    r.seed = config.wos.seed;
    r.config = to_json(config);
    r.config["command"] = command;
    return r;
}

ReportRow checked_row(std::string quantity, double value, double bound, bool pass,
                      std::string citation)
{
    ReportRow row = value_row(std::move(quantity), value, std::move(citation));
    row.bound = bound;
    row.margin = bound - value;
    row.pass = pass;
    return row;
}

std::string grid_label(const char* name, double eps, double horizon)
{
    std::ostringstream s;
    s << name << "[eps=" << eps << ",T=" << horizon << ']';
    return s.str();
}

} // namespace

nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json wos = {{"shell_width", c.wos.shell_width}, {"max_steps", c.wos.max_steps},
                          {"samples", c.wos.samples},         {"seed", c.wos.seed},
                          {"fd_delta", c.wos.fd_delta},       {"richardson", c.wos.richardson},
                          {"refine_rounds", c.wos.refine_rounds}};
    nlohmann::json j = {{"command", c.command},
                        {"body", c.body},
                        {"function", c.function},
                        {"preset", c.preset},
                        {"n_min", c.n_min},
                        {"n_max", c.n_max},
                        {"wos", wos},
                        {"boundary_points", c.boundary_points},
                        {"epsilon", c.epsilon},
                        {"format", c.format}};
    j["dimension"] = c.dimension ? nlohmann::json(*c.dimension) : nlohmann::json(nullptr);
    return j;
}

ConvexBody resolve_body(const RunConfig& config)
{
    const std::string name = body_name(config);
    if (name.empty())
        throw std::invalid_argument("no body given; use --body or --preset");
    if (is_file(name))
        return body_from_json(read_json_file(name));
    return body_preset(name, config.dimension);
}

SubharmonicFn resolve_function(const RunConfig& config, const ConvexBody& body)
{
    const std::string name = function_name(config);
    SubharmonicFn f = is_file(name) ? function_from_json(read_json_file(name))
                                    : function_preset(name, body);
    if (f.dimension() != body.dimension())
        throw std::invalid_argument("function and body dimensions differ");
    return f;
}

Report cmd_verify_hh(const RunConfig& config)
{
    Report report = start_report(config, "verify-hh");
    const ConvexBody body = resolve_body(config);
    const SubharmonicFn f = resolve_function(config, body);
    report.config["resolved_body"] = body_to_json(body);
    report.config["resolved_function"] = f.to_json();

    const CertificateReport cert = certify(body, f, 4096, 256, config.wos.seed);
    ReportRow cert_row = value_row("boundary_minimum", cert.min_boundary_value, "certificate");
    cert_row.bound = -cert.tolerance;
    cert_row.margin = cert.min_boundary_value + cert.tolerance;
    cert_row.pass = cert.ok;
    report.rows.push_back(cert_row);
    if (!cert.ok)
        throw CertificateError("function rejected: " + cert.reason, cert.witness.value_or(Point{}));

    report.rows.push_back(row_from(verify_hermite_hadamard(body, f, config.wos)));
    report.rows.push_back(
        row_from(verify_via_torsion(body, f, config.wos, config.boundary_points)));
    return report;
}

Report cmd_gradient(const RunConfig& config)
{
    Report report = start_report(config, "gradient");
    const ConvexBody body = resolve_body(config);
    report.config["resolved_body"] = body_to_json(body);
    const int n = body.dimension();
    const Estimate vol = volume(body, config.wos);
    const BoundaryMaximum max = max_normal_derivative(body, config.wos, config.boundary_points);

    BoundReport simplified = make_report("max_normal_derivative", max.estimate,
                                         gradient_bound(n, vol.mean), max.estimate.std_error,
                                         "gradient-bound");
    simplified.ratio = max.estimate.mean / std::pow(vol.mean, 1.0 / n);
    report.rows.push_back(row_from(simplified));
    report.rows.push_back(row_from(make_report("max_normal_derivative", max.estimate,
                                               gradient_bound_unsimplified(n, vol.mean),
                                               max.estimate.std_error,
                                               "gradient-bound-unsimplified")));
    ReportRow v = value_row("volume", vol.mean, vol.exact ? "exact" : "monte-carlo");
    v.std_error = vol.std_error;
    report.rows.push_back(v);
    report.tables["maximum"] = {{"position", max.location.position},
                                {"inward_normal", max.location.inward_normal},
                                {"screened_mean", max.screened_mean},
                                {"evaluated", max.evaluated}};
    return report;
}

Report cmd_lemmas(const RunConfig& config)
{
    Report report = start_report(config, "lemmas");

    // Closed-form hitting-time bounds on a fixed grid.
    for (double eps : {0.05, 0.1, 0.5, 1.0})
        for (double horizon : {0.01, 0.1, 1.0, 10.0}) {
            const HittingTimeLaw law(eps);
            const double tm = law.truncated_mean(horizon);
            const double tb = law.truncated_mean_bound(horizon);
            report.rows.push_back(checked_row(grid_label("truncated_mean", eps, horizon), tm, tb,
                                              tm <= tb, "hitting-time-partial-moment"));
            const double sp = law.survival_probability(horizon);
            const double sb = law.survival_bound(horizon);
            report.rows.push_back(checked_row(grid_label("survival", eps, horizon), sp, sb,
                                              sp <= sb, "hitting-time-survival"));
        }

    // Simulated hitting times against the reflection-principle law.
    {
        const HittingTimeLaw law(kHittingEpsilon);
        const HittingSample sample =
            simulate_hitting_times(law, config.wos.samples, kHittingDt, kHittingHorizon,
                                   config.wos.seed, config.wos.workers);
        const double hits = static_cast<double>(sample.times.size());
        const double ks = ks_distance_conditional(sample, law);
        // Asymptotic KS critical value at significance 1e-3.
        const double critical = 1.9495 / std::sqrt(std::max(hits, 1.0));
        report.rows.push_back(checked_row("hitting_time_ks_distance", ks, critical, ks <= critical,
                                          "reflection-principle"));
        const double p = law.survival_probability(kHittingHorizon);
        const double se = std::sqrt(p * (1.0 - p) / double(sample.paths));
        ReportRow censored = checked_row("censored_fraction", sample.censored_fraction(), p,
                                         std::abs(sample.censored_fraction() - p) <= 4.0 * se,
                                         "reflection-principle");
        censored.std_error = se;
        report.rows.push_back(censored);
    }

    // Exit times near and away from the boundary of the configured body.
    RunConfig with_default = config;
    if (body_name(config).empty())
        with_default.body = "unit-ball-n2";
    const ConvexBody body = resolve_body(with_default);
    report.config["resolved_body"] = body_to_json(body);
    const int n = body.dimension();
    const double eps =
        config.epsilon > 0.0 ? config.epsilon : 0.1 * body.inscribed_ball().second;
    report.rows.push_back(row_from(lifetime_bound_check(body, eps, config.wos)));

    const Estimate vol = volume(body, config.wos);
    const double cap = lifetime_bound(n, vol.mean);
    std::vector<Point> points{body.inscribed_ball().first};
    for (const Point& x : sample_interior(body, kDominationPoints, mix64(config.wos.seed ^ 0xd0)))
        if (body.gap(x) > config.wos.shell_width * body.diameter())
            points.push_back(x);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Estimate e = exit_time_mean(body, points[i], config.wos, i);
        report.rows.push_back(row_from(make_report(i == 0 ? "exit_time_at_center" : "exit_time",
                                                   e, cap, e.std_error, "ball-domination")));
    }
    return report;
}

Report cmd_examples(const RunConfig& config)
{
    Report report = start_report(config, "examples");
    const int n_max = std::max(config.n_min, std::min(config.n_max, 10));
    nlohmann::json ellipsoids = nlohmann::json::array();
    for (int n = config.n_min; n <= n_max; ++n) {
        const EllipsoidExample e = ellipsoid_torsion(n);
        const std::string tag = "[n=" + std::to_string(n) + "]";
        report.rows.push_back(value_row("ellipsoid_torsion_coefficient" + tag, e.coefficient,
                                        "ellipsoid-example"));
        ReportRow grad = value_row("ellipsoid_max_gradient" + tag, e.max_gradient,
                                   "ellipsoid-example-corrected");
        report.rows.push_back(grad);
        report.rows.push_back(value_row("ellipsoid_max_gradient_as_stated" + tag,
                                        e.stated_max_gradient, "ellipsoid-example-as-stated"));
        report.rows.push_back(
            value_row("ellipsoid_gradient_ratio" + tag, e.ratio, "ellipsoid-example-corrected"));
        ellipsoids.push_back({{"n", n},
                              {"semi_axes", e.semi_axes},
                              {"laplacian_of_defining_function", e.laplacian_of_defining_function},
                              {"coefficient", e.coefficient},
                              {"max_gradient", e.max_gradient},
                              {"stated_max_gradient", e.stated_max_gradient},
                              {"defining_max_gradient", e.defining_max_gradient},
                              {"volume_root", e.volume_root},
                              {"ratio", e.ratio},
                              {"stated_ratio", e.stated_ratio}});
    }
    report.tables["ellipsoid"] = ellipsoids;

    const HalfDiskExample h = half_disk_example();
    report.rows.push_back(value_row("half_disk_volume_integral", h.lhs, "half-disk-example"));
    report.rows.push_back(value_row("half_disk_boundary_integral", h.rhs_surface,
                                    "half-disk-example"));
    ReportRow ratio = checked_row("half_disk_ratio", h.ratio, hermite_hadamard_constant(),
                                  h.ratio <= hermite_hadamard_constant(), "half-disk-example");
    report.rows.push_back(ratio);

    nlohmann::json balls = nlohmann::json::array();
    for (int n = config.n_min; n <= n_max; ++n) {
        const double grad = ball_max_gradient(n, 1.0);
        const double ratio_n = grad / std::pow(omega(n), 1.0 / n);
        report.rows.push_back(value_row("unit_ball_gradient_ratio[n=" + std::to_string(n) + "]",
                                        ratio_n, "ball-example"));
        balls.push_back({{"n", n},
                         {"torsion_at_center", ball_torsion(n, 1.0, 0.0)},
                         {"max_gradient", grad},
                         {"ratio", ratio_n},
                         {"cn_lower_bound", cn_lower_bound(n)},
                         {"cn_uniform_lower_bound", cn_uniform_lower_bound(n)},
                         {"half_over_sqrt_n", 0.5 / std::sqrt(double(n))}});
    }
    report.tables["ball"] = balls;
    return report;
}

Report cmd_constants(const RunConfig& config)
{
    Report report = start_report(config, "constants");
    if (config.n_min < 2 || config.n_max < config.n_min)
        throw std::invalid_argument("need 2 <= n_min <= n_max");
    const double lower = std::sqrt(2.0 * std::numbers::pi);
    const double upper = std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
    nlohmann::json table = nlohmann::json::array();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int n = config.n_min; n <= config.n_max; ++n) {
        const DimensionConstants c = dimension_constants(n);
        lo = std::min(lo, c.normalized);
        hi = std::max(hi, c.normalized);
        table.push_back({{"n", c.n},
                         {"omega_n", c.omega_n},
                         {"normalized", c.normalized},
                         {"gradient_constant", c.gradient_constant},
                         {"raw_gradient_constant", c.raw_gradient_constant},
                         {"cn_lower_bound", c.cn_lower}});
    }
    report.tables["constants"] = table;
    // The lower end is attained at n = 2, so allow rounding there.
    report.rows.push_back(checked_row("normalized_constant_min", lo, lower,
                                      lo >= lower * (1.0 - 1e-12), "unit-ball-volume-lower"));
    report.rows.back().margin = lo - lower;
    report.rows.push_back(
        checked_row("normalized_constant_max", hi, upper, hi <= upper, "unit-ball-volume-limit"));
    return report;
}

int exit_code(const Report& report)
{
    return report.all_pass() && !report.degraded() ? 0 : 1;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        config.wos.validate();
        if (config.format != "json" && config.format != "csv")
            throw std::invalid_argument("format must be json or csv");
        Report report;
        if (config.command == "verify-hh")
            report = cmd_verify_hh(config);
        else if (config.command == "gradient")
            report = cmd_gradient(config);
        else if (config.command == "lemmas")
            report = cmd_lemmas(config);
        else if (config.command == "examples")
            report = cmd_examples(config);
        else if (config.command == "constants")
            report = cmd_constants(config);
        else
            throw std::invalid_argument("unknown command '" + config.command + "'");

        std::string text;
        if (config.format == "json")
            text = render_json(report, utc_timestamp());
        else if (config.command == "constants")
            text = constants_csv(config.n_min, config.n_max);
        else
            text = render_csv(report);

        if (config.out.empty()) {
            out << text;
        } else {
            std::ofstream file(config.out);
            if (!file)
                throw std::invalid_argument("cannot write '" + config.out + "'");
            file << text;
        }
        if (report.degraded())
            err << "warning: more than 1% of walks were truncated; results are degraded\n";
        return exit_code(report);
    } catch (const CertificateError& e) {
        err << "error: " << e.what();
        if (!e.witness().empty()) {
            err << " at (";
            for (std::size_t i = 0; i < e.witness().size(); ++i)
                err << (i ? ", " : "") << e.witness()[i];
            err << ')';
        }
        err << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace torsion
