#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "torsion/estimate.hpp"
#include "torsion/geometry.hpp"
#include "torsion/report.hpp"
#include "torsion/subharmonic.hpp"

namespace torsion {

/// Resolved command-line settings. Every report embeds to_json(config).
struct RunConfig
{
    std::string command;
    std::string body;     // preset name or path to a body JSON file
    std::string function; // preset name or path to a function JSON file
    std::string preset;   // body preset or paired body/function preset
    std::optional<int> dimension;
    int n_min = 2;
    int n_max = 10;
    WosConfig wos;
    std::int64_t boundary_points = 64;
    double epsilon = 0.0; // 0: a tenth of the inradius
    std::string format = "json";
    std::string out;      // empty: standard output
};

nlohmann::json to_json(const RunConfig& config);

ConvexBody resolve_body(const RunConfig& config);
SubharmonicFn resolve_function(const RunConfig& config, const ConvexBody& body);

Report cmd_verify_hh(const RunConfig& config);
Report cmd_gradient(const RunConfig& config);
Report cmd_lemmas(const RunConfig& config);
Report cmd_examples(const RunConfig& config);
Report cmd_constants(const RunConfig& config);

/// 0 when every checked row passes and no estimate is degraded, else 1.
int exit_code(const Report& report);

/**
 * Runs config.command, writes the report to config.out (or `out`) and
 * returns the exit code: 0 all pass, 1 a bound failed or an estimate is
 * degraded, 2 invalid input.
 */
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace torsion
