#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "torsion/estimate.hpp"

namespace torsion {

/// One line of a report. Informational rows leave bound, margin and pass empty.
struct ReportRow
{
    std::string quantity;
    double value = 0.0;
    double std_error = 0.0;
    std::optional<double> bound;
    std::optional<double> margin;
    std::optional<bool> pass;
    std::string citation;
    double truncated_fraction = 0.0;
    std::optional<double> ratio;
};

ReportRow row_from(const BoundReport& r);
ReportRow value_row(std::string quantity, double value, std::string citation);

/**
 * Command output. The body (config, rows, tables) depends only on the inputs;
 * the wall-clock timestamp is kept in a separate header.
 */
struct Report
{
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    nlohmann::json tables = nlohmann::json::object();

    bool all_pass() const;
    /// Any row with more than 1% truncated walks.
    bool degraded() const;
};

nlohmann::json report_body(const Report& report);
/// {"header": {"tool", "generated_at"}, "body": report_body(report)}
std::string render_json(const Report& report, const std::string& generated_at);
/// Columns quantity,value,stderr,bound,margin,pass,citation,seed.
std::string render_csv(const Report& report);
/// Current UTC time in ISO 8601.
std::string utc_timestamp();

} // namespace torsion
