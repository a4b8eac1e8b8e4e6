#include "torsion/report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <sstream>

namespace torsion {

namespace {

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::json row_json(const ReportRow& r)
{
    nlohmann::json j = {{"quantity", r.quantity},
                        {"value", r.value},
                        {"stderr", r.std_error},
                        {"citation", r.citation}};
    if (r.bound)
        j["bound"] = *r.bound;
    if (r.margin)
        j["margin"] = *r.margin;
    if (r.pass)
        j["pass"] = *r.pass;
    if (r.truncated_fraction > 0.0)
        j["truncated_fraction"] = r.truncated_fraction;
    if (r.ratio)
        j["ratio"] = *r.ratio;
    return j;
}

} // namespace

ReportRow row_from(const BoundReport& r)
{
    ReportRow row;
    row.quantity = r.quantity;
    row.value = r.measured.mean;
    row.std_error = r.measured.std_error;
    row.bound = r.bound_value;
    row.margin = r.margin;
    row.pass = r.pass;
    row.citation = r.citation;
    row.truncated_fraction = r.measured.truncated_fraction;
    if (r.ratio != 0.0)
        row.ratio = r.ratio;
    return row;
}

ReportRow value_row(std::string quantity, double value, std::string citation)
{
    ReportRow row;
    row.quantity = std::move(quantity);
    row.value = value;
    row.citation = std::move(citation);
    return row;
}

bool Report::all_pass() const
{
    for (const ReportRow& r : rows)
        if (r.pass && !*r.pass)
            return false;
    return true;
}

bool Report::degraded() const
{
    for (const ReportRow& r : rows)
        if (r.truncated_fraction > 0.01)
            return true;
    return false;
}

nlohmann::json report_body(const Report& report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& r : report.rows)
        rows.push_back(row_json(r));
    return {{"command", report.command},
            {"config", report.config},
            {"seed", report.seed},
            {"all_pass", report.all_pass()},
            {"degraded", report.degraded()},
            {"rows", rows},
            {"tables", report.tables}};
}

std::string render_json(const Report& report, const std::string& generated_at)
{
    const nlohmann::json doc = {
        {"header", {{"tool", "torsion-bound"}, {"generated_at", generated_at}}},
        {"body", report_body(report)}};
    return doc.dump(2) + "\n";
}

std::string render_csv(const Report& report)
{
    std::ostringstream out;
    out << "quantity,value,stderr,bound,margin,pass,citation,seed\n";
    for (const ReportRow& r : report.rows) {
        out << csv_field(r.quantity) << ',' << format_double(r.value) << ','
            << format_double(r.std_error) << ',' << (r.bound ? format_double(*r.bound) : "")
            << ',' << (r.margin ? format_double(*r.margin) : "") << ','
            << (r.pass ? (*r.pass ? "true" : "false") : "") << ',' << csv_field(r.citation)
            << ',' << report.seed << '\n';
    }
    return out.str();
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace torsion
