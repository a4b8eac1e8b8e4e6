#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsion/commands.hpp"

using namespace torsion;
using nlohmann::json;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(const RunConfig& cfg)
{
    std::ostringstream out, err;
    const int code = run_command(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunConfig quick(std::string command)
{
    RunConfig c;
    c.command = std::move(command);
    c.wos.samples = 2000;
    c.wos.seed = 5;
    c.boundary_points = 8;
    return c;
}

std::filesystem::path scratch(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_CASE("report bodies are byte-identical across runs")
{
    RunConfig c = quick("verify-hh");
    c.preset = "half-disk-affine";
    const Run a = run(c);
    const Run b = run(c);
    REQUIRE(a.code == 0);
    const json ja = json::parse(a.out), jb = json::parse(b.out);
    CHECK(ja.at("body").dump() == jb.at("body").dump());
    CHECK(ja.at("header").at("tool") == "torsion-bound");
    CHECK(ja.at("body").at("seed") == 5);
    CHECK(ja.at("body").at("config").at("wos").at("samples") == 2000);

    c.wos.workers = 1;
    const Run one = run(c);
    c.wos.workers = 8;
    const Run eight = run(c);
    CHECK(json::parse(one.out).at("body").at("rows").dump() ==
          json::parse(eight.out).at("body").at("rows").dump());
}

TEST_CASE("verification rows carry bound, margin and pass")
{
    RunConfig c = quick("verify-hh");
    c.preset = "unit-ball";
    c.dimension = 3;
    c.function = "shifted-norm";
    const Run r = run(c);
    REQUIRE(r.code == 0);
    const auto rows = json::parse(r.out).at("body").at("rows");
    REQUIRE(rows.size() >= 2);
    bool found = false;
    for (const auto& row : rows) {
        if (row.at("citation") == "hermite-hadamard") {
            found = true;
            CHECK(row.at("pass") == true);
            CHECK(row.at("bound").get<double>() - row.at("value").get<double>() ==
                  doctest::Approx(row.at("margin").get<double>()));
        }
    }
    CHECK(found);
}

TEST_CASE("csv output")
{
    RunConfig c = quick("verify-hh");
    c.preset = "half-disk-affine";
    c.format = "csv";
    const Run r = run(c);
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "quantity,value,stderr,bound,margin,pass,citation,seed");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.substr(line.rfind(',') + 1) == "5");
    }
    CHECK(rows >= 2);

    RunConfig k = quick("constants");
    k.n_max = 2;
    k.format = "csv";
    const Run t = run(k);
    REQUIRE(t.code == 0);
    CHECK(t.out.find("\n2,3.14159265358979") != std::string::npos);
    CHECK(t.out.find(",2.50662827463") != std::string::npos);
}

TEST_CASE("exit codes")
{
    RunConfig bad = quick("verify-hh");
    bad.preset = "no-such-body";
    const Run r = run(bad);
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") == 0);

    RunConfig fmt = quick("constants");
    fmt.format = "xml";
    CHECK(run(fmt).code == 2);

    RunConfig invalid = quick("gradient");
    invalid.preset = "unit-ball";
    invalid.wos.samples = 0;
    CHECK(run(invalid).code == 2);

    // A function negative on the boundary is rejected with its witness.
    RunConfig neg = quick("verify-hh");
    neg.preset = "unit-ball-n2";
    neg.function = scratch("torsion_neg_fn.json",
                           R"({"kind": "affine", "gradient": [1, 0], "constant": 0})")
                       .string();
    const Run n = run(neg);
    CHECK(n.code == 2);
    CHECK(n.err.find(" at (") != std::string::npos);

    // Truncating every walk degrades the estimate: exit 1 and a warning.
    RunConfig trunc = quick("gradient");
    trunc.preset = "unit-ball-n2";
    trunc.wos.max_steps = 1;
    const Run d = run(trunc);
    CHECK(d.code == 1);
    CHECK(d.err.find("degraded") != std::string::npos);
}

TEST_CASE("bodies and functions from JSON files")
{
    const auto body = scratch("torsion_body.json", R"({
        "dimension": 2,
        "shape": {"type": "intersection", "members": [
            {"type": "ball", "center": [0, 0], "radius": 1},
            {"type": "polytope", "half_spaces": [{"normal": [0, -1], "offset": 0}]}
        ]}})");
    const auto fn = scratch("torsion_fn.json",
                            R"({"kind": "affine", "gradient": [0, -1], "constant": 1})");
    RunConfig c = quick("verify-hh");
    c.body = body.string();
    c.function = fn.string();
    const Run r = run(c);
    CHECK(r.code == 0);
    const auto cfg = json::parse(r.out).at("body").at("config");
    CHECK(cfg.at("resolved_body").at("shape").at("type") == "intersection");
    CHECK(cfg.at("resolved_function").at("kind") == "affine");

    const auto out = std::filesystem::temp_directory_path() / "torsion_report.json";
    c.out = out.string();
    const Run to_file = run(c);
    CHECK(to_file.out.empty());
    std::ifstream in(out);
    CHECK(json::parse(in).at("body").at("command") == "verify-hh");
}

TEST_CASE("remaining commands run")
{
    RunConfig g = quick("gradient");
    g.preset = "beck-ellipsoid";
    g.dimension = 2;
    const Run gr = run(g);
    CHECK(gr.code == 0);
    CHECK(json::parse(gr.out).at("body").at("tables").contains("maximum"));

    RunConfig l = quick("lemmas");
    const Run lr = run(l);
    CHECK(lr.code == 0);

    RunConfig e = quick("examples");
    e.n_max = 4;
    const Run er = run(e);
    CHECK(er.code == 0);

    RunConfig k = quick("constants");
    k.n_max = 5;
    const auto table = json::parse(run(k).out).at("body").at("tables").at("constants");
    CHECK(table.size() == 4);
}
