#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "torsion/commands.hpp"

namespace {

void add_shared_options(CLI::App& sub, torsion::RunConfig& cfg, std::optional<int>& n)
{
    sub.add_option("--body", cfg.body, "Body preset name or JSON file");
    sub.add_option("--preset", cfg.preset, "Body preset, or a paired preset such as half-disk-affine");
    sub.add_option("--n", n, "Dimension for dimension-free preset names")->check(CLI::Range(2, 1000));
    sub.add_option("--samples", cfg.wos.samples, "Walks or samples per estimate")
        ->check(CLI::PositiveNumber);
    sub.add_option("--seed", cfg.wos.seed, "Random seed");
    sub.add_option("--shell", cfg.wos.shell_width, "Absorbing shell width, fraction of diameter");
    sub.add_option("--max-steps", cfg.wos.max_steps, "Step cap per walk");
    sub.add_option("--fd-delta", cfg.wos.fd_delta, "Normal probe depth, fraction of diameter");
    sub.add_flag("--richardson", cfg.wos.richardson, "Two-point extrapolation of normal derivatives");
    sub.add_option("--refine-rounds", cfg.wos.refine_rounds, "Local refinement passes");
    sub.add_option("--boundary-points", cfg.boundary_points, "Boundary points screened for maxima")
        ->check(CLI::PositiveNumber);
    sub.add_option("--out", cfg.out, "Output file (default: standard output)");
    sub.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical checks of torsion-function gradient and Hermite-Hadamard bounds "
                 "on convex bodies"};
    app.require_subcommand(1);
    torsion::RunConfig cfg;
    std::optional<int> n;

    auto* verify = app.add_subcommand("verify-hh", "Check the Hermite-Hadamard inequality for (body, f)");
    add_shared_options(*verify, cfg, n);
    verify->add_option("--fn", cfg.function, "Function preset name or JSON file");

    auto* gradient = app.add_subcommand("gradient", "Maximum normal derivative of the torsion function");
    add_shared_options(*gradient, cfg, n);

    auto* lemmas = app.add_subcommand("lemmas", "Hitting-time laws and exit-time bounds");
    add_shared_options(*lemmas, cfg, n);
    lemmas->add_option("--epsilon", cfg.epsilon, "Probe depth for the exit-time bound");

    auto* examples = app.add_subcommand("examples", "Closed-form example table");
    add_shared_options(*examples, cfg, n);
    examples->add_option("--n-min", cfg.n_min, "Smallest dimension");
    examples->add_option("--n-max", cfg.n_max, "Largest dimension (capped at 10)");

    auto* constants = app.add_subcommand("constants", "Dimension constants table");
    add_shared_options(*constants, cfg, n);
    constants->add_option("--n-min", cfg.n_min, "Smallest dimension");
    constants->add_option("--n-max", cfg.n_max, "Largest dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.dimension = n;
    return torsion::run_command(cfg, std::cout, std::cerr);
}
