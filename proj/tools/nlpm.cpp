// nlpm: command-line driver for the nonlocal Perona-Malik solver.

#include "nlpm/cli.hpp"
#include "nlpm/flow.hpp"
#include "nlpm/linsolve.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

int report(const nlpm::cli::RunOutcome& outcome)
{
    for (const auto& line : outcome.summary) std::cout << line << '\n';
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonlocal Perona-Malik flows: spectral solver, figure presets, image denoising"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::vector<std::string> assignments;
    std::optional<std::uint64_t> seed;
    bool symmetric_ic = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--override", assignments, "key=value parameter override (repeatable)");
        cmd->add_option("--seed", seed, "Noise seed");
    };

    std::size_t spec_n = 256;
    std::string spec_bc = "periodic";
    int spec_dim = 1;
    auto* spectrum = app.add_subcommand("spectrum", "Print the discrete eigenvalue table as CSV");
    spectrum->add_option("--n", spec_n, "Grid size (power of two)");
    spectrum->add_option("--bc", spec_bc, "periodic, dirichlet or neumann");
    spectrum->add_option("--dim", spec_dim, "1 or 2");

    std::string config_path;
    auto* flow = app.add_subcommand("flow", "Run a flow described by a key=value config file");
    flow->add_option("config", config_path, "Config file")->required();
    add_common(flow);

    std::string preset_id;
    auto* preset = app.add_subcommand("preset", "Reproduce a figure experiment");
    preset->add_option("id", preset_id, "fig-eps, fig-regev, fig-kink, fig-kink-osc or teaser-2d")->required();
    preset->add_flag("--symmetric-ic", symmetric_ic, "fig-eps: use 100 x^2 (1-x)^2");
    add_common(preset);

    std::string in_pgm, out_pgm;
    auto* denoise = app.add_subcommand("denoise", "Flow a PGM image with the 2D defaults");
    denoise->add_option("in", in_pgm, "Input PGM")->required();
    denoise->add_option("out", out_pgm, "Output PGM")->required();
    denoise->add_option("--override", assignments, "key=value parameter override (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    nlpm::cli::Overrides overrides{assignments, seed, symmetric_ic};
    try {
        if (spectrum->parsed()) {
            nlpm::cli::write_spectrum_csv(std::cout, spec_n, nlpm::parse_boundary_condition(spec_bc), spec_dim);
            return 0;
        }
        if (flow->parsed()) {
            const bool explicit_out = flow->count("--out") > 0;
            return report(nlpm::cli::run_custom(config_path, explicit_out ? out_dir : std::string(), overrides));
        }
        if (preset->parsed()) return report(nlpm::cli::run_preset(preset_id, out_dir, overrides));
        if (denoise->parsed()) return report(nlpm::cli::run_denoise(in_pgm, out_pgm, overrides));
    } catch (const nlpm::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const nlpm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nlpm::InvalidSize& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const nlpm::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const nlpm::flow::FlowError& e) {
        std::cerr << "solver failure at step " << e.failed_step() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
