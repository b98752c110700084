#pragma once

// Experiment front end: figure presets, key=value run configurations, and
// the CSV/PGM output manifest shared by both.

#include "nlpm/errors.hpp"
#include "nlpm/flow_config.hpp"
#include "nlpm/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlpm::cli {

// Bad command line (unknown preset, malformed flag). Exit status 2.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Overrides {
    std::vector<std::string> assignments; // key=value, applied in order
    std::optional<std::uint64_t> seed;
    bool symmetric_ic = false; // fig-eps: 100 x^2 (1-x)^2 instead of 100 x^2 (1-x^2)
};

struct RunOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

const std::vector<std::string>& preset_ids();

RunOutcome run_preset(std::string_view id, const std::filesystem::path& out_dir, const Overrides& overrides = {});

struct CustomConfig {
    FlowConfig flow;
    std::size_t n = 0;
    int dim = 1;
    std::string ic;
    double noise = 0.0;
    std::filesystem::path out = ".";
    std::size_t n_line = 0; // config line that set n, for error reports
    std::size_t ic_line = 0;
};

// Line-oriented key=value text; '#' starts a comment line.
CustomConfig parse_config(std::istream& in);

// `out_dir`, when non-empty, replaces the config's out key.
RunOutcome run_custom(const std::filesystem::path& config_path, const std::filesystem::path& out_dir = {},
                      const Overrides& overrides = {});

// Flows a PGM with the 2D denoising defaults and writes the result.
RunOutcome run_denoise(const std::filesystem::path& input, const std::filesystem::path& output,
                       const Overrides& overrides = {});

// Named 1D initial states: const, zero, sin2pi, regev, hat, hat-osc, poly, poly-symmetric.
// Returns nullopt for an unknown name.
std::optional<GridField> named_state(std::string_view name, std::size_t n, BoundaryCondition bc);

// Eigenvalue table as CSV (index, mode, eigenvalue).
void write_spectrum_csv(std::ostream& out, std::size_t n, BoundaryCondition bc, int dim);

} // namespace nlpm::cli
