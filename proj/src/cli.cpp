#include "nlpm/cli.hpp"

#include "nlpm/diagnostics.hpp"
#include "nlpm/flow.hpp"
#include "nlpm/imageio.hpp"
#include "nlpm/spectral.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

namespace nlpm::cli {

namespace {

constexpr double pi = std::numbers::pi;

using imageio::CsvColumn;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
std::optional<T> parse_number(std::string_view text)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
    return value;
}

std::string format_g(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ---- experiment description -------------------------------------------------

struct Experiment {
    std::string id;
    std::string stem;
    std::string ic;
    std::size_t n = 256;
    std::vector<double> epsilons;
    FlowConfig cfg;
    std::vector<std::size_t> snapshots; // extra state columns, by step
    double noise = 0.0;                 // 2D only
};

Experiment make_preset(std::string_view id)
{
    Experiment e;
    e.id = std::string(id);
    e.cfg.formulation = Formulation::Integrated;
    e.cfg.bc = BoundaryCondition::Periodic;
    e.cfg.h_t = 0.06;
    e.cfg.steps = 100;
    if (id == "fig-eps") {
        e.stem = "eps";
        e.ic = "poly";
        e.epsilons = {0.0, 0.1, 0.2, 0.3};
    } else if (id == "fig-regev") {
        e.stem = "regev";
        e.ic = "regev";
        e.epsilons = {0.3};
        e.cfg.steps = 400;
        e.snapshots = {0, 25, 50, 100, 200, 400};
    } else if (id == "fig-kink") {
        e.stem = "kink";
        e.ic = "hat";
        e.epsilons = {0.0, 0.1, 0.2, 0.3};
    } else if (id == "fig-kink-osc") {
        e.stem = "kink_osc";
        e.ic = "hat-osc";
        e.epsilons = {0.3};
        e.cfg.h_t = 0.01;
        e.cfg.steps = 200;
    } else if (id == "teaser-2d") {
        e.stem = "teaser";
        e.ic = "cartoon";
        e.n = 128;
        e.epsilons = {0.6};
        e.noise = 0.15;
        e.cfg.formulation = Formulation::Divergence;
        e.cfg.bc = BoundaryCondition::Neumann;
        e.cfg.h_t = 1e-5;
        e.cfg.steps = 12;
        e.cfg.seed = 7;
    } else {
        throw UsageError("unknown preset '" + std::string(id) + "'");
    }
    return e;
}

void apply_overrides(Experiment& e, const Overrides& o)
{
    for (const auto& assignment : o.assignments) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value", 0);
        const std::string key = trim(std::string_view(assignment).substr(0, eq));
        const std::string value = trim(std::string_view(assignment).substr(eq + 1));
        const auto bad = [&] { return ConfigError("cannot parse override value '" + value + "' for " + key, 0); };
        if (key == "epsilon") {
            const auto v = parse_number<double>(value);
            if (!v) throw bad();
            e.epsilons = {*v};
        } else if (key == "gamma") {
            const auto v = parse_number<double>(value);
            if (!v) throw bad();
            e.cfg.gamma_override = *v;
        } else if (key == "ht") {
            const auto v = parse_number<double>(value);
            if (!v) throw bad();
            e.cfg.h_t = *v;
        } else if (key == "steps") {
            const auto v = parse_number<std::size_t>(value);
            if (!v) throw bad();
            e.cfg.steps = *v;
        } else if (key == "tol") {
            const auto v = parse_number<double>(value);
            if (!v) throw bad();
            e.cfg.solver_tol = *v;
        } else if (key == "max_iter") {
            const auto v = parse_number<std::size_t>(value);
            if (!v) throw bad();
            e.cfg.solver_max_iter = *v;
        } else if (key == "seed") {
            const auto v = parse_number<std::uint64_t>(value);
            if (!v) throw bad();
            e.cfg.seed = *v;
        } else if (key == "n") {
            const auto v = parse_number<std::size_t>(value);
            if (!v) throw bad();
            e.n = *v;
        } else if (key == "noise") {
            const auto v = parse_number<double>(value);
            if (!v) throw bad();
            e.noise = *v;
        } else if (key == "solver") {
            try {
                e.cfg.solver = parse_solver_choice(value);
            } catch (const InvalidArgument&) {
                throw bad();
            }
        } else {
            throw ConfigError("unknown override key '" + key + "'", 0);
        }
    }
    if (o.seed) e.cfg.seed = *o.seed;
    if (o.symmetric_ic && e.ic == "poly") e.ic = "poly-symmetric";
}

// ---- running ------------------------------------------------------------------

struct RunData {
    GridField initial;
    GridField final_state;
    std::vector<diagnostics::DiagnosticsRecord> records;
    std::vector<linsolve::SolveReport> reports; // index = step - 1
    std::map<std::size_t, GridField> snapshots;
};

RunData execute(const GridField& u0, const FlowConfig& cfg, const spectral::Spectrum& s,
                const std::vector<std::size_t>& snapshot_steps)
{
    RunData run;
    run.initial = u0;
    const std::set<std::size_t> wanted(snapshot_steps.begin(), snapshot_steps.end());
    if (wanted.count(0)) run.snapshots.emplace(0, u0);
    auto result = flow::run_flow(u0, cfg, s, [&](std::size_t step, const GridField& state, const auto& report) {
        run.reports.push_back(report);
        if (wanted.count(step)) run.snapshots.emplace(step, state);
    });
    run.final_state = std::move(result.state);
    run.records = std::move(result.records);
    return run;
}

std::vector<std::string> manifest(const Experiment& e, const FlowConfig& cfg)
{
    return {"experiment=" + e.id + " ic=" + e.ic + " n=" + std::to_string(e.n) +
                (e.noise > 0.0 ? " noise=" + format_g(e.noise) : std::string()),
            cfg.describe()};
}

std::filesystem::path write_diagnostics(const std::filesystem::path& path, const RunData& run,
                                        const std::vector<std::string>& comments)
{
    std::vector<CsvColumn> cols = {{"step", {}},
                                   {"time", {}},
                                   {"mean_of_gradient", {}},
                                   {"h1_seminorm_sq", {}},
                                   {"l2_sq", {}},
                                   {"dissipation_accum", {}},
                                   {"conservation_residual", {}},
                                   {"total_variation", {}},
                                   {"max_gradient", {}},
                                   {"solver_iterations", {}},
                                   {"solver_residual", {}},
                                   {"preconditioner_coefficient", {}}};
    for (const auto& r : run.records) {
        cols[0].values.push_back(static_cast<double>(r.step));
        cols[1].values.push_back(r.time);
        cols[2].values.push_back(r.mean_of_gradient);
        cols[3].values.push_back(r.h1_seminorm_sq);
        cols[4].values.push_back(r.l2_sq);
        cols[5].values.push_back(r.dissipation_accum);
        cols[6].values.push_back(r.conservation_residual);
        cols[7].values.push_back(r.total_variation);
        cols[8].values.push_back(r.max_gradient);
        const bool has_report = r.step > 0 && r.step <= run.reports.size();
        const auto rep = has_report ? run.reports[r.step - 1] : linsolve::SolveReport{};
        cols[9].values.push_back(static_cast<double>(rep.iterations));
        cols[10].values.push_back(rep.relative_residual);
        cols[11].values.push_back(rep.preconditioner_coefficient);
    }
    imageio::write_csv(path, cols, comments);
    return path;
}

// State CSV for 1D runs: x, u0, u, du0, du (+ snapshot columns).
std::filesystem::path write_state_1d(const std::filesystem::path& path, const RunData& run, double mean,
                                     const spectral::Spectrum& s, const std::vector<std::string>& comments)
{
    std::vector<CsvColumn> cols(5);
    cols[0] = {"x", {}};
    for (std::size_t j = 0; j < run.initial.n(); ++j) cols[0].values.push_back(run.initial.node(j));
    cols[1] = {"u0", run.initial.data()};
    cols[2] = {"u", run.final_state.data()};
    cols[3] = {"du0", flow::differentiate_state(run.initial, mean, s).data()};
    cols[4] = {"du", flow::differentiate_state(run.final_state, mean, s).data()};
    for (const auto& [step, state] : run.snapshots) {
        cols.push_back({"u_step" + std::to_string(step), state.data()});
        cols.push_back({"du_step" + std::to_string(step), flow::differentiate_state(state, mean, s).data()});
    }
    imageio::write_csv(path, cols, comments);
    return path;
}

// Image initial conditions are given in image space; everything else is a state.
std::optional<GridField> image_1d(std::string_view name, std::size_t n, BoundaryCondition bc)
{
    if (name == "step") return GridField::sample(n, bc, [](double x) { return x < 0.5 ? 0.0 : 1.0; });
    return std::nullopt;
}

RunOutcome run_1d_experiment(const Experiment& e, const std::filesystem::path& out_dir)
{
    RunOutcome outcome;
    const auto s = spectral::build_spectrum(e.n, e.cfg.bc, 1);
    for (double eps : e.epsilons) {
        FlowConfig cfg = e.cfg;
        cfg.epsilon = eps;
        cfg.validate();

        GridField u0;
        double mean = 0.0;
        if (auto state = named_state(e.ic, e.n, cfg.bc)) {
            u0 = std::move(*state);
        } else if (auto img = image_1d(e.ic, e.n, cfg.bc)) {
            if (cfg.formulation == Formulation::Integrated) {
                mean = img->mean();
                u0 = flow::integrate_image(*img);
            } else {
                u0 = std::move(*img);
            }
        } else {
            throw ConfigError("unknown 1D initial condition '" + e.ic + "'", 0);
        }
        // differentiate_state restores the image only for integrated states.
        const RunData run = execute(u0, cfg, s, e.snapshots);
        const auto comments = manifest(e, cfg);
        const std::string tag = e.stem + "_eps" + format_g(eps);
        outcome.files.push_back(write_state_1d(out_dir / (tag + ".csv"), run, mean, s, comments));
        outcome.files.push_back(write_diagnostics(out_dir / (tag + "_diag.csv"), run, comments));
        const double deviation = max_abs_difference(run.final_state, run.initial) / run.initial.max_abs();
        outcome.summary.push_back(tag + " sup_relative_deviation=" + format_g(deviation) + " conservation_residual=" +
                                  format_g(run.records.back().conservation_residual));
    }
    return outcome;
}

RunOutcome run_2d_experiment(const Experiment& e, const std::filesystem::path& out_dir,
                             const std::optional<imageio::GrayImage>& loaded)
{
    RunOutcome outcome;
    if (e.cfg.formulation != Formulation::Divergence) {
        throw ConfigError("2D runs use the divergence formulation", 0);
    }
    const imageio::GrayImage clean = loaded ? *loaded : imageio::make_cartoon(e.n);
    const imageio::GrayImage noisy = e.noise > 0.0 ? imageio::salt_pepper(clean, e.noise, e.cfg.seed) : clean;
    GridField u0 = imageio::to_field(noisy);
    if (e.cfg.bc != BoundaryCondition::Neumann) u0 = GridField(u0.n(), 2, e.cfg.bc, u0.data());
    const auto s = spectral::build_spectrum(u0.n(), e.cfg.bc, 2);

    FlowConfig cfg = e.cfg;
    cfg.epsilon = e.epsilons.front();
    cfg.validate();
    const RunData run = execute(u0, cfg, s, {});
    const auto comments = manifest(e, cfg);

    const auto clean_path = out_dir / (e.stem + "_clean.pgm");
    const auto noisy_path = out_dir / (e.stem + "_noisy.pgm");
    const auto final_path = out_dir / (e.stem + "_denoised.pgm");
    imageio::write_pgm(clean, clean_path);
    imageio::write_pgm(noisy, noisy_path);
    imageio::write_pgm(imageio::from_field(run.final_state), final_path);
    outcome.files = {clean_path, noisy_path, final_path};
    outcome.files.push_back(write_diagnostics(out_dir / (e.stem + "_diag.csv"), run, comments));

    const GridField clean_field(u0.n(), 2, u0.bc(), clean.pixels);
    const double psnr_noisy = diagnostics::psnr(clean_field, u0);
    const double psnr_final = diagnostics::psnr(clean_field, run.final_state);
    const std::vector<CsvColumn> summary = {
        {"psnr_noisy", {psnr_noisy}}, {"psnr_denoised", {psnr_final}}, {"gain_db", {psnr_final - psnr_noisy}}};
    const auto summary_path = out_dir / (e.stem + "_summary.csv");
    imageio::write_csv(summary_path, summary, comments);
    outcome.files.push_back(summary_path);
    outcome.summary.push_back(e.stem + " psnr_noisy=" + format_g(psnr_noisy) + " psnr_denoised=" +
                              format_g(psnr_final) + " gain_db=" + format_g(psnr_final - psnr_noisy));
    return outcome;
}

void prepare_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

bool is_pgm_path(std::string_view ic)
{
    return ic.size() > 4 && ic.substr(ic.size() - 4) == ".pgm";
}

} // namespace

const std::vector<std::string>& preset_ids()
{
    static const std::vector<std::string> ids = {"fig-eps", "fig-regev", "fig-kink", "fig-kink-osc", "teaser-2d"};
    return ids;
}

std::optional<GridField> named_state(std::string_view name, std::size_t n, BoundaryCondition bc)
{
    std::function<double(double)> f;
    if (name == "const") f = [](double) { return 1.0; };
    else if (name == "zero") f = [](double) { return 0.0; };
    else if (name == "sin2pi") f = [](double x) { return std::sin(2 * pi * x); };
    else if (name == "regev") f = [](double x) { return std::sin(2 * pi * x) + 2 * std::sin(4 * pi * x); };
    else if (name == "hat") f = [](double x) { return 5.0 - std::abs(10.0 * x - 5.0); };
    else if (name == "hat-osc")
        f = [](double x) { return 5.0 - std::abs(10.0 * x - 5.0) + 0.2 * std::sin(64 * pi * x); };
    else if (name == "poly") f = [](double x) { return 100.0 * x * x * (1.0 - x * x); };
    else if (name == "poly-symmetric") f = [](double x) { return 100.0 * x * x * (1.0 - x) * (1.0 - x); };
    else return std::nullopt;
    return GridField::sample(n, bc, f);
}

RunOutcome run_preset(std::string_view id, const std::filesystem::path& out_dir, const Overrides& overrides)
{
    Experiment e = make_preset(id);
    apply_overrides(e, overrides);
    prepare_directory(out_dir);
    return e.ic == "cartoon" ? run_2d_experiment(e, out_dir, std::nullopt) : run_1d_experiment(e, out_dir);
}

CustomConfig parse_config(std::istream& in)
{
    CustomConfig c;
    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", line_no);
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (seen.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        seen[key] = line_no;

        const auto fail = [&](const std::string& why) {
            return ConfigError("invalid value '" + value + "' for " + key + (why.empty() ? "" : ": " + why), line_no);
        };
        const auto real = [&] {
            const auto v = parse_number<double>(value);
            if (!v) throw fail("");
            return *v;
        };
        const auto count = [&] {
            const auto v = parse_number<std::size_t>(value);
            if (!v) throw fail("");
            return *v;
        };

        try {
            if (key == "formulation") c.flow.formulation = parse_formulation(value);
            else if (key == "bc") c.flow.bc = parse_boundary_condition(value);
            else if (key == "n") {
                c.n = count();
                c.n_line = line_no;
            } else if (key == "dim") {
                const auto d = count();
                if (d != 1 && d != 2) throw fail("dimension must be 1 or 2");
                c.dim = static_cast<int>(d);
            } else if (key == "epsilon") {
                c.flow.epsilon = real();
                if (!(c.flow.epsilon >= 0.0 && c.flow.epsilon < 1.0)) throw fail("must lie in [0, 1)");
            } else if (key == "gamma") {
                c.flow.gamma_override = real();
                if (!(*c.flow.gamma_override >= 0.0)) throw fail("must be >= 0");
            } else if (key == "ht") {
                c.flow.h_t = real();
                if (!(c.flow.h_t > 0.0)) throw fail("must be positive");
            } else if (key == "steps") c.flow.steps = count();
            else if (key == "tol") {
                c.flow.solver_tol = real();
                if (!(c.flow.solver_tol > 0.0)) throw fail("must be positive");
            } else if (key == "max_iter") {
                c.flow.solver_max_iter = count();
                if (c.flow.solver_max_iter == 0) throw fail("must be positive");
            } else if (key == "seed") {
                const auto v = parse_number<std::uint64_t>(value);
                if (!v) throw fail("");
                c.flow.seed = *v;
            } else if (key == "solver") c.flow.solver = parse_solver_choice(value);
            else if (key == "noise") {
                c.noise = real();
                if (!(c.noise >= 0.0 && c.noise <= 1.0)) throw fail("must lie in [0, 1]");
            } else if (key == "ic") {
                if (value.empty()) throw fail("empty");
                c.ic = value;
                c.ic_line = line_no;
            } else if (key == "out") c.out = value;
            else throw ConfigError("unknown key '" + key + "'", line_no);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what(), line_no);
        }
    }
    for (const char* key : {"formulation", "bc", "n", "epsilon", "ht", "steps", "ic"}) {
        if (!seen.count(key)) throw ConfigError(std::string("missing mandatory key '") + key + "'", 0);
    }
    if (c.ic == "cartoon" || is_pgm_path(c.ic)) c.dim = 2;
    return c;
}

RunOutcome run_custom(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                      const Overrides& overrides)
{
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config '" + config_path.string() + "'");
    const CustomConfig c = parse_config(in);

    Experiment e;
    e.id = "custom";
    e.stem = "flow";
    e.ic = c.ic;
    e.n = c.n;
    e.epsilons = {c.flow.epsilon};
    e.cfg = c.flow;
    e.noise = c.noise;
    apply_overrides(e, overrides);

    try {
        (void)spectral::build_spectrum(e.n, e.cfg.bc, c.dim);
    } catch (const InvalidSize& err) {
        throw ConfigError(err.what(), c.n_line);
    }

    const std::filesystem::path dir = out_dir.empty() ? c.out : out_dir;
    prepare_directory(dir);
    if (c.dim == 1) {
        if (!named_state(e.ic, e.n, e.cfg.bc) && !image_1d(e.ic, e.n, e.cfg.bc)) {
            throw ConfigError("unknown 1D initial condition '" + e.ic + "'", c.ic_line);
        }
        return run_1d_experiment(e, dir);
    }
    std::optional<imageio::GrayImage> loaded;
    if (is_pgm_path(e.ic)) {
        loaded = imageio::read_pgm(e.ic);
        if (loaded->width != e.n || loaded->height != e.n) {
            throw ConfigError("image is " + std::to_string(loaded->width) + "x" + std::to_string(loaded->height) +
                                  " but n=" + std::to_string(e.n),
                              c.n_line);
        }
    } else if (e.ic != "cartoon") {
        throw ConfigError("unknown 2D initial condition '" + e.ic + "'", c.ic_line);
    }
    return run_2d_experiment(e, dir, loaded);
}

RunOutcome run_denoise(const std::filesystem::path& input, const std::filesystem::path& output,
                       const Overrides& overrides)
{
    Experiment e = make_preset("teaser-2d");
    e.noise = 0.0;
    apply_overrides(e, overrides);
    const imageio::GrayImage img = imageio::read_pgm(input);
    const GridField u0 = imageio::to_field(img);
    const auto s = spectral::build_spectrum(u0.n(), BoundaryCondition::Neumann, 2);
    FlowConfig cfg = e.cfg;
    cfg.epsilon = e.epsilons.front();
    const auto result = flow::run_flow(u0, cfg, s);
    imageio::write_pgm(imageio::from_field(result.state), output);
    RunOutcome outcome;
    outcome.files.push_back(output);
    outcome.summary.push_back("denoise steps=" + std::to_string(cfg.steps) + " " + cfg.describe());
    return outcome;
}

void write_spectrum_csv(std::ostream& out, std::size_t n, BoundaryCondition bc, int dim)
{
    const auto s = spectral::build_spectrum(n, bc, dim);
    char buf[64];
    if (dim == 1) {
        out << "index,mode,eigenvalue\n";
        for (std::size_t k = 0; k < n; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", s.eigenvalues()[k]);
            out << k << ',' << s.mode(k) << ',' << buf << '\n';
        }
        return;
    }
    out << "index,mode_x,mode_y,eigenvalue\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", s.eigenvalues()[i * n + j]);
            out << i * n + j << ',' << s.mode(j) << ',' << s.mode(i) << ',' << buf << '\n';
        }
}

} // namespace nlpm::cli
