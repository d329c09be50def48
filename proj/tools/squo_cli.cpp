#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "squo/io.hpp"

namespace {

using squo::io::RunConfig;

struct Overrides {
    std::optional<int> n_sites;
    std::optional<double> delta_y, delta_z, h;
    std::optional<std::string> boundary;
    std::optional<int> max_krylov_dim, dense_threshold, max_restarts;
    std::optional<double> residual_tol;
    std::optional<std::uint64_t> seed;
    std::optional<double> h_min, h_max, tol_h, prominence;
    std::optional<int> steps, threads;
    std::optional<double> tol_deg, tol_bloch, eer_floor;
    std::optional<std::string> out_path, out_format;
};

void apply(const Overrides& o, RunConfig& cfg) {
    if (o.n_sites) cfg.model.n_sites = *o.n_sites;
    if (o.delta_y) cfg.model.delta_y = *o.delta_y;
    if (o.delta_z) cfg.model.delta_z = *o.delta_z;
    if (o.h) cfg.model.h = *o.h;
    if (o.boundary) {
        if (*o.boundary == "periodic")
            cfg.model.boundary = squo::Boundary::Periodic;
        else if (*o.boundary == "open")
            cfg.model.boundary = squo::Boundary::Open;
        else
            throw std::invalid_argument(
                "config: model.boundary: expected \"periodic\" or \"open\"");
    }
    if (o.max_krylov_dim) cfg.solver.max_krylov_dim = *o.max_krylov_dim;
    if (o.residual_tol) cfg.solver.residual_tol = *o.residual_tol;
    if (o.dense_threshold) cfg.solver.dense_threshold = *o.dense_threshold;
    if (o.seed) cfg.solver.seed = *o.seed;
    if (o.max_restarts) cfg.solver.max_restarts = *o.max_restarts;
    if (o.h_min) cfg.scan.h_min = *o.h_min;
    if (o.h_max) cfg.scan.h_max = *o.h_max;
    if (o.steps) cfg.scan.steps = *o.steps;
    if (o.tol_h) cfg.scan.tol_h = *o.tol_h;
    if (o.prominence) cfg.scan.prominence = *o.prominence;
    if (o.threads) cfg.scan.threads = *o.threads;
    if (o.tol_deg) cfg.tolerances.tol_deg = *o.tol_deg;
    if (o.tol_bloch) cfg.tolerances.tol_bloch = *o.tol_bloch;
    if (o.eer_floor) cfg.tolerances.eer_floor = *o.eer_floor;
    if (o.out_path) cfg.output.path = *o.out_path;
    if (o.out_format) {
        if (*o.out_format == "csv")
            cfg.output.format = squo::io::OutputConfig::Format::Csv;
        else if (*o.out_format == "json")
            cfg.output.format = squo::io::OutputConfig::Format::Json;
        else
            throw std::invalid_argument(
                "config: output.format: expected \"csv\" or \"json\"");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Anisotropic XYZ spin-1/2 chain toolkit: ground-state factorization, "
        "entanglement excitation energies, and field sweeps"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;

    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--model.n_sites", o.n_sites, "chain length (even, 2..20)");
    app.add_option("--model.delta_y", o.delta_y, "y anisotropy in [0, 1]");
    app.add_option("--model.delta_z", o.delta_z, "z anisotropy in [0, 1]");
    app.add_option("--model.h", o.h, "reduced field (point command)");
    app.add_option("--model.boundary", o.boundary, "periodic | open");
    app.add_option("--solver.max_krylov_dim", o.max_krylov_dim,
                   "Lanczos basis size per restart cycle");
    app.add_option("--solver.residual_tol", o.residual_tol,
                   "eigenpair residual tolerance");
    app.add_option("--solver.dense_threshold", o.dense_threshold,
                   "largest n_sites for dense_spectrum (<= 14)");
    app.add_option("--solver.seed", o.seed, "Lanczos start-vector seed");
    app.add_option("--solver.max_restarts", o.max_restarts,
                   "thick-restart cycles before giving up");
    app.add_option("--scan.h_min", o.h_min, "sweep start / bracket left end");
    app.add_option("--scan.h_max", o.h_max, "sweep end / bracket right end");
    app.add_option("--scan.steps", o.steps, "uniform grid points (>= 2 for sweep)");
    app.add_option("--scan.tol_h", o.tol_h, "root refinement width / peak window");
    app.add_option("--scan.prominence", o.prominence,
                   "minimum |d exe/dh| for a critical candidate");
    app.add_option("--scan.threads", o.threads, "worker threads (0 = hardware)");
    app.add_option("--tolerances.tol_deg", o.tol_deg, "degeneracy gap threshold");
    app.add_option("--tolerances.tol_bloch", o.tol_bloch,
                   "Bloch-vector norm below which the frame is undefined");
    app.add_option("--tolerances.eer_floor", o.eer_floor,
                   "exe below which eer is reported as +-inf");
    app.add_option("--output.path", o.out_path,
                   "output file (figures: output directory)");
    app.add_option("--output.format", o.out_format, "csv | json");

    CLI::App* point = app.add_subcommand("point", "evaluate one grid point at model.h");
    CLI::App* sweep = app.add_subcommand("sweep", "field sweep over [scan.h_min, scan.h_max]");
    CLI::App* factorize =
        app.add_subcommand("factorize", "locate the factorization level crossing");
    CLI::App* figures =
        app.add_subcommand("figures", "plot-ready dataset for a named preset");
    std::string preset;
    figures->add_option("preset", preset, "fig1a fig1b fig2a fig2b fig3a fig3b fig4a fig4b")
        ->required();
    for (CLI::App* sub : {point, sweep, factorize, figures}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << squo::io::error_json("config", e.what()) << "\n";
        return squo::io::kExitConfig;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = squo::io::load_config_file(config_path, cfg);
        apply(o, cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << squo::io::error_json("config", e.what()) << "\n";
        return squo::io::kExitConfig;
    }

    if (point->parsed()) return squo::io::cmd_point(cfg);
    if (sweep->parsed()) return squo::io::cmd_sweep(cfg);
    if (factorize->parsed()) return squo::io::cmd_factorize(cfg);
    return squo::io::cmd_figures(cfg, preset);
}
