#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "squo/eigensolver.hpp"
#include "squo/model.hpp"
#include "squo/scan.hpp"

namespace squo::io {

struct ScanParams {
    double h_min = 0.0;
    double h_max = 1.0;
    int steps = 101;
    double tol_h = 1e-4;
    double prominence = 1.0;
    int threads = 0;
};

struct Tolerances {
    double tol_deg = kTolDeg;
    double tol_bloch = kTolBloch;
    double eer_floor = kEerFloor;
};

struct OutputConfig {
    enum class Format { Csv, Json };
    std::string path;  ///< empty: standard output only
    Format format = Format::Csv;
};

struct RunConfig {
    ModelSpec model;
    SolverConfig solver;
    ScanParams scan;
    Tolerances tolerances;
    OutputConfig output;

    SweepOptions sweep_options() const;
};

/// Parses a JSON config file section-by-section over the defaults; unknown
/// keys are rejected. Throws std::invalid_argument naming the field.
RunConfig load_config_file(const std::string& path, const RunConfig& base = {});
RunConfig parse_config_json(const std::string& text, const RunConfig& base = {});

/// Full-config validation (model ranges, positive tolerances, steps >= 2,
/// known format). Throws std::invalid_argument naming the field.
void validate(const RunConfig& cfg);

/// The exact sweep CSV schema. Floats are shortest round-trip decimals,
/// infinities render as inf/-inf, NaN as nan, resolved as 0/1.
inline constexpr const char* kCsvHeader =
    "h,energy0,gap,m_x,m_z,g_xx,g_yy,g_zz,tangle,vn_entropy,exe,"
    "exe_closed_form,de_perp1,de_perp2,eer,resolved";

std::string format_double(double v);
std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

/// Row as a JSON object with the CSV column names as keys; non-finite
/// numbers are encoded as the strings "inf", "-inf", "nan".
std::string row_to_json(const SweepRow& row);
std::string result_to_json(const ScanResult& result);

/// Machine-readable error object written to stderr by the CLI.
std::string error_json(const std::string& code, const std::string& message);

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitNoBracket = 4;

int cmd_point(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_factorize(const RunConfig& cfg);
/// Presets fig1a..fig4b: sweeps with the matching anisotropies and plot
/// columns, written as <preset>.csv plus a <preset>.json sidecar into the
/// directory given by output.path (default: current directory).
int cmd_figures(const RunConfig& cfg, const std::string& preset);

} // namespace squo::io
