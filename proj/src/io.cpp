#include "squo/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "squo/energetics.hpp"

namespace squo::io {

namespace {

using nlohmann::ordered_json;

ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

[[noreturn]] void bad_field(const std::string& dotted, const std::string& what) {
    throw std::invalid_argument("config: " + dotted + ": " + what);
}

double want_number(const nlohmann::json& v, const std::string& dotted) {
    if (!v.is_number()) bad_field(dotted, "expected a number");
    return v.get<double>();
}

int want_int(const nlohmann::json& v, const std::string& dotted) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        bad_field(dotted, "expected an integer");
    return v.get<int>();
}

std::string want_string(const nlohmann::json& v, const std::string& dotted) {
    if (!v.is_string()) bad_field(dotted, "expected a string");
    return v.get<std::string>();
}

void apply_model(const nlohmann::json& j, ModelSpec& m) {
    for (const auto& [key, value] : j.items()) {
        const std::string dotted = "model." + key;
        if (key == "n_sites")
            m.n_sites = want_int(value, dotted);
        else if (key == "delta_y")
            m.delta_y = want_number(value, dotted);
        else if (key == "delta_z")
            m.delta_z = want_number(value, dotted);
        else if (key == "h")
            m.h = want_number(value, dotted);
        else if (key == "boundary") {
            const std::string b = want_string(value, dotted);
            if (b == "periodic")
                m.boundary = Boundary::Periodic;
            else if (b == "open")
                m.boundary = Boundary::Open;
            else
                bad_field(dotted, "expected \"periodic\" or \"open\"");
        } else
            bad_field(dotted, "unknown key");
    }
}

void apply_solver(const nlohmann::json& j, SolverConfig& s) {
    for (const auto& [key, value] : j.items()) {
        const std::string dotted = "solver." + key;
        if (key == "max_krylov_dim")
            s.max_krylov_dim = want_int(value, dotted);
        else if (key == "residual_tol")
            s.residual_tol = want_number(value, dotted);
        else if (key == "dense_threshold")
            s.dense_threshold = want_int(value, dotted);
        else if (key == "seed") {
            if (!value.is_number_integer() && !value.is_number_unsigned())
                bad_field(dotted, "expected an integer");
            s.seed = value.get<std::uint64_t>();
        } else if (key == "max_restarts")
            s.max_restarts = want_int(value, dotted);
        else
            bad_field(dotted, "unknown key");
    }
}

void apply_scan(const nlohmann::json& j, ScanParams& s) {
    for (const auto& [key, value] : j.items()) {
        const std::string dotted = "scan." + key;
        if (key == "h_min")
            s.h_min = want_number(value, dotted);
        else if (key == "h_max")
            s.h_max = want_number(value, dotted);
        else if (key == "steps")
            s.steps = want_int(value, dotted);
        else if (key == "tol_h")
            s.tol_h = want_number(value, dotted);
        else if (key == "prominence")
            s.prominence = want_number(value, dotted);
        else if (key == "threads")
            s.threads = want_int(value, dotted);
        else
            bad_field(dotted, "unknown key");
    }
}

void apply_tolerances(const nlohmann::json& j, Tolerances& t) {
    for (const auto& [key, value] : j.items()) {
        const std::string dotted = "tolerances." + key;
        if (key == "tol_deg")
            t.tol_deg = want_number(value, dotted);
        else if (key == "tol_bloch")
            t.tol_bloch = want_number(value, dotted);
        else if (key == "eer_floor")
            t.eer_floor = want_number(value, dotted);
        else
            bad_field(dotted, "unknown key");
    }
}

void apply_output(const nlohmann::json& j, OutputConfig& o) {
    for (const auto& [key, value] : j.items()) {
        const std::string dotted = "output." + key;
        if (key == "path")
            o.path = want_string(value, dotted);
        else if (key == "format") {
            const std::string f = want_string(value, dotted);
            if (f == "csv")
                o.format = OutputConfig::Format::Csv;
            else if (f == "json")
                o.format = OutputConfig::Format::Json;
            else
                bad_field(dotted, "expected \"csv\" or \"json\"");
        } else
            bad_field(dotted, "unknown key");
    }
}

struct FigurePreset {
    double delta_y, delta_z;
    double h_min, h_max;
    std::vector<std::string> columns;  ///< besides h
};

const std::map<std::string, FigurePreset>& figure_presets() {
    static const std::map<std::string, FigurePreset> presets = {
        {"fig1a", {0.4, 0.0, 0.0, 1.0, {"exe", "vn_entropy"}}},
        {"fig1b", {0.25, 1.0, 0.0, 2.4, {"exe", "vn_entropy"}}},
        {"fig2a", {1.0, 0.0, 0.0, 1.4, {"exe", "vn_entropy"}}},
        {"fig2b", {1.0, 1.0, 0.0, 2.4, {"exe", "vn_entropy"}}},
        {"fig3a", {0.4, 0.0, 0.0, 1.0, {"exe", "de_perp1", "de_perp2"}}},
        {"fig3b", {0.25, 1.0, 0.0, 2.4, {"exe", "de_perp1", "de_perp2"}}},
        {"fig4a", {0.4, 0.0, 0.0, 1.0, {"eer"}}},
        {"fig4b", {0.25, 1.0, 0.0, 2.4, {"eer"}}},
    };
    return presets;
}

double column_value(const SweepRow& r, const std::string& name) {
    if (name == "exe") return r.exe;
    if (name == "vn_entropy") return r.vn_entropy;
    if (name == "de_perp1") return r.de_perp1;
    if (name == "de_perp2") return r.de_perp2;
    if (name == "eer") return r.eer;
    throw std::logic_error("figures: unmapped column " + name);
}

int run_guarded(const RunConfig& cfg, const std::function<void()>& body) {
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << error_json("config", e.what()) << "\n";
        return kExitConfig;
    }
    try {
        body();
        return kExitOk;
    } catch (const SolverFailure& e) {
        std::cerr << error_json("solver", e.what()) << "\n";
        return kExitSolver;
    } catch (const BracketError& e) {
        std::cerr << error_json("no_bracket", e.what()) << "\n";
        return kExitNoBracket;
    } catch (const std::invalid_argument& e) {
        std::cerr << error_json("config", e.what()) << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()) << "\n";
        return 1;
    }
}

} // namespace

SweepOptions RunConfig::sweep_options() const {
    SweepOptions opt;
    opt.solver = solver;
    opt.tol_deg = tolerances.tol_deg;
    opt.tol_bloch = tolerances.tol_bloch;
    opt.eer_floor = tolerances.eer_floor;
    opt.tol_h = scan.tol_h;
    opt.prominence = scan.prominence;
    opt.n_threads = scan.threads;
    return opt;
}

RunConfig parse_config_json(const std::string& text, const RunConfig& base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be a JSON object");

    RunConfig cfg = base;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_object())
            throw std::invalid_argument("config: " + key + ": expected an object");
        if (key == "model")
            apply_model(value, cfg.model);
        else if (key == "solver")
            apply_solver(value, cfg.solver);
        else if (key == "scan")
            apply_scan(value, cfg.scan);
        else if (key == "tolerances")
            apply_tolerances(value, cfg.tolerances);
        else if (key == "output")
            apply_output(value, cfg.output);
        else
            throw std::invalid_argument("config: unknown section '" + key + "'");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("config: cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str(), base);
}

void validate(const RunConfig& cfg) {
    squo::validate(cfg.model);
    squo::validate(cfg.solver);
    if (cfg.scan.steps < 1)
        throw std::invalid_argument("scan.steps: must be >= 1");
    if (cfg.scan.steps >= 2 && !(cfg.scan.h_max > cfg.scan.h_min))
        throw std::invalid_argument("scan.h_max: must exceed scan.h_min");
    if (!(cfg.scan.tol_h > 0.0))
        throw std::invalid_argument("scan.tol_h: must be positive");
    if (cfg.scan.prominence < 0.0)
        throw std::invalid_argument("scan.prominence: must be >= 0");
    if (cfg.scan.threads < 0)
        throw std::invalid_argument("scan.threads: must be >= 0");
    if (!(cfg.tolerances.tol_deg > 0.0))
        throw std::invalid_argument("tolerances.tol_deg: must be positive");
    if (!(cfg.tolerances.tol_bloch > 0.0))
        throw std::invalid_argument("tolerances.tol_bloch: must be positive");
    if (!(cfg.tolerances.eer_floor > 0.0))
        throw std::invalid_argument("tolerances.eer_floor: must be positive");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SweepRow& r : rows) {
        out += format_double(r.h);
        for (double v : {r.energy0, r.gap, r.m_x, r.m_z, r.g_xx, r.g_yy, r.g_zz,
                         r.tangle, r.vn_entropy, r.exe, r.exe_closed_form,
                         r.de_perp1, r.de_perp2, r.eer}) {
            out += ',';
            out += format_double(v);
        }
        out += r.resolved ? ",1\n" : ",0\n";
    }
    return out;
}

std::vector<SweepRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw std::invalid_argument("csv: unexpected header '" + line + "'");

    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 16)
            throw std::invalid_argument("csv: line " + std::to_string(lineno) +
                                        " has " + std::to_string(fields.size()) +
                                        " fields, expected 16");

        auto number = [&](const std::string& f) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
                throw std::invalid_argument("csv: bad numeric field '" + f +
                                            "' at line " + std::to_string(lineno));
            return v;
        };

        SweepRow r;
        r.h = number(fields[0]);
        r.energy0 = number(fields[1]);
        r.gap = number(fields[2]);
        r.m_x = number(fields[3]);
        r.m_z = number(fields[4]);
        r.g_xx = number(fields[5]);
        r.g_yy = number(fields[6]);
        r.g_zz = number(fields[7]);
        r.tangle = number(fields[8]);
        r.vn_entropy = number(fields[9]);
        r.exe = number(fields[10]);
        r.exe_closed_form = number(fields[11]);
        r.de_perp1 = number(fields[12]);
        r.de_perp2 = number(fields[13]);
        r.eer = number(fields[14]);
        if (fields[15] == "1")
            r.resolved = true;
        else if (fields[15] == "0")
            r.resolved = false;
        else
            throw std::invalid_argument("csv: bad resolved flag '" + fields[15] +
                                        "' at line " + std::to_string(lineno));
        rows.push_back(r);
    }
    return rows;
}

std::string row_to_json(const SweepRow& row) {
    ordered_json j;
    j["h"] = json_number(row.h);
    j["energy0"] = json_number(row.energy0);
    j["gap"] = json_number(row.gap);
    j["m_x"] = json_number(row.m_x);
    j["m_z"] = json_number(row.m_z);
    j["g_xx"] = json_number(row.g_xx);
    j["g_yy"] = json_number(row.g_yy);
    j["g_zz"] = json_number(row.g_zz);
    j["tangle"] = json_number(row.tangle);
    j["vn_entropy"] = json_number(row.vn_entropy);
    j["exe"] = json_number(row.exe);
    j["exe_closed_form"] = json_number(row.exe_closed_form);
    j["de_perp1"] = json_number(row.de_perp1);
    j["de_perp2"] = json_number(row.de_perp2);
    j["eer"] = json_number(row.eer);
    j["resolved"] = row.resolved;
    return j.dump();
}

std::string result_to_json(const ScanResult& result) {
    ordered_json j;
    j["rows"] = ordered_json::array();
    for (const SweepRow& r : result.rows)
        j["rows"].push_back(ordered_json::parse(row_to_json(r)));
    if (result.h_f_detected)
        j["h_f_detected"] = json_number(*result.h_f_detected);
    else
        j["h_f_detected"] = nullptr;
    j["h_f_formula"] = json_number(result.h_f_formula);
    j["critical_candidates"] = ordered_json::array();
    for (const auto& [h, height] : result.critical_candidates)
        j["critical_candidates"].push_back({{"h", json_number(h)},
                                            {"height", json_number(height)}});
    return j.dump();
}

std::string error_json(const std::string& code, const std::string& message) {
    ordered_json j;
    j["error"] = {{"code", code}, {"message", message}};
    return j.dump();
}

int cmd_point(const RunConfig& cfg) {
    return run_guarded(cfg, [&]() {
        const SweepRow row = compute_row(cfg.model, cfg.sweep_options());
        const std::string js = row_to_json(row);
        std::cout << js << "\n";
        if (!cfg.output.path.empty()) {
            if (cfg.output.format == OutputConfig::Format::Csv)
                write_file(cfg.output.path, to_csv({row}));
            else
                write_file(cfg.output.path, js + "\n");
        }
    });
}

int cmd_sweep(const RunConfig& cfg) {
    return run_guarded(cfg, [&]() {
        if (cfg.scan.steps < 2)
            throw std::invalid_argument("scan.steps: must be >= 2 for sweep");
        const ScanResult result = sweep(cfg.model, cfg.scan.h_min, cfg.scan.h_max,
                                        cfg.scan.steps, cfg.sweep_options());
        const std::string payload = cfg.output.format == OutputConfig::Format::Csv
                                        ? to_csv(result.rows)
                                        : result_to_json(result) + "\n";
        std::cout << payload;
        if (!cfg.output.path.empty()) write_file(cfg.output.path, payload);
    });
}

int cmd_factorize(const RunConfig& cfg) {
    return run_guarded(cfg, [&]() {
        const double detected =
            find_factorization(cfg.model, {cfg.scan.h_min, cfg.scan.h_max},
                               cfg.scan.tol_h, cfg.solver);
        const double formula =
            factorization_field(cfg.model.delta_y, cfg.model.delta_z);
        ordered_json j;
        j["h_f_detected"] = json_number(detected);
        j["h_f_formula"] = json_number(formula);
        j["difference"] = json_number(std::abs(detected - formula));
        const std::string payload = j.dump() + "\n";
        std::cout << payload;
        if (!cfg.output.path.empty()) write_file(cfg.output.path, payload);
    });
}

int cmd_figures(const RunConfig& cfg, const std::string& preset) {
    return run_guarded(cfg, [&]() {
        const auto& presets = figure_presets();
        const auto it = presets.find(preset);
        if (it == presets.end()) {
            std::string known;
            for (const auto& [name, _] : presets)
                known += (known.empty() ? "" : ", ") + name;
            throw std::invalid_argument("figures: unknown preset '" + preset +
                                        "' (known: " + known + ")");
        }
        const FigurePreset& fp = it->second;

        ModelSpec model = cfg.model;
        model.delta_y = fp.delta_y;
        model.delta_z = fp.delta_z;
        model.h = fp.h_min;
        validate(model);

        SweepOptions opt = cfg.sweep_options();
        const double h_f = factorization_field(fp.delta_y, fp.delta_z);
        if (h_f >= fp.h_min && h_f <= fp.h_max) opt.extra_h.push_back(h_f);

        const ScanResult result =
            sweep(model, fp.h_min, fp.h_max, cfg.scan.steps, opt);

        std::string data = "h";
        for (const std::string& c : fp.columns) data += "," + c;
        data += '\n';
        for (const SweepRow& r : result.rows) {
            data += format_double(r.h);
            for (const std::string& c : fp.columns) {
                data += ',';
                data += format_double(column_value(r, c));
            }
            data += '\n';
        }

        ordered_json sidecar;
        sidecar["preset"] = preset;
        sidecar["model"] = {
            {"n_sites", model.n_sites},
            {"delta_y", model.delta_y},
            {"delta_z", model.delta_z},
            {"boundary", model.boundary == Boundary::Periodic ? "periodic" : "open"},
        };
        sidecar["scan"] = {{"h_min", fp.h_min},
                           {"h_max", fp.h_max},
                           {"steps", cfg.scan.steps}};
        sidecar["columns"] = fp.columns;
        sidecar["h_f_formula"] = json_number(result.h_f_formula);
        if (result.h_f_detected)
            sidecar["h_f_detected"] = json_number(*result.h_f_detected);
        else
            sidecar["h_f_detected"] = nullptr;
        sidecar["critical_candidates"] = ordered_json::array();
        for (const auto& [h, height] : result.critical_candidates)
            sidecar["critical_candidates"].push_back(
                {{"h", json_number(h)}, {"height", json_number(height)}});
        sidecar["note"] =
            "finite-chain data; dips sharpen and derivative peaks grow with "
            "n_sites, so these curves approximate the thermodynamic-limit "
            "shapes qualitatively";

        const std::string dir = cfg.output.path.empty() ? "." : cfg.output.path;
        std::filesystem::create_directories(dir);
        write_file(dir + "/" + preset + ".csv", data);
        write_file(dir + "/" + preset + ".json", sidecar.dump(2) + "\n");
        std::cout << sidecar.dump() << "\n";
    });
}

} // namespace squo::io
