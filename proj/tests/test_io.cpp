#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <squo/io.hpp>
#include <squo/scan.hpp>

using namespace squo;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<SweepRow> sample_rows() {
    SweepRow a;
    a.h = 0.1;
    a.energy0 = -2.3456789012345678;
    a.gap = 1e-12;
    a.m_x = 0.45;
    a.m_z = -0.125;
    a.g_xx = -0.2232329880623218;
    a.g_yy = 0.0;
    a.g_zz = 0.25;
    a.tangle = 0.937924992891177;
    a.vn_entropy = 0.9547471846077026;
    a.exe = 0.9681000911473081;
    a.exe_closed_form = kNan;
    a.de_perp1 = 0.14991270819769698;
    a.de_perp2 = 0.967676521548966;
    a.eer = -kInf;
    a.resolved = false;

    SweepRow b;
    b.h = 0.6324555320336759;
    b.energy0 = -3.0;
    b.gap = 0.0;
    b.m_x = 0.3749377478467437;
    b.m_z = 0.33042863871839695;
    b.g_xx = -0.1425945050866005;
    b.g_yy = 0.004245189232226738;
    b.g_zz = 0.11160583647416623;
    b.tangle = 1e-16;
    b.vn_entropy = 0.0;
    b.exe = 8.6e-17;
    b.exe_closed_form = 8.6e-17;
    b.de_perp1 = 0.98;
    b.de_perp2 = 0.98;
    b.eer = kInf;
    b.resolved = true;
    return {a, b};
}

std::string config_error(const std::string& text) {
    try {
        io::parse_config_json(text);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("format_double: shortest round-trip decimals and special values") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(-2.5) == "-2.5");
    CHECK(io::format_double(0.6324555320336759) == "0.6324555320336759");
    CHECK(io::format_double(1e-300) == "1e-300");
    CHECK(io::format_double(kInf) == "inf");
    CHECK(io::format_double(-kInf) == "-inf");
    CHECK(io::format_double(kNan) == "nan");
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv round-trip is byte-identical") {
    auto rows = sample_rows();
    std::string text = io::to_csv(rows);

    // header is pinned verbatim
    CHECK(text.rfind(std::string(io::kCsvHeader) + "\n", 0) == 0);

    auto parsed = io::parse_csv(text);
    REQUIRE(parsed.size() == rows.size());
    CHECK(io::to_csv(parsed) == text);

    CHECK(parsed[0].resolved == false);
    CHECK(parsed[1].resolved == true);
    CHECK(std::isnan(parsed[0].exe_closed_form));
    CHECK(parsed[0].eer == -kInf);
    CHECK(parsed[1].eer == kInf);
    CHECK(parsed[0].energy0 == rows[0].energy0);  // exact, not approximate
    CHECK(parsed[1].h == rows[1].h);
}

TEST_CASE("parse_csv accepts CRLF line endings") {
    std::string text = io::to_csv(sample_rows());
    std::string crlf;
    for (char c : text) {
        if (c == '\n') crlf += "\r\n";
        else crlf += c;
    }
    auto parsed = io::parse_csv(crlf);
    CHECK(io::to_csv(parsed) == text);
}

TEST_CASE("parse_csv rejects malformed input") {
    CHECK_THROWS_AS(io::parse_csv("h,energy\n1,2\n"), std::invalid_argument);

    std::string good = io::to_csv(sample_rows());
    CHECK_THROWS_AS(io::parse_csv(good + "1,2,3\n"), std::invalid_argument);

    std::string bad_resolved(io::kCsvHeader);
    bad_resolved += "\n0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,7\n";
    CHECK_THROWS_AS(io::parse_csv(bad_resolved), std::invalid_argument);

    std::string bad_number(io::kCsvHeader);
    bad_number += "\n0,zero,0,0,0,0,0,0,0,0,0,0,0,0,0,1\n";
    CHECK_THROWS_AS(io::parse_csv(bad_number), std::invalid_argument);
}

TEST_CASE("row json: csv column names, non-finite values as strings") {
    auto rows = sample_rows();
    auto j = json::parse(io::row_to_json(rows[0]));
    CHECK(j["h"] == 0.1);
    CHECK(j["eer"] == "-inf");
    CHECK(j["exe_closed_form"] == "nan");
    CHECK(j["resolved"] == false);
    CHECK(j["g_xx"] == -0.2232329880623218);

    auto k = json::parse(io::row_to_json(rows[1]));
    CHECK(k["eer"] == "inf");
    CHECK(k["resolved"] == true);
}

TEST_CASE("result json carries the detection fields") {
    ScanResult res;
    res.rows = sample_rows();
    res.h_f_formula = 0.6324555320336759;
    res.critical_candidates = {{0.7, 3.5}};

    auto j = json::parse(io::result_to_json(res));
    CHECK(j["rows"].size() == 2);
    CHECK(j["h_f_detected"].is_null());
    CHECK(j["h_f_formula"] == 0.6324555320336759);
    REQUIRE(j["critical_candidates"].size() == 1);
    CHECK(j["critical_candidates"][0]["h"] == 0.7);
    CHECK(j["critical_candidates"][0]["height"] == 3.5);

    res.h_f_detected = 0.6324555320336759;
    auto k = json::parse(io::result_to_json(res));
    CHECK(k["h_f_detected"] == 0.6324555320336759);
}

TEST_CASE("error json shape") {
    auto j = json::parse(io::error_json("solver", "did not converge"));
    CHECK(j["error"]["code"] == "solver");
    CHECK(j["error"]["message"] == "did not converge");
}

TEST_CASE("config parsing applies sections over defaults") {
    const char* text = R"({
        "model": {"n_sites": 10, "delta_y": 0.25, "delta_z": 1.0,
                   "h": 0.3, "boundary": "open"},
        "solver": {"max_krylov_dim": 150, "seed": 42},
        "scan": {"h_min": 0.1, "h_max": 2.4, "steps": 25, "threads": 2},
        "tolerances": {"tol_deg": 0.002},
        "output": {"path": "out.csv", "format": "json"}
    })";
    auto cfg = io::parse_config_json(text);
    CHECK(cfg.model.n_sites == 10);
    CHECK(cfg.model.delta_y == 0.25);
    CHECK(cfg.model.delta_z == 1.0);
    CHECK(cfg.model.h == 0.3);
    CHECK(cfg.model.boundary == Boundary::Open);
    CHECK(cfg.solver.max_krylov_dim == 150);
    CHECK(cfg.solver.seed == 42);
    CHECK(cfg.solver.residual_tol == 1e-10);  // untouched default
    CHECK(cfg.scan.h_min == 0.1);
    CHECK(cfg.scan.h_max == 2.4);
    CHECK(cfg.scan.steps == 25);
    CHECK(cfg.scan.threads == 2);
    CHECK(cfg.tolerances.tol_deg == 0.002);
    CHECK(cfg.output.path == "out.csv");
    CHECK(cfg.output.format == io::OutputConfig::Format::Json);
}

TEST_CASE("config parsing rejects unknown and ill-typed fields by name") {
    CHECK(config_error(R"({"model": {"n_site": 8}})").find("model.n_site") !=
          std::string::npos);
    CHECK(config_error(R"({"modle": {}})").find("modle") != std::string::npos);
    CHECK(config_error(R"({"model": {"n_sites": "eight"}})").find("n_sites") !=
          std::string::npos);
    CHECK(config_error(R"({"model": {"boundary": "ring"}})").find("boundary") !=
          std::string::npos);
    CHECK(config_error(R"({"output": {"format": "yaml"}})").find("format") !=
          std::string::npos);
    CHECK(config_error("[1,2]") != "");
    CHECK(config_error("{ not json").find("config") != std::string::npos);
}

TEST_CASE("config file loading") {
    namespace fs = std::filesystem;
    auto path = fs::temp_directory_path() / "squo_test_cfg.json";
    {
        std::ofstream out(path);
        out << R"({"model": {"n_sites": 6, "delta_y": 1.0}})";
    }
    auto cfg = io::load_config_file(path.string());
    CHECK(cfg.model.n_sites == 6);
    CHECK(cfg.model.delta_y == 1.0);
    fs::remove(path);

    CHECK_THROWS_AS(io::load_config_file("/no/such/file.json"),
                    std::invalid_argument);
}

TEST_CASE("full-config validation walks every section") {
    io::RunConfig cfg;
    CHECK_NOTHROW(io::validate(cfg));

    auto message = [](io::RunConfig c) -> std::string {
        try {
            io::validate(c);
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        return {};
    };

    io::RunConfig bad;
    bad.model.n_sites = 9;
    CHECK(message(bad).find("n_sites") != std::string::npos);

    bad = io::RunConfig{};
    bad.solver.residual_tol = -1.0;
    CHECK(message(bad).find("residual_tol") != std::string::npos);

    bad = io::RunConfig{};
    bad.scan.steps = 0;
    CHECK(message(bad).find("steps") != std::string::npos);

    bad = io::RunConfig{};
    bad.scan.h_min = 1.0;
    bad.scan.h_max = 0.5;
    CHECK(message(bad).find("h_m") != std::string::npos);

    bad = io::RunConfig{};
    bad.tolerances.tol_deg = 0.0;
    CHECK(message(bad).find("tol_deg") != std::string::npos);
}

TEST_CASE("figures subcommand writes a csv and sidecar pair") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "squo_test_figs" / "nested";
    fs::remove_all(dir.parent_path());  // the command creates missing dirs

    io::RunConfig cfg;
    cfg.model.n_sites = 4;
    cfg.scan.steps = 5;
    cfg.output.path = dir.string();
    int rc = io::cmd_figures(cfg, "fig2a");
    CHECK(rc == io::kExitOk);

    auto csv_path = dir / "fig2a.csv";
    auto json_path = dir / "fig2a.json";
    REQUIRE(fs::exists(csv_path));
    REQUIRE(fs::exists(json_path));

    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "h,exe,vn_entropy");

    std::ifstream side(json_path);
    auto j = json::parse(side);
    CHECK(j["preset"] == "fig2a");
    CHECK(j["model"]["delta_y"] == 1.0);  // preset pins the anisotropies
    CHECK(j["model"]["delta_z"] == 0.0);
    CHECK(j["model"]["n_sites"] == 4);
    CHECK(j["scan"]["h_min"] == 0.0);
    CHECK(j["scan"]["h_max"] == 1.4);
    CHECK(j.contains("h_f_formula"));
    CHECK(j.contains("note"));

    fs::remove_all(dir.parent_path());
}

TEST_CASE("figures subcommand rejects unknown presets") {
    io::RunConfig cfg;
    cfg.model.n_sites = 4;
    cfg.scan.steps = 3;
    CHECK(io::cmd_figures(cfg, "fig9z") == io::kExitConfig);
}
