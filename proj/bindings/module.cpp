#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "squo/energetics.hpp"
#include "squo/io.hpp"
#include "squo/scan.hpp"

namespace py = pybind11;

namespace {

squo::ModelSpec make_spec(int n_sites, double delta_y, double delta_z, double h,
                          const std::string& boundary) {
    squo::ModelSpec spec;
    spec.n_sites = n_sites;
    spec.delta_y = delta_y;
    spec.delta_z = delta_z;
    spec.h = h;
    if (boundary == "periodic")
        spec.boundary = squo::Boundary::Periodic;
    else if (boundary == "open")
        spec.boundary = squo::Boundary::Open;
    else
        throw std::invalid_argument("boundary: expected 'periodic' or 'open'");
    return spec;
}

py::dict row_to_dict(const squo::SweepRow& r) {
    py::dict d;
    d["h"] = r.h;
    d["energy0"] = r.energy0;
    d["gap"] = r.gap;
    d["m_x"] = r.m_x;
    d["m_z"] = r.m_z;
    d["g_xx"] = r.g_xx;
    d["g_yy"] = r.g_yy;
    d["g_zz"] = r.g_zz;
    d["tangle"] = r.tangle;
    d["vn_entropy"] = r.vn_entropy;
    d["exe"] = r.exe;
    d["exe_closed_form"] = r.exe_closed_form;
    d["de_perp1"] = r.de_perp1;
    d["de_perp2"] = r.de_perp2;
    d["eer"] = r.eer;
    d["resolved"] = r.resolved;
    return d;
}

squo::SweepOptions make_options(std::uint64_t seed, double tol_deg, int threads) {
    squo::SweepOptions opt;
    opt.solver.seed = seed;
    opt.tol_deg = tol_deg;
    opt.n_threads = threads;
    return opt;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Anisotropic XYZ chain: factorization, excitation energies, sweeps";

    m.def("factorization_field", &squo::factorization_field, py::arg("delta_y"),
          py::arg("delta_z"),
          "Closed-form factorizing field sqrt((1 + dz) (dy + dz))");

    m.def("vn_entropy", &squo::vn_entropy, py::arg("tangle"),
          "Single-site von Neumann entropy as a function of the tangle");

    m.def(
        "point",
        [](int n_sites, double delta_y, double delta_z, double h,
           const std::string& boundary, std::uint64_t seed, double tol_deg) {
            const auto spec = make_spec(n_sites, delta_y, delta_z, h, boundary);
            const auto opt = make_options(seed, tol_deg, 1);
            squo::SweepRow row;
            {
                py::gil_scoped_release release;
                row = squo::compute_row(spec, opt);
            }
            return row_to_dict(row);
        },
        py::arg("n_sites"), py::arg("delta_y"), py::arg("delta_z"), py::arg("h"),
        py::arg("boundary") = "periodic", py::arg("seed") = 1234,
        py::arg("tol_deg") = squo::kTolDeg,
        "Full pipeline at one field value; returns the sweep-row dict");

    m.def(
        "sweep",
        [](int n_sites, double delta_y, double delta_z, double h_min, double h_max,
           int steps, const std::string& boundary, std::uint64_t seed,
           double tol_deg, int threads) {
            const auto spec = make_spec(n_sites, delta_y, delta_z, h_min, boundary);
            const auto opt = make_options(seed, tol_deg, threads);
            squo::ScanResult result;
            {
                py::gil_scoped_release release;
                result = squo::sweep(spec, h_min, h_max, steps, opt);
            }
            py::dict out;
            py::list rows;
            for (const auto& r : result.rows) rows.append(row_to_dict(r));
            out["rows"] = rows;
            out["h_f_formula"] = result.h_f_formula;
            out["h_f_detected"] = result.h_f_detected
                                      ? py::object(py::float_(*result.h_f_detected))
                                      : py::object(py::none());
            py::list cands;
            for (const auto& [h, height] : result.critical_candidates) {
                py::dict c;
                c["h"] = h;
                c["height"] = height;
                cands.append(c);
            }
            out["critical_candidates"] = cands;
            return out;
        },
        py::arg("n_sites"), py::arg("delta_y"), py::arg("delta_z"),
        py::arg("h_min"), py::arg("h_max"), py::arg("steps"),
        py::arg("boundary") = "periodic", py::arg("seed") = 1234,
        py::arg("tol_deg") = squo::kTolDeg, py::arg("threads") = 0,
        "Field sweep; returns rows plus factorization-field report");

    m.def(
        "find_factorization",
        [](int n_sites, double delta_y, double delta_z, double h_lo, double h_hi,
           double tol_h, const std::string& boundary, std::uint64_t seed) {
            const auto spec = make_spec(n_sites, delta_y, delta_z, h_lo, boundary);
            squo::SolverConfig cfg;
            cfg.seed = seed;
            double root = 0.0;
            {
                py::gil_scoped_release release;
                root = squo::find_factorization(spec, {h_lo, h_hi}, tol_h, cfg);
            }
            return root;
        },
        py::arg("n_sites"), py::arg("delta_y"), py::arg("delta_z"),
        py::arg("h_lo"), py::arg("h_hi"), py::arg("tol_h") = 1e-4,
        py::arg("boundary") = "periodic", py::arg("seed") = 1234,
        "Rightmost parity level crossing inside [h_lo, h_hi]");

    py::register_exception<squo::SolverFailure>(m, "SolverFailure");
    py::register_exception<squo::BracketError>(m, "BracketError");
}
