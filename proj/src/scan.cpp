#include "squo/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "squo/eigensolver.hpp"
#include "squo/state.hpp"

namespace squo {

namespace {

std::string h_label(double h) {
    std::ostringstream os;
    os.precision(17);
    os << h;
    return os.str();
}

/// Grid-point factorization dip: the strict interior minimum of the tangle,
/// deep (< 1e-2) and clearly dominated by both sweep endpoints.  The
/// endpoint test keeps saturated plateaus (tangle identically ~0 over a
/// whole range) from producing a spurious detection.
std::optional<double> detect_h_f(const std::vector<SweepRow>& rows) {
    if (rows.size() < 3) return std::nullopt;
    std::size_t imin = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].tangle < rows[imin].tangle) imin = i;
    if (imin == 0 || imin + 1 == rows.size()) return std::nullopt;
    const double tau = rows[imin].tangle;
    if (tau >= 1e-2) return std::nullopt;
    if (!(rows[imin - 1].tangle > tau && rows[imin + 1].tangle > tau))
        return std::nullopt;
    const double floor = std::max(10.0 * tau, tau + 1e-6);
    if (!(rows.front().tangle > floor && rows.back().tangle > floor))
        return std::nullopt;
    return rows[imin].h;
}

/// Derivative of the quadratic through (x_a,y_a), (x_b,y_b), (x_c,y_c),
/// evaluated at t.
double three_point_deriv(double xa, double xb, double xc, double ya, double yb,
                         double yc, double t) {
    return ya * (2 * t - xb - xc) / ((xa - xb) * (xa - xc)) +
           yb * (2 * t - xa - xc) / ((xb - xa) * (xb - xc)) +
           yc * (2 * t - xa - xb) / ((xc - xa) * (xc - xb));
}

const std::map<std::string, double SweepRow::*>& column_map() {
    static const std::map<std::string, double SweepRow::*> columns = {
        {"h", &SweepRow::h},
        {"energy0", &SweepRow::energy0},
        {"gap", &SweepRow::gap},
        {"m_x", &SweepRow::m_x},
        {"m_z", &SweepRow::m_z},
        {"g_xx", &SweepRow::g_xx},
        {"g_yy", &SweepRow::g_yy},
        {"g_zz", &SweepRow::g_zz},
        {"tangle", &SweepRow::tangle},
        {"vn_entropy", &SweepRow::vn_entropy},
        {"exe", &SweepRow::exe},
        {"exe_closed_form", &SweepRow::exe_closed_form},
        {"de_perp1", &SweepRow::de_perp1},
        {"de_perp2", &SweepRow::de_perp2},
        {"eer", &SweepRow::eer},
    };
    return columns;
}

} // namespace

SweepRow compute_row(const ModelSpec& spec, const SweepOptions& opt) {
    const auto pair = lowest_two(spec, opt.solver);
    const GroundStateBundle bundle = resolve_ground_state(pair, opt.tol_deg);
    const SiteObservables obs = site_observables(bundle.resolved, 0);
    const EnergyReport report = exe(spec, bundle, 0, opt.tol_bloch, opt.eer_floor);

    SweepRow r;
    r.h = spec.h;
    r.energy0 = pair.first.value;
    r.gap = bundle.gap;
    r.m_x = obs.M_spin[0];
    r.m_z = obs.M_spin[2];
    r.g_xx = obs.g(0, 0);
    r.g_yy = obs.g(1, 1);
    r.g_zz = obs.g(2, 2);
    r.tangle = obs.tangle;
    r.vn_entropy = obs.vn_entropy;
    r.exe = report.exe;
    r.exe_closed_form = report.exe_closed_form;
    r.de_perp1 = report.de_perp1;
    r.de_perp2 = report.de_perp2;
    r.eer = report.eer;
    r.resolved = bundle.resolved_broken;
    return r;
}

ScanResult sweep(const ModelSpec& spec_template, double h_min, double h_max,
                 int steps, const SweepOptions& opt) {
    if (steps < 1) throw std::invalid_argument("scan.steps: must be >= 1");
    if (steps >= 2 && !(h_max > h_min))
        throw std::invalid_argument("scan: h_max must exceed h_min");
    if (steps == 1 && h_max < h_min)
        throw std::invalid_argument("scan: h_max must be >= h_min");
    {
        ModelSpec probe = spec_template;
        probe.h = h_min;
        validate(probe);
    }

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps) + opt.extra_h.size());
    if (steps == 1) {
        grid.push_back(h_min);
    } else {
        for (int i = 0; i < steps; ++i)
            grid.push_back(h_min + (h_max - h_min) * i / (steps - 1));
    }
    for (double x : opt.extra_h)
        if (x >= h_min - 1e-12 && x <= h_max + 1e-12) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());

    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mtx;
    std::exception_ptr err;

    auto work = [&]() {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) break;
            ModelSpec spec = spec_template;
            spec.h = grid[i];
            try {
                rows[i] = compute_row(spec, opt);
            } catch (const SolverFailure& e) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err)
                    err = std::make_exception_ptr(SolverFailure(
                        "sweep: solver failed at h = " + h_label(grid[i]) + ": " +
                            e.what(),
                        e.achieved_residual));
                stop = true;
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                stop = true;
            }
        }
    };

    int n_threads = opt.n_threads > 0
                        ? opt.n_threads
                        : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    n_threads = std::min<int>(n_threads, static_cast<int>(grid.size()));
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);

    ScanResult result;
    result.rows = std::move(rows);
    result.h_f_formula =
        factorization_field(spec_template.delta_y, spec_template.delta_z);
    result.h_f_detected = detect_h_f(result.rows);
    if (result.rows.size() >= 3)
        result.critical_candidates =
            critical_candidates(result, opt.prominence, opt.tol_h);
    return result;
}

ScanResult sweep(const ModelSpec& spec_template, double h_min, double h_max,
                 int steps, const SolverConfig& cfg) {
    SweepOptions opt;
    opt.solver = cfg;
    return sweep(spec_template, h_min, h_max, steps, opt);
}

double find_factorization(const ModelSpec& spec_template,
                          std::pair<double, double> bracket, double tol_h,
                          const SolverConfig& cfg) {
    if (!(bracket.first < bracket.second))
        throw std::invalid_argument("find_factorization: bracket must be ordered");
    if (!(tol_h > 0.0))
        throw std::invalid_argument("scan.tol_h: must be positive");

    auto signed_gap = [&](double h) {
        ModelSpec spec = spec_template;
        spec.h = h;
        const auto pair = lowest_two(spec, cfg);
        auto sector = [](double p) { return p > 0.25 ? +1 : (p < -0.25 ? -1 : 0); };
        const int c1 = sector(parity_z_expectation(pair.first.vector));
        const int c2 = sector(parity_z_expectation(pair.second.vector));
        if (c1 == 0 || c2 == 0) return 0.0;  // parity-mixed pair: at a crossing
        if (c1 != c2) {
            const double e_even = c1 > 0 ? pair.first.value : pair.second.value;
            const double e_odd = c1 > 0 ? pair.second.value : pair.first.value;
            return e_even - e_odd;
        }
        // Both lowest levels share a sector; the other sector lies above
        // both, which fixes the sign of s without knowing its energy.
        const double gap = pair.second.value - pair.first.value;
        return c1 > 0 ? -gap : gap;
    };

    constexpr int kCoarse = 64;
    std::vector<double> hs(kCoarse + 1), s(kCoarse + 1);
    for (int i = 0; i <= kCoarse; ++i) {
        hs[i] = bracket.first + (bracket.second - bracket.first) * i / kCoarse;
        s[i] = signed_gap(hs[i]);
    }

    // Finite chains cross parity several times inside the ordered phase; the
    // factorization point is the rightmost crossing (the gap opens
    // permanently beyond it).
    bool have_root = false, root_is_point = false;
    double ra = 0, rb = 0, rpoint = 0;
    for (int i = 0; i <= kCoarse; ++i) {
        if (s[i] == 0.0) {
            have_root = true;
            root_is_point = true;
            rpoint = hs[i];
        }
        if (i < kCoarse && s[i] * s[i + 1] < 0.0) {
            have_root = true;
            root_is_point = false;
            ra = hs[i];
            rb = hs[i + 1];
        }
    }
    if (!have_root)
        throw BracketError(
            "find_factorization: no parity level crossing inside [" +
            h_label(bracket.first) + ", " + h_label(bracket.second) + "]");
    if (root_is_point) return rpoint;

    double sa = signed_gap(ra);
    while (rb - ra > 2.0 * tol_h) {
        const double mid = 0.5 * (ra + rb);
        const double sm = signed_gap(mid);
        if (sm == 0.0) return mid;
        if (sa * sm < 0.0) {
            rb = mid;
        } else {
            ra = mid;
            sa = sm;
        }
    }
    return 0.5 * (ra + rb);
}

std::vector<std::pair<double, double>> derivative(const std::vector<SweepRow>& rows,
                                                  const std::string& column) {
    if (rows.size() < 3)
        throw std::invalid_argument("derivative: need at least 3 rows");
    const auto& columns = column_map();
    const auto it = columns.find(column);
    if (it == columns.end())
        throw std::invalid_argument("derivative: unknown column '" + column + "'");
    const double SweepRow::*member = it->second;

    const std::size_t n = rows.size();
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = (i == 0) ? 0 : (i + 1 == n ? n - 3 : i - 1);
        const double d = three_point_deriv(
            rows[a].h, rows[a + 1].h, rows[a + 2].h, rows[a].*member,
            rows[a + 1].*member, rows[a + 2].*member, rows[i].h);
        out.emplace_back(rows[i].h, d);
    }
    return out;
}

std::vector<std::pair<double, double>> critical_candidates(const ScanResult& result,
                                                           double prominence,
                                                           double tol_h) {
    const auto& rows = result.rows;
    if (rows.size() < 3) return {};
    const auto deriv = derivative(rows, "exe");
    const std::size_t n = deriv.size();
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(deriv[i].second);

    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || mag[i] > mag[i - 1];
        const bool right_ok = (i + 1 == n) || mag[i] >= mag[i + 1];
        if (!left_ok || !right_ok) continue;
        if (!(mag[i] > prominence)) continue;
        if (result.h_f_detected &&
            std::abs(rows[i].h - *result.h_f_detected) <= tol_h)
            continue;
        const std::size_t lo = (i == 0) ? 0 : (i + 1 == n ? n - 3 : i - 1);
        bool uniform = true;
        for (std::size_t k = lo; k <= lo + 2; ++k)
            uniform = uniform && (rows[k].resolved == rows[lo].resolved);
        if (!uniform) continue;
        out.emplace_back(rows[i].h, mag[i]);
    }
    return out;
}

} // namespace squo
