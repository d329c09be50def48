#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "squo/energetics.hpp"
#include "squo/ground_state.hpp"
#include "squo/model.hpp"

namespace squo {

/// One fully evaluated grid point of a field sweep. m_x, m_z and the g
/// columns are S-normalized; tangle and vn_entropy follow the Pauli Bloch
/// vector; eer may be +-infinity; exe_closed_form may be NaN.
struct SweepRow {
    double h = 0.0;
    double energy0 = 0.0;
    double gap = 0.0;
    double m_x = 0.0;
    double m_z = 0.0;
    double g_xx = 0.0;
    double g_yy = 0.0;
    double g_zz = 0.0;
    double tangle = 0.0;
    double vn_entropy = 0.0;
    double exe = 0.0;
    double exe_closed_form = 0.0;
    double de_perp1 = 0.0;
    double de_perp2 = 0.0;
    double eer = 0.0;
    bool resolved = false;  ///< symmetry-broken resolution succeeded
};

struct ScanResult {
    std::vector<SweepRow> rows;  ///< h strictly increasing
    std::optional<double> h_f_detected;
    double h_f_formula = 0.0;
    std::vector<std::pair<double, double>> critical_candidates;  ///< (h, peak)
};

struct SweepOptions {
    SolverConfig solver;
    double tol_deg = kTolDeg;
    double tol_bloch = kTolBloch;
    double eer_floor = kEerFloor;
    double tol_h = 1e-4;      ///< exclusion half-width for candidate peaks
    double prominence = 1.0;  ///< minimum |d exe/dh| height reported
    int n_threads = 0;        ///< 0: hardware concurrency
    std::vector<double> extra_h;  ///< additional grid points to inject
};

/// Thrown by find_factorization when the bracket contains no level-crossing
/// sign structure.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluates the full pipeline (eigensolve, resolve, observables,
/// energetics) at spec.h. Site 0 is reported.
SweepRow compute_row(const ModelSpec& spec, const SweepOptions& opt);

/// One SweepRow per grid point over [h_min, h_max] (inclusive, steps >= 2
/// uniform points plus any opt.extra_h that fall inside), evaluated
/// concurrently and assembled in h order. Deterministic given the seed.
ScanResult sweep(const ModelSpec& spec_template, double h_min, double h_max,
                 int steps, const SweepOptions& opt);
ScanResult sweep(const ModelSpec& spec_template, double h_min, double h_max,
                 int steps, const SolverConfig& cfg);

/// Locates the factorization level crossing inside the bracket.
///
/// H commutes with the global parity P = prod sigma^z, and the crossing is
/// between levels of opposite parity, so the signed gap
/// s(h) = E_even - E_odd changes sign exactly at the crossing. The ordered
/// phase hosts additional parity crossings below h_f at finite N, so a
/// coarse scan (64 subintervals) locates every sign change and bisection
/// refines the rightmost one, which is the factorization point (the gap
/// opens permanently beyond it). Throws BracketError when no sign change is
/// found. The result is within tol_h of the exact crossing.
double find_factorization(const ModelSpec& spec_template,
                          std::pair<double, double> bracket, double tol_h,
                          const SolverConfig& cfg = {});

/// d(column)/dh via the three-point formula exact for quadratics on any
/// grid (plain central differences on uniform grids); one-sided three-point
/// stencils at the endpoints. Needs >= 3 rows. Column is any numeric
/// SweepRow field name.
std::vector<std::pair<double, double>> derivative(
    const std::vector<SweepRow>& rows, const std::string& column);

/// Local maxima of |d exe/dh| above `prominence`, in h order. Boundary grid
/// points count as maxima against their single neighbor. Excluded: points
/// within tol_h of result.h_f_detected (the factorization kink is not a
/// critical point) and stencils spanning a resolved-flag switch (the
/// broken/symmetric branch change produces a spurious kink).
std::vector<std::pair<double, double>> critical_candidates(
    const ScanResult& result, double prominence = 1.0, double tol_h = 1e-4);

} // namespace squo
