#pragma once

#include <Eigen/Dense>

#include "squo/geometry.hpp"
#include "squo/ground_state.hpp"
#include "squo/model.hpp"
#include "squo/state.hpp"

namespace squo {

/// Below this excitation energy the energy ratio is reported as a signed
/// infinity rather than an overflowing quotient; the ratio genuinely
/// diverges at factorization points.
inline constexpr double kEerFloor = 1e-10;

/// Excitation energy as a quadratic form in the direction vector:
/// dE(u) = u^T A u with A_aa = dE(sigma^a) and A_ab = eps_ab / 2. Exactly
/// equivalent to the direct evaluation because A is assembled from the same
/// sandwich expectations.
struct QuadraticForm {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    double e0 = 0.0;
};

struct EnergyReport {
    double exe = 0.0;       ///< dE(u~), the entanglement excitation energy
    double de_perp1 = 0.0;  ///< dE(u'_perp)
    double de_perp2 = 0.0;  ///< dE(u''_perp)
    /// (de_perp1 - de_perp2) / exe; +-infinity when exe < eer_floor, with
    /// the sign of the numerator (+infinity for a vanishing numerator).
    double eer = 0.0;
    /// Closed-form evaluation from single-site observables; NaN when the
    /// frame is undefined, the bundle is an unresolved degenerate pair, or
    /// tau is too close to 1.
    double exe_closed_form = 0.0;
    int site = 0;
    bool frame_defined = true;
};

/// <G|U H U|G>/<UG|UG> - <G|H|G> with U = u.sigma_site. Non-negative (up to
/// -1e-9) whenever G is a ground state.
double excitation_energy_direct(const ModelSpec& spec, const StateVector& ground,
                                int site, const Direction& u);

/// eps_ab = <G| sigma^a H sigma^b + sigma^b H sigma^a |G>, a != b.
double epsilon_cross(const ModelSpec& spec, const StateVector& ground, int site,
                     Axis a, Axis b);

QuadraticForm build_quadratic_form(const ModelSpec& spec,
                                   const StateVector& ground, int site);

/// Full energy report at one site of the resolved ground state. The direct
/// sandwich evaluation is authoritative for every energy; the quadratic
/// form only supplies the extremal axis when the Bloch vector vanishes
/// (the three directions are then the eigenvectors of A, smallest
/// eigenvalue first).
EnergyReport exe(const ModelSpec& spec, const GroundStateBundle& bundle,
                 int site, double tol_bloch = kTolBloch,
                 double eer_floor = kEerFloor);

/// Closed-form excitation energy along the extremal axis from single-site
/// observables (S normalization),
///
///   dE = -16 [ (g_xx M_z^2 - M_x M_z g_zx) / (1 - tau)
///              + delta_y g_yy / 4
///              + delta_z (g_zz M_x^2 + M_x M_z g_zx) / (1 - tau) ].
///
/// Evaluated per site with that site's observables; matches the direct
/// evaluation to near machine precision on resolved states in both phases.
/// Throws when 1 - tau underflows (tau within 1e-12 of 1).
double exe_closed_form(const SiteObservables& obs, double delta_y,
                       double delta_z);

/// h_f = sqrt((1 + delta_z)(delta_y + delta_z)): the transverse field at
/// which the ground state becomes an exact product state.
double factorization_field(double delta_y, double delta_z);

} // namespace squo
