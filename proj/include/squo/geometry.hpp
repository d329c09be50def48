#pragma once

#include <array>
#include <optional>

#include "squo/state.hpp"

namespace squo {

/// Below this Bloch-vector norm the extremal direction is undefined (the
/// defining expression is 0/0 there, e.g. the XX chain at h = 0).
inline constexpr double kTolBloch = 1e-9;

/// A point on the single-spin Bloch sphere,
/// u = (sin t cos p, sin t sin p, cos t), theta in [0, pi], phi in [0, 2pi).
struct Direction {
    double theta = 0.0;
    double phi = 0.0;
    std::array<double, 3> u{0.0, 0.0, 1.0};

    static Direction from_angles(double theta, double phi);
    /// Normalizes v and derives the angles; throws on a zero vector.
    static Direction from_vector(const std::array<double, 3>& v);
};

/// The extremal direction together with the two orthogonal directions used
/// by the orthogonal excitation energies. With pt = (cos pt, sin pt) built
/// from the azimuth, perp1 = (cos t cos p, cos t sin p, -sin t) and
/// perp2 = (-sin p, cos p, 0); for an in-plane Bloch vector (p = 0) these
/// reduce to (cos t, 0, -sin t) and (0, 1, 0).
struct ExtremalFrame {
    Direction tilde;
    Direction perp1;
    Direction perp2;
    bool defined = false;
};

/// Hilbert-Schmidt distance between |state> and (u.sigma_site)|state>:
/// d = sqrt(1 - <u.sigma>^2), in [0, 1].
double distance(const StateVector& state, int site, const Direction& u);

/// Direction parallel to the site's Pauli Bloch vector m = <sigma>;
/// nullopt when |m| < tol_bloch.
std::optional<Direction> extremal_direction(const std::array<double, 3>& m_pauli,
                                            double tol_bloch = kTolBloch);

/// min_u d^2 = 1 - |m_pauli|^2; equals the tangle (linear entropy).
double min_squared_distance(const StateVector& state, int site);

ExtremalFrame extremal_frame(const std::array<double, 3>& m_pauli,
                             double tol_bloch = kTolBloch);

/// Convenience overload applying (u.sigma) for a Direction.
StateVector apply_bloch(const StateVector& state, int site, const Direction& u);

} // namespace squo
