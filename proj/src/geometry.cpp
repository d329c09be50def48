#include "squo/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace squo {

namespace {

/// Canonical angles for a unit vector: theta = atan2(hypot(x,y), z) lands in
/// [0, pi], and phi = atan2(y, x) is wrapped from (-pi, pi] into [0, 2*pi).
/// At the poles hypot(x,y) vanishes and phi collapses to 0.
void angles_from_unit(const std::array<double, 3>& u, double& theta, double& phi) {
    const double rho = std::hypot(u[0], u[1]);
    theta = std::atan2(rho, u[2]);
    phi = std::atan2(u[1], u[0]);
    if (phi < 0.0) phi += 2.0 * M_PI;
    if (rho == 0.0) phi = 0.0;
}

} // namespace

Direction Direction::from_angles(double theta, double phi) {
    Direction d;
    const double st = std::sin(theta);
    d.u = {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
    const double n = std::sqrt(d.u[0] * d.u[0] + d.u[1] * d.u[1] + d.u[2] * d.u[2]);
    for (double& c : d.u) c /= n;
    angles_from_unit(d.u, d.theta, d.phi);
    return d;
}

Direction Direction::from_vector(const std::array<double, 3>& v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(n > 0.0))
        throw std::invalid_argument("Direction::from_vector: zero vector has no direction");
    Direction d;
    d.u = {v[0] / n, v[1] / n, v[2] / n};
    angles_from_unit(d.u, d.theta, d.phi);
    return d;
}

double distance(const StateVector& state, int site, const Direction& u) {
    const StateVector rotated = apply_bloch(state, site, u.u);
    const double overlap = inner(state, rotated).real();
    const double d2 = 1.0 - overlap * overlap;
    return std::sqrt(std::max(0.0, d2));
}

double min_squared_distance(const StateVector& state, int site) {
    double m2 = 0.0;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const StateVector s = apply_pauli(state, site, a);
        const double c = inner(state, s).real();
        m2 += c * c;
    }
    return std::max(0.0, 1.0 - m2);
}

std::optional<Direction> extremal_direction(const std::array<double, 3>& m_pauli,
                                            double tol_bloch) {
    const double n = std::sqrt(m_pauli[0] * m_pauli[0] + m_pauli[1] * m_pauli[1] +
                               m_pauli[2] * m_pauli[2]);
    if (n < tol_bloch) return std::nullopt;
    return Direction::from_vector(m_pauli);
}

ExtremalFrame extremal_frame(const std::array<double, 3>& m_pauli, double tol_bloch) {
    ExtremalFrame f;
    const std::optional<Direction> tilde = extremal_direction(m_pauli, tol_bloch);
    if (!tilde) {
        // No preferred axis; callers with more context (e.g. the quadratic
        // form of the excitation energy) substitute their own frame.
        f.defined = false;
        f.tilde = Direction::from_vector({0.0, 0.0, 1.0});
        f.perp1 = Direction::from_vector({1.0, 0.0, 0.0});
        f.perp2 = Direction::from_vector({0.0, 1.0, 0.0});
        return f;
    }
    f.defined = true;
    f.tilde = *tilde;
    const double ct = std::cos(f.tilde.theta), st = std::sin(f.tilde.theta);
    const double cp = std::cos(f.tilde.phi), sp = std::sin(f.tilde.phi);
    f.perp1 = Direction::from_vector({ct * cp, ct * sp, -st});
    f.perp2 = Direction::from_vector({-sp, cp, 0.0});
    return f;
}

StateVector apply_bloch(const StateVector& state, int site, const Direction& dir) {
    return apply_bloch(state, site, dir.u);
}

} // namespace squo
