#include "squo/energetics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace squo {

namespace {

int axis_index(Axis a) { return static_cast<int>(a); }

} // namespace

double excitation_energy_direct(const ModelSpec& spec, const StateVector& ground,
                                int site, const Direction& u) {
    const StateVector rotated = apply_bloch(ground, site, u.u);
    return energy_expectation(spec, rotated) - energy_expectation(spec, ground);
}

double epsilon_cross(const ModelSpec& spec, const StateVector& ground, int site,
                     Axis a, Axis b) {
    if (a == b)
        throw std::invalid_argument("epsilon_cross: axes must differ");
    const StateVector sa = apply_pauli(ground, site, a);
    const StateVector sb = apply_pauli(ground, site, b);
    const StateVector h_sb = apply_hamiltonian(spec, sb);
    // <sa|H|sb> + <sb|H|sa> = 2 Re <sa|H|sb> for Hermitian H.
    return 2.0 * inner(sa, h_sb).real();
}

QuadraticForm build_quadratic_form(const ModelSpec& spec, const StateVector& ground,
                                   int site) {
    QuadraticForm qf;
    qf.e0 = energy_expectation(spec, ground);
    std::array<StateVector, 3> s, hs;
    for (int a = 0; a < 3; ++a) {
        s[a] = apply_pauli(ground, site, static_cast<Axis>(a));
        hs[a] = apply_hamiltonian(spec, s[a]);
    }
    for (int a = 0; a < 3; ++a) {
        qf.A(a, a) = inner(s[a], hs[a]).real() - qf.e0;
        for (int b = a + 1; b < 3; ++b) {
            const double off = inner(s[a], hs[b]).real();
            qf.A(a, b) = off;
            qf.A(b, a) = off;
        }
    }
    return qf;
}

EnergyReport exe(const ModelSpec& spec, const GroundStateBundle& bundle, int site,
                 double tol_bloch, double eer_floor) {
    const StateVector& ground = bundle.resolved;
    const SiteObservables obs = site_observables(ground, site);
    const ExtremalFrame frame = extremal_frame(obs.m_pauli, tol_bloch);

    Direction tilde = frame.tilde, perp1 = frame.perp1, perp2 = frame.perp2;
    if (!frame.defined) {
        // All directions are distance-degenerate; break the tie by energy,
        // taking the eigenframe of the quadratic form in ascending order.
        const QuadraticForm qf = build_quadratic_form(spec, ground, site);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(qf.A);
        auto column = [&](int j) {
            const Eigen::Vector3d v = es.eigenvectors().col(j);
            return Direction::from_vector({v[0], v[1], v[2]});
        };
        tilde = column(0);
        perp1 = column(1);
        perp2 = column(2);
    }

    const double e0 = energy_expectation(spec, ground);
    auto delta_e = [&](const Direction& d) {
        const StateVector rotated = apply_bloch(ground, site, d);
        return energy_expectation(spec, rotated) - e0;
    };

    EnergyReport r;
    r.site = site;
    r.frame_defined = frame.defined;
    r.exe = delta_e(tilde);
    r.de_perp1 = delta_e(perp1);
    r.de_perp2 = delta_e(perp2);

    const double split = r.de_perp1 - r.de_perp2;
    if (r.exe > eer_floor)
        r.eer = split / r.exe;
    else
        r.eer = split >= 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();

    r.exe_closed_form = std::numeric_limits<double>::quiet_NaN();
    const bool trustworthy = !bundle.degenerate || bundle.resolved_broken;
    if (trustworthy && frame.defined && obs.tangle < 1.0 - 1e-12)
        r.exe_closed_form = exe_closed_form(obs, spec.delta_y, spec.delta_z);
    return r;
}

double exe_closed_form(const SiteObservables& obs, double delta_y, double delta_z) {
    const double tau = obs.tangle;
    if (tau >= 1.0 - 1e-12)
        throw std::domain_error(
            "exe_closed_form: tangle too close to 1 (division by 1 - tau)");
    const double mx = obs.M_spin[axis_index(Axis::X)];
    const double mz = obs.M_spin[axis_index(Axis::Z)];
    const double gxx = obs.g(0, 0);
    const double gyy = obs.g(1, 1);
    const double gzz = obs.g(2, 2);
    const double gzx = obs.g(2, 0);
    const double one_m_tau = 1.0 - tau;
    return -16.0 * ((gxx * mz * mz - mx * mz * gzx) / one_m_tau +
                    delta_y * gyy / 4.0 +
                    delta_z * (gzz * mx * mx + mx * mz * gzx) / one_m_tau);
}

double factorization_field(double delta_y, double delta_z) {
    return std::sqrt((1.0 + delta_z) * (delta_y + delta_z));
}

} // namespace squo
