#include "squo/ground_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace squo {

namespace {

double pauli_expectation(const StateVector& state, int site, Axis a) {
    return inner(state, apply_pauli(state, site, a)).real();
}

/// J(t) = a0 + a1 cos t + b1 sin t + a2 cos 2t + b2 sin 2t.  The total Bloch
/// norm of cos(t/2) v1 + sin(t/2) v2 is exactly of this form, so the search
/// for the optimal combination reduces to a two-harmonic trig polynomial.
struct TrigPoly {
    double a0 = 0, a1 = 0, b1 = 0, a2 = 0, b2 = 0;

    double value(double t) const {
        return a0 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) +
               b2 * std::sin(2 * t);
    }
    double deriv(double t) const {
        return -a1 * std::sin(t) + b1 * std::cos(t) -
               2 * a2 * std::sin(2 * t) + 2 * b2 * std::cos(2 * t);
    }
    double deriv2(double t) const {
        return -a1 * std::cos(t) - b1 * std::sin(t) -
               4 * a2 * std::cos(2 * t) - 4 * b2 * std::sin(2 * t);
    }
};

double golden_max(const TrigPoly& J, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = J.value(c), fd = J.value(d);
    for (int it = 0; it < 120 && (b - a) > 1e-15; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = J.value(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = J.value(d);
        }
    }
    return 0.5 * (a + b);
}

/// Global parity flip Pz = prod_k sigma^z_k.  Commutes with the Hamiltonian,
/// so the flipped state stays inside the degenerate subspace, and it negates
/// every <sigma^x_k> and <sigma^y_k>.
void parity_flip(StateVector& s) {
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (std::popcount(i) & 1U) s.amp[i] = -s.amp[i];
}

void check_site(const StateVector& state, int site) {
    if (site < 0 || site >= state.n_sites)
        throw std::out_of_range("site index out of range");
}

} // namespace

GroundStateBundle resolve_ground_state(const std::pair<EigenPair, EigenPair>& pair,
                                       double tol_deg) {
    GroundStateBundle b;
    b.pair = pair;
    b.gap = pair.second.value - pair.first.value;
    if (b.gap < -1e-12)
        throw std::invalid_argument("resolve_ground_state: eigenpairs out of order");
    b.degenerate = b.gap < tol_deg;
    if (!b.degenerate) {
        b.resolved = pair.first.vector;
        b.resolved_broken = false;
        return b;
    }

    const StateVector& v1 = pair.first.vector;
    const StateVector& v2 = pair.second.vector;
    const int n = v1.n_sites;

    TrigPoly J;
    for (int site = 0; site < n; ++site) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            const StateVector s1 = apply_pauli(v1, site, a);
            const StateVector s2 = apply_pauli(v2, site, a);
            const double d1 = inner(v1, s1).real();
            const double d2 = inner(v2, s2).real();
            const double cross = inner(v1, s2).real();
            const double p = 0.5 * (d1 + d2);
            const double q = 0.5 * (d1 - d2);
            J.a0 += p * p + 0.5 * (q * q + cross * cross);
            J.a1 += 2.0 * p * q;
            J.b1 += 2.0 * p * cross;
            J.a2 += 0.5 * (q * q - cross * cross);
            J.b2 += q * cross;
        }
    }

    constexpr int kGrid = 1024;
    constexpr double kTwoPi = 2.0 * M_PI;
    double t_best = 0.0, j_best = J.value(0.0);
    for (int i = 1; i < kGrid; ++i) {
        const double t = kTwoPi * i / kGrid;
        const double j = J.value(t);
        if (j > j_best) { j_best = j; t_best = t; }
    }
    const double spacing = kTwoPi / kGrid;
    double t_opt = golden_max(J, t_best - spacing, t_best + spacing);
    // Newton polish on J'(t) = 0: golden-section localizes the argmax only to
    // ~sqrt(eps) because it compares nearly equal function values, while the
    // derivative root is conditioned like the derivative itself.
    for (int it = 0; it < 8; ++it) {
        const double curv = J.deriv2(t_opt);
        if (!(curv < 0.0)) break;
        const double step = J.deriv(t_opt) / curv;
        if (std::abs(step) > spacing) break;
        t_opt -= step;
        if (std::abs(step) < 1e-15) break;
    }

    const double c = std::cos(0.5 * t_opt), s = std::sin(0.5 * t_opt);
    StateVector psi = StateVector::zero(n);
    for (std::size_t i = 0; i < psi.dim(); ++i)
        psi.amp[i] = c * v1.amp[i] + s * v2.amp[i];
    psi.normalize();

    double staggered = 0.0;
    for (int k = 0; k < n; ++k) {
        const double sx = 0.5 * pauli_expectation(psi, k, Axis::X);
        staggered += (k & 1 ? -sx : sx);
    }
    if (std::abs(staggered) / n < kTolStaggered) {
        b.resolved = v1;
        b.resolved_broken = false;
        return b;
    }
    if (pauli_expectation(psi, 0, Axis::X) < 0.0) parity_flip(psi);
    b.resolved = std::move(psi);
    b.resolved_broken = true;
    return b;
}

std::array<double, 3> magnetization(const StateVector& state, int site) {
    return {0.5 * pauli_expectation(state, site, Axis::X),
            0.5 * pauli_expectation(state, site, Axis::Y),
            0.5 * pauli_expectation(state, site, Axis::Z)};
}

Eigen::Matrix3d bond_correlator(const StateVector& state, int i) {
    check_site(state, i);
    const int j = (i + 1) % state.n_sites;
    std::array<StateVector, 3> left, right;
    for (int a = 0; a < 3; ++a) {
        left[a] = apply_pauli(state, i, static_cast<Axis>(a));
        right[a] = apply_pauli(state, j, static_cast<Axis>(a));
    }
    Eigen::Matrix3d g;
    for (int a = 0; a < 3; ++a)
        for (int bb = 0; bb < 3; ++bb)
            g(a, bb) = 0.25 * inner(left[a], right[bb]).real();
    return g;
}

Eigen::Matrix2cd reduced_density(const StateVector& state, int site) {
    check_site(state, site);
    const std::size_t mask = std::size_t{1} << site;
    cplx r00 = 0, r01 = 0, r11 = 0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mask) continue;
        const cplx up = state.amp[i];
        const cplx down = state.amp[i | mask];
        r00 += up * std::conj(up);
        r11 += down * std::conj(down);
        r01 += up * std::conj(down);
    }
    Eigen::Matrix2cd rho;
    rho << r00, r01, std::conj(r01), r11;
    return rho;
}

double tangle(const StateVector& state, int site) {
    const Eigen::Matrix2cd rho = reduced_density(state, site);
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    return std::clamp(4.0 * det, 0.0, 1.0);
}

double vn_entropy(double tangle) {
    if (tangle < -1e-10 || tangle > 1.0 + 1e-10)
        throw std::domain_error("vn_entropy: tangle outside [0, 1]");
    const double tau = std::clamp(tangle, 0.0, 1.0);
    const double x = 0.5 * (1.0 + std::sqrt(1.0 - tau));
    auto plog2 = [](double v) { return v > 0.0 ? v * std::log2(v) : 0.0; };
    return -plog2(x) - plog2(1.0 - x);
}

SiteObservables site_observables(const StateVector& state, int site) {
    check_site(state, site);
    SiteObservables o;
    o.site = site;
    for (int a = 0; a < 3; ++a) {
        o.m_pauli[a] = pauli_expectation(state, site, static_cast<Axis>(a));
        o.M_spin[a] = 0.5 * o.m_pauli[a];
    }
    o.g = bond_correlator(state, site);
    const Eigen::Matrix2cd rho = reduced_density(state, site);
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    o.tangle = std::clamp(4.0 * det, 0.0, 1.0);
    const double purity = (rho * rho).trace().real();
    o.linear_entropy = 2.0 * (1.0 - purity);
    o.vn_entropy = vn_entropy(o.tangle);
    return o;
}

} // namespace squo
