#include "squo/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace squo {

namespace {

void check_site(const StateVector& s, int site) {
    if (site < 0 || site >= s.n_sites)
        throw std::out_of_range("site index " + std::to_string(site) +
                                " out of range for " +
                                std::to_string(s.n_sites) + " sites");
}

} // namespace

StateVector StateVector::zero(int n_sites) {
    StateVector s;
    s.n_sites = n_sites;
    s.amp.assign(std::size_t{1} << n_sites, cplx{0.0, 0.0});
    return s;
}

StateVector StateVector::basis_state(int n_sites, std::uint64_t index) {
    StateVector s = zero(n_sites);
    if (index >= s.dim())
        throw std::out_of_range("basis index out of range");
    s.amp[index] = cplx{1.0, 0.0};
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const cplx& a : amp) acc += std::norm(a);
    return std::sqrt(acc);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    for (cplx& a : amp) a /= n;
}

StateVector apply_pauli(const StateVector& state, int site, Axis axis) {
    check_site(state, site);
    const std::size_t dim = state.dim();
    const std::size_t mask = std::size_t{1} << site;
    StateVector out = StateVector::zero(state.n_sites);
    switch (axis) {
        case Axis::X:
            for (std::size_t i = 0; i < dim; ++i) out.amp[i ^ mask] = state.amp[i];
            break;
        case Axis::Y:
            // sigma^y |0> = i |1>, sigma^y |1> = -i |0>
            for (std::size_t i = 0; i < dim; ++i) {
                const cplx phase = (i & mask) ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
                out.amp[i ^ mask] = phase * state.amp[i];
            }
            break;
        case Axis::Z:
            for (std::size_t i = 0; i < dim; ++i)
                out.amp[i] = (i & mask) ? -state.amp[i] : state.amp[i];
            break;
    }
    return out;
}

StateVector apply_bloch(const StateVector& state, int site,
                        const std::array<double, 3>& u) {
    check_site(state, site);
    const double n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if (std::abs(n2 - 1.0) > 2e-12)
        throw std::invalid_argument("apply_bloch requires a unit direction");
    const std::size_t dim = state.dim();
    const std::size_t mask = std::size_t{1} << site;
    // u.sigma = [[u_z, u_x - i u_y], [u_x + i u_y, -u_z]] in the {up, down}
    // single-site basis.
    const cplx lower{u[0], u[1]};   // acts on the up component
    const cplx upper{u[0], -u[1]};  // acts on the down component
    StateVector out = StateVector::zero(state.n_sites);
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        out.amp[i] = u[2] * state.amp[i] + upper * state.amp[j];
        out.amp[j] = lower * state.amp[i] - u[2] * state.amp[j];
    }
    return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

double parity_z_expectation(const StateVector& state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double w = std::norm(state.amp[i]);
        acc += (std::popcount(i) & 1) ? -w : w;
    }
    return acc;
}

} // namespace squo
