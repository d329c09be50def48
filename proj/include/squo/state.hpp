#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace squo {

using cplx = std::complex<double>;

/// Full state vector over the 2^N spin-1/2 product basis.
///
/// Basis convention: bit k of a basis index encodes site k (little-endian),
/// bit value 0 = up, 1 = down. Spin operators S^a = sigma^a / 2 are used for
/// all Hamiltonian couplings; single-site unitary operations act at the
/// sigma level.
struct StateVector {
    std::vector<cplx> amp;
    int n_sites = 0;

    StateVector() = default;
    StateVector(int n, std::vector<cplx> a) : amp(std::move(a)), n_sites(n) {}

    static StateVector zero(int n_sites);
    /// Product basis state |index>, amplitude 1 on the given index.
    static StateVector basis_state(int n_sites, std::uint64_t index);

    std::size_t dim() const { return amp.size(); }
    double norm() const;
    void normalize();
};

enum class Axis : int { X = 0, Y = 1, Z = 2 };

/// sigma^axis at `site` applied to `state`; the input is left unmodified.
StateVector apply_pauli(const StateVector& state, int site, Axis axis);

/// (u . sigma) at `site` for a unit vector u; unitary and Hermitian, so the
/// norm is preserved. Throws if |u| deviates from 1 by more than 1e-12.
StateVector apply_bloch(const StateVector& state, int site,
                        const std::array<double, 3>& u);

/// Hermitian inner product <a|b>.
cplx inner(const StateVector& a, const StateVector& b);

/// Expectation of the global parity operator P = prod_k sigma^z_k, which is
/// diagonal in the computational basis: P|b> = (-1)^popcount(b) |b>.
double parity_z_expectation(const StateVector& state);

} // namespace squo
