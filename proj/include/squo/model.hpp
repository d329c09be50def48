#pragma once

#include <cstddef>

#include "squo/state.hpp"

namespace squo {

/// Anisotropic XYZ chain in a transverse field,
///
///   H = sum_i [ S^x_i S^x_{i+1} + delta_y S^y_i S^y_{i+1}
///               + delta_z S^z_i S^z_{i+1} ] - h sum_i S^z_i,
///
/// with S = sigma/2, antiferromagnetic sign (positive couplings) and the
/// bond sum over i = 0..N-1 (periodic) or 0..N-2 (open).
enum class Boundary { Periodic, Open };

struct ModelSpec {
    int n_sites = 4;
    double delta_y = 0.0;
    double delta_z = 0.0;
    double h = 0.0;
    Boundary boundary = Boundary::Periodic;
};

/// Hard cap on the chain length accepted by any dense or iterative solve.
inline constexpr int kMaxSites = 20;

/// Throws std::invalid_argument naming the offending field when the spec
/// violates its invariants (even 2 <= n_sites <= 20, periodic needs
/// n_sites >= 4, anisotropies in [0,1], h >= 0).
void validate(const ModelSpec& spec);

/// H|state>, matrix-free. Throws on dimension mismatch or invalid spec.
StateVector apply_hamiltonian(const ModelSpec& spec, const StateVector& state);

/// <state|H|state> for a normalized state; the imaginary part (zero for a
/// Hermitian H up to roundoff) is discarded.
double energy_expectation(const ModelSpec& spec, const StateVector& state);

/// Real-arithmetic kernel: out = H in, both of length dim = 2^n_sites.
/// H has real matrix elements in the computational basis (the sigma^y
/// sigma^y product is real), which the iterative solver exploits.
void apply_hamiltonian_real(const ModelSpec& spec, const double* in,
                            double* out, std::size_t dim);

} // namespace squo
