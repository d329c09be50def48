#include "squo/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace squo {

void validate(const ModelSpec& spec) {
    if (spec.n_sites < 2 || spec.n_sites % 2 != 0)
        throw std::invalid_argument("model.n_sites: must be an even integer >= 2");
    if (spec.n_sites > kMaxSites)
        throw std::invalid_argument("model.n_sites: exceeds the hard cap of " +
                                    std::to_string(kMaxSites));
    if (spec.boundary == Boundary::Periodic && spec.n_sites < 4)
        throw std::invalid_argument(
            "model.boundary: periodic chains need n_sites >= 4 (a two-site "
            "ring would double-count its single bond)");
    if (!(spec.delta_y >= 0.0 && spec.delta_y <= 1.0))
        throw std::invalid_argument("model.delta_y: must lie in [0, 1]");
    if (!(spec.delta_z >= 0.0 && spec.delta_z <= 1.0))
        throw std::invalid_argument("model.delta_z: must lie in [0, 1]");
    if (!(spec.h >= 0.0))
        throw std::invalid_argument("model.h: must be >= 0");
}

namespace {

// Shared kernel for real and complex amplitudes. Couplings use S = sigma/2:
// the diagonal carries delta_z/4 per bond and -h/2 per site; each bond
// flips the two bond bits with amplitude (1 - delta_y)/4 when the bits are
// equal (sigma^x sigma^x contributes +1/4, sigma^y sigma^y gives
// -delta_y/4) and (1 + delta_y)/4 when they differ.
template <class T>
void apply_h_impl(const ModelSpec& spec, const T* in, T* out, std::size_t dim) {
    const int n = spec.n_sites;
    const int n_bonds =
        spec.boundary == Boundary::Periodic ? n : n - 1;
    const double zz = 0.25 * spec.delta_z;
    const double flip_eq = 0.25 * (1.0 - spec.delta_y);
    const double flip_ne = 0.25 * (1.0 + spec.delta_y);
    const double hz = 0.5 * spec.h;

    for (std::size_t i = 0; i < dim; ++i) {
        // Zeeman: -h/2 * (N - 2 popcount) since each up spin contributes +1.
        const int down = std::popcount(i & ((std::size_t{1} << n) - 1));
        double diag = -hz * static_cast<double>(n - 2 * down);
        for (int b = 0; b < n_bonds; ++b) {
            const int k = b;
            const int l = (b + 1) % n;
            const bool eq = (((i >> k) ^ (i >> l)) & 1) == 0;
            diag += eq ? zz : -zz;
        }
        out[i] = diag * in[i];
    }
    for (int b = 0; b < n_bonds; ++b) {
        const std::size_t mk = std::size_t{1} << b;
        const std::size_t ml = std::size_t{1} << ((b + 1) % n);
        const std::size_t mask = mk | ml;
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t j = i ^ mask;
            if (j < i) continue;
            const bool eq = ((i & mk) != 0) == ((i & ml) != 0);
            const double c = eq ? flip_eq : flip_ne;
            const T a = in[i];
            out[i] += c * in[j];
            out[j] += c * a;
        }
    }
}

} // namespace

StateVector apply_hamiltonian(const ModelSpec& spec, const StateVector& state) {
    validate(spec);
    const std::size_t dim = std::size_t{1} << spec.n_sites;
    if (state.dim() != dim)
        throw std::invalid_argument("apply_hamiltonian: state length " +
                                    std::to_string(state.dim()) +
                                    " does not match 2^n_sites");
    StateVector out = StateVector::zero(spec.n_sites);
    apply_h_impl<cplx>(spec, state.amp.data(), out.amp.data(), dim);
    return out;
}

double energy_expectation(const ModelSpec& spec, const StateVector& state) {
    const StateVector hs = apply_hamiltonian(spec, state);
    return inner(state, hs).real();
}

void apply_hamiltonian_real(const ModelSpec& spec, const double* in,
                            double* out, std::size_t dim) {
    apply_h_impl<double>(spec, in, out, dim);
}

} // namespace squo
