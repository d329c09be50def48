#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "squo/model.hpp"
#include "squo/state.hpp"

namespace squo {

struct EigenPair {
    double value = 0.0;
    StateVector vector;
};

struct SolverConfig {
    int max_krylov_dim = 200;   ///< Krylov basis size per restart cycle.
    double residual_tol = 1e-10;
    int dense_threshold = 12;   ///< largest N accepted by dense_spectrum.
    std::uint64_t seed = 1234;  ///< seeds the random start vector.
    int max_restarts = 40;
};

/// Thrown when the iterative solver fails to reach residual_tol within
/// max_restarts cycles of max_krylov_dim vectors each.
struct SolverFailure : std::runtime_error {
    double achieved_residual;
    explicit SolverFailure(const std::string& msg, double residual)
        : std::runtime_error(msg), achieved_residual(residual) {}
};

/// Range checks on the solver knobs; throws std::invalid_argument naming
/// the offending field.
void validate(const SolverConfig& cfg);

/// Two algebraically smallest eigenpairs of H, values ascending, vectors
/// normalized and mutually orthogonal. Deterministic given cfg.seed.
///
/// Dispatch: a dense solve when 2^N <= max_krylov_dim (the Krylov space
/// would span the full Hilbert space anyway), otherwise Lanczos with full
/// reorthogonalization and thick restarts; the second pair is obtained from
/// a run deflated against the first vector, which also handles exactly
/// degenerate crossings.
std::pair<EigenPair, EigenPair> lowest_two(const ModelSpec& spec,
                                           const SolverConfig& cfg);

/// All 2^N eigenvalues, ascending. Requires n_sites <= dense_threshold.
std::vector<double> dense_spectrum(const ModelSpec& spec,
                                   const SolverConfig& cfg = {});

} // namespace squo
