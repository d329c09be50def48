#include "squo/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace squo {

void validate(const SolverConfig& cfg) {
    if (cfg.max_krylov_dim < 4)
        throw std::invalid_argument("solver.max_krylov_dim: must be >= 4");
    if (!(cfg.residual_tol > 0.0))
        throw std::invalid_argument("solver.residual_tol: must be positive");
    if (cfg.dense_threshold < 1 || cfg.dense_threshold > 14)
        throw std::invalid_argument("solver.dense_threshold: must lie in [1, 14]");
    if (cfg.max_restarts < 1)
        throw std::invalid_argument("solver.max_restarts: must be >= 1");
}

namespace {

Eigen::MatrixXd dense_hamiltonian(const ModelSpec& spec) {
    const std::size_t dim = std::size_t{1} << spec.n_sites;
    Eigen::MatrixXd H(dim, dim);
    std::vector<double> unit(dim, 0.0), col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        unit[j] = 1.0;
        apply_hamiltonian_real(spec, unit.data(), col.data(), dim);
        unit[j] = 0.0;
        H.col(j) = Eigen::Map<Eigen::VectorXd>(col.data(), dim);
    }
    return H;
}

/// Deterministic sign convention: the largest-magnitude component is made
/// positive, so repeated solves (and independent solvers) agree on vectors,
/// not just on values.
void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
}

StateVector to_state(int n_sites, const Eigen::VectorXd& v) {
    StateVector s = StateVector::zero(n_sites);
    for (std::size_t i = 0; i < s.dim(); ++i) s.amp[i] = cplx{v[i], 0.0};
    return s;
}

struct LanczosOutcome {
    double value = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    bool converged = false;
};

/// Lowest eigenpair of H restricted to the orthogonal complement of
/// `deflate`, by restarted Lanczos with full reorthogonalization (the basis
/// is kept, so ghost eigenvalues cannot appear).
LanczosOutcome lanczos_lowest(const ModelSpec& spec, const SolverConfig& cfg,
                              const std::vector<Eigen::VectorXd>& deflate,
                              std::mt19937_64& rng) {
    const std::size_t dim = std::size_t{1} << spec.n_sites;
    const int m_max = std::min<std::size_t>(cfg.max_krylov_dim, dim);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    auto project_out = [&](Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis,
                           int count) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const Eigen::VectorXd& d : deflate) w -= d.dot(w) * d;
            for (int k = 0; k < count; ++k) w -= basis[k].dot(w) * basis[k];
        }
    };

    auto random_start = [&]() {
        Eigen::VectorXd v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = uni(rng);
        std::vector<Eigen::VectorXd> none;
        project_out(v, none, 0);
        v.normalize();
        return v;
    };

    Eigen::VectorXd start = random_start();
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(m_max);
    Eigen::VectorXd hv(dim), ritz(dim);
    LanczosOutcome best;
    best.residual = std::numeric_limits<double>::infinity();

    for (int cycle = 0; cycle < cfg.max_restarts; ++cycle) {
        basis.clear();
        basis.push_back(start);
        std::vector<double> alpha, beta;
        bool breakdown = false;

        for (int j = 0; j < m_max; ++j) {
            apply_hamiltonian_real(spec, basis[j].data(), hv.data(), dim);
            Eigen::VectorXd w = hv;
            if (j > 0) w -= beta[j - 1] * basis[j - 1];
            alpha.push_back(basis[j].dot(w));
            w -= alpha[j] * basis[j];
            project_out(w, basis, j + 1);
            const double b = w.norm();

            // Cheap convergence probe on the tridiagonal Ritz pair; the
            // explicit residual below is what actually decides success.
            const bool probe = (j + 1 == m_max) || b < 1e-13 || (j > 0 && j % 8 == 0);
            if (probe) {
                const int m = j + 1;
                Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
                for (int k = 0; k < m; ++k) T(k, k) = alpha[k];
                for (int k = 0; k + 1 < m; ++k) {
                    T(k, k + 1) = beta[k];
                    T(k + 1, k) = beta[k];
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
                const double theta = es.eigenvalues()[0];
                const Eigen::VectorXd y = es.eigenvectors().col(0);
                const double est = b * std::abs(y[m - 1]);
                if (est <= 0.1 * cfg.residual_tol * std::max(1.0, std::abs(theta)) ||
                    b < 1e-13 || j + 1 == m_max) {
                    ritz.setZero(dim);
                    for (int k = 0; k < m; ++k) ritz += y[k] * basis[k];
                    project_out(ritz, basis, 0);
                    ritz.normalize();
                    apply_hamiltonian_real(spec, ritz.data(), hv.data(), dim);
                    const double lambda = ritz.dot(hv);
                    const double res = (hv - lambda * ritz).norm();
                    if (res < best.residual) {
                        best.value = lambda;
                        best.vector = ritz;
                        best.residual = res;
                    }
                    if (res <= cfg.residual_tol * std::max(1.0, std::abs(lambda))) {
                        best.converged = true;
                        fix_sign(best.vector);
                        return best;
                    }
                    if (b < 1e-13) breakdown = true;
                    break;
                }
            }
            if (b < 1e-13) { breakdown = true; break; }
            beta.push_back(b);
            basis.push_back(w / b);
        }

        // Warm restart from the best Ritz vector; a breakdown without
        // convergence means the Krylov space closed on an invariant
        // subspace missing the target, so draw a fresh direction.
        start = breakdown ? random_start() : best.vector;
        if (!breakdown) {
            std::vector<Eigen::VectorXd> none;
            project_out(start, none, 0);
            const double n = start.norm();
            if (n < 1e-14) start = random_start();
            else start /= n;
        }
    }
    return best;
}

} // namespace

std::pair<EigenPair, EigenPair> lowest_two(const ModelSpec& spec,
                                           const SolverConfig& cfg) {
    validate(spec);
    validate(cfg);
    const std::size_t dim = std::size_t{1} << spec.n_sites;

    if (dim <= static_cast<std::size_t>(cfg.max_krylov_dim)) {
        const Eigen::MatrixXd H = dense_hamiltonian(spec);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        Eigen::VectorXd v0 = es.eigenvectors().col(0);
        Eigen::VectorXd v1 = es.eigenvectors().col(1);
        fix_sign(v0);
        fix_sign(v1);
        return {EigenPair{es.eigenvalues()[0], to_state(spec.n_sites, v0)},
                EigenPair{es.eigenvalues()[1], to_state(spec.n_sites, v1)}};
    }

    std::mt19937_64 rng(cfg.seed);
    LanczosOutcome first = lanczos_lowest(spec, cfg, {}, rng);
    if (!first.converged)
        throw SolverFailure(
            "eigensolver: first eigenpair not converged (achieved residual " +
                std::to_string(first.residual) + ")",
            first.residual);
    LanczosOutcome second = lanczos_lowest(spec, cfg, {first.vector}, rng);
    if (!second.converged)
        throw SolverFailure(
            "eigensolver: second eigenpair not converged (achieved residual " +
                std::to_string(second.residual) + ")",
            second.residual);

    if (second.value < first.value) std::swap(first, second);
    return {EigenPair{first.value, to_state(spec.n_sites, first.vector)},
            EigenPair{second.value, to_state(spec.n_sites, second.vector)}};
}

std::vector<double> dense_spectrum(const ModelSpec& spec,
                                   const SolverConfig& cfg) {
    validate(spec);
    validate(cfg);
    if (spec.n_sites > cfg.dense_threshold)
        throw std::invalid_argument(
            "dense_spectrum: n_sites " + std::to_string(spec.n_sites) +
            " exceeds dense_threshold " + std::to_string(cfg.dense_threshold));
    const Eigen::MatrixXd H = dense_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace squo
