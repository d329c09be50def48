#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <squo/energetics.hpp>
#include <squo/geometry.hpp>
#include <squo/ground_state.hpp>
#include <squo/model.hpp>

#include "oracle.hpp"

using namespace squo;

namespace {

std::array<double, 3> random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<double, 3> u{};
    double n = 0.0;
    do {
        for (auto& c : u) c = gauss(rng);
        n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    } while (n < 1e-3);
    for (auto& c : u) c /= n;
    return u;
}

GroundStateBundle solve(const ModelSpec& spec) {
    return resolve_ground_state(lowest_two(spec, SolverConfig{}));
}

}  // namespace

TEST_CASE("factorization field closed form") {
    CHECK(factorization_field(0.4, 0.0) == doctest::Approx(std::sqrt(0.4)));
    CHECK(factorization_field(0.25, 1.0) == doctest::Approx(std::sqrt(2.5)));
    CHECK(factorization_field(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(factorization_field(0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("quadratic form reproduces the direct excitation energy") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        ModelSpec spec{6, unit(rng), unit(rng), 1.4 * unit(rng),
                       Boundary::Periodic};
        auto bundle = solve(spec);
        const auto& g = bundle.resolved;

        auto qf = build_quadratic_form(spec, g, 0);
        CHECK(qf.e0 == doctest::Approx(energy_expectation(spec, g)));

        for (int k = 0; k < 25; ++k) {
            auto u = random_unit(rng);
            Eigen::Vector3d uv(u[0], u[1], u[2]);
            double quad = uv.dot(qf.A * uv);
            double direct = excitation_energy_direct(
                spec, g, 0, Direction::from_vector(u));
            CHECK(std::abs(quad - direct) < 1e-11);
        }

        // diagonal entries are the axis excitation energies
        for (int a = 0; a < 3; ++a) {
            std::array<double, 3> e{};
            e[a] = 1.0;
            CHECK(std::abs(qf.A(a, a) -
                           excitation_energy_direct(
                               spec, g, 0, Direction::from_vector(e))) < 1e-11);
        }

        // and the whole matrix matches the dense-sandwich oracle
        auto ref = oracle::quadratic_form(spec, oracle::to_vec(g), 0);
        CHECK((qf.A - ref).norm() < 1e-10);
    }
}

TEST_CASE("epsilon_cross is symmetric and rejects equal axes") {
    ModelSpec spec{6, 0.5, 0.2, 0.8, Boundary::Periodic};
    auto bundle = solve(spec);
    const auto& g = bundle.resolved;
    CHECK(epsilon_cross(spec, g, 0, Axis::X, Axis::Z) ==
          doctest::Approx(epsilon_cross(spec, g, 0, Axis::Z, Axis::X)));
    CHECK_THROWS_AS(epsilon_cross(spec, g, 0, Axis::X, Axis::X),
                    std::invalid_argument);
}

TEST_CASE("singlet: every direction costs exactly the gap") {
    // two-site heisenberg: flipping either spin anywhere on the bloch sphere
    // lands in the triplet, so dE(u) = 1 for all u and the form is the identity
    ModelSpec spec{2, 1.0, 1.0, 0.0, Boundary::Open};
    auto bundle = solve(spec);

    auto qf = build_quadratic_form(spec, bundle.resolved, 0);
    CHECK((qf.A - Eigen::Matrix3d::Identity()).norm() < 1e-10);

    auto report = exe(spec, bundle, 0);
    CHECK_FALSE(report.frame_defined);  // bloch vector vanishes
    CHECK(report.exe == doctest::Approx(1.0));
    CHECK(report.de_perp1 == doctest::Approx(1.0));
    CHECK(report.de_perp2 == doctest::Approx(1.0));
    CHECK(report.eer == doctest::Approx(0.0));
    CHECK(std::isnan(report.exe_closed_form));
}

TEST_CASE("saturated xx chain: diag(h, h, 0) and a divergent ratio") {
    ModelSpec spec{6, 1.0, 0.0, 1.4, Boundary::Periodic};
    auto bundle = solve(spec);

    // fully polarized ground state
    CHECK(std::abs(std::abs(bundle.resolved.amp[0]) - 1.0) < 1e-10);

    auto qf = build_quadratic_form(spec, bundle.resolved, 0);
    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    expected(0, 0) = spec.h;
    expected(1, 1) = spec.h;
    CHECK((qf.A - expected).norm() < 1e-9);

    auto report = exe(spec, bundle, 0);
    CHECK(report.frame_defined);
    CHECK(report.exe < 1e-9);                       // dE along z
    CHECK(report.de_perp1 == doctest::Approx(spec.h).epsilon(1e-9));
    CHECK(report.de_perp2 == doctest::Approx(spec.h).epsilon(1e-9));
    CHECK(std::isinf(report.eer));                  // exe below the floor
}

TEST_CASE("closed form matches the direct evaluation in both phases") {
    // broken phase (resolved doublet) and polarized phase (unique gs)
    for (double h : {0.35, 0.9}) {
        ModelSpec spec{8, 0.4, 0.0, h, Boundary::Periodic};
        auto bundle = solve(spec);
        auto report = exe(spec, bundle, 0);
        REQUIRE_FALSE(std::isnan(report.exe_closed_form));
        CHECK(std::abs(report.exe_closed_form - report.exe) < 1e-10);

        auto obs = site_observables(bundle.resolved, 0);
        CHECK(exe_closed_form(obs, spec.delta_y, spec.delta_z) ==
              doctest::Approx(report.exe_closed_form));
    }
    // nonzero delta_z exercises the remaining terms
    ModelSpec spec{8, 0.25, 1.0, 2.0, Boundary::Periodic};
    auto bundle = solve(spec);
    auto report = exe(spec, bundle, 0);
    CHECK(std::abs(report.exe_closed_form - report.exe) < 1e-9);
}

TEST_CASE("closed form refuses a maximally mixed site") {
    ModelSpec spec{2, 1.0, 1.0, 0.0, Boundary::Open};
    auto bundle = solve(spec);
    auto obs = site_observables(bundle.resolved, 0);  // tangle = 1
    CHECK_THROWS_AS(exe_closed_form(obs, 1.0, 1.0), std::domain_error);
}

TEST_CASE("unresolved degenerate pair reports NaN for the closed form") {
    // a doublet without staggered order falls back to the symmetric vector,
    // for which the single-site formula is not meaningful
    auto bundle = resolve_ground_state(
        {EigenPair{-2.0, StateVector::basis_state(2, 0)},
         EigenPair{-2.0, StateVector::basis_state(2, 3)}});
    REQUIRE(bundle.degenerate);
    REQUIRE_FALSE(bundle.resolved_broken);
    ModelSpec spec{2, 1.0, 1.0, 0.0, Boundary::Open};
    auto report = exe(spec, bundle, 0);
    CHECK(std::isnan(report.exe_closed_form));
    CHECK(std::isfinite(report.exe));
}

TEST_CASE("direct excitation energies are non-negative on a ground state") {
    std::mt19937_64 rng(73);
    ModelSpec spec{6, 0.6, 0.3, 0.5, Boundary::Periodic};
    auto bundle = solve(spec);
    for (int k = 0; k < 40; ++k) {
        auto u = random_unit(rng);
        int site = static_cast<int>(rng() % 6);
        double de = excitation_energy_direct(spec, bundle.resolved, site,
                                             Direction::from_vector(u));
        CHECK(de > -1e-9);
    }
}

TEST_CASE("per-site reports agree on the two sublattices of a broken state") {
    ModelSpec spec{8, 0.4, 0.0, 0.5, Boundary::Periodic};
    auto bundle = solve(spec);
    REQUIRE(bundle.resolved_broken);
    auto r0 = exe(spec, bundle, 0);
    auto r1 = exe(spec, bundle, 1);
    auto r2 = exe(spec, bundle, 2);
    // translation by two sites is exact
    CHECK(r0.exe == doctest::Approx(r2.exe).epsilon(1e-9));
    // the mirrored sublattice sees the same excitation energies
    CHECK(r0.exe == doctest::Approx(r1.exe).epsilon(1e-8));
    CHECK(r0.de_perp1 == doctest::Approx(r1.de_perp1).epsilon(1e-8));
    CHECK(r0.de_perp2 == doctest::Approx(r1.de_perp2).epsilon(1e-8));
}
