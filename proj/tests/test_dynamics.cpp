// Copyright 2026 The ness-battery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "ness_battery/dynamics.hpp"
#include "ness_battery/error.hpp"
#include "oracles.hpp"

using namespace ness_battery;

namespace {

bool throws_code(auto&& fn, ErrorCode code) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

const ModelParams kParams = ModelParams::make(1.0, 0.01);

Liouvillian charging_liouvillian() {
    return build_liouvillian(kParams, rates_from_temperatures(1e-3, 1e-3, 2.0, 0.1, 1.0));
}

DensityMatrix random_diagonal_state() {
    return DensityMatrix::from_populations(Populations::from_array(oracle::random_probabilities()));
}

double hot_current_from_matrix(const Liouvillian& L, const ComplexMatrix& rho) {
    const oracle::DirectLindblad f = oracle::direct_lindblad(L);
    return (f.dissipator(rho, 0, 2) * L.hamiltonian).trace().real();
}

} // namespace

TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix::identity(4) * Complex(0.25)));
    CHECK(throws_code([] { DensityMatrix(ComplexMatrix::identity(4)); }, ErrorCode::InvalidDensityMatrix));
    CHECK(throws_code([] { DensityMatrix(ComplexMatrix::identity(2) * Complex(0.5)); }, ErrorCode::InvalidDensityMatrix));

    ComplexMatrix m = ComplexMatrix::identity(4) * Complex(0.25);
    m(0, 1) = 0.1;
    CHECK(throws_code([&] { DensityMatrix{m}; }, ErrorCode::InvalidDensityMatrix));

    const std::array<double, 4> neg{1.2, -0.2, 0.0, 0.0};
    CHECK(throws_code([&] { DensityMatrix(ComplexMatrix::diagonal(neg)); }, ErrorCode::InvalidDensityMatrix));

    const DensityMatrix ee = DensityMatrix::basis_state(Level::ee);
    CHECK(ee.populations().r_ee == 1.0);
    CHECK(ee.energy(build_hamiltonian(kParams)) == 2.0);
    CHECK(ee.max_coherence() == 0.0);
}

TEST_CASE("closed-system limit is unitary evolution") {
    const Liouvillian L = build_liouvillian(kParams, BathRates::raw(0.0, 0.0, 0.0, 0.0));
    const ComplexMatrix rho0 = oracle::random_state();
    const double t = 37.5;
    const auto levels = energy_levels(kParams);
    std::vector<Complex> phases;
    for (const auto& lvl : levels) phases.push_back(std::exp(Complex(0.0, -lvl.energy * t)));
    const ComplexMatrix u = ComplexMatrix::diagonal(phases);
    const ComplexMatrix expected = u * rho0 * u.adjoint();
    CHECK(max_abs_diff(propagate(L, DensityMatrix(rho0), t).matrix(), expected) < 1e-12);
    CHECK(throws_code([&] { solve_ness(L); }, ErrorCode::DegenerateSteadyState));
}

TEST_CASE("superoperator agrees with the matrix-form master equation") {
    const Liouvillian L = charging_liouvillian();
    const oracle::DirectLindblad f = oracle::direct_lindblad(L);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rho = oracle::random_state();
        const ComplexVector v = L.superoperator * std::span<const Complex>(vectorize(rho));
        CHECK(max_abs_diff(devectorize(v), f(rho)) < 1e-15);
    }
    CHECK(max_abs_diff(L.superoperator, L.unitary_part + L.hot_part + L.cold_part) == 0.0);
}

TEST_CASE("propagation matches an RK4 integration") {
    const Liouvillian L = charging_liouvillian();
    const ComplexMatrix rho0 = oracle::random_state();
    const ComplexMatrix ref = oracle::rk4(oracle::direct_lindblad(L), rho0, 100.0, 20000);
    CHECK(max_abs_diff(propagate(L, DensityMatrix(rho0), 100.0).matrix(), ref) < 1e-7);
}

TEST_CASE("propagation preserves trace, Hermiticity and positivity") {
    const Liouvillian L = charging_liouvillian();
    for (double t : {0.0, 0.5, 10.0, 1e3, 1e5}) {
        const DensityMatrix rho = propagate(L, DensityMatrix(oracle::random_state()), t);
        CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
        CHECK(hermiticity_error(rho.matrix()) < 1e-15);
        CHECK(eig_hermitian(rho.matrix()).values.front() > -1e-12);
    }
    const ComplexMatrix rho0 = oracle::random_state();
    CHECK(max_abs_diff(propagate(L, DensityMatrix(rho0), 0.0).matrix(), rho0) < 1e-15);
}

TEST_CASE("semigroup property") {
    const Liouvillian L = charging_liouvillian();
    const DensityMatrix rho0(oracle::random_state());
    for (auto [s, t] : {std::pair{1.0, 2.5}, std::pair{40.0, 160.0}, std::pair{700.0, 3300.0}}) {
        const DensityMatrix once = propagate(L, rho0, s + t);
        const DensityMatrix twice = propagate(L, propagate(L, rho0, s), t);
        CHECK(max_abs_diff(once.matrix(), twice.matrix()) < 1e-10);
    }
    const Propagator p(L, 12.0);
    CHECK(p.time() == 12.0);
    CHECK(max_abs_diff(p.apply(rho0).matrix(), propagate(L, rho0, 12.0).matrix()) < 1e-15);
    CHECK(throws_code([&] { propagate(L, rho0, -1.0); }, ErrorCode::NegativeTime));
    CHECK(throws_code([&] { Propagator(L, -1e-3); }, ErrorCode::NegativeTime));
}

TEST_CASE("energy-diagonal states stay diagonal") {
    const Liouvillian L = charging_liouvillian();
    for (double t : {1.0, 100.0, 1e4}) CHECK(propagate(L, random_diagonal_state(), t).max_coherence() < 1e-14);
}

TEST_CASE("NESS is unique, stationary and reached at long times") {
    const Liouvillian L = charging_liouvillian();
    CHECK(nullspace(L.superoperator, 1e-10).size() == 1);
    const DensityMatrix ness = solve_ness(L);
    CHECK(std::abs(ness.matrix().trace() - 1.0) < 1e-14);
    CHECK(ness.max_coherence() < 1e-12);
    const ComplexVector drift = L.superoperator * std::span<const Complex>(vectorize(ness.matrix()));
    CHECK(vector_norm(drift) < 1e-15);

    const DensityMatrix late = propagate(L, DensityMatrix(oracle::random_state()), 1e5);
    CHECK(trace_distance(late.matrix(), ness.matrix()) < 1e-8);

    const auto d = oracle::transition_derivative(ness.populations(), L.rates);
    for (double x : d) CHECK(std::abs(x) < 1e-15);
}

TEST_CASE("equal temperatures give a Gibbs-like NESS") {
    for (double T : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const Liouvillian L = build_liouvillian(kParams, rates_from_temperatures(1e-3, 4e-3, T, T, 1.0));
        const Populations r = solve_ness(L).populations();
        const double x = std::exp(-1.0 / T);
        const double z = 1 + 2 * x + x * x;
        CHECK(std::abs(r.r_gg - 1 / z) < 1e-10);
        CHECK(std::abs(r.r_S - x / z) < 1e-10);
        CHECK(std::abs(r.r_A - x / z) < 1e-10);
        CHECK(std::abs(r.r_ee - x * x / z) < 1e-10);
    }
}

TEST_CASE("zero excitation rates relax to the ground state") {
    const Liouvillian L = build_liouvillian(kParams, BathRates::raw(0.0, 1e-3, 0.0, 2e-3));
    CHECK(solve_ness(L).populations().r_gg == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate matrix matches the transition list") {
    const BathRates g = BathRates::raw(1.0, 2.0, 3.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Populations r = Populations::from_array(oracle::random_probabilities());
        const auto lib = population_derivative(r, g);
        const auto ref = oracle::transition_derivative(r, g);
        for (std::size_t i = 0; i < 4; ++i) CHECK(lib[i] == doctest::Approx(ref[i]).epsilon(1e-14));
    }
    const auto m = rate_matrix(g);
    for (std::size_t from = 0; from < 4; ++from) {
        double column = 0.0;
        for (std::size_t to = 0; to < 4; ++to) column += m[to][from];
        CHECK(std::abs(column) < 1e-14);
    }
}

TEST_CASE("rate equations match full propagation on diagonal states") {
    const Liouvillian L = charging_liouvillian();
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho0 = random_diagonal_state();
        for (double t : {1.0, 1e2, 1e4}) {
            const auto full = propagate(L, rho0, t).populations().as_array();
            const auto rate = rate_equation_propagate(rho0.populations(), L.rates, t).as_array();
            for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(full[i] - rate[i]) < 1e-10);
        }
    }
    const auto ss = rate_equation_steady_state(L.rates).as_array();
    const auto ness = solve_ness(L).populations().as_array();
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(ss[i] - ness[i]) < 1e-12);
}

TEST_CASE("explicit hot current matches the superoperator form") {
    const Liouvillian L = charging_liouvillian();
    for (int trial = 0; trial < 1000; ++trial) {
        const DensityMatrix rho = random_diagonal_state();
        const double direct = heat_current(L, rho, Channel::A);
        const double expl =
            heat_current_explicit(rho.populations(), L.rates, kParams, oracle::transition_derivative(rho.populations(), L.rates));
        CHECK(std::abs(direct - expl) < 1e-12);
        CHECK(std::abs(direct - hot_current_from_matrix(L, rho.matrix())) < 1e-15);
    }
}

TEST_CASE("NESS heat currents balance and follow the closed form") {
    const Liouvillian L = charging_liouvillian();
    const DensityMatrix ness = solve_ness(L);
    const double hot = heat_current(L, ness, Channel::A);
    const double cold = heat_current(L, ness, Channel::S);
    CHECK(hot > 0.0);
    CHECK(std::abs(hot + cold) < 1e-15);

    // Steady-state current solved by hand from the rate equations.
    const BathRates& g = L.rates;
    const double pA = g.gamma_plus_A, mA = g.gamma_minus_A, pS = g.gamma_plus_S, mS = g.gamma_minus_S;
    const double r_S = ness.populations().r_S;
    const double closed = 4 * kParams.omega0 * (mS * mS * pA * pA - mA * mA * pS * pS) * r_S /
                          (mA * mA * pS + mA * mS * pS + mS * pA * pA + mS * pA * pS);
    CHECK(hot == doctest::Approx(closed).epsilon(1e-12));

    const double printed = 4 * kParams.omega0 * g.gradient() / (pA + pS) * r_S;
    MESSAGE("NESS hot current " << hot << ", short closed form with (G+_A + G+_S) denominator gives " << printed
                                << " (relative difference " << (printed - hot) / hot << ")");
}

TEST_CASE("Simpson heat integral matches the exact block-exponential integral") {
    const Liouvillian L = charging_liouvillian();
    const ComplexMatrix rho0 = oracle::random_state();
    for (double tau : {0.05, 1.0, 150.0, 1e4}) {
        const ComplexMatrix integral = oracle::integrated_propagator(L.superoperator, tau);
        const ComplexVector v = integral * std::span<const Complex>(vectorize(rho0));
        const double hot = hot_current_from_matrix(L, devectorize(v));
        const ComplexVector cold_v = L.cold_part * std::span<const Complex>(v);
        const double cold = (devectorize(cold_v) * L.hamiltonian).trace().real();

        const HeatIntegral q = integrate_heats(L, DensityMatrix(rho0), tau);
        CHECK(std::abs(q.hot - hot) <= 1e-10 * std::abs(hot) + 1e-15);
        CHECK(std::abs(q.cold - cold) <= 1e-10 * std::abs(cold) + 1e-15);
        CHECK(q.panels >= 512);

        // First law over the stroke (the unitary part does no work).
        const ComplexMatrix h = L.hamiltonian;
        const double dE = DensityMatrix(propagate(L, DensityMatrix(rho0), tau)).energy(h) - DensityMatrix(rho0).energy(h);
        CHECK(std::abs(q.hot + q.cold - dE) < 1e-12);
        CHECK(integrate_heat(L, DensityMatrix(rho0), tau, Channel::A) == q.hot);
    }
    CHECK(throws_code([&] { integrate_heats(L, DensityMatrix(rho0), 0.0); }, ErrorCode::InvalidArgument));
    CHECK(throws_code([&] { integrate_heats(L, DensityMatrix(rho0), 1.0, 8); }, ErrorCode::InvalidArgument));
}

TEST_CASE("sampled trajectories") {
    const Liouvillian L = charging_liouvillian();
    const DensityMatrix rho0(oracle::random_state());
    const Trajectory tr = sample_trajectory(L, rho0, 200.0, 11);
    REQUIRE(tr.times.size() == 11);
    REQUIRE(tr.states.size() == 11);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 200.0);
    CHECK(tr.times[5] == doctest::Approx(100.0));
    CHECK(max_abs_diff(tr.states.front().matrix(), rho0.matrix()) == 0.0);
    CHECK(max_abs_diff(tr.states[5].matrix(), propagate(L, rho0, 100.0).matrix()) < 1e-12);
    CHECK(max_abs_diff(tr.states.back().matrix(), propagate(L, rho0, 200.0).matrix()) < 1e-12);
    CHECK(throws_code([&] { sample_trajectory(L, rho0, 1.0, 1); }, ErrorCode::InvalidArgument));
}
