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

#include "ness_battery/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

constexpr double kStateTolerance = 1e-10;
constexpr double kSteadyStateTolerance = 1e-10;
constexpr int kMaxSimpsonPanels = 1 << 20;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return Complex(0.5) * (m + m.adjoint()); }

void require_nonnegative_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::NegativeTime, "time must be finite and non-negative, got " + std::to_string(t));
    }
}

// Row functional w with w . vec(rho) = Tr[L_c(rho) H].
ComplexVector heat_functional(const Liouvillian& L, Channel c) {
    const ComplexVector h = vectorize(L.hamiltonian.transpose());
    const ComplexMatrix& part = L.channel_part(c);
    ComplexVector w(16);
    for (std::size_t k = 0; k < 16; ++k) {
        Complex sum{0.0, 0.0};
        for (std::size_t i = 0; i < 16; ++i) sum += h[i] * part(i, k);
        w[k] = sum;
    }
    return w;
}

double apply_functional(const ComplexVector& w, const ComplexVector& v) {
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < w.size(); ++k) sum += w[k] * v[k];
    return sum.real();
}

HeatIntegral simpson(const ComplexMatrix& super, const ComplexVector& w_hot, const ComplexVector& w_cold,
                     const ComplexVector& v0, double tau, int panels) {
    const double h = tau / panels;
    const ComplexMatrix step = expm(super * Complex(h));
    ComplexVector v = v0;
    double hot = apply_functional(w_hot, v);
    double cold = apply_functional(w_cold, v);
    for (int k = 1; k <= panels; ++k) {
        v = step * v;
        const double weight = (k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        hot += weight * apply_functional(w_hot, v);
        cold += weight * apply_functional(w_cold, v);
    }
    return {hot * h / 3.0, cold * h / 3.0, panels};
}

} // namespace

double Populations::operator[](Level l) const noexcept {
    switch (l) {
    case Level::gg: return r_gg;
    case Level::S: return r_S;
    case Level::A: return r_A;
    case Level::ee: return r_ee;
    }
    return 0.0;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) {
        throw Error(ErrorCode::InvalidDensityMatrix, "density matrix must be 4x4");
    }
    if (hermiticity_error(m) > kStateTolerance) {
        throw Error(ErrorCode::InvalidDensityMatrix, "density matrix is not Hermitian");
    }
    m_ = hermitian_part(m);
    if (std::abs(m_.trace() - 1.0) > kStateTolerance) {
        throw Error(ErrorCode::InvalidDensityMatrix, "density matrix trace differs from 1");
    }
    if (eig_hermitian(m_).values.front() < -kStateTolerance) {
        throw Error(ErrorCode::InvalidDensityMatrix, "density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::from_populations(const Populations& pops) {
    const auto r = pops.as_array();
    return DensityMatrix(ComplexMatrix::diagonal(std::span<const double>(r)));
}

DensityMatrix DensityMatrix::basis_state(Level l) {
    ComplexMatrix m(4, 4);
    m(index(l), index(l)) = 1.0;
    return DensityMatrix(m);
}

Populations DensityMatrix::populations() const noexcept {
    return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real(), m_(3, 3).real()};
}

double DensityMatrix::energy(const ComplexMatrix& hamiltonian) const { return (m_ * hamiltonian).trace().real(); }

double DensityMatrix::max_coherence() const noexcept {
    double worst = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            if (r != c) worst = std::max(worst, std::abs(m_(r, c)));
    return worst;
}

ComplexMatrix dissipator_superoperator(const ComplexMatrix& jump, double rate) {
    const ComplexMatrix id = ComplexMatrix::identity(jump.rows());
    const ComplexMatrix jdj = jump.adjoint() * jump;
    ComplexMatrix conj_jump = jump.adjoint().transpose();
    ComplexMatrix d = kron(conj_jump, jump);
    d -= Complex(0.5) * kron(id, jdj);
    d -= Complex(0.5) * kron(jdj.transpose(), id);
    return Complex(rate) * d;
}

ComplexMatrix commutator_superoperator(const ComplexMatrix& hamiltonian) {
    const ComplexMatrix id = ComplexMatrix::identity(hamiltonian.rows());
    return Complex(0.0, -1.0) * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
}

Liouvillian build_liouvillian(const ModelParams& params, const BathRates& rates) {
    const JumpOperatorSet ops = build_jump_operators();
    Liouvillian L;
    L.params = params;
    L.rates = rates;
    L.hamiltonian = build_hamiltonian(params);
    L.unitary_part = commutator_superoperator(L.hamiltonian);
    L.hot_part = dissipator_superoperator(ops.A_plus, rates.gamma_plus_A) +
                 dissipator_superoperator(ops.A_minus, rates.gamma_minus_A);
    L.cold_part = dissipator_superoperator(ops.S_plus, rates.gamma_plus_S) +
                  dissipator_superoperator(ops.S_minus, rates.gamma_minus_S);
    L.superoperator = L.unitary_part + L.hot_part + L.cold_part;
    return L;
}

Propagator::Propagator(const Liouvillian& L, double t) : t_(t) {
    require_nonnegative_time(t);
    map_ = t == 0.0 ? ComplexMatrix::identity(16) : expm(L.superoperator * Complex(t));
}

DensityMatrix Propagator::apply(const DensityMatrix& rho) const {
    if (t_ == 0.0) return rho;
    ComplexMatrix out = hermitian_part(devectorize(map_ * vectorize(rho.matrix())));
    // Repeated squaring in expm leaves ~1e-12 trace drift at long times; the
    // generator itself is exactly trace preserving.
    out *= 1.0 / out.trace().real();
    return DensityMatrix::assume_valid(std::move(out));
}

DensityMatrix propagate(const Liouvillian& L, const DensityMatrix& rho0, double t) {
    return Propagator(L, t).apply(rho0);
}

DensityMatrix solve_ness(const Liouvillian& L) {
    const auto kernel = nullspace(L.superoperator, kSteadyStateTolerance);
    if (kernel.size() != 1) {
        throw Error(ErrorCode::DegenerateSteadyState,
                    "Liouvillian kernel has dimension " + std::to_string(kernel.size()) + ", expected 1");
    }
    ComplexMatrix rho = devectorize(kernel.front());
    rho *= 1.0 / rho.trace();
    return DensityMatrix(hermitian_part(rho));
}

double heat_current(const Liouvillian& L, const DensityMatrix& rho, Channel c) {
    const ComplexMatrix drho = devectorize(L.channel_part(c) * vectorize(rho.matrix()));
    const Complex q = (drho * L.hamiltonian).trace();
    assert(std::abs(q.imag()) <= 1e-12);
    return q.real();
}

double heat_current_explicit(const Populations& pops, const BathRates& rates, const ModelParams& params,
                             const std::array<double, 4>& pops_derivative) {
    const double w = params.omega0;
    return 4.0 * w * (rates.gamma_plus_A * pops.r_A - rates.gamma_minus_A * pops.r_ee) +
           (w + params.lambda) * pops_derivative[index(Level::A)];
}

HeatIntegral integrate_heats(const Liouvillian& L, const DensityMatrix& rho0, double tau, int steps) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidArgument, "heat integration needs a positive duration");
    }
    if (steps < 16) {
        throw Error(ErrorCode::InvalidArgument, "heat integration needs at least 16 panels");
    }
    int panels = steps + (steps % 2);
    const ComplexVector w_hot = heat_functional(L, Channel::A);
    const ComplexVector w_cold = heat_functional(L, Channel::S);
    const ComplexVector v0 = vectorize(rho0.matrix());

    HeatIntegral prev = simpson(L.superoperator, w_hot, w_cold, v0, tau, panels);
    while (panels < kMaxSimpsonPanels) {
        panels *= 2;
        const HeatIntegral cur = simpson(L.superoperator, w_hot, w_cold, v0, tau, panels);
        const double scale = std::max(std::abs(cur.hot), std::abs(cur.cold));
        const double tol = 1e-11 * scale + 1e-18;
        if (std::abs(cur.hot - prev.hot) <= tol && std::abs(cur.cold - prev.cold) <= tol) return cur;
        prev = cur;
    }
    return prev;
}

double integrate_heat(const Liouvillian& L, const DensityMatrix& rho0, double tau, Channel c, int steps) {
    const HeatIntegral q = integrate_heats(L, rho0, tau, steps);
    return c == Channel::A ? q.hot : q.cold;
}

std::array<std::array<double, 4>, 4> rate_matrix(const BathRates& rates) {
    std::array<std::array<double, 4>, 4> m{};
    const auto link = [&m](Level from, Level to, double rate) {
        m[index(to)][index(from)] += rate;
        m[index(from)][index(from)] -= rate;
    };
    link(Level::gg, Level::S, 2.0 * rates.gamma_plus_S);
    link(Level::S, Level::gg, 2.0 * rates.gamma_minus_S);
    link(Level::S, Level::ee, 2.0 * rates.gamma_plus_S);
    link(Level::ee, Level::S, 2.0 * rates.gamma_minus_S);
    link(Level::gg, Level::A, 2.0 * rates.gamma_plus_A);
    link(Level::A, Level::gg, 2.0 * rates.gamma_minus_A);
    link(Level::A, Level::ee, 2.0 * rates.gamma_plus_A);
    link(Level::ee, Level::A, 2.0 * rates.gamma_minus_A);
    return m;
}

std::array<double, 4> population_derivative(const Populations& pops, const BathRates& rates) {
    const auto m = rate_matrix(rates);
    const auto r = pops.as_array();
    std::array<double, 4> d{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) d[i] += m[i][j] * r[j];
    return d;
}

Populations rate_equation_propagate(const Populations& pops, const BathRates& rates, double t) {
    require_nonnegative_time(t);
    if (t == 0.0) return pops;
    const auto m = rate_matrix(rates);
    ComplexMatrix generator(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) generator(i, j) = m[i][j] * t;
    const ComplexMatrix map = expm(generator);
    const auto r = pops.as_array();
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i] += map(i, j).real() * r[j];
    return Populations::from_array(out);
}

Populations rate_equation_steady_state(const BathRates& rates) {
    const auto m = rate_matrix(rates);
    ComplexMatrix generator(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) generator(i, j) = m[i][j];
    const auto kernel = nullspace(generator, kSteadyStateTolerance);
    if (kernel.size() != 1) {
        throw Error(ErrorCode::DegenerateSteadyState, "rate matrix kernel is not one-dimensional");
    }
    Complex sum{0.0, 0.0};
    for (const Complex& z : kernel.front()) sum += z;
    std::array<double, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) r[i] = (kernel.front()[i] / sum).real();
    return Populations::from_array(r);
}

Trajectory sample_trajectory(const Liouvillian& L, const DensityMatrix& rho0, double duration, int samples) {
    require_nonnegative_time(duration);
    if (samples < 2) {
        throw Error(ErrorCode::InvalidArgument, "a trajectory needs at least two samples");
    }
    const double dt = duration / (samples - 1);
    const Propagator step(L, dt);
    Trajectory traj;
    traj.times.reserve(samples);
    traj.states.reserve(samples);
    DensityMatrix rho = rho0;
    for (int k = 0; k < samples; ++k) {
        traj.times.push_back(k * dt);
        traj.states.push_back(rho);
        if (k + 1 < samples) rho = step.apply(rho);
    }
    return traj;
}

} // namespace ness_battery
