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

#include "ness_battery/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

constexpr double kMaxBoltzmannExponent = 700.0;

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

} // namespace

std::string_view to_string(Level l) noexcept {
    switch (l) {
    case Level::gg: return "gg";
    case Level::S: return "S";
    case Level::A: return "A";
    case Level::ee: return "ee";
    }
    return "?";
}

ModelParams ModelParams::make(double omega0, double lambda) {
    if (!std::isfinite(omega0) || omega0 <= 0.0) {
        throw Error(ErrorCode::InvalidModel, "omega0 must be positive and finite");
    }
    if (!std::isfinite(lambda) || lambda < 0.0 || lambda >= omega0) {
        throw Error(ErrorCode::InvalidModel, "lambda must satisfy 0 <= lambda < omega0");
    }
    return ModelParams{omega0, lambda};
}

std::array<EnergyLevel, 4> energy_levels(const ModelParams& params) {
    const double w = params.omega0;
    const double l = params.lambda;
    return {{{Level::gg, 0.0}, {Level::S, w - l}, {Level::A, w + l}, {Level::ee, 2.0 * w}}};
}

ComplexMatrix build_hamiltonian(const ModelParams& params) {
    const auto levels = energy_levels(params);
    const std::array<double, 4> e{levels[0].energy, levels[1].energy, levels[2].energy, levels[3].energy};
    return ComplexMatrix::diagonal(e);
}

namespace pauli {

ComplexMatrix x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix y() { return ComplexMatrix(2, 2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}); }
// Basis (|g>, |e>).
ComplexMatrix z() { return ComplexMatrix(2, 2, {-1.0, 0.0, 0.0, 1.0}); }
ComplexMatrix raising() { return ComplexMatrix(2, 2, {0.0, 0.0, 1.0, 0.0}); }
ComplexMatrix lowering() { return ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0}); }

ComplexMatrix on_qubit(int qubit, const ComplexMatrix& op) {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    if (qubit == 1) return kron(op, id);
    if (qubit == 2) return kron(id, op);
    throw Error(ErrorCode::InvalidArgument, "qubit index must be 1 or 2");
}

} // namespace pauli

ComplexMatrix build_hamiltonian_product_basis(const ModelParams& params) {
    using namespace pauli;
    const ComplexMatrix sp1 = on_qubit(1, raising());
    const ComplexMatrix sm1 = on_qubit(1, lowering());
    const ComplexMatrix sp2 = on_qubit(2, raising());
    const ComplexMatrix sm2 = on_qubit(2, lowering());
    const ComplexMatrix hop = sp1 * sm2;
    return Complex(params.omega0) * (sp1 * sm1 + sp2 * sm2) - Complex(params.lambda) * (hop + hop.adjoint());
}

ComplexMatrix energy_basis_change() {
    const double r = 1.0 / std::sqrt(2.0);
    // rows: |gg>, |ge>, |eg>, |ee>; columns: gg, S, A, ee
    return ComplexMatrix(4, 4,
                         {1.0, 0.0, 0.0, 0.0,  //
                          0.0, r, r, 0.0,      //
                          0.0, r, -r, 0.0,     //
                          0.0, 0.0, 0.0, 1.0});
}

ComplexMatrix to_energy_basis(const ComplexMatrix& product_operator) {
    const ComplexMatrix v = energy_basis_change();
    return v.adjoint() * product_operator * v;
}

JumpOperatorSet build_jump_operators() {
    using namespace pauli;
    const ComplexMatrix sp1 = on_qubit(1, raising());
    const ComplexMatrix sp2 = on_qubit(2, raising());
    JumpOperatorSet ops;
    ops.S_plus = to_energy_basis(sp1 + sp2);
    ops.A_plus = to_energy_basis(sp1 - sp2);
    ops.S_minus = ops.S_plus.adjoint();
    ops.A_minus = ops.A_plus.adjoint();
    return ops;
}

BathRates BathRates::raw(double gamma_plus_A, double gamma_minus_A, double gamma_plus_S, double gamma_minus_S) {
    if (!finite_nonnegative(gamma_plus_A) || !finite_nonnegative(gamma_minus_A) ||
        !finite_nonnegative(gamma_plus_S) || !finite_nonnegative(gamma_minus_S)) {
        throw Error(ErrorCode::InvalidRates, "rates must be finite and non-negative");
    }
    return BathRates{gamma_plus_A, gamma_minus_A, gamma_plus_S, gamma_minus_S, RawProvenance{}};
}

double bose_occupation(double omega0, double T) {
    if (!(T > 0.0)) {
        throw Error(ErrorCode::NonPositiveTemperature, "temperature must be positive");
    }
    const double x = omega0 / T;
    if (x >= kMaxBoltzmannExponent) return 0.0;
    return 1.0 / std::expm1(x);
}

BathRates rates_from_temperatures(double gamma0_A, double gamma0_S, double T_A, double T_S, double omega0) {
    if (!finite_nonnegative(gamma0_A) || !finite_nonnegative(gamma0_S)) {
        throw Error(ErrorCode::InvalidRates, "bare rates gamma0 must be finite and non-negative");
    }
    if (!(T_A > 0.0) || !(T_S > 0.0) || !std::isfinite(T_A) || !std::isfinite(T_S)) {
        throw Error(ErrorCode::NonPositiveTemperature, "bath temperatures must be positive and finite");
    }
    const double n_A = bose_occupation(omega0, T_A);
    const double n_S = bose_occupation(omega0, T_S);
    BathRates rates;
    rates.gamma_plus_A = gamma0_A * n_A;
    rates.gamma_minus_A = gamma0_A * (n_A + 1.0);
    rates.gamma_plus_S = gamma0_S * n_S;
    rates.gamma_minus_S = gamma0_S * (n_S + 1.0);
    rates.provenance = TemperatureProvenance{gamma0_A, gamma0_S, T_A, T_S};
    return rates;
}

BathRates rates_from_optics(double p, double gamma, double Gamma, double omega0) {
    if (!finite_nonnegative(p) || !finite_nonnegative(gamma) || !finite_nonnegative(Gamma)) {
        throw Error(ErrorCode::InvalidOpticsRates, "p, gamma, Gamma must be finite and non-negative");
    }
    if (p >= gamma) {
        throw Error(ErrorCode::InvalidOpticsRates, "pumping must be weaker than decay (p < gamma)");
    }
    BathRates rates;
    rates.gamma_plus_A = 0.5 * p;
    rates.gamma_plus_S = 0.5 * p;
    rates.gamma_minus_A = 0.5 * gamma;
    rates.gamma_minus_S = 0.5 * gamma + Gamma;
    const double T_A = p > 0.0 ? omega0 / std::log(gamma / p) : 0.0;
    const double T_S = p > 0.0 ? omega0 / std::log((2.0 * Gamma + gamma) / p) : 0.0;
    rates.provenance = OpticsProvenance{p, gamma, Gamma, T_A, T_S};
    return rates;
}

double effective_inverse_temperature(double gamma_plus, double gamma_minus, double omega0) {
    if (!(gamma_plus > 0.0) || !(gamma_minus > 0.0)) {
        throw Error(ErrorCode::ZeroRate, "effective temperature needs strictly positive rates");
    }
    return std::log(gamma_minus / gamma_plus) / omega0;
}

} // namespace ness_battery
