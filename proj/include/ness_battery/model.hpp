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

// model.hpp - the two-qubit battery: Hamiltonian, energy eigenbasis,
// collective jump operators and bath rates.
//
// Units: hbar = k_B = 1 and omega0 sets the energy scale (omega0 = 1 in every
// preset); times are in units of 1/omega0.
//
// Energy-basis ordering is (gg, S, A, ee) everywhere. Product-basis ordering
// is (|gg>, |ge>, |eg>, |ee>) with the first letter labelling qubit 1, and
// sigma_+ = |e><g| on each qubit.

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <variant>

#include "ness_battery/linalg.hpp"

namespace ness_battery {

enum class Level : std::size_t { gg = 0, S = 1, A = 2, ee = 3 };

constexpr std::size_t index(Level l) noexcept { return static_cast<std::size_t>(l); }
std::string_view to_string(Level l) noexcept;

struct ModelParams {
    double omega0 = 1.0;
    double lambda = 0.0;

    // Throws InvalidModel unless omega0 > 0 and 0 <= lambda < omega0.
    // lambda = 0 is accepted here; the engine rejects it separately.
    static ModelParams make(double omega0, double lambda);

    // The rates are only valid for lambda << omega0; callers warn above 0.1.
    bool outside_weak_coupling() const noexcept { return lambda > 0.1 * omega0; }
};

struct EnergyLevel {
    Level label;
    double energy;
};

std::array<EnergyLevel, 4> energy_levels(const ModelParams& params);

// diag(0, w0 - l, w0 + l, 2 w0) in the energy basis.
ComplexMatrix build_hamiltonian(const ModelParams& params);

// w0 (n1 + n2) - l (s+1 s-2 + h.c.) assembled from Pauli operators.
ComplexMatrix build_hamiltonian_product_basis(const ModelParams& params);

// Columns are |gg>, |S>, |A>, |ee> expressed in the product basis, so that
// O_energy = V^dagger O_product V.
ComplexMatrix energy_basis_change();

ComplexMatrix to_energy_basis(const ComplexMatrix& product_operator);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z(); // +1 on |e>, -1 on |g>
ComplexMatrix raising(); // |e><g|
ComplexMatrix lowering();
// Single-qubit operator acting on qubit 1 or 2 of the pair.
ComplexMatrix on_qubit(int qubit, const ComplexMatrix& op);
} // namespace pauli

// Collective ladder operators in the energy basis:
// S^dagger = s+^(1) + s+^(2), A^dagger = s+^(1) - s+^(2).
struct JumpOperatorSet {
    ComplexMatrix S_plus;
    ComplexMatrix S_minus;
    ComplexMatrix A_plus;
    ComplexMatrix A_minus;
};

JumpOperatorSet build_jump_operators();

struct TemperatureProvenance {
    double gamma0_A;
    double gamma0_S;
    double T_A;
    double T_S;
};

struct OpticsProvenance {
    double p;
    double gamma;
    double Gamma;
    double T_A; // omega0 / ln(gamma / p)
    double T_S; // omega0 / ln((2 Gamma + gamma) / p), +inf when Gamma = 0 and p = gamma
};

struct RawProvenance {};

using RateProvenance = std::variant<TemperatureProvenance, OpticsProvenance, RawProvenance>;

struct BathRates {
    double gamma_plus_A = 0.0;
    double gamma_minus_A = 0.0;
    double gamma_plus_S = 0.0;
    double gamma_minus_S = 0.0;
    RateProvenance provenance = RawProvenance{};

    // Throws InvalidRates on negative or non-finite rates.
    static BathRates raw(double gamma_plus_A, double gamma_minus_A, double gamma_plus_S, double gamma_minus_S);

    double total() const noexcept { return gamma_plus_A + gamma_minus_A + gamma_plus_S + gamma_minus_S; }
    // G+_A G-_S - G-_A G+_S; positive when channel A is effectively hotter.
    double gradient() const noexcept { return gamma_plus_A * gamma_minus_S - gamma_minus_A * gamma_plus_S; }
};

// Bose-Einstein occupation 1/(e^{omega0/T} - 1).
double bose_occupation(double omega0, double T);

// G+ = G0 n, G- = G0 (n + 1). For omega0/T >= 700 the T -> 0+ limit
// (G+ = 0, G- = G0) is returned.
BathRates rates_from_temperatures(double gamma0_A, double gamma0_S, double T_A, double T_S, double omega0);

// Incoherent pumping p, individual decay gamma and collective decay Gamma:
// G+_S = G+_A = p/2, G-_A = gamma/2, G-_S = gamma/2 + Gamma.
BathRates rates_from_optics(double p, double gamma, double Gamma, double omega0);

// beta = ln(G- / G+) / omega0. Throws ZeroRate if either rate is not positive.
double effective_inverse_temperature(double gamma_plus, double gamma_minus, double omega0);

} // namespace ness_battery
