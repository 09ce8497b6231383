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

// dynamics.hpp - Liouvillian construction, propagation, steady state and
// heat currents for the two-qubit battery.

#pragma once

#include <array>
#include <vector>

#include "ness_battery/linalg.hpp"
#include "ness_battery/model.hpp"

namespace ness_battery {

struct Populations {
    double r_gg = 0.0;
    double r_S = 0.0;
    double r_A = 0.0;
    double r_ee = 0.0;

    double operator[](Level l) const noexcept;
    std::array<double, 4> as_array() const noexcept { return {r_gg, r_S, r_A, r_ee}; }
    static Populations from_array(const std::array<double, 4>& r) noexcept { return {r[0], r[1], r[2], r[3]}; }
    double sum() const noexcept { return r_gg + r_S + r_A + r_ee; }
    // r_gg > r_A > r_S > r_ee: the inverted ordering that makes the state active.
    bool inverted_ordering() const noexcept { return r_gg > r_A && r_A > r_S && r_S > r_ee; }
};

// 4x4 battery state in the energy basis. Construction checks Hermiticity,
// unit trace (both to 1e-10) and eigenvalues >= -1e-10, then stores the
// Hermitian part.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    static DensityMatrix from_populations(const Populations& pops);
    // Skips the checks; for states produced by maps already known to preserve
    // them (propagation, unitary conjugation) on hot paths.
    static DensityMatrix assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m), Unchecked{}); }
    static DensityMatrix basis_state(Level l);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Populations populations() const noexcept;
    double energy(const ComplexMatrix& hamiltonian) const;
    // Largest off-diagonal magnitude.
    double max_coherence() const noexcept;

private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

// Dissipation channel: A acts on the antisymmetric transitions (coupled to
// the T_A bath, the nominal hot source), S on the symmetric ones.
enum class Channel { A, S };

struct Liouvillian {
    ModelParams params;
    BathRates rates;
    ComplexMatrix hamiltonian;   // energy basis
    ComplexMatrix unitary_part;  // -i[H, .]
    ComplexMatrix hot_part;      // L_A, channel A
    ComplexMatrix cold_part;     // L_S, channel S
    ComplexMatrix superoperator; // unitary + hot + cold

    const ComplexMatrix& channel_part(Channel c) const noexcept { return c == Channel::A ? hot_part : cold_part; }
};

// gamma (J rho J^dagger - 1/2 {J^dagger J, rho}) as a 16x16 superoperator.
ComplexMatrix dissipator_superoperator(const ComplexMatrix& jump, double rate);
ComplexMatrix commutator_superoperator(const ComplexMatrix& hamiltonian);

Liouvillian build_liouvillian(const ModelParams& params, const BathRates& rates);

// exp(L t) for a fixed t, reusable across many states.
class Propagator {
public:
    Propagator(const Liouvillian& L, double t);

    DensityMatrix apply(const DensityMatrix& rho) const;
    double time() const noexcept { return t_; }

private:
    double t_;
    ComplexMatrix map_;
};

DensityMatrix propagate(const Liouvillian& L, const DensityMatrix& rho0, double t);

// Throws DegenerateSteadyState unless the kernel of L is one-dimensional at
// relative tolerance 1e-10.
DensityMatrix solve_ness(const Liouvillian& L);

// Tr[L_c(rho) H], energy per unit time absorbed from channel c.
double heat_current(const Liouvillian& L, const DensityMatrix& rho, Channel c);

// 4 w0 (G+_A r_A - G-_A r_ee) + (w0 + l) dr_A/dt, valid on the diagonal sector.
double heat_current_explicit(const Populations& pops, const BathRates& rates, const ModelParams& params,
                             const std::array<double, 4>& pops_derivative);

struct HeatIntegral {
    double hot = 0.0;
    double cold = 0.0;
    int panels = 0; // Simpson panels actually used
};

// Composite Simpson along the exact trajectory. Starts from `steps` panels
// and doubles until successive estimates agree to ~1e-11 relative (Richardson
// check), capped at 2^20 panels.
double integrate_heat(const Liouvillian& L, const DensityMatrix& rho0, double tau, Channel c, int steps = 512);
HeatIntegral integrate_heats(const Liouvillian& L, const DensityMatrix& rho0, double tau, int steps = 512);

// Pauli rate matrix on (gg, S, A, ee): transitions through the S channel at
// 2 G+-_S and through the A channel at 2 G+-_A (collective sqrt(2) elements).
std::array<std::array<double, 4>, 4> rate_matrix(const BathRates& rates);
std::array<double, 4> population_derivative(const Populations& pops, const BathRates& rates);
Populations rate_equation_propagate(const Populations& pops, const BathRates& rates, double t);
Populations rate_equation_steady_state(const BathRates& rates);

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

// `samples` uniformly spaced points on [0, duration], both ends included.
Trajectory sample_trajectory(const Liouvillian& L, const DensityMatrix& rho0, double duration, int samples);

} // namespace ness_battery
